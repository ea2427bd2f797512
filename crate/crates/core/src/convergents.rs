//! Convergents A_n/B_n, the determinant identity, and empirical
//! classification of the real limit of an expansion.
//!
//! Convergents are carried as integers: with a_i = u_i/w_i and
//! W_n = w_0⋯w_n, the scaled values Â_n = W_n·A_n and B̂_n = W_n·B_n obey
//!
//!   Â_n = u_n·Â_{n−1} + w_n·w_{n−1}·Â_{n−2}
//!
//! (and the same for B̂), so the recursion never needs a gcd and
//! A_n/B_n = Â_n/B̂_n.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::decimal::{pow10, round_significant, scientific, truncate_ratio};
use crate::error::{CfError, Result};
use crate::field::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentPair {
    pub index: usize,
    scaled_a: BigInt,
    scaled_b: BigInt,
    scale: BigInt,
}

impl ConvergentPair {
    /// A_n in lowest terms.
    pub fn a(&self) -> Rational {
        Rational::new(self.scaled_a.clone(), self.scale.clone())
    }

    /// B_n in lowest terms.
    pub fn b(&self) -> Rational {
        Rational::new(self.scaled_b.clone(), self.scale.clone())
    }

    pub fn b_is_zero(&self) -> bool {
        self.scaled_b.is_zero()
    }

    /// A_n/B_n, or `None` when B_n = 0.
    pub fn value(&self) -> Option<Rational> {
        (!self.scaled_b.is_zero())
            .then(|| Rational::new(self.scaled_a.clone(), self.scaled_b.clone()))
    }

    /// A_n/B_n truncated toward zero to `frac_digits` fractional digits.
    pub fn truncated(&self, frac_digits: u32) -> Option<String> {
        (!self.scaled_b.is_zero())
            .then(|| truncate_ratio(&self.scaled_a, &self.scaled_b, frac_digits))
    }

    /// (A_n/B_n)² rounded to `digits` significant digits.
    pub fn squared_value(&self) -> Option<Rational> {
        self.value().map(|v| &v * &v)
    }

    #[cfg(test)]
    pub(crate) fn perturb_a(&mut self) {
        self.scaled_a += &self.scale;
    }
}

/// Lazily generated convergents of a list of partial quotients.
pub struct Convergents<'a> {
    quotients: std::slice::Iter<'a, Rational>,
    index: usize,
    // (Â_{n−1}, B̂_{n−1}, W_{n−1}, w_{n−1}) and (Â_{n−2}, B̂_{n−2})
    a1: BigInt,
    b1: BigInt,
    scale1: BigInt,
    den1: BigInt,
    a2: BigInt,
    b2: BigInt,
}

impl<'a> Convergents<'a> {
    pub fn new(quotients: &'a [Rational]) -> Self {
        Convergents {
            quotients: quotients.iter(),
            index: 0,
            a1: BigInt::one(),
            b1: BigInt::zero(),
            scale1: BigInt::one(),
            den1: BigInt::one(),
            a2: BigInt::zero(),
            b2: BigInt::one(),
        }
    }
}

impl Iterator for Convergents<'_> {
    type Item = ConvergentPair;

    fn next(&mut self) -> Option<ConvergentPair> {
        let q = self.quotients.next()?;
        let (u, w) = (q.numer(), q.denom());
        let cross = w * &self.den1;
        let a = u * &self.a1 + &cross * &self.a2;
        let b = u * &self.b1 + &cross * &self.b2;
        let scale = &self.scale1 * w;
        self.a2 = std::mem::replace(&mut self.a1, a.clone());
        self.b2 = std::mem::replace(&mut self.b1, b.clone());
        self.scale1 = scale.clone();
        self.den1 = w.clone();
        let pair = ConvergentPair {
            index: self.index,
            scaled_a: a,
            scaled_b: b,
            scale,
        };
        self.index += 1;
        Some(pair)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.quotients.size_hint()
    }
}

pub fn convergent_stream(quotients: &[Rational]) -> Vec<ConvergentPair> {
    Convergents::new(quotients).collect()
}

/// The n-th convergent alone.
pub fn convergent_at(quotients: &[Rational], n: usize) -> Option<ConvergentPair> {
    Convergents::new(quotients).nth(n)
}

fn determinant_holds(prev: &ConvergentPair, next: &ConvergentPair) -> bool {
    // A_n B_{n+1} − A_{n+1} B_n = (−1)^{n+1}, scaled by W_n W_{n+1}
    let lhs = &prev.scaled_a * &next.scaled_b - &next.scaled_a * &prev.scaled_b;
    let rhs = &prev.scale * &next.scale;
    if prev.index.is_multiple_of(2) {
        lhs == -rhs
    } else {
        lhs == rhs
    }
}

/// True iff A_nB_{n+1} − A_{n+1}B_n = (−1)^{n+1} at every consecutive pair.
pub fn determinant_check(pairs: &[ConvergentPair]) -> bool {
    pairs
        .windows(2)
        .all(|w| w[1].index == w[0].index + 1 && determinant_holds(&w[0], &w[1]))
}

/// Streaming form of [`determinant_check`]; returns the first failing index.
pub fn first_determinant_failure(quotients: &[Rational]) -> Option<usize> {
    let mut it = Convergents::new(quotients);
    let mut prev = it.next()?;
    for next in it {
        if !determinant_holds(&prev, &next) {
            return Some(prev.index);
        }
        prev = next;
    }
    None
}

/// |A_{n+1}/B_{n+1} − A_n/B_n| in lowest terms, checked against
/// 1/(|B_n||B_{n+1}|).
pub fn consecutive_gap(pairs: &[ConvergentPair], n: usize) -> Result<Rational> {
    let (cur, next) = neighbours(pairs, n)?;
    check_gap(cur, next)?;
    Ok(Rational::new(
        &cur.scale * &next.scale,
        (&cur.scaled_b * &next.scaled_b).abs(),
    ))
}

/// Checks the gap identity at `n` without reducing any fraction.
pub fn verify_gap(pairs: &[ConvergentPair], n: usize) -> Result<()> {
    let (cur, next) = neighbours(pairs, n)?;
    check_gap(cur, next)
}

fn neighbours(pairs: &[ConvergentPair], n: usize) -> Result<(&ConvergentPair, &ConvergentPair)> {
    match (pairs.get(n), pairs.get(n + 1)) {
        (Some(c), Some(x)) => Ok((c, x)),
        _ => Err(CfError::Domain(format!(
            "no convergents at {n} and {}",
            n + 1
        ))),
    }
}

fn check_gap(cur: &ConvergentPair, next: &ConvergentPair) -> Result<()> {
    if cur.b_is_zero() || next.b_is_zero() {
        let index = if cur.b_is_zero() {
            cur.index
        } else {
            next.index
        };
        return Err(CfError::ZeroDenominator { index });
    }
    // both sides share the denominator |B̂_n B̂_{n+1}|
    let numerator = (&next.scaled_a * &cur.scaled_b - &cur.scaled_a * &next.scaled_b).abs();
    let predicted = &cur.scale * &next.scale;
    if numerator != predicted {
        return Err(CfError::Invariant(format!(
            "gap numerator at {} is {numerator}, expected {predicted}",
            cur.index
        )));
    }
    Ok(())
}

/// 1/(|B_n||B_{n+1}|) rendered in scientific notation, without reducing.
fn gap_scientific(cur: &ConvergentPair, next: &ConvergentPair, digits: u32) -> Option<String> {
    if cur.b_is_zero() || next.b_is_zero() {
        return None;
    }
    let num = &cur.scale * &next.scale;
    let den = (&cur.scaled_b * &next.scaled_b).abs();
    Some(scientific(&num, &den, digits))
}

/// Significant digits of the reported limit estimate.
pub const ESTIMATE_DIGITS: u32 = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    ConvergesToPlusRoot,
    ConvergesToMinusRoot,
    ConvergesElsewhere,
    Undetermined,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::ConvergesToPlusRoot => "plus_root",
            Verdict::ConvergesToMinusRoot => "minus_root",
            Verdict::ConvergesElsewhere => "elsewhere",
            Verdict::Undetermined => "undetermined",
        }
    }

    pub fn converges_to_root(self) -> bool {
        matches!(
            self,
            Verdict::ConvergesToPlusRoot | Verdict::ConvergesToMinusRoot
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitParams {
    /// Significant digits the window must agree on.
    pub digits: u32,
    /// Number of trailing convergents in the window.
    pub window: usize,
    /// Relative distance to ±√D accepted as convergence to the root, as
    /// 10^(−root_tolerance_exp).
    pub root_tolerance_exp: u32,
}

impl Default for LimitParams {
    fn default() -> Self {
        LimitParams {
            digits: 12,
            window: 50,
            root_tolerance_exp: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealLimitReport {
    pub verdict: Verdict,
    /// Last convergent, rounded to [`ESTIMATE_DIGITS`] significant digits.
    pub limit_estimate: String,
    /// Earliest index from which every convergent agrees with the last one
    /// to the requested digits.
    pub stabilized_at: Option<usize>,
    pub gap_trace: Vec<(usize, String)>,
    pub zero_denominators: Vec<usize>,
    #[serde(skip)]
    pub limit: Option<Rational>,
}

/// x/y as f64 from the leading bits, or `None` when out of range.
fn approx_ratio(x: &BigInt, y: &BigInt) -> Option<f64> {
    let shift = x.bits().min(y.bits()).saturating_sub(64);
    let xf = (x >> shift).to_f64()?;
    let yf = (y >> shift).to_f64()?;
    let r = xf / yf;
    (r.is_finite() && r != 0.0).then_some(r)
}

/// |x/y − L| ≤ 10^{−digits}·|L| with L = ln/ld. Decided in floating point
/// when clearly on one side of the threshold, exactly otherwise.
fn agrees(
    x: &BigInt,
    y: &BigInt,
    ln: &BigInt,
    ld: &BigInt,
    limit: Option<f64>,
    digits: u32,
) -> bool {
    if let (Some(l), Some(v), true) = (limit, approx_ratio(x, y), digits <= 14) {
        let rel = ((v - l) / l).abs();
        let threshold = 10f64.powi(-(digits as i32));
        if rel < threshold * 0.999 {
            return true;
        }
        if rel > threshold * 1.001 {
            return false;
        }
    }
    agrees_exact(x, y, ln, ld, digits)
}

fn agrees_exact(x: &BigInt, y: &BigInt, ln: &BigInt, ld: &BigInt, digits: u32) -> bool {
    let diff = (x * ld - ln * y).abs() * pow10(digits);
    if ln.is_zero() {
        diff <= (y * ld).abs()
    } else {
        diff <= (ln * y).abs()
    }
}

/// Indices at which the gap trace is sampled: 1, 2, 5, 10, 20, 50, …
fn sample_indices(len: usize) -> Vec<usize> {
    let mut out = vec![];
    let mut base = 1usize;
    'outer: loop {
        for m in [1, 2, 5] {
            let n = base * m;
            if n + 1 >= len {
                break 'outer;
            }
            out.push(n);
        }
        base *= 10;
    }
    if len >= 2 && out.last() != Some(&(len - 2)) {
        out.push(len - 2);
    }
    out
}

/// Decides whether the convergents of `quotients` have visibly settled and,
/// if so, whether the limit is +√D, −√D, or neither.
pub fn classify_real_limit(
    quotients: &[Rational],
    d: u64,
    params: LimitParams,
) -> Result<RealLimitReport> {
    if quotients.is_empty() {
        return Err(CfError::Domain("no partial quotients".into()));
    }
    let samples = sample_indices(quotients.len());
    let mut gap_trace = vec![];
    let mut zero_denominators = vec![];
    let mut last: Option<ConvergentPair> = None;
    let mut prev: Option<ConvergentPair> = None;
    for pair in Convergents::new(quotients) {
        if pair.b_is_zero() {
            zero_denominators.push(pair.index);
        }
        if let Some(p) = prev.as_ref() {
            if samples.binary_search(&p.index).is_ok() {
                if let Some(g) = gap_scientific(p, &pair, 6) {
                    gap_trace.push((p.index, g));
                }
            }
        }
        if !pair.b_is_zero() {
            last = Some(pair.clone());
        }
        prev = Some(pair);
    }
    let Some(last) = last else {
        return Err(CfError::ZeroDenominator { index: 0 });
    };
    let (ln, ld) = (last.scaled_a.clone(), last.scaled_b.clone());

    // second pass: last index that disagrees with the final value
    let mut last_disagreement: Option<usize> = None;
    let limit_f64 = approx_ratio(&ln, &ld);
    for pair in Convergents::new(quotients) {
        if pair.b_is_zero() {
            continue;
        }
        if !agrees(
            &pair.scaled_a,
            &pair.scaled_b,
            &ln,
            &ld,
            limit_f64,
            params.digits,
        ) {
            last_disagreement = Some(pair.index);
        }
    }
    let stabilized_at = match last_disagreement {
        None => Some(0),
        Some(i) if i < last.index => Some(i + 1),
        Some(_) => None,
    };
    let n_last = last.index;
    let window_ok = matches!(stabilized_at, Some(s) if n_last + 1 >= params.window && s + params.window <= n_last + 1);

    let limit = Rational::new(ln.clone(), ld.clone());
    let verdict = if !window_ok {
        Verdict::Undetermined
    } else if near_root(&limit, d, params.root_tolerance_exp) {
        if limit.is_positive() {
            Verdict::ConvergesToPlusRoot
        } else {
            Verdict::ConvergesToMinusRoot
        }
    } else {
        Verdict::ConvergesElsewhere
    };
    Ok(RealLimitReport {
        verdict,
        limit_estimate: round_significant(&limit, ESTIMATE_DIGITS),
        stabilized_at: if window_ok { stabilized_at } else { None },
        gap_trace,
        zero_denominators,
        limit: Some(limit),
    })
}

/// |L| within relative 10^{−exp} of √D, i.e. L² ∈ [D(1−τ)², D(1+τ)²].
pub fn near_root(limit: &Rational, d: u64, tolerance_exp: u32) -> bool {
    let tau = Rational::new(BigInt::one(), pow10(tolerance_exp));
    let one = Rational::one();
    let d = Rational::from_integer(BigInt::from(d));
    let sq = limit * limit;
    let lo = &d * (&one - &tau) * (&one - &tau);
    let hi = &d * (&one + &tau) * (&one + &tau);
    sq >= lo && sq <= hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{integer, rational};
    use proptest::prelude::*;

    /// Direct evaluation of [a_0; …, a_n] from the tail, as an oracle.
    fn direct(qs: &[Rational]) -> Option<Rational> {
        let mut acc = qs.last()?.clone();
        for a in qs[..qs.len() - 1].iter().rev() {
            if acc.is_zero() {
                return None;
            }
            acc = a + acc.recip();
        }
        Some(acc)
    }

    #[test]
    fn seeds() {
        let qs = [integer(2), rational(-3, 5)];
        let pairs = convergent_stream(&qs);
        assert_eq!(pairs[0].a(), integer(2));
        assert_eq!(pairs[0].b(), integer(1));
        assert_eq!(pairs[1].a(), rational(-1, 5));
        assert_eq!(pairs[1].b(), rational(-3, 5));
        // 2·(−3/5) − (−1/5)·1 = −1
        assert_eq!(
            &pairs[0].a() * &pairs[1].b() - &pairs[1].a() * &pairs[0].b(),
            integer(-1)
        );
        assert!(determinant_check(&pairs));
    }

    #[test]
    fn gap_example() {
        let pairs = convergent_stream(&[integer(2), rational(-3, 5)]);
        assert_eq!(consecutive_gap(&pairs, 0).unwrap(), rational(5, 3));
        assert!(consecutive_gap(&pairs, 1).is_err());
    }

    #[test]
    fn perturbation_breaks_determinant() {
        let qs: Vec<Rational> = [2, -3, 7, 1, -2].iter().map(|&n| rational(n, 5)).collect();
        let mut pairs = convergent_stream(&qs);
        assert!(determinant_check(&pairs));
        pairs[2].perturb_a();
        assert!(!determinant_check(&pairs));
    }

    #[test]
    fn zero_denominator_is_reported() {
        // B_1 = a_1 = 0 is impossible for legal quotients but must not panic
        let qs = [integer(1), integer(0), integer(2)];
        let pairs = convergent_stream(&qs);
        assert!(pairs[1].b_is_zero());
        assert_eq!(pairs[1].value(), None);
        assert_eq!(
            consecutive_gap(&pairs, 0),
            Err(CfError::ZeroDenominator { index: 1 })
        );
        assert!(determinant_check(&pairs));
    }

    #[test]
    fn classify_plain_sqrt2() {
        // [1; 2, 2, 2, …] → √2
        let mut qs = vec![integer(1)];
        qs.extend(std::iter::repeat_n(integer(2), 120));
        let r = classify_real_limit(&qs, 2, LimitParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::ConvergesToPlusRoot);
        assert_eq!(r.limit_estimate, "1.41421356237310");
        let neg: Vec<Rational> = qs.iter().map(|q| -q).collect();
        let r = classify_real_limit(&neg, 2, LimitParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::ConvergesToMinusRoot);
        // golden ratio is not ±√2
        let ones = vec![integer(1); 150];
        let r = classify_real_limit(&ones, 2, LimitParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::ConvergesElsewhere);
        // too short to decide
        let r = classify_real_limit(&ones[..10], 2, LimitParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Undetermined);
    }

    #[test]
    fn fast_agreement_matches_exact() {
        let b = |n: i64| BigInt::from(n);
        let (ln, ld) = (b(1_000_000_000_000), b(1));
        let l = approx_ratio(&ln, &ld);
        for x in [
            1_000_000_000_000i64,
            1_000_000_000_001,
            1_000_000_000_002,
            999_999_999_999,
            1_000_000_001_000,
        ] {
            assert_eq!(
                agrees(&b(x), &b(1), &ln, &ld, l, 12),
                agrees_exact(&b(x), &b(1), &ln, &ld, 12)
            );
        }
        assert_eq!(approx_ratio(&b(0), &b(3)), None);
        let huge = BigInt::from(3).pow(5000);
        let r = approx_ratio(&(&huge * 2), &huge).unwrap();
        assert!((r - 2.0).abs() < 1e-15);
    }

    #[test]
    fn samples() {
        assert_eq!(sample_indices(12), vec![1, 2, 5, 10]);
        assert_eq!(sample_indices(60), vec![1, 2, 5, 10, 20, 50, 58]);
    }

    fn legal_quotients() -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec((-60i64..60, 0u32..3), 2..40).prop_map(|v| {
            v.into_iter()
                .map(|(n, k)| Rational::new(BigInt::from(n), BigInt::from(5).pow(k)))
                .filter(|q| !q.is_zero())
                .collect()
        })
    }

    proptest! {
        #[test]
        fn determinant_identity_holds(qs in legal_quotients()) {
            prop_assume!(qs.len() >= 2);
            prop_assert!(determinant_check(&convergent_stream(&qs)));
            prop_assert_eq!(first_determinant_failure(&qs), None);
        }

        #[test]
        fn convergents_match_direct_evaluation(qs in legal_quotients()) {
            let pairs = convergent_stream(&qs);
            for (n, pair) in pairs.iter().enumerate() {
                if let Some(v) = direct(&qs[..=n]) {
                    prop_assert_eq!(pair.value(), Some(v));
                }
            }
            for n in 0..pairs.len().saturating_sub(1) {
                if let Ok(gap) = consecutive_gap(&pairs, n) {
                    prop_assert_eq!(&gap, &(pairs[n + 1].value().unwrap() - pairs[n].value().unwrap()).abs());
                    prop_assert_eq!(gap, (pairs[n].b() * pairs[n + 1].b()).abs().recip());
                }
            }
        }

        #[test]
        fn arbitrary_denominators(nums in prop::collection::vec((-30i64..30, 1i64..12), 2..20)) {
            let qs: Vec<Rational> = nums.into_iter().map(|(n, d)| rational(n, d)).collect();
            prop_assert!(determinant_check(&convergent_stream(&qs)));
        }
    }
}
