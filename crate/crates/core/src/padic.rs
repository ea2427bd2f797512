//! p-adic valuation, balanced-digit extraction and Browkin's floor functions.
//!
//! An element α = x + y·√D is embedded in Q_p by sending √D to the Hensel
//! lift S of a chosen square root of D modulo p. With e ≥ 0 chosen so that
//! p^e·x and p^e·y are p-integral, the element N = p^e·α lies in Z_p and the
//! balanced residue of N modulo p^m carries exactly the symmetric digits of
//! α at exponents −e, …, m−e−1. Both floor functions fall out of this:
//!
//! * s(α) = bal(N mod p^{e+1}) / p^e
//! * t(α) = bal(N mod p^e) / p^e
//!
//! where bal picks the representative in [−(p^m−1)/2, (p^m−1)/2].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{CfError, Result};
use crate::field::{QuadIrr, Rational};

/// Initial Hensel precision, in p-adic digits.
pub const INITIAL_PRECISION: u64 = 32;
/// Default escalation cap, in p-adic digits.
pub const DEFAULT_MAX_PRECISION: u64 = 1 << 20;

/// Which of the two p-adic square roots of D is used as the image of √D.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Root whose first digit lies in {1, …, (p−1)/2}.
    #[default]
    Default,
    /// The negated root.
    Alternate,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::Default => "default",
            Branch::Alternate => "alternate",
        }
    }

    pub fn other(self) -> Branch {
        match self {
            Branch::Default => Branch::Alternate,
            Branch::Alternate => Branch::Default,
        }
    }
}

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut f = 3u64;
    while f.saturating_mul(f) <= p {
        if p.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Tonelli–Shanks square root of a nonzero residue `n` modulo the odd prime
/// `p`, or `None` when `n` is a non-residue.
pub fn sqrt_mod_prime(n: u64, p: u64) -> Option<u64> {
    let n = n % p;
    if n == 0 {
        return Some(0);
    }
    if pow_mod(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(n, q, p);
    let mut r = pow_mod(n, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Exponent of `p` in the nonzero integer `n`.
pub fn int_valuation(n: &BigInt, p: &BigInt) -> u64 {
    assert!(!n.is_zero(), "valuation of zero");
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn rational_valuation(q: &Rational, p: &BigInt) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(int_valuation(q.numer(), p) as i64 - int_valuation(q.denom(), p) as i64)
}

/// Balanced representative of r ∈ [0, m) for odd m.
fn balanced(r: BigInt, m: &BigInt) -> BigInt {
    if &r * 2u32 > *m {
        r - m
    } else {
        r
    }
}

/// Symmetric digits c_lo, …, c_hi of a p-adic element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitWindow {
    pub lo: i64,
    pub digits: Vec<i64>,
}

impl DigitWindow {
    pub fn hi(&self) -> i64 {
        self.lo + self.digits.len() as i64 - 1
    }

    /// Σ c_i p^i over the window.
    pub fn reconstruct(&self, p: u64) -> Rational {
        let pb = BigInt::from(p);
        let mut acc = BigInt::zero();
        for c in self.digits.iter().rev() {
            acc = acc * &pb + BigInt::from(*c);
        }
        let scale = pb.pow(self.lo.unsigned_abs() as u32);
        if self.lo >= 0 {
            Rational::from_integer(acc * scale)
        } else {
            Rational::new(acc, scale)
        }
    }
}

/// Prime, radicand, root branch and the Hensel cache for one embedding of
/// Q(√D) into Q_p.
///
/// The cache is mutated on demand, so every query takes `&mut self`; use one
/// context per thread.
#[derive(Clone, Debug)]
pub struct PadicContext {
    p: u64,
    d: u64,
    branch_digit: u64,
    p_big: BigInt,
    max_precision: u64,
    /// Lifted root and its precision in digits.
    root: BigInt,
    root_precision: u64,
}

impl PadicContext {
    pub fn new(p: u64, d: u64) -> Result<Self> {
        Self::with_branch(p, d, Branch::Default)
    }

    pub fn with_branch(p: u64, d: u64, branch: Branch) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(CfError::NotOddPrime(p));
        }
        if d.is_multiple_of(p) {
            return Err(CfError::RamifiedPrime { d, p });
        }
        let r = sqrt_mod_prime(d, p).ok_or(CfError::NotAResidue { d, p })?;
        let small = r.min(p - r);
        let digit = match branch {
            Branch::Default => small,
            Branch::Alternate => p - small,
        };
        Self::with_branch_digit(p, d, digit)
    }

    /// Uses the root congruent to `digit` modulo p. `digit` may be given in
    /// either [0, p) or the symmetric range.
    pub fn with_branch_digit(p: u64, d: u64, digit: u64) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(CfError::NotOddPrime(p));
        }
        if d.is_multiple_of(p) {
            return Err(CfError::RamifiedPrime { d, p });
        }
        if sqrt_mod_prime(d, p).is_none() {
            return Err(CfError::NotAResidue { d, p });
        }
        let digit = digit % p;
        if mul_mod(digit, digit, p) != d % p {
            return Err(CfError::InvalidBranch { digit, d, p });
        }
        Ok(PadicContext {
            p,
            d,
            branch_digit: digit,
            p_big: BigInt::from(p),
            max_precision: DEFAULT_MAX_PRECISION,
            root: BigInt::from(digit),
            root_precision: 1,
        })
    }

    pub fn with_max_precision(mut self, cap: u64) -> Self {
        self.max_precision = cap.max(1);
        self
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn branch_digit(&self) -> u64 {
        self.branch_digit
    }

    pub fn max_precision(&self) -> u64 {
        self.max_precision
    }

    pub fn cached_precision(&self) -> u64 {
        self.root_precision
    }

    fn p_pow(&self, k: u64) -> BigInt {
        self.p_big.pow(k as u32)
    }

    /// S_k ∈ [0, p^k) with S_k² ≡ D (mod p^k) and S_k ≡ branch digit (mod p).
    pub fn hensel_sqrt(&mut self, k: u64) -> Result<BigInt> {
        if k == 0 || k > self.max_precision {
            return Err(CfError::PrecisionCapExceeded {
                requested: k,
                cap: self.max_precision,
            });
        }
        if k > self.root_precision {
            let mut target = self.root_precision.max(INITIAL_PRECISION / 2);
            while target < k {
                target *= 2;
            }
            self.lift_to(target.min(self.max_precision));
        }
        Ok(self.root.mod_floor(&self.p_pow(k)))
    }

    /// Newton iteration S ← S − (S² − D)/(2S), doubling precision per round.
    fn lift_to(&mut self, target: u64) {
        let d = BigInt::from(self.d);
        while self.root_precision < target {
            let prec = (self.root_precision * 2).min(target);
            let modulus = self.p_pow(prec);
            let s = &self.root;
            let f = (s * s - &d).mod_floor(&modulus);
            let inv = (s * 2u32)
                .modinv(&modulus)
                .expect("2S is a unit because p is odd and S is a unit");
            self.root = (s - f * inv).mod_floor(&modulus);
            self.root_precision = prec;
        }
    }

    fn check_field(&self, alpha: &QuadIrr) {
        assert_eq!(
            alpha.radicand(),
            self.d,
            "element lives in a different field"
        );
    }

    /// Smallest e ≥ 0 making p^e·x and p^e·y p-integral.
    fn integral_shift(&self, alpha: &QuadIrr) -> u64 {
        let vx = rational_valuation(alpha.x(), &self.p_big).unwrap_or(0);
        let vy = rational_valuation(alpha.y(), &self.p_big).unwrap_or(0);
        (-vx.min(vy)).max(0) as u64
    }

    /// (p^e·q) mod p^k for p-integral p^e·q.
    fn scaled_rational_residue(&self, q: &Rational, e: u64, modulus: &BigInt) -> BigInt {
        if q.is_zero() {
            return BigInt::zero();
        }
        let dv = int_valuation(q.denom(), &self.p_big);
        let unit = q.denom() / self.p_pow(dv);
        let num = q.numer() * self.p_pow(e - dv);
        let inv = unit
            .mod_floor(modulus)
            .modinv(modulus)
            .expect("unit part of denominator is invertible");
        (num.mod_floor(modulus) * inv).mod_floor(modulus)
    }

    /// (p^e·α) mod p^k in [0, p^k).
    fn scaled_residue(&mut self, alpha: &QuadIrr, e: u64, k: u64) -> Result<BigInt> {
        let modulus = self.p_pow(k);
        let rx = self.scaled_rational_residue(alpha.x(), e, &modulus);
        if alpha.is_rational() {
            return Ok(rx);
        }
        let ry = self.scaled_rational_residue(alpha.y(), e, &modulus);
        let s = self.hensel_sqrt(k)?;
        Ok((rx + ry * s).mod_floor(&modulus))
    }

    /// Floors of α = (xn·p^xv + yn·p^yv·√D) / (den·p^dv), where p ∤ den and
    /// xn, yn are zero or not divisible by p. This is the entry point of the
    /// recurrence-driven engine, which never materializes α as a rational
    /// pair.
    pub(crate) fn floors_scaled(
        &mut self,
        x: (&BigInt, i64),
        y: (&BigInt, i64),
        den: (&BigInt, i64),
    ) -> Result<(Rational, Rational)> {
        let low = [x, y]
            .iter()
            .filter(|(n, _)| !n.is_zero())
            .map(|&(_, v)| v)
            .min()
            .ok_or_else(|| CfError::Domain("floor of zero".into()))?;
        let e = (den.1 - low).max(0);
        let k = (e + 1) as u64;
        let modulus = self.p_pow(k);
        let mut acc = BigInt::zero();
        for (i, (n, v)) in [x, y].into_iter().enumerate() {
            if n.is_zero() {
                continue;
            }
            let shift = (v + e - den.1) as u64;
            if shift >= k {
                continue;
            }
            let mut term = n.mod_floor(&modulus) * self.p_pow(shift);
            if i == 1 {
                term *= self.hensel_sqrt(k)?;
            }
            acc += term;
        }
        let inv = den
            .0
            .mod_floor(&modulus)
            .modinv(&modulus)
            .expect("denominator is a p-adic unit");
        let r = (acc * inv).mod_floor(&modulus);
        let small = self.p_pow(e as u64);
        let s = balanced(r.clone(), &modulus);
        let t = balanced(r.mod_floor(&small), &small);
        Ok((Rational::new(s, small.clone()), Rational::new(t, small)))
    }

    /// v_p of the p-adic image of α (α ≠ 0).
    pub fn valuation(&mut self, alpha: &QuadIrr) -> Result<i64> {
        self.check_field(alpha);
        if alpha.is_zero() {
            return Err(CfError::Domain("valuation of zero".into()));
        }
        if alpha.is_rational() {
            return Ok(rational_valuation(alpha.x(), &self.p_big).expect("nonzero"));
        }
        let e = self.integral_shift(alpha);
        let mut k = e + INITIAL_PRECISION;
        loop {
            if k > self.max_precision {
                return Err(CfError::PrecisionCapExceeded {
                    requested: k,
                    cap: self.max_precision,
                });
            }
            let r = self.scaled_residue(alpha, e, k)?;
            if !r.is_zero() {
                return Ok(int_valuation(&r, &self.p_big) as i64 - e as i64);
            }
            k *= 2;
        }
    }

    /// Symmetric digits of α at exponents v_p(α), …, hi.
    pub fn digits(&mut self, alpha: &QuadIrr, hi: i64) -> Result<DigitWindow> {
        let v = self.valuation(alpha)?;
        if hi < v {
            return Err(CfError::Domain(format!(
                "digit window ends at {hi}, below the valuation {v}"
            )));
        }
        let e = self.integral_shift(alpha);
        let k = (hi + e as i64 + 1) as u64;
        if k > self.max_precision {
            return Err(CfError::PrecisionCapExceeded {
                requested: k,
                cap: self.max_precision,
            });
        }
        let modulus = self.p_pow(k);
        let mut r = balanced(self.scaled_residue(alpha, e, k)?, &modulus);
        let mut digits = Vec::with_capacity(k as usize);
        for _ in 0..k {
            let c = balanced(r.mod_floor(&self.p_big), &self.p_big);
            r = (r - &c) / &self.p_big;
            digits.push(c.to_i64().expect("digit fits"));
        }
        debug_assert!(r.is_zero());
        let skip = (v + e as i64) as usize;
        Ok(DigitWindow {
            lo: v,
            digits: digits.split_off(skip),
        })
    }

    /// Both floors at once: (s(α), t(α)).
    pub fn floors(&mut self, alpha: &QuadIrr) -> Result<(Rational, Rational)> {
        self.check_field(alpha);
        if alpha.is_zero() {
            return Err(CfError::Domain("floor of zero".into()));
        }
        let e = self.integral_shift(alpha);
        let big = self.p_pow(e + 1);
        let small = self.p_pow(e);
        let r = self.scaled_residue(alpha, e, e + 1)?;
        let s = balanced(r.clone(), &big);
        let t = balanced(r.mod_floor(&small), &small);
        Ok((Rational::new(s, small.clone()), Rational::new(t, small)))
    }

    /// Browkin's s: digits at exponents ≤ 0.
    pub fn floor_s(&mut self, alpha: &QuadIrr) -> Result<Rational> {
        Ok(self.floors(alpha)?.0)
    }

    /// Browkin's t: digits at exponents < 0.
    pub fn floor_t(&mut self, alpha: &QuadIrr) -> Result<Rational> {
        Ok(self.floors(alpha)?.1)
    }
}

/// Absolute value bound helper used in tests and invariants: |q| < bound.
pub fn abs_below(q: &Rational, bound: &Rational) -> bool {
    q.abs() < *bound
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{integer, rational};
    use proptest::prelude::*;

    fn ctx(p: u64, d: u64) -> PadicContext {
        PadicContext::new(p, d).unwrap()
    }

    fn q(n: i64, d: i64, radicand: u64) -> QuadIrr {
        QuadIrr::from_rational(rational(n, d), radicand).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert_eq!(
            PadicContext::new(4, 5).unwrap_err(),
            CfError::NotOddPrime(4)
        );
        assert_eq!(
            PadicContext::new(2, 5).unwrap_err(),
            CfError::NotOddPrime(2)
        );
        assert_eq!(
            PadicContext::new(5, 10).unwrap_err(),
            CfError::RamifiedPrime { d: 10, p: 5 }
        );
        assert_eq!(
            PadicContext::new(5, 13).unwrap_err(),
            CfError::NotAResidue { d: 13, p: 5 }
        );
        assert!(matches!(
            PadicContext::with_branch_digit(5, 19, 1),
            Err(CfError::InvalidBranch { .. })
        ));
    }

    #[test]
    fn default_and_alternate_branches() {
        assert_eq!(ctx(5, 19).branch_digit(), 2);
        assert_eq!(ctx(5, 21).branch_digit(), 1);
        let alt = PadicContext::with_branch(5, 19, Branch::Alternate).unwrap();
        assert_eq!(alt.branch_digit(), 3);
        assert!(ctx(7823, 15648).branch_digit() * 2 < 7823);
    }

    #[test]
    fn tonelli_shanks_agrees_with_search() {
        for p in [3u64, 5, 7, 11, 13, 17, 41, 43, 97, 7823] {
            for n in 1..p.min(200) {
                let brute = (1..p).find(|r| r * r % p == n);
                match sqrt_mod_prime(n, p) {
                    Some(r) => assert_eq!(r * r % p, n),
                    None => assert!(brute.is_none(), "p={p} n={n}"),
                }
            }
        }
    }

    #[test]
    fn hensel_examples() {
        let mut c = ctx(5, 19);
        assert_eq!(c.hensel_sqrt(2).unwrap(), BigInt::from(12));
        assert_eq!(c.hensel_sqrt(1).unwrap(), BigInt::from(2));
        assert_eq!(ctx(5, 14).hensel_sqrt(1).unwrap(), BigInt::from(2));
    }

    #[test]
    fn hensel_cap() {
        let mut c = ctx(5, 19).with_max_precision(40);
        assert!(c.hensel_sqrt(40).is_ok());
        assert_eq!(
            c.hensel_sqrt(41),
            Err(CfError::PrecisionCapExceeded {
                requested: 41,
                cap: 40
            })
        );
    }

    #[test]
    fn hensel_cache_is_coherent() {
        let mut c = ctx(43, 35);
        let d = BigInt::from(35);
        let deep = c.hensel_sqrt(300).unwrap();
        for k in [1u64, 2, 7, 33, 64, 150, 299] {
            let m = BigInt::from(43).pow(k as u32);
            let s = c.hensel_sqrt(k).unwrap();
            assert_eq!(s, deep.mod_floor(&m));
            assert!((&s * &s - &d).mod_floor(&m).is_zero());
        }
    }

    #[test]
    fn valuation_examples() {
        let mut c = ctx(5, 19);
        assert_eq!(c.valuation(&q(1, 25, 19)).unwrap(), -2);
        let sqrt19 = QuadIrr::sqrt(19).unwrap();
        assert_eq!(c.valuation(&sqrt19).unwrap(), 0);
        assert_eq!(c.valuation(&(&sqrt19 - &integer(2))).unwrap(), 1);
        // conjugate image: −√19 − 2 ≡ −14 (mod 25) is a unit
        assert_eq!(
            c.valuation(&(&sqrt19.conjugate() - &integer(2))).unwrap(),
            0
        );
        let scaled = QuadIrr::new(integer(0), integer(125), 19).unwrap();
        assert_eq!(c.valuation(&scaled).unwrap(), 3);
        assert!(c.valuation(&q(0, 1, 19)).is_err());
    }

    #[test]
    fn digit_examples() {
        let mut c = ctx(5, 19);
        let w = c.digits(&QuadIrr::sqrt(19).unwrap(), 1).unwrap();
        assert_eq!(
            w,
            DigitWindow {
                lo: 0,
                digits: vec![2, 2]
            }
        );
        // −3 is not a symmetric digit: −3/5 = 2/5 − 1
        let w = c.digits(&q(-3, 5, 19), 0).unwrap();
        assert_eq!(
            w,
            DigitWindow {
                lo: -1,
                digits: vec![2, -1]
            }
        );
        let w = c.digits(&q(7, 1, 19), 1).unwrap();
        assert_eq!(
            w,
            DigitWindow {
                lo: 0,
                digits: vec![2, 1]
            }
        );
        assert!(c.digits(&q(1, 25, 19), -3).is_err());
    }

    #[test]
    fn floor_examples() {
        let mut c = ctx(5, 19);
        let sqrt19 = QuadIrr::sqrt(19).unwrap();
        assert_eq!(c.floor_s(&sqrt19).unwrap(), integer(2));
        assert_eq!(c.floor_t(&sqrt19).unwrap(), integer(0));
        let high = QuadIrr::new(integer(0), integer(125), 19).unwrap();
        assert_eq!(c.floor_s(&high).unwrap(), integer(0));
        // 13/5 = −2/5 + 3
        assert_eq!(c.floor_t(&q(13, 5, 19)).unwrap(), rational(-2, 5));
        // −9/5 + 7 = 1/5 + 0 + 1·5 in symmetric digits
        assert_eq!(c.floor_t(&q(26, 5, 19)).unwrap(), rational(1, 5));
        assert_eq!(c.floor_s(&q(26, 5, 19)).unwrap(), rational(1, 5));
    }

    #[test]
    fn floor_s_of_first_browkin_quotient_matches_digit_oracle() {
        // (2 + √19)/15 = 1/(√19 − 2). Oracle: brute-force the residue of
        // 5·α modulo 5^10 via √19 mod 5^10 found by digit-by-digit search.
        let p = 5i64;
        let m = p.pow(10);
        let mut root = 2i64;
        let mut pk = p;
        for _ in 1..10 {
            let next = pk * p;
            root = (0..p)
                .map(|c| root + c * pk)
                .find(|r| (r * r - 19).rem_euclid(next) == 0)
                .unwrap();
            pk = next;
        }
        // 5α = (2 + S)/3 mod 5^10
        let inv3 = (1..m).find(|i| (3 * i) % m == 1).unwrap();
        let n = ((2 + root) % m * inv3) % m;
        let lead = {
            let r = n.rem_euclid(25);
            if 2 * r > 25 {
                r - 25
            } else {
                r
            }
        };
        let alpha = QuadIrr::new(rational(2, 15), rational(1, 15), 19).unwrap();
        let mut c = ctx(5, 19);
        assert_eq!(c.floor_s(&alpha).unwrap(), rational(lead, 5));
        let w = c.digits(&alpha, 8).unwrap();
        let mut bal = n;
        let mut oracle = vec![];
        for _ in 0..10 {
            let mut d = bal.rem_euclid(p);
            if d > 2 {
                d -= p;
            }
            oracle.push(d);
            bal = (bal - d) / p;
        }
        assert_eq!(w.lo, -1);
        assert_eq!(w.digits, oracle);
    }

    fn element() -> impl Strategy<Value = QuadIrr> {
        (-200i64..200, 1i64..400, -60i64..60, 1i64..400).prop_filter_map(
            "nonzero",
            |(a, b, c, d)| {
                let e = QuadIrr::new(rational(a, b), rational(c, d), 19).unwrap();
                (!e.is_zero()).then_some(e)
            },
        )
    }

    proptest! {
        #[test]
        fn reconstruction_property(alpha in element(), extra in 0i64..6) {
            let mut c = ctx(5, 19);
            let v = c.valuation(&alpha).unwrap();
            let hi = v + extra;
            let w = c.digits(&alpha, hi).unwrap();
            prop_assert_eq!(w.lo, v);
            prop_assert!(w.digits[0] != 0);
            prop_assert!(w.digits.iter().all(|d| d.abs() <= 2));
            let rest = &alpha - &w.reconstruct(5);
            if !rest.is_zero() {
                prop_assert!(c.valuation(&rest).unwrap() > hi);
            }
        }

        #[test]
        fn floors_are_bounded_and_defining(alpha in element()) {
            let mut c = ctx(5, 19);
            let (s, t) = c.floors(&alpha).unwrap();
            prop_assert!(abs_below(&s, &rational(5, 2)));
            prop_assert!(abs_below(&t, &integer(1)));
            let rs = &alpha - &s;
            if !rs.is_zero() {
                prop_assert!(c.valuation(&rs).unwrap() >= 1);
            }
            let rt = &alpha - &t;
            if !rt.is_zero() {
                prop_assert!(c.valuation(&rt).unwrap() >= 0);
            }
        }
    }
}
