//! Probabilistic model of partial quotients under uniformly distributed
//! p-adic digits, with a seeded Monte-Carlo sampler.
//!
//! A generic quotient a has v_p(a) = −k with probability (p−1)/p^k and the
//! form a = c_{−k}p^{−k} + … + c_{−1}p^{−1} + c_0 with symmetric digits.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CfError, Result};
use crate::field::Rational;

const CHUNK: usize = 1 << 16;

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

fn ratio(n: BigInt, d: BigInt) -> Rational {
    Rational::new(n, d)
}

/// P(v_p(a) = −k) = (p−1)/p^k.
pub fn valuation_pmf(p: u64, k: i64) -> Result<Rational> {
    if k < 1 {
        return Err(CfError::Domain(format!(
            "valuation depth must be ≥ 1, got {k}"
        )));
    }
    Ok(ratio(big(p - 1), big(p).pow(k as u32)))
}

/// Mean of −v_p(a), i.e. p/(p−1).
pub fn expected_valuation(p: u64) -> Rational {
    ratio(big(p), big(p - 1))
}

/// E(|a| | v_p(a) = −k) = (p^{2(k+1)} − 1)/(4p^{2k+1}) with every digit
/// uniform; k = 0 is a single digit.
pub fn expected_abs_conditional(p: u64, k: i64) -> Result<Rational> {
    if k < 0 {
        return Err(CfError::Domain(format!(
            "valuation depth must be ≥ 0, got {k}"
        )));
    }
    let k = k as u32;
    let pb = big(p);
    Ok(ratio(pb.pow(2 * (k + 1)) - 1, big(4) * pb.pow(2 * k + 1)))
}

/// Closed form p/4·(1 − 1/(p²+p+1)).
pub fn expected_abs(p: u64) -> Rational {
    let s = big(p * p + p + 1);
    ratio(big(p) * (&s - 1), big(4) * s)
}

/// Exact value of Σ_{k≥1} E(|a| | v = −k)·P(v = −k), which is
/// p/4 − 1/(4p(p²+p+1)).
pub fn expected_abs_series(p: u64) -> Rational {
    ratio(big(p), big(4)) - ratio(BigInt::one(), big(4 * p) * big(p * p + p + 1))
}

/// Exact mean of |a| for the sampler, whose leading digit is nonzero:
/// p/4 + 1/(4(p²+p+1)).
pub fn expected_abs_sampled(p: u64) -> Rational {
    ratio(big(p), big(4)) + ratio(BigInt::one(), big(4) * big(p * p + p + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DigitModel {
    pub p: u64,
    pub seed: u64,
}

/// One sampled quotient: digits[i] is the coefficient of p^{−i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledQuotient {
    pub depth: u32,
    pub digits: Vec<i64>,
}

impl SampledQuotient {
    pub fn value(&self, p: u64) -> Rational {
        let pb = big(p);
        let num = self
            .digits
            .iter()
            .enumerate()
            .fold(BigInt::zero(), |acc, (i, &c)| {
                acc + BigInt::from(c) * pb.pow(self.depth - i as u32)
            });
        ratio(num, pb.pow(self.depth))
    }

    fn abs_f64(&self, p: u64) -> f64 {
        let pf = p as f64;
        let v: f64 = self
            .digits
            .iter()
            .enumerate()
            .map(|(i, &c)| c as f64 / pf.powi(i as i32))
            .sum();
        v.abs()
    }
}

impl DigitModel {
    pub fn new(p: u64, seed: u64) -> Result<Self> {
        if !crate::padic::is_odd_prime(p) {
            return Err(CfError::NotOddPrime(p));
        }
        Ok(DigitModel { p, seed })
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = self.rng();
        rng.set_stream(index);
        rng
    }

    /// Leading zeros are geometric, the leading digit is uniform nonzero and
    /// the rest are uniform on {−(p−1)/2, …, (p−1)/2}.
    pub fn sample_digits<R: Rng>(&self, rng: &mut R) -> SampledQuotient {
        let p = self.p;
        let half = ((p - 1) / 2) as i64;
        let mut depth = 1u32;
        while rng.random_range(0..p) == 0 {
            depth += 1;
        }
        let mut digits = vec![0i64; depth as usize + 1];
        for c in digits.iter_mut().take(depth as usize) {
            *c = rng.random_range(-half..=half);
        }
        let lead = rng.random_range(1..=half);
        digits[depth as usize] = if rng.random::<bool>() { lead } else { -lead };
        SampledQuotient { depth, digits }
    }

    pub fn sample_partial_quotient<R: Rng>(&self, rng: &mut R) -> Rational {
        self.sample_digits(rng).value(self.p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Raw per-sample statistics gathered in one pass.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SampleSummary {
    pub samples: usize,
    pub abs_sum: f64,
    pub abs_sq_sum: f64,
    /// depth_counts[k] counts samples with v_p = −k (index 0 unused).
    pub depth_counts: Vec<u64>,
    /// Histogram of the leading digit c_{−k} over {−(p−1)/2, …, (p−1)/2}.
    pub leading_digit_counts: Vec<u64>,
}

impl SampleSummary {
    fn merge(mut self, other: SampleSummary) -> SampleSummary {
        self.samples += other.samples;
        self.abs_sum += other.abs_sum;
        self.abs_sq_sum += other.abs_sq_sum;
        for (v, src) in [
            (&mut self.depth_counts, &other.depth_counts),
            (&mut self.leading_digit_counts, &other.leading_digit_counts),
        ] {
            if v.len() < src.len() {
                v.resize(src.len(), 0);
            }
            for (a, b) in v.iter_mut().zip(src) {
                *a += b;
            }
        }
        self
    }

    pub fn estimate(&self) -> MonteCarloEstimate {
        let n = self.samples as f64;
        let mean = self.abs_sum / n;
        let var = ((self.abs_sq_sum - n * mean * mean) / (n - 1.0)).max(0.0);
        MonteCarloEstimate {
            mean,
            std_error: (var / n).sqrt(),
            samples: self.samples,
        }
    }

    /// Empirical P(v_p = −k) and its binomial standard error.
    pub fn depth_frequency(&self, k: usize) -> (f64, f64) {
        let n = self.samples as f64;
        let f = self.depth_counts.get(k).copied().unwrap_or(0) as f64 / n;
        (f, (f * (1.0 - f) / n).sqrt())
    }
}

/// Draws `n` quotients in fixed-size chunks, each from its own ChaCha stream,
/// so the result does not depend on the thread count.
pub fn sample_summary(model: &DigitModel, n: usize) -> SampleSummary {
    let half = ((model.p - 1) / 2) as i64;
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = model.stream(c as u64);
            let count = CHUNK.min(n - c * CHUNK);
            let mut s = SampleSummary {
                leading_digit_counts: vec![0; (2 * half + 1) as usize],
                ..Default::default()
            };
            for _ in 0..count {
                let q = model.sample_digits(&mut rng);
                let a = q.abs_f64(model.p);
                s.samples += 1;
                s.abs_sum += a;
                s.abs_sq_sum += a * a;
                let k = q.depth as usize;
                if s.depth_counts.len() <= k {
                    s.depth_counts.resize(k + 1, 0);
                }
                s.depth_counts[k] += 1;
                s.leading_digit_counts[(q.digits[k] + half) as usize] += 1;
            }
            s
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(SampleSummary::default(), SampleSummary::merge)
}

pub fn monte_carlo_expected_abs(model: &DigitModel, n: usize) -> Result<MonteCarloEstimate> {
    if n < 1000 {
        return Err(CfError::Domain(format!(
            "need at least 1000 samples, got {n}"
        )));
    }
    Ok(sample_summary(model, n).estimate())
}

/// Rational to f64 for reporting.
pub fn approx(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// True iff |q| < bound.
pub fn below(q: &Rational, bound: &Rational) -> bool {
    q.abs() < *bound
}
