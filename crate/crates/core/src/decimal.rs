//! Decimal rendering of exact rationals.
//!
//! Two conventions are used throughout the crate: truncation toward zero to a
//! fixed number of fractional digits (convergent listings), and rounding to a
//! number of significant digits (table values, real embeddings).

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field::Rational;

pub(crate) fn pow10(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

/// Renders `q` truncated toward zero with exactly `frac_digits` digits after
/// the point.
pub fn truncate_fraction(q: &Rational, frac_digits: u32) -> String {
    truncate_ratio(q.numer(), q.denom(), frac_digits)
}

/// Same as [`truncate_fraction`] for an unreduced `num / den` (den != 0).
pub fn truncate_ratio(num: &BigInt, den: &BigInt, frac_digits: u32) -> String {
    assert!(!den.is_zero(), "zero denominator");
    let negative = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus) && !num.is_zero();
    let scaled = (num.abs() * pow10(frac_digits)) / den.abs();
    let mut out = String::new();
    if negative && !scaled.is_zero() {
        out.push('-');
    }
    out.push_str(&place_point(&scaled, frac_digits));
    out
}

fn place_point(magnitude: &BigInt, frac_digits: u32) -> String {
    let digits = magnitude.to_str_radix(10);
    let frac = frac_digits as usize;
    if frac == 0 {
        return digits;
    }
    let padded = if digits.len() <= frac {
        format!("{}{}", "0".repeat(frac + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = padded.split_at(padded.len() - frac);
    format!("{int_part}.{frac_part}")
}

/// floor(log10(|q|)) for q != 0.
pub(crate) fn decimal_exponent(q: &Rational) -> i64 {
    let num = q.numer().abs();
    let den = q.denom().clone();
    // initial guess from bit lengths, then correct by a few steps
    let mut e =
        ((num.bits() as f64 - den.bits() as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let ge = |e: i64| -> bool {
        // |q| >= 10^e
        if e >= 0 {
            num >= &den * pow10(e as u32)
        } else {
            &num * pow10((-e) as u32) >= den
        }
    };
    while !ge(e) {
        e -= 1;
    }
    while ge(e + 1) {
        e += 1;
    }
    e
}

/// Rounds `q` to `digits` significant digits (half away from zero).
pub fn round_significant(q: &Rational, digits: u32) -> String {
    assert!(digits >= 1, "at least one significant digit");
    if q.is_zero() {
        return place_point(&BigInt::zero(), digits - 1);
    }
    let mut e = decimal_exponent(q);
    let mut n = scaled_round(q, digits, e);
    if n == pow10(digits) {
        e += 1;
        n = scaled_round(q, digits, e);
    }
    let frac = (digits as i64 - 1 - e).max(0) as u32;
    let body = if (digits as i64 - 1 - e) < 0 {
        // more integer digits than significant digits: pad with zeros
        let pad = (e + 1 - digits as i64) as u32;
        (n * pow10(pad)).to_str_radix(10)
    } else {
        place_point(&n, frac)
    };
    if q.is_negative() {
        format!("-{body}")
    } else {
        body
    }
}

/// `num/den` in scientific notation with `digits` significant digits,
/// e.g. "1.23e-45".
pub fn scientific(num: &BigInt, den: &BigInt, digits: u32) -> String {
    assert!(digits >= 1, "at least one significant digit");
    let q = Rational::new(num.clone(), den.clone());
    if q.is_zero() {
        return format!("{}e0", place_point(&BigInt::zero(), digits - 1));
    }
    let mut e = decimal_exponent(&q);
    let mut n = scaled_round(&q, digits, e);
    if n == pow10(digits) {
        e += 1;
        n = scaled_round(&q, digits, e);
    }
    let sign = if q.is_negative() { "-" } else { "" };
    format!("{sign}{}e{e}", place_point(&n, digits - 1))
}

fn scaled_round(q: &Rational, digits: u32, e: i64) -> BigInt {
    let shift = digits as i64 - 1 - e;
    let (mut num, mut den) = (q.numer().abs(), q.denom().clone());
    if shift >= 0 {
        num *= pow10(shift as u32);
    } else {
        den *= pow10((-shift) as u32);
    }
    let (quot, rem) = num.div_rem(&den);
    if rem * 2u32 >= den {
        quot + BigInt::one()
    } else {
        quot
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn truncation_is_toward_zero() {
        assert_eq!(truncate_fraction(&r(1, 3), 4), "0.3333");
        assert_eq!(truncate_fraction(&r(-1, 3), 4), "-0.3333");
        assert_eq!(truncate_fraction(&r(2, 3), 2), "0.66");
        assert_eq!(truncate_fraction(&r(-5, 1), 0), "-5");
        assert_eq!(truncate_fraction(&r(-1, 1000), 2), "0.00");
    }

    #[test]
    fn significant_rounding() {
        assert_eq!(round_significant(&r(19, 5), 3), "3.80");
        assert_eq!(round_significant(&r(2, 3), 3), "0.667");
        assert_eq!(round_significant(&r(-2, 3), 2), "-0.67");
        assert_eq!(round_significant(&r(1, 1000), 2), "0.0010");
        assert_eq!(round_significant(&r(99999, 1000), 3), "100");
        assert_eq!(round_significant(&r(123456, 1), 3), "123000");
        assert_eq!(round_significant(&r(0, 1), 3), "0.00");
    }

    #[test]
    fn scientific_form() {
        let b = |n: i64| BigInt::from(n);
        assert_eq!(scientific(&b(3), &b(5000), 3), "6.00e-4");
        assert_eq!(scientific(&b(-99999), &b(1), 2), "-1.0e5");
        assert_eq!(scientific(&b(5), &b(3), 1), "2e0");
    }

    #[test]
    fn exponent_matches_powers_of_ten() {
        assert_eq!(decimal_exponent(&r(1, 1)), 0);
        assert_eq!(decimal_exponent(&r(10, 1)), 1);
        assert_eq!(decimal_exponent(&r(99, 10)), 0);
        assert_eq!(decimal_exponent(&r(1, 10)), -1);
        assert_eq!(decimal_exponent(&r(-1, 11)), -2);
    }
}
