//! Exact arithmetic in Q and in the real quadratic field Q(√D).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::decimal::{pow10, round_significant};
use crate::error::{CfError, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses "a", "-a" or "a/b".
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || CfError::Domain(format!("cannot parse rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(CfError::DivisionByZero);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn is_perfect_square(d: u64) -> bool {
    let r = d.sqrt();
    r * r == d
}

/// An element x + y·√D of Q(√D).
///
/// `y = 0` is allowed and encodes the rational x. Equality and hashing are
/// structural, which coincides with equality of values because both
/// coordinates are canonical rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadIrr {
    x: Rational,
    y: Rational,
    d: u64,
}

impl QuadIrr {
    pub fn new(x: Rational, y: Rational, d: u64) -> Result<Self> {
        if d == 0 || is_perfect_square(d) {
            return Err(CfError::InvalidRadicand(d));
        }
        Ok(QuadIrr { x, y, d })
    }

    /// √D itself.
    pub fn sqrt(d: u64) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    /// The rational q viewed inside Q(√D).
    pub fn from_rational(q: Rational, d: u64) -> Result<Self> {
        Self::new(q, Rational::zero(), d)
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadIrr {
            x: self.x.clone(),
            y: -&self.y,
            d: self.d,
        }
    }

    /// x² − D·y², the product of the element with its conjugate.
    pub fn norm(&self) -> Rational {
        &self.x * &self.x - &self.y * &self.y * BigInt::from(self.d)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            // only 0 has norm 0 when D is not a square
            return Err(CfError::DivisionByZero);
        }
        Ok(QuadIrr {
            x: &self.x / &n,
            y: -(&self.y / &n),
            d: self.d,
        })
    }

    /// 1/(self − a), the complete-quotient update.
    pub fn sub_inv(&self, a: &Rational) -> Result<Self> {
        let shifted = QuadIrr {
            x: &self.x - a,
            y: self.y.clone(),
            d: self.d,
        };
        shifted.inverse()
    }

    /// Decimal value of the real embedding (positive square root) rounded to
    /// `digits` significant digits. The digits are certified by enclosing √D
    /// in a shrinking rational interval until both ends round identically.
    pub fn real_embed(&self, digits: u32) -> String {
        assert!(digits >= 1, "at least one digit");
        if self.is_rational() {
            return round_significant(&self.x, digits);
        }
        let mut k = digits + 10;
        loop {
            let (lo, hi) = self.real_interval(k);
            let (slo, shi) = (
                round_significant(&lo, digits),
                round_significant(&hi, digits),
            );
            if slo == shi {
                return slo;
            }
            k *= 2;
        }
    }

    /// A closed rational interval of width |y|·10^{-k} containing the real
    /// value x + y·√D.
    pub fn real_interval(&self, k: u32) -> (Rational, Rational) {
        let scale = pow10(k);
        let s = (BigInt::from(self.d) * &scale * &scale).sqrt();
        let lo_root = Rational::new(s.clone(), scale.clone());
        let hi_root = Rational::new(s + 1u32, scale);
        let a = &self.x + &self.y * lo_root;
        let b = &self.x + &self.y * hi_root;
        if self.y.is_negative() {
            (b, a)
        } else {
            (a, b)
        }
    }
}

impl fmt::Debug for QuadIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadIrr({} + {}·√{})", self.x, self.y, self.d)
    }
}

impl fmt::Display for QuadIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            write!(f, "{}", self.x)
        } else if self.x.is_zero() {
            write!(f, "({})√{}", self.y, self.d)
        } else {
            write!(f, "{} + ({})√{}", self.x, self.y, self.d)
        }
    }
}

fn same_field(a: &QuadIrr, b: &QuadIrr) {
    assert_eq!(a.d, b.d, "elements of different quadratic fields");
}

impl Add for &QuadIrr {
    type Output = QuadIrr;
    fn add(self, rhs: &QuadIrr) -> QuadIrr {
        same_field(self, rhs);
        QuadIrr {
            x: &self.x + &rhs.x,
            y: &self.y + &rhs.y,
            d: self.d,
        }
    }
}

impl Sub for &QuadIrr {
    type Output = QuadIrr;
    fn sub(self, rhs: &QuadIrr) -> QuadIrr {
        same_field(self, rhs);
        QuadIrr {
            x: &self.x - &rhs.x,
            y: &self.y - &rhs.y,
            d: self.d,
        }
    }
}

impl Mul for &QuadIrr {
    type Output = QuadIrr;
    fn mul(self, rhs: &QuadIrr) -> QuadIrr {
        same_field(self, rhs);
        let d = BigInt::from(self.d);
        QuadIrr {
            x: &self.x * &rhs.x + &self.y * &rhs.y * d,
            y: &self.x * &rhs.y + &self.y * &rhs.x,
            d: self.d,
        }
    }
}

impl Sub<&Rational> for &QuadIrr {
    type Output = QuadIrr;
    fn sub(self, rhs: &Rational) -> QuadIrr {
        QuadIrr {
            x: &self.x - rhs,
            y: self.y.clone(),
            d: self.d,
        }
    }
}

impl Neg for &QuadIrr {
    type Output = QuadIrr;
    fn neg(self) -> QuadIrr {
        QuadIrr {
            x: -&self.x,
            y: -&self.y,
            d: self.d,
        }
    }
}
