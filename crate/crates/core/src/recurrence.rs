//! Division-free complete-quotient recurrence.
//!
//! Every irrational α ∈ Q(√D) can be written as (P + m√D)/Q with m a positive
//! integer prime to p and P, Q, Q' := (m²D − P²)/Q in Z[1/p]. After
//! subtracting a partial quotient a ∈ Z[1/p] and inverting, the new triple is
//!
//!   P₊ = a·Q − P,   Q₊ = Q' + a·(P − P₊),   Q'₊ = Q,
//!
//! so the engine only ever multiplies by small partial quotients and adds.
//! Values of Z[1/p] are stored as unit·p^exp with p ∤ unit, which keeps the
//! representation canonical for exact comparison.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{CfError, Result};
use crate::field::{QuadIrr, Rational};
use crate::padic::{int_valuation, PadicContext};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct PScaled {
    unit: BigInt,
    exp: i64,
}

impl PScaled {
    fn zero() -> Self {
        PScaled {
            unit: BigInt::zero(),
            exp: 0,
        }
    }

    fn normalized(mut unit: BigInt, mut exp: i64, p: &BigInt) -> Self {
        if unit.is_zero() {
            return Self::zero();
        }
        loop {
            let (q, r) = unit.div_rem(p);
            if !r.is_zero() {
                break;
            }
            unit = q;
            exp += 1;
        }
        PScaled { unit, exp }
    }

    /// Requires the denominator of `q` to be a power of p.
    fn from_rational(q: &Rational, p: &BigInt) -> Option<Self> {
        if q.is_zero() {
            return Some(Self::zero());
        }
        let dv = int_valuation(q.denom(), p);
        if q.denom() != &p.pow(dv as u32) {
            return None;
        }
        Some(Self::normalized(q.numer().clone(), -(dv as i64), p))
    }

    fn to_rational(&self, p: &BigInt) -> Rational {
        let scale = p.pow(self.exp.unsigned_abs() as u32);
        if self.exp >= 0 {
            Rational::from_integer(&self.unit * scale)
        } else {
            Rational::new(self.unit.clone(), scale)
        }
    }

    fn add(&self, other: &Self, p: &BigInt) -> Self {
        if self.unit.is_zero() {
            return other.clone();
        }
        if other.unit.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let lift = |x: &Self| &x.unit * p.pow((x.exp - e) as u32);
        Self::normalized(lift(self) + lift(other), e, p)
    }

    fn neg(&self) -> Self {
        PScaled {
            unit: -&self.unit,
            exp: self.exp,
        }
    }

    fn mul(&self, other: &Self) -> Self {
        if self.unit.is_zero() || other.unit.is_zero() {
            return Self::zero();
        }
        PScaled {
            unit: &self.unit * &other.unit,
            exp: self.exp + other.exp,
        }
    }

    pub(crate) fn bits(&self) -> u64 {
        self.unit.bits()
    }
}

/// A complete quotient (P + m√D)/Q together with Q' = (m²D − P²)/Q.
#[derive(Clone, Debug)]
pub(crate) struct Tail {
    p: PScaled,
    q: PScaled,
    q_prev: PScaled,
    m: BigInt,
    d: u64,
    prime: BigInt,
}

impl Tail {
    /// `None` for rational α, or when the prime does not match.
    pub(crate) fn from_quad(alpha: &QuadIrr, prime: u64) -> Option<Tail> {
        if alpha.is_rational() {
            return None;
        }
        let pb = BigInt::from(prime);
        let d = alpha.radicand();
        let p0 = alpha.x() / alpha.y();
        let q0 = alpha.y().recip();
        let qp0 = (Rational::from_integer(BigInt::from(d)) - &p0 * &p0) / &q0;
        // m clears every denominator factor prime to p
        let mut m = BigInt::one();
        for r in [&p0, &q0, &qp0] {
            let den = r.denom();
            let unit = den / pb.pow(int_valuation(den, &pb) as u32);
            m = m.lcm(&unit);
        }
        let scale = Rational::from_integer(m.clone());
        let conv = |r: &Rational| PScaled::from_rational(&(r * &scale), &pb);
        Some(Tail {
            p: conv(&p0)?,
            q: conv(&q0)?,
            q_prev: conv(&qp0)?,
            m,
            d,
            prime: pb,
        })
    }

    pub(crate) fn floors(&self, ctx: &mut PadicContext) -> Result<(Rational, Rational)> {
        ctx.floors_scaled(
            (&self.p.unit, self.p.exp),
            (&self.m, 0),
            (&self.q.unit, self.q.exp),
        )
    }

    /// Replaces α by 1/(α − a).
    pub(crate) fn advance(&mut self, a: &Rational) -> Result<()> {
        let a = PScaled::from_rational(a, &self.prime)
            .ok_or_else(|| CfError::Domain(format!("partial quotient {a} is not in Z[1/p]")))?;
        let p_next = a.mul(&self.q).add(&self.p.neg(), &self.prime);
        let diff = self.p.add(&p_next.neg(), &self.prime);
        let q_next = self.q_prev.add(&a.mul(&diff), &self.prime);
        self.q_prev = std::mem::replace(&mut self.q, q_next);
        self.p = p_next;
        Ok(())
    }

    /// Exact value comparison (m is fixed per expansion).
    pub(crate) fn same_value(&self, other: &Tail) -> bool {
        self.p == other.p && self.q == other.q && self.m == other.m
    }

    pub(crate) fn fingerprint(&self, parity: bool) -> u64 {
        let mut h = DefaultHasher::new();
        parity.hash(&mut h);
        self.p.hash(&mut h);
        self.q.hash(&mut h);
        h.finish()
    }

    pub(crate) fn to_quad(&self) -> QuadIrr {
        let q = self.q.to_rational(&self.prime);
        let x = self.p.to_rational(&self.prime) / &q;
        let y = Rational::from_integer(self.m.clone()) / q;
        QuadIrr::new(x, y, self.d).expect("radicand already validated")
    }

    /// sign(α·ᾱ) = sign((P² − m²D)/Q²).
    pub(crate) fn norm_sign(&self) -> i8 {
        let p = self.p.to_rational(&self.prime);
        let md = Rational::from_integer(&self.m * &self.m * BigInt::from(self.d));
        let n = &p * &p - md;
        if n.is_positive() {
            1
        } else if n.is_negative() {
            -1
        } else {
            0
        }
    }

    pub(crate) fn height_bits(&self) -> u64 {
        self.p.bits().max(self.q.bits())
    }
}
