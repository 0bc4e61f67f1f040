//! Integer-matrix fractional-linear maps `t -> (p t + q)/(r t + s)` with
//! positive determinant, in canonical scaling.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact::ExactNumber;
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MobiusError {
    #[error("determinant must be positive")]
    NonPositiveDeterminant,
}

/// Canonical form: entries coprime integers, first nonzero entry positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mobius {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    s: BigInt,
}

impl Mobius {
    pub fn new(p: BigInt, q: BigInt, r: BigInt, s: BigInt) -> Result<Self, MobiusError> {
        let m = Mobius { p, q, r, s }.normalized();
        if m.det().is_positive() {
            Ok(m)
        } else {
            Err(MobiusError::NonPositiveDeterminant)
        }
    }

    pub fn from_rationals(
        p: &Rational,
        q: &Rational,
        r: &Rational,
        s: &Rational,
    ) -> Result<Self, MobiusError> {
        let l = p
            .denom()
            .lcm(q.denom())
            .lcm(&r.denom().lcm(s.denom()));
        let scale = Rational::from(l);
        Mobius::new(
            (p * &scale).to_integer(),
            (q * &scale).to_integer(),
            (r * &scale).to_integer(),
            (s * &scale).to_integer(),
        )
    }

    pub fn identity() -> Self {
        Mobius {
            p: BigInt::from(1),
            q: BigInt::zero(),
            r: BigInt::zero(),
            s: BigInt::from(1),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Mobius::identity()
    }

    fn normalized(self) -> Self {
        let Mobius { p, q, r, s } = self;
        let g = p.gcd(&q).gcd(&r.gcd(&s));
        let (mut p, mut q, mut r, mut s) = (p / &g, q / &g, r / &g, s / &g);
        let first = [&p, &q, &r, &s].into_iter().find(|v| !v.is_zero());
        if matches!(first, Some(v) if v.is_negative()) {
            p = -p;
            q = -q;
            r = -r;
            s = -s;
        }
        Mobius { p, q, r, s }
    }

    pub fn entries(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.p, &self.q, &self.r, &self.s)
    }

    pub fn det(&self) -> BigInt {
        &self.p * &self.s - &self.q * &self.r
    }

    /// True when the map is affine (no pole), i.e. `r == 0`.
    pub fn is_affine(&self) -> bool {
        self.r.is_zero()
    }

    /// The pole `-s/r` if there is one.
    pub fn pole(&self) -> Option<Rational> {
        if self.r.is_zero() {
            None
        } else {
            Some(Rational::new(-self.s.clone(), self.r.clone()))
        }
    }

    /// Image of a point. Finite irrational inputs never hit the pole; finite
    /// rational inputs at the pole return `None`. At the infinities the
    /// projective limit is returned.
    pub fn apply(&self, t: &ExactNumber) -> Option<ExactNumber> {
        match t {
            ExactNumber::PosInf | ExactNumber::NegInf => {
                if self.r.is_zero() {
                    // Affine with positive slope.
                    Some(t.clone())
                } else {
                    Some(ExactNumber::Rat(Rational::new(
                        self.p.clone(),
                        self.r.clone(),
                    )))
                }
            }
            _ => {
                let num = t.affine(
                    &Rational::from(self.p.clone()),
                    &Rational::from(self.q.clone()),
                );
                let den = t.affine(
                    &Rational::from(self.r.clone()),
                    &Rational::from(self.s.clone()),
                );
                if den.is_zero() {
                    return None;
                }
                Some(
                    num.try_mul(&den.try_invert().expect("nonzero denominator"))
                        .expect("same-field quotient"),
                )
            }
        }
    }

    /// Composition in right-action order: apply `self`, then `g`.
    pub fn then(&self, g: &Mobius) -> Mobius {
        Mobius {
            p: &g.p * &self.p + &g.q * &self.r,
            q: &g.p * &self.q + &g.q * &self.s,
            r: &g.r * &self.p + &g.s * &self.r,
            s: &g.r * &self.q + &g.s * &self.s,
        }
        .normalized()
    }

    pub fn inverse(&self) -> Mobius {
        Mobius {
            p: self.s.clone(),
            q: -self.q.clone(),
            r: -self.r.clone(),
            s: self.p.clone(),
        }
        .normalized()
    }

    /// Derivative `det/(r t + s)^2` at a finite point off the pole.
    pub fn derivative(&self, t: &ExactNumber) -> ExactNumber {
        let den = t.affine(
            &Rational::from(self.r.clone()),
            &Rational::from(self.s.clone()),
        );
        let den2 = den.try_mul(&den).expect("same-field square");
        ExactNumber::Rat(Rational::from(self.det()))
            .try_mul(&den2.try_invert().expect("off the pole"))
            .expect("same-field quotient")
    }

    /// Coefficients `(a, b, c)` of the fixed-point equation
    /// `r t^2 + (s - p) t - q = 0`.
    pub fn fixed_point_quadratic(&self) -> (Rational, Rational, Rational) {
        (
            Rational::from(self.r.clone()),
            Rational::from(&self.s - &self.p),
            Rational::from(-self.q.clone()),
        )
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.p, self.q, self.r, self.s)
    }
}
