//! Exact numbers: rationals, real quadratic irrationals, and the two
//! infinities used as interval endpoints on the line.
//!
//! A `QuadReal` is stored as `base + scale*sqrt(radicand)` with `scale != 0`
//! and a square-free radicand `>= 2`, so structural equality is semantic
//! equality and the minimal polynomial is recovered on demand. Numbers from
//! distinct quadratic fields are compared exactly (equality is impossible
//! across square-free radicands; ordering is decided by refining dyadic
//! bounds on the square roots) but never combined arithmetically.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::rational::{rational_to_f64, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands lie in distinct quadratic fields")]
    IncompatibleFields,
    #[error("operand is infinite")]
    InfiniteOperand,
    #[error("all coefficients are zero")]
    AllCoefficientsZero,
    #[error("argument must be positive")]
    NonPositive,
}

/// `base + scale*sqrt(radicand)`, with `scale != 0` and `radicand` square-free, `>= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadReal {
    base: Rational,
    scale: Rational,
    radicand: BigInt,
}

/// A point of the extended real line with exact comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExactNumber {
    NegInf,
    Rat(Rational),
    Quad(QuadReal),
    PosInf,
}

/// Splits `n > 0` as `s^2 * d` with `d` square-free.
///
/// Trial division by small primes, then a perfect-square check on the
/// cofactor. A cofactor below `TRIAL_BOUND^3` that survives both steps is
/// square-free; radicands here come from discriminants of desk-scale
/// quadratics and stay far below that.
fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    const TRIAL_BOUND: u64 = 10_000;
    debug_assert!(n.is_positive());
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut free = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest && p <= BigInt::from(TRIAL_BOUND) {
        let mut e = 0u32;
        while rest.is_multiple_of(&p) {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            square *= p.pow(e / 2);
            if e % 2 == 1 {
                free *= &p;
            }
        }
        p += 1;
    }
    if rest > BigInt::one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            square *= r;
        } else {
            free *= rest;
        }
    }
    (square, free)
}

/// Dyadic lower/upper bounds on `sqrt(d)`, refined by bisection.
struct SqrtBounds {
    d: Rational,
    lo: Rational,
    hi: Rational,
}

impl SqrtBounds {
    fn new(d: &BigInt) -> Self {
        let root = d.sqrt();
        SqrtBounds {
            d: Rational::from(d.clone()),
            lo: Rational::from(root.clone()),
            hi: Rational::from(root + BigInt::one()),
        }
    }

    fn refine(&mut self) {
        let mid = (&self.lo + &self.hi) / Rational::from(BigInt::from(2));
        if &mid * &mid <= self.d {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }
}

impl QuadReal {
    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    /// Sign of `base + scale*sqrt(d)`. Never zero: the value is irrational.
    fn sign(&self) -> Ordering {
        let p = &self.base;
        let q = &self.scale;
        if p.is_zero() {
            return if q.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
        match (p.is_positive(), q.is_positive()) {
            (true, true) => Ordering::Greater,
            (false, false) => Ordering::Less,
            (true, false) | (false, true) => {
                // Compare p^2 against q^2 d; equality would force sqrt(d) rational.
                let p2 = p * p;
                let q2d = q * q * Rational::from(self.radicand.clone());
                debug_assert_ne!(p2, q2d);
                if p.is_positive() {
                    if p2 > q2d {
                        Ordering::Greater
                    } else {
                        Ordering::Less
                    }
                } else if q2d > p2 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    fn cmp_rational(&self, r: &Rational) -> Ordering {
        QuadReal {
            base: &self.base - r,
            scale: self.scale.clone(),
            radicand: self.radicand.clone(),
        }
        .sign()
    }

    fn cmp_quad(&self, other: &QuadReal) -> Ordering {
        if self.radicand == other.radicand {
            if self.scale == other.scale {
                return self.base.cmp(&other.base);
            }
            return QuadReal {
                base: &self.base - &other.base,
                scale: &self.scale - &other.scale,
                radicand: self.radicand.clone(),
            }
            .sign();
        }
        // Distinct square-free radicands: the values cannot be equal, so
        // bisection of the isolating bounds separates them.
        let mut a = SqrtBounds::new(&self.radicand);
        let mut b = SqrtBounds::new(&other.radicand);
        for _ in 0..20_000 {
            let (alo, ahi) = bounds_for(&self.base, &self.scale, &a);
            let (blo, bhi) = bounds_for(&other.base, &other.scale, &b);
            if ahi <= blo {
                return Ordering::Less;
            }
            if bhi <= alo {
                return Ordering::Greater;
            }
            a.refine();
            b.refine();
        }
        unreachable!("cross-field comparison failed to separate distinct values");
    }

    /// Integer minimal polynomial `a t^2 + b t + c` with `a > 0`, gcd 1.
    pub fn minimal_polynomial(&self) -> (BigInt, BigInt, BigInt) {
        // (t - base)^2 = scale^2 d  =>  t^2 - 2 base t + (base^2 - scale^2 d)
        let b = -(&self.base + &self.base);
        let c = &self.base * &self.base
            - &self.scale * &self.scale * Rational::from(self.radicand.clone());
        let denom_lcm = b.denom().lcm(c.denom());
        let a_int = denom_lcm.clone();
        let b_int = (b * Rational::from(denom_lcm.clone())).to_integer();
        let c_int = (c * Rational::from(denom_lcm)).to_integer();
        let g = a_int.gcd(&b_int).gcd(&c_int);
        (a_int / &g, b_int / &g, c_int / &g)
    }

    /// Rational interval containing this root of its minimal polynomial and
    /// excluding the conjugate root.
    pub fn isolating_interval(&self) -> (Rational, Rational) {
        let b = SqrtBounds::new(&self.radicand);
        let (lo, hi) = bounds_for(&self.base, &self.scale, &b);
        (lo, hi)
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.base)
            + rational_to_f64(&self.scale) * self.radicand.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

/// Value bounds for `base + scale*sqrt(d)` from bounds on `sqrt(d)`.
fn bounds_for(base: &Rational, scale: &Rational, b: &SqrtBounds) -> (Rational, Rational) {
    if scale.is_positive() {
        (base + scale * &b.lo, base + scale * &b.hi)
    } else {
        (base + scale * &b.hi, base + scale * &b.lo)
    }
}

impl ExactNumber {
    pub fn zero() -> Self {
        ExactNumber::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        ExactNumber::Rat(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        ExactNumber::Rat(Rational::from(BigInt::from(n)))
    }

    /// Canonical `base + scale*sqrt(radicand)`; collapses to `Rat` when the
    /// value is rational. `radicand` must be nonnegative.
    pub fn quad(base: Rational, scale: Rational, radicand: BigInt) -> Self {
        assert!(!radicand.is_negative(), "negative radicand");
        if scale.is_zero() || radicand.is_zero() {
            return ExactNumber::Rat(base);
        }
        let (square, free) = squarefree_split(&radicand);
        let scale = scale * Rational::from(square);
        if free.is_one() {
            return ExactNumber::Rat(base + scale);
        }
        ExactNumber::Quad(QuadReal {
            base,
            scale,
            radicand: free,
        })
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExactNumber::Rat(_) | ExactNumber::Quad(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            ExactNumber::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactNumber::Rat(r) if r.is_zero())
    }

    pub fn try_add(&self, other: &ExactNumber) -> Result<ExactNumber, NumError> {
        use ExactNumber::*;
        match (self, other) {
            (Rat(a), Rat(b)) => Ok(Rat(a + b)),
            (Rat(r), Quad(q)) | (Quad(q), Rat(r)) => Ok(Quad(QuadReal {
                base: &q.base + r,
                scale: q.scale.clone(),
                radicand: q.radicand.clone(),
            })),
            (Quad(a), Quad(b)) => {
                if a.radicand != b.radicand {
                    return Err(NumError::IncompatibleFields);
                }
                Ok(ExactNumber::quad(
                    &a.base + &b.base,
                    &a.scale + &b.scale,
                    a.radicand.clone(),
                ))
            }
            _ => Err(NumError::InfiniteOperand),
        }
    }

    pub fn try_neg(&self) -> Result<ExactNumber, NumError> {
        use ExactNumber::*;
        match self {
            Rat(r) => Ok(Rat(-r)),
            Quad(q) => Ok(Quad(QuadReal {
                base: -&q.base,
                scale: -&q.scale,
                radicand: q.radicand.clone(),
            })),
            _ => Err(NumError::InfiniteOperand),
        }
    }

    pub fn try_sub(&self, other: &ExactNumber) -> Result<ExactNumber, NumError> {
        self.try_add(&other.try_neg()?)
    }

    pub fn try_mul(&self, other: &ExactNumber) -> Result<ExactNumber, NumError> {
        use ExactNumber::*;
        match (self, other) {
            (Rat(a), Rat(b)) => Ok(Rat(a * b)),
            (Rat(r), Quad(q)) | (Quad(q), Rat(r)) => {
                Ok(ExactNumber::quad(&q.base * r, &q.scale * r, q.radicand.clone()))
            }
            (Quad(a), Quad(b)) => {
                if a.radicand != b.radicand {
                    return Err(NumError::IncompatibleFields);
                }
                let d = Rational::from(a.radicand.clone());
                Ok(ExactNumber::quad(
                    &a.base * &b.base + &a.scale * &b.scale * d,
                    &a.base * &b.scale + &a.scale * &b.base,
                    a.radicand.clone(),
                ))
            }
            _ => Err(NumError::InfiniteOperand),
        }
    }

    pub fn try_invert(&self) -> Result<ExactNumber, NumError> {
        use ExactNumber::*;
        match self {
            Rat(r) => {
                if r.is_zero() {
                    Err(NumError::DivisionByZero)
                } else {
                    Ok(Rat(r.recip()))
                }
            }
            Quad(q) => {
                // 1/(p + q sqrt d) = (p - q sqrt d)/(p^2 - q^2 d); the norm is
                // nonzero because the value is irrational.
                let norm = &q.base * &q.base
                    - &q.scale * &q.scale * Rational::from(q.radicand.clone());
                Ok(ExactNumber::quad(
                    &q.base / &norm,
                    -(&q.scale) / &norm,
                    q.radicand.clone(),
                ))
            }
            _ => Err(NumError::InfiniteOperand),
        }
    }

    /// `a*self + b` with rational `a`, `b`; requires a finite value.
    pub(crate) fn affine(&self, a: &Rational, b: &Rational) -> ExactNumber {
        match self {
            ExactNumber::Rat(r) => ExactNumber::Rat(a * r + b),
            ExactNumber::Quad(q) => {
                ExactNumber::quad(a * &q.base + b, a * &q.scale, q.radicand.clone())
            }
            _ => panic!("affine map of an infinite value"),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactNumber::NegInf => f64::NEG_INFINITY,
            ExactNumber::Rat(r) => rational_to_f64(r),
            ExactNumber::Quad(q) => q.to_f64(),
            ExactNumber::PosInf => f64::INFINITY,
        }
    }
}

impl From<Rational> for ExactNumber {
    fn from(r: Rational) -> Self {
        ExactNumber::Rat(r)
    }
}

impl From<&Rational> for ExactNumber {
    fn from(r: &Rational) -> Self {
        ExactNumber::Rat(r.clone())
    }
}

impl Ord for ExactNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExactNumber::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Rat(a), Rat(b)) => a.cmp(b),
            (Rat(r), Quad(q)) => q.cmp_rational(r).reverse(),
            (Quad(q), Rat(r)) => q.cmp_rational(r),
            (Quad(a), Quad(b)) => a.cmp_quad(b),
        }
    }
}

impl PartialOrd for ExactNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExactNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactNumber::NegInf => write!(f, "-inf"),
            ExactNumber::PosInf => write!(f, "inf"),
            ExactNumber::Rat(r) => write!(f, "{}", r),
            ExactNumber::Quad(q) => {
                let (a, b, c) = q.minimal_polynomial();
                let (lo, hi) = q.isolating_interval();
                write!(f, "root({},{},{};[{},{}])", a, b, c, lo, hi)
            }
        }
    }
}

/// Real roots of `a t^2 + b t + c` in increasing order, each canonical.
pub fn quad_roots(
    a: &Rational,
    b: &Rational,
    c: &Rational,
) -> Result<Vec<ExactNumber>, NumError> {
    if a.is_zero() && b.is_zero() && c.is_zero() {
        return Err(NumError::AllCoefficientsZero);
    }
    if a.is_zero() {
        if b.is_zero() {
            return Ok(vec![]);
        }
        return Ok(vec![ExactNumber::Rat(-(c / b))]);
    }
    let disc = b * b - Rational::from(BigInt::from(4)) * a * c;
    match disc.cmp(&Rational::zero()) {
        Ordering::Less => Ok(vec![]),
        Ordering::Equal => Ok(vec![ExactNumber::Rat(
            -(b / (Rational::from(BigInt::from(2)) * a)),
        )]),
        Ordering::Greater => {
            // sqrt(n/d) = sqrt(n d)/d
            let nd = disc.numer() * disc.denom();
            let (square, free) = squarefree_split(&nd);
            let sqrt_scale = Rational::new(square, disc.denom().clone());
            let two_a = Rational::from(BigInt::from(2)) * a;
            let base = -(b / &two_a);
            let scale = sqrt_scale / &two_a;
            let mut roots = vec![
                ExactNumber::quad(base.clone(), scale.clone(), free.clone()),
                ExactNumber::quad(base, -scale, free),
            ];
            roots.sort();
            Ok(roots)
        }
    }
}

/// A rational bracket below / above a finite value.
fn rational_below(x: &ExactNumber) -> Rational {
    match x {
        ExactNumber::Rat(r) => r - Rational::one(),
        ExactNumber::Quad(q) => q.isolating_interval().0,
        _ => panic!("finite value required"),
    }
}

fn rational_above(x: &ExactNumber) -> Rational {
    match x {
        ExactNumber::Rat(r) => r + Rational::one(),
        ExactNumber::Quad(q) => q.isolating_interval().1,
        _ => panic!("finite value required"),
    }
}

/// Some rational strictly between `a` and `b`, which must satisfy `a < b`.
/// Works across quadratic fields and with infinite endpoints.
pub fn rational_between(a: &ExactNumber, b: &ExactNumber) -> Rational {
    assert!(a < b, "rational_between needs a < b");
    match (a.is_finite(), b.is_finite()) {
        (false, false) => return Rational::zero(),
        (false, true) => return rational_below(b) - Rational::one(),
        (true, false) => return rational_above(a) + Rational::one(),
        _ => {}
    }
    if let (Some(ra), Some(rb)) = (a.as_rational(), b.as_rational()) {
        return (ra + rb) / Rational::from(BigInt::from(2));
    }
    // Bisect a rational bracket around (a, b); the bracket always contains
    // the gap, so some midpoint eventually falls strictly inside it.
    let mut lo = rational_below(a);
    let mut hi = rational_above(b);
    loop {
        let mid = (&lo + &hi) / Rational::from(BigInt::from(2));
        let m = ExactNumber::Rat(mid.clone());
        if m <= *a {
            lo = mid;
        } else if m >= *b {
            hi = mid;
        } else {
            return mid;
        }
    }
}

/// Evaluates `a t^2 + b t + c` at a finite exact point, within its field.
pub fn eval_quadratic(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    t: &ExactNumber,
) -> Result<ExactNumber, NumError> {
    let t2 = t.try_mul(t)?;
    let at2 = t2.try_mul(&ExactNumber::Rat(a.clone()))?;
    let bt = t.try_mul(&ExactNumber::Rat(b.clone()))?;
    at2.try_add(&bt)?.try_add(&ExactNumber::Rat(c.clone()))
}
