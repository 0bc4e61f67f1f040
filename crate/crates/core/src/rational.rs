//! Arbitrary-precision rationals and dyadic membership tests.
//!
//! `Rational` is a reduced fraction with positive denominator; `num-rational`
//! maintains that canonical form on every operation. Everything downstream
//! (breakpoints, slopes, matrix entries) is built on it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::NumError;

pub type Rational = BigRational;

/// `n/d` from machine integers. Panics if `d == 0`; test and constant use only.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// 2^k as a rational, for any sign of `k`.
pub fn pow2(k: i64) -> Rational {
    if k >= 0 {
        Rational::from(BigInt::one() << (k as usize))
    } else {
        Rational::new(BigInt::one(), BigInt::one() << ((-k) as usize))
    }
}

/// If `n` is a power of two, returns the exponent.
fn pow2_exponent(n: &BigInt) -> Option<u64> {
    if !n.is_positive() {
        return None;
    }
    let bits = n.bits();
    if n == &(BigInt::one() << (bits - 1) as usize) {
        Some(bits - 1)
    } else {
        None
    }
}

/// True iff the (reduced) denominator is a power of two.
pub fn is_dyadic(x: &Rational) -> bool {
    pow2_exponent(x.denom()).is_some()
}

/// Returns `Some(n)` iff `x = 2^n`. Errors on `x <= 0`.
pub fn dyadic_exponent(x: &Rational) -> Result<Option<i64>, NumError> {
    if !x.is_positive() {
        return Err(NumError::NonPositive);
    }
    if x.numer().is_one() {
        return Ok(pow2_exponent(x.denom()).map(|k| -(k as i64)));
    }
    if x.denom().is_one() {
        return Ok(pow2_exponent(x.numer()).map(|k| k as i64));
    }
    Ok(None)
}

/// Lossy conversion for float cross-checks. Shifts both parts down when they
/// exceed f64 range so the quotient stays finite.
pub fn rational_to_f64(x: &Rational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(900) as usize;
    let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_membership() {
        assert!(is_dyadic(&rat(3, 8)));
        assert!(is_dyadic(&rat_int(7)));
        assert!(!is_dyadic(&rat(1, 3)));
        assert!(!is_dyadic(&rat(5, 6)));
    }

    #[test]
    fn exponent_of_powers_of_two() {
        assert_eq!(dyadic_exponent(&rat(1, 2)).unwrap(), Some(-1));
        assert_eq!(dyadic_exponent(&rat_int(8)).unwrap(), Some(3));
        assert_eq!(dyadic_exponent(&rat_int(1)).unwrap(), Some(0));
        assert_eq!(dyadic_exponent(&rat_int(3)).unwrap(), None);
        assert_eq!(dyadic_exponent(&rat(3, 4)).unwrap(), None);
        assert!(dyadic_exponent(&rat_int(0)).is_err());
        assert!(dyadic_exponent(&rat(-1, 2)).is_err());
    }

    #[test]
    fn pow2_both_signs() {
        assert_eq!(pow2(3), rat_int(8));
        assert_eq!(pow2(-2), rat(1, 4));
        assert_eq!(pow2(0), rat_int(1));
    }

    #[test]
    fn f64_conversion_is_close() {
        assert!((rational_to_f64(&rat(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(rational_to_f64(&rat_int(0)), 0.0);
    }
}
