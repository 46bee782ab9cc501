//! Exact and floating value domains.
//!
//! [`GaussianRational`] is a complex number with arbitrary-precision rational
//! real and imaginary parts, closed under the arithmetic needed for exact
//! evaluation (multiplication, inversion, integer powers). [`Value`] is the
//! common domain for problem data: exact Gaussian rationals, or complex
//! doubles when the input carried decimals.

use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A complex number with exact rational components.
///
/// Components are kept in canonical reduced form (gcd(num, den) = 1,
/// den > 0); `BigRational` maintains that invariant on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_integers(re: i64, im: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    /// Builds `(re_num/re_den) + (im_num/im_den) i`, rejecting zero denominators.
    pub fn from_ratios(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Option<Self> {
        if re_den == 0 || im_den == 0 {
            return None;
        }
        Some(GaussianRational {
            re: BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            im: BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        })
    }

    pub fn zero() -> Self {
        GaussianRational::from_integers(0, 0)
    }

    pub fn one() -> Self {
        GaussianRational::from_integers(1, 0)
    }

    pub fn i() -> Self {
        GaussianRational::from_integers(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// |self|^2 as an exact rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Largest bit-size among the four stored integers.
    pub fn bit_size(&self) -> u64 {
        let b = |r: &BigRational| r.numer().bits().max(r.denom().bits());
        b(&self.re).max(b(&self.im))
    }

    fn check_budget(&self, budget: u64) -> Result<()> {
        let bits = self.bit_size();
        if bits > budget {
            Err(Error::OverflowBudgetExceeded { bits, budget })
        } else {
            Ok(())
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    /// Exact inverse via the conjugate over the norm. Panics on zero; callers
    /// are downstream of zero-base validation.
    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "inverse of zero Gaussian rational");
        GaussianRational {
            re: &self.re / &n,
            im: -(&self.im) / &n,
        }
    }

    /// Integer power by binary exponentiation; negative exponents go through
    /// the exact inverse. Intermediate sizes are held to `bit_budget`.
    pub fn pow(&self, exp: &BigInt, bit_budget: u64) -> Result<Self> {
        let (sign, mag) = (exp.sign(), exp.magnitude());
        let base = if sign == Sign::Minus {
            self.inv()
        } else {
            self.clone()
        };
        base.pow_unsigned(mag, bit_budget)
    }

    fn pow_unsigned(&self, exp: &BigUint, bit_budget: u64) -> Result<Self> {
        if exp.is_zero() {
            return Ok(GaussianRational::one());
        }
        let mut result = GaussianRational::one();
        let nbits = exp.bits();
        for i in (0..nbits).rev() {
            result = result.mul(&result);
            result.check_budget(bit_budget)?;
            if exp.bit(i) {
                result = result.mul(self);
                result.check_budget(bit_budget)?;
            }
        }
        Ok(result)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// ln |self| computed from the exact squared norm, so exact unit-modulus
    /// values map to exactly zero.
    pub fn ln_abs(&self) -> f64 {
        let n = self.norm_sqr();
        if n.is_one() {
            return 0.0;
        }
        0.5 * n.to_f64().unwrap_or(f64::NAN).ln()
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl std::fmt::Display for GaussianRational {
    /// Prints in the DSL `gaussian` syntax: `3/2`, `-1/2i`, `2+3i`, `2-3i`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}i", fmt_rational(&self.im));
        }
        if self.im.is_negative() {
            write!(f, "{}-{}i", fmt_rational(&self.re), fmt_rational(&-&self.im))
        } else {
            write!(f, "{}+{}i", fmt_rational(&self.re), fmt_rational(&self.im))
        }
    }
}

/// Problem datum: exact when every component parsed as a rational, floating
/// when the source used decimal notation (decimals force numeric-only mode).
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(GaussianRational),
    Approx(Complex64),
}

impl Value {
    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(g) => g.is_zero(),
            Value::Approx(c) => c.re == 0.0 && c.im == 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Value::Exact(_) => true,
            Value::Approx(c) => c.re.is_finite() && c.im.is_finite(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&GaussianRational> {
        match self {
            Value::Exact(g) => Some(g),
            Value::Approx(_) => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Value::Exact(g) => g.to_complex(),
            Value::Approx(c) => *c,
        }
    }

    pub fn ln_abs(&self) -> f64 {
        match self {
            Value::Exact(g) => g.ln_abs(),
            Value::Approx(c) => c.norm().ln(),
        }
    }
}

impl From<GaussianRational> for Value {
    fn from(g: GaussianRational) -> Self {
        Value::Exact(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> GaussianRational {
        GaussianRational::from_ratios(re_num, re_den, im_num, im_den).unwrap()
    }

    #[test]
    fn canonical_form_is_reduced() {
        let g = gr(4, 6, -2, 8);
        assert_eq!(g.re(), &BigRational::new(BigInt::from(2), BigInt::from(3)));
        assert_eq!(g.im(), &BigRational::new(BigInt::from(-1), BigInt::from(4)));
        assert!(g.im().denom() > &BigInt::zero());
    }

    #[test]
    fn display_matches_dsl_forms() {
        assert_eq!(gr(3, 2, 0, 1).to_string(), "3/2");
        assert_eq!(gr(0, 1, -1, 2).to_string(), "-1/2i");
        assert_eq!(gr(2, 1, 3, 1).to_string(), "2+3i");
        assert_eq!(gr(2, 1, -3, 1).to_string(), "2-3i");
        assert_eq!(GaussianRational::zero().to_string(), "0");
    }

    #[test]
    fn multiplication_and_inverse() {
        let g = gr(1, 2, 3, 1);
        let prod = g.mul(&g.inv());
        assert_eq!(prod, GaussianRational::one());
    }

    #[test]
    fn integer_powers() {
        let i = GaussianRational::i();
        let p = i.pow(&BigInt::from(4), 1 << 20).unwrap();
        assert_eq!(p, GaussianRational::one());

        let g = gr(2, 1, 0, 1);
        let p = g.pow(&BigInt::from(-3), 1 << 20).unwrap();
        assert_eq!(p, gr(1, 8, 0, 1));

        // 0^0 = 1 by convention
        let z = GaussianRational::from_integers(3, 0);
        assert_eq!(z.pow(&BigInt::zero(), 64).unwrap(), GaussianRational::one());
    }

    #[test]
    fn pow_respects_bit_budget() {
        let g = gr(3, 1, 0, 1);
        let err = g.pow(&BigInt::from(1_000_000), 64).unwrap_err();
        assert!(matches!(err, Error::OverflowBudgetExceeded { .. }));
    }

    #[test]
    fn ln_abs_of_unit_values_is_exactly_zero() {
        assert_eq!(GaussianRational::i().ln_abs(), 0.0);
        // (3/5 + 4/5 i) has exact unit norm
        assert_eq!(gr(3, 5, 4, 5).ln_abs(), 0.0);
    }
}
