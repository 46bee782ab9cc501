//! Problem statement: the recursion z(s+p) = c * prod_l z(s+l)^a_l.

use crate::error::{Error, Result};
use crate::value::Value;

/// Default cap on the bit-size of any exact numerator or denominator.
///
/// Exponents grow geometrically with the step, so exact values can explode;
/// the budget turns a silent multi-minute hang into a clean error.
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 20;

/// A validated multiplicative recursion of order `p`:
/// `z(s+p) = c * z(s)^a0 * z(s+1)^a1 * ... * z(s+p-1)^a_{p-1}`.
///
/// Construction is the validation gate: order at least 1, exactly `order`
/// exponents, the constant and every initial value nonzero and finite, and
/// `initial_values` (when given) of length `order`. Fields stay private so
/// the invariants cannot be bypassed.
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionSpec {
    order: usize,
    exponents: Vec<i64>,
    constant: Value,
    initial_values: Option<Vec<Value>>,
}

impl RecursionSpec {
    pub fn new(
        order: usize,
        exponents: Vec<i64>,
        constant: Value,
        initial_values: Option<Vec<Value>>,
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::OrderZero);
        }
        if exponents.len() != order {
            return Err(Error::ArityMismatch {
                what: "exponents",
                expected: order,
                got: exponents.len(),
            });
        }
        if let Some(init) = &initial_values {
            if init.len() != order {
                return Err(Error::ArityMismatch {
                    what: "initial values",
                    expected: order,
                    got: init.len(),
                });
            }
        }
        if constant.is_zero() {
            return Err(Error::ZeroBase);
        }
        if !constant.is_finite() {
            return Err(Error::NonFiniteValue);
        }
        if let Some(init) = &initial_values {
            for v in init {
                if v.is_zero() {
                    return Err(Error::ZeroBase);
                }
                if !v.is_finite() {
                    return Err(Error::NonFiniteValue);
                }
            }
        }
        Ok(RecursionSpec {
            order,
            exponents,
            constant,
            initial_values,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn constant(&self) -> &Value {
        &self.constant
    }

    pub fn initial_values(&self) -> Option<&[Value]> {
        self.initial_values.as_deref()
    }

    /// Sum of the exponents a_l. The recursion is resonant when this is 1
    /// (y = 1 is then a characteristic root).
    pub fn exponent_sum(&self) -> i64 {
        self.exponents.iter().sum()
    }

    pub fn is_resonant(&self) -> bool {
        self.exponent_sum() == 1
    }

    /// True when the constant and all initial values are exact rationals.
    pub fn is_exact(&self) -> bool {
        self.constant.is_exact()
            && self
                .initial_values
                .as_ref()
                .map_or(true, |init| init.iter().all(Value::is_exact))
    }

    /// Coefficients of the characteristic polynomial
    /// `y^p - a_{p-1} y^{p-1} - ... - a_0`, constant term first, monic.
    pub fn char_poly(&self) -> Vec<i64> {
        let mut coeffs: Vec<i64> = self.exponents.iter().map(|a| -a).collect();
        coeffs.push(1);
        coeffs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::GaussianRational;

    fn exact(n: i64) -> Value {
        Value::Exact(GaussianRational::from_integers(n, 0))
    }

    #[test]
    fn accepts_canonical_spec() {
        let spec =
            RecursionSpec::new(1, vec![2], exact(3), Some(vec![exact(5)])).unwrap();
        assert_eq!(spec.order(), 1);
        assert_eq!(spec.exponents(), &[2]);
    }

    #[test]
    fn rejects_zero_constant() {
        let err = RecursionSpec::new(2, vec![-1, 2], exact(0), Some(vec![exact(1), exact(1)]))
            .unwrap_err();
        assert_eq!(err, Error::ZeroBase);
    }

    #[test]
    fn rejects_zero_initial_value() {
        let err = RecursionSpec::new(2, vec![-1, 2], exact(1), Some(vec![exact(1), exact(0)]))
            .unwrap_err();
        assert_eq!(err, Error::ZeroBase);
    }

    #[test]
    fn rejects_wrong_exponent_count() {
        let err =
            RecursionSpec::new(2, vec![1], exact(1), Some(vec![exact(1), exact(1)])).unwrap_err();
        assert!(matches!(err, Error::ArityMismatch { what: "exponents", .. }));
    }

    #[test]
    fn rejects_wrong_initial_count() {
        let err = RecursionSpec::new(2, vec![1, 1], exact(1), Some(vec![exact(1)])).unwrap_err();
        assert!(matches!(
            err,
            Error::ArityMismatch { what: "initial values", .. }
        ));
    }

    #[test]
    fn rejects_order_zero() {
        let err = RecursionSpec::new(0, vec![], exact(1), None).unwrap_err();
        assert_eq!(err, Error::OrderZero);
    }

    #[test]
    fn char_poly_layout() {
        let spec = RecursionSpec::new(2, vec![-1, 2], exact(1), None).unwrap();
        // y^2 - 2y + 1; sum of exponents is 1, so y = 1 is a root
        assert_eq!(spec.char_poly(), vec![1, -2, 1]);
        assert!(spec.is_resonant());
        let spec = RecursionSpec::new(2, vec![1, 1], exact(1), None).unwrap();
        assert!(!spec.is_resonant());
    }
}
