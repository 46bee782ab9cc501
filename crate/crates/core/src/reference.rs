//! Published closed-form exponent formulas for orders 1 and 2, evaluated in
//! exact integer arithmetic. These serve purely as an independent test
//! oracle against the companion-matrix engine; they are not a code path the
//! solver itself uses.
//!
//! Order 2 has four branches keyed on (a0, a1):
//! - the doubly special case a1 = 2, a0 = -1 (polynomial exponents),
//! - the repeated-root case a0 = -(a1/2)^2 (discriminant zero),
//! - the resonant case a1 + a0 = 1 with a1 != 2,
//! - the generic case, evaluated through integer root powers when the
//!   discriminant is a perfect square and otherwise through the
//!   symmetric-function recurrence U(s+2) = a1 U(s+1) + a0 U(s), which keeps
//!   every intermediate integral.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::oracle::ExponentVector;
use crate::spec::RecursionSpec;

fn exact_div(numer: BigInt, denom: &BigInt) -> BigInt {
    debug_assert!(!denom.is_zero());
    let (q, r) = num_integer::Integer::div_rem(&numer, denom);
    debug_assert!(r.is_zero(), "division expected to be exact");
    q
}

fn pow_u64(base: &BigInt, exp: u64) -> BigInt {
    // BigInt pow with the 0^0 = 1 convention (num-bigint already honors it).
    Pow::pow(base, exp)
}

fn perfect_sqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = (n as f64).sqrt().round() as i64;
    for cand in [r - 1, r, r + 1] {
        if cand >= 0 && cand * cand == n {
            return Some(cand);
        }
    }
    None
}

/// Geometric sum 1 + r + ... + r^(s-1), integral for any integer r.
fn geometric_sum(r: &BigInt, s: u64) -> BigInt {
    let mut acc = BigInt::zero();
    let mut term = BigInt::one();
    for _ in 0..s {
        acc += &term;
        term *= r;
    }
    acc
}

fn order_one(a: i64, s: u64) -> ExponentVector {
    if a == 1 {
        // Limit of the generic branch: alpha(s) = 1, gamma(s) = s.
        return ExponentVector {
            step: s,
            gamma: BigInt::from(s),
            alphas: vec![BigInt::one()],
        };
    }
    let a_big = BigInt::from(a);
    let alpha = pow_u64(&a_big, s);
    let gamma = exact_div(BigInt::one() - &alpha, &(BigInt::one() - &a_big));
    ExponentVector {
        step: s,
        gamma,
        alphas: vec![alpha],
    }
}

/// gamma from the sum identity (1 - alpha_1 - alpha_0) / (1 - a1 - a0);
/// valid away from resonance, where the denominator is nonzero.
fn gamma_from_sum(a0: i64, a1: i64, alpha0: &BigInt, alpha1: &BigInt) -> BigInt {
    let denom = BigInt::from(1 - a1 - a0);
    exact_div(BigInt::one() - alpha1 - alpha0, &denom)
}

fn order_two(a0: i64, a1: i64, s: u64) -> ExponentVector {
    if s < 2 {
        return ExponentVector::seed(2, s);
    }

    let (gamma, alpha0, alpha1);
    if a1 == 2 && a0 == -1 {
        // z(s) = c^{s(s-1)/2} z(1)^s z(0)^{1-s}
        let sb = BigInt::from(s);
        alpha1 = sb.clone();
        alpha0 = BigInt::one() - &sb;
        gamma = exact_div(&sb * (&sb - BigInt::one()), &BigInt::from(2));
    } else if 4 * a0 == -(a1 * a1) {
        // Discriminant zero: y = a1/2, alpha_1 = s y^{s-1}, alpha_0 = (1-s) y^s.
        let y = BigInt::from(a1 / 2);
        alpha1 = BigInt::from(s) * pow_u64(&y, s - 1);
        alpha0 = (BigInt::one() - BigInt::from(s)) * pow_u64(&y, s);
        gamma = gamma_from_sum(a0, a1, &alpha0, &alpha1);
    } else if a0 + a1 == 1 {
        // Resonant case, a1 != 2: the z(1)/z(0) exponent is
        // [1 - (a1-1)^s] / (2 - a1), i.e. the geometric sum in (a1 - 1).
        let r = BigInt::from(a1 - 1);
        alpha1 = geometric_sum(&r, s);
        alpha0 = BigInt::one() - &alpha1;
        let mut g = BigInt::zero();
        for l in 0..=(s - 2) {
            g += BigInt::from(s - 1 - l) * pow_u64(&r, l);
        }
        gamma = g;
    } else if let Some(d) = perfect_sqrt(a1 * a1 + 4 * a0) {
        // Generic case with rational roots y_± = (a1 ± d)/2; both integral
        // because d and a1 share parity.
        let d_big = BigInt::from(d);
        let yp = BigInt::from((a1 + d) / 2);
        let ym = BigInt::from((a1 - d) / 2);
        alpha1 = exact_div(pow_u64(&yp, s) - pow_u64(&ym, s), &d_big);
        alpha0 = BigInt::from(a0)
            * exact_div(pow_u64(&yp, s - 1) - pow_u64(&ym, s - 1), &d_big);
        gamma = gamma_from_sum(a0, a1, &alpha0, &alpha1);
    } else {
        // Generic case with irrational or complex roots: evaluate
        // U(s) = (y_+^s - y_-^s)/d through its own recurrence, noting
        // -y_+ y_- = a0, so alpha_0(s) = a0 U(s-1).
        let (mut u_prev, mut u_cur) = (BigInt::zero(), BigInt::one());
        for _ in 1..s {
            let next = BigInt::from(a1) * &u_cur + BigInt::from(a0) * &u_prev;
            u_prev = std::mem::replace(&mut u_cur, next);
        }
        alpha1 = u_cur;
        alpha0 = BigInt::from(a0) * &u_prev;
        gamma = gamma_from_sum(a0, a1, &alpha0, &alpha1);
    }

    ExponentVector {
        step: s,
        gamma,
        alphas: vec![alpha0, alpha1],
    }
}

/// Exact exponents from the published order-1/order-2 formulas.
/// Returns `UnsupportedOrder` for p > 2.
pub fn reference_exponents(spec: &RecursionSpec, s: u64) -> Result<ExponentVector> {
    match spec.order() {
        1 => {
            if s == 0 {
                Ok(ExponentVector::seed(1, 0))
            } else {
                Ok(order_one(spec.exponents()[0], s))
            }
        }
        2 => Ok(order_two(spec.exponents()[0], spec.exponents()[1], s)),
        p => Err(Error::UnsupportedOrder { order: p }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::companion::exponents_at;
    use crate::spec::DEFAULT_BIT_BUDGET;
    use crate::value::{GaussianRational, Value};

    fn spec(exponents: Vec<i64>) -> RecursionSpec {
        let one = Value::Exact(GaussianRational::from_integers(1, 0));
        RecursionSpec::new(exponents.len(), exponents, one, None).unwrap()
    }

    #[test]
    fn order_one_generic() {
        let ev = reference_exponents(&spec(vec![2]), 5).unwrap();
        assert_eq!(ev.alphas[0], BigInt::from(32));
        assert_eq!(ev.gamma, BigInt::from(31));
    }

    #[test]
    fn order_one_unit_exponent() {
        // z(s+1) = c z(s) gives z(s) = c^s z(0): gamma = s, alpha = 1.
        let ev = reference_exponents(&spec(vec![1]), 7).unwrap();
        assert_eq!(ev.gamma, BigInt::from(7));
        assert_eq!(ev.alphas[0], BigInt::one());
    }

    #[test]
    fn order_two_doubly_special() {
        let ev = reference_exponents(&spec(vec![-1, 2]), 5).unwrap();
        assert_eq!(ev.gamma, BigInt::from(10));
        assert_eq!(ev.alphas[1], BigInt::from(5));
        assert_eq!(ev.alphas[0], BigInt::from(-4));
    }

    #[test]
    fn order_two_resonant() {
        // a1 = -1, a0 = 2: alpha_1(4) = (1 - (-2)^4)/3 = -5, gamma(4) = 3.
        let ev = reference_exponents(&spec(vec![2, -1]), 4).unwrap();
        assert_eq!(ev.alphas[1], BigInt::from(-5));
        assert_eq!(ev.alphas[0], BigInt::from(6));
        assert_eq!(ev.gamma, BigInt::from(3));
    }

    #[test]
    fn order_two_resonant_step_two() {
        // The sum convention yields gamma(2) = 1, matching the exact engine.
        for a1 in [-4i64, -1, 0, 1, 3, 4] {
            let a0 = 1 - a1;
            let sp = spec(vec![a0, a1]);
            let ev = reference_exponents(&sp, 2).unwrap();
            assert_eq!(ev.gamma, BigInt::one(), "a1 = {a1}");
            assert_eq!(ev, exponents_at(&sp, 2, DEFAULT_BIT_BUDGET).unwrap());
        }
    }

    #[test]
    fn order_two_irrational_roots_match_engine() {
        let sp = spec(vec![1, 1]);
        for s in 0..=20 {
            let want = exponents_at(&sp, s, DEFAULT_BIT_BUDGET).unwrap();
            assert_eq!(reference_exponents(&sp, s).unwrap(), want);
        }
    }

    #[test]
    fn order_two_complex_roots_match_engine() {
        // a1 = 0, a0 = -1: roots ±i.
        let sp = spec(vec![-1, 0]);
        for s in 0..=16 {
            let want = exponents_at(&sp, s, DEFAULT_BIT_BUDGET).unwrap();
            assert_eq!(reference_exponents(&sp, s).unwrap(), want);
        }
    }

    #[test]
    fn unsupported_order() {
        assert_eq!(
            reference_exponents(&spec(vec![1, 1, 1]), 3).unwrap_err(),
            Error::UnsupportedOrder { order: 3 }
        );
    }
}
