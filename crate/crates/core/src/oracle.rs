//! Ground-truth oracles: literal step-by-step iteration of the nonlinear
//! recursion and of the linear exponent recursions. Every other computation
//! path in the crate is checked against these.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::spec::RecursionSpec;
use crate::value::GaussianRational;

/// The exact integer exponents at one step: z(s) = c^gamma * prod_l z(l)^alphas[l].
///
/// For s < p the entries are pinned by the ansatz itself: gamma = 0 and
/// alphas[n] = 1 exactly when n = s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentVector {
    pub step: u64,
    pub gamma: BigInt,
    pub alphas: Vec<BigInt>,
}

impl ExponentVector {
    /// The seed window entry for step s < p (Kronecker delta on alphas).
    pub fn seed(order: usize, step: u64) -> Self {
        assert!((step as usize) < order, "seed only covers steps below the order");
        let alphas = (0..order)
            .map(|n| {
                if n as u64 == step {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        ExponentVector {
            step,
            gamma: BigInt::zero(),
            alphas,
        }
    }

    pub fn max_bits(&self) -> u64 {
        self.alphas
            .iter()
            .map(|a| a.bits())
            .chain(std::iter::once(self.gamma.bits()))
            .max()
            .unwrap_or(0)
    }
}

fn check_bits(bits: u64, budget: u64) -> Result<()> {
    if bits > budget {
        Err(Error::OverflowBudgetExceeded { bits, budget })
    } else {
        Ok(())
    }
}

/// Iterates the recursion exactly from the initial data, returning
/// z(0)..z(s_max). Requires exact values; this is the ground truth.
pub fn oracle_iterate(
    spec: &RecursionSpec,
    s_max: u64,
    bit_budget: u64,
) -> Result<Vec<GaussianRational>> {
    let init = spec.initial_values().ok_or(Error::MissingInitialValues)?;
    if !spec.is_exact() {
        return Err(Error::InexactValue);
    }
    let c = spec.constant().as_exact().unwrap().clone();
    let p = spec.order();

    let mut values: Vec<GaussianRational> = init
        .iter()
        .map(|v| v.as_exact().unwrap().clone())
        .collect();
    values.truncate(((s_max + 1) as usize).min(values.len()));

    while (values.len() as u64) <= s_max {
        let s = values.len() - p;
        let mut next = c.clone();
        for (l, &a) in spec.exponents().iter().enumerate() {
            if a == 0 {
                continue;
            }
            let factor = values[s + l].pow(&BigInt::from(a), bit_budget)?;
            next = next.mul(&factor);
            check_bits(next.bit_size(), bit_budget)?;
        }
        values.push(next);
    }
    Ok(values)
}

/// Iterates the linear exponent recursions
/// `alpha_n(s+p) = sum_l a_l alpha_n(s+l)` and
/// `gamma(s+p) = 1 + sum_l a_l gamma(s+l)`
/// from the Kronecker-delta seed window, returning steps 0..s_max.
pub fn oracle_exponents(
    spec: &RecursionSpec,
    s_max: u64,
    bit_budget: u64,
) -> Result<Vec<ExponentVector>> {
    let p = spec.order();
    let mut out: Vec<ExponentVector> = (0..p as u64)
        .take_while(|&s| s <= s_max)
        .map(|s| ExponentVector::seed(p, s))
        .collect();

    while (out.len() as u64) <= s_max {
        let s = out.len() - p;
        let step = out.len() as u64;
        let mut gamma = BigInt::one();
        let mut alphas = vec![BigInt::zero(); p];
        for (l, &a) in spec.exponents().iter().enumerate() {
            if a == 0 {
                continue;
            }
            let a = BigInt::from(a);
            gamma += &a * &out[s + l].gamma;
            for (n, alpha) in alphas.iter_mut().enumerate() {
                *alpha += &a * &out[s + l].alphas[n];
            }
        }
        let ev = ExponentVector { step, gamma, alphas };
        check_bits(ev.max_bits(), bit_budget)?;
        out.push(ev);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::DEFAULT_BIT_BUDGET;
    use crate::value::Value;

    fn exact(n: i64) -> Value {
        Value::Exact(GaussianRational::from_integers(n, 0))
    }

    fn spec(exponents: Vec<i64>, c: i64, init: &[i64]) -> RecursionSpec {
        let init = if init.is_empty() {
            None
        } else {
            Some(init.iter().map(|&n| exact(n)).collect())
        };
        RecursionSpec::new(exponents.len(), exponents, exact(c), init).unwrap()
    }

    fn ints(values: &[i64]) -> Vec<GaussianRational> {
        values
            .iter()
            .map(|&n| GaussianRational::from_integers(n, 0))
            .collect()
    }

    #[test]
    fn iterate_order_one_linear() {
        let s = spec(vec![1], 2, &[3]);
        let vals = oracle_iterate(&s, 3, DEFAULT_BIT_BUDGET).unwrap();
        assert_eq!(vals, ints(&[3, 6, 12, 24]));
    }

    #[test]
    fn iterate_ratio_recursion() {
        // z(s+2) = z(s+1)^2 / z(s): geometric with ratio 3
        let s = spec(vec![-1, 2], 1, &[2, 6]);
        let vals = oracle_iterate(&s, 4, DEFAULT_BIT_BUDGET).unwrap();
        assert_eq!(vals, ints(&[2, 6, 18, 54, 162]));
    }

    #[test]
    fn iterate_product_recursion() {
        let s = spec(vec![1, 1], 1, &[2, 3]);
        let vals = oracle_iterate(&s, 4, DEFAULT_BIT_BUDGET).unwrap();
        assert_eq!(vals, ints(&[2, 3, 6, 18, 108]));
    }

    #[test]
    fn iterate_requires_initial_values() {
        let s = spec(vec![2], 3, &[]);
        assert_eq!(
            oracle_iterate(&s, 2, DEFAULT_BIT_BUDGET).unwrap_err(),
            Error::MissingInitialValues
        );
    }

    #[test]
    fn iterate_hits_bit_budget() {
        let s = spec(vec![2], 7, &[5]);
        let err = oracle_iterate(&s, 64, 256).unwrap_err();
        assert!(matches!(err, Error::OverflowBudgetExceeded { .. }));
    }

    #[test]
    fn exponents_fibonacci_pattern() {
        let s = spec(vec![1, 1], 1, &[]);
        let evs = oracle_exponents(&s, 6, DEFAULT_BIT_BUDGET).unwrap();
        let at = |s: usize| &evs[s];
        assert_eq!(at(6).alphas[1], BigInt::from(8));
        assert_eq!(at(6).alphas[0], BigInt::from(5));
        assert_eq!(at(6).gamma, BigInt::from(12));
    }

    #[test]
    fn exponents_seed_window() {
        let s = spec(vec![-3, 2], 5, &[]);
        let evs = oracle_exponents(&s, 1, DEFAULT_BIT_BUDGET).unwrap();
        assert_eq!(evs[1].gamma, BigInt::zero());
        assert_eq!(evs[1].alphas[1], BigInt::one());
        assert_eq!(evs[1].alphas[0], BigInt::zero());
    }

    #[test]
    fn exponents_order_one_doubling() {
        let s = spec(vec![2], 1, &[]);
        let evs = oracle_exponents(&s, 5, DEFAULT_BIT_BUDGET).unwrap();
        assert_eq!(evs[5].alphas[0], BigInt::from(32));
        assert_eq!(evs[5].gamma, BigInt::from(31));
    }

    #[test]
    fn reconstruction_identity_small() {
        let s = spec(vec![1, 1], 1, &[2, 3]);
        let vals = oracle_iterate(&s, 8, DEFAULT_BIT_BUDGET).unwrap();
        let evs = oracle_exponents(&s, 8, DEFAULT_BIT_BUDGET).unwrap();
        let c = s.constant().as_exact().unwrap();
        let z: Vec<_> = s
            .initial_values()
            .unwrap()
            .iter()
            .map(|v| v.as_exact().unwrap().clone())
            .collect();
        for ev in &evs {
            let mut v = c.pow(&ev.gamma, DEFAULT_BIT_BUDGET).unwrap();
            for (l, alpha) in ev.alphas.iter().enumerate() {
                v = v.mul(&z[l].pow(alpha, DEFAULT_BIT_BUDGET).unwrap());
            }
            assert_eq!(v, vals[ev.step as usize]);
        }
    }
}
