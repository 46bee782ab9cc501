//! Exact exponent engine: fast doubling of an augmented companion matrix.
//!
//! The linear recursions for the exponents alpha_n and gamma share the same
//! coefficients; one (p+1)x(p+1) integer matrix advances both. The extra
//! row/column carries the constant inhomogeneity of the gamma recursion, so
//! the engine stays total even in the resonant case (sum of exponents = 1),
//! where a fixed-point shift would divide by zero.
//!
//! Layout for order p with exponents a_0..a_{p-1}:
//!
//! ```text
//! | 0   1   ...  0   | 0 |
//! | ...      1       | 0 |
//! | a_0 a_1 ... a_p-1| 1 |
//! | 0   0   ...  0   | 1 |
//! ```
//!
//! Applied to the window (x(s), ..., x(s+p-1), t) it yields the window at
//! s+1, with t = 0 for an alpha stream and t = 1 for the gamma stream. The
//! step-s exponents are therefore exactly the first row of the s-th power:
//! alpha_n(s) at column n and gamma(s) at column p.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::oracle::ExponentVector;
use crate::spec::RecursionSpec;

/// Companion matrix of the exponent recursions, augmented with the constant
/// row. Entries are exact integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedCompanion {
    dim: usize,
    entries: Vec<BigInt>,
}

impl AugmentedCompanion {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.dim + col]
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigInt::one();
        }
        AugmentedCompanion { dim, entries }
    }

    pub fn multiply(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut entries = vec![BigInt::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = &self.entries[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = &other.entries[k * d + j];
                    if !b.is_zero() {
                        entries[i * d + j] += a * b;
                    }
                }
            }
        }
        AugmentedCompanion { dim: d, entries }
    }

    pub fn max_bits(&self) -> u64 {
        self.entries.iter().map(|e| e.bits()).max().unwrap_or(0)
    }

    fn check_budget(&self, budget: u64) -> Result<()> {
        let bits = self.max_bits();
        if bits > budget {
            Err(Error::OverflowBudgetExceeded { bits, budget })
        } else {
            Ok(())
        }
    }

    /// Square-and-multiply over the binary decomposition of the exponent.
    pub fn pow(&self, exp: u64, bit_budget: u64) -> Result<Self> {
        let mut result = AugmentedCompanion::identity(self.dim);
        if exp == 0 {
            return Ok(result);
        }
        let nbits = 64 - exp.leading_zeros();
        for i in (0..nbits).rev() {
            result = result.multiply(&result);
            result.check_budget(bit_budget)?;
            if (exp >> i) & 1 == 1 {
                result = result.multiply(self);
                result.check_budget(bit_budget)?;
            }
        }
        Ok(result)
    }
}

/// Builds the augmented companion matrix for a validated spec.
pub fn build_companion(spec: &RecursionSpec) -> AugmentedCompanion {
    let p = spec.order();
    let d = p + 1;
    let mut entries = vec![BigInt::zero(); d * d];
    for i in 0..p.saturating_sub(1) {
        entries[i * d + i + 1] = BigInt::one();
    }
    for (l, &a) in spec.exponents().iter().enumerate() {
        entries[(p - 1) * d + l] = BigInt::from(a);
    }
    entries[(p - 1) * d + p] = BigInt::one();
    entries[p * d + p] = BigInt::one();
    AugmentedCompanion { dim: d, entries }
}

/// Exact exponents at an arbitrary step in O(log s) matrix products.
pub fn exponents_at(spec: &RecursionSpec, s: u64, bit_budget: u64) -> Result<ExponentVector> {
    let p = spec.order();
    let power = build_companion(spec).pow(s, bit_budget)?;
    let alphas = (0..p).map(|n| power.entry(0, n).clone()).collect();
    Ok(ExponentVector {
        step: s,
        gamma: power.entry(0, p).clone(),
        alphas,
    })
}

/// Fixed-width modular matrix over Z_m, for exponent queries at indices far
/// beyond any exact bit budget.
#[derive(Clone)]
struct ModMatrix {
    dim: usize,
    modulus: u64,
    entries: Vec<u64>,
}

impl ModMatrix {
    fn identity(dim: usize, modulus: u64) -> Self {
        let mut entries = vec![0u64; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1 % modulus;
        }
        ModMatrix {
            dim,
            modulus,
            entries,
        }
    }

    fn multiply(&self, other: &Self) -> Self {
        let d = self.dim;
        let m = self.modulus as u128;
        let mut entries = vec![0u64; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k] as u128;
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    let b = other.entries[k * d + j] as u128;
                    let cur = entries[i * d + j] as u128;
                    entries[i * d + j] = ((cur + a * b % m) % m) as u64;
                }
            }
        }
        ModMatrix {
            dim: d,
            modulus: self.modulus,
            entries,
        }
    }

    fn pow(&self, exp: u64) -> Self {
        let mut result = ModMatrix::identity(self.dim, self.modulus);
        if exp == 0 {
            return result;
        }
        let nbits = 64 - exp.leading_zeros();
        for i in (0..nbits).rev() {
            result = result.multiply(&result);
            if (exp >> i) & 1 == 1 {
                result = result.multiply(self);
            }
        }
        result
    }
}

/// Exponents at step `s` reduced modulo `m`, componentwise equal to
/// [`exponents_at`] mod m. Residues are returned in `[0, m)`.
pub fn exponents_at_mod(spec: &RecursionSpec, s: u64, m: u64) -> Result<ExponentVector> {
    if m < 2 {
        return Err(Error::InvalidModulus { modulus: m });
    }
    let p = spec.order();
    let d = p + 1;
    let mut base = ModMatrix::identity(d, m);
    base.entries.fill(0);
    for i in 0..p.saturating_sub(1) {
        base.entries[i * d + i + 1] = 1 % m;
    }
    for (l, &a) in spec.exponents().iter().enumerate() {
        base.entries[(p - 1) * d + l] = (a as i128).rem_euclid(m as i128) as u64;
    }
    base.entries[(p - 1) * d + p] = 1 % m;
    base.entries[p * d + p] = 1 % m;

    let power = base.pow(s);
    let alphas = (0..p)
        .map(|n| BigInt::from(power.entries[n]))
        .collect();
    Ok(ExponentVector {
        step: s,
        gamma: BigInt::from(power.entries[p]),
        alphas,
    })
}
