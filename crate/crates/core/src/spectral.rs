//! Spectral closed form: characteristic roots, coefficient systems, and
//! floating evaluation of the exponent functions.
//!
//! The exponents satisfy linear recursions with characteristic polynomial
//! `y^p - sum_l a_l y^l`, so `alpha_n(s) = sum A_nl b_l(s)` over the basis
//! functions of the roots. Repeated roots use the binomial-falling confluent
//! basis `b_j(s) = C(s, j) * y^(s-j)`, which matches the repeated-root limit
//! of the order-2 formulas exactly and stays integer-valued for integer
//! roots. The gamma recursion carries a constant inhomogeneity; instead of a
//! fixed-point shift (singular when the exponents sum to 1), its system is
//! solved over the augmented polynomial `(y - 1) * charpoly` with initial
//! conditions gamma(0..p) = (0, ..., 0, 1). Multiplicity handling is always
//! active; genericity of the roots is never assumed at runtime.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::spec::RecursionSpec;

/// Knobs for root refinement and the coefficient solve.
#[derive(Debug, Clone)]
pub struct SpectralConfig {
    /// Maximum admissible |charpoly(y)| over the returned roots.
    pub tol: f64,
    /// Roots closer than `cluster * (1 + |y|)` merge into one root with
    /// summed multiplicity.
    pub cluster: f64,
    /// Iteration cap for the simultaneous root refinement.
    pub max_iter: usize,
    /// Pivot-ratio bound beyond which the coefficient system is reported
    /// singular (clustered-but-unmerged roots).
    pub condition_limit: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            tol: 1e-12,
            cluster: 1e-8,
            max_iter: 200,
            condition_limit: 1e12,
        }
    }
}

impl SpectralConfig {
    fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.tol) || !positive(self.cluster) || !positive(self.condition_limit) {
            return Err(Error::ToleranceInvalid);
        }
        Ok(())
    }
}

/// One characteristic root with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// All roots of a polynomial, multiplicities summing to its degree.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Root>,
    /// max |poly(y)| over the returned roots.
    pub residual: f64,
}

impl RootSet {
    pub fn degree(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Basis functions in deterministic order: roots as stored, confluent
    /// order j = 0..multiplicity-1 within each root.
    pub fn basis(&self) -> Vec<BasisFn> {
        let mut out = Vec::with_capacity(self.degree());
        for root in &self.roots {
            for order in 0..root.multiplicity {
                out.push(BasisFn {
                    root: root.value,
                    order,
                });
            }
        }
        out
    }
}

/// One confluent basis function `C(s, order) * root^(s - order)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisFn {
    pub root: Complex64,
    pub order: usize,
}

impl BasisFn {
    /// Evaluates the basis function at step `s`.
    ///
    /// A zero root contributes `C(s,j) * 0^(s-j)`, which under the 0^0 = 1
    /// convention is exactly the Kronecker delta at s = j: the finitely many
    /// correction terms a zero root should produce.
    pub fn eval(&self, s: u64) -> Complex64 {
        let j = self.order as u64;
        if self.root.is_zero() {
            return if s == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        if s < j {
            return Complex64::new(0.0, 0.0);
        }
        let mut binom = 1.0f64;
        for t in 1..=j {
            binom *= (s - j + t) as f64 / t as f64;
        }
        binom * complex_int_pow(self.root, s - j)
    }
}

/// y^k for integer k >= 0. Real roots go through a real power with the sign
/// recovered from the exact parity of k, so real problems pick up no
/// spurious phase at large indices.
fn complex_int_pow(y: Complex64, k: u64) -> Complex64 {
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if y.im == 0.0 {
        let mag = y.re.abs().powf(k as f64);
        let sign = if y.re < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
        return Complex64::new(sign * mag, 0.0);
    }
    y.powf(k as f64)
}

fn char_poly_big(spec: &RecursionSpec) -> Vec<BigInt> {
    spec.char_poly().iter().map(|&c| BigInt::from(c)).collect()
}

fn poly_eval_f64(coeffs: &[f64], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn poly_eval_with_derivative(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Exact synthetic division of a monic integer polynomial by (y - root).
fn deflate_integer(coeffs: &mut Vec<BigInt>, root: &BigInt) {
    let n = coeffs.len() - 1;
    let mut out = vec![BigInt::zero(); n];
    let mut carry = BigInt::zero();
    for k in (0..n).rev() {
        carry = &coeffs[k + 1] + root * &carry;
        out[k] = carry.clone();
    }
    debug_assert!((&coeffs[0] + root * &out[0]).is_zero() || !root.is_zero());
    *coeffs = out;
}

fn poly_eval_big(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn divisors_of(n: i64) -> Vec<i64> {
    let n = n.abs();
    let mut divs = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            divs.push(d);
            if d != n / d {
                divs.push(n / d);
            }
        }
        d += 1;
    }
    divs.sort_unstable();
    let mut out = Vec::with_capacity(divs.len() * 2);
    for d in divs {
        out.push(d);
        out.push(-d);
    }
    out
}

/// Strips zero roots and trial-divides out integer roots; the characteristic
/// polynomial is monic with integer coefficients, so any rational root is an
/// integer dividing the constant term.
fn deflate_exact_roots(coeffs: &mut Vec<BigInt>) -> Vec<(BigInt, usize)> {
    let mut found: Vec<(BigInt, usize)> = Vec::new();
    let bump = |roots: &mut Vec<(BigInt, usize)>, r: BigInt| {
        if let Some(entry) = roots.iter_mut().find(|(v, _)| *v == r) {
            entry.1 += 1;
        } else {
            roots.push((r, 1));
        }
    };

    while coeffs.len() > 1 && coeffs[0].is_zero() {
        coeffs.remove(0);
        bump(&mut found, BigInt::zero());
    }

    'outer: while coeffs.len() > 1 {
        let constant = match coeffs[0].to_i64() {
            Some(c) => c,
            None => break,
        };
        for d in divisors_of(constant) {
            let cand = BigInt::from(d);
            if poly_eval_big(coeffs, &cand).is_zero() {
                deflate_integer(coeffs, &cand);
                bump(&mut found, cand);
                continue 'outer;
            }
        }
        break;
    }
    found
}

fn quadratic_roots(c0: f64, c1: f64) -> Vec<Complex64> {
    // Roots of y^2 + c1 y + c0.
    let disc = c1 * c1 - 4.0 * c0;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let q = if c1 >= 0.0 {
            (-c1 - sq) / 2.0
        } else {
            (-c1 + sq) / 2.0
        };
        let other = if q != 0.0 { c0 / q } else { -c1 - q };
        vec![Complex64::new(q, 0.0), Complex64::new(other, 0.0)]
    } else {
        let re = -c1 / 2.0;
        let im = (-disc).sqrt() / 2.0;
        vec![Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

/// Simultaneous (Aberth-Ehrlich) refinement of all roots of a monic
/// polynomial, seeded on a perturbed circle.
fn aberth(coeffs: &[f64], max_iter: usize) -> Vec<Complex64> {
    let degree = coeffs.len() - 1;
    let radius = 1.0
        + coeffs[..degree]
            .iter()
            .fold(0.0f64, |acc, c| acc.max(c.abs()));
    let mut xs: Vec<Complex64> = (0..degree)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    let ccoeffs: Vec<Complex64> = coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect();

    for _ in 0..max_iter {
        let mut max_step = 0.0f64;
        for k in 0..degree {
            let x = xs[k];
            let (p, dp) = poly_eval_with_derivative(&ccoeffs, x);
            if p.is_zero() {
                continue;
            }
            if dp.is_zero() {
                xs[k] += Complex64::new(1e-8 * (1.0 + x.norm()), 1e-8);
                max_step = f64::INFINITY;
                continue;
            }
            let w = p / dp;
            let mut sum = Complex64::new(0.0, 0.0);
            for (j, &xj) in xs.iter().enumerate() {
                if j != k {
                    let diff = x - xj;
                    if diff.is_zero() {
                        continue;
                    }
                    sum += diff.inv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * sum;
            let delta = if denom.is_zero() { w } else { w / denom };
            xs[k] -= delta;
            max_step = max_step.max(delta.norm() / (1.0 + xs[k].norm()));
        }
        if max_step < 1e-14 {
            break;
        }
    }
    xs
}

/// Merges root candidates closer than the clustering threshold. Exact
/// (integer-deflated) representatives win a merged cluster; otherwise the
/// cluster collapses to its multiplicity-weighted mean.
fn cluster_roots(candidates: Vec<(Complex64, usize, bool)>, cluster: f64) -> Vec<Root> {
    let mut groups: Vec<(Complex64, usize, bool)> = Vec::new();
    for cand in candidates {
        groups.push(cand);
        loop {
            let mut merged = false;
            'scan: for i in 0..groups.len() {
                for j in (i + 1)..groups.len() {
                    let (a, b) = (groups[i], groups[j]);
                    let scale = 1.0 + a.0.norm().max(b.0.norm());
                    if (a.0 - b.0).norm() <= cluster * scale {
                        let mult = a.1 + b.1;
                        let merged_root = if a.2 {
                            (a.0, mult, true)
                        } else if b.2 {
                            (b.0, mult, true)
                        } else {
                            let w = (a.0 * a.1 as f64 + b.0 * b.1 as f64) / mult as f64;
                            (w, mult, false)
                        };
                        groups[i] = merged_root;
                        groups.remove(j);
                        merged = true;
                        break 'scan;
                    }
                }
            }
            if !merged {
                break;
            }
        }
    }
    let mut roots: Vec<Root> = groups
        .into_iter()
        .map(|(value, multiplicity, _)| Root {
            value,
            multiplicity,
        })
        .collect();
    roots.sort_by(|a, b| {
        (a.value.re, a.value.im)
            .partial_cmp(&(b.value.re, b.value.im))
            .unwrap()
    });
    roots
}

/// All roots of the characteristic polynomial `y^p - sum_l a_l y^l`, with
/// multiplicities. Orders 1 and 2 use the exact closed forms; higher orders
/// deflate integer roots by divisor trial and refine the remainder with the
/// simultaneous iteration.
pub fn characteristic_roots(spec: &RecursionSpec, config: &SpectralConfig) -> Result<RootSet> {
    config.validate()?;
    let p = spec.order();
    let a = spec.exponents();

    let mut candidates: Vec<(Complex64, usize, bool)> = Vec::new();
    match p {
        1 => candidates.push((Complex64::new(a[0] as f64, 0.0), 1, true)),
        2 => {
            let (a0, a1) = (a[0], a[1]);
            let disc = a1 * a1 + 4 * a0;
            if disc == 0 {
                candidates.push((Complex64::new(a1 as f64 / 2.0, 0.0), 2, true));
            } else if disc > 0 {
                let d = (disc as f64).sqrt();
                candidates.push((Complex64::new((a1 as f64 + d) / 2.0, 0.0), 1, true));
                candidates.push((Complex64::new((a1 as f64 - d) / 2.0, 0.0), 1, true));
            } else {
                let im = ((-disc) as f64).sqrt() / 2.0;
                let re = a1 as f64 / 2.0;
                candidates.push((Complex64::new(re, im), 1, true));
                candidates.push((Complex64::new(re, -im), 1, true));
            }
        }
        _ => {
            let mut coeffs = char_poly_big(spec);
            for (root, mult) in deflate_exact_roots(&mut coeffs) {
                let value = Complex64::new(root.to_f64().unwrap(), 0.0);
                candidates.push((value, mult, true));
            }
            let remainder: Vec<f64> = coeffs.iter().map(|c| c.to_f64().unwrap()).collect();
            match remainder.len() - 1 {
                0 => {}
                1 => candidates.push((Complex64::new(-remainder[0], 0.0), 1, false)),
                2 => {
                    for r in quadratic_roots(remainder[0], remainder[1]) {
                        candidates.push((r, 1, false));
                    }
                }
                _ => {
                    for r in aberth(&remainder, config.max_iter) {
                        candidates.push((r, 1, false));
                    }
                }
            }
        }
    }

    let roots = cluster_roots(candidates, config.cluster);
    let poly: Vec<f64> = spec.char_poly().iter().map(|&c| c as f64).collect();
    let residual = roots
        .iter()
        .map(|r| poly_eval_f64(&poly, r.value).norm())
        .fold(0.0f64, f64::max);
    if !residual.is_finite() || residual > config.tol {
        return Err(Error::RootFindingFailed {
            residual,
            tol: config.tol,
        });
    }
    Ok(RootSet { roots, residual })
}

/// The assembled closed form: roots, coefficient tables for the alpha and
/// gamma exponent functions, and the fixed-point offset when it exists.
#[derive(Debug, Clone)]
pub struct SpectralSolution {
    /// Roots of the characteristic polynomial (degree p).
    pub root_set: RootSet,
    /// Roots of the gamma-augmented polynomial (y - 1) * charpoly (degree p+1).
    pub gamma_root_set: RootSet,
    /// `alpha_coeffs[n][b]`: coefficient of basis function b in alpha_n.
    pub alpha_coeffs: Vec<Vec<Complex64>>,
    /// Coefficients of gamma over the augmented basis.
    pub gamma_coeffs: Vec<Complex64>,
    /// 1 / (1 - sum a_l) when the exponent sum is not 1; in that case it
    /// coincides with the coefficient of the augmented root y = 1. Absent
    /// under resonance, where the inhomogeneity is absorbed by the extra
    /// multiplicity at y = 1.
    pub gamma_offset: Option<f64>,
}

impl SpectralSolution {
    pub fn order(&self) -> usize {
        self.alpha_coeffs.len()
    }
}

/// LU factorization with partial pivoting, reused across the p right-hand
/// sides of the alpha system.
struct LuFactor {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

impl LuFactor {
    fn new(matrix: Vec<Vec<Complex64>>, condition_limit: f64) -> Result<Self> {
        let n = matrix.len();
        let mut lu: Vec<Complex64> = matrix.into_iter().flatten().collect();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut max_pivot = 0.0f64;
        let mut min_pivot = f64::INFINITY;

        for col in 0..n {
            let (best, best_norm) = (col..n)
                .map(|r| (r, lu[r * n + col].norm()))
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .unwrap();
            if best != col {
                for j in 0..n {
                    lu.swap(col * n + j, best * n + j);
                }
                perm.swap(col, best);
            }
            max_pivot = max_pivot.max(best_norm);
            min_pivot = min_pivot.min(best_norm);
            if best_norm == 0.0 {
                return Err(Error::SingularSystem {
                    condition: f64::INFINITY,
                });
            }
            let pivot = lu[col * n + col];
            for r in (col + 1)..n {
                let factor = lu[r * n + col] / pivot;
                lu[r * n + col] = factor;
                for j in (col + 1)..n {
                    let sub = factor * lu[col * n + j];
                    lu[r * n + j] -= sub;
                }
            }
        }
        let condition = max_pivot / min_pivot;
        if condition > condition_limit {
            return Err(Error::SingularSystem { condition });
        }
        Ok(LuFactor { n, lu, perm })
    }

    fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&i| rhs[i]).collect();
        for i in 1..n {
            for j in 0..i {
                let sub = self.lu[i * n + j] * x[j];
                x[i] -= sub;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let sub = self.lu[i * n + j] * x[j];
                x[i] -= sub;
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }
}

fn vandermonde(basis: &[BasisFn], rows: usize) -> Vec<Vec<Complex64>> {
    (0..rows)
        .map(|s| basis.iter().map(|b| b.eval(s as u64)).collect())
        .collect()
}

/// Augments the characteristic roots with the factor (y - 1) for the gamma
/// system. Under resonance y = 1 is already a root (found exactly by the
/// integer deflation), so its multiplicity is bumped instead.
fn augment_with_unit_root(spec: &RecursionSpec, root_set: &RootSet) -> RootSet {
    let mut roots = root_set.roots.clone();
    if spec.is_resonant() {
        let nearest = roots
            .iter_mut()
            .min_by(|a, b| {
                let da = (a.value - 1.0).norm();
                let db = (b.value - 1.0).norm();
                da.partial_cmp(&db).unwrap()
            })
            .expect("root set is nonempty");
        debug_assert!((nearest.value - 1.0).norm() < 1e-6);
        nearest.value = Complex64::new(1.0, 0.0);
        nearest.multiplicity += 1;
    } else {
        roots.push(Root {
            value: Complex64::new(1.0, 0.0),
            multiplicity: 1,
        });
        roots.sort_by(|a, b| {
            (a.value.re, a.value.im)
                .partial_cmp(&(b.value.re, b.value.im))
                .unwrap()
        });
    }
    RootSet {
        roots,
        residual: root_set.residual,
    }
}

/// Solves the (confluent) Vandermonde systems fixing the closed form from
/// the initial conditions: alpha_n matches the Kronecker delta over steps
/// 0..p-1, and gamma matches (0, ..., 0, 1) over steps 0..p of the
/// augmented system.
pub fn solve_coefficients(
    spec: &RecursionSpec,
    root_set: &RootSet,
    config: &SpectralConfig,
) -> Result<SpectralSolution> {
    config.validate()?;
    let p = spec.order();
    debug_assert_eq!(root_set.degree(), p);

    let basis = root_set.basis();
    let lu = LuFactor::new(vandermonde(&basis, p), config.condition_limit)?;
    let alpha_coeffs: Vec<Vec<Complex64>> = (0..p)
        .map(|n| {
            let mut rhs = vec![Complex64::new(0.0, 0.0); p];
            rhs[n] = Complex64::new(1.0, 0.0);
            lu.solve(&rhs)
        })
        .collect();

    let gamma_root_set = augment_with_unit_root(spec, root_set);
    let gamma_basis = gamma_root_set.basis();
    let lu_gamma = LuFactor::new(vandermonde(&gamma_basis, p + 1), config.condition_limit)?;
    let mut rhs = vec![Complex64::new(0.0, 0.0); p + 1];
    rhs[p] = Complex64::new(1.0, 0.0);
    let gamma_coeffs = lu_gamma.solve(&rhs);

    let gamma_offset = if spec.is_resonant() {
        None
    } else {
        Some(1.0 / (1.0 - spec.exponent_sum() as f64))
    };

    Ok(SpectralSolution {
        root_set: root_set.clone(),
        gamma_root_set,
        alpha_coeffs,
        gamma_coeffs,
        gamma_offset,
    })
}

/// Convenience: roots plus coefficients in one call.
pub fn solve(spec: &RecursionSpec, config: &SpectralConfig) -> Result<SpectralSolution> {
    let roots = characteristic_roots(spec, config)?;
    solve_coefficients(spec, &roots, config)
}

/// Floating exponents from the closed form. Imaginary parts are carried
/// through so callers can check they stay small for real problems.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralExponents {
    pub step: u64,
    pub gamma: Complex64,
    pub alphas: Vec<Complex64>,
    /// Set when any component overflowed to a floating infinity.
    pub overflow: bool,
}

/// Evaluates the closed form `alpha_n(s) = sum A_nb b(s)` and
/// `gamma(s) = sum C_b b(s)` at an arbitrary step.
pub fn closed_form_exponents(solution: &SpectralSolution, s: u64) -> SpectralExponents {
    let basis = solution.root_set.basis();
    let basis_values: Vec<Complex64> = basis.iter().map(|b| b.eval(s)).collect();
    let alphas: Vec<Complex64> = solution
        .alpha_coeffs
        .iter()
        .map(|row| {
            row.iter()
                .zip(&basis_values)
                .map(|(c, b)| c * b)
                .sum::<Complex64>()
        })
        .collect();

    let gamma = solution
        .gamma_root_set
        .basis()
        .iter()
        .zip(&solution.gamma_coeffs)
        .map(|(b, c)| c * b.eval(s))
        .sum::<Complex64>();

    let overflow = !gamma.is_finite() || alphas.iter().any(|a| !a.is_finite());
    SpectralExponents {
        step: s,
        gamma,
        alphas,
        overflow,
    }
}
