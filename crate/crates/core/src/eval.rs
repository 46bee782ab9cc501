//! Evaluation of z(s) itself: exact over Gaussian rationals, numeric in the
//! log domain, or overflow-safe log-magnitude via the spectral exponents.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::companion::exponents_at;
use crate::error::{Error, Result};
use crate::spec::RecursionSpec;
use crate::spectral::{closed_form_exponents, SpectralSolution};
use crate::value::{GaussianRational, Value};

/// Which computation path produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalPath {
    Exact,
    NumericLog,
    SpectralLogMagnitude,
}

impl EvalPath {
    pub fn name(&self) -> &'static str {
        match self {
            EvalPath::Exact => "exact",
            EvalPath::NumericLog => "numeric",
            EvalPath::SpectralLogMagnitude => "logmag",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalValue {
    Exact(GaussianRational),
    Complex(Complex64),
    /// ln |z(s)| only; the argument is not tracked on this path.
    LogMagnitude(f64),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    /// Bit-size of the exact result.
    pub bit_size: Option<u64>,
    /// A floating component overflowed to infinity.
    pub overflow: bool,
    /// Largest imaginary residue among the spectral exponents used.
    pub max_imag: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub step: u64,
    pub value: EvalValue,
    pub path: EvalPath,
    pub diagnostics: Diagnostics,
}

fn exact_inputs(spec: &RecursionSpec) -> Result<(GaussianRational, Vec<GaussianRational>)> {
    let init = spec.initial_values().ok_or(Error::MissingInitialValues)?;
    if !spec.is_exact() {
        return Err(Error::InexactValue);
    }
    let c = spec.constant().as_exact().unwrap().clone();
    let z = init.iter().map(|v| v.as_exact().unwrap().clone()).collect();
    Ok((c, z))
}

/// z(s) = c^gamma(s) * prod_l z(l)^alpha_l(s) with exact integer exponents
/// from the companion engine; agrees with the iteration oracle bit-exactly.
pub fn evaluate_exact(spec: &RecursionSpec, s: u64, bit_budget: u64) -> Result<EvalResult> {
    let (c, z) = exact_inputs(spec)?;
    let ev = exponents_at(spec, s, bit_budget)?;
    let mut value = c.pow(&ev.gamma, bit_budget)?;
    for (l, alpha) in ev.alphas.iter().enumerate() {
        if alpha.is_zero() {
            continue;
        }
        value = value.mul(&z[l].pow(alpha, bit_budget)?);
        let bits = value.bit_size();
        if bits > bit_budget {
            return Err(Error::OverflowBudgetExceeded {
                bits,
                budget: bit_budget,
            });
        }
    }
    let bits = value.bit_size();
    Ok(EvalResult {
        step: s,
        value: EvalValue::Exact(value),
        path: EvalPath::Exact,
        diagnostics: Diagnostics {
            bit_size: Some(bits),
            ..Diagnostics::default()
        },
    })
}

fn complex_inputs(spec: &RecursionSpec) -> Result<(Complex64, Vec<Complex64>)> {
    let init = spec.initial_values().ok_or(Error::MissingInitialValues)?;
    let c = spec.constant().to_complex();
    let z = init.iter().map(Value::to_complex).collect();
    Ok((c, z))
}

/// Floating z(s) through the log-linearized form
/// `exp(gamma(s) Log c + sum_l alpha_l(s) Log z(l))` with principal
/// logarithms and exact integer exponents.
pub fn evaluate_numeric(spec: &RecursionSpec, s: u64, bit_budget: u64) -> Result<EvalResult> {
    evaluate_numeric_shifted(spec, s, 0, &vec![0; spec.order()], bit_budget)
}

/// [`evaluate_numeric`] with explicit branch choices: shift `k` replaces the
/// principal `Log w` by `Log w + 2*pi*i*k` for the corresponding input.
///
/// Because every exponent is an exact integer, the shifts contribute
/// `exp(2*pi*i*m)` with `m = c_shift*gamma + sum_l z_shifts[l]*alpha_l(s)` a
/// whole number of turns. The turn count is accumulated exactly and reduced
/// modulo one before exponentiating; folding `2*pi*m` into the floating sum
/// instead would rotate the result by the rounding error of `2*pi` times m.
/// This is the level at which the branch immunity of the integer-exponent
/// log path holds literally, and it is what makes the result independent of
/// the branch choices.
pub fn evaluate_numeric_shifted(
    spec: &RecursionSpec,
    s: u64,
    c_shift: i64,
    z_shifts: &[i64],
    bit_budget: u64,
) -> Result<EvalResult> {
    let p = spec.order();
    if z_shifts.len() != p {
        return Err(Error::ArityMismatch {
            what: "branch shifts",
            expected: p,
            got: z_shifts.len(),
        });
    }
    let (c, z) = complex_inputs(spec)?;

    // Below the order the ansatz pins z(s) to the initial value itself;
    // return it bit-exactly rather than round-tripping through exp(ln).
    if s < p as u64 {
        return Ok(EvalResult {
            step: s,
            value: EvalValue::Complex(z[s as usize]),
            path: EvalPath::NumericLog,
            diagnostics: Diagnostics::default(),
        });
    }

    let ev = exponents_at(spec, s, bit_budget)?;
    let mut x = Complex64::new(0.0, 0.0);
    let mut turns = BigInt::zero();
    let mut add_term = |log_w: Complex64, exponent: &BigInt, shift: i64, turns: &mut BigInt| {
        *turns += BigInt::from(shift) * exponent;
        if log_w.is_zero() {
            // A unit base contributes nothing even when its exponent is too
            // large for f64.
            return;
        }
        let e = exponent.to_f64().unwrap_or(f64::NAN);
        x += log_w * e;
    };
    add_term(c.ln(), &ev.gamma, c_shift, &mut turns);
    for (l, alpha) in ev.alphas.iter().enumerate() {
        add_term(z[l].ln(), alpha, z_shifts[l], &mut turns);
    }

    // exp(2*pi*i*turns) for the integral turn count: only the fractional
    // part of the turns can produce phase, and for integers it is zero.
    let fractional = turns.mod_floor(&BigInt::one()).to_f64().unwrap();
    let branch_factor = Complex64::from_polar(1.0, std::f64::consts::TAU * fractional);
    let value = x.exp() * branch_factor;

    if !value.is_finite() {
        return Err(Error::OverflowToInfinity);
    }
    Ok(EvalResult {
        step: s,
        value: EvalValue::Complex(value),
        path: EvalPath::NumericLog,
        diagnostics: Diagnostics::default(),
    })
}

/// ln |z(s)| from the spectral exponents; usable at astronomically large
/// steps where exact exponents are unrepresentable. No argument is tracked.
pub fn evaluate_log_magnitude(
    spec: &RecursionSpec,
    solution: &SpectralSolution,
    s: u64,
) -> Result<EvalResult> {
    let init = spec.initial_values().ok_or(Error::MissingInitialValues)?;
    let ev = closed_form_exponents(solution, s);

    let mut ln_abs = 0.0f64;
    let mut add = |coeff: Complex64, ln_w: f64| {
        // Exactly-unit magnitudes contribute zero regardless of how large
        // the (possibly overflowed) spectral exponent is.
        if ln_w != 0.0 {
            ln_abs += coeff.re * ln_w;
        }
    };
    add(ev.gamma, spec.constant().ln_abs());
    for (l, alpha) in ev.alphas.iter().enumerate() {
        add(*alpha, init[l].ln_abs());
    }

    let max_imag = ev
        .alphas
        .iter()
        .map(|a| a.im.abs())
        .chain(std::iter::once(ev.gamma.im.abs()))
        .fold(0.0f64, f64::max);
    Ok(EvalResult {
        step: s,
        value: EvalValue::LogMagnitude(ln_abs),
        path: EvalPath::SpectralLogMagnitude,
        diagnostics: Diagnostics {
            bit_size: None,
            overflow: !ln_abs.is_finite() || ev.overflow,
            max_imag: Some(max_imag),
        },
    })
}
