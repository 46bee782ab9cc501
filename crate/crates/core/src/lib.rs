//! Closed-form solver for multiplicative recursions
//! `z(s+p) = c * prod_{l=0}^{p-1} z(s+l)^{a_l}` with integer exponents.
//!
//! Writing `z(s) = c^gamma(s) * prod_l z(l)^alpha_l(s)` turns the nonlinear
//! recursion into linear integer recursions for the exponent functions
//! `gamma` and `alpha_l`. This crate computes those exponents three ways and
//! cross-checks them:
//!
//! - [`oracle::oracle_iterate`] / [`oracle::oracle_exponents`]: literal
//!   step-by-step iteration, the ground truth;
//! - [`companion::exponents_at`]: exact values at arbitrary steps in
//!   O(log s) via fast doubling of an augmented companion matrix (with a
//!   modular variant for astronomically large steps);
//! - [`spectral`]: the characteristic-root closed form with confluent
//!   (repeated-root) and resonant cases handled.
//!
//! [`eval`] produces z(s) itself — exactly over Gaussian rationals, or
//! numerically through the log-linearized form — and [`io`] supplies the
//! problem DSL, JSON documents, and solution rendering.

pub mod companion;
pub mod error;
pub mod eval;
pub mod io;
pub mod oracle;
pub mod reference;
pub mod spec;
pub mod spectral;
pub mod value;

pub use companion::{build_companion, exponents_at, exponents_at_mod, AugmentedCompanion};
pub use error::{Error, ParseError, Result};
pub use eval::{
    evaluate_exact, evaluate_log_magnitude, evaluate_numeric, evaluate_numeric_shifted,
    Diagnostics, EvalPath, EvalResult, EvalValue,
};
pub use io::{
    parse_problem, parse_recursion, problem_from_json, problem_to_json, render_solution,
    solution_to_json, spec_to_dsl, ProblemDocument, Query, QueryPath,
};
pub use oracle::{oracle_exponents, oracle_iterate, ExponentVector};
pub use reference::reference_exponents;
pub use spec::{RecursionSpec, DEFAULT_BIT_BUDGET};
pub use spectral::{
    characteristic_roots, closed_form_exponents, solve as spectral_solve, solve_coefficients,
    BasisFn, Root, RootSet, SpectralConfig, SpectralExponents, SpectralSolution,
};
pub use value::{GaussianRational, Value};
