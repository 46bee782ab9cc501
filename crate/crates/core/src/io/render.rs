//! Deterministic text and JSON rendering of specs and spectral solutions.

use num_complex::Complex64;

use crate::spec::RecursionSpec;
use crate::spectral::{BasisFn, RootSet, SpectralSolution};
use crate::value::Value;

/// Fixed formatting: exact integers print plainly, everything else with 17
/// significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.fract() == 0.0 && x.abs() < 9e15 {
        return format!("{}", x as i64);
    }
    format!("{x:.16e}")
}

pub fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        fmt_f64(z.re)
    } else if z.re == 0.0 {
        format!("{}i", fmt_f64(z.im))
    } else if z.im < 0.0 {
        format!("{}-{}i", fmt_f64(z.re), fmt_f64(-z.im))
    } else {
        format!("{}+{}i", fmt_f64(z.re), fmt_f64(z.im))
    }
}

fn fmt_value(v: &Value) -> String {
    match v {
        Value::Exact(g) => g.to_string(),
        Value::Approx(c) => {
            // Force a decimal marker so the rendered form parses back as a
            // floating value.
            let one = |x: f64| {
                let s = format!("{x}");
                if s.contains('.') || s.contains('e') || s.contains("inf") || s.contains("NaN") {
                    s
                } else {
                    format!("{s}.0")
                }
            };
            if c.im == 0.0 {
                one(c.re)
            } else if c.re == 0.0 {
                format!("{}i", one(c.im))
            } else if c.im < 0.0 {
                format!("{}-{}i", one(c.re), one(-c.im))
            } else {
                format!("{}+{}i", one(c.re), one(c.im))
            }
        }
    }
}

/// Canonical DSL form of a spec; parsing it back yields an equal spec.
pub fn spec_to_dsl(spec: &RecursionSpec) -> String {
    let p = spec.order();
    let mut out = format!("z(n+{p}) = c");
    for l in (0..p).rev() {
        let a = spec.exponents()[l];
        if a == 0 {
            continue;
        }
        if l == 0 {
            out.push_str(" * z(n)");
        } else {
            out.push_str(&format!(" * z(n+{l})"));
        }
        if a != 1 {
            out.push_str(&format!("^{a}"));
        }
    }
    out.push_str(&format!("; c = {}", fmt_value(spec.constant())));
    if let Some(init) = spec.initial_values() {
        for (l, v) in init.iter().enumerate() {
            out.push_str(&format!("; z({l}) = {}", fmt_value(v)));
        }
    }
    out
}

fn fmt_char_poly(spec: &RecursionSpec) -> String {
    let p = spec.order();
    let mut out = if p == 1 {
        "y".to_string()
    } else {
        format!("y^{p}")
    };
    for l in (0..p).rev() {
        let c = -spec.exponents()[l];
        if c == 0 {
            continue;
        }
        let sign = if c < 0 { " - " } else { " + " };
        let mag = c.abs();
        out.push_str(sign);
        let var = match l {
            0 => String::new(),
            1 => "y".to_string(),
            _ => format!("y^{l}"),
        };
        if var.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag == 1 {
            out.push_str(&var);
        } else {
            out.push_str(&format!("{mag}*{var}"));
        }
    }
    out
}

fn root_is(z: Complex64, x: f64) -> bool {
    z.re == x && z.im == 0.0
}

fn fmt_root_base(root: Complex64) -> String {
    if root.im == 0.0 && root.re > 0.0 && root.re.fract() == 0.0 {
        fmt_f64(root.re)
    } else {
        format!("({})", fmt_complex(root))
    }
}

/// The s-dependent part of one basis function, or `None` for the constant.
fn fmt_basis(b: &BasisFn) -> Option<String> {
    let j = b.order;
    if root_is(b.root, 0.0) {
        return Some(format!("delta(s,{j})"));
    }
    if root_is(b.root, 1.0) {
        return match j {
            0 => None,
            1 => Some("s".to_string()),
            _ => Some(format!("C(s,{j})")),
        };
    }
    let base = fmt_root_base(b.root);
    Some(match j {
        0 => format!("{base}^s"),
        1 => format!("s*{base}^(s-1)"),
        _ => format!("C(s,{j})*{base}^(s-{j})"),
    })
}

struct Term {
    negative: bool,
    body: String,
}

fn render_term(coeff: Complex64, basis: &BasisFn) -> Option<Term> {
    if coeff.norm() <= 1e-12 {
        return None;
    }
    let basis_str = fmt_basis(basis);
    if coeff.im.abs() <= 1e-12 * (1.0 + coeff.re.abs()) {
        let negative = coeff.re < 0.0;
        let mag = coeff.re.abs();
        let coeff_str = if mag == 1.0 { None } else { Some(fmt_f64(mag)) };
        let body = match (coeff_str, basis_str) {
            (None, None) => "1".to_string(),
            (None, Some(b)) => b,
            (Some(c), None) => c,
            (Some(c), Some(b)) => format!("{c}*{b}"),
        };
        Some(Term { negative, body })
    } else {
        let coeff_str = format!("({})", fmt_complex(coeff));
        let body = match basis_str {
            None => coeff_str,
            Some(b) => format!("{coeff_str}*{b}"),
        };
        Some(Term {
            negative: false,
            body,
        })
    }
}

/// Renders `sum coeff_b * b(s)` with the dominant root first.
fn render_formula(coeffs: &[Complex64], basis: &[BasisFn]) -> String {
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by(|&a, &b| {
        let ka = (basis[a].root.norm(), basis[a].root.re, basis[a].root.im);
        let kb = (basis[b].root.norm(), basis[b].root.re, basis[b].root.im);
        kb.partial_cmp(&ka)
            .unwrap()
            .then(basis[a].order.cmp(&basis[b].order))
    });
    let mut out = String::new();
    for idx in order {
        let Some(term) = render_term(coeffs[idx], &basis[idx]) else {
            continue;
        };
        if out.is_empty() {
            if term.negative {
                out.push('-');
            }
            out.push_str(&term.body);
        } else {
            out.push_str(if term.negative { " - " } else { " + " });
            out.push_str(&term.body);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn alpha_name(p: usize, n: usize) -> String {
    if p == 1 {
        "alpha(s)".to_string()
    } else {
        format!("alpha_{n}(s)")
    }
}

fn render_roots(out: &mut String, set: &RootSet) {
    for root in &set.roots {
        out.push_str(&format!(
            "  y = {}  (multiplicity {})\n",
            fmt_complex(root.value),
            root.multiplicity
        ));
    }
}

/// Human-readable closed form: roots, coefficient formulas, offset, and the
/// assembled solution.
pub fn render_solution(solution: &SpectralSolution, spec: &RecursionSpec) -> String {
    let p = spec.order();
    let mut out = String::new();
    out.push_str(&format!("recursion: {}\n", spec_to_dsl(spec)));
    out.push_str(&format!(
        "characteristic polynomial: {}\n",
        fmt_char_poly(spec)
    ));
    out.push_str("roots:\n");
    render_roots(&mut out, &solution.root_set);
    out.push_str(&format!(
        "residual: max |charpoly(y)| = {}\n",
        fmt_f64(solution.root_set.residual)
    ));
    if solution
        .gamma_root_set
        .roots
        .iter()
        .chain(&solution.root_set.roots)
        .any(|r| r.multiplicity > 1)
    {
        out.push_str("confluent basis: C(s,j)*y^(s-j) for a root of multiplicity m, j = 0..m-1\n");
    }

    out.push_str("exponents:\n");
    let basis = solution.root_set.basis();
    for n in 0..p {
        out.push_str(&format!(
            "  {} = {}\n",
            alpha_name(p, n),
            render_formula(&solution.alpha_coeffs[n], &basis)
        ));
    }
    let gamma_basis = solution.gamma_root_set.basis();
    out.push_str(&format!(
        "  gamma(s) = {}\n",
        render_formula(&solution.gamma_coeffs, &gamma_basis)
    ));
    match solution.gamma_offset {
        Some(offset) => out.push_str(&format!(
            "fixed-point offset 1/(1-sum(a)): {}\n",
            fmt_f64(offset)
        )),
        None => out.push_str("fixed-point offset 1/(1-sum(a)): none (resonant: sum(a) = 1)\n"),
    }

    out.push_str("closed form:\n  z(s) = c^gamma(s)");
    for n in 0..p {
        out.push_str(&format!(" * z({n})^{}", alpha_name(p, n)));
    }
    out.push('\n');
    out
}

fn complex_json(z: Complex64) -> serde_json::Value {
    serde_json::json!({ "re": z.re, "im": z.im })
}

fn roots_json(set: &RootSet) -> serde_json::Value {
    serde_json::Value::Array(
        set.roots
            .iter()
            .map(|r| {
                serde_json::json!({
                    "re": r.value.re,
                    "im": r.value.im,
                    "multiplicity": r.multiplicity,
                })
            })
            .collect(),
    )
}

/// Machine-readable form of the solution.
pub fn solution_to_json(solution: &SpectralSolution, spec: &RecursionSpec) -> serde_json::Value {
    let p = spec.order();
    let basis = solution.root_set.basis();
    let gamma_basis = solution.gamma_root_set.basis();
    serde_json::json!({
        "order": p,
        "exponents": spec.exponents(),
        "roots": roots_json(&solution.root_set),
        "residual": solution.root_set.residual,
        "alpha_coefficients": solution
            .alpha_coeffs
            .iter()
            .map(|row| row.iter().copied().map(complex_json).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "gamma_roots": roots_json(&solution.gamma_root_set),
        "gamma_coefficients": solution
            .gamma_coeffs
            .iter()
            .copied()
            .map(complex_json)
            .collect::<Vec<_>>(),
        "gamma_offset": solution.gamma_offset,
        "alpha_formulas": (0..p)
            .map(|n| render_formula(&solution.alpha_coeffs[n], &basis))
            .collect::<Vec<_>>(),
        "gamma_formula": render_formula(&solution.gamma_coeffs, &gamma_basis),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_recursion;
    use crate::spectral::{solve, SpectralConfig};

    fn solve_dsl(text: &str) -> (SpectralSolution, RecursionSpec) {
        let doc = parse_recursion(text).unwrap();
        let sol = solve(&doc.spec, &SpectralConfig::default()).unwrap();
        (sol, doc.spec)
    }

    #[test]
    fn order_one_formulas() {
        let (sol, spec) = solve_dsl("z(n+1) = c * z(n)^2; c = 3");
        let text = render_solution(&sol, &spec);
        assert!(text.contains("alpha(s) = 2^s"), "{text}");
        assert!(text.contains("gamma(s) = 2^s - 1"), "{text}");
    }

    #[test]
    fn double_root_reports_confluent_basis() {
        let (sol, spec) = solve_dsl("z(n+2) = c * z(n+1)^2 * z(n)^-1; c = 1");
        let text = render_solution(&sol, &spec);
        assert!(text.contains("multiplicity 2"), "{text}");
        assert!(text.contains("confluent basis"), "{text}");
        assert!(text.contains("alpha_1(s) = s"), "{text}");
        assert!(text.contains("alpha_0(s) = 1 - s"), "{text}");
        assert!(text.contains("gamma(s) = C(s,2)"), "{text}");
    }

    #[test]
    fn golden_ratio_roots_rendered_numerically() {
        let (sol, spec) = solve_dsl("z(n+2) = c * z(n+1) * z(n); c = 1");
        let text = render_solution(&sol, &spec);
        assert!(text.contains("1.6180339887498949e0"), "{text}");
        assert!(text.contains("residual"), "{text}");
    }

    #[test]
    fn dsl_round_trip_identity() {
        for input in [
            "z(n+2) = c * z(n+1)^2 * z(n)^-1; c = 1; z(0) = 2; z(1) = 6",
            "z(n+1) = c * z(n)^2; c = 3",
            "z(n+3) = c * z(n+1)^-4; c = 1/2+3i",
            "z(n+1) = c * z(n)^2; c = 2.5; z(0) = 0.125",
            "z(n+2) = c; c = 7/3",
        ] {
            let doc = parse_recursion(input).unwrap();
            let rendered = spec_to_dsl(&doc.spec);
            let again = parse_recursion(&rendered).unwrap();
            assert_eq!(doc.spec, again.spec, "through {rendered}");
        }
    }

    #[test]
    fn solution_json_is_complete() {
        let (sol, spec) = solve_dsl("z(n+1) = c * z(n)^2; c = 3");
        let json = solution_to_json(&sol, &spec);
        assert_eq!(json["order"], 1);
        assert_eq!(json["gamma_offset"], -1.0);
        assert_eq!(json["alpha_formulas"][0], "2^s");
        assert_eq!(json["gamma_formula"], "2^s - 1");
    }
}
