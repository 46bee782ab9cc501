//! Problem-document I/O: the recursion DSL, JSON documents, and rendering.

mod json;
mod parse;
mod render;

pub use json::{problem_from_json, problem_to_json};
pub use parse::parse_recursion;
pub use render::{fmt_complex, fmt_f64, render_solution, solution_to_json, spec_to_dsl};

use crate::error::Result;
use crate::spec::RecursionSpec;

/// Which evaluation path a query asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryPath {
    Exact,
    Numeric,
    LogMagnitude,
}

impl QueryPath {
    pub fn name(&self) -> &'static str {
        match self {
            QueryPath::Exact => "exact",
            QueryPath::Numeric => "numeric",
            QueryPath::LogMagnitude => "logmag",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "exact" => Some(QueryPath::Exact),
            "numeric" => Some(QueryPath::Numeric),
            "logmag" => Some(QueryPath::LogMagnitude),
            _ => None,
        }
    }
}

/// One requested evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Query {
    pub s: u64,
    pub path: QueryPath,
}

/// A parsed problem: the validated spec plus metadata and requested queries.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemDocument {
    pub spec: RecursionSpec,
    pub name: Option<String>,
    pub description: Option<String>,
    pub queries: Vec<Query>,
}

/// Parses either input format: JSON documents start with `{`, anything else
/// is treated as DSL text.
pub fn parse_problem(text: &str) -> Result<ProblemDocument> {
    if text.trim_start().starts_with('{') {
        problem_from_json(text)
    } else {
        parse_recursion(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sniffs_format() {
        let dsl = parse_problem("z(n+1) = c * z(n)^2; c = 3").unwrap();
        assert_eq!(dsl.spec.order(), 1);
        let json =
            parse_problem(r#"  {"order": 1, "exponents": [2], "c": {"re": "3"}}"#).unwrap();
        assert_eq!(json.spec, dsl.spec);
    }
}
