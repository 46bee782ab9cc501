//! JSON problem documents.
//!
//! Schema:
//!
//! ```json
//! {
//!   "name": "optional",
//!   "description": "optional",
//!   "order": 2,
//!   "exponents": [-1, 2],
//!   "c": {"re": "1", "im": "0"},
//!   "initial": [{"re": "2"}, {"re": "6"}],
//!   "queries": [{"s": 4, "path": "exact"}]
//! }
//! ```
//!
//! Exact rationals are encoded as strings ("22/7") so round-trips are
//! lossless; a JSON number in a component marks the value as floating.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{ParseError, Result};
use crate::spec::RecursionSpec;
use crate::value::{GaussianRational, Value};

use super::parse::parse_rational_str;
use super::{ProblemDocument, Query, QueryPath};

#[derive(Debug, Serialize, Deserialize)]
struct RawProblem {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    description: Option<String>,
    order: usize,
    exponents: Vec<i64>,
    c: RawValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    initial: Option<Vec<RawValue>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    queries: Vec<RawQuery>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawValue {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    re: Option<RawComponent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    im: Option<RawComponent>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RawComponent {
    Rational(String),
    Decimal(f64),
}

#[derive(Debug, Serialize, Deserialize)]
struct RawQuery {
    s: u64,
    path: String,
}

fn data_error(message: String) -> ParseError {
    ParseError::new(1, 1, vec![message], "JSON document".to_string())
}

fn component(raw: &Option<RawComponent>, what: &str) -> Result<ComponentValue> {
    match raw {
        None => Ok(ComponentValue::Rational(BigRational::zero())),
        Some(RawComponent::Rational(s)) => parse_rational_str(s)
            .map(ComponentValue::Rational)
            .ok_or_else(|| {
                data_error(format!("rational string like \"3/2\" for {what}, got {s:?}")).into()
            }),
        Some(RawComponent::Decimal(d)) => Ok(ComponentValue::Decimal(*d)),
    }
}

enum ComponentValue {
    Rational(BigRational),
    Decimal(f64),
}

fn value(raw: &RawValue, what: &str) -> Result<Value> {
    let re = component(&raw.re, what)?;
    let im = component(&raw.im, what)?;
    Ok(match (re, im) {
        (ComponentValue::Rational(re), ComponentValue::Rational(im)) => {
            Value::Exact(GaussianRational::new(re, im))
        }
        (re, im) => {
            let f = |c: ComponentValue| match c {
                ComponentValue::Rational(r) => {
                    use num_traits::ToPrimitive;
                    r.to_f64().unwrap_or(f64::NAN)
                }
                ComponentValue::Decimal(d) => d,
            };
            Value::Approx(Complex64::new(f(re), f(im)))
        }
    })
}

fn raw_value(v: &Value) -> RawValue {
    match v {
        Value::Exact(g) => {
            let enc = |r: &BigRational| {
                if r.is_zero() {
                    None
                } else {
                    Some(RawComponent::Rational(fmt_rational(r)))
                }
            };
            let mut raw = RawValue {
                re: enc(g.re()),
                im: enc(g.im()),
            };
            if raw.re.is_none() && raw.im.is_none() {
                raw.re = Some(RawComponent::Rational("0".to_string()));
            }
            raw
        }
        Value::Approx(c) => RawValue {
            re: Some(RawComponent::Decimal(c.re)),
            im: if c.im == 0.0 {
                None
            } else {
                Some(RawComponent::Decimal(c.im))
            },
        },
    }
}

fn fmt_rational(r: &BigRational) -> String {
    use num_traits::One;
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Loads a JSON problem document, validating the spec.
pub fn problem_from_json(text: &str) -> Result<ProblemDocument> {
    let raw: RawProblem = serde_json::from_str(text).map_err(|e| {
        ParseError::new(e.line().max(1), e.column().max(1), vec!["valid JSON problem document".to_string()], e.to_string())
    })?;

    let constant = value(&raw.c, "c")?;
    let initial = match &raw.initial {
        None => None,
        Some(list) => {
            let mut out = Vec::with_capacity(list.len());
            for (i, rv) in list.iter().enumerate() {
                out.push(value(rv, &format!("initial[{i}]"))?);
            }
            Some(out)
        }
    };
    let spec = RecursionSpec::new(raw.order, raw.exponents, constant, initial)?;

    let mut queries = Vec::with_capacity(raw.queries.len());
    for q in &raw.queries {
        let path = QueryPath::from_name(&q.path).ok_or_else(|| {
            data_error(format!(
                "query path \"exact\", \"numeric\" or \"logmag\", got {:?}",
                q.path
            ))
        })?;
        queries.push(Query { s: q.s, path });
    }

    Ok(ProblemDocument {
        spec,
        name: raw.name,
        description: raw.description,
        queries,
    })
}

/// Serializes a problem document; exact rationals become strings.
pub fn problem_to_json(doc: &ProblemDocument) -> String {
    let raw = RawProblem {
        name: doc.name.clone(),
        description: doc.description.clone(),
        order: doc.spec.order(),
        exponents: doc.spec.exponents().to_vec(),
        c: raw_value(doc.spec.constant()),
        initial: doc
            .spec
            .initial_values()
            .map(|init| init.iter().map(raw_value).collect()),
        queries: doc
            .queries
            .iter()
            .map(|q| RawQuery {
                s: q.s,
                path: q.path.name().to_string(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("problem documents always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn loads_problem_with_queries() {
        let doc = problem_from_json(
            r#"{
                "order": 2,
                "exponents": [-1, 2],
                "c": {"re": "1"},
                "initial": [{"re": "2"}, {"re": "6"}],
                "queries": [{"s": 4, "path": "exact"}, {"s": 9, "path": "logmag"}]
            }"#,
        )
        .unwrap();
        assert_eq!(doc.spec.exponents(), &[-1, 2]);
        assert_eq!(doc.queries.len(), 2);
        assert_eq!(doc.queries[1].path, QueryPath::LogMagnitude);
    }

    #[test]
    fn exact_rationals_round_trip_losslessly() {
        let doc = problem_from_json(
            r#"{
                "order": 1,
                "exponents": [3],
                "c": {"re": "22/7", "im": "-1/3"},
                "initial": [{"im": "123456789123456789123456789/2"}]
            }"#,
        )
        .unwrap();
        let json = problem_to_json(&doc);
        let again = problem_from_json(&json).unwrap();
        assert_eq!(doc.spec, again.spec);
    }

    #[test]
    fn numbers_mean_floating_values() {
        let doc = problem_from_json(
            r#"{"order": 1, "exponents": [2], "c": {"re": 2.5}}"#,
        )
        .unwrap();
        assert!(!doc.spec.is_exact());
    }

    #[test]
    fn bad_json_reports_position() {
        let err = problem_from_json("{\n  \"order\": oops").unwrap_err();
        match err {
            Error::Parse(p) => assert_eq!(p.line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn bad_rational_string_rejected() {
        let err = problem_from_json(
            r#"{"order": 1, "exponents": [2], "c": {"re": "1/0"}}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn bad_query_path_rejected() {
        let err = problem_from_json(
            r#"{"order": 1, "exponents": [2], "c": {"re": "1"},
                "queries": [{"s": 1, "path": "magic"}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn validation_applies_to_json_documents() {
        let err = problem_from_json(
            r#"{"order": 1, "exponents": [2], "c": {"re": "0"}}"#,
        )
        .unwrap_err();
        assert_eq!(err, Error::ZeroBase);
    }
}
