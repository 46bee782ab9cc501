//! Recursive-descent parser for the recursion DSL.
//!
//! Grammar (whitespace-insensitive between tokens):
//!
//! ```text
//! document := rule { ";" binding }
//! rule     := "z(n+" INT ")" "=" "c" { "*" factor }
//! factor   := "z(n" [ "+" INT ] ")" [ "^" SINT ]
//! binding  := ( "c" | "z(" INT ")" ) "=" value
//! value    := gaussian | decimal
//! gaussian := num [ ("+"|"-") num "i" ] | num "i"
//! num      := SINT [ "/" INT ] | decimal float
//! ```
//!
//! The index variable is fixed to `n`. Missing factors mean a zero exponent;
//! a duplicate factor for the same lag is an error rather than being merged.
//! Any decimal component switches the whole value to floating (numeric-only)
//! mode.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, ParseError, Result};
use crate::spec::RecursionSpec;
use crate::value::{GaussianRational, Value};

use super::ProblemDocument;

/// Parse guard: orders beyond this are almost certainly typos and would
/// only serve to exhaust memory.
const MAX_ORDER: u64 = 1_000_000;

/// Parses `p`, `-p`, or `p/q` (q > 0) from a standalone string; used for the
/// JSON encoding of exact rationals.
pub(crate) fn parse_rational_str(text: &str) -> Option<BigRational> {
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let numer: BigInt = numer.parse().ok()?;
    if denom.starts_with('-') || denom.starts_with('+') {
        return None;
    }
    let denom: BigInt = denom.parse().ok()?;
    if denom.is_zero() {
        return None;
    }
    Some(BigRational::new(numer, denom))
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

enum Component {
    Rational(BigRational),
    Decimal(f64),
}

impl Component {
    fn negate(self) -> Self {
        match self {
            Component::Rational(r) => Component::Rational(-r),
            Component::Decimal(d) => Component::Decimal(-d),
        }
    }
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn error_at(&self, pos: usize, expected: &[&str]) -> ParseError {
        let pos = pos.min(self.text.len());
        let upto = &self.text[..pos];
        let line = upto.matches('\n').count() + 1;
        let line_start = upto.rfind('\n').map(|i| i + 1).unwrap_or(0);
        let col = upto[line_start..].chars().count() + 1;
        let rest = &self.text[pos..];
        let found = if rest.is_empty() {
            "end of input".to_string()
        } else {
            let snippet: String = rest.chars().take(12).collect();
            format!("{snippet:?}")
        };
        ParseError::new(line, col, expected.iter().map(|s| s.to_string()).collect(), found)
    }

    fn error(&mut self, expected: &[&str]) -> ParseError {
        self.skip_ws();
        self.error_at(self.pos, expected)
    }

    fn try_consume(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.try_consume(token) {
            Ok(())
        } else {
            Err(self.error(&[&format!("`{token}`")]).into())
        }
    }

    /// Consumes a maximal run of ASCII digits starting at the current
    /// position (no leading whitespace skip).
    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while matches!(self.peek_raw(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos > start {
            Some(&self.text[start..self.pos])
        } else {
            None
        }
    }

    fn parse_uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let pos = self.pos;
        let digits = self
            .digits()
            .ok_or_else(|| self.error_at(pos, &["nonnegative integer"]))?;
        digits
            .parse::<u64>()
            .map_err(|_| self.error_at(pos, &["integer within range"]).into())
    }

    /// Optional sign token; returns whether the value is negated.
    fn parse_sign(&mut self) -> bool {
        if self.try_consume("-") {
            true
        } else {
            let _ = self.try_consume("+");
            false
        }
    }

    fn parse_exponent(&mut self) -> Result<i64> {
        self.skip_ws();
        let sign_pos = self.pos;
        let negative = self.parse_sign();
        self.skip_ws();
        let dpos = self.pos;
        let digits = self
            .digits()
            .ok_or_else(|| self.error_at(dpos, &["integer exponent"]))?;
        if matches!(self.peek_raw(), Some('.')) {
            return Err(self.error_at(self.pos, &["integer exponent"]).into());
        }
        let value = digits
            .parse::<i64>()
            .map_err(|_| self.error_at(sign_pos, &["integer within range"]))?;
        Ok(if negative { -value } else { value })
    }

    fn parse_component(&mut self) -> Result<Component> {
        self.skip_ws();
        let negative = self.parse_sign();
        self.skip_ws();
        let int_start = self.pos;
        if self.digits().is_none() {
            return Err(self.error_at(int_start, &["number"]).into());
        }

        // A '.' or exponent marker directly after the digits makes this a
        // decimal lexeme.
        if matches!(self.peek_raw(), Some('.') | Some('e') | Some('E')) {
            if matches!(self.peek_raw(), Some('.')) {
                self.pos += 1;
                if self.digits().is_none() {
                    return Err(self
                        .error_at(self.pos, &["digit after decimal point"])
                        .into());
                }
            }
            if matches!(self.peek_raw(), Some('e') | Some('E')) {
                self.pos += 1;
                if matches!(self.peek_raw(), Some('+') | Some('-')) {
                    self.pos += 1;
                }
                if self.digits().is_none() {
                    return Err(self.error_at(self.pos, &["exponent digits"]).into());
                }
            }
            let mag: f64 = self.text[int_start..self.pos]
                .parse()
                .map_err(|_| self.error_at(int_start, &["decimal number"]))?;
            return Ok(Component::Decimal(if negative { -mag } else { mag }));
        }

        let numer: BigInt = self.text[int_start..self.pos].parse().unwrap();
        let numer = if negative { -numer } else { numer };

        let save = self.pos;
        self.skip_ws();
        if matches!(self.peek_raw(), Some('/')) {
            self.pos += 1;
            self.skip_ws();
            let dpos = self.pos;
            let denom_digits = self
                .digits()
                .ok_or_else(|| self.error_at(dpos, &["denominator"]))?;
            let denom: BigInt = denom_digits.parse().unwrap();
            if denom.is_zero() {
                return Err(self.error_at(dpos, &["nonzero denominator"]).into());
            }
            return Ok(Component::Rational(BigRational::new(numer, denom)));
        }
        self.pos = save;
        Ok(Component::Rational(BigRational::from_integer(numer)))
    }

    fn parse_value(&mut self) -> Result<Value> {
        let first = self.parse_component()?;
        if self.try_consume("i") {
            return Ok(assemble_value(
                Component::Rational(BigRational::zero()),
                first,
            ));
        }
        let separator = if self.try_consume("+") {
            Some(false)
        } else if self.try_consume("-") {
            Some(true)
        } else {
            None
        };
        match separator {
            Some(negate) => {
                let mut second = self.parse_component()?;
                if negate {
                    second = second.negate();
                }
                self.expect("i")?;
                Ok(assemble_value(first, second))
            }
            None => Ok(assemble_value(
                first,
                Component::Rational(BigRational::zero()),
            )),
        }
    }
}

fn assemble_value(re: Component, im: Component) -> Value {
    match (re, im) {
        (Component::Rational(re), Component::Rational(im)) => {
            Value::Exact(GaussianRational::new(re, im))
        }
        (re, im) => {
            let f = |c: Component| match c {
                Component::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
                Component::Decimal(d) => d,
            };
            Value::Approx(Complex64::new(f(re), f(im)))
        }
    }
}

/// Parses a DSL document into a validated [`ProblemDocument`].
pub fn parse_recursion(text: &str) -> Result<ProblemDocument> {
    let mut cur = Cursor::new(text);

    cur.expect("z")?;
    cur.expect("(")?;
    cur.expect("n")?;
    cur.expect("+")?;
    cur.skip_ws();
    let order_pos = cur.pos;
    let order = cur.parse_uint()?;
    if order > MAX_ORDER {
        return Err(cur.error_at(order_pos, &["order at most 1000000"]).into());
    }
    cur.expect(")")?;
    cur.expect("=")?;
    cur.expect("c")?;

    let mut exponents: Vec<Option<i64>> = vec![None; order as usize];
    while cur.try_consume("*") {
        cur.skip_ws();
        let factor_pos = cur.pos;
        cur.expect("z")?;
        cur.expect("(")?;
        cur.expect("n")?;
        let lag = if cur.try_consume("+") {
            cur.parse_uint()?
        } else {
            0
        };
        cur.expect(")")?;
        let exponent = if cur.try_consume("^") {
            cur.parse_exponent()?
        } else {
            1
        };
        if lag >= order {
            return Err(cur
                .error_at(factor_pos, &["factor lag below the recursion order"])
                .into());
        }
        let slot = &mut exponents[lag as usize];
        if slot.is_some() {
            return Err(cur
                .error_at(factor_pos, &["a single factor per lag"])
                .into());
        }
        *slot = Some(exponent);
    }

    let mut constant: Option<Value> = None;
    let mut initial: Vec<Option<Value>> = vec![None; order as usize];
    while cur.try_consume(";") {
        match cur.peek() {
            Some('c') => {
                let pos = cur.pos;
                cur.expect("c")?;
                cur.expect("=")?;
                if constant.is_some() {
                    return Err(cur.error_at(pos, &["a single binding for c"]).into());
                }
                constant = Some(cur.parse_value()?);
            }
            Some('z') => {
                cur.expect("z")?;
                cur.expect("(")?;
                cur.skip_ws();
                let idx_pos = cur.pos;
                let idx = cur.parse_uint()?;
                cur.expect(")")?;
                cur.expect("=")?;
                if idx >= order {
                    return Err(cur
                        .error_at(idx_pos, &["initial index below the order"])
                        .into());
                }
                let slot = &mut initial[idx as usize];
                if slot.is_some() {
                    return Err(cur
                        .error_at(idx_pos, &["a single binding per initial value"])
                        .into());
                }
                *slot = Some(cur.parse_value()?);
            }
            _ => return Err(cur.error(&["`c`", "`z(`"]).into()),
        }
    }
    if !cur.at_end() {
        return Err(cur.error(&["`;`", "end of input"]).into());
    }

    let constant = match constant {
        Some(c) => c,
        None => return Err(cur.error(&["a binding for the constant c"]).into()),
    };
    let bound = initial.iter().filter(|v| v.is_some()).count();
    let initial_values = if bound == 0 {
        None
    } else if bound == order as usize {
        Some(initial.into_iter().map(Option::unwrap).collect())
    } else {
        return Err(Error::ArityMismatch {
            what: "initial values",
            expected: order as usize,
            got: bound,
        });
    };

    let spec = RecursionSpec::new(
        order as usize,
        exponents.into_iter().map(|e| e.unwrap_or(0)).collect(),
        constant,
        initial_values,
    )?;
    Ok(ProblemDocument {
        spec,
        name: None,
        description: None,
        queries: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ProblemDocument> {
        parse_recursion(text)
    }

    #[test]
    fn parses_full_document() {
        let doc =
            parse("z(n+2) = c * z(n+1)^2 * z(n)^-1; c = 1; z(0) = 2; z(1) = 6").unwrap();
        assert_eq!(doc.spec.order(), 2);
        assert_eq!(doc.spec.exponents(), &[-1, 2]);
        let init = doc.spec.initial_values().unwrap();
        assert_eq!(init[0], Value::Exact(GaussianRational::from_integers(2, 0)));
        assert_eq!(init[1], Value::Exact(GaussianRational::from_integers(6, 0)));
    }

    #[test]
    fn parses_without_initial_values() {
        let doc = parse("z(n+1) = c * z(n)^2; c = 3").unwrap();
        assert_eq!(doc.spec.order(), 1);
        assert_eq!(doc.spec.exponents(), &[2]);
        assert!(doc.spec.initial_values().is_none());
    }

    #[test]
    fn missing_factor_means_zero_exponent() {
        let doc = parse("z(n+3) = c * z(n+2)^4; c = 1").unwrap();
        assert_eq!(doc.spec.exponents(), &[0, 0, 4]);
    }

    #[test]
    fn rejects_non_integer_exponent() {
        let err = parse("z(n+2) = c * z(n+1)^1.5; c = 1").unwrap_err();
        match err {
            Error::Parse(p) => {
                assert_eq!(p.line, 1);
                assert!(p.expected.iter().any(|e| e.contains("integer exponent")));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_duplicate_factor() {
        let err = parse("z(n+2) = c * z(n+1) * z(n+1); c = 1").unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn rejects_lag_at_or_above_order() {
        let err = parse("z(n+2) = c * z(n+2); c = 1").unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn rejects_missing_constant() {
        let err = parse("z(n+1) = c * z(n)").unwrap_err();
        match err {
            Error::Parse(p) => assert_eq!(p.found, "end of input"),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn partial_initial_values_is_arity_error() {
        let err = parse("z(n+2) = c * z(n); c = 1; z(0) = 2").unwrap_err();
        assert!(matches!(
            err,
            Error::ArityMismatch { what: "initial values", .. }
        ));
    }

    #[test]
    fn gaussian_value_forms() {
        let doc = parse("z(n+1) = c * z(n); c = 3/2; z(0) = -1/2i").unwrap();
        let c = doc.spec.constant().as_exact().unwrap();
        assert_eq!(c.to_string(), "3/2");
        let z0 = doc.spec.initial_values().unwrap()[0].as_exact().unwrap();
        assert_eq!(z0.to_string(), "-1/2i");

        let doc = parse("z(n+1) = c * z(n); c = 2+3i; z(0) = 1 - 1/4 i").unwrap();
        assert_eq!(doc.spec.constant().as_exact().unwrap().to_string(), "2+3i");
        let z0 = doc.spec.initial_values().unwrap()[0].as_exact().unwrap();
        assert_eq!(z0.to_string(), "1-1/4i");
    }

    #[test]
    fn decimal_forces_numeric_mode() {
        let doc = parse("z(n+1) = c * z(n)^2; c = 2.5").unwrap();
        assert!(!doc.spec.is_exact());
        assert_eq!(doc.spec.constant().to_complex(), Complex64::new(2.5, 0.0));

        let doc = parse("z(n+1) = c * z(n)^2; c = 1e2").unwrap();
        assert_eq!(doc.spec.constant().to_complex(), Complex64::new(100.0, 0.0));

        // A decimal in one component drags the whole value to floating.
        let doc = parse("z(n+1) = c * z(n)^2; c = 1/2+0.5i").unwrap();
        assert!(!doc.spec.is_exact());
        assert_eq!(doc.spec.constant().to_complex(), Complex64::new(0.5, 0.5));
    }

    #[test]
    fn whitespace_insensitive() {
        let doc = parse("  z ( n + 2 )=c* z ( n + 1 ) ^ 2 ;\n c = 3 / 2 ").unwrap();
        assert_eq!(doc.spec.exponents(), &[0, 2]);
        assert_eq!(doc.spec.constant().as_exact().unwrap().to_string(), "3/2");
    }

    #[test]
    fn zero_denominator_rejected() {
        let err = parse("z(n+1) = c * z(n); c = 1/0").unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn error_positions_are_line_and_column() {
        let err = parse("z(n+1) = c * z(n);\nc = @").unwrap_err();
        match err {
            Error::Parse(p) => {
                assert_eq!(p.line, 2);
                assert_eq!(p.col, 5);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn validation_errors_pass_through() {
        let err = parse("z(n+1) = c * z(n); c = 0").unwrap_err();
        assert_eq!(err, Error::ZeroBase);
    }

    #[test]
    fn rational_string_helper() {
        assert_eq!(
            parse_rational_str("-22/7").unwrap(),
            BigRational::new(BigInt::from(-22), BigInt::from(7))
        );
        assert!(parse_rational_str("1/0").is_none());
        assert!(parse_rational_str("1/-2").is_none());
        assert!(parse_rational_str("x").is_none());
    }
}
