//! Integer-coefficient multivariate polynomials and their plain-text
//! syntax.
//!
//! The grammar accepted by [`DiophantineSpec::parse`]:
//!
//! ```text
//! polynomial := ['+'|'-'] term { ('+'|'-') term }
//! term       := factor { '*' factor }
//! factor     := integer | variable [ '^' integer ]
//! variable   := 'x' digits          (1-based index: x1, x2, …)
//! ```
//!
//! Examples: `x1 - 2`, `x1^2 + 1`, `3*x1^2*x2 - 7`. Coefficients and
//! exponents are integers; evaluation is exact (checked 128-bit), so the
//! zero set of the polynomial is decided without rounding.

use crate::error::{Error, Result};

/// One monomial: `coeff * Π x_i^{exponents[i]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Term {
    coeff: i64,
    exponents: Vec<u32>,
}

/// An integer-coefficient polynomial `D(x_1, …, x_K)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiophantineSpec {
    variables: usize,
    terms: Vec<Term>,
    source: String,
}

impl DiophantineSpec {
    /// Parse the plain-text syntax. The variable count is the highest
    /// `xN` index mentioned; reference every mode at least once (a zero
    /// coefficient works: `x1 + 0*x2 - 2`).
    pub fn parse(text: &str) -> Result<Self> {
        let tokens = tokenize(text)?;
        let mut parser = Parser { tokens, pos: 0 };
        let terms = parser.polynomial()?;
        if terms.is_empty() {
            return Err(Error::PolynomialParse("polynomial has no terms".into()));
        }
        let variables = terms
            .iter()
            .map(|t| t.exponents.len())
            .max()
            .unwrap_or(0)
            .max(1);
        let terms = terms
            .into_iter()
            .map(|mut t| {
                t.exponents.resize(variables, 0);
                t
            })
            .collect();
        Ok(Self {
            variables,
            terms,
            source: text.trim().to_string(),
        })
    }

    /// Number of variables `K` (highest index mentioned in the source).
    pub fn variables(&self) -> usize {
        self.variables
    }

    /// The text this polynomial was parsed from.
    pub fn source(&self) -> &str {
        &self.source
    }

    /// Evaluate `D(occupation)` exactly.
    pub fn eval(&self, occupation: &[usize]) -> Result<i128> {
        if occupation.len() != self.variables {
            return Err(Error::LengthMismatch {
                got: occupation.len(),
                expected: self.variables,
            });
        }
        let overflow = || Error::PolynomialOverflow(occupation.to_vec());
        let mut acc: i128 = 0;
        for term in &self.terms {
            let mut value: i128 = term.coeff as i128;
            for (&n, &e) in occupation.iter().zip(&term.exponents) {
                let base = n as i128;
                let mut power: i128 = 1;
                for _ in 0..e {
                    power = power.checked_mul(base).ok_or_else(overflow)?;
                }
                value = value.checked_mul(power).ok_or_else(overflow)?;
            }
            acc = acc.checked_add(value).ok_or_else(overflow)?;
        }
        Ok(acc)
    }

    /// `D(occupation)²` as a float, squared exactly in integers first.
    pub fn eval_squared(&self, occupation: &[usize]) -> Result<f64> {
        let v = self.eval(occupation)?;
        let sq = v
            .checked_mul(v)
            .ok_or_else(|| Error::PolynomialOverflow(occupation.to_vec()))?;
        Ok(sq as f64)
    }
}

impl std::str::FromStr for DiophantineSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(i64),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit = &text[start..i];
                let v: i64 = lit.parse().map_err(|_| {
                    Error::PolynomialParse(format!("integer '{lit}' out of range at byte {start}"))
                })?;
                tokens.push(Token::Int(v));
            }
            'x' => {
                let start = i;
                i += 1;
                let digits_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if digits_start == i {
                    return Err(Error::PolynomialParse(format!(
                        "variable at byte {start} needs an index, like x1"
                    )));
                }
                let idx: usize = text[digits_start..i].parse().map_err(|_| {
                    Error::PolynomialParse(format!("variable index out of range at byte {start}"))
                })?;
                if idx == 0 {
                    return Err(Error::PolynomialParse(
                        "variable indices are 1-based; x0 is not allowed".into(),
                    ));
                }
                tokens.push(Token::Var(idx - 1));
            }
            other => {
                return Err(Error::PolynomialParse(format!(
                    "unexpected character '{other}' at byte {i}"
                )))
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn polynomial(&mut self) -> Result<Vec<Term>> {
        let mut terms = Vec::new();
        let mut sign: i64 = 1;
        if let Some(Token::Plus) = self.peek() {
            self.next();
        } else if let Some(Token::Minus) = self.peek() {
            self.next();
            sign = -1;
        }
        loop {
            terms.push(self.term(sign)?);
            match self.next() {
                None => break,
                Some(Token::Plus) => sign = 1,
                Some(Token::Minus) => sign = -1,
                Some(tok) => {
                    return Err(Error::PolynomialParse(format!(
                        "expected '+' or '-' between terms, found {tok:?}"
                    )))
                }
            }
        }
        Ok(terms)
    }

    fn term(&mut self, sign: i64) -> Result<Term> {
        let mut coeff: i64 = sign;
        let mut exponents: Vec<u32> = Vec::new();
        loop {
            match self.next() {
                Some(Token::Int(v)) => {
                    coeff = coeff.checked_mul(v).ok_or_else(|| {
                        Error::PolynomialParse("coefficient overflows 64 bits".into())
                    })?;
                }
                Some(Token::Var(idx)) => {
                    let exp: u32 = if let Some(Token::Caret) = self.peek() {
                        self.next();
                        match self.next() {
                            Some(Token::Int(e)) if e >= 0 => e as u32,
                            other => {
                                return Err(Error::PolynomialParse(format!(
                                    "expected a non-negative exponent after '^', found {other:?}"
                                )))
                            }
                        }
                    } else {
                        1
                    };
                    if exponents.len() <= idx {
                        exponents.resize(idx + 1, 0);
                    }
                    exponents[idx] += exp;
                }
                other => {
                    return Err(Error::PolynomialParse(format!(
                        "expected an integer or variable, found {other:?}"
                    )))
                }
            }
            match self.peek() {
                Some(Token::Star) => {
                    self.next();
                }
                _ => break,
            }
        }
        Ok(Term { coeff, exponents })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_linear() {
        let p = DiophantineSpec::parse("x1 - 2").unwrap();
        assert_eq!(p.variables(), 1);
        assert_eq!(p.eval(&[0]).unwrap(), -2);
        assert_eq!(p.eval(&[2]).unwrap(), 0);
        assert_eq!(p.eval(&[4]).unwrap(), 2);
    }

    #[test]
    fn parses_multivariate() {
        let p = DiophantineSpec::parse("3*x1^2*x2 - 7").unwrap();
        assert_eq!(p.variables(), 2);
        assert_eq!(p.eval(&[2, 5]).unwrap(), 3 * 4 * 5 - 7);
    }

    #[test]
    fn parses_leading_minus_and_zero_coeff() {
        let p = DiophantineSpec::parse("-x1 + 0*x2 + 1").unwrap();
        assert_eq!(p.variables(), 2);
        assert_eq!(p.eval(&[3, 9]).unwrap(), -2);
    }

    #[test]
    fn squared_evaluation_is_exact() {
        let p = DiophantineSpec::parse("x1^2 + 1").unwrap();
        let diag: Vec<f64> = (0..4).map(|n| p.eval_squared(&[n]).unwrap()).collect();
        assert_eq!(diag, vec![1.0, 4.0, 25.0, 100.0]);
    }

    #[test]
    fn repeated_variable_accumulates_exponent() {
        let p = DiophantineSpec::parse("x1*x1 - 4").unwrap();
        assert_eq!(p.eval(&[3]).unwrap(), 5);
    }

    #[test]
    fn rejects_garbage() {
        assert!(DiophantineSpec::parse("").is_err());
        assert!(DiophantineSpec::parse("x").is_err());
        assert!(DiophantineSpec::parse("x0 + 1").is_err());
        assert!(DiophantineSpec::parse("2 + + 3").is_err());
        assert!(DiophantineSpec::parse("x1 ^ -2").is_err());
        assert!(DiophantineSpec::parse("y1 + 1").is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let p = DiophantineSpec::parse("x1^40").unwrap();
        assert!(matches!(
            p.eval(&[1000]),
            Err(Error::PolynomialOverflow(_))
        ));
    }
}
