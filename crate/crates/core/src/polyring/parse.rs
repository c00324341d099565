use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::MultiPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

/// Parses an infix polynomial expression.
///
/// Grammar: sums and differences of products, `^` with a nonnegative
/// integer exponent, parentheses, unary minus, integer literals and `/`
/// by a nonzero constant. Identifiers are resolved by `resolve`, which maps
/// a name to a variable index in a ring of `num_vars` variables.
pub fn parse_poly<F>(src: &str, num_vars: usize, resolve: F) -> Result<MultiPoly, ParseError>
where
    F: Fn(&str) -> Option<usize>,
{
    let mut p = Parser {
        chars: src.char_indices().collect(),
        pos: 0,
        num_vars,
        resolve: &resolve,
        len: src.len(),
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected '{}'", p.chars[p.pos].1)));
    }
    Ok(out)
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    num_vars: usize,
    resolve: &'a dyn Fn(&str) -> Option<usize>,
    len: usize,
}

impl Parser<'_> {
    fn offset(&self) -> usize {
        self.chars.get(self.pos).map(|c| c.0).unwrap_or(self.len)
    }

    fn error(&self, message: String) -> ParseError {
        ParseError {
            pos: self.offset(),
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                '/' => {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.offset();
                    let rhs = self.unary()?;
                    let d = rhs.as_constant().ok_or(ParseError {
                        pos: at,
                        message: "division is only allowed by a constant".into(),
                    })?;
                    if d.is_zero() {
                        return Err(ParseError {
                            pos: at,
                            message: "division by zero".into(),
                        });
                    }
                    acc = acc.scale(&(BigRational::from_integer(1.into()) / d));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly, ParseError> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.take_while(|c| c.is_ascii_digit());
            if digits.is_empty() {
                return Err(self.error("expected a nonnegative integer exponent".into()));
            }
            let k: u32 = digits
                .parse()
                .map_err(|_| self.error("exponent too large".into()))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if !f(c) {
                break;
            }
            s.push(c);
            self.pos += 1;
        }
        s
    }

    fn atom(&mut self) -> Result<MultiPoly, ParseError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input".into())),
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                let n: BigInt = digits.parse().expect("digit run");
                Ok(MultiPoly::constant(self.num_vars, BigRational::from_integer(n)))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.offset();
                let name = self.take_while(|c| c.is_alphanumeric() || c == '_');
                match (self.resolve)(&name) {
                    Some(i) if i < self.num_vars => Ok(MultiPoly::var(self.num_vars, i)),
                    _ => Err(ParseError {
                        pos: start,
                        message: format!("unknown variable '{name}'"),
                    }),
                }
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{frac, rat};

    fn names(s: &str) -> Option<usize> {
        match s {
            "t1" => Some(0),
            "t2" => Some(1),
            _ => None,
        }
    }

    #[test]
    fn parses_products_and_powers() {
        let p = parse_poly("(t1+t2)^2*t1", 2, names).unwrap();
        let t1 = MultiPoly::var(2, 0);
        let t2 = MultiPoly::var(2, 1);
        assert_eq!(p, &(&t1 + &t2).pow(2) * &t1);
    }

    #[test]
    fn rational_constants_and_signs() {
        let p = parse_poly("-3/4*t1 + -(t2)", 2, names).unwrap();
        assert_eq!(p.coefficient_of(&[1, 0]).unwrap(), frac(-3, 4));
        assert_eq!(p.coefficient_of(&[0, 1]).unwrap(), rat(-1));
    }

    #[test]
    fn reports_positions() {
        let err = parse_poly("t1 + t9", 2, names).unwrap_err();
        assert_eq!(err.pos, 5);
        let err = parse_poly("(t1 + t2", 2, names).unwrap_err();
        assert_eq!(err.pos, 8);
        let err = parse_poly("t1 / t2", 2, names).unwrap_err();
        assert_eq!(err.pos, 5);
        assert!(parse_poly("t1^", 2, names).is_err());
        assert!(parse_poly("t1 t2", 2, names).is_err());
    }

    #[test]
    fn canonical_text_parses_back() {
        let p = parse_poly("(t1 - 2*t2)^3/5 + 7", 2, names).unwrap();
        let text = p.to_text(&["t1", "t2"]);
        assert_eq!(parse_poly(&text, 2, names).unwrap(), p);
    }
}
