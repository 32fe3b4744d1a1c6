//! The group-expression language: `Z`, `Z^k`, `Z/n`, `Z/n^k` joined by `+`.
//!
//! ```
//! use abelim::dsl::parse_group_expr;
//!
//! let a = parse_group_expr("Z^2 + Z/4").unwrap();
//! assert_eq!(a.canonical_form().to_expr(), "Z^2 + Z/4");
//! assert_eq!(parse_group_expr("Z/2 + Z/3").unwrap().canonical_form().to_expr(), "Z/6");
//! ```

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::group::Presentation;

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(src: &str) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// 1-based column of the current position.
    fn column(&self) -> usize {
        self.pos + 1
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            column: self.column(),
            message: message.into(),
        })
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected a natural number");
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("ascii digits"))
    }

    fn exponent(&mut self) -> Result<usize> {
        if !self.eat('^') {
            return Ok(1);
        }
        let col = self.column();
        let k = self.digits()?;
        match usize::try_from(&k) {
            Ok(0) | Err(_) => Err(Error::Parse {
                column: col,
                message: "exponent must be a positive integer".into(),
            }),
            Ok(k) => Ok(k),
        }
    }
}

/// Parses a group expression into a presentation with one generator per
/// cyclic summand.
pub fn parse_group_expr(text: &str) -> Result<Presentation> {
    let mut cur = Cursor::new(text);
    let mut moduli = Vec::new();
    cur.skip_ws();
    if cur.peek().is_none() {
        return cur.error("empty group expression");
    }
    loop {
        cur.skip_ws();
        if !cur.eat('Z') {
            return cur.error("expected `Z`");
        }
        if cur.eat('/') {
            let col = cur.column();
            let n = cur.digits()?;
            if n.is_zero() {
                return Err(Error::ZeroModulus { column: col });
            }
            let k = cur.exponent()?;
            moduli.extend(std::iter::repeat_n(n, k));
        } else {
            let k = cur.exponent()?;
            moduli.extend(std::iter::repeat_n(BigInt::zero(), k));
        }
        cur.skip_ws();
        match cur.peek() {
            None => break,
            Some('+') => {
                cur.pos += 1;
            }
            Some(c) => return cur.error(format!("unexpected `{c}`")),
        }
    }
    Ok(Presentation::cyclics(moduli))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_carry_columns() {
        assert_eq!(
            parse_group_expr("Z/").unwrap_err(),
            Error::Parse {
                column: 3,
                message: "expected a natural number".into()
            }
        );
        assert_eq!(parse_group_expr("Z/0").unwrap_err(), Error::ZeroModulus { column: 3 });
        assert!(matches!(parse_group_expr(""), Err(Error::Parse { column: 1, .. })));
        assert!(matches!(parse_group_expr("Z + Q"), Err(Error::Parse { column: 5, .. })));
        assert!(matches!(parse_group_expr("Z^0"), Err(Error::Parse { column: 3, .. })));
        assert!(matches!(parse_group_expr("Z Z"), Err(Error::Parse { column: 3, .. })));
    }

    #[test]
    fn trivial_and_powers() {
        assert!(parse_group_expr("Z/1").unwrap().is_trivial());
        let a = parse_group_expr("Z/3^2+Z^3").unwrap();
        assert_eq!(a.gens(), 5);
        assert_eq!(a.canonical_form().to_expr(), "Z^3 + Z/3^2");
    }
}
