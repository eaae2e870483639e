//! Polynomial literals: `y^2*x + x^5`, `3/2*x^2 - y`, `(x+y)*(x^2+y^4)`.
//! `*` between factors and `^1` are optional; `e` (or `ε`) is the parameter.

use std::str::FromStr;

use num_bigint::BigInt;

use super::monomial::Var;
use super::poly::Polynomial;
use super::rational::Rational;
use crate::error::{Error, Result};

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() == Some('^') {
            self.pos += 1;
            let at = self.pos;
            let n = self.integer()?;
            u32::try_from(&n).map_err(|_| Error::Parse {
                pos: at,
                msg: "exponent too large".into(),
            })
        } else {
            Ok(1)
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero();
        let mut sign = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -1
            }
            Some('+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { acc - t } else { acc + t };
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some('-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(c) if c == '(' || c.is_ascii_digit() || var_of(c).is_some() => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let d = if self.peek() == Some('/') {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.integer()?;
                    if d == BigInt::from(0) {
                        return Err(Error::Parse {
                            pos: at,
                            msg: "zero denominator".into(),
                        });
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Ok(Polynomial::constant(Rational::new(n, d)))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                let k = self.exponent()?;
                Ok(inner.pow(k))
            }
            Some(c) => match var_of(c) {
                Some(v) => {
                    self.pos += 1;
                    let k = self.exponent()?;
                    Ok(Polynomial::var(v).pow(k))
                }
                None => self.err(format!("unexpected character '{c}'")),
            },
            None => self.err("unexpected end of input"),
        }
    }
}

fn var_of(c: char) -> Option<Var> {
    match c {
        'x' => Some(Var::X),
        'y' => Some(Var::Y),
        'e' | 'ε' => Some(Var::E),
        _ => None,
    }
}

pub fn parse_polynomial(s: &str) -> Result<Polynomial> {
    let mut p = Parser {
        chars: s.chars().collect(),
        pos: 0,
    };
    if p.peek().is_none() {
        return p.err("empty polynomial");
    }
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}

impl FromStr for Polynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_polynomial(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::monomial::Monomial;
    use crate::algebra::rational::{q, q2};

    #[test]
    fn grammar_examples() {
        let f = parse_polynomial("y^2*x + x^5").unwrap();
        assert_eq!(f.coeff(&Monomial::xy(1, 2)), q(1));
        assert_eq!(f.coeff(&Monomial::xy(5, 0)), q(1));
        assert_eq!(f.len(), 2);
        let g = parse_polynomial("3/2*x^2 - y").unwrap();
        assert_eq!(g.coeff(&Monomial::xy(2, 0)), q2(3, 2));
        assert_eq!(g.coeff(&Monomial::xy(0, 1)), q(-1));
    }

    #[test]
    fn optional_star_and_parentheses() {
        assert_eq!(
            parse_polynomial("2xy^2").unwrap(),
            parse_polynomial("2*x*y^2").unwrap()
        );
        let f = parse_polynomial("(x+y)*(x^2+y^4)").unwrap();
        assert_eq!(f, parse_polynomial("x^3 + x^2*y + x*y^4 + y^5").unwrap());
        assert_eq!(
            parse_polynomial("(x - y)^2").unwrap(),
            parse_polynomial("x^2 - 2xy + y^2").unwrap()
        );
        assert_eq!(
            parse_polynomial("ε^2 x").unwrap(),
            parse_polynomial("x*e^2").unwrap()
        );
        assert_eq!(parse_polynomial("-x + x").unwrap(), Polynomial::zero());
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_polynomial("x + z"),
            Err(Error::Parse {
                pos: 4,
                msg: "unexpected character 'z'".into()
            })
        );
        assert!(matches!(
            parse_polynomial("x^"),
            Err(Error::Parse { pos: 2, .. })
        ));
        assert!(matches!(
            parse_polynomial("1/0"),
            Err(Error::Parse { pos: 2, .. })
        ));
        assert!(matches!(
            parse_polynomial(""),
            Err(Error::Parse { pos: 0, .. })
        ));
        assert!(matches!(
            parse_polynomial("x)"),
            Err(Error::Parse { pos: 1, .. })
        ));
    }
}
