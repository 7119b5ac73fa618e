use super::{Generator, GeneratorWord, OperatorExpression};
use crate::linalg::{c64, Complex64};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("species {species} at byte {position} outside 1..={dim}")]
    SpeciesOutOfRange {
        species: usize,
        dim: usize,
        position: usize,
    },
}

/// Parses an expression over `dim` species.
///
/// A term may also be a bare coefficient, read as a multiple of the unit.
pub fn parse_expression(text: &str, dim: usize) -> Result<OperatorExpression, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        dim,
    };
    p.expr()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
}

impl Parser<'_> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> Result<(), ParseError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected '{}'", byte as char))
        }
    }

    fn expr(&mut self) -> Result<OperatorExpression, ParseError> {
        let mut out = OperatorExpression::zero();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1.0
            }
            Some(b'+') => {
                self.pos += 1;
                1.0
            }
            None => return self.error("empty expression"),
            _ => 1.0,
        };
        loop {
            let (coeff, word) = self.term()?;
            out.add_term(word, coeff * sign);
            sign = match self.peek() {
                None => break,
                Some(b'+') => 1.0,
                Some(b'-') => -1.0,
                Some(other) => return self.error(format!("unexpected '{}'", other as char)),
            };
            self.pos += 1;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Complex64, GeneratorWord), ParseError> {
        let coeff = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let re = self.number()?;
                self.expect(b',')?;
                let im = self.number()?;
                self.expect(b')')?;
                Some(c64(re, im))
            }
            Some(b) if b.is_ascii_digit() || b == b'.' => Some(c64(self.number()?, 0.0)),
            _ => None,
        };
        let mut word = Vec::new();
        let mut factors = 0;
        loop {
            match self.peek() {
                Some(b'c') | Some(b'a') => {
                    word.push(self.generator()?);
                    factors += 1;
                }
                Some(b'1') => {
                    let start = self.pos;
                    if self.number()? != 1.0 {
                        self.pos = start;
                        return self.error("a factor must be c(i), a(i) or 1");
                    }
                    factors += 1;
                }
                _ => break,
            }
        }
        if coeff.is_none() && factors == 0 {
            return self.error("expected a term");
        }
        Ok((coeff.unwrap_or(c64(1.0, 0.0)), word))
    }

    fn generator(&mut self) -> Result<Generator, ParseError> {
        let kind = self.src[self.pos];
        self.pos += 1;
        if self.src.get(self.pos) != Some(&b'(') {
            return self.error("expected '(' after generator name");
        }
        self.pos += 1;
        self.skip_ws();
        let position = self.pos;
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected a species index");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let species: usize = match text.parse() {
            Ok(s) => s,
            Err(_) => return self.error("species index too large"),
        };
        self.expect(b')')?;
        if species == 0 || species > self.dim {
            return Err(ParseError::SpeciesOutOfRange {
                species,
                dim: self.dim,
                position,
            });
        }
        Ok(if kind == b'c' {
            Generator::creation(species)
        } else {
            Generator::annihilation(species)
        })
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src;
        let mut end = start;
        if matches!(bytes.get(end), Some(b'-') | Some(b'+')) {
            end += 1;
        }
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if matches!(bytes.get(end), Some(b'e') | Some(b'E')) {
            let mut exp = end + 1;
            if matches!(bytes.get(exp), Some(b'-') | Some(b'+')) {
                exp += 1;
            }
            if bytes.get(exp).is_some_and(u8::is_ascii_digit) {
                end = exp;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
            }
        }
        let text = std::str::from_utf8(&bytes[start..end]).expect("ascii number");
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.pos = end;
                Ok(v)
            }
            _ => self.error("expected a number"),
        }
    }
}
