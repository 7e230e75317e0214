use num_bigint::BigInt;
use num_traits::Zero;

use super::{Polynomial, Rational, SymbolicError};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Token)>, SymbolicError> {
    let bytes: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = bytes[start..i].iter().collect();
            out.push((start, Token::Int(text.parse().expect("digits parse as an integer"))));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_alphanumeric() || bytes[i] == '_') {
                i += 1;
            }
            out.push((start, Token::Ident(bytes[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Token::Op(c)));
            i += 1;
        } else {
            return Err(SymbolicError::Parse { pos: i, message: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    names: &'a [String],
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error(&self, message: impl Into<String>) -> SymbolicError {
        SymbolicError::Parse { pos: self.offset(), message: message.into() }
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial, SymbolicError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc += &self.term()?;
            } else if self.eat('-') {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, SymbolicError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let at = self.offset();
                let d = self.unary()?;
                let c = d
                    .as_constant()
                    .filter(|c| !c.is_zero())
                    .ok_or(SymbolicError::Parse { pos: at, message: "division only by nonzero constants".into() })?;
                acc = acc.scale(&c.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, SymbolicError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, SymbolicError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Token::Int(k)) => {
                    self.pos += 1;
                    let k: u32 = k.try_into().map_err(|_| self.error("exponent too large"))?;
                    Ok(base.pow(k))
                }
                _ => Err(self.error("expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial, SymbolicError> {
        let n = self.names.len();
        match self.peek().cloned() {
            Some(Token::Int(v)) => {
                self.pos += 1;
                Ok(Polynomial::constant(n, Rational::from_integer(v)))
            }
            Some(Token::Ident(name)) => {
                let idx = self
                    .names
                    .iter()
                    .position(|x| *x == name)
                    .ok_or_else(|| self.error(format!("unknown variable '{name}'")))?;
                self.pos += 1;
                Ok(Polynomial::variable(n, idx))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }
}

/// Parses expressions such as `-a1^2*a2 + 3/2*(a1 - a2)` over the given
/// variable names.
pub fn parse_polynomial(s: &str, names: &[String]) -> Result<Polynomial, SymbolicError> {
    let mut parser = Parser { tokens: tokenize(s)?, pos: 0, names, end: s.len() };
    let p = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(p)
}

/// Parses `p`, `-p` or `p/q` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, SymbolicError> {
    let bad = |message: &str| SymbolicError::Parse { pos: 0, message: format!("{message}: '{s}'") };
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("invalid rational"))?;
    let den: BigInt = den.parse().map_err(|_| bad("invalid rational"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(num, den))
}
