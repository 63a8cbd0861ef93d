//! Recursive-descent parser for right-hand sides `f(x)`.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | 'x' | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Exponents must be constant integers, checked at parse time.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Abs,
}

impl Func {
    const ALL: [(&'static str, Func); 6] = [
        ("sin", Func::Sin),
        ("cos", Func::Cos),
        ("sinh", Func::Sinh),
        ("cosh", Func::Cosh),
        ("exp", Func::Exp),
        ("abs", Func::Abs),
    ];

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Sinh => v.sinh(),
            Func::Cosh => v.cosh(),
            Func::Exp => v.exp(),
            Func::Abs => v.abs(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expression {
    Number(f64),
    X,
    Neg(Box<Expression>),
    Binary(BinOp, Box<Expression>, Box<Expression>),
    Pow(Box<Expression>, i32),
    Call(Func, Box<Expression>),
}

impl Expression {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expression::Number(v) => *v,
            Expression::X => x,
            Expression::Neg(e) => -e.eval(x),
            Expression::Binary(op, a, b) => {
                let (a, b) = (a.eval(x), b.eval(x));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                }
            }
            Expression::Pow(base, n) => base.eval(x).powi(*n),
            Expression::Call(func, arg) => func.apply(arg.eval(x)),
        }
    }

    fn depends_on_x(&self) -> bool {
        match self {
            Expression::Number(_) => false,
            Expression::X => true,
            Expression::Neg(e) | Expression::Pow(e, _) | Expression::Call(_, e) => e.depends_on_x(),
            Expression::Binary(_, a, b) => a.depends_on_x() || b.depends_on_x(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    /// Byte offset into the source.
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at byte {}: expected {}, found {}",
            self.offset,
            self.expected.join(" | "),
            self.found
        )
    }
}

impl std::error::Error for SyntaxError {}

const OPERAND: &[&str] = &["number", "x", "-", "(", "function"];

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.pos).copied()
    }

    fn error(&mut self, expected: &[&'static str]) -> SyntaxError {
        self.skip_ws();
        let found = match self.src[self.pos..].chars().next() {
            Some(c) => format!("'{c}'"),
            None => "end of input".into(),
        };
        SyntaxError {
            offset: self.pos,
            expected: expected.to_vec(),
            found,
        }
    }

    fn expect(&mut self, byte: u8, name: &'static str) -> Result<(), SyntaxError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn expr(&mut self) -> Result<Expression, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Expression::Binary(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Expression, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Expression::Binary(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Expression, SyntaxError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expression::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expression, SyntaxError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        let exponent = self.unary()?;
        let value = exponent.eval(0.0);
        if exponent.depends_on_x()
            || value.fract() != 0.0
            || !(value.abs() <= i32::MAX as f64)
        {
            self.pos = start;
            return Err(self.error(&["integer exponent"]));
        }
        Ok(Expression::Pow(Box::new(base), value as i32))
    }

    fn atom(&mut self) -> Result<Expression, SyntaxError> {
        let rest = match self.peek() {
            Some(_) => &self.src[self.pos..],
            None => return Err(self.error(OPERAND)),
        };
        let first = rest.as_bytes()[0];
        if first.is_ascii_digit() || first == b'.' {
            return self.number();
        }
        if first == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            self.expect(b')', ")")?;
            return Ok(inner);
        }
        let ident_len = rest
            .bytes()
            .take_while(|b| b.is_ascii_alphabetic())
            .count();
        let ident = &rest[..ident_len];
        if ident == "x" {
            self.pos += 1;
            return Ok(Expression::X);
        }
        if let Some(&(_, func)) = Func::ALL.iter().find(|(name, _)| *name == ident) {
            self.pos += ident_len;
            self.expect(b'(', "(")?;
            let arg = self.expr()?;
            self.expect(b')', ")")?;
            return Ok(Expression::Call(func, Box::new(arg)));
        }
        Err(self.error(OPERAND))
    }

    fn number(&mut self) -> Result<Expression, SyntaxError> {
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let mut end = start;
        let digits = |end: &mut usize| {
            while bytes.get(*end).is_some_and(u8::is_ascii_digit) {
                *end += 1;
            }
        };
        digits(&mut end);
        if bytes.get(end) == Some(&b'.') {
            end += 1;
            digits(&mut end);
        }
        if matches!(bytes.get(end), Some(b'e' | b'E')) {
            let mut exp_end = end + 1;
            if matches!(bytes.get(exp_end), Some(b'+' | b'-')) {
                exp_end += 1;
            }
            if bytes.get(exp_end).is_some_and(u8::is_ascii_digit) {
                end = exp_end;
                digits(&mut end);
            }
        }
        match self.src[start..end].parse::<f64>() {
            Ok(v) => {
                self.pos = end;
                Ok(Expression::Number(v))
            }
            Err(_) => Err(self.error(&["number"])),
        }
    }
}

/// Parses `src` in full.
pub fn parse_expression(src: &str) -> Result<Expression, SyntaxError> {
    let mut parser = Parser { src, pos: 0 };
    if parser.peek().is_none() {
        return Err(parser.error(OPERAND));
    }
    let expr = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.error(&["+", "-", "*", "/", "^", "end of input"]));
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(src: &str, x: f64) -> f64 {
        parse_expression(src).unwrap().eval(x)
    }

    #[test]
    fn evaluates_simple_sum() {
        assert_eq!(value("sin(x)+1", 0.0), 1.0);
    }

    #[test]
    fn power_is_right_associative() {
        assert_eq!(value("2^3^2", 0.0), 512.0);
    }

    #[test]
    fn power_binds_tighter_than_negation() {
        assert_eq!(value("-2^2", 0.0), -4.0);
        assert_eq!(value("2^-1", 0.0), 0.5);
        assert_eq!(value("-x^2", 3.0), -9.0);
    }

    #[test]
    fn products_bind_tighter_than_sums() {
        assert_eq!(value("1 + 2 * 3 - 4 / 2", 0.0), 5.0);
        assert_eq!(value("(1 + 2) * 3", 0.0), 9.0);
        assert_eq!(value("8 / 4 / 2", 0.0), 1.0);
    }

    #[test]
    fn functions_and_literals() {
        assert_eq!(value("cosh(0) + exp(0) + abs(-2.5e1)", 0.0), 27.0);
        assert_eq!(value("x*x - cos(x)", 0.0), -1.0);
        assert_eq!(value(".5 + 1.", 0.0), 1.5);
    }

    #[test]
    fn incomplete_input_points_at_end() {
        let err = parse_expression("x +").unwrap_err();
        assert_eq!(err.offset, 3);
        assert_eq!(err.found, "end of input");
        assert!(err.expected.contains(&"number"));
    }

    #[test]
    fn rejects_bad_tokens_with_position() {
        assert_eq!(parse_expression("sin x").unwrap_err().offset, 4);
        assert_eq!(parse_expression("(x").unwrap_err().offset, 2);
        assert_eq!(parse_expression("x y").unwrap_err().offset, 2);
        assert_eq!(parse_expression("tan(x)").unwrap_err().offset, 0);
        assert_eq!(parse_expression("").unwrap_err().offset, 0);
        assert_eq!(parse_expression("  ").unwrap_err().offset, 2);
    }

    #[test]
    fn exponent_must_be_constant_integer() {
        let err = parse_expression("x^x").unwrap_err();
        assert_eq!((err.offset, err.expected.as_slice()), (2, ["integer exponent"].as_slice()));
        assert!(parse_expression("x^0.5").is_err());
        assert_eq!(value("x^(1+1)", 3.0), 9.0);
    }

    #[test]
    fn evaluation_is_total() {
        assert!(value("1/x", 0.0).is_infinite());
        assert!(value("x/x", 0.0).is_nan());
    }
}
