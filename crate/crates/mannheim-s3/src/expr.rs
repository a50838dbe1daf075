//! Minimal arithmetic expression grammar for curvature profiles given on
//! the command line: variables `s` or `sigma`, constants `pi` and `e`,
//! operators `+ - * / ^`, functions `sin cos tan exp sqrt`, parentheses.
//! Expressions differentiate symbolically, so profile derivatives stay
//! exact through the admissibility and synthesis machinery.

use std::fmt;
use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::frenet::ScalarFn;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Sqrt,
    /// produced by differentiation of general powers; not parseable
    Ln,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Parses the expression; errors carry a character position.
    pub fn parse(text: &str) -> Result<Expr> {
        let mut p = Parser {
            chars: text.chars().collect(),
            pos: 0,
            text,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var => x,
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, b) => a.eval(x).powf(b.eval(x)),
            Expr::Neg(a) => -a.eval(x),
            Expr::Call(f, a) => {
                let v = a.eval(x);
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Tan => v.tan(),
                    Func::Exp => v.exp(),
                    Func::Sqrt => v.sqrt(),
                    Func::Ln => v.ln(),
                }
            }
        }
    }

    /// Symbolic derivative.
    pub fn diff(&self) -> Expr {
        use Expr::*;
        match self {
            Num(_) => Num(0.0),
            Var => Num(1.0),
            Add(a, b) => add(a.diff(), b.diff()),
            Sub(a, b) => sub(a.diff(), b.diff()),
            Mul(a, b) => add(
                mul(a.diff(), (**b).clone()),
                mul((**a).clone(), b.diff()),
            ),
            Div(a, b) => Div(
                Box::new(sub(
                    mul(a.diff(), (**b).clone()),
                    mul((**a).clone(), b.diff()),
                )),
                Box::new(mul((**b).clone(), (**b).clone())),
            ),
            Pow(a, b) => match **b {
                // d(u^c) = c u^(c-1) u'
                Num(c) => mul(
                    mul(Num(c), Pow(a.clone(), Box::new(Num(c - 1.0)))),
                    a.diff(),
                ),
                // d(u^v) = u^v (v' ln u + v u'/u)
                _ => mul(
                    Pow(a.clone(), b.clone()),
                    add(
                        mul(b.diff(), Call(Func::Ln, a.clone())),
                        Div(
                            Box::new(mul((**b).clone(), a.diff())),
                            Box::new((**a).clone()),
                        ),
                    ),
                ),
            },
            Neg(a) => Neg(Box::new(a.diff())),
            Call(f, a) => {
                let inner = a.diff();
                let outer = match f {
                    Func::Sin => Call(Func::Cos, a.clone()),
                    Func::Cos => Neg(Box::new(Call(Func::Sin, a.clone()))),
                    // d tan = 1 + tan^2
                    Func::Tan => add(
                        Num(1.0),
                        mul(Call(Func::Tan, a.clone()), Call(Func::Tan, a.clone())),
                    ),
                    Func::Exp => Call(Func::Exp, a.clone()),
                    // d sqrt(u) = 1/(2 sqrt u) (u' applied below)
                    Func::Sqrt => Div(
                        Box::new(Num(0.5)),
                        Box::new(Call(Func::Sqrt, a.clone())),
                    ),
                    Func::Ln => Div(Box::new(Num(1.0)), Box::new((**a).clone())),
                };
                mul(outer, inner)
            }
        }
    }

    /// Wraps the expression (and its first two symbolic derivatives) as a
    /// profile function.
    pub fn to_scalar_fn(&self) -> ScalarFn {
        let f = self.clone();
        let d1 = self.diff();
        let d2 = d1.diff();
        ScalarFn::from_parts(
            Arc::new(move |x| f.eval(x)),
            Some(Arc::new(move |x| d1.eval(x))),
            Some(Arc::new(move |x| d2.eval(x))),
        )
    }

    /// Checks the expression evaluates finitely over a sampled interval.
    pub fn validate_on(&self, domain: (f64, f64), samples: usize) -> Result<()> {
        for i in 0..samples {
            let x = domain.0 + (domain.1 - domain.0) * i as f64 / (samples - 1).max(1) as f64;
            let v = self.eval(x);
            if !v.is_finite() {
                return Err(GeomError::DomainError(format!(
                    "expression evaluates to {v} at {x}"
                )));
            }
        }
        Ok(())
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) => Expr::Num(x + y),
        (Expr::Num(z), _) if *z == 0.0 => b,
        (_, Expr::Num(z)) if *z == 0.0 => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) => Expr::Num(x - y),
        (_, Expr::Num(z)) if *z == 0.0 => a,
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) => Expr::Num(x * y),
        (Expr::Num(z), _) | (_, Expr::Num(z)) if *z == 0.0 => Expr::Num(0.0),
        (Expr::Num(o), _) if *o == 1.0 => b,
        (_, Expr::Num(o)) if *o == 1.0 => a,
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var => write!(f, "s"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Call(func, a) => {
                let name = match func {
                    Func::Sin => "sin",
                    Func::Cos => "cos",
                    Func::Tan => "tan",
                    Func::Exp => "exp",
                    Func::Sqrt => "sqrt",
                    Func::Ln => "ln",
                };
                write!(f, "{name}({a})")
            }
        }
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> GeomError {
        GeomError::DomainError(format!(
            "expression parse error at position {} in '{}': {msg}",
            self.pos, self.text
        ))
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

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some('-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some('/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // unary minus binds looser than '^': -s^2 is -(s^2)
    fn factor(&mut self) -> Result<Expr> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            // right-associative; exponent may itself be negated
            let exp = self.factor()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            _ => Err(self.error("expected a number, name or '('")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if c.is_ascii_digit() || c == '.' {
                self.pos += 1;
            } else if (c == 'e' || c == 'E')
                && self.pos > start
                && self
                    .chars
                    .get(self.pos + 1)
                    .is_some_and(|n| n.is_ascii_digit() || *n == '+' || *n == '-')
            {
                self.pos += 2;
            } else {
                break;
            }
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<f64>()
            .map(Expr::Num)
            .map_err(|_| self.error("bad numeric literal"))
    }

    fn ident(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name: String = self.chars[start..self.pos].iter().collect();
        match name.as_str() {
            "s" | "sigma" | "t" => Ok(Expr::Var),
            "pi" => Ok(Expr::Num(std::f64::consts::PI)),
            "e" => Ok(Expr::Num(std::f64::consts::E)),
            "sin" | "cos" | "tan" | "exp" | "sqrt" => {
                if self.peek() != Some('(') {
                    return Err(self.error("function call needs '('"));
                }
                self.pos += 1;
                let arg = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                let f = match name.as_str() {
                    "sin" => Func::Sin,
                    "cos" => Func::Cos,
                    "tan" => Func::Tan,
                    "exp" => Func::Exp,
                    _ => Func::Sqrt,
                };
                Ok(Expr::Call(f, Box::new(arg)))
            }
            other => Err(self.error(&format!("unknown name '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }

    #[test]
    fn parses_and_evaluates() {
        close(Expr::parse("1-0.5*s").unwrap().eval(2.0), 0.0);
        close(Expr::parse("sin(pi*s)^2 + cos(pi*s)^2").unwrap().eval(0.37), 1.0);
        close(Expr::parse("2^3^2").unwrap().eval(0.0), 512.0); // right assoc
        close(Expr::parse("-s^2").unwrap().eval(3.0), -9.0);
        close(Expr::parse("1/(1+sigma)").unwrap().eval(1.0), 0.5);
        close(Expr::parse("sqrt(4*exp(0))").unwrap().eval(0.0), 2.0);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(Expr::parse("1 +").is_err());
        assert!(Expr::parse("sin s").is_err());
        assert!(Expr::parse("(1").is_err());
        assert!(Expr::parse("foo(2)").is_err());
        assert!(Expr::parse("1 2").is_err());
    }

    #[test]
    fn symbolic_derivatives_match_finite_differences() {
        for text in [
            "1-0.5*s",
            "sin(2*s) * exp(-s/3)",
            "1/(1+s)",
            "s^3 - 2*s + 1",
            "sqrt(1+s^2)",
            "tan(s/4)",
            "2^s",
        ] {
            let e = Expr::parse(text).unwrap();
            let d = e.diff();
            for i in 0..9 {
                let x = 0.1 + i as f64 * 0.2;
                let h = 1e-5;
                let fd = (e.eval(x - 2.0 * h) - 8.0 * e.eval(x - h) + 8.0 * e.eval(x + h)
                    - e.eval(x + 2.0 * h))
                    / (12.0 * h);
                assert!(
                    (d.eval(x) - fd).abs() < 1e-9 * (1.0 + fd.abs()),
                    "{text} at {x}: {} vs {fd}",
                    d.eval(x)
                );
            }
        }
    }

    #[test]
    fn scalar_fn_wrapper_exposes_exact_derivatives() {
        let f = Expr::parse("1-0.5*s").unwrap().to_scalar_fn();
        close(f.value(0.4), 0.8);
        close(f.derivative(0.4), -0.5);
        close(f.second_derivative(0.4), 0.0);
    }
}
