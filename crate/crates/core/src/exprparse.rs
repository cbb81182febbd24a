//! A small expression language for scalar fields.
//!
//! Problems are defined from the command line or config files by plain text
//! formulas such as `2*sin(2*pi*x)` or `x*(1-x)`, so nothing has to be
//! recompiled to change the potential, the source term or the diffusion
//! coefficient. The language is deliberately tiny:
//!
//! - variables `x`, `y`, `z` (components of the evaluation point),
//! - constants `pi` and `e` (folded into literals at parse time),
//! - binary operators `+ - * / ^` with `^` right-associative and binding
//!   tighter than unary minus,
//! - functions `sin cos exp log sqrt abs`.
//!
//! Evaluation never returns a silent NaN: domain violations (negative `log`
//! or `sqrt` arguments, division by zero, overflow) are reported as typed
//! errors.

use std::fmt;

use thiserror::Error;

/// Binary operators in increasing precedence: `+ -` < `* /` < `^`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Built-in single-argument functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }
}

/// Abstract syntax tree of a parsed expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    /// Variable by coordinate index: `x` = 0, `y` = 1, `z` = 2.
    Var(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Syntax error with the byte offset of the offending token.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("syntax error at byte {offset}: {message}")]
pub struct ParseError {
    pub message: String,
    pub offset: usize,
}

/// Typed evaluation failure; never a silent NaN.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("{func}({arg}) is outside the function domain")]
    Domain { func: &'static str, arg: f64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0}^{1} is not a real number")]
    PowDomain(f64, f64),
    #[error("non-finite result in '{0}'")]
    NonFinite(&'static str),
    #[error("variable '{var}' used but evaluation point has dimension {dim}")]
    MissingVariable { var: char, dim: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // optional exponent: 1e-3, 2.5E+10
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let lit = &text[start..i];
                let v: f64 = lit.parse().map_err(|_| ParseError {
                    message: format!("invalid number literal '{lit}'"),
                    offset: start,
                })?;
                toks.push((Tok::Num(v), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                return Err(ParseError {
                    message: format!("unexpected character '{c}'"),
                    offset: i,
                })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            message: message.into(),
            offset: self.offset(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Bin(BinOp::Add, Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Bin(BinOp::Sub, Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Bin(BinOp::Mul, Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    lhs = Expr::Bin(BinOp::Div, Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // unary minus binds looser than '^': -2^2 == -(2^2)
    fn factor(&mut self) -> Result<Expr, ParseError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            // right-associative; exponent may carry a unary minus
            let exp = self.factor()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let off = self.offset();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Num(v)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(ParseError {
                        message: "expected ')'".into(),
                        offset: off,
                    }),
                }
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "x" => Ok(Expr::Var(0)),
                "y" => Ok(Expr::Var(1)),
                "z" => Ok(Expr::Var(2)),
                "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                "e" => Ok(Expr::Num(std::f64::consts::E)),
                "sin" | "cos" | "exp" | "log" | "sqrt" | "abs" => {
                    let func = match name.as_str() {
                        "sin" => Func::Sin,
                        "cos" => Func::Cos,
                        "exp" => Func::Exp,
                        "log" => Func::Log,
                        "sqrt" => Func::Sqrt,
                        _ => Func::Abs,
                    };
                    match self.bump() {
                        Some(Tok::LParen) => {}
                        _ => {
                            return Err(ParseError {
                                message: format!("expected '(' after '{name}'"),
                                offset: off,
                            })
                        }
                    }
                    let arg = self.expr()?;
                    match self.bump() {
                        Some(Tok::RParen) => Ok(Expr::Call(func, Box::new(arg))),
                        _ => Err(ParseError {
                            message: format!("unclosed argument of '{name}'"),
                            offset: off,
                        }),
                    }
                }
                _ => Err(ParseError {
                    message: format!("unknown identifier '{name}'"),
                    offset: off,
                }),
            },
            _ => Err(self.err("expected a number, variable, function or '('")),
        }
    }
}

/// Parse an expression; on failure the error carries the byte offset.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.pos != toks.len() {
        return Err(p.err("trailing tokens after expression"));
    }
    Ok(e)
}

impl Expr {
    /// Evaluate at a point; `point[0]` is `x`, `point[1]` is `y`, `point[2]` is `z`.
    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        match self {
            Expr::Num(v) => Ok(*v),
            Expr::Var(i) => point.get(*i).copied().ok_or(EvalError::MissingVariable {
                var: ['x', 'y', 'z'][*i],
                dim: point.len(),
            }),
            Expr::Neg(e) => Ok(-e.eval(point)?),
            Expr::Bin(op, a, b) => {
                let x = a.eval(point)?;
                let y = b.eval(point)?;
                let v = match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(EvalError::DivisionByZero);
                        }
                        x / y
                    }
                    BinOp::Pow => {
                        let v = x.powf(y);
                        if v.is_nan() && !x.is_nan() && !y.is_nan() {
                            return Err(EvalError::PowDomain(x, y));
                        }
                        v
                    }
                };
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(EvalError::NonFinite(op_name(*op)))
                }
            }
            Expr::Call(f, a) => {
                let x = a.eval(point)?;
                let v = match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Log => {
                        if x <= 0.0 {
                            return Err(EvalError::Domain { func: "log", arg: x });
                        }
                        x.ln()
                    }
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(EvalError::Domain { func: "sqrt", arg: x });
                        }
                        x.sqrt()
                    }
                    Func::Abs => x.abs(),
                };
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(EvalError::NonFinite(f.name()))
                }
            }
        }
    }

    /// Largest variable index used, if any (0 = `x`, 1 = `y`, 2 = `z`).
    pub fn max_var_index(&self) -> Option<usize> {
        match self {
            Expr::Num(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Neg(e) | Expr::Call(_, e) => e.max_var_index(),
            Expr::Bin(_, a, b) => match (a.max_var_index(), b.max_var_index()) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
        }
    }
}

fn op_name(op: BinOp) -> &'static str {
    match op {
        BinOp::Add => "+",
        BinOp::Sub => "-",
        BinOp::Mul => "*",
        BinOp::Div => "/",
        BinOp::Pow => "^",
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesized form; reparsing the output yields a structurally
    /// equal tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Var(i) => write!(f, "{}", ['x', 'y', 'z'][*i]),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Bin(op, a, b) => write!(f, "({a} {} {b})", op_name(*op)),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn ev(text: &str, x: f64) -> f64 {
        parse(text).unwrap().eval(&[x]).unwrap()
    }

    #[test]
    fn parses_the_benchmark_fields() {
        assert!((ev("2*sin(2*pi*x)", 0.25) - 2.0).abs() < 1e-15);
        assert!((ev("x*(1-x)", 0.5) - 0.25).abs() < 1e-15);
        assert!((ev("5*(x+1)*x", 1.0) - 10.0).abs() < 1e-15);
    }

    #[test]
    fn power_is_right_associative_and_tighter_than_unary_minus() {
        assert_eq!(ev("2^3^2", 0.0), 512.0);
        assert_eq!(ev("-2^2", 0.0), -4.0);
        assert_eq!(ev("2^-1", 0.0), 0.5);
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(ev("  1 +\t2 * 3 ", 0.0), 7.0);
    }

    #[test]
    fn simple_evaluations() {
        assert_eq!(ev("exp(-x)", 0.0), 1.0);
        assert_eq!(ev("sqrt(abs(-4))", 0.0), 2.0);
    }

    #[test]
    fn domain_errors_are_typed() {
        let e = parse("log(x)").unwrap();
        assert!(matches!(
            e.eval(&[-1.0]),
            Err(EvalError::Domain { func: "log", .. })
        ));
        let e = parse("sqrt(x)").unwrap();
        assert!(matches!(e.eval(&[-1.0]), Err(EvalError::Domain { .. })));
        let e = parse("1/x").unwrap();
        assert!(matches!(e.eval(&[0.0]), Err(EvalError::DivisionByZero)));
        let e = parse("exp(x)").unwrap();
        assert!(matches!(e.eval(&[1e4]), Err(EvalError::NonFinite("exp"))));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let err = parse("1 + foo(2)").unwrap_err();
        assert_eq!(err.offset, 4);
        let err = parse("(1+2").unwrap_err();
        assert_eq!(err.offset, 0);
        let err = parse("1 2").unwrap_err();
        assert_eq!(err.offset, 2);
        let err = parse("1 + $").unwrap_err();
        assert_eq!(err.offset, 4);
    }

    #[test]
    fn missing_variable_is_reported() {
        let e = parse("x+y").unwrap();
        assert!(matches!(
            e.eval(&[1.0]),
            Err(EvalError::MissingVariable { var: 'y', dim: 1 })
        ));
        assert_eq!(e.max_var_index(), Some(1));
    }

    // literals are non-negative, as produced by the tokenizer; negative
    // values appear as Neg nodes
    fn random_expr(rng: &mut StdRng, depth: usize) -> Expr {
        if depth == 0 || rng.gen_bool(0.3) {
            return match rng.gen_range(0..3) {
                0 => Expr::Num(rng.gen_range(0.0..5.0)),
                1 => Expr::Var(rng.gen_range(0..2)),
                _ => Expr::Num(rng.gen_range(0..10) as f64),
            };
        }
        match rng.gen_range(0..7) {
            0 => Expr::Neg(Box::new(random_expr(rng, depth - 1))),
            1..=4 => {
                let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow]
                    [rng.gen_range(0..5)];
                Expr::Bin(
                    op,
                    Box::new(random_expr(rng, depth - 1)),
                    Box::new(random_expr(rng, depth - 1)),
                )
            }
            _ => {
                let f = [Func::Sin, Func::Cos, Func::Exp, Func::Log, Func::Sqrt, Func::Abs]
                    [rng.gen_range(0..6)];
                Expr::Call(f, Box::new(random_expr(rng, depth - 1)))
            }
        }
    }

    #[test]
    fn print_parse_roundtrip_is_structural_identity() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..500 {
            let e = random_expr(&mut rng, 6);
            let printed = e.to_string();
            let reparsed = parse(&printed).unwrap();
            assert_eq!(e, reparsed, "roundtrip failed for '{printed}'");
        }
    }

    #[test]
    fn fuzz_evaluation_never_panics() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..2000 {
            let e = random_expr(&mut rng, 6);
            let p = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            if let Ok(v) = e.eval(&p) {
                assert!(v.is_finite()); // typed failure is the other fine outcome
            }
        }
    }
}
