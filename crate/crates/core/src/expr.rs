//! Scalar expression trees for metric components.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' '-'? number)?
//! base   := number | ident | ident '(' expr ')' | '(' expr ')' | '-' base
//! ```
//!
//! `sin cos tan exp log sqrt` are the recognised functions; any other
//! identifier must be a coordinate name supplied to [`parse_expr`]. Exponents
//! are constant, so differentiation stays closed-form. Every node keeps its
//! byte span so numerical-domain failures can point back into the source.

use crate::jet::{DomainIssue, Jet, JetSpace};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub const SYNTHETIC: Span = Span { start: 0, end: 0 };

    fn join(a: Span, b: Span) -> Span {
        Span { start: a.start.min(b.start), end: a.end.max(b.end) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Const(f64),
    /// Coordinate by index into the chart's coordinate list.
    Var(usize),
    Unary(UnaryOp, Box<ScalarExpr>),
    Binary(BinaryOp, Box<ScalarExpr>, Box<ScalarExpr>),
}

/// Expression tree node. Equality is structural and ignores spans.
#[derive(Debug, Clone)]
pub struct ScalarExpr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for ScalarExpr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl ScalarExpr {
    fn new(kind: ExprKind, span: Span) -> ScalarExpr {
        ScalarExpr { kind, span }
    }

    pub fn constant(v: f64) -> ScalarExpr {
        ScalarExpr::new(ExprKind::Const(v), Span::SYNTHETIC)
    }

    pub fn var(index: usize) -> ScalarExpr {
        ScalarExpr::new(ExprKind::Var(index), Span::SYNTHETIC)
    }

    pub fn unary(op: UnaryOp, inner: ScalarExpr) -> ScalarExpr {
        let span = inner.span;
        ScalarExpr::new(ExprKind::Unary(op, Box::new(inner)), span)
    }

    pub fn binary(op: BinaryOp, lhs: ScalarExpr, rhs: ScalarExpr) -> ScalarExpr {
        let span = Span::join(lhs.span, rhs.span);
        ScalarExpr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span)
    }

    pub fn neg(e: ScalarExpr) -> ScalarExpr {
        if let ExprKind::Const(c) = e.kind {
            return ScalarExpr::new(ExprKind::Const(-c), e.span);
        }
        ScalarExpr::unary(UnaryOp::Neg, e)
    }

    pub fn add(a: ScalarExpr, b: ScalarExpr) -> ScalarExpr {
        ScalarExpr::binary(BinaryOp::Add, a, b)
    }

    pub fn sub(a: ScalarExpr, b: ScalarExpr) -> ScalarExpr {
        ScalarExpr::binary(BinaryOp::Sub, a, b)
    }

    pub fn mul(a: ScalarExpr, b: ScalarExpr) -> ScalarExpr {
        ScalarExpr::binary(BinaryOp::Mul, a, b)
    }

    pub fn div(a: ScalarExpr, b: ScalarExpr) -> ScalarExpr {
        ScalarExpr::binary(BinaryOp::Div, a, b)
    }

    pub fn pow(base: ScalarExpr, exponent: f64) -> ScalarExpr {
        ScalarExpr::binary(BinaryOp::Pow, base, ScalarExpr::constant(exponent))
    }

    pub fn sin(e: ScalarExpr) -> ScalarExpr {
        ScalarExpr::unary(UnaryOp::Sin, e)
    }

    pub fn cos(e: ScalarExpr) -> ScalarExpr {
        ScalarExpr::unary(UnaryOp::Cos, e)
    }

    pub fn exp(e: ScalarExpr) -> ScalarExpr {
        ScalarExpr::unary(UnaryOp::Exp, e)
    }

    pub fn scaled(self, c: f64) -> ScalarExpr {
        if c == 1.0 {
            self
        } else {
            ScalarExpr::mul(ScalarExpr::constant(c), self)
        }
    }

    /// Largest referenced coordinate index, if any variable appears.
    pub fn max_var(&self) -> Option<usize> {
        match &self.kind {
            ExprKind::Const(_) => None,
            ExprKind::Var(i) => Some(*i),
            ExprKind::Unary(_, a) => a.max_var(),
            ExprKind::Binary(_, a, b) => match (a.max_var(), b.max_var()) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
        }
    }

    /// Clone with every coordinate index shifted by `offset`; used when a
    /// lower-dimensional chart is embedded into a product chart.
    pub fn shift_vars(&self, offset: usize) -> ScalarExpr {
        let kind = match &self.kind {
            ExprKind::Const(c) => ExprKind::Const(*c),
            ExprKind::Var(i) => ExprKind::Var(i + offset),
            ExprKind::Unary(op, a) => ExprKind::Unary(*op, Box::new(a.shift_vars(offset))),
            ExprKind::Binary(op, a, b) => ExprKind::Binary(
                *op,
                Box::new(a.shift_vars(offset)),
                Box::new(b.shift_vars(offset)),
            ),
        };
        ScalarExpr::new(kind, self.span)
    }

    /// Renders the tree in the surface grammar; reparsing yields an equal tree.
    pub fn to_text(&self, coords: &[String]) -> String {
        let mut out = String::new();
        self.write(&mut out, coords, 0);
        out
    }

    // Precedence: 1 additive, 2 multiplicative, 3 power operand, 4 atom.
    fn write(&self, out: &mut String, coords: &[String], min_prec: u8) {
        let prec = match &self.kind {
            ExprKind::Const(c) if *c < 0.0 => 3,
            ExprKind::Const(_) | ExprKind::Var(_) => 4,
            ExprKind::Unary(UnaryOp::Neg, _) => 3,
            ExprKind::Unary(..) => 4,
            ExprKind::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => 1,
            ExprKind::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => 2,
            ExprKind::Binary(BinaryOp::Pow, ..) => 3,
        };
        if prec < min_prec {
            out.push('(');
            self.write(out, coords, 0);
            out.push(')');
            return;
        }
        match &self.kind {
            ExprKind::Const(c) => out.push_str(&format_const(*c)),
            ExprKind::Var(i) => out.push_str(&coords[*i]),
            ExprKind::Unary(UnaryOp::Neg, a) => {
                out.push('-');
                a.write(out, coords, 4);
            }
            ExprKind::Unary(op, a) => {
                out.push_str(match op {
                    UnaryOp::Sin => "sin",
                    UnaryOp::Cos => "cos",
                    UnaryOp::Tan => "tan",
                    UnaryOp::Exp => "exp",
                    UnaryOp::Log => "log",
                    UnaryOp::Sqrt => "sqrt",
                    UnaryOp::Neg => unreachable!(),
                });
                out.push('(');
                a.write(out, coords, 0);
                out.push(')');
            }
            ExprKind::Binary(op, a, b) => match op {
                BinaryOp::Add | BinaryOp::Sub => {
                    a.write(out, coords, 1);
                    out.push_str(if *op == BinaryOp::Add { " + " } else { " - " });
                    b.write(out, coords, 2);
                }
                BinaryOp::Mul | BinaryOp::Div => {
                    a.write(out, coords, 2);
                    out.push(if *op == BinaryOp::Mul { '*' } else { '/' });
                    b.write(out, coords, 3);
                }
                BinaryOp::Pow => {
                    a.write(out, coords, 4);
                    out.push('^');
                    if let ExprKind::Const(c) = b.kind {
                        out.push_str(&format_const(c));
                    } else {
                        b.write(out, coords, 4);
                    }
                }
            },
        }
    }

    /// Evaluates to a jet of the requested order at `point`.
    pub fn eval_jet(&self, point: &[f64], order: usize) -> Result<Jet, EvalError> {
        let space = JetSpace::get(point.len(), order)
            .map_err(|e| EvalError { span: self.span, message: e.to_string() })?;
        self.eval_in(point, space)
    }

    fn eval_in(&self, point: &[f64], space: &'static JetSpace) -> Result<Jet, EvalError> {
        let fail = |span: Span, issue: DomainIssue| EvalError { span, message: issue.to_string() };
        match &self.kind {
            ExprKind::Const(c) => Ok(Jet::constant(space, *c)),
            ExprKind::Var(i) => {
                if *i >= point.len() {
                    return Err(EvalError {
                        span: self.span,
                        message: format!(
                            "expression references coordinate {} but the chart has {}",
                            i,
                            point.len()
                        ),
                    });
                }
                Ok(Jet::variable(space, *i, point[*i]))
            }
            ExprKind::Unary(op, a) => {
                let inner = a.eval_in(point, space)?;
                match op {
                    UnaryOp::Neg => Ok(inner.neg()),
                    UnaryOp::Sin => Ok(inner.sin()),
                    UnaryOp::Cos => Ok(inner.cos()),
                    UnaryOp::Exp => Ok(inner.exp()),
                    UnaryOp::Tan => inner.tan().map_err(|e| fail(self.span, e)),
                    UnaryOp::Log => inner.ln().map_err(|e| fail(self.span, e)),
                    UnaryOp::Sqrt => inner.sqrt().map_err(|e| fail(self.span, e)),
                }
            }
            ExprKind::Binary(op, a, b) => {
                let lhs = a.eval_in(point, space)?;
                match op {
                    BinaryOp::Pow => {
                        let ExprKind::Const(exponent) = b.kind else {
                            return Err(EvalError {
                                span: b.span,
                                message: "exponent must be a numeric constant".into(),
                            });
                        };
                        lhs.powf(exponent).map_err(|e| fail(self.span, e))
                    }
                    _ => {
                        let rhs = b.eval_in(point, space)?;
                        match op {
                            BinaryOp::Add => Ok(lhs.add(&rhs)),
                            BinaryOp::Sub => Ok(lhs.sub(&rhs)),
                            BinaryOp::Mul => Ok(lhs.mul(&rhs)),
                            BinaryOp::Div => lhs.div(&rhs).map_err(|e| fail(self.span, e)),
                            BinaryOp::Pow => unreachable!(),
                        }
                    }
                }
            }
        }
    }

    /// Convenience: plain value at a point.
    pub fn eval_value(&self, point: &[f64]) -> Result<f64, EvalError> {
        Ok(self.eval_jet(point, 0)?.value())
    }
}

fn format_const(c: f64) -> String {
    format!("{c}")
}

#[derive(Debug, Clone, Error, PartialEq)]
#[error("at bytes {}..{}: {message}", span.start, span.end)]
pub struct EvalError {
    pub span: Span,
    pub message: String,
}

#[derive(Debug, Clone, Error, PartialEq)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

fn perr(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError { offset, message: message.into() }
}

const FUNCTIONS: [(&str, UnaryOp); 6] = [
    ("sin", UnaryOp::Sin),
    ("cos", UnaryOp::Cos),
    ("tan", UnaryOp::Tan),
    ("exp", UnaryOp::Exp),
    ("log", UnaryOp::Log),
    ("sqrt", UnaryOp::Sqrt),
];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, Span)>, ParseError> {
        let mut lx = Lexer { src: src.as_bytes(), pos: 0 };
        let mut out = Vec::new();
        loop {
            lx.skip_ws();
            if lx.pos >= lx.src.len() {
                return Ok(out);
            }
            let start = lx.pos;
            let c = lx.src[lx.pos];
            let tok = match c {
                b'+' => {
                    lx.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    lx.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    lx.pos += 1;
                    Tok::Star
                }
                b'/' => {
                    lx.pos += 1;
                    Tok::Slash
                }
                b'^' => {
                    lx.pos += 1;
                    Tok::Caret
                }
                b'(' => {
                    lx.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    lx.pos += 1;
                    Tok::RParen
                }
                b'0'..=b'9' => lx.number()?,
                c if c.is_ascii_alphabetic() || c == b'_' => lx.ident(),
                other => {
                    return Err(perr(start, format!("unexpected character '{}'", other as char)))
                }
            };
            out.push((tok, Span { start, end: lx.pos }));
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn number(&mut self) -> Result<Tok, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        if self.pos < self.src.len() && (self.src[self.pos] | 0x20) == b'e' {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-')
            {
                self.pos += 1;
            }
            if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                // not an exponent suffix after all (e.g. "2*exp(t)")
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map(Tok::Number)
            .map_err(|_| perr(start, format!("invalid number literal '{text}'")))
    }

    fn ident(&mut self) -> Tok {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        Tok::Ident(std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string())
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    coords: &'a [String],
    src_len: usize,
}

/// Parses an expression against a fixed coordinate list. Unknown identifiers
/// and misused function names are rejected here, not at evaluation time.
pub fn parse_expr(src: &str, coords: &[String]) -> Result<ScalarExpr, ParseError> {
    let toks = Lexer::tokens(src)?;
    let mut p = Parser { toks, pos: 0, coords, src_len: src.len() };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        let (_, span) = &p.toks[p.pos];
        return Err(perr(span.start, "unexpected trailing input"));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn bump(&mut self) -> Option<(Tok, Span)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(_, s)| s.start).unwrap_or(self.src_len)
    }

    fn expr(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = ScalarExpr::add(lhs, rhs);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = ScalarExpr::sub(lhs, rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.factor()?;
                    lhs = ScalarExpr::mul(lhs, rhs);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs = self.factor()?;
                    lhs = ScalarExpr::div(lhs, rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<ScalarExpr, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let mut sign = 1.0;
            if self.peek() == Some(&Tok::Minus) {
                self.bump();
                sign = -1.0;
            }
            let at = self.here();
            match self.bump() {
                Some((Tok::Number(n), span)) => {
                    let exp_span = Span::join(base.span, span);
                    let mut e = ScalarExpr::pow(base, sign * n);
                    e.span = exp_span;
                    Ok(e)
                }
                _ => Err(perr(at, "exponent must be a numeric constant")),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<ScalarExpr, ParseError> {
        let at = self.here();
        match self.bump() {
            Some((Tok::Number(n), span)) => Ok(ScalarExpr::new(ExprKind::Const(n), span)),
            Some((Tok::Minus, span)) => {
                let inner = self.base()?;
                let full = Span::join(span, inner.span);
                let mut e = ScalarExpr::neg(inner);
                e.span = full;
                Ok(e)
            }
            Some((Tok::LParen, span)) => {
                let mut inner = self.expr()?;
                match self.bump() {
                    Some((Tok::RParen, close)) => {
                        inner.span = Span::join(span, close);
                        Ok(inner)
                    }
                    _ => Err(perr(self.here().min(self.src_len), "expected ')'")),
                }
            }
            Some((Tok::Ident(name), span)) => {
                let func = FUNCTIONS.iter().find(|(n, _)| *n == name).map(|(_, op)| *op);
                if self.peek() == Some(&Tok::LParen) {
                    let Some(op) = func else {
                        return Err(perr(
                            span.start,
                            format!("'{name}' is not a function (expected one of sin, cos, tan, exp, log, sqrt)"),
                        ));
                    };
                    self.bump();
                    let inner = self.expr()?;
                    match self.bump() {
                        Some((Tok::RParen, close)) => {
                            let mut e = ScalarExpr::unary(op, inner);
                            e.span = Span::join(span, close);
                            Ok(e)
                        }
                        _ => Err(perr(self.here().min(self.src_len), "expected ')'")),
                    }
                } else if func.is_some() {
                    Err(perr(span.start, format!("function '{name}' needs an argument list")))
                } else if let Some(idx) = self.coords.iter().position(|c| c == &name) {
                    Ok(ScalarExpr::new(ExprKind::Var(idx), span))
                } else {
                    Err(perr(
                        span.start,
                        format!("unknown identifier '{name}' (coordinates: {})", self.coords.join(", ")),
                    ))
                }
            }
            None => Err(perr(at, "unexpected end of input")),
            Some((_, span)) => Err(perr(span.start, "expected a value")),
        }
    }
}
