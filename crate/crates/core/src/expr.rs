//! Analytic coefficient expressions in the coordinates x1..x7.
//!
//! The grammar (used verbatim in case config files):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' exponent)?          exponent := '-'? integer | '(' '-'? integer ')'
//! atom     := number | 'exp' '(' expr ')' | 'sqrt' '(' expr ')' | variable | '(' expr ')'
//! variable := 'x1' .. 'x7'
//! number   := digits ('.' digits)?        (decimals are exact rationals)
//! ```
//!
//! Constants are exact elements a + b·√2 of Q(√2); evaluation happens on
//! truncated Taylor jets, so symbolic differentiation and jet extraction can
//! be cross-checked against each other.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::Scalar;
use crate::jet::{Jet, JetError, NVARS};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Scalar),
    Var(u8),
    Neg(Arc<Expr>),
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    PowInt(Arc<Expr>, i32),
    Exp(Arc<Expr>),
    Sqrt(Arc<Expr>),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdent { offset: usize, name: String },
    #[error("exponent at byte {offset} must be an integer")]
    NonIntegerExponent { offset: usize },
    #[error("literal zero denominator at byte {offset}")]
    ZeroDenominator { offset: usize },
    #[error("literal zero sqrt argument at byte {offset}")]
    ZeroSqrt { offset: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("domain error: {0}")]
    Domain(#[from] JetError),
}

impl Expr {
    pub fn constant(s: Scalar) -> Expr {
        Expr::Const(s)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(Scalar::from_int(n))
    }

    pub fn var(i: u8) -> Expr {
        assert!((1..=NVARS as u8).contains(&i));
        Expr::Var(i)
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn is_zero_const(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    fn as_const(&self) -> Option<&Scalar> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    /// True if the variable occurs syntactically.
    pub fn mentions(&self, var: u8) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(i) => *i == var,
            Expr::Neg(e) | Expr::Exp(e) | Expr::Sqrt(e) | Expr::PowInt(e, _) => e.mentions(var),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.mentions(var) || b.mentions(var)
            }
        }
    }
}

// Smart constructors with constant folding and 0/1 identities; used by the
// differentiator and the coframe formula builders.

pub fn add(a: Expr, b: Expr) -> Expr {
    if a.is_zero_const() {
        return b;
    }
    if b.is_zero_const() {
        return a;
    }
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        return Expr::Const(x + y);
    }
    Expr::Add(Arc::new(a), Arc::new(b))
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    if b.is_zero_const() {
        return a;
    }
    if a.is_zero_const() {
        return neg(b);
    }
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        return Expr::Const(x - y);
    }
    Expr::Sub(Arc::new(a), Arc::new(b))
}

pub fn neg(a: Expr) -> Expr {
    if let Some(x) = a.as_const() {
        return Expr::Const(-x);
    }
    if let Expr::Neg(inner) = &a {
        return inner.as_ref().clone();
    }
    Expr::Neg(Arc::new(a))
}

pub fn mul(a: Expr, b: Expr) -> Expr {
    if a.is_zero_const() || b.is_zero_const() {
        return Expr::zero();
    }
    if let Some(x) = a.as_const() {
        if x == &Scalar::one() {
            return b;
        }
    }
    if let Some(y) = b.as_const() {
        if y == &Scalar::one() {
            return a;
        }
    }
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        return Expr::Const(x * y);
    }
    Expr::Mul(Arc::new(a), Arc::new(b))
}

pub fn div(a: Expr, b: Expr) -> Expr {
    assert!(!b.is_zero_const(), "division by literal zero");
    if a.is_zero_const() {
        return Expr::zero();
    }
    if let Some(y) = b.as_const() {
        if y == &Scalar::one() {
            return a;
        }
    }
    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        return Expr::Const(x / y);
    }
    Expr::Div(Arc::new(a), Arc::new(b))
}

pub fn powi(a: Expr, n: i32) -> Expr {
    match n {
        0 => Expr::one(),
        1 => a,
        _ => Expr::PowInt(Arc::new(a), n),
    }
}

pub fn exp(a: Expr) -> Expr {
    Expr::Exp(Arc::new(a))
}

pub fn sqrt(a: Expr) -> Expr {
    Expr::Sqrt(Arc::new(a))
}

/// Partial derivative ∂e/∂x_var as an expression, with light simplification.
pub fn diff(e: &Expr, var: u8) -> Expr {
    assert!((1..=NVARS as u8).contains(&var));
    match e {
        Expr::Const(_) => Expr::zero(),
        Expr::Var(i) => {
            if *i == var {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Expr::Neg(a) => neg(diff(a, var)),
        Expr::Add(a, b) => add(diff(a, var), diff(b, var)),
        Expr::Sub(a, b) => sub(diff(a, var), diff(b, var)),
        Expr::Mul(a, b) => add(
            mul(diff(a, var), b.as_ref().clone()),
            mul(a.as_ref().clone(), diff(b, var)),
        ),
        Expr::Div(a, b) => {
            // (a/b)' = (a'b − ab')/b²
            let da = diff(a, var);
            let db = diff(b, var);
            if db.is_zero_const() {
                div(da, b.as_ref().clone())
            } else {
                div(
                    sub(
                        mul(da, b.as_ref().clone()),
                        mul(a.as_ref().clone(), db),
                    ),
                    powi(b.as_ref().clone(), 2),
                )
            }
        }
        Expr::PowInt(a, n) => {
            let da = diff(a, var);
            if da.is_zero_const() {
                return Expr::zero();
            }
            mul(
                mul(Expr::int(*n as i64), powi(a.as_ref().clone(), n - 1)),
                da,
            )
        }
        Expr::Exp(a) => mul(e.clone(), diff(a, var)),
        Expr::Sqrt(a) => {
            let da = diff(a, var);
            if da.is_zero_const() {
                return Expr::zero();
            }
            div(da, mul(Expr::int(2), e.clone()))
        }
    }
}

/// Taylor expansion of the expression at `p` through order `order`.
pub fn eval_jet(e: &Expr, p: &[f64; NVARS], order: usize) -> Result<Jet, EvalError> {
    let j = match e {
        Expr::Const(c) => Jet::constant(c.to_f64(), order),
        Expr::Var(i) => Jet::variable(p[*i as usize - 1], *i as usize, order),
        Expr::Neg(a) => eval_jet(a, p, order)?.neg(),
        Expr::Add(a, b) => eval_jet(a, p, order)?.add(&eval_jet(b, p, order)?),
        Expr::Sub(a, b) => eval_jet(a, p, order)?.sub(&eval_jet(b, p, order)?),
        Expr::Mul(a, b) => eval_jet(a, p, order)?.mul(&eval_jet(b, p, order)?),
        Expr::Div(a, b) => eval_jet(a, p, order)?.div(&eval_jet(b, p, order)?)?,
        Expr::PowInt(a, n) => eval_jet(a, p, order)?.powi(*n)?,
        Expr::Exp(a) => eval_jet(a, p, order)?.exp(),
        Expr::Sqrt(a) => eval_jet(a, p, order)?.sqrt()?,
    };
    Ok(j)
}

/// Plain value at a point.
pub fn eval(e: &Expr, p: &[f64; NVARS]) -> Result<f64, EvalError> {
    Ok(eval_jet(e, p, 0)?.value())
}

// ---------------------------------------------------------------------------
// Display (canonical printing; parse(print(e)) evaluates identically and
// printing is a fixpoint of parse∘print).

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Neg(..) => 2,
            Expr::Mul(..) | Expr::Div(..) => 3,
            Expr::PowInt(..) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, parent: u8) -> fmt::Result {
        let prec = self.precedence();
        let need = prec < parent;
        if need {
            write!(f, "(")?;
        }
        match self {
            Expr::Const(c) => {
                if c.is_rational() {
                    // negative constants print exactly like Neg(|c|) so that
                    // reparsing and reprinting is a fixpoint
                    let r = c.rational_part();
                    let negative = r.numer() < &BigInt::zero();
                    if negative {
                        let need_p = parent >= 3;
                        if need_p {
                            write!(f, "(")?;
                        }
                        write!(f, "-")?;
                        let abs = Expr::Const(Scalar::new(-r.clone(), BigRational::zero()));
                        abs.fmt_prec(f, 4)?;
                        if need_p {
                            write!(f, ")")?;
                        }
                    } else if r.denom().is_one() {
                        write!(f, "{}", r)?;
                    } else if parent >= 4 {
                        write!(f, "({}/{})", r.numer(), r.denom())?;
                    } else {
                        write!(f, "{}/{}", r.numer(), r.denom())?;
                    }
                } else {
                    // a + b√2 printed through the grammar
                    let a = c.rational_part();
                    let b = c.sqrt2_part();
                    let core = if b.is_one() {
                        "sqrt(2)".to_string()
                    } else if b.denom().is_one() {
                        format!("{}*sqrt(2)", b.numer())
                    } else {
                        format!("{}/{}*sqrt(2)", b.numer(), b.denom())
                    };
                    if a.is_zero() {
                        write!(f, "({})", core)?;
                    } else {
                        write!(f, "({} + {})", a, core)?;
                    }
                }
            }
            Expr::Var(i) => write!(f, "x{}", i)?,
            Expr::Neg(a) => {
                // parenthesize products so the reparse keeps the Neg on top
                write!(f, "-")?;
                a.fmt_prec(f, 4)?;
            }
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 3)?;
                write!(f, "*")?;
                b.fmt_prec(f, 4)?;
            }
            Expr::Div(a, b) => {
                a.fmt_prec(f, 3)?;
                write!(f, "/")?;
                b.fmt_prec(f, 4)?;
            }
            Expr::PowInt(a, n) => {
                a.fmt_prec(f, 5)?;
                if *n < 0 {
                    write!(f, "^({})", n)?;
                } else {
                    write!(f, "^{}", n)?;
                }
            }
            Expr::Exp(a) => write!(f, "exp({})", a)?,
            Expr::Sqrt(a) => write!(f, "sqrt({})", a)?,
        }
        if need {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

// ---------------------------------------------------------------------------
// Parser

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(ParseError::Syntax {
            offset: p.pos,
            msg: "trailing input".into(),
        });
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ParseError::Syntax {
                offset: self.pos,
                msg: format!("expected `{}`", c as char),
            })
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                lhs = Expr::Add(Arc::new(lhs), Arc::new(rhs));
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                lhs = Expr::Sub(Arc::new(lhs), Arc::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.unary()?;
                lhs = Expr::Mul(Arc::new(lhs), Arc::new(rhs));
            } else if self.eat(b'/') {
                let off = self.pos;
                let rhs = self.unary()?;
                if rhs.is_zero_const() {
                    return Err(ParseError::ZeroDenominator { offset: off });
                }
                lhs = Expr::Div(Arc::new(lhs), Arc::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            let inner = self.unary()?;
            return Ok(Expr::Neg(Arc::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let n = self.exponent()?;
            return Ok(Expr::PowInt(Arc::new(base), n));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        let off = self.pos;
        let paren = self.eat(b'(');
        let negative = self.eat(b'-');
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseError::NonIntegerExponent { offset: off });
        }
        // a decimal point or slash here would make the exponent non-integer
        if matches!(self.peek(), Some(b'.')) {
            return Err(ParseError::NonIntegerExponent { offset: off });
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let mut n: i32 = digits
            .parse()
            .map_err(|_| ParseError::NonIntegerExponent { offset: off })?;
        if negative {
            n = -n;
        }
        self.skip_ws();
        if paren {
            self.expect(b')')?;
        }
        Ok(n)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        let off = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                self.skip_ws();
                match name {
                    "exp" => {
                        self.expect(b'(')?;
                        let e = self.expr()?;
                        self.expect(b')')?;
                        Ok(Expr::Exp(Arc::new(e)))
                    }
                    "sqrt" => {
                        self.expect(b'(')?;
                        let inner_off = self.pos;
                        let e = self.expr()?;
                        self.expect(b')')?;
                        if e.is_zero_const() {
                            return Err(ParseError::ZeroSqrt { offset: inner_off });
                        }
                        Ok(Expr::Sqrt(Arc::new(e)))
                    }
                    _ => {
                        if let Some(rest) = name.strip_prefix('x') {
                            if let Ok(i) = rest.parse::<u8>() {
                                if (1..=NVARS as u8).contains(&i) {
                                    return Ok(Expr::Var(i));
                                }
                            }
                        }
                        Err(ParseError::UnknownIdent {
                            offset: off,
                            name: name.to_string(),
                        })
                    }
                }
            }
            _ => Err(ParseError::Syntax {
                offset: off,
                msg: "expected expression".into(),
            }),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let int_part = &self.src[start..self.pos];
        let mut numer = if int_part.is_empty() {
            BigInt::zero()
        } else {
            std::str::from_utf8(int_part).unwrap().parse().unwrap()
        };
        let mut denom = BigInt::one();
        if self.peek() == Some(b'.') {
            self.pos += 1;
            let fstart = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            if fstart == self.pos && int_part.is_empty() {
                return Err(ParseError::Syntax {
                    offset: start,
                    msg: "malformed number".into(),
                });
            }
            for &d in &self.src[fstart..self.pos] {
                numer = numer * 10 + BigInt::from(d - b'0');
                denom *= 10;
            }
        } else if int_part.is_empty() {
            return Err(ParseError::Syntax {
                offset: start,
                msg: "malformed number".into(),
            });
        }
        self.skip_ws();
        Ok(Expr::Const(Scalar::new(
            BigRational::new(numer, denom),
            BigRational::zero(),
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jets_equal(a: &Expr, b: &Expr, p: &[f64; 7], order: usize) -> bool {
        let ja = eval_jet(a, p, order).unwrap();
        let jb = eval_jet(b, p, order).unwrap();
        ja.coeffs()
            .iter()
            .zip(jb.coeffs())
            .all(|(x, y)| (x - y).abs() <= 1e-12 * (1.0 + x.abs().max(y.abs())))
    }

    #[test]
    fn parse_logistic() {
        let e = parse("1/(1+exp(x5))").unwrap();
        match &e {
            Expr::Div(n, d) => {
                assert!(matches!(n.as_ref(), Expr::Const(c) if c == &Scalar::one()));
                match d.as_ref() {
                    Expr::Add(l, r) => {
                        assert!(matches!(l.as_ref(), Expr::Const(_)));
                        assert!(matches!(r.as_ref(), Expr::Exp(_)));
                    }
                    _ => panic!("expected Add"),
                }
            }
            _ => panic!("expected Div"),
        }
    }

    #[test]
    fn parse_pow_div() {
        let e = parse("x6^2/2").unwrap();
        match &e {
            Expr::Div(n, d) => {
                assert!(matches!(n.as_ref(), Expr::PowInt(b, 2) if matches!(b.as_ref(), Expr::Var(6))));
                assert!(matches!(d.as_ref(), Expr::Const(c) if c == &Scalar::from_int(2)));
            }
            _ => panic!("expected Div"),
        }
    }

    #[test]
    fn parse_sqrt_product() {
        let e = parse("sqrt(2)*x4*x6").unwrap();
        match &e {
            Expr::Mul(l, r) => {
                assert!(matches!(r.as_ref(), Expr::Var(6)));
                match l.as_ref() {
                    Expr::Mul(a, b) => {
                        assert!(matches!(a.as_ref(), Expr::Sqrt(_)));
                        assert!(matches!(b.as_ref(), Expr::Var(4)));
                    }
                    _ => panic!("expected inner Mul"),
                }
            }
            _ => panic!("expected Mul"),
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse("x8 + 1"),
            Err(ParseError::UnknownIdent { .. })
        ));
        assert!(matches!(
            parse("foo(x1)"),
            Err(ParseError::UnknownIdent { .. })
        ));
        assert!(matches!(
            parse("x1^1.5"),
            Err(ParseError::NonIntegerExponent { .. })
        ));
        assert!(matches!(parse("x1/0"), Err(ParseError::ZeroDenominator { .. })));
        assert!(matches!(parse("1 +"), Err(ParseError::Syntax { .. })));
        let err = parse("x1 + $").unwrap_err();
        match err {
            ParseError::Syntax { offset, .. } => assert_eq!(offset, 5),
            _ => panic!(),
        }
    }

    #[test]
    fn diff_square() {
        let e = parse("x6^2/2").unwrap();
        let d = diff(&e, 6);
        let x6 = parse("x6").unwrap();
        let p = [0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
        assert!(jets_equal(&d, &x6, &p, 3));
    }

    #[test]
    fn diff_exp_product() {
        let e = parse("exp(x5*x6)").unwrap();
        let d = diff(&e, 5);
        let expect = parse("x6*exp(x5*x6)").unwrap();
        let p = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7];
        assert!(jets_equal(&d, &expect, &p, 3));
    }

    #[test]
    fn diff_no_dependence() {
        let e = parse("1/(1+exp(x5))").unwrap();
        let d = diff(&e, 7);
        assert!(d.is_zero_const());
    }

    #[test]
    fn jet_vs_symbolic_derivative() {
        // eval_jet(diff(e,i), p, K−1) agrees with derivative extraction from
        // eval_jet(e, p, K) for e = x5*x6^2.
        let e = parse("x5*x6^2").unwrap();
        let p = [1.1, -0.3, 0.0, 2.0, 0.5, -1.2, 0.25];
        for i in 1..=7u8 {
            let sym = eval_jet(&diff(&e, i), &p, 3).unwrap();
            let ext = eval_jet(&e, &p, 4).unwrap().derivative(i as usize);
            for (a, b) in sym.coeffs().iter().zip(ext.coeffs()) {
                assert!((a - b).abs() < 1e-12, "mismatch for var {}", i);
            }
        }
    }

    #[test]
    fn print_parse_fixpoint() {
        for src in [
            "1/(1+exp(x5))",
            "x6^2/2",
            "sqrt(2)*x4*x6",
            "-(x2 + x3*(1+exp(x5)))",
            "3*(x2 + x3*(1+exp(x5)))/(1+exp(x5))^2",
            "x1^(-3) + 0.25*x2",
        ] {
            let e = parse(src).unwrap();
            let printed = e.to_string();
            let reparsed = parse(&printed).unwrap_or_else(|err| {
                panic!("reprint of `{src}` -> `{printed}` failed: {err}")
            });
            assert_eq!(
                printed,
                reparsed.to_string(),
                "print not a fixpoint for `{src}`"
            );
            let p = [0.3, 0.45, 0.2, 0.8, 0.15, 0.6, 0.75];
            assert!(jets_equal(&e, &reparsed, &p, 2));
        }
    }

    #[test]
    fn decimal_literals_exact() {
        let e = parse("0.125").unwrap();
        match e {
            Expr::Const(c) => assert_eq!(c, Scalar::ratio(1, 8)),
            _ => panic!(),
        }
    }
}
