use std::collections::BTreeMap;
use std::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }

    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }

    fn eval(self, l: f64, r: f64) -> f64 {
        match self {
            BinOp::Add => l + r,
            BinOp::Sub => l - r,
            BinOp::Mul => l * r,
            BinOp::Div => l / r,
        }
    }
}

/// Angle expression. Literal sub-trees are folded to [`Expr::Num`] on construction.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Param(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn num(v: f64) -> Self {
        Expr::Num(v)
    }

    pub fn param(name: impl Into<String>) -> Self {
        Expr::Param(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(inner: Expr) -> Self {
        match inner {
            Expr::Num(v) => Expr::Num(-v),
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn binary(op: BinOp, l: Expr, r: Expr) -> Self {
        if let (Expr::Num(a), Expr::Num(b)) = (&l, &r) {
            let v = op.eval(*a, *b);
            if v.is_finite() {
                return Expr::Num(v);
            }
        }
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn eval(&self, params: &BTreeMap<String, f64>) -> Result<f64> {
        let v = match self {
            Expr::Num(v) => *v,
            Expr::Param(name) => *params
                .get(name)
                .ok_or_else(|| Error::UnboundParameter(name.clone()))?,
            Expr::Neg(e) => -e.eval(params)?,
            Expr::Binary(op, l, r) => op.eval(l.eval(params)?, r.eval(params)?),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteAngle)
        }
    }

    /// Parameter names referenced by the expression, in first-seen order.
    pub fn params(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Num(_) => {}
            Expr::Param(name) => {
                if !out.contains(&name.as_str()) {
                    out.push(name);
                }
            }
            Expr::Neg(e) => e.collect_params(out),
            Expr::Binary(_, l, r) => {
                l.collect_params(out);
                r.collect_params(out);
            }
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, parent: u8, right: bool) -> fmt::Result {
        let needs_parens = match self {
            Expr::Binary(op, ..) => {
                op.precedence() < parent || (right && op.precedence() == parent)
            }
            _ => false,
        };
        if needs_parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // `{:?}` gives the shortest representation that reparses to the same f64.
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Param(name) => f.write_str(name),
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.fmt_child(f, u8::MAX, false)
            }
            Expr::Binary(op, l, r) => {
                l.fmt_child(f, op.precedence(), false)?;
                write!(f, " {} ", op.symbol())?;
                r.fmt_child(f, op.precedence(), true)
            }
        }
    }
}
