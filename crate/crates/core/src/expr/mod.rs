//! Closed-form bivariate expressions in `x` and `y`.
//!
//! Expressions are parsed from text (see [`parse`]) and evaluated together
//! with every partial derivative through total order 3 ([`Expr::eval_jet3`]).
//!
//! Grammar, whitespace-insensitive:
//!
//! ```text
//! expr    ::= term (("+" | "-") term)*
//! term    ::= unary (("*" | "/") unary)*
//! unary   ::= "-" unary | power
//! power   ::= primary ("^" unary)?
//! primary ::= number | "x" | "y" | func "(" expr ")" | "(" expr ")"
//! func    ::= "exp" | "ln" | "sin" | "cos" | "sqrt"
//! number  ::= digits ("." digits?)? (("e" | "E") ("+" | "-")? digits)?
//!           | "." digits (("e" | "E") ("+" | "-")? digits)?
//! ```

mod eval;
mod jet;
mod parser;

use std::fmt;
use std::str::FromStr;

pub use eval::{EvalError, EvalErrorKind};
pub use jet::Jet3;
pub use parser::{parse, ParseError, ParseErrorKind};

use crate::geom::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Exp, Func::Ln, Func::Sin, Func::Cos, Func::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

/// Abstract syntax tree of a scalar function of `x` and `y`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    X,
    Y,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

const NEG_PRECEDENCE: u8 = 3;
const ATOM_PRECEDENCE: u8 = 5;

impl Expr {
    pub fn constant(value: f64) -> Expr {
        Expr::Const(value)
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        Expr::Call(func, Box::new(arg))
    }

    pub fn mentions_x(&self) -> bool {
        self.any_node(&|e| matches!(e, Expr::X))
    }

    pub fn mentions_y(&self) -> bool {
        self.any_node(&|e| matches!(e, Expr::Y))
    }

    /// True when the tree contains no variable.
    pub fn is_constant(&self) -> bool {
        !self.any_node(&|e| matches!(e, Expr::X | Expr::Y))
    }

    fn any_node(&self, pred: &dyn Fn(&Expr) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Expr::Const(_) | Expr::X | Expr::Y => false,
            Expr::Neg(e) | Expr::Call(_, e) => e.any_node(pred),
            Expr::Binary(_, l, r) => l.any_node(pred) || r.any_node(pred),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::X | Expr::Y => 1,
            Expr::Neg(e) | Expr::Call(_, e) => 1 + e.size(),
            Expr::Binary(_, l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Value at `p`. Same arithmetic path as the jet evaluation.
    pub fn eval(&self, p: Point) -> Result<f64, EvalError> {
        Ok(self.eval_jet3(p)?.value())
    }

    /// `(∂ₓe, ∂ᵧe)` at `p`.
    pub fn gradient(&self, p: Point) -> Result<[f64; 2], EvalError> {
        let jet = self.eval_jet3(p)?;
        Ok([jet.partial(1, 0), jet.partial(0, 1)])
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => NEG_PRECEDENCE,
            Expr::Const(_) | Expr::X | Expr::Y | Expr::Call(..) => ATOM_PRECEDENCE,
            Expr::Neg(_) => NEG_PRECEDENCE,
            Expr::Binary(op, ..) => op.precedence(),
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Prints with the fewest parentheses that re-parse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::X => f.write_str("x"),
            Expr::Y => f.write_str("y"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.fmt_child(f, e.precedence() < NEG_PRECEDENCE)
            }
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
            Expr::Binary(op, lhs, rhs) => {
                let prec = op.precedence();
                let left_parens = match op {
                    BinOp::Pow => lhs.precedence() <= prec,
                    _ => lhs.precedence() < prec,
                };
                let right_parens = match op {
                    BinOp::Pow => rhs.precedence() < prec,
                    _ => rhs.precedence() <= prec,
                };
                lhs.fmt_child(f, left_parens)?;
                write!(f, "{}", op.symbol())?;
                rhs.fmt_child(f, right_parens)
            }
        }
    }
}

impl FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::binary(BinOp::Add, self, rhs)
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::binary(BinOp::Mul, self, rhs)
    }
}
