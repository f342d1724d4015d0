use thiserror::Error;

use super::{BinOp, Expr, Func, Jet3};
use crate::geom::Point;

/// Integer exponents with larger magnitude go through `exp(b·ln a)`.
const MAX_INT_EXPONENT: f64 = 1024.0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalErrorKind {
    /// `ln`, `sqrt` or a non-integer power of a non-positive argument.
    NonPositiveArgument,
    DivisionByZero,
    /// A value or derivative overflowed to infinity or NaN.
    NonFinite,
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("{} in `{subexpr}` at ({}, {})", describe(.kind), .point.x, .point.y)]
pub struct EvalError {
    pub kind: EvalErrorKind,
    /// The offending subexpression, printed.
    pub subexpr: String,
    pub point: Point,
}

fn describe(kind: &EvalErrorKind) -> &'static str {
    match kind {
        EvalErrorKind::NonPositiveArgument => "non-positive argument",
        EvalErrorKind::DivisionByZero => "division by zero",
        EvalErrorKind::NonFinite => "non-finite result",
    }
}

impl Expr {
    /// Value and all partial derivatives through total order 3 at `p`.
    pub fn eval_jet3(&self, p: Point) -> Result<Jet3, EvalError> {
        let ctx = Ctx { point: p };
        ctx.eval(self)
    }
}

struct Ctx {
    point: Point,
}

impl Ctx {
    fn fail(&self, kind: EvalErrorKind, e: &Expr) -> EvalError {
        EvalError {
            kind,
            subexpr: e.to_string(),
            point: self.point,
        }
    }

    fn eval(&self, e: &Expr) -> Result<Jet3, EvalError> {
        let jet = match e {
            Expr::Const(c) => Jet3::constant(*c),
            Expr::X => Jet3::var_x(self.point.x),
            Expr::Y => Jet3::var_y(self.point.y),
            Expr::Neg(inner) => -self.eval(inner)?,
            Expr::Call(func, arg) => {
                let u = self.eval(arg)?;
                match func {
                    Func::Exp => u.exp(),
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                    Func::Ln | Func::Sqrt => {
                        if !(u.value() > 0.0) {
                            return Err(self.fail(EvalErrorKind::NonPositiveArgument, e));
                        }
                        if *func == Func::Ln {
                            u.ln()
                        } else {
                            u.sqrt()
                        }
                    }
                }
            }
            Expr::Binary(op, lhs, rhs) => {
                let a = self.eval(lhs)?;
                match op {
                    BinOp::Add => a + self.eval(rhs)?,
                    BinOp::Sub => a - self.eval(rhs)?,
                    BinOp::Mul => a * self.eval(rhs)?,
                    BinOp::Div => {
                        let b = self.eval(rhs)?;
                        if b.value() == 0.0 {
                            return Err(self.fail(EvalErrorKind::DivisionByZero, e));
                        }
                        a * b.recip()
                    }
                    BinOp::Pow => self.pow(e, a, rhs)?,
                }
            }
        };
        if !jet.is_finite() {
            return Err(self.fail(EvalErrorKind::NonFinite, e));
        }
        Ok(jet)
    }

    fn pow(&self, e: &Expr, base: Jet3, exponent: &Expr) -> Result<Jet3, EvalError> {
        let b = self.eval(exponent)?;
        let n = b.value();
        if exponent.is_constant() && n.fract() == 0.0 && n.abs() <= MAX_INT_EXPONENT {
            if n < 0.0 && base.value() == 0.0 {
                return Err(self.fail(EvalErrorKind::DivisionByZero, e));
            }
            return Ok(base.powi(n as i64));
        }
        // a^b = exp(b·ln a)
        if !(base.value() > 0.0) {
            return Err(self.fail(EvalErrorKind::NonPositiveArgument, e));
        }
        Ok((b * base.ln()).exp())
    }
}
