//! Closed-form expression trees in one variable.

use std::fmt;

use super::jet::JetScalar;
use crate::error::{Result, SmmsError};

/// Elementary functions available in profile expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" | "ln" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub const ALL: [Func; 7] = [
        Func::Exp,
        Func::Log,
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Sqrt,
    ];
}

/// Expression tree over a single variable.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn c(x: f64) -> Expr {
        Expr::Const(x)
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    pub fn exp(self) -> Expr {
        Expr::call(Func::Exp, self)
    }
    pub fn log(self) -> Expr {
        Expr::call(Func::Log, self)
    }
    pub fn sin(self) -> Expr {
        Expr::call(Func::Sin, self)
    }
    pub fn cos(self) -> Expr {
        Expr::call(Func::Cos, self)
    }
    pub fn sinh(self) -> Expr {
        Expr::call(Func::Sinh, self)
    }
    pub fn cosh(self) -> Expr {
        Expr::call(Func::Cosh, self)
    }
    pub fn sqrt(self) -> Expr {
        Expr::call(Func::Sqrt, self)
    }
    pub fn pow(self, p: Expr) -> Expr {
        Expr::Pow(Box::new(self), Box::new(p))
    }
    pub fn powf(self, p: f64) -> Expr {
        self.pow(Expr::Const(p))
    }

    /// True when the expression does not reference the variable.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.is_constant(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.is_constant() && b.is_constant(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var => 1,
            Expr::Neg(a) | Expr::Call(_, a) => 1 + a.depth(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Replace the variable by another expression.
    pub fn substitute(&self, inner: &Expr) -> Expr {
        let sub = |e: &Expr| Box::new(e.substitute(inner));
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var => inner.clone(),
            Expr::Neg(a) => Expr::Neg(sub(a)),
            Expr::Call(f, a) => Expr::Call(*f, sub(a)),
            Expr::Add(a, b) => Expr::Add(sub(a), sub(b)),
            Expr::Sub(a, b) => Expr::Sub(sub(a), sub(b)),
            Expr::Mul(a, b) => Expr::Mul(sub(a), sub(b)),
            Expr::Div(a, b) => Expr::Div(sub(a), sub(b)),
            Expr::Pow(a, b) => Expr::Pow(sub(a), sub(b)),
        }
    }

    /// Evaluate on any jet scalar. Poles and out-of-domain arguments of the
    /// elementary functions are reported as [`SmmsError::Eval`].
    pub fn eval<T: JetScalar>(&self, x: T) -> Result<T> {
        let out = self.eval_inner(x)?;
        if out.is_finite() {
            Ok(out)
        } else {
            Err(SmmsError::Eval(format!(
                "non-finite result of {self} at {}",
                x.value()
            )))
        }
    }

    fn eval_inner<T: JetScalar>(&self, x: T) -> Result<T> {
        Ok(match self {
            Expr::Const(c) => T::constant(*c),
            Expr::Var => x,
            Expr::Neg(a) => -a.eval_inner(x)?,
            Expr::Add(a, b) => a.eval_inner(x)? + b.eval_inner(x)?,
            Expr::Sub(a, b) => a.eval_inner(x)? - b.eval_inner(x)?,
            Expr::Mul(a, b) => a.eval_inner(x)? * b.eval_inner(x)?,
            Expr::Div(a, b) => {
                let den = b.eval_inner(x)?;
                if den.value() == 0.0 {
                    return Err(SmmsError::Eval(format!(
                        "division by zero in {self} at {}",
                        x.value()
                    )));
                }
                a.eval_inner(x)? / den
            }
            Expr::Pow(a, b) => {
                let base = a.eval_inner(x)?;
                let const_exp = if b.is_constant() {
                    Some(b.eval_inner(0.0f64)?)
                } else {
                    None
                };
                if let Some(p) = const_exp {
                    let bv = base.value();
                    if bv < 0.0 && p.fract() != 0.0 {
                        return Err(SmmsError::Eval(format!(
                            "negative base {bv} with fractional exponent {p}"
                        )));
                    }
                    if bv == 0.0 && p < 0.0 {
                        return Err(SmmsError::Eval("zero to a negative power".into()));
                    }
                    base.powf(p)
                } else {
                    if base.value() <= 0.0 {
                        return Err(SmmsError::Eval(format!(
                            "non-positive base {} with variable exponent",
                            base.value()
                        )));
                    }
                    (b.eval_inner(x)? * base.ln()).exp()
                }
            }
            Expr::Call(f, a) => {
                let arg = a.eval_inner(x)?;
                let v = arg.value();
                match f {
                    Func::Log if v <= 0.0 => {
                        return Err(SmmsError::Eval(format!("log of non-positive value {v}")))
                    }
                    Func::Sqrt if v < 0.0 => {
                        return Err(SmmsError::Eval(format!("sqrt of negative value {v}")))
                    }
                    _ => {}
                }
                match f {
                    Func::Exp => arg.exp(),
                    Func::Log => arg.ln(),
                    Func::Sin => arg.sin(),
                    Func::Cos => arg.cos(),
                    Func::Sinh => arg.sinh(),
                    Func::Cosh => arg.cosh(),
                    Func::Sqrt => arg.sqrt(),
                }
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(c) if *c < 0.0 => 3,
            _ => 5,
        }
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        let child = |f: &mut fmt::Formatter<'_>, e: &Expr, min: u8| -> fmt::Result {
            if e.precedence() < min {
                write!(f, "(")?;
                e.fmt_with(f, var)?;
                write!(f, ")")
            } else {
                e.fmt_with(f, var)
            }
        };
        match self {
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Var => write!(f, "{var}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                child(f, a, 4)
            }
            Expr::Add(a, b) => {
                child(f, a, 1)?;
                write!(f, " + ")?;
                child(f, b, 2)
            }
            Expr::Sub(a, b) => {
                child(f, a, 1)?;
                write!(f, " - ")?;
                child(f, b, 2)
            }
            Expr::Mul(a, b) => {
                child(f, a, 2)?;
                write!(f, "*")?;
                child(f, b, 3)
            }
            Expr::Div(a, b) => {
                child(f, a, 2)?;
                write!(f, "/")?;
                child(f, b, 3)
            }
            Expr::Pow(a, b) => {
                child(f, a, 5)?;
                write!(f, "^")?;
                child(f, b, 4)
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.fmt_with(f, var)?;
                write!(f, ")")
            }
        }
    }

    /// Render with the given variable name.
    pub fn render(&self, var: &str) -> String {
        struct Show<'a>(&'a Expr, &'a str);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with(f, self.1)
            }
        }
        Show(self, var).to_string()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, "t")
    }
}

macro_rules! expr_binop {
    ($tr:ident, $m:ident, $variant:ident) => {
        impl std::ops::$tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
        impl std::ops::$tr<f64> for Expr {
            type Output = Expr;
            fn $m(self, rhs: f64) -> Expr {
                Expr::$variant(Box::new(self), Box::new(Expr::Const(rhs)))
            }
        }
        impl std::ops::$tr<Expr> for f64 {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(Expr::Const(self)), Box::new(rhs))
            }
        }
    };
}

expr_binop!(Add, add, Add);
expr_binop!(Sub, sub, Sub);
expr_binop!(Mul, mul, Mul);
expr_binop!(Div, div, Div);

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}
