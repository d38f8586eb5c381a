//! Second-order forward-mode jets.
//!
//! A jet carries a value together with its first and second derivatives with
//! respect to one ([`Jet2`]) or two ([`Jet2D`]) independent variables.
//! Elementary functions are applied through [`JetScalar::lift`], which takes
//! the scalar function's value and first two derivatives at the jet's value
//! and applies the second-order chain rule.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar types that elementary functions can be evaluated on.
///
/// Implemented for plain `f64` (no derivatives), [`Jet2`] and [`Jet2D`].
pub trait JetScalar:
    Copy
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;
    fn value(&self) -> f64;
    /// Compose with a scalar function `g`, given `g(x)`, `g'(x)`, `g''(x)` at `x = self.value()`.
    fn lift(self, g0: f64, g1: f64, g2: f64) -> Self;
    /// True when every carried component is finite.
    fn is_finite(&self) -> bool;

    fn scale(self, c: f64) -> Self {
        self * Self::constant(c)
    }

    fn exp(self) -> Self {
        let e = self.value().exp();
        self.lift(e, e, e)
    }

    fn ln(self) -> Self {
        let x = self.value();
        self.lift(x.ln(), 1.0 / x, -1.0 / (x * x))
    }

    fn sin(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.lift(s, c, -s)
    }

    fn cos(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.lift(c, -s, -c)
    }

    fn sinh(self) -> Self {
        let x = self.value();
        self.lift(x.sinh(), x.cosh(), x.sinh())
    }

    fn cosh(self) -> Self {
        let x = self.value();
        self.lift(x.cosh(), x.sinh(), x.cosh())
    }

    fn sqrt(self) -> Self {
        let r = self.value().sqrt();
        self.lift(r, 0.5 / r, -0.25 / (r * r * r))
    }

    fn powf(self, p: f64) -> Self {
        let x = self.value();
        if p == 0.0 {
            return Self::constant(1.0);
        }
        let g1 = if p == 1.0 { 1.0 } else { p * x.powf(p - 1.0) };
        let g2 = if p == 1.0 {
            0.0
        } else if p == 2.0 {
            2.0
        } else {
            p * (p - 1.0) * x.powf(p - 2.0)
        };
        self.lift(x.powf(p), g1, g2)
    }

    fn recip(self) -> Self {
        let x = self.value();
        self.lift(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }
}

impl JetScalar for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn value(&self) -> f64 {
        *self
    }
    fn lift(self, g0: f64, _g1: f64, _g2: f64) -> Self {
        g0
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn powf(self, p: f64) -> Self {
        f64::powf(self, p)
    }
    fn recip(self) -> Self {
        1.0 / self
    }
}

/// Value with first and second derivative in one variable.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Jet2 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    pub const fn new(value: f64, d1: f64, d2: f64) -> Self {
        Self { value, d1, d2 }
    }

    /// The independent variable seeded at `t`.
    pub const fn variable(t: f64) -> Self {
        Self::new(t, 1.0, 0.0)
    }

    pub const fn constant(c: f64) -> Self {
        Self::new(c, 0.0, 0.0)
    }

    /// Lift to a bivariate jet along the first (`t`) axis.
    pub fn along_t(self) -> Jet2D {
        Jet2D {
            value: self.value,
            grad: [self.d1, 0.0],
            hess: [self.d2, 0.0, 0.0],
        }
    }

    /// Lift to a bivariate jet along the second (`s`) axis.
    pub fn along_s(self) -> Jet2D {
        Jet2D {
            value: self.value,
            grad: [0.0, self.d1],
            hess: [0.0, 0.0, self.d2],
        }
    }

    /// Jet of `self ∘ inner` given this jet evaluated at `inner.value`.
    pub fn compose(self, inner: Jet2) -> Jet2 {
        inner.lift(self.value, self.d1, self.d2)
    }
}

impl JetScalar for Jet2 {
    fn constant(c: f64) -> Self {
        Jet2::constant(c)
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn lift(self, g0: f64, g1: f64, g2: f64) -> Self {
        Jet2::new(g0, g1 * self.d1, g2 * self.d1 * self.d1 + g1 * self.d2)
    }
    fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2::new(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2::new(self.value - o.value, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2::new(
            self.value * o.value,
            self.d1 * o.value + self.value * o.d1,
            self.d2 * o.value + 2.0 * self.d1 * o.d1 + self.value * o.d2,
        )
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        self * o.recip()
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2::new(-self.value, -self.d1, -self.d2)
    }
}

/// Value, gradient and Hessian of a function of two variables `(t, s)`.
///
/// `hess` stores `[∂tt, ∂ts, ∂ss]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Jet2D {
    pub value: f64,
    pub grad: [f64; 2],
    pub hess: [f64; 3],
}

impl Jet2D {
    pub const fn constant(c: f64) -> Self {
        Self {
            value: c,
            grad: [0.0; 2],
            hess: [0.0; 3],
        }
    }
}

impl JetScalar for Jet2D {
    fn constant(c: f64) -> Self {
        Jet2D::constant(c)
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn lift(self, g0: f64, g1: f64, g2: f64) -> Self {
        let [a, b] = self.grad;
        let [htt, hts, hss] = self.hess;
        Jet2D {
            value: g0,
            grad: [g1 * a, g1 * b],
            hess: [g2 * a * a + g1 * htt, g2 * a * b + g1 * hts, g2 * b * b + g1 * hss],
        }
    }
    fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.grad.iter().all(|x| x.is_finite())
            && self.hess.iter().all(|x| x.is_finite())
    }
}

impl Add for Jet2D {
    type Output = Jet2D;
    fn add(self, o: Jet2D) -> Jet2D {
        Jet2D {
            value: self.value + o.value,
            grad: [self.grad[0] + o.grad[0], self.grad[1] + o.grad[1]],
            hess: [
                self.hess[0] + o.hess[0],
                self.hess[1] + o.hess[1],
                self.hess[2] + o.hess[2],
            ],
        }
    }
}

impl Sub for Jet2D {
    type Output = Jet2D;
    fn sub(self, o: Jet2D) -> Jet2D {
        self + (-o)
    }
}

impl Mul for Jet2D {
    type Output = Jet2D;
    fn mul(self, o: Jet2D) -> Jet2D {
        let (u, v) = (self, o);
        Jet2D {
            value: u.value * v.value,
            grad: [
                u.grad[0] * v.value + u.value * v.grad[0],
                u.grad[1] * v.value + u.value * v.grad[1],
            ],
            hess: [
                u.hess[0] * v.value + 2.0 * u.grad[0] * v.grad[0] + u.value * v.hess[0],
                u.hess[1] * v.value
                    + u.grad[0] * v.grad[1]
                    + u.grad[1] * v.grad[0]
                    + u.value * v.hess[1],
                u.hess[2] * v.value + 2.0 * u.grad[1] * v.grad[1] + u.value * v.hess[2],
            ],
        }
    }
}

impl Div for Jet2D {
    type Output = Jet2D;
    fn div(self, o: Jet2D) -> Jet2D {
        self * o.recip()
    }
}

impl Neg for Jet2D {
    type Output = Jet2D;
    fn neg(self) -> Jet2D {
        Jet2D {
            value: -self.value,
            grad: [-self.grad[0], -self.grad[1]],
            hess: [-self.hess[0], -self.hess[1], -self.hess[2]],
        }
    }
}
