//! One-variable profile functions with exact second-order jets.

use std::fmt;
use std::sync::Arc;

use super::expr::Expr;
use super::interval::Interval;
use super::jet::{Jet2, JetScalar};
use super::parse::parse_expr;
use crate::error::{Result, SmmsError};

/// A profile that is not a closed-form expression, e.g. an ODE solution or a
/// reparameterized composition. Implementors return exact jets up to their own
/// numerical tolerance.
pub trait JetFn: Send + Sync + fmt::Debug {
    fn jet(&self, t: f64) -> Result<Jet2>;

    fn value(&self, t: f64) -> Result<f64> {
        self.jet(t).map(|j| j.value)
    }

    fn describe(&self) -> String {
        format!("{self:?}")
    }
}

#[derive(Clone)]
enum Body {
    Expr(Expr),
    Custom(Arc<dyn JetFn>),
}

/// A scalar function of one variable on a declared interval.
///
/// Evaluation outside the interval is a [`SmmsError::Domain`] error; poles of
/// the expression are [`SmmsError::Eval`] errors.
#[derive(Clone)]
pub struct Profile1D {
    body: Body,
    domain: Interval,
    var: String,
    /// Caller asserted positivity, validated by [`Profile1D::check_positive`].
    pub positive: bool,
}

impl fmt::Debug for Profile1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile1D({} on {})", self.source(), self.domain.describe())
    }
}

impl Profile1D {
    pub fn from_expr(expr: Expr, domain: Interval) -> Self {
        Self {
            body: Body::Expr(expr),
            domain,
            var: "t".into(),
            positive: false,
        }
    }

    pub fn custom(f: Arc<dyn JetFn>, domain: Interval) -> Self {
        Self {
            body: Body::Custom(f),
            domain,
            var: "t".into(),
            positive: false,
        }
    }

    pub fn constant(c: f64, domain: Interval) -> Self {
        Self::from_expr(Expr::Const(c), domain)
    }

    /// Parse from the infix grammar documented in [`super::parse`].
    pub fn parse(src: &str, domain: Interval) -> Result<Self> {
        let (expr, var) = parse_expr(src)?;
        let mut p = Self::from_expr(expr, domain);
        if let Some(v) = var {
            p.var = v;
        }
        Ok(p)
    }

    pub fn with_var(mut self, var: &str) -> Self {
        self.var = var.to_string();
        self
    }

    pub fn with_positive(mut self) -> Self {
        self.positive = true;
        self
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn with_domain(mut self, domain: Interval) -> Self {
        self.domain = domain;
        self
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn expr(&self) -> Option<&Expr> {
        match &self.body {
            Body::Expr(e) => Some(e),
            Body::Custom(_) => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(&self.body, Body::Expr(e) if e.is_constant())
    }

    /// Value of a constant profile, independent of any domain.
    pub fn constant_value(&self) -> Option<f64> {
        match &self.body {
            Body::Expr(e) if e.is_constant() => e.eval(0.0).ok(),
            _ => None,
        }
    }

    /// Expression text (closed-form profiles) or a description of the custom source.
    pub fn source(&self) -> String {
        match &self.body {
            Body::Expr(e) => e.render(&self.var),
            Body::Custom(c) => c.describe(),
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.domain.check(t, "profile argument")?;
        match &self.body {
            Body::Expr(e) => e.eval(t),
            Body::Custom(c) => c.value(t),
        }
    }

    pub fn eval_jet(&self, t: f64) -> Result<Jet2> {
        self.domain.check(t, "profile argument")?;
        match &self.body {
            Body::Expr(e) => e.eval(Jet2::variable(t)),
            Body::Custom(c) => c.jet(t),
        }
    }

    /// Sampled positivity check at `k` points of the domain.
    pub fn check_positive(&self, k: usize, margin: f64, cap: f64, what: &str) -> Result<()> {
        let grid = super::interval::sample_grid(&self.domain, k, margin, cap)?;
        for t in grid {
            let v = self.eval(t)?;
            if !(v > 0.0) {
                return Err(SmmsError::Positivity(format!(
                    "{what} = {v} at {t} (sampled check)"
                )));
            }
        }
        Ok(())
    }

    fn combine(&self, other: &Profile1D, op: BinOp) -> Profile1D {
        let domain = self.domain.intersect(&other.domain);
        let mut out = match (&self.body, &other.body) {
            (Body::Expr(a), Body::Expr(b)) => {
                let (a, b) = (a.clone(), b.clone());
                Profile1D::from_expr(
                    match op {
                        BinOp::Add => a + b,
                        BinOp::Sub => a - b,
                        BinOp::Mul => a * b,
                        BinOp::Div => a / b,
                    },
                    domain,
                )
            }
            _ => Profile1D::custom(
                Arc::new(Combined {
                    op,
                    a: self.clone(),
                    b: other.clone(),
                }),
                domain,
            ),
        };
        out.var = self.var.clone();
        out
    }

    pub fn add(&self, other: &Profile1D) -> Profile1D {
        self.combine(other, BinOp::Add)
    }
    pub fn sub(&self, other: &Profile1D) -> Profile1D {
        self.combine(other, BinOp::Sub)
    }
    pub fn mul(&self, other: &Profile1D) -> Profile1D {
        self.combine(other, BinOp::Mul)
    }
    pub fn div(&self, other: &Profile1D) -> Profile1D {
        self.combine(other, BinOp::Div)
    }

    pub fn scale(&self, c: f64) -> Profile1D {
        self.mul(&Profile1D::constant(c, self.domain))
    }

    pub fn recip(&self) -> Profile1D {
        Profile1D::constant(1.0, self.domain).div(self)
    }

    /// First derivative as a new profile. Closed-form only.
    pub fn derivative(&self) -> Result<Profile1D> {
        match &self.body {
            Body::Expr(_) => Ok(Profile1D::custom(
                Arc::new(Derivative(self.clone())),
                self.domain,
            )
            .with_var(&self.var)),
            Body::Custom(_) => Err(SmmsError::Unsupported(
                "derivative of a non closed-form profile".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug)]
struct Combined {
    op: BinOp,
    a: Profile1D,
    b: Profile1D,
}

impl JetFn for Combined {
    fn jet(&self, t: f64) -> Result<Jet2> {
        let a = self.a.eval_jet(t)?;
        let b = self.b.eval_jet(t)?;
        if matches!(self.op, BinOp::Div) && b.value == 0.0 {
            return Err(SmmsError::Eval(format!("division by zero at {t}")));
        }
        Ok(match self.op {
            BinOp::Add => a + b,
            BinOp::Sub => a - b,
            BinOp::Mul => a * b,
            BinOp::Div => a / b,
        })
    }

    fn value(&self, t: f64) -> Result<f64> {
        let a = self.a.eval(t)?;
        let b = self.b.eval(t)?;
        Ok(match self.op {
            BinOp::Add => a + b,
            BinOp::Sub => a - b,
            BinOp::Mul => a * b,
            BinOp::Div => a / b,
        })
    }

    fn describe(&self) -> String {
        let sym = match self.op {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        };
        format!("({}) {sym} ({})", self.a.source(), self.b.source())
    }
}

/// Derivative of a closed-form profile, carried by a third-order evaluation
/// (jet of the jet's first component).
#[derive(Debug)]
struct Derivative(Profile1D);

impl JetFn for Derivative {
    fn jet(&self, t: f64) -> Result<Jet2> {
        // d/dt of (p, p', p'') needs p'''; obtain it from a jet over jets.
        let e = self.0.expr().expect("closed form");
        let j = e.eval(Jet3::variable(t))?;
        Ok(Jet2::new(j.0[1], j.0[2], j.0[3]))
    }

    fn describe(&self) -> String {
        format!("d/dt[{}]", self.0.source())
    }
}

/// Minimal third-order univariate jet, used only to differentiate profiles.
#[derive(Debug, Clone, Copy)]
struct Jet3([f64; 4]);

impl Jet3 {
    fn variable(t: f64) -> Self {
        Jet3([t, 1.0, 0.0, 0.0])
    }
}

impl JetScalar for Jet3 {
    fn constant(c: f64) -> Self {
        Jet3([c, 0.0, 0.0, 0.0])
    }
    fn value(&self) -> f64 {
        self.0[0]
    }
    fn lift(self, _g0: f64, _g1: f64, _g2: f64) -> Self {
        unreachable!("Jet3 overrides every elementary function")
    }
    fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
    fn exp(self) -> Self {
        let e = self.0[0].exp();
        self.lift3(e, e, e, e)
    }
    fn ln(self) -> Self {
        let x = self.0[0];
        self.lift3(x.ln(), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }
    fn sin(self) -> Self {
        let (s, c) = self.0[0].sin_cos();
        self.lift3(s, c, -s, -c)
    }
    fn cos(self) -> Self {
        let (s, c) = self.0[0].sin_cos();
        self.lift3(c, -s, -c, s)
    }
    fn sinh(self) -> Self {
        let x = self.0[0];
        self.lift3(x.sinh(), x.cosh(), x.sinh(), x.cosh())
    }
    fn cosh(self) -> Self {
        let x = self.0[0];
        self.lift3(x.cosh(), x.sinh(), x.cosh(), x.sinh())
    }
    fn sqrt(self) -> Self {
        self.powf(0.5)
    }
    fn powf(self, p: f64) -> Self {
        let x = self.0[0];
        if p == 0.0 {
            return Self::constant(1.0);
        }
        let c = |k: i32| -> f64 {
            let mut coef = 1.0;
            for i in 0..k {
                coef *= p - i as f64;
            }
            if coef == 0.0 {
                0.0
            } else {
                coef * x.powf(p - k as f64)
            }
        };
        self.lift3(x.powf(p), c(1), c(2), c(3))
    }
    fn recip(self) -> Self {
        let x = self.0[0];
        self.lift3(
            1.0 / x,
            -1.0 / (x * x),
            2.0 / (x * x * x),
            -6.0 / (x * x * x * x),
        )
    }
}

impl Jet3 {
    fn lift3(self, g0: f64, g1: f64, g2: f64, g3: f64) -> Self {
        let [_, a1, a2, a3] = self.0;
        Jet3([
            g0,
            g1 * a1,
            g2 * a1 * a1 + g1 * a2,
            g3 * a1 * a1 * a1 + 3.0 * g2 * a1 * a2 + g1 * a3,
        ])
    }
}

impl std::ops::Add for Jet3 {
    type Output = Jet3;
    fn add(self, o: Jet3) -> Jet3 {
        Jet3(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}
impl std::ops::Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, o: Jet3) -> Jet3 {
        Jet3(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}
impl std::ops::Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        Jet3(self.0.map(|x| -x))
    }
}
impl std::ops::Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, o: Jet3) -> Jet3 {
        let (a, b) = (self.0, o.0);
        Jet3([
            a[0] * b[0],
            a[1] * b[0] + a[0] * b[1],
            a[2] * b[0] + 2.0 * a[1] * b[1] + a[0] * b[2],
            a[3] * b[0] + 3.0 * a[2] * b[1] + 3.0 * a[1] * b[2] + a[0] * b[3],
        ])
    }
}
impl std::ops::Div for Jet3 {
    type Output = Jet3;
    fn div(self, o: Jet3) -> Jet3 {
        self * o.recip()
    }
}

/// Exact jet of `p` at `t`. Thin wrapper over [`Profile1D::eval_jet`].
pub fn eval_jet(p: &Profile1D, t: f64) -> Result<Jet2> {
    p.eval_jet(t)
}

/// Central-difference estimate of `(p, p', p'')` at `t` with step `h`.
///
/// Uses only plain value evaluations of the profile, so it is independent of
/// the jet arithmetic. Requires `[t - 2h, t + 2h]` inside the domain.
pub fn finite_diff_jet(p: &Profile1D, t: f64, h: f64) -> Result<Jet2> {
    if !(h > 0.0) {
        return Err(SmmsError::Domain(format!("step must be positive, got {h}")));
    }
    let d = p.domain();
    d.check(t - 2.0 * h, "finite-difference stencil")?;
    d.check(t + 2.0 * h, "finite-difference stencil")?;
    let f0 = p.eval(t)?;
    let fp = p.eval(t + h)?;
    let fm = p.eval(t - h)?;
    Ok(Jet2::new(
        f0,
        (fp - fm) / (2.0 * h),
        (fp - 2.0 * f0 + fm) / (h * h),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, FRAC_PI_2};

    fn line() -> Interval {
        Interval::real_line()
    }

    #[test]
    fn sine_jet_at_zero() {
        let p = Profile1D::parse("sin(t)", line()).unwrap();
        let j = eval_jet(&p, 0.0).unwrap();
        assert_eq!((j.value, j.d1, j.d2), (0.0, 1.0, 0.0));
    }

    #[test]
    fn sphere_density_jet() {
        // A + B cos(sqrt(2 lambda) t), lambda = 1/2, A = 2, B = 1 at pi/2 -> (2, -1, 0)
        let p = Profile1D::parse("2 + 1*cos(sqrt(2*0.5)*t)", line()).unwrap();
        let j = eval_jet(&p, FRAC_PI_2).unwrap();
        assert!((j.value - 2.0).abs() < 1e-15);
        assert!((j.d1 + 1.0).abs() < 1e-15);
        assert!(j.d2.abs() < 1e-15);
    }

    #[test]
    fn exponential_is_its_own_derivative() {
        let p = Profile1D::parse("exp(t)", line()).unwrap();
        let j = eval_jet(&p, 1.0).unwrap();
        assert_eq!((j.value, j.d1, j.d2), (E, E, E));
    }

    #[test]
    fn evaluation_outside_domain_fails() {
        let p = Profile1D::parse("t", Interval::open(0.0, 1.0)).unwrap();
        assert!(matches!(p.eval_jet(1.0), Err(SmmsError::Domain(_))));
        assert!(matches!(p.eval(-0.5), Err(SmmsError::Domain(_))));
    }

    #[test]
    fn pole_is_eval_error() {
        let p = Profile1D::parse("log(t)", line()).unwrap();
        assert!(matches!(p.eval_jet(-1.0), Err(SmmsError::Eval(_))));
    }

    #[test]
    fn finite_difference_examples() {
        let cos = Profile1D::parse("cos(t)", line()).unwrap();
        let j = finite_diff_jet(&cos, 0.0, 1e-4).unwrap();
        assert!((j.d2 + 1.0).abs() < 1e-6);

        let five = Profile1D::constant(5.0, line());
        let j = finite_diff_jet(&five, 0.7, 1e-3).unwrap();
        assert!((j.value - 5.0).abs() < 1e-10 && j.d1.abs() < 1e-10 && j.d2.abs() < 1e-10);

        let cube = Profile1D::parse("t^3", line()).unwrap();
        let j = finite_diff_jet(&cube, 2.0, 1e-4).unwrap();
        assert!((j.value - 8.0).abs() < 1e-5);
        assert!((j.d1 - 12.0).abs() < 1e-5);
        assert!((j.d2 - 12.0).abs() < 1e-5);
    }

    #[test]
    fn stencil_must_fit_in_domain() {
        let p = Profile1D::parse("t", Interval::open(0.0, 1.0)).unwrap();
        assert!(finite_diff_jet(&p, 0.001, 1e-3).is_err());
        assert!(finite_diff_jet(&p, 0.5, 0.0).is_err());
    }

    #[test]
    fn derivative_profile_shifts_the_jet() {
        let p = Profile1D::parse("sin(2*t)", line()).unwrap();
        let d = p.derivative().unwrap();
        let j = d.eval_jet(0.3).unwrap();
        assert!((j.value - 2.0 * (0.6f64).cos()).abs() < 1e-14);
        assert!((j.d1 + 4.0 * (0.6f64).sin()).abs() < 1e-14);
        assert!((j.d2 + 8.0 * (0.6f64).cos()).abs() < 1e-13);
    }

    #[test]
    fn mixed_profiles_combine_through_custom_bodies() {
        let a = Profile1D::parse("t^2", line()).unwrap();
        let b = a.derivative().unwrap();
        let prod = a.mul(&b); // 2 t^3
        let j = prod.eval_jet(1.5).unwrap();
        assert!((j.value - 2.0 * 1.5f64.powi(3)).abs() < 1e-13);
        assert!((j.d2 - 12.0 * 1.5).abs() < 1e-12);
    }
}
