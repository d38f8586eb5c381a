use serde::{Deserialize, Serialize};

use crate::adcore::{Expr, Interval, Jet2, Profile1D};
use crate::error::Result;

/// Sign class of `λ`, chosen by exact comparison with zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Oscillatory,
    Polynomial,
    Hyperbolic,
}

impl Branch {
    pub fn of(lambda: f64) -> Self {
        if lambda > 0.0 {
            Branch::Oscillatory
        } else if lambda == 0.0 {
            Branch::Polynomial
        } else {
            Branch::Hyperbolic
        }
    }
}

/// Closed-form solution of `y'' + 2λ y - c = 0` with `y(0) = y0`, `y'(0) = y0p`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSolution {
    pub lambda: f64,
    pub c: f64,
    pub y0: f64,
    pub y0p: f64,
    pub branch: Branch,
    expr: Expr,
}

impl AffineSolution {
    pub fn solve(lambda: f64, c: f64, y0: f64, y0p: f64) -> Self {
        let branch = Branch::of(lambda);
        let t = Expr::var;
        let expr = match branch {
            Branch::Polynomial => y0 + y0p * t() + (c / 2.0) * t().powf(2.0),
            Branch::Oscillatory | Branch::Hyperbolic => {
                let k = (2.0 * lambda.abs()).sqrt();
                let p = c / (2.0 * lambda);
                let arg = k * t();
                let (even, odd) = if branch == Branch::Oscillatory {
                    (arg.clone().cos(), arg.sin())
                } else {
                    (arg.clone().cosh(), arg.sinh())
                };
                p + (y0 - p) * even + (y0p / k) * odd
            }
        };
        Self {
            lambda,
            c,
            y0,
            y0p,
            branch,
            expr,
        }
    }

    /// `λ < 0` solution written as `c/(2λ) + B e^{kt} + C e^{-kt}`, `k = sqrt(-2λ)`.
    pub fn exponential(lambda: f64, c: f64, b: f64, cc: f64) -> Self {
        assert!(lambda < 0.0, "exponential form needs λ < 0");
        let k = (-2.0 * lambda).sqrt();
        let p = c / (2.0 * lambda);
        let t = Expr::var;
        let mut s = Self::solve(lambda, c, p + b + cc, k * (b - cc));
        s.expr = p + b * (k * t()).exp() + cc * (-k * t()).exp();
        s
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn profile(&self, domain: Interval) -> Profile1D {
        Profile1D::from_expr(self.expr.clone(), domain)
    }

    pub fn eval_jet(&self, t: f64) -> Result<Jet2> {
        self.expr.eval(Jet2::variable(t))
    }

    /// `|y'' + 2λy - c|` at `t`.
    pub fn ode_residual(&self, t: f64) -> Result<f64> {
        let j = self.eval_jet(t)?;
        Ok((j.d2 + 2.0 * self.lambda * j.value - self.c).abs())
    }

    pub fn max_ode_residual(&self, grid: &[f64]) -> Result<f64> {
        grid.iter()
            .try_fold(0.0f64, |acc, &t| Ok(acc.max(self.ode_residual(t)?)))
    }
}

/// Solution of the radial Obata equation `u'' + 2λu - ν = 0`, i.e.
/// `Hes_u + γ(u) g = 0` with `γ(u) = 2λu - ν`, together with the constant
/// `λ̂` of the first integral `(u')² + 2λu² - 2νu + 2λ̂ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObataSolution {
    pub sol: AffineSolution,
    pub lambda_hat: f64,
}

impl ObataSolution {
    pub fn solve(lambda: f64, nu: f64, u0: f64, u0p: f64) -> Self {
        let sol = AffineSolution::solve(lambda, nu, u0, u0p);
        Self {
            lambda_hat: Self::lambda_hat_from(lambda, nu, u0, u0p),
            sol,
        }
    }

    /// `λ̂ = (2νu - 2λu² - u'²)/2` evaluated on any point of a solution.
    pub fn lambda_hat_from(lambda: f64, nu: f64, u: f64, up: f64) -> f64 {
        (2.0 * nu * u - 2.0 * lambda * u * u - up * up) / 2.0
    }

    pub fn lambda(&self) -> f64 {
        self.sol.lambda
    }

    pub fn nu(&self) -> f64 {
        self.sol.c
    }

    pub fn branch(&self) -> Branch {
        self.sol.branch
    }

    pub fn gamma(&self, u: f64) -> f64 {
        2.0 * self.lambda() * u - self.nu()
    }

    pub fn gamma_description(&self) -> String {
        format!("gamma(u) = {}*u - {}", 2.0 * self.lambda(), self.nu())
    }

    pub fn profile(&self, domain: Interval) -> Profile1D {
        self.sol.profile(domain)
    }

    pub fn eval_jet(&self, t: f64) -> Result<Jet2> {
        self.sol.eval_jet(t)
    }
}

/// Solution of `α'' = -2λα + κ`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSolution {
    pub sol: AffineSolution,
}

impl AlphaSolution {
    pub fn solve(lambda: f64, kappa: f64, a0: f64, a0p: f64) -> Self {
        Self {
            sol: AffineSolution::solve(lambda, kappa, a0, a0p),
        }
    }

    /// `α = κ/(2λ) + B e^{kt} + C e^{-kt}` for `λ < 0`.
    pub fn exponential(lambda: f64, kappa: f64, b: f64, c: f64) -> Self {
        Self {
            sol: AffineSolution::exponential(lambda, kappa, b, c),
        }
    }

    pub fn kappa(&self) -> f64 {
        self.sol.c
    }

    pub fn profile(&self, domain: Interval) -> Profile1D {
        self.sol.profile(domain)
    }

    pub fn eval_jet(&self, t: f64) -> Result<Jet2> {
        self.sol.eval_jet(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_branch() {
        let s = ObataSolution::solve(0.5, 0.0, 1.0, 0.0);
        assert_eq!(s.branch(), Branch::Oscillatory);
        assert_eq!(s.lambda_hat, -0.5);
        let j = s.eval_jet(0.7).unwrap();
        assert!((j.value - 0.7f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn linear_branch() {
        let s = ObataSolution::solve(0.0, 0.0, 1.0, 1.0);
        assert_eq!(s.lambda_hat, -0.5);
        assert!((s.eval_jet(2.0).unwrap().value - 3.0).abs() < 1e-15);
    }

    #[test]
    fn exponential_branch() {
        let s = ObataSolution::solve(-0.5, 0.0, 1.0, 1.0);
        assert_eq!(s.lambda_hat, 0.0);
        let j = s.eval_jet(1.3).unwrap();
        assert!((j.value - 1.3f64.exp()).abs() < 1e-13);
        assert!((j.d1 - 1.3f64.exp()).abs() < 1e-13);
    }

    #[test]
    fn alpha_with_particular_constant() {
        let a = AlphaSolution::exponential(-0.5, -1.0, 1.0, 0.0);
        for t in [0.0, 1.0, 2.5] {
            let j = a.eval_jet(t).unwrap();
            assert!((j.value - (1.0 + f64::exp(t))).abs() < 1e-12);
            assert!(a.sol.ode_residual(t).unwrap() < 1e-12);
        }
        let z = AlphaSolution::solve(0.3, 0.0, 0.0, 0.0);
        assert_eq!(z.eval_jet(4.0).unwrap(), Jet2::new(0.0, 0.0, 0.0));
        let b = AlphaSolution::solve(0.5, 2.0, 0.0, 1.0);
        assert!((b.eval_jet(0.0).unwrap().value).abs() < 1e-15);
        assert!(b.sol.ode_residual(1.1).unwrap() < 1e-14);
    }
}
