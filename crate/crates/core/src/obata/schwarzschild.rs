//! The profile `ω` with `(ω')² = 1 - ω^{1-m}`, `ω(0) = 1`.
//!
//! `ω(0) = 1` sits on the branch point `ω' = 0` of the first-order equation,
//! so `ω` is integrated in the differentiated form `ω'' = ((m-1)/2) ω^{-m}`.
//! For `m = 3` the closed form `ω = sqrt(1 + x²)` is used instead.

use std::sync::Arc;

use super::rk4::{rk4_integrate, rk4_step, Trajectory};
use crate::adcore::{Expr, Interval, Jet2, JetFn, Profile1D};
use crate::error::{Result, SmmsError};

/// Step used for the tabulated trajectory.
const STEP: f64 = 1e-3;

fn rhs(m: f64) -> impl Fn(f64, &[f64]) -> Vec<f64> {
    move |_, y| vec![y[1], 0.5 * (m - 1.0) * y[0].powf(-m)]
}

/// RK4 trajectory of `(ω, ω')` on `[0, x1]`.
pub fn omega_trajectory(m: f64, x1: f64, step: f64) -> Result<Trajectory> {
    if !(m > 1.0) {
        return Err(SmmsError::Admissibility(format!("profile needs m > 1, got {m}")));
    }
    rk4_integrate(rhs(m), 0.0, &[1.0, 0.0], x1, step)
}

/// Tabulated `ω` with one partial RK4 step to the requested point.
#[derive(Debug)]
struct OmegaTable {
    m: f64,
    traj: Trajectory,
    /// Return the jet of `ω'` instead of `ω`.
    derivative: bool,
}

impl OmegaTable {
    fn state(&self, x: f64) -> Result<[f64; 2]> {
        let last = self.traj.t[self.traj.len() - 1];
        if !(0.0..=last).contains(&x) {
            return Err(SmmsError::Domain(format!("{x} outside tabulated range [0, {last}]")));
        }
        let i = ((x / STEP).floor() as usize).min(self.traj.len() - 1);
        let (t0, y0) = (self.traj.t[i], &self.traj.y[i]);
        let y = if x == t0 {
            y0.clone()
        } else {
            rk4_step(&rhs(self.m), t0, y0, x - t0)
        };
        Ok([y[0], y[1]])
    }
}

impl JetFn for OmegaTable {
    fn jet(&self, x: f64) -> Result<Jet2> {
        let [w, w1] = self.state(x)?;
        let m = self.m;
        let w2 = 0.5 * (m - 1.0) * w.powf(-m);
        Ok(if self.derivative {
            let w3 = -0.5 * m * (m - 1.0) * w.powf(-m - 1.0) * w1;
            Jet2::new(w1, w2, w3)
        } else {
            Jet2::new(w, w1, w2)
        })
    }

    fn describe(&self) -> String {
        let name = if self.derivative { "omega'" } else { "omega" };
        format!("{name}(x), m = {}, RK4 step {STEP}", self.m)
    }
}

fn table(m: f64, domain: &Interval, derivative: bool) -> Result<Profile1D> {
    let hi = domain.truncated(crate::adcore::DEFAULT_CAP).hi;
    let traj = omega_trajectory(m, hi + 2.0 * STEP, STEP)?;
    Ok(Profile1D::custom(Arc::new(OmegaTable { m, traj, derivative }), *domain).with_var("x"))
}

fn check_domain(domain: &Interval) -> Result<()> {
    if domain.lo < 0.0 {
        return Err(SmmsError::Domain(format!(
            "profile is defined for x >= 0, got {}",
            domain.describe()
        )));
    }
    Ok(())
}

/// `ω` on `domain` (a subset of `[0, ∞)`).
pub fn omega_profile(m: f64, domain: Interval) -> Result<Profile1D> {
    check_domain(&domain)?;
    if m == 3.0 {
        let x = Expr::var;
        return Ok(Profile1D::from_expr((1.0 + x().powf(2.0)).sqrt(), domain).with_var("x"));
    }
    table(m, &domain, false)
}

/// `ω'` on `domain`; vanishes at `x = 0`.
pub fn omega_prime_profile(m: f64, domain: Interval) -> Result<Profile1D> {
    check_domain(&domain)?;
    if m == 3.0 {
        let x = Expr::var;
        return Ok(Profile1D::from_expr(x() / (1.0 + x().powf(2.0)).sqrt(), domain).with_var("x"));
    }
    table(m, &domain, true)
}
