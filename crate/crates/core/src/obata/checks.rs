use super::{ObataSolution, Trajectory};
use crate::adcore::{Expr, Interval, Profile1D};
use crate::error::{Result, SmmsError};
use crate::geometry::{hessian_radial, FiberDesc, PointSpec, WarpedMetric};

fn first_integral(lambda: f64, nu: f64, lambda_hat: f64, u: f64, up: f64) -> f64 {
    up * up + 2.0 * lambda * u * u - 2.0 * nu * u + 2.0 * lambda_hat
}

/// `max |u'² + 2λu² - 2νu + 2λ̂|` over the grid.
pub fn first_integral_drift(sol: &ObataSolution, grid: &[f64]) -> Result<f64> {
    grid.iter().try_fold(0.0f64, |acc, &t| {
        let j = sol.eval_jet(t)?;
        Ok(acc.max(
            first_integral(sol.lambda(), sol.nu(), sol.lambda_hat, j.value, j.d1).abs(),
        ))
    })
}

/// Same drift for a trajectory with states `[u, u']`.
pub fn first_integral_drift_traj(tr: &Trajectory, lambda: f64, nu: f64, lambda_hat: f64) -> f64 {
    tr.y.iter()
        .map(|y| first_integral(lambda, nu, lambda_hat, y[0], y[1]).abs())
        .fold(0.0, f64::max)
}

/// `max |2λφ² + φ'² - (ν² - 4λλ̂)|` over the grid.
pub fn nu_identity(phi: &Profile1D, lambda: f64, nu: f64, lambda_hat: f64, grid: &[f64]) -> Result<f64> {
    let target = nu * nu - 4.0 * lambda * lambda_hat;
    grid.iter().try_fold(0.0f64, |acc, &t| {
        let j = phi.eval_jet(t)?;
        Ok(acc.max((2.0 * lambda * j.value * j.value + j.d1 * j.d1 - target).abs()))
    })
}

/// `ξ = α'φ' - (κ - 2λα)φ` over the grid; returns `(mean, spread)`.
pub fn xi_constant(
    phi: &Profile1D,
    alpha: &Profile1D,
    lambda: f64,
    kappa: f64,
    grid: &[f64],
) -> Result<(f64, f64)> {
    let mut vals = Vec::with_capacity(grid.len());
    for &t in grid {
        let (p, a) = (phi.eval_jet(t)?, alpha.eval_jet(t)?);
        vals.push(a.d1 * p.d1 - (kappa - 2.0 * lambda * a.value) * p.value);
    }
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok((mean, hi - lo))
}

/// Polar model `dr² + sn_c(r)² g_{S^{d-1}}` of a space form.
fn polar_model(dim: usize, c: f64) -> Result<WarpedMetric> {
    let r = Expr::var;
    let (sn, hi) = if c > 0.0 {
        let k = c.sqrt();
        ((k * r()).sin() / k, std::f64::consts::PI / k)
    } else if c < 0.0 {
        let k = (-c).sqrt();
        ((k * r()).sinh() / k, f64::INFINITY)
    } else {
        (r(), f64::INFINITY)
    };
    WarpedMetric::new(
        Profile1D::from_expr(sn, Interval::open(0.0, hi)).with_var("r"),
        FiberDesc::round_sphere(dim - 1),
    )
}

/// Residual of the fiber Obata equation `Hes_N v_N = -(ξ + c v_N) g_N` for a
/// function `v_N` of the fiber's radial coordinate, sampled at `grid`.
///
/// Space-form fibers of dimension at least two are written in geodesic polar
/// coordinates and `v_N` is a function of the radius; a nested fiber uses its
/// own base coordinate.
pub fn fiber_obata_check(fiber: &FiberDesc, v_n: &Profile1D, xi: f64, c: f64, grid: &[f64]) -> Result<f64> {
    let model;
    let h = match fiber {
        FiberDesc::Nested(h) => h.as_ref(),
        FiberDesc::SpaceForm { dim: 1, .. } => {
            return grid.iter().try_fold(0.0f64, |acc, &s| {
                let j = v_n.eval_jet(s)?;
                Ok(acc.max((j.d2 + xi + c * j.value).abs()))
            });
        }
        FiberDesc::SpaceForm { dim, curvature } => {
            model = polar_model(*dim, *curvature)?;
            &model
        }
        FiberDesc::EinsteinPlaceholder { .. } => {
            return Err(SmmsError::Unsupported(
                "fiber Hessian is not computable on an abstract Einstein fiber".into(),
            ))
        }
    };
    grid.iter().try_fold(0.0f64, |acc, &s| {
        let (hss, hkk) = hessian_radial(h, v_n, &PointSpec::t(s))?;
        let rhs = -(xi + c * v_n.eval(s)?);
        Ok(acc.max((hss - rhs).abs()).max((hkk - rhs).abs()))
    })
}
