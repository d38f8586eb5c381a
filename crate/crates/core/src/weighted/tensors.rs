use serde::{Deserialize, Serialize};

use super::{DensitySpec, SmmsParams};
use crate::adcore::JetScalar;
use crate::error::{Result, SmmsError};
use crate::geometry::{self, FrameJet, PointSpec, Sym2, WarpedMetric};

/// All weighted quantities at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedPoint {
    pub point: PointSpec,
    pub v: f64,
    pub f: f64,
    pub rho: Sym2,
    pub tau: f64,
    pub rho_f: Sym2,
    pub tau_f: f64,
    pub j: f64,
    pub schouten: Sym2,
}

struct Frames {
    n: usize,
    rho: Sym2,
    tau: f64,
    v: FrameJet,
    f: FrameJet,
}

fn frames(g: &WarpedMetric, d: &DensitySpec, params: &SmmsParams, p: &PointSpec) -> Result<Frames> {
    params.validate()?;
    if params.n != g.n() {
        return Err(SmmsError::Form(format!(
            "parameter n = {} but the metric has dimension {}",
            params.n,
            g.n()
        )));
    }
    let loc = g.local(p)?;
    let curv = geometry::curvature_local(&loc, g.fiber.beta());
    let vj = d.coordinate_jet(g, p)?;
    let fj = vj.ln().scale(-params.m);
    Ok(Frames {
        n: loc.n,
        rho: curv.rho,
        tau: curv.tau,
        v: geometry::frame_jet_local(&loc, vj)?,
        f: geometry::frame_jet_local(&loc, fj)?,
    })
}

/// Frame jets of `v` and `f = -m log v` at a point.
pub fn density_frames(
    g: &WarpedMetric,
    d: &DensitySpec,
    params: &SmmsParams,
    p: &PointSpec,
) -> Result<(FrameJet, FrameJet)> {
    let fr = frames(g, d, params, p)?;
    Ok((fr.v, fr.f))
}

fn mu_term(params: &SmmsParams, v: f64) -> f64 {
    if params.m == 1.0 {
        0.0
    } else {
        params.m * (params.m - 1.0) * params.mu / (v * v)
    }
}

/// `ρ_f = ρ - m v⁻¹ Hes_v`.
pub fn bakry_emery(
    g: &WarpedMetric,
    d: &DensitySpec,
    params: &SmmsParams,
    p: &PointSpec,
) -> Result<Sym2> {
    let fr = frames(g, d, params, p)?;
    Ok(fr.rho - fr.v.hess.scale(params.m / fr.v.value))
}

/// `ρ_f = ρ + Hes_f - (1/m) df ⊗ df`, computed from `f = -m log v`.
pub fn bakry_emery_f_form(
    g: &WarpedMetric,
    d: &DensitySpec,
    params: &SmmsParams,
    p: &PointSpec,
) -> Result<Sym2> {
    let fr = frames(g, d, params, p)?;
    Ok(fr.rho + fr.f.hess - fr.f.outer().scale(1.0 / params.m))
}

/// `τ_f = τ + 2Δf - ((m+1)/m)|∇f|² + m(m-1) μ e^{2f/m}`.
pub fn weighted_scalar(
    g: &WarpedMetric,
    d: &DensitySpec,
    params: &SmmsParams,
    p: &PointSpec,
) -> Result<f64> {
    Ok(weighted_point(g, d, params, p)?.tau_f)
}

/// `(P_f, J_f)` with `J_f = τ_f / (2(n+m-1))` and `P_f = (ρ_f - J_f g)/(n+m-2)`.
pub fn weighted_schouten(
    g: &WarpedMetric,
    d: &DensitySpec,
    params: &SmmsParams,
    p: &PointSpec,
) -> Result<(Sym2, f64)> {
    let w = weighted_point(g, d, params, p)?;
    Ok((w.schouten, w.j))
}

pub fn weighted_point(
    g: &WarpedMetric,
    d: &DensitySpec,
    params: &SmmsParams,
    p: &PointSpec,
) -> Result<WeightedPoint> {
    let fr = frames(g, d, params, p)?;
    let m = params.m;
    let n = fr.n as f64;
    let v = fr.v.value;
    let rho_f = fr.rho - fr.v.hess.scale(m / v);
    let tau_f = fr.tau + 2.0 * fr.f.laplacian(fr.n) - (m + 1.0) / m * fr.f.grad_norm_sq()
        + mu_term(params, v);
    let j = tau_f / (2.0 * (n + m - 1.0));
    let schouten = (rho_f - Sym2::scalar(j)).scale(1.0 / (n + m - 2.0));
    Ok(WeightedPoint {
        point: *p,
        v,
        f: fr.f.value,
        rho: fr.rho,
        tau: fr.tau,
        rho_f,
        tau_f,
        j,
        schouten,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adcore::{Interval, Profile1D};
    use crate::geometry::FiberDesc;
    use std::f64::consts::PI;

    fn flat(n: usize) -> WarpedMetric {
        WarpedMetric::new(
            Profile1D::parse("t", Interval::positive_half_line()).unwrap(),
            FiberDesc::round_sphere(n - 1),
        )
        .unwrap()
    }

    #[test]
    fn constant_density_leaves_ricci_alone() {
        let g = WarpedMetric::new(
            Profile1D::parse("sin(t)", Interval::open(0.0, PI)).unwrap(),
            FiberDesc::round_sphere(3),
        )
        .unwrap();
        let d = DensitySpec::constant(2.5, &g);
        let params = SmmsParams::new(4, 2.0, 0.3);
        let p = PointSpec::t(0.8);
        let be = bakry_emery(&g, &d, &params, &p).unwrap();
        let rho = geometry::ricci(&g, &p).unwrap().rho;
        assert_eq!(be, rho);
    }

    #[test]
    fn flat_scalar_is_the_mu_term() {
        let g = flat(3);
        let d = DensitySpec::constant(1.0, &g);
        let (m, mu) = (2.5, 0.7);
        let tau_f = weighted_scalar(&g, &d, &SmmsParams::new(3, m, mu), &PointSpec::t(1.0));
        assert!((tau_f.unwrap() - m * (m - 1.0) * mu).abs() < 1e-14);
    }

    #[test]
    fn m_one_ignores_mu() {
        let g = flat(3);
        let d = DensitySpec::radial(Profile1D::parse("2 + t^2", Interval::real_line()).unwrap());
        let p = PointSpec::t(1.3);
        let a = weighted_point(&g, &d, &SmmsParams::new(3, 1.0, 0.0), &p).unwrap();
        let b = weighted_point(&g, &d, &SmmsParams::new(3, 1.0, -123.0), &p).unwrap();
        assert_eq!(a, b);
        let c = DensitySpec::constant(1.0, &g);
        let z = weighted_scalar(&g, &c, &SmmsParams::new(3, 1.0, 5.0), &p).unwrap();
        assert_eq!(z, 0.0);
    }

    #[test]
    fn nonpositive_density_is_rejected() {
        let g = flat(3);
        let d = DensitySpec::radial(Profile1D::parse("1 - t", Interval::real_line()).unwrap());
        let r = weighted_point(&g, &d, &SmmsParams::new(3, 2.0, 0.0), &PointSpec::t(2.0));
        assert!(matches!(r, Err(SmmsError::Positivity(_))));
    }
}
