//! Grid checks of the conformal transformation laws.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{apply_with_cap, ConformalFactor, TransformedSmms};
use crate::adcore::GridSpec;
use crate::error::Result;
use crate::geometry::{hessian, PointSpec, Sym2};
use crate::weighted::{density_frames, Smms};

/// Sup-norm residuals of the three transformation laws.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LawResiduals {
    pub schouten: f64,
    pub ricci: f64,
    pub bakry_emery: f64,
}

fn point_residuals(smms: &Smms, image: &TransformedSmms, p: &PointSpec) -> Result<LawResiduals> {
    let (g, params) = (&smms.metric, &smms.params);
    let w = smms.point(p)?;
    let wh = image.smms.point(&image.map_point(p)?)?;
    let uj = hessian(g, image.factor.u.eval_jet(p.t)?.along_t(), p)?;
    let (_, fj) = density_frames(g, &smms.density, params, p)?;

    let n = g.n();
    let (nf, m) = (n as f64, params.m);
    let (u, du2, lap) = (uj.value, uj.grad_norm_sq(), uj.laplacian(n));
    let back = 1.0 / (u * u);

    let schouten = w.schouten + uj.hess.scale(1.0 / u) - Sym2::scalar(0.5 * du2 / (u * u));
    let ricci = w.rho
        + (uj.hess.scale((nf - 2.0) * u) + Sym2::scalar(u * lap - (nf - 1.0) * du2)).scale(back);
    let be = w.rho_f
        + uj.hess.scale((m + nf - 2.0) / u)
        + Sym2::scalar((lap - fj.dot(&uj)) / u - (m + nf - 1.0) * du2 / (u * u));

    Ok(LawResiduals {
        schouten: (wh.schouten.scale(back) - schouten).max_abs(),
        ricci: (wh.rho.scale(back) - ricci).max_abs(),
        bakry_emery: (wh.rho_f.scale(back) - be).max_abs(),
    })
}

/// All three law residuals over the instance grid.
pub fn law_residuals(smms: &Smms, u: &ConformalFactor, spec: &GridSpec) -> Result<LawResiduals> {
    let image = apply_with_cap(smms, u, spec.cap)?;
    let grid = smms.grid(spec)?;
    let pts: Vec<LawResiduals> = grid
        .par_iter()
        .map(|p| point_residuals(smms, &image, p))
        .collect::<Result<_>>()?;
    Ok(pts.into_iter().fold(LawResiduals::default(), |a, r| LawResiduals {
        schouten: a.schouten.max(r.schouten),
        ricci: a.ricci.max(r.ricci),
        bakry_emery: a.bakry_emery.max(r.bakry_emery),
    }))
}

/// `P̂ = P + u⁻¹Hes_u - ½u⁻²|∇u|²g`.
pub fn schouten_transform_check(smms: &Smms, u: &ConformalFactor, spec: &GridSpec) -> Result<f64> {
    Ok(law_residuals(smms, u, spec)?.schouten)
}

/// `ρ̂ = ρ + u⁻²((n-2)u Hes_u + (uΔu - (n-1)|∇u|²)g)`.
pub fn ricci_transform_check(smms: &Smms, u: &ConformalFactor, spec: &GridSpec) -> Result<f64> {
    Ok(law_residuals(smms, u, spec)?.ricci)
}

/// `ρ̂_f = ρ_f + (m+n-2)u⁻¹Hes_u + (u⁻¹(Δu - g(∇f,∇u)) - (m+n-1)u⁻²|∇u|²)g`.
pub fn be_ricci_transform_check(smms: &Smms, u: &ConformalFactor, spec: &GridSpec) -> Result<f64> {
    Ok(law_residuals(smms, u, spec)?.bakry_emery)
}

/// Apply `u`, then `u⁻¹` in the image coordinate, and compare the weighted
/// data with the original at corresponding points.
pub fn involution_residual(smms: &Smms, u: &ConformalFactor, spec: &GridSpec) -> Result<f64> {
    let once = apply_with_cap(smms, u, spec.cap)?;
    let twice = apply_with_cap(&once.smms, &once.inverse_factor(), spec.cap)?;
    let grid = smms.grid(spec)?;
    let diffs: Vec<f64> = grid
        .par_iter()
        .map(|p| -> Result<f64> {
            let a = smms.point(p)?;
            let q = twice.map_point(&once.map_point(p)?)?;
            let b = twice.smms.point(&q)?;
            Ok([
                (a.v - b.v).abs(),
                (a.rho_f - b.rho_f).max_abs(),
                (a.schouten - b.schouten).max_abs(),
                (a.tau_f - b.tau_f).abs(),
                (smms.metric.phi.eval(p.t)? - twice.smms.metric.phi.eval(q.t)?).abs(),
            ]
            .into_iter()
            .fold(0.0, f64::max))
        })
        .collect::<Result<_>>()?;
    Ok(diffs.into_iter().fold(0.0, f64::max))
}
