use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tensors::{bakry_emery, bakry_emery_f_form, weighted_point, WeightedPoint};
use super::weyl::weyl_norm_from;
use super::{DensitySpec, SmmsParams};
use crate::adcore::{sample_grid, GridSpec};
use crate::error::{Result, SmmsError};
use crate::geometry::{sectional, PointSpec, Sym2, WarpedMetric};

/// Named residuals of a weighted report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualKind {
    /// `|P_f - λ g|`
    Schouten,
    /// `|ρ_f - 2(m+n-1)λ g|`
    QuasiEinstein,
    /// `|ρ - 2(n-1)λ g|`
    Einstein,
    /// Trace-free part of `P_f`.
    TracefreeSchouten,
    /// `τ_f` against the value forced by `ρ_f` and `λ`.
    TauF,
}

impl ResidualKind {
    pub fn name(self) -> &'static str {
        match self {
            ResidualKind::Schouten => "residual_P",
            ResidualKind::QuasiEinstein => "residual_QE",
            ResidualKind::Einstein => "residual_Einstein",
            ResidualKind::TracefreeSchouten => "tracefree_P_residual",
            ResidualKind::TauF => "tau_f_residual",
        }
    }
}

/// Sup-norm residuals and scale extraction over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedReport {
    pub lambda: f64,
    pub points: usize,
    pub residual_p: f64,
    pub residual_qe: f64,
    pub residual_einstein: f64,
    pub residual_p_tracefree: f64,
    pub residual_tau_f: f64,
    /// Mean of the pointwise scale `((m+n)λ - J_f) v / m`.
    pub kappa: f64,
    /// `max - min` of the pointwise scale.
    pub kappa_spread: f64,
    /// Mean of `tr(P_f)/n`.
    pub lambda_estimate: f64,
    pub v_min: f64,
    pub v_max: f64,
    /// `max - min` of `f`.
    pub f_spread: f64,
    /// Largest `|ρ(e_t, e_s)|`.
    pub max_mixed: f64,
    /// Largest weighted Weyl norm, when the fiber curvature allows it.
    pub weyl_norm: Option<f64>,
    #[serde(skip)]
    pub samples: Vec<WeightedPoint>,
}

impl WeightedReport {
    pub fn residual(&self, kind: ResidualKind) -> f64 {
        match kind {
            ResidualKind::Schouten => self.residual_p,
            ResidualKind::QuasiEinstein => self.residual_qe,
            ResidualKind::Einstein => self.residual_einstein,
            ResidualKind::TracefreeSchouten => self.residual_p_tracefree,
            ResidualKind::TauF => self.residual_tau_f,
        }
    }

    /// `max - min` of `v`.
    pub fn density_spread(&self) -> f64 {
        self.v_max - self.v_min
    }
}

/// Sampling points for an instance: a line in `t`, or a product grid in
/// `(t, s)` with `ceil(sqrt(k))` points per axis when a fiber coordinate is
/// active.
pub fn instance_grid(g: &WarpedMetric, spec: &GridSpec) -> Result<Vec<PointSpec>> {
    let two_d = g.fiber.nested().is_some();
    if !two_d {
        let ts = sample_grid(g.base(), spec.k, spec.margin, spec.cap)?;
        return Ok(ts.into_iter().map(PointSpec::t).collect());
    }
    let per = ((spec.k as f64).sqrt().ceil() as usize).max(2);
    let ts = sample_grid(g.base(), per, spec.margin, spec.cap)?;
    let s_dom = g.fiber_domain().expect("nested");
    let ss = sample_grid(s_dom, per, spec.margin, spec.cap)?;
    Ok(ts
        .iter()
        .flat_map(|&t| ss.iter().map(move |&s| PointSpec::ts(t, s)))
        .collect())
}

/// Pointwise scale `κ(p) = ((m+n)λ - J_f) e^{-f/m} / m`; returns `(mean, spread)`.
pub fn extract_scale(samples: &[WeightedPoint], lambda: f64, params: &SmmsParams) -> (f64, f64) {
    let (m, n) = (params.m, params.n as f64);
    let mut sum = 0.0;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for w in samples {
        let k = ((m + n) * lambda - w.j) * w.v / m;
        sum += k;
        lo = lo.min(k);
        hi = hi.max(k);
    }
    if samples.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    (sum / samples.len() as f64, hi - lo)
}

/// Mean of `tr(P_f)/n` over the samples.
pub fn estimate_lambda(samples: &[WeightedPoint], n: usize) -> f64 {
    let sum: f64 = samples.iter().map(|w| w.schouten.trace(n) / n as f64).sum();
    sum / samples.len() as f64
}

fn evaluate(
    g: &WarpedMetric,
    d: &DensitySpec,
    params: &SmmsParams,
    grid: &[PointSpec],
) -> Result<Vec<WeightedPoint>> {
    grid.par_iter()
        .map(|p| weighted_point(g, d, params, p))
        .collect()
}

/// Weighted Einstein residuals for the asserted `λ` over `grid`.
pub fn einstein_residuals(
    g: &WarpedMetric,
    d: &DensitySpec,
    params: &SmmsParams,
    lambda: f64,
    grid: &[PointSpec],
) -> Result<WeightedReport> {
    if grid.is_empty() {
        return Err(SmmsError::Domain("empty sampling grid".into()));
    }
    d.validate(g)?;
    let samples = evaluate(g, d, params, grid)?;
    let n = params.n;
    let (nf, m) = (n as f64, params.m);
    let qe = 2.0 * (m + nf - 1.0) * lambda;
    let ein = 2.0 * (nf - 1.0) * lambda;

    let mut r = WeightedReport {
        lambda,
        points: samples.len(),
        residual_p: 0.0,
        residual_qe: 0.0,
        residual_einstein: 0.0,
        residual_p_tracefree: 0.0,
        residual_tau_f: 0.0,
        kappa: 0.0,
        kappa_spread: 0.0,
        lambda_estimate: estimate_lambda(&samples, n),
        v_min: f64::INFINITY,
        v_max: f64::NEG_INFINITY,
        f_spread: 0.0,
        max_mixed: 0.0,
        weyl_norm: None,
        samples: Vec::new(),
    };
    let (mut f_lo, mut f_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for w in &samples {
        r.residual_p = r.residual_p.max((w.schouten - Sym2::scalar(lambda)).max_abs());
        r.residual_qe = r.residual_qe.max((w.rho_f - Sym2::scalar(qe)).max_abs());
        r.residual_einstein = r.residual_einstein.max((w.rho - Sym2::scalar(ein)).max_abs());
        let mean = w.schouten.trace(n) / nf;
        r.residual_p_tracefree = r
            .residual_p_tracefree
            .max((w.schouten - Sym2::scalar(mean)).max_abs());
        let forced = 2.0 * (nf + m - 1.0) * (w.rho_f.trace(n) - nf * (nf + m - 2.0) * lambda) / nf;
        r.residual_tau_f = r.residual_tau_f.max((w.tau_f - forced).abs());
        r.v_min = r.v_min.min(w.v);
        r.v_max = r.v_max.max(w.v);
        f_lo = f_lo.min(w.f);
        f_hi = f_hi.max(w.f);
        r.max_mixed = r.max_mixed.max(w.rho.ts.abs());
    }
    r.f_spread = f_hi - f_lo;
    let (kappa, spread) = extract_scale(&samples, lambda, params);
    r.kappa = kappa;
    r.kappa_spread = spread;
    r.weyl_norm = weyl_sup(g, &samples);
    r.samples = samples;
    Ok(r)
}

fn weyl_sup(g: &WarpedMetric, samples: &[WeightedPoint]) -> Option<f64> {
    if g.n() > 8 {
        return None;
    }
    let norms: Result<Vec<f64>> = samples
        .par_iter()
        .map(|w| weyl_norm_from(&sectional(g, &w.point)?, &w.schouten))
        .collect();
    norms.ok().map(|v| v.into_iter().fold(0.0, f64::max))
}

/// Sup over the grid of `|(ρ - m v⁻¹ Hes_v) - (ρ + Hes_f - df⊗df/m)|`.
pub fn form_equivalence_residual(
    g: &WarpedMetric,
    d: &DensitySpec,
    params: &SmmsParams,
    grid: &[PointSpec],
) -> Result<f64> {
    let diffs: Result<Vec<f64>> = grid
        .par_iter()
        .map(|p| {
            let a = bakry_emery(g, d, params, p)?;
            let b = bakry_emery_f_form(g, d, params, p)?;
            Ok((a - b).max_abs())
        })
        .collect();
    Ok(diffs?.into_iter().fold(0.0, f64::max))
}
