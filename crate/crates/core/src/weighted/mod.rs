//! Weighted curvature of smooth metric measure spaces `(M, g, v^m dvol, m, μ)`.
//!
//! The density is carried as `v = e^{-f/m}`. Tensors are reported in the
//! adapted orthonormal frame of [`crate::geometry`].

mod density;
mod report;
mod tensors;
mod weyl;

pub use density::DensitySpec;
pub use report::{
    einstein_residuals, estimate_lambda, extract_scale, form_equivalence_residual, instance_grid,
    ResidualKind, WeightedReport,
};
pub use tensors::{
    bakry_emery, bakry_emery_f_form, density_frames, weighted_point, weighted_schouten, weighted_scalar,
    WeightedPoint,
};
pub use weyl::{weighted_weyl_norm, weyl_norm_from};

use serde::{Deserialize, Serialize};

use crate::adcore::GridSpec;
use crate::error::{Result, SmmsError};
use crate::geometry::WarpedMetric;

/// Dimensional data of an SMMS.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmmsParams {
    pub n: usize,
    pub m: f64,
    /// Auxiliary curvature parameter; has no effect when `m == 1`.
    pub mu: f64,
    /// Asserted weighted Einstein constant.
    #[serde(default)]
    pub lambda: Option<f64>,
    /// Asserted scale.
    #[serde(default)]
    pub kappa: Option<f64>,
}

impl SmmsParams {
    pub fn new(n: usize, m: f64, mu: f64) -> Self {
        Self {
            n,
            m,
            mu,
            lambda: None,
            kappa: None,
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = Some(kappa);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m > 0.0) || !self.m.is_finite() {
            return Err(SmmsError::Admissibility(format!("m must be positive, got {}", self.m)));
        }
        if !self.mu.is_finite() {
            return Err(SmmsError::Admissibility(format!("mu must be finite, got {}", self.mu)));
        }
        Ok(())
    }
}

/// A smooth metric measure space on a warped product.
#[derive(Debug, Clone)]
pub struct Smms {
    pub metric: WarpedMetric,
    pub density: DensitySpec,
    pub params: SmmsParams,
}

impl Smms {
    pub fn new(metric: WarpedMetric, density: DensitySpec, params: SmmsParams) -> Result<Self> {
        params.validate()?;
        if params.n != metric.n() {
            return Err(SmmsError::Form(format!(
                "parameter n = {} but the metric has dimension {}",
                params.n,
                metric.n()
            )));
        }
        density.validate(&metric)?;
        Ok(Self {
            metric,
            density,
            params,
        })
    }

    pub fn grid(&self, spec: &GridSpec) -> Result<Vec<crate::geometry::PointSpec>> {
        instance_grid(&self.metric, spec)
    }

    pub fn report(&self, lambda: f64, spec: &GridSpec) -> Result<WeightedReport> {
        let grid = self.grid(spec)?;
        einstein_residuals(&self.metric, &self.density, &self.params, lambda, &grid)
    }

    pub fn point(&self, p: &crate::geometry::PointSpec) -> Result<WeightedPoint> {
        weighted_point(&self.metric, &self.density, &self.params, p)
    }

    /// The `μ` for which `P_f = λg` holds in trace, fitted by least squares
    /// over the grid. `None` when `m = 1`, where `μ` has no effect.
    ///
    /// Only `τ_f` depends on `μ`, through `m(m-1)μ/v²`, while the trace of
    /// `P_f = λg` forces `τ_f = 2(n+m-1)J` with `nJ = tr ρ_f - n(n+m-2)λ`.
    pub fn estimate_mu(&self, lambda: f64, spec: &GridSpec) -> Result<Option<f64>> {
        let (n, m) = (self.params.n, self.params.m);
        if m == 1.0 {
            return Ok(None);
        }
        let nf = n as f64;
        let (mut xy, mut xx) = (0.0, 0.0);
        for p in self.grid(spec)? {
            let w = self.point(&p)?;
            let x = m * (m - 1.0) / (w.v * w.v);
            let j = (w.rho_f.trace(n) - nf * (nf + m - 2.0) * lambda) / nf;
            let y = 2.0 * (nf + m - 1.0) * j - (w.tau_f - x * self.params.mu);
            xy += x * y;
            xx += x * x;
        }
        Ok(Some(xy / xx))
    }
}
