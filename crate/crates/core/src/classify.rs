//! Branch classification of verified weighted Einstein instances.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::adcore::GridSpec;
use crate::error::{Result, SmmsError};
use crate::geometry::{sectional, FiberDesc, PointSpec};
use crate::weighted::{bakry_emery, DensitySpec, Smms, SmmsParams, WeightedReport};

/// Local structure of a weighted Einstein SMMS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocalBranch {
    /// `ρ = 2(n-1)λ g`.
    Einstein,
    /// `ρ_f = 2(m+n-1)λ g` and `κ = 0`.
    QuasiEinstein,
    /// Constant density.
    Trivial,
    Indeterminate,
}

/// Global model of a complete weighted Einstein SMMS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GlobalBranch {
    /// Constant sectional curvature of `g`.
    SpaceForm,
    /// `φ = A e^{t√(-2λ)}` over a Ricci-flat fiber.
    ExpEinstein,
    /// `φ = e^{t√(-2λ)}` over a steady quasi-Einstein fiber.
    ExpQuasiEinstein,
    NotApplicable,
}

impl fmt::Display for LocalBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl fmt::Display for GlobalBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Verified numbers plus caller-asserted metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationInput {
    pub report: WeightedReport,
    pub lambda: f64,
    pub kappa: f64,
    pub complete: bool,
    pub compact: bool,
    pub trivial: bool,
    /// Einstein constant of the fiber, when it has one.
    pub fiber_beta: Option<f64>,
    /// Spread of the sectional curvatures of `g` over the grid; `None` when
    /// the fiber curvature is not fully known.
    pub sectional_spread: Option<f64>,
    /// Mean sectional curvature of `g`.
    pub curvature: Option<f64>,
    /// Sup of the fiber's Bakry–Émery tensor `(ρ^m_{f_N})^N`.
    pub fiber_be_residual: Option<f64>,
}

impl ClassificationInput {
    /// Collect the geometric data needed for classification.
    pub fn gather(
        smms: &Smms,
        report: &WeightedReport,
        complete: bool,
        compact: bool,
        spec: &GridSpec,
        tol: f64,
    ) -> Result<Self> {
        let grid = smms.grid(spec)?;
        let (sectional_spread, curvature) = sectional_stats(smms, &grid)?;
        Ok(Self {
            report: report.clone(),
            lambda: report.lambda,
            kappa: report.kappa,
            complete: complete || compact,
            compact,
            trivial: report.density_spread() < tol,
            fiber_beta: smms.metric.fiber.beta(),
            sectional_spread,
            curvature,
            fiber_be_residual: fiber_be_residual(smms, spec)?,
        })
    }
}

fn sectional_stats(smms: &Smms, grid: &[PointSpec]) -> Result<(Option<f64>, Option<f64>)> {
    let (mut lo, mut hi, mut sum, mut count) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
    for p in grid {
        let k = sectional(&smms.metric, p)?;
        match k.fiber_weyl {
            Some(0.0) => {}
            _ => return Ok((None, None)),
        }
        for x in k.values() {
            lo = lo.min(x);
            hi = hi.max(x);
            sum += x;
            count += 1;
        }
    }
    if count == 0 {
        return Ok((None, None));
    }
    Ok((Some(hi - lo), Some(sum / count as f64)))
}

/// Fiber factor `v_N` of the density, when the density splits as `b(t) v_N`.
fn fiber_factor(d: &DensitySpec) -> Option<crate::adcore::Profile1D> {
    match d {
        DensitySpec::Separable { fiber, .. } => Some(fiber.clone()),
        DensitySpec::Radial { .. } => None,
        _ => None,
    }
}

fn fiber_be_residual(smms: &Smms, spec: &GridSpec) -> Result<Option<f64>> {
    let fiber = &smms.metric.fiber;
    match fiber {
        FiberDesc::Nested(h) => {
            let v_n = match (&smms.density, fiber_factor(&smms.density)) {
                (_, Some(w)) => w.with_domain(*h.base()),
                (DensitySpec::Radial { .. }, None) => crate::adcore::Profile1D::constant(1.0, *h.base()),
                _ => return Ok(None),
            };
            let params = SmmsParams::new(h.n(), smms.params.m, 0.0);
            let d = DensitySpec::radial(v_n);
            let mut sup = 0.0f64;
            for p in crate::weighted::instance_grid(h, spec)? {
                sup = sup.max(bakry_emery(h, &d, &params, &p)?.max_abs());
            }
            Ok(Some(sup))
        }
        _ if !smms.density.depends_on_fiber() => Ok(fiber.beta().map(f64::abs)),
        _ => Ok(None),
    }
}

/// Local verdict and, for indeterminate instances, the largest violated
/// residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalVerdict {
    pub branch: LocalBranch,
    pub dominant: Option<(String, f64)>,
}

/// Local and global branches with their supporting residuals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchVerdict {
    pub local: LocalBranch,
    pub global: GlobalBranch,
    /// Sign of the sectional curvature for `SpaceForm`.
    pub curvature_sign: Option<i8>,
    pub dominant: Option<(String, f64)>,
    pub residuals: BTreeMap<String, f64>,
}

fn largest(cands: &[(&str, f64)], tol: f64) -> Option<(String, f64)> {
    cands
        .iter()
        .filter(|(_, r)| !(*r < tol))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(n, r)| (n.to_string(), *r))
}

/// Trivial, then Einstein, then quasi-Einstein; otherwise indeterminate.
pub fn classify_local(input: &ClassificationInput, tol: f64) -> LocalVerdict {
    let r = &input.report;
    if input.trivial {
        return LocalVerdict { branch: LocalBranch::Trivial, dominant: None };
    }
    if !(r.residual_p < tol) {
        let why = largest(
            &[("tracefree_P_residual", r.residual_p_tracefree), ("tau_f_residual", r.residual_tau_f)],
            tol,
        )
        .or_else(|| Some(("residual_P".into(), r.residual_p)));
        return LocalVerdict { branch: LocalBranch::Indeterminate, dominant: why };
    }
    if r.residual_einstein < tol {
        return LocalVerdict { branch: LocalBranch::Einstein, dominant: None };
    }
    if r.residual_qe < tol && input.kappa.abs() < tol {
        return LocalVerdict { branch: LocalBranch::QuasiEinstein, dominant: None };
    }
    LocalVerdict {
        branch: LocalBranch::Indeterminate,
        dominant: largest(
            &[
                ("residual_Einstein", r.residual_einstein),
                ("residual_QE", r.residual_qe),
                ("kappa", input.kappa.abs()),
            ],
            tol,
        ),
    }
}

/// Global branch of a complete instance. A compact instance must be a space
/// form with `λ > 0`.
pub fn classify_global(input: &ClassificationInput, tol: f64) -> Result<(GlobalBranch, Option<i8>)> {
    let local = classify_local(input, tol).branch;
    let negative = input.lambda < 0.0;
    let global = if !input.complete {
        GlobalBranch::NotApplicable
    } else if negative
        && input.kappa.abs() < tol
        && local == LocalBranch::QuasiEinstein
        && input.fiber_be_residual.is_some_and(|r| r < tol)
    {
        GlobalBranch::ExpQuasiEinstein
    } else if negative && local == LocalBranch::Einstein && input.fiber_beta.is_some_and(|b| b.abs() < tol) {
        GlobalBranch::ExpEinstein
    } else if input.sectional_spread.is_some_and(|s| s < tol) {
        GlobalBranch::SpaceForm
    } else {
        GlobalBranch::NotApplicable
    };
    let sign = match (global, input.curvature) {
        (GlobalBranch::SpaceForm, Some(k)) if k.abs() < tol => Some(0),
        (GlobalBranch::SpaceForm, Some(k)) => Some(if k > 0.0 { 1 } else { -1 }),
        _ => None,
    };
    if input.compact && !(global == GlobalBranch::SpaceForm && input.lambda > 0.0) {
        return Err(SmmsError::Contradiction(format!(
            "a compact weighted Einstein SMMS is a weighted sphere with λ > 0, got {global} with λ = {}",
            input.lambda
        )));
    }
    Ok((global, sign))
}

/// Both verdicts with the residuals they rest on.
pub fn classify(input: &ClassificationInput, tol: f64) -> Result<BranchVerdict> {
    let local = classify_local(input, tol);
    let (global, curvature_sign) = classify_global(input, tol)?;
    let r = &input.report;
    let mut residuals = BTreeMap::from([
        ("residual_P".to_string(), r.residual_p),
        ("residual_Einstein".to_string(), r.residual_einstein),
        ("residual_QE".to_string(), r.residual_qe),
        ("tracefree_P_residual".to_string(), r.residual_p_tracefree),
        ("tau_f_residual".to_string(), r.residual_tau_f),
        ("kappa_spread".to_string(), r.kappa_spread),
        ("density_spread".to_string(), r.density_spread()),
    ]);
    if let Some(s) = input.sectional_spread {
        residuals.insert("sectional_spread".into(), s);
    }
    if let Some(s) = input.fiber_be_residual {
        residuals.insert("fiber_bakry_emery".into(), s);
    }
    Ok(BranchVerdict {
        local: local.branch,
        global,
        curvature_sign,
        dominant: local.dominant,
        residuals,
    })
}
