//! JSON config schema and instance construction.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use smms_core::adcore::{parse_expr, GridSpec, Interval, Profile1D};
use smms_core::catalog::{make, Bundle, FamilySpec, FamilyTag};
use smms_core::classify::{GlobalBranch, LocalBranch};
use smms_core::geometry::{FiberDesc, WarpedMetric};
use smms_core::weighted::{DensitySpec, Smms, SmmsParams};

use crate::error::{CliError, CliResult};

pub const SCHEMA: u32 = 1;
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom: Option<CustomConfig>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub expectations: ExpectationConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conformal: Option<ConformalConfig>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compact: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub tag: FamilyTag,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomConfig {
    pub metric: MetricConfig,
    pub density: DensityConfig,
    pub params: ParamsConfig,
}

/// `g = dt² + φ(t)² g_N` on `domain`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricConfig {
    pub phi: String,
    pub domain: String,
    pub fiber: FiberConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FiberConfig {
    SpaceForm { dim: usize, curvature: f64 },
    Einstein { dim: usize, beta: f64 },
    Nested(Box<MetricConfig>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DensityConfig {
    Radial { v: String },
    Split { v_fiber: String, alpha: String },
    Separable { base: String, fiber: String },
    FiberLinearExponent { c0: f64, c1: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub n: usize,
    pub m: f64,
    #[serde(default)]
    pub mu: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<f64>,
}

impl GridConfig {
    pub fn spec(&self, k_override: Option<usize>) -> CliResult<GridSpec> {
        let d = GridSpec::default();
        let g = GridSpec {
            k: k_override.or(self.k).unwrap_or(d.k),
            margin: self.margin.unwrap_or(d.margin),
            cap: self.cap.unwrap_or(d.cap),
        };
        if g.k < 2 || !(0.0..0.5).contains(&g.margin) || !(g.cap > 0.0) {
            return Err(CliError::Config(format!(
                "grid needs k >= 2, 0 <= margin < 0.5 and cap > 0, got {g:?}"
            )));
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectationConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<BranchConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_hat: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local: Option<LocalBranch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub global: Option<GlobalBranch>,
}

/// `u` is an expression in the base coordinate, or `"paired"` for the
/// factor a catalog family comes with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConformalConfig {
    pub u: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_tol")]
    pub residual: f64,
    #[serde(default = "default_tol")]
    pub constants: f64,
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: DEFAULT_TOL,
            constants: DEFAULT_TOL,
        }
    }
}

impl Tolerances {
    /// A `--tol` flag replaces both tolerances.
    pub fn overridden(self, tol: Option<f64>) -> CliResult<Self> {
        let t = match tol {
            Some(t) => Self {
                residual: t,
                constants: t,
            },
            None => self,
        };
        if !(t.residual > 0.0) || !(t.constants > 0.0) {
            return Err(CliError::Config(format!("tolerances must be positive, got {t:?}")));
        }
        Ok(t)
    }
}

impl Config {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let c: Config = serde_json::from_str(text)?;
        if c.schema != SCHEMA {
            return Err(CliError::Config(format!("unsupported schema {}, expected {SCHEMA}", c.schema)));
        }
        match (&c.family, &c.custom) {
            (Some(_), None) | (None, Some(_)) => Ok(c),
            _ => Err(CliError::Config("exactly one of `family` and `custom` is required".into())),
        }
    }

    pub fn instance(&self) -> CliResult<Instance> {
        if let Some(f) = &self.family {
            let spec = FamilySpec {
                tag: f.tag,
                params: f.params.clone(),
            };
            let b = make(&spec)?;
            return Ok(Instance {
                smms: b.smms.clone(),
                label: format!("family {}", f.tag),
                complete: self.complete.unwrap_or(b.complete),
                compact: self.compact.unwrap_or(b.compact),
                bundle: Some(b),
            });
        }
        let c = self.custom.as_ref().expect("checked in from_json");
        let metric = c.metric.build()?;
        let density = c.density.build(&metric, c.params.m)?;
        let mut params = SmmsParams::new(c.params.n, c.params.m, c.params.mu);
        params.lambda = c.params.lambda;
        params.kappa = c.params.kappa;
        let smms = Smms::new(metric, density, params)?;
        Ok(Instance {
            label: format!("{} with {}", smms.metric.describe(), smms.density.describe()),
            smms,
            complete: self.complete.unwrap_or(false),
            compact: self.compact.unwrap_or(false),
            bundle: None,
        })
    }
}

/// A resolved instance together with its catalog bundle, if any.
pub struct Instance {
    pub smms: Smms,
    pub label: String,
    pub bundle: Option<Bundle>,
    pub complete: bool,
    pub compact: bool,
}

impl MetricConfig {
    fn build(&self) -> CliResult<WarpedMetric> {
        self.build_in(0)
    }

    fn build_in(&self, depth: usize) -> CliResult<WarpedMetric> {
        let dom = parse_interval(&self.domain)?;
        let mut phi = Profile1D::parse(&self.phi, dom)?;
        if depth > 0 && !mentions_var(&self.phi)? {
            phi = phi.with_var("s");
        }
        let fiber = match &self.fiber {
            FiberConfig::SpaceForm { dim, curvature } => FiberDesc::SpaceForm {
                dim: *dim,
                curvature: *curvature,
            },
            FiberConfig::Einstein { dim, beta } => FiberDesc::einstein(*dim, *beta),
            FiberConfig::Nested(h) => FiberDesc::Nested(Box::new(h.build_in(depth + 1)?)),
        };
        Ok(WarpedMetric::new(phi, fiber)?)
    }
}

fn mentions_var(src: &str) -> CliResult<bool> {
    Ok(parse_expr(src)?.1.is_some())
}

impl DensityConfig {
    fn build(&self, g: &WarpedMetric, m: f64) -> CliResult<DensitySpec> {
        let base = *g.base();
        let fiber_dom = g.fiber_domain().copied().unwrap_or_else(Interval::real_line);
        let on_fiber = |src: &str| -> CliResult<Profile1D> { Ok(Profile1D::parse(src, fiber_dom)?.with_var("s")) };
        Ok(match self {
            DensityConfig::Radial { v } => DensitySpec::radial(Profile1D::parse(v, base)?),
            DensityConfig::Split { v_fiber, alpha } => DensitySpec::Split {
                v_fiber: on_fiber(v_fiber)?,
                alpha: Profile1D::parse(alpha, base)?,
            },
            DensityConfig::Separable { base: b, fiber } => DensitySpec::Separable {
                base: Profile1D::parse(b, base)?,
                fiber: on_fiber(fiber)?,
            },
            DensityConfig::FiberLinearExponent { c0, c1 } => DensitySpec::FiberLinearExponent {
                c0: *c0,
                c1: *c1,
                m,
            },
        })
    }
}

/// Parse `(a, b)`, `[a, b]` and mixed forms; endpoints are constant
/// expressions or `±inf`.
pub fn parse_interval(src: &str) -> CliResult<Interval> {
    let s = src.trim();
    let bad = || CliError::Config(format!("malformed interval `{src}`"));
    let lo_open = match s.chars().next() {
        Some('(') => true,
        Some('[') => false,
        _ => return Err(bad()),
    };
    let hi_open = match s.chars().last() {
        Some(')') => true,
        Some(']') => false,
        _ => return Err(bad()),
    };
    let inner = &s[1..s.len() - 1];
    let (a, b) = inner.split_once(',').ok_or_else(bad)?;
    let (lo, hi) = (endpoint(a)?, endpoint(b)?);
    if !(lo < hi) {
        return Err(CliError::Config(format!("interval `{src}` is empty")));
    }
    Ok(Interval {
        lo,
        hi,
        lo_open: lo_open || lo.is_infinite(),
        hi_open: hi_open || hi.is_infinite(),
    })
}

fn endpoint(src: &str) -> CliResult<f64> {
    match src.trim() {
        "inf" | "+inf" | "infinity" | "+infinity" => return Ok(f64::INFINITY),
        "-inf" | "-infinity" => return Ok(f64::NEG_INFINITY),
        _ => {}
    }
    let (e, var) = parse_expr(src)?;
    if var.is_some() {
        return Err(CliError::Config(format!("interval endpoint `{}` is not a constant", src.trim())));
    }
    let x: f64 = e.eval(0.0)?;
    if x.is_nan() {
        return Err(CliError::Config(format!("interval endpoint `{}` is not a number", src.trim())));
    }
    Ok(x)
}

/// Parse `name=value` pairs from the command line.
pub fn parse_assignments(items: &[String]) -> CliResult<BTreeMap<String, f64>> {
    items
        .iter()
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("expected name=value, got `{kv}`")))?;
            let x = endpoint(v)?;
            if !x.is_finite() {
                return Err(CliError::Config(format!("parameter {k} must be finite")));
            }
            Ok((k.trim().to_string(), x))
        })
        .collect()
}
