//! The `verify` and `conformal` commands and their JSON report.

use std::collections::BTreeMap;

use serde::Serialize;

use smms_core::adcore::GridSpec;
use smms_core::classify::{classify, ClassificationInput, GlobalBranch, LocalBranch};
use smms_core::conformal::{apply_with_cap, law_residuals, ConformalFactor, LawResiduals, TransformedSmms};
use smms_core::weighted::{ResidualKind, Smms, WeightedReport};
use smms_core::SmmsError;

use crate::config::{Config, Instance, Tolerances};
use crate::error::{CliError, CliResult};

/// Law residuals are computed on at most this many base points.
const LAW_GRID: usize = 64;

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: &'static str,
    pub instance: String,
    pub grid: GridSpec,
    pub tolerances: Tolerances,
    pub lambda: Sourced,
    pub residuals: BTreeMap<&'static str, f64>,
    pub constants: Constants,
    pub density: DensityStats,
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conformal: Option<ConformalSection>,
    pub flags: Flags,
    pub expectations: Vec<Check>,
    pub failed: Vec<String>,
    pub ok: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Sourced {
    pub value: f64,
    pub source: &'static str,
}

#[derive(Debug, Serialize)]
pub struct Constants {
    pub kappa: f64,
    pub kappa_spread: f64,
    pub lambda_estimate: f64,
    /// Fitted from the data; absent when `m = 1`.
    pub mu: Option<f64>,
    pub mu_inert: bool,
}

#[derive(Debug, Serialize)]
pub struct DensityStats {
    pub v_min: f64,
    pub v_max: f64,
    pub v_spread: f64,
    pub f_spread: f64,
}

#[derive(Debug, Serialize)]
pub struct Verdict {
    pub local: Option<LocalBranch>,
    pub global: Option<GlobalBranch>,
    pub curvature_sign: Option<i8>,
    pub dominant: Option<(String, f64)>,
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct ConformalSection {
    pub u: String,
    pub image_base: String,
    pub lambda_hat: Sourced,
    pub f_hat_spread: f64,
    pub lambda_hat_estimate: f64,
    pub laws: LawResiduals,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Flags {
    pub complete: bool,
    pub compact: bool,
}

/// One declared expectation and its outcome.
#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: serde_json::Value,
    pub observed: serde_json::Value,
    pub tolerance: Option<f64>,
    pub met: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn below(name: &str, observed: f64, tol: f64, note: Option<String>) -> Self {
        Check {
            name: name.into(),
            expected: 0.0.into(),
            observed: num(observed),
            tolerance: Some(tol),
            met: observed < tol,
            note,
        }
    }

    /// `|observed - expected| <= tol max(1, |expected|)`.
    fn close(name: &str, expected: f64, observed: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            expected: num(expected),
            observed: num(observed),
            tolerance: Some(tol),
            met: (observed - expected).abs() <= tol * expected.abs().max(1.0),
            note: None,
        }
    }
}

fn num(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x).map_or_else(|| x.to_string().into(), Into::into)
}

/// Run-time options shared by the commands.
#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub tol: Option<f64>,
    pub grid: Option<usize>,
}

struct Context {
    config: Config,
    inst: Instance,
    grid: GridSpec,
    tol: Tolerances,
}

impl Context {
    fn new(config: Config, opts: Options) -> CliResult<Self> {
        let inst = config.instance()?;
        Ok(Self {
            grid: config.grid.spec(opts.grid)?,
            tol: config.tolerances.overridden(opts.tol)?,
            inst,
            config,
        })
    }

    fn flags(&self) -> Flags {
        Flags {
            complete: self.inst.complete || self.inst.compact,
            compact: self.inst.compact,
        }
    }

    /// Declared, then the family's, then the instance's own, then estimated.
    fn lambda(&self) -> CliResult<Sourced> {
        if let Some(value) = self.config.expectations.lambda {
            return Ok(Sourced { value, source: "expectations" });
        }
        if let Some(b) = &self.inst.bundle {
            return Ok(Sourced { value: b.expected.lambda, source: "family" });
        }
        if let Some(value) = self.inst.smms.params.lambda {
            return Ok(Sourced { value, source: "params" });
        }
        Ok(Sourced {
            value: estimate(&self.inst.smms, &self.grid)?,
            source: "estimated",
        })
    }
}

fn estimate(smms: &Smms, grid: &GridSpec) -> CliResult<f64> {
    Ok(smms.report(0.0, grid)?.lambda_estimate)
}

fn residual_map(r: &WeightedReport) -> BTreeMap<&'static str, f64> {
    let mut out: BTreeMap<&'static str, f64> = [
        ResidualKind::Schouten,
        ResidualKind::QuasiEinstein,
        ResidualKind::Einstein,
        ResidualKind::TracefreeSchouten,
        ResidualKind::TauF,
    ]
    .into_iter()
    .map(|k| (k.name(), r.residual(k)))
    .collect();
    out.insert("max_mixed_ricci", r.max_mixed);
    if let Some(w) = r.weyl_norm {
        out.insert("weyl_norm", w);
    }
    out
}

/// The larger of the two parts `residual_P` splits into.
fn dominant_part(r: &WeightedReport) -> &'static str {
    if r.residual_tau_f >= r.residual_p_tracefree {
        ResidualKind::TauF.name()
    } else {
        ResidualKind::TracefreeSchouten.name()
    }
}

fn residual_check(name: &str, r: &WeightedReport, tol: f64) -> Check {
    let mut c = Check::below(name, r.residual_p, tol, None);
    if !c.met {
        let part = dominant_part(r);
        c.note = Some(format!("dominated by {part} = {:e}", r.residual(kind_of(part))));
    }
    c
}

fn kind_of(name: &str) -> ResidualKind {
    if name == ResidualKind::TauF.name() {
        ResidualKind::TauF
    } else {
        ResidualKind::TracefreeSchouten
    }
}

fn verdict_of(smms: &Smms, r: &WeightedReport, flags: Flags, grid: &GridSpec, tol: f64) -> CliResult<Verdict> {
    let input = ClassificationInput::gather(smms, r, flags.complete, flags.compact, grid, tol)?;
    Ok(match classify(&input, tol) {
        Ok(v) => Verdict {
            local: Some(v.local),
            global: Some(v.global),
            curvature_sign: v.curvature_sign,
            dominant: v.dominant,
            error: None,
        },
        Err(e @ SmmsError::Contradiction(_)) => Verdict {
            local: None,
            global: None,
            curvature_sign: None,
            dominant: None,
            error: Some(e.to_string()),
        },
        Err(e) => return Err(e.into()),
    })
}

fn branch_checks(cfg: &Config, v: &Verdict) -> Vec<Check> {
    let Some(b) = cfg.expectations.branch else {
        return Vec::new();
    };
    let show = |x: Option<String>| x.map_or(serde_json::Value::Null, Into::into);
    let mut out = Vec::new();
    if let Some(l) = b.local {
        out.push(Check {
            name: "branch.local".into(),
            expected: l.to_string().into(),
            observed: show(v.local.map(|x| x.to_string())),
            tolerance: None,
            met: v.local == Some(l),
            note: v.error.clone(),
        });
    }
    if let Some(g) = b.global {
        out.push(Check {
            name: "branch.global".into(),
            expected: g.to_string().into(),
            observed: show(v.global.map(|x| x.to_string())),
            tolerance: None,
            met: v.global == Some(g),
            note: v.error.clone(),
        });
    }
    out
}

fn finish(mut r: Report) -> Report {
    r.failed = r.expectations.iter().filter(|c| !c.met).map(|c| c.name.clone()).collect();
    r.ok = r.failed.is_empty();
    r
}

fn constants_of(smms: &Smms, r: &WeightedReport, grid: &GridSpec) -> CliResult<Constants> {
    let mu = smms.estimate_mu(r.lambda, grid)?;
    Ok(Constants {
        kappa: r.kappa,
        kappa_spread: r.kappa_spread,
        lambda_estimate: r.lambda_estimate,
        mu,
        mu_inert: mu.is_none(),
    })
}

fn density_of(r: &WeightedReport) -> DensityStats {
    DensityStats {
        v_min: r.v_min,
        v_max: r.v_max,
        v_spread: r.density_spread(),
        f_spread: r.f_spread,
    }
}

/// Verify the declared instance against its expectations.
pub fn verify(config: Config, opts: Options) -> CliResult<Report> {
    let cx = Context::new(config, opts)?;
    let smms = &cx.inst.smms;
    let lambda = cx.lambda()?;
    let r = smms.report(lambda.value, &cx.grid)?;
    let flags = cx.flags();
    let constants = constants_of(smms, &r, &cx.grid)?;
    let verdict = verdict_of(smms, &r, flags, &cx.grid, cx.tol.residual)?;

    let exp = &cx.config.expectations;
    let mut checks = vec![residual_check("residual_P", &r, cx.tol.residual)];
    if let Some(k) = exp.kappa {
        checks.push(Check::close("kappa", k, r.kappa, cx.tol.constants));
    }
    if let Some(mu) = exp.mu {
        checks.push(match constants.mu {
            Some(fit) => Check::close("mu", mu, fit, cx.tol.constants),
            None => Check {
                name: "mu".into(),
                expected: num(mu),
                observed: serde_json::Value::Null,
                tolerance: None,
                met: true,
                note: Some("m = 1: mu does not enter the geometry".into()),
            },
        });
    }
    checks.extend(branch_checks(&cx.config, &verdict));
    let conformal = match &cx.config.conformal {
        Some(_) => {
            let (section, image, _) = conformal_image(&cx)?;
            checks.push(residual_check("conformal.residual_P", &image, cx.tol.residual));
            if cx.config.expectations.lambda_hat.is_some() || section.lambda_hat.source == "family" {
                checks.push(Check::close(
                    "lambda_hat",
                    section.lambda_hat.value,
                    section.lambda_hat_estimate,
                    cx.tol.constants,
                ));
            }
            Some(section)
        }
        None => None,
    };

    Ok(finish(Report {
        schema: crate::config::SCHEMA,
        command: "verify",
        instance: cx.inst.label.clone(),
        grid: cx.grid,
        tolerances: cx.tol,
        lambda,
        residuals: residual_map(&r),
        constants,
        density: density_of(&r),
        verdict: Some(verdict),
        conformal,
        flags,
        expectations: checks,
        failed: Vec::new(),
        ok: false,
    }))
}

fn factor_of(cx: &Context) -> CliResult<(ConformalFactor, String)> {
    let src = &cx.config.conformal.as_ref().expect("caller checked").u;
    if src.trim() == "paired" {
        let b = cx.inst.bundle.as_ref().ok_or_else(|| {
            CliError::Config("conformal factor `paired` needs a catalog family".into())
        })?;
        let u = b.factor.clone().ok_or_else(|| {
            CliError::Config(format!("family {} has no paired conformal factor", b.spec.tag))
        })?;
        let shown = u.u.source();
        return Ok((u, shown));
    }
    Ok((ConformalFactor::parse(src, *cx.inst.smms.metric.base())?, src.clone()))
}

/// Transform, then re-verify the image with the declared (or paired, or
/// estimated) `λ̂`.
fn conformal_image(cx: &Context) -> CliResult<(ConformalSection, WeightedReport, TransformedSmms)> {
    let (u, shown) = factor_of(cx)?;
    let img = apply_with_cap(&cx.inst.smms, &u, cx.grid.cap)?;
    let paired = cx.config.conformal.as_ref().is_some_and(|c| c.u.trim() == "paired");
    let lambda_hat = match (cx.config.expectations.lambda_hat, &cx.inst.bundle) {
        (Some(value), _) => Sourced { value, source: "expectations" },
        (None, Some(b)) if paired && b.expected.lambda_hat.is_some() => Sourced {
            value: b.expected.lambda_hat.unwrap(),
            source: "family",
        },
        _ => Sourced {
            value: estimate(&img.smms, &cx.grid)?,
            source: "estimated",
        },
    };
    let r = img.smms.report(lambda_hat.value, &cx.grid)?;
    let law_grid = GridSpec {
        k: cx.grid.k.min(LAW_GRID),
        ..cx.grid
    };
    let laws = law_residuals(&cx.inst.smms, &u, &law_grid)?;
    Ok((
        ConformalSection {
            u: shown,
            image_base: img.smms.metric.base().describe(),
            lambda_hat,
            f_hat_spread: r.f_spread,
            lambda_hat_estimate: r.lambda_estimate,
            laws,
        },
        r,
        img,
    ))
}

/// Apply the declared factor and verify the image.
pub fn conformal(config: Config, opts: Options) -> CliResult<Report> {
    if config.conformal.is_none() {
        return Err(CliError::Config("the conformal command needs a `conformal` section".into()));
    }
    let cx = Context::new(config, opts)?;
    let (section, r, img) = conformal_image(&cx)?;
    let flags = cx.flags();
    let constants = constants_of(&img.smms, &r, &cx.grid)?;
    let verdict = verdict_of(&img.smms, &r, flags, &cx.grid, cx.tol.residual)?;

    let mut checks = vec![residual_check("residual_P", &r, cx.tol.residual)];
    if section.lambda_hat.source != "estimated" {
        checks.push(Check::close(
            "lambda_hat",
            section.lambda_hat.value,
            r.lambda_estimate,
            cx.tol.constants,
        ));
    }
    // declared branches describe the original instance, so the image verdict is reported only

    Ok(finish(Report {
        schema: crate::config::SCHEMA,
        command: "conformal",
        instance: format!("image of {} under u = {}", cx.inst.label, section.u),
        grid: cx.grid,
        tolerances: cx.tol,
        lambda: section.lambda_hat,
        residuals: residual_map(&r),
        constants,
        density: density_of(&r),
        verdict: Some(verdict),
        conformal: Some(section),
        flags,
        expectations: checks,
        failed: Vec::new(),
        ok: false,
    }))
}
