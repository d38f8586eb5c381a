//! `catalog list` and `catalog make`.

use smms_core::catalog::{make, FamilySpec, FamilyTag};

use crate::config::{
    BranchConfig, Config, ConformalConfig, ExpectationConfig, FamilyConfig, GridConfig, Tolerances, SCHEMA,
};
use crate::error::CliResult;

/// One line per family: tag and default parameters.
pub fn list() -> String {
    let mut out = String::new();
    for tag in FamilyTag::ALL {
        let params: Vec<String> = tag.defaults().iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&format!("{:<28}{}\n", tag.name(), params.join(" ")));
    }
    out
}

/// A complete config for a family, with its closed-form expectations.
pub fn make_config(tag: FamilyTag, spec: FamilySpec) -> CliResult<Config> {
    let b = make(&spec)?;
    let e = b.expected;
    Ok(Config {
        schema: SCHEMA,
        family: Some(FamilyConfig {
            tag,
            params: spec.resolved()?,
        }),
        custom: None,
        grid: GridConfig::default(),
        expectations: ExpectationConfig {
            lambda: Some(e.lambda),
            kappa: Some(e.kappa),
            mu: (!e.mu_inert).then_some(e.mu),
            branch: Some(BranchConfig {
                local: Some(e.local),
                global: Some(e.global),
            }),
            lambda_hat: e.lambda_hat.filter(|_| b.factor.is_some()),
        },
        conformal: b.factor.as_ref().map(|_| ConformalConfig { u: "paired".into() }),
        tolerances: Tolerances::default(),
        complete: Some(b.complete),
        compact: Some(b.compact),
    })
}
