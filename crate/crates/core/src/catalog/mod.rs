//! Explicit weighted Einstein families with their closed-form constants and
//! paired conformal factors.

mod families;

pub use families::{
    exp_einstein_warped, quasi_einstein_product, rotated_sphere_density, schwarzschild_fiber_warped,
    table_row, trivial_space_form, weighted_euclidean, weighted_hyperbolic, weighted_sphere,
    TableConstants,
};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classify::{GlobalBranch, LocalBranch};
use crate::conformal::ConformalFactor;
use crate::error::{Result, SmmsError};
use crate::weighted::Smms;

/// Family identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyTag {
    WeightedSphere,
    WeightedEuclidean,
    WeightedHyperbolic,
    TableRow,
    ExpEinsteinWarped,
    QuasiEinsteinProduct,
    SchwarzschildFiberWarped,
    RotatedSphereDensity,
    TrivialSpaceForm,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 9] = [
        FamilyTag::WeightedSphere,
        FamilyTag::WeightedEuclidean,
        FamilyTag::WeightedHyperbolic,
        FamilyTag::TableRow,
        FamilyTag::ExpEinsteinWarped,
        FamilyTag::QuasiEinsteinProduct,
        FamilyTag::SchwarzschildFiberWarped,
        FamilyTag::RotatedSphereDensity,
        FamilyTag::TrivialSpaceForm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::WeightedSphere => "weighted_sphere",
            FamilyTag::WeightedEuclidean => "weighted_euclidean",
            FamilyTag::WeightedHyperbolic => "weighted_hyperbolic",
            FamilyTag::TableRow => "table_row",
            FamilyTag::ExpEinsteinWarped => "exp_einstein_warped",
            FamilyTag::QuasiEinsteinProduct => "quasi_einstein_product",
            FamilyTag::SchwarzschildFiberWarped => "schwarzschild_fiber_warped",
            FamilyTag::RotatedSphereDensity => "rotated_sphere_density",
            FamilyTag::TrivialSpaceForm => "trivial_space_form",
        }
    }

    /// Default parameters; also the list of accepted names.
    pub fn defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            FamilyTag::WeightedSphere => &[("n", 3.0), ("m", 2.0), ("lambda", 0.5), ("A", 2.0), ("B", 1.0)],
            FamilyTag::WeightedEuclidean => &[("n", 4.0), ("m", 2.0), ("A", 1.0), ("B", 3.0)],
            FamilyTag::WeightedHyperbolic => {
                &[("n", 3.0), ("m", 2.0), ("lambda", -0.5), ("A", 0.0), ("B", 1.0)]
            }
            FamilyTag::TableRow => &[
                ("n", 3.0),
                ("m", 2.0),
                ("lambda", 0.5),
                ("a", 1.0),
                ("b", 0.0),
                ("c", 1.0),
                ("d", 1.0),
                ("kappa", 1.0),
                ("nu", 2.0),
                ("l", 1.0),
            ],
            FamilyTag::ExpEinsteinWarped => &[
                ("n", 3.0),
                ("m", 2.0),
                ("lambda", -0.5),
                ("A", 1.0),
                ("B", 1.0),
                ("kappa", -1.0),
                ("lambda_hat", -0.5),
            ],
            FamilyTag::QuasiEinsteinProduct => {
                &[("n", 4.0), ("m", 3.0), ("xi", 1.0), ("a", 1.0), ("b", 2.0)]
            }
            FamilyTag::SchwarzschildFiberWarped => &[("m", 3.0), ("lambda", -0.5), ("lambda_hat", -0.5)],
            FamilyTag::RotatedSphereDensity => &[
                ("n", 3.0),
                ("m", 2.0),
                ("lambda", 0.5),
                ("A", 0.25),
                ("B", 0.0),
                ("kappa", 2.0),
                ("nu", 2.0),
            ],
            FamilyTag::TrivialSpaceForm => &[("n", 3.0), ("m", 2.0), ("lambda", 0.5), ("f0", 0.0)],
        }
    }

    /// Optional parameters without a default.
    fn optional(self) -> &'static [&'static str] {
        match self {
            FamilyTag::TrivialSpaceForm => &["mu"],
            _ => &[],
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = SmmsError;

    fn from_str(s: &str) -> Result<Self> {
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| SmmsError::Admissibility(format!("unknown family `{s}`")))
    }
}

/// A family tag with parameter overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub tag: FamilyTag,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl FamilySpec {
    pub fn new(tag: FamilyTag) -> Self {
        Self {
            tag,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.into(), value);
        self
    }

    /// Defaults overlaid with the given parameters; unknown names are rejected.
    pub fn resolved(&self) -> Result<BTreeMap<String, f64>> {
        let mut out: BTreeMap<String, f64> =
            self.tag.defaults().iter().map(|(k, v)| (k.to_string(), *v)).collect();
        for (k, v) in &self.params {
            if !out.contains_key(k) && !self.tag.optional().contains(&k.as_str()) {
                return Err(SmmsError::Admissibility(format!(
                    "family {} has no parameter `{k}`",
                    self.tag
                )));
            }
            if !v.is_finite() {
                return Err(SmmsError::Admissibility(format!("parameter {k} = {v} is not finite")));
            }
            out.insert(k.clone(), *v);
        }
        Ok(out)
    }
}

/// Closed-form constants a bundle is expected to reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Expectations {
    pub lambda: f64,
    pub kappa: f64,
    pub mu: f64,
    /// `μ` has no effect (`m = 1`).
    pub mu_inert: bool,
    /// Einstein constant of the fiber, where the family fixes one.
    pub beta: Option<f64>,
    /// Weighted Einstein constant after the paired conformal change.
    pub lambda_hat: Option<f64>,
    pub local: LocalBranch,
    pub global: GlobalBranch,
}

/// A fully specified instance.
#[derive(Debug, Clone)]
pub struct Bundle {
    pub spec: FamilySpec,
    pub smms: Smms,
    pub expected: Expectations,
    pub factor: Option<ConformalFactor>,
    pub complete: bool,
    pub compact: bool,
}

/// Build the bundle for a family spec.
pub fn make(spec: &FamilySpec) -> Result<Bundle> {
    let p = spec.resolved()?;
    let g = |k: &str| p[k];
    let n = || -> Result<usize> {
        let n = g("n");
        if n.fract() != 0.0 || n < 2.0 {
            return Err(SmmsError::Admissibility(format!("n must be an integer >= 2, got {n}")));
        }
        Ok(n as usize)
    };
    let mut b = match spec.tag {
        FamilyTag::WeightedSphere => weighted_sphere(n()?, g("m"), g("lambda"), g("A"), g("B")),
        FamilyTag::WeightedEuclidean => weighted_euclidean(n()?, g("m"), g("A"), g("B")),
        FamilyTag::WeightedHyperbolic => weighted_hyperbolic(n()?, g("m"), g("lambda"), g("A"), g("B")),
        FamilyTag::TableRow => table_row(
            n()?,
            g("m"),
            g("lambda"),
            TableConstants {
                a: g("a"),
                b: g("b"),
                c: g("c"),
                d: g("d"),
                kappa: g("kappa"),
                nu: g("nu"),
                l: g("l"),
            },
        ),
        FamilyTag::ExpEinsteinWarped => exp_einstein_warped(
            n()?,
            g("m"),
            g("lambda"),
            g("A"),
            g("B"),
            g("kappa"),
            g("lambda_hat"),
        ),
        FamilyTag::QuasiEinsteinProduct => {
            quasi_einstein_product(n()?, g("m"), g("xi"), g("a"), g("b"))
        }
        FamilyTag::SchwarzschildFiberWarped => {
            schwarzschild_fiber_warped(g("m"), g("lambda"), g("lambda_hat"))
        }
        FamilyTag::RotatedSphereDensity => rotated_sphere_density(
            n()?,
            g("m"),
            g("lambda"),
            g("A"),
            g("B"),
            g("kappa"),
            g("nu"),
        ),
        FamilyTag::TrivialSpaceForm => {
            trivial_space_form(n()?, g("m"), g("lambda"), g("f0"), p.get("mu").copied())
        }
    }?;
    b.spec = spec.clone();
    Ok(b)
}
