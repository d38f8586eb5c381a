//! Weighted conformal changes `ĝ = u⁻²g`, `v̂ = u⁻¹v` by radial factors.
//!
//! The image metric `u⁻²(dt² + φ²g_N)` is put back into warped form over the
//! arc-length coordinate `t̂ = ∫ dt/u` with warping `φ̂ = φ/u`. Tensors of the
//! image are compared with the original ones in the original orthonormal
//! frame, where a component of the image is `u⁻²` times its component in
//! the image's own frame.

mod laws;
mod quad;

pub use laws::{
    be_ricci_transform_check, involution_residual, law_residuals, ricci_transform_check,
    schouten_transform_check, LawResiduals,
};
pub use quad::{integrate, ArcLength, QUAD_TOL};

use std::sync::Arc;

use crate::adcore::{parse_expr, Expr, Interval, Profile1D, DEFAULT_CAP};
use crate::error::{Result, SmmsError};
use crate::geometry::{PointSpec, WarpedMetric};
use crate::weighted::{DensitySpec, Smms};

/// Number of samples used for the positivity check of `u`.
const POSITIVITY_SAMPLES: usize = 10_000;

/// A positive radial conformal factor.
#[derive(Debug, Clone)]
pub struct ConformalFactor {
    pub u: Profile1D,
    pub nonconstant: bool,
}

impl ConformalFactor {
    /// Wrap `u`; only functions of the base coordinate are accepted.
    pub fn new(u: Profile1D) -> Result<Self> {
        if u.var() != "t" && !u.is_constant() {
            return Err(SmmsError::Unsupported(format!(
                "conformal factor must depend on the base coordinate t only, got a function of {}",
                u.var()
            )));
        }
        Ok(Self {
            nonconstant: !u.is_constant(),
            u,
        })
    }

    pub fn parse(src: &str, domain: Interval) -> Result<Self> {
        let (e, var) = parse_expr(src)?;
        if let Some(v) = var.filter(|v| v != "t") {
            return Err(SmmsError::Unsupported(format!(
                "conformal factor `{src}` depends on {v}, not on the base coordinate t"
            )));
        }
        Self::new(Profile1D::from_expr(e, domain))
    }

    pub fn constant(c: f64, domain: Interval) -> Self {
        Self {
            u: Profile1D::constant(c, domain),
            nonconstant: false,
        }
    }

    /// Sampled positivity on the base window.
    pub fn check_positive(&self, domain: &Interval, cap: f64) -> Result<()> {
        self.u
            .clone()
            .with_domain(domain.intersect(self.u.domain()))
            .check_positive(POSITIVITY_SAMPLES, 1e-6, cap, "conformal factor u")
    }
}

/// The image of an SMMS under a conformal change.
#[derive(Debug, Clone)]
pub struct TransformedSmms {
    pub smms: Smms,
    pub factor: ConformalFactor,
    pub map: Arc<ArcLength>,
}

impl TransformedSmms {
    /// Image of a point of the original space.
    pub fn map_point(&self, p: &PointSpec) -> Result<PointSpec> {
        Ok(PointSpec {
            t: self.map.forward(p.t)?,
            s: p.s,
        })
    }

    /// Preimage of a point of the image space.
    pub fn unmap_point(&self, p: &PointSpec) -> Result<PointSpec> {
        Ok(PointSpec {
            t: self.map.inverse(p.t)?,
            s: p.s,
        })
    }

    /// `u⁻¹` written in the image coordinate; applying it undoes this change.
    pub fn inverse_factor(&self) -> ConformalFactor {
        ConformalFactor {
            u: quad::reparam(&self.factor.u.recip(), &self.map),
            nonconstant: self.factor.nonconstant,
        }
    }
}

/// Apply `u` with the default truncation of unbounded base sides.
pub fn apply(smms: &Smms, u: &ConformalFactor) -> Result<TransformedSmms> {
    apply_with_cap(smms, u, DEFAULT_CAP)
}

/// Apply `u`, truncating unbounded base sides at `±cap`.
pub fn apply_with_cap(smms: &Smms, u: &ConformalFactor, cap: f64) -> Result<TransformedSmms> {
    let base = *smms.metric.base();
    u.check_positive(&base, cap)?;
    let uu = u.u.clone().with_domain(base.intersect(u.u.domain()));
    let map = Arc::new(ArcLength::new(&uu, &base, cap)?);
    let re = |p: &Profile1D| quad::reparam(&p.div(&uu).with_domain(*map.window()), &map);

    let phi = re(&smms.metric.phi).with_var(smms.metric.phi.var());
    let metric = WarpedMetric::new(phi, smms.metric.fiber.clone())?;
    let density = match &smms.density {
        DensitySpec::Radial { v } => DensitySpec::Radial { v: re(v) },
        DensitySpec::Split { v_fiber, alpha } => DensitySpec::Split {
            v_fiber: v_fiber.clone(),
            alpha: re(alpha),
        },
        DensitySpec::Separable { base: b, fiber } => DensitySpec::Separable {
            base: re(b),
            fiber: fiber.clone(),
        },
        DensitySpec::FiberLinearExponent { c0, c1, m } => {
            let t = Expr::var;
            let s = Expr::var;
            let b = Profile1D::from_expr((-(*c0 / m) * t()).exp(), base);
            let dom = smms
                .metric
                .fiber_domain()
                .copied()
                .unwrap_or(Interval::real_line());
            DensitySpec::Separable {
                base: re(&b),
                fiber: Profile1D::from_expr((-(*c1 / m) * s()).exp(), dom).with_var("s"),
            }
        }
    };
    let mut params = smms.params;
    params.lambda = None;
    params.kappa = None;
    Ok(TransformedSmms {
        smms: Smms::new(metric, density, params)?,
        factor: u.clone(),
        map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adcore::GridSpec;
    use crate::geometry::FiberDesc;
    use crate::weighted::SmmsParams;
    use std::f64::consts::PI;

    fn sphere(a: f64, b: f64) -> Smms {
        let dom = Interval::open(0.0, PI);
        let g = WarpedMetric::new(Profile1D::parse("sin(t)", dom).unwrap(), FiberDesc::round_sphere(2)).unwrap();
        let v = Profile1D::parse(&format!("{a} + {b}*cos(t)"), dom).unwrap();
        Smms::new(g, DensitySpec::radial(v), SmmsParams::new(3, 2.0, b * b - a * a)).unwrap()
    }

    #[test]
    fn unit_factor_is_the_identity() {
        let s = sphere(2.0, 1.0);
        let t = apply(&s, &ConformalFactor::constant(1.0, *s.metric.base())).unwrap();
        for x in [0.3, 1.0, 2.9] {
            let p = PointSpec::t(x);
            let (a, b) = (s.point(&p).unwrap(), t.smms.point(&t.map_point(&p).unwrap()).unwrap());
            assert!((t.map_point(&p).unwrap().t - x).abs() < 1e-13);
            assert!((a.rho_f - b.rho_f).max_abs() < 1e-12);
            assert!((a.tau_f - b.tau_f).abs() < 1e-12);
        }
    }

    #[test]
    fn density_as_factor_trivializes() {
        let s = sphere(2.0, 1.0);
        let u = ConformalFactor::new(match &s.density {
            DensitySpec::Radial { v } => v.clone(),
            _ => unreachable!(),
        })
        .unwrap();
        let t = apply(&s, &u).unwrap();
        let r = t.smms.report(1.5, &GridSpec::with_k(200)).unwrap();
        assert!(r.f_spread < 1e-14, "{}", r.f_spread);
        assert!(r.residual_p < 1e-8, "{}", r.residual_p);
    }

    #[test]
    fn rejects_nonpositive_and_nonradial_factors() {
        let s = sphere(2.0, 1.0);
        let u = ConformalFactor::parse("cos(t)", *s.metric.base()).unwrap();
        assert!(matches!(apply(&s, &u), Err(SmmsError::Positivity(_))));
        assert!(matches!(
            ConformalFactor::parse("1 + s^2", Interval::real_line()),
            Err(SmmsError::Unsupported(_))
        ));
    }
}
