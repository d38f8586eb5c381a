use crate::adcore::{Jet2, Jet2D, JetScalar, Profile1D};
use crate::error::{Result, SmmsError};
use crate::geometry::{PointSpec, WarpedMetric};

/// The density `v = e^{-f/m}` of an SMMS on a warped product.
#[derive(Debug, Clone)]
pub enum DensitySpec {
    /// `v = v(t)`.
    Radial { v: Profile1D },
    /// `v = φ(t) v_N(s) + α(t)`, with `v_N` a function of the nested fiber's
    /// coordinate (or a constant when the fiber is not nested).
    Split { v_fiber: Profile1D, alpha: Profile1D },
    /// `v = b(t) w(s)`.
    Separable { base: Profile1D, fiber: Profile1D },
    /// `f = c0 t + c1 s`, i.e. `v = exp(-(c0 t + c1 s)/m)`.
    FiberLinearExponent { c0: f64, c1: f64, m: f64 },
}

fn fiber_jet(w: &Profile1D, g: &WarpedMetric, p: &PointSpec) -> Result<Jet2D> {
    if let Some(c) = w.constant_value() {
        return Ok(Jet2D::constant(c));
    }
    if g.fiber.nested().is_none() {
        return Err(SmmsError::Form(
            "non-constant fiber factor needs a nested fiber".into(),
        ));
    }
    let s = p
        .s
        .ok_or_else(|| SmmsError::Domain("density needs a fiber coordinate s".into()))?;
    Ok(w.eval_jet(s)?.along_s())
}

impl DensitySpec {
    pub fn radial(v: Profile1D) -> Self {
        DensitySpec::Radial { v }
    }

    /// Density with constant `v`.
    pub fn constant(v: f64, g: &WarpedMetric) -> Self {
        DensitySpec::Radial {
            v: Profile1D::constant(v, *g.base()),
        }
    }

    /// True when `v` varies along the fiber.
    pub fn depends_on_fiber(&self) -> bool {
        match self {
            DensitySpec::Radial { .. } => false,
            DensitySpec::Split { v_fiber, .. } => !v_fiber.is_constant(),
            DensitySpec::Separable { fiber, .. } => !fiber.is_constant(),
            DensitySpec::FiberLinearExponent { c1, .. } => *c1 != 0.0,
        }
    }

    /// Check that the form is compatible with the metric.
    pub fn validate(&self, g: &WarpedMetric) -> Result<()> {
        if self.depends_on_fiber() && g.fiber.nested().is_none() {
            return Err(SmmsError::Form(
                "density varies along the fiber but the fiber is not a warped product".into(),
            ));
        }
        if let DensitySpec::FiberLinearExponent { m, .. } = self {
            if !(*m > 0.0) {
                return Err(SmmsError::Form(format!("exponent form needs m > 0, got {m}")));
            }
        }
        Ok(())
    }

    /// Coordinate jet of `v` in `(t, s)`.
    pub fn coordinate_jet(&self, g: &WarpedMetric, p: &PointSpec) -> Result<Jet2D> {
        let v = match self {
            DensitySpec::Radial { v } => v.eval_jet(p.t)?.along_t(),
            DensitySpec::Split { v_fiber, alpha } => {
                let phi = g.phi.eval_jet(p.t)?.along_t();
                phi * fiber_jet(v_fiber, g, p)? + alpha.eval_jet(p.t)?.along_t()
            }
            DensitySpec::Separable { base, fiber } => {
                base.eval_jet(p.t)?.along_t() * fiber_jet(fiber, g, p)?
            }
            DensitySpec::FiberLinearExponent { c0, c1, m } => {
                let t = Jet2::variable(p.t).along_t();
                let f = if *c1 == 0.0 {
                    t.scale(*c0)
                } else {
                    let s = p.s.ok_or_else(|| {
                        SmmsError::Domain("density needs a fiber coordinate s".into())
                    })?;
                    t.scale(*c0) + Jet2::variable(s).along_s().scale(*c1)
                };
                f.scale(-1.0 / m).exp()
            }
        };
        if !v.is_finite() {
            return Err(SmmsError::Eval(format!("non-finite density at {p:?}")));
        }
        if !(v.value > 0.0) {
            return Err(SmmsError::Positivity(format!("density v = {} at {p:?}", v.value)));
        }
        Ok(v)
    }

    pub fn describe(&self) -> String {
        match self {
            DensitySpec::Radial { v } => format!("v = {}", v.source()),
            DensitySpec::Split { v_fiber, alpha } => format!(
                "v = phi * ({}) + ({})",
                v_fiber.source(),
                alpha.source()
            ),
            DensitySpec::Separable { base, fiber } => {
                format!("v = ({}) * ({})", base.source(), fiber.source())
            }
            DensitySpec::FiberLinearExponent { c0, c1, .. } => format!("f = {c0}*t + {c1}*s"),
        }
    }
}
