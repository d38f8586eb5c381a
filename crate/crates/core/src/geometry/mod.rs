//! Warped-product metrics `dt² + φ(t)² g_N` and their curvature.
//!
//! All tensors are reported in an orthonormal frame adapted to the warped
//! structure: `e_t = ∂t`, then (for a nested fiber `ds² + ψ(s)² g_K`) the unit
//! vector along `∂s`, then the `K` block. For a fiber that is not nested the
//! `s` slot is just one more unit fiber vector and carries the same value as
//! the `K` block.

mod curvature;
mod hessian;
mod oracle;
mod tensor;

pub use curvature::{ricci, sectional, CurvatureAtPoint, Sectional};
pub use hessian::{
    coordinate_jet, grad_norm_sq, gradient_outer, hessian, hessian_radial, hessian_split,
    hessian_split_abstract, laplacian, FrameJet,
};
pub use oracle::coordinate_oracle_ricci;
pub(crate) use curvature::ricci_local as curvature_local;
pub(crate) use hessian::frame_jet as frame_jet_local;
pub use tensor::Sym2;

use crate::adcore::{Interval, Jet2, Profile1D};
use crate::error::{Result, SmmsError};

/// Maximum nesting depth of warped fibers.
pub const MAX_DEPTH: usize = 2;

/// Description of the fiber `(N, g_N)` of a warped product.
#[derive(Debug, Clone)]
pub enum FiberDesc {
    /// Simply connected space form of dimension `dim` and sectional curvature `curvature`.
    SpaceForm { dim: usize, curvature: f64 },
    /// An Einstein manifold known only through `Ric = beta * g`.
    EinsteinPlaceholder {
        dim: usize,
        beta: f64,
        /// Constants `(xi, c)` of a fiber Obata relation `Hes v_N = -(xi + c v_N) g_N`.
        obata: Option<(f64, f64)>,
        /// Norm of the fiber's own Weyl tensor (unit fiber metric), needed for
        /// weighted Weyl norms when `dim >= 4`.
        weyl_norm: Option<f64>,
    },
    /// A warped product `ds² + ψ(s)² g_K` in its own right.
    Nested(Box<WarpedMetric>),
}

impl FiberDesc {
    pub fn einstein(dim: usize, beta: f64) -> Self {
        FiberDesc::EinsteinPlaceholder {
            dim,
            beta,
            obata: None,
            weyl_norm: None,
        }
    }

    pub fn round_sphere(dim: usize) -> Self {
        FiberDesc::SpaceForm { dim, curvature: 1.0 }
    }

    pub fn dim(&self) -> usize {
        match self {
            FiberDesc::SpaceForm { dim, .. } | FiberDesc::EinsteinPlaceholder { dim, .. } => *dim,
            FiberDesc::Nested(h) => h.n(),
        }
    }

    /// Einstein constant when the fiber is Einstein by construction.
    pub fn beta(&self) -> Option<f64> {
        match self {
            FiberDesc::SpaceForm { dim, curvature } => Some((*dim as f64 - 1.0) * curvature),
            FiberDesc::EinsteinPlaceholder { beta, .. } => Some(*beta),
            FiberDesc::Nested(_) => None,
        }
    }

    /// Constant sectional curvature when it is determined by the data.
    ///
    /// Einstein manifolds of dimension at most three have constant curvature.
    pub fn constant_curvature(&self) -> Option<f64> {
        match self {
            FiberDesc::SpaceForm { curvature, .. } => Some(*curvature),
            FiberDesc::EinsteinPlaceholder { dim, beta, .. } if *dim <= 3 => {
                if *dim <= 1 {
                    Some(0.0)
                } else {
                    Some(beta / (*dim as f64 - 1.0))
                }
            }
            _ => None,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            FiberDesc::Nested(h) => h.depth(),
            _ => 0,
        }
    }

    pub fn nested(&self) -> Option<&WarpedMetric> {
        match self {
            FiberDesc::Nested(h) => Some(h),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            FiberDesc::SpaceForm { dim, curvature } => {
                format!("space form (dim {dim}, curvature {curvature})")
            }
            FiberDesc::EinsteinPlaceholder { dim, beta, .. } => {
                format!("Einstein (dim {dim}, beta {beta})")
            }
            FiberDesc::Nested(h) => format!("warped [{}]", h.describe()),
        }
    }
}

/// `g = dt² + φ(t)² g_N` over the interval on which `φ` is declared.
#[derive(Debug, Clone)]
pub struct WarpedMetric {
    pub phi: Profile1D,
    pub fiber: FiberDesc,
}

impl WarpedMetric {
    pub fn new(phi: Profile1D, fiber: FiberDesc) -> Result<Self> {
        let g = Self { phi, fiber };
        if g.depth() > MAX_DEPTH {
            return Err(SmmsError::Recursion { max: MAX_DEPTH });
        }
        if g.fiber.dim() == 0 {
            return Err(SmmsError::Domain("fiber dimension must be positive".into()));
        }
        Ok(g)
    }

    /// Total dimension.
    pub fn n(&self) -> usize {
        1 + self.fiber.dim()
    }

    /// 1 for a plain warped product, 2 when the fiber is itself warped.
    pub fn depth(&self) -> usize {
        1 + self.fiber.depth()
    }

    pub fn base(&self) -> &Interval {
        self.phi.domain()
    }

    /// Domain of the fiber coordinate `s` when the fiber is nested.
    pub fn fiber_domain(&self) -> Option<&Interval> {
        self.fiber.nested().map(|h| h.base())
    }

    pub fn describe(&self) -> String {
        format!(
            "dt^2 + ({})^2 g_N on {}, N = {}",
            self.phi.source(),
            self.base().describe(),
            self.fiber.describe()
        )
    }

    /// Sampled positivity of the warping functions (and nested warpings).
    pub fn check_positive(&self, k: usize, margin: f64, cap: f64) -> Result<()> {
        self.phi.check_positive(k, margin, cap, "warping function")?;
        if let Some(h) = self.fiber.nested() {
            h.check_positive(k, margin, cap)?;
        }
        Ok(())
    }

    /// Warping jets at a point: `φ(t)` and, for a nested fiber, `ψ(s)`.
    pub(crate) fn local(&self, p: &PointSpec) -> Result<Local> {
        let phi = self.phi.eval_jet(p.t)?;
        if !(phi.value > 0.0) {
            return Err(SmmsError::Positivity(format!(
                "warping function {} at t = {}",
                phi.value, p.t
            )));
        }
        let inner = match &self.fiber {
            FiberDesc::Nested(h) => {
                let s = p.s.ok_or_else(|| {
                    SmmsError::Domain("nested fiber requires a fiber coordinate s".into())
                })?;
                if h.fiber.depth() > 0 {
                    return Err(SmmsError::Recursion { max: MAX_DEPTH });
                }
                let psi = h.phi.eval_jet(s)?;
                if !(psi.value > 0.0) {
                    return Err(SmmsError::Positivity(format!(
                        "fiber warping function {} at s = {s}",
                        psi.value
                    )));
                }
                Some(Inner {
                    psi,
                    k: h.fiber.dim(),
                    beta_k: h.fiber.beta().unwrap_or(0.0),
                    curv_k: h.fiber.constant_curvature(),
                })
            }
            _ => None,
        };
        Ok(Local {
            n: self.n(),
            phi,
            inner,
        })
    }
}

/// Evaluated warping data at one point.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Local {
    pub n: usize,
    pub phi: Jet2,
    pub inner: Option<Inner>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Inner {
    pub psi: Jet2,
    pub k: usize,
    pub beta_k: f64,
    pub curv_k: Option<f64>,
}

/// A point of the warped product: base coordinate `t` and, when a second
/// coordinate is active, the fiber coordinate `s`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PointSpec {
    pub t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
}

impl PointSpec {
    pub fn t(t: f64) -> Self {
        Self { t, s: None }
    }

    pub fn ts(t: f64, s: f64) -> Self {
        Self { t, s: Some(s) }
    }
}
