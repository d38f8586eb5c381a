use serde::{Deserialize, Serialize};

use super::{FiberDesc, Local, PointSpec, Sym2, WarpedMetric};
use crate::error::Result;

/// Ricci tensor and scalar curvature at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureAtPoint {
    pub rho: Sym2,
    pub tau: f64,
}

impl CurvatureAtPoint {
    pub fn rho_tt(&self) -> f64 {
        self.rho.tt
    }

    /// Coefficient against the metric on the (first) fiber block.
    pub fn rho_fiber(&self) -> f64 {
        self.rho.ss
    }

    pub fn rho_mixed(&self) -> f64 {
        self.rho.ts
    }
}

/// Ricci curvature of a warped product from the closed warped-product formulas.
///
/// `ρ(∂t,∂t) = -(n-1) φ''/φ` and, for unit fiber `X`,
/// `ρ(X,X) = ρ_N(X̃,X̃)/φ² - (φ''/φ + (n-2) φ'²/φ²)` where `X̃ = φX` is unit
/// for `g_N`. A nested fiber is resolved first with the same formulas.
pub fn ricci(g: &WarpedMetric, p: &PointSpec) -> Result<CurvatureAtPoint> {
    let loc = g.local(p)?;
    Ok(ricci_local(&loc, g.fiber.beta()))
}

pub(crate) fn ricci_local(loc: &Local, beta: Option<f64>) -> CurvatureAtPoint {
    let n = loc.n as f64;
    let Local { phi, .. } = *loc;
    let (f, f1, f2) = (phi.value, phi.d1, phi.d2);
    let radial = f2 / f + (n - 2.0) * f1 * f1 / (f * f);
    let tt = -(n - 1.0) * f2 / f;
    let (ss, kk) = match loc.inner {
        None => {
            let b = beta.unwrap_or(0.0);
            let r = b / (f * f) - radial;
            (r, r)
        }
        Some(inner) => {
            let k = inner.k as f64;
            let (p0, p1, p2) = (inner.psi.value, inner.psi.d1, inner.psi.d2);
            let h_ss = -k * p2 / p0;
            let h_kk = inner.beta_k / (p0 * p0) - (p2 / p0 + (k - 1.0) * p1 * p1 / (p0 * p0));
            (h_ss / (f * f) - radial, h_kk / (f * f) - radial)
        }
    };
    let rho = Sym2::new(tt, 0.0, ss, kk);
    CurvatureAtPoint {
        rho,
        tau: rho.trace(loc.n),
    }
}

/// Sectional curvatures of the coordinate planes of the adapted frame.
///
/// The curvature operator of a (doubly) warped product is diagonal on these
/// planes, apart from the Weyl part of an Einstein fiber of dimension at
/// least four, which is reported separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sectional {
    pub n: usize,
    /// `K(e_t, e_s)`.
    pub t_s: f64,
    /// `K(e_t, e_a)` for `e_a` in the `K` block.
    pub t_k: f64,
    /// `K(e_s, e_a)`.
    pub s_k: f64,
    /// `K(e_a, e_b)` within the `K` block.
    pub k_k: f64,
    /// Norm of the fiber's own Weyl tensor seen in `g`, when known.
    pub fiber_weyl: Option<f64>,
}

impl Sectional {
    /// Sectional curvature of the plane spanned by frame vectors `i != j`.
    pub fn pair(&self, i: usize, j: usize) -> f64 {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        match (a, b) {
            (0, 1) => self.t_s,
            (0, _) => self.t_k,
            (1, _) => self.s_k,
            _ => self.k_k,
        }
    }

    /// Values over all plane types that actually occur in dimension `n`.
    pub fn values(&self) -> Vec<f64> {
        let mut out = vec![self.t_s];
        if self.n >= 3 {
            out.push(self.t_k);
            out.push(self.s_k);
        }
        if self.n >= 4 {
            out.push(self.k_k);
        }
        out
    }
}

pub fn sectional(g: &WarpedMetric, p: &PointSpec) -> Result<Sectional> {
    let loc = g.local(p)?;
    let (f, f1, f2) = (loc.phi.value, loc.phi.d1, loc.phi.d2);
    let k_t = -f2 / f;
    let weyl_of = |fib: &FiberDesc, scale: f64| -> Option<f64> {
        match fib {
            FiberDesc::SpaceForm { .. } => Some(0.0),
            FiberDesc::EinsteinPlaceholder { dim, weyl_norm, .. } => {
                if *dim <= 3 {
                    Some(0.0)
                } else {
                    weyl_norm.map(|w| w / (scale * scale))
                }
            }
            FiberDesc::Nested(_) => Some(0.0),
        }
    };
    let average = |fib: &FiberDesc| -> f64 {
        fib.constant_curvature().unwrap_or_else(|| {
            let d = fib.dim() as f64;
            fib.beta().unwrap_or(0.0) / (d - 1.0)
        })
    };
    Ok(match &g.fiber {
        FiberDesc::Nested(h) => {
            let inner = loc.inner.expect("nested fiber has inner data");
            let (p0, p1, p2) = (inner.psi.value, inner.psi.d1, inner.psi.d2);
            let kh_sa = -p2 / p0;
            let kh_ab = (inner.curv_k.unwrap_or_else(|| average(&h.fiber)) - p1 * p1) / (p0 * p0);
            Sectional {
                n: loc.n,
                t_s: k_t,
                t_k: k_t,
                s_k: (kh_sa - f1 * f1) / (f * f),
                k_k: (kh_ab - f1 * f1) / (f * f),
                fiber_weyl: weyl_of(&h.fiber, f * p0),
            }
        }
        fib => {
            let kn = (average(fib) - f1 * f1) / (f * f);
            Sectional {
                n: loc.n,
                t_s: k_t,
                t_k: k_t,
                s_k: kn,
                k_k: kn,
                fiber_weyl: weyl_of(fib, f),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adcore::{Interval, Profile1D};
    use std::f64::consts::{FRAC_PI_3, PI};

    fn warped(src: &str, domain: Interval, fiber: FiberDesc) -> WarpedMetric {
        WarpedMetric::new(Profile1D::parse(src, domain).unwrap(), fiber).unwrap()
    }

    #[test]
    fn unit_three_sphere() {
        let g = warped("sin(t)", Interval::open(0.0, PI), FiberDesc::round_sphere(2));
        let c = ricci(&g, &PointSpec::t(FRAC_PI_3)).unwrap();
        assert!((c.rho.tt - 2.0).abs() < 1e-14);
        assert!((c.rho.ss - 2.0).abs() < 1e-14);
        assert!((c.tau - 6.0).abs() < 1e-13);
    }

    #[test]
    fn euclidean_space_is_flat() {
        let g = warped("t", Interval::positive_half_line(), FiberDesc::round_sphere(3));
        for t in [0.3, 1.0, 7.5] {
            let c = ricci(&g, &PointSpec::t(t)).unwrap();
            assert!(c.rho.max_abs() < 1e-14 && c.tau.abs() < 1e-13);
        }
    }

    #[test]
    fn exponential_warp_over_flat_fiber() {
        let g = warped("exp(t)", Interval::real_line(), FiberDesc::einstein(2, 0.0));
        let c = ricci(&g, &PointSpec::t(0.0)).unwrap();
        assert_eq!((c.rho.tt, c.rho.ss), (-2.0, -2.0));
    }

    #[test]
    fn nested_round_sphere_matches_plain_sphere() {
        // S^3 written as dt² + sin²t (dθ² + sin²θ dϕ²)
        let inner = warped("sin(theta)", Interval::open(0.0, PI), FiberDesc::round_sphere(1));
        let g = warped("sin(t)", Interval::open(0.0, PI), FiberDesc::Nested(Box::new(inner)));
        let c = ricci(&g, &PointSpec::ts(1.1, 0.4)).unwrap();
        for x in [c.rho.tt, c.rho.ss, c.rho.kk] {
            assert!((x - 2.0).abs() < 1e-13);
        }
        let k = sectional(&g, &PointSpec::ts(1.1, 0.4)).unwrap();
        assert!(k.values().iter().all(|x| (x - 1.0).abs() < 1e-13));
    }

    #[test]
    fn missing_fiber_coordinate_is_a_domain_error() {
        let inner = warped("sin(theta)", Interval::open(0.0, PI), FiberDesc::round_sphere(1));
        let g = warped("sin(t)", Interval::open(0.0, PI), FiberDesc::Nested(Box::new(inner)));
        assert!(ricci(&g, &PointSpec::t(1.0)).is_err());
    }
}
