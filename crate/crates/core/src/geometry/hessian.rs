use super::{Local, PointSpec, Sym2, WarpedMetric};
use crate::adcore::{Jet2, Jet2D, Profile1D};
use crate::error::{Result, SmmsError};
use crate::weighted::DensitySpec;

/// Value, gradient and Hessian of a function in the adapted orthonormal frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameJet {
    pub value: f64,
    /// Components along `e_t` and `e_s`.
    pub grad: [f64; 2],
    pub hess: Sym2,
}

impl FrameJet {
    pub fn grad_norm_sq(&self) -> f64 {
        self.grad[0] * self.grad[0] + self.grad[1] * self.grad[1]
    }

    pub fn laplacian(&self, n: usize) -> f64 {
        self.hess.trace(n)
    }

    /// `dw ⊗ dw` in the frame.
    pub fn outer(&self) -> Sym2 {
        let [a, b] = self.grad;
        Sym2::new(a * a, a * b, b * b, 0.0)
    }

    /// `g(∇w, ∇z)`.
    pub fn dot(&self, other: &FrameJet) -> f64 {
        self.grad[0] * other.grad[0] + self.grad[1] * other.grad[1]
    }
}

/// Convert a coordinate jet in `(t, s)` into frame components.
///
/// With `g = dt² + φ²(ds² + ψ² g_K)` the covariant Hessian is
/// `H_tt = w_tt`, `H_ts = (w_ts - (φ'/φ) w_s)/φ`,
/// `H_ss = w_ss/φ² + (φ'/φ) w_t` and `H_kk = (φ'/φ) w_t + ψ' w_s/(φ² ψ)`.
pub(crate) fn frame_jet(loc: &Local, w: Jet2D) -> Result<FrameJet> {
    let (f, f1) = (loc.phi.value, loc.phi.d1);
    let [wt, ws] = w.grad;
    let [wtt, wts, wss] = w.hess;
    let (psi_ratio, nested) = match loc.inner {
        Some(inner) => (inner.psi.d1 / inner.psi.value, true),
        None => (0.0, false),
    };
    if !nested && (ws != 0.0 || wts != 0.0 || wss != 0.0) {
        return Err(SmmsError::Form(
            "function depends on a fiber coordinate but the fiber is not warped".into(),
        ));
    }
    let h = f1 / f;
    let hess = Sym2::new(
        wtt,
        (wts - h * ws) / f,
        wss / (f * f) + h * wt,
        h * wt + psi_ratio * ws / (f * f),
    );
    Ok(FrameJet {
        value: w.value,
        grad: [wt, ws / f],
        hess,
    })
}

/// Frame Hessian of a function given by its coordinate jet at `p`.
pub fn hessian(g: &WarpedMetric, w: Jet2D, p: &PointSpec) -> Result<FrameJet> {
    frame_jet(&g.local(p)?, w)
}

/// Coordinate jet of a profile of `t` alone.
pub fn coordinate_jet(w: &Profile1D, p: &PointSpec) -> Result<Jet2D> {
    Ok(w.eval_jet(p.t)?.along_t())
}

/// Hessian of a radial function: `(w'', w' φ'/φ)`.
pub fn hessian_radial(g: &WarpedMetric, w: &Profile1D, p: &PointSpec) -> Result<(f64, f64)> {
    let j = hessian(g, coordinate_jet(w, p)?, p)?;
    Ok((j.hess.tt, j.hess.kk))
}

/// Hessian of a density in split form `v = φ v_N + α`.
pub fn hessian_split(g: &WarpedMetric, v: &DensitySpec, p: &PointSpec) -> Result<Sym2> {
    if !matches!(v, DensitySpec::Split { .. }) {
        return Err(SmmsError::Form("hessian_split needs a split density".into()));
    }
    Ok(hessian(g, v.coordinate_jet(g, p)?, p)?.hess)
}

/// Split-form Hessian when the fiber Hessian is only known through a fiber
/// Obata relation `Hes_N v_N = -(xi + c v_N) g_N`.
///
/// Returns `(∂t² v, coefficient of the fiber block against g_N)`, the latter
/// being `φ (v_N φ'² - xi - c v_N) + α' φ' φ`.
pub fn hessian_split_abstract(phi: Jet2, alpha: Jet2, v_n: f64, xi: f64, c: f64) -> (f64, f64) {
    let tt = phi.d2 * v_n + alpha.d2;
    let fiber =
        phi.value * (v_n * phi.d1 * phi.d1 - xi - c * v_n) + alpha.d1 * phi.d1 * phi.value;
    (tt, fiber)
}

pub fn laplacian(g: &WarpedMetric, w: Jet2D, p: &PointSpec) -> Result<f64> {
    Ok(hessian(g, w, p)?.laplacian(g.n()))
}

pub fn grad_norm_sq(g: &WarpedMetric, w: Jet2D, p: &PointSpec) -> Result<f64> {
    Ok(hessian(g, w, p)?.grad_norm_sq())
}

pub fn gradient_outer(g: &WarpedMetric, w: Jet2D, p: &PointSpec) -> Result<Sym2> {
    Ok(hessian(g, w, p)?.outer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adcore::Interval;
    use crate::geometry::FiberDesc;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn warped(src: &str, domain: Interval, fiber: FiberDesc) -> WarpedMetric {
        WarpedMetric::new(Profile1D::parse(src, domain).unwrap(), fiber).unwrap()
    }

    #[test]
    fn cosine_on_the_sphere() {
        let g = warped("sin(t)", Interval::open(0.0, PI), FiberDesc::round_sphere(2));
        let w = Profile1D::parse("cos(t)", Interval::real_line()).unwrap();
        let (htt, hf) = hessian_radial(&g, &w, &PointSpec::t(FRAC_PI_4)).unwrap();
        let c = FRAC_PI_4.cos();
        assert!((htt + c).abs() < 1e-15 && (hf + c).abs() < 1e-15);
        let t = 0.9;
        let lap = laplacian(&g, coordinate_jet(&w, &PointSpec::t(t)).unwrap(), &PointSpec::t(t));
        assert!((lap.unwrap() + 3.0 * t.cos()).abs() < 1e-14);
    }

    #[test]
    fn constant_has_zero_hessian() {
        let g = warped("sin(t)", Interval::open(0.0, PI), FiberDesc::round_sphere(2));
        let w = Profile1D::constant(4.0, Interval::real_line());
        assert_eq!(hessian_radial(&g, &w, &PointSpec::t(1.0)).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn distance_function_in_flat_space() {
        let g = warped("t", Interval::positive_half_line(), FiberDesc::round_sphere(2));
        let w = Profile1D::parse("t", Interval::real_line()).unwrap();
        let p = PointSpec::t(1.7);
        let j = hessian(&g, coordinate_jet(&w, &p).unwrap(), &p).unwrap();
        assert!((j.laplacian(3) - 2.0 / 1.7).abs() < 1e-15);
        assert_eq!(j.grad_norm_sq(), 1.0);
    }

    #[test]
    fn obata_solution_has_umbilic_hessian() {
        // u = 1 - cos t solves u'' + u - 1 = 0 with φ = u' = sin t: Hes_u = (1 - u) g.
        let g = warped("sin(t)", Interval::open(0.0, PI), FiberDesc::round_sphere(3));
        let u = Profile1D::parse("1 - cos(t)", Interval::real_line()).unwrap();
        for t in [0.2, 1.3, 2.9] {
            let (htt, hf) = hessian_radial(&g, &u, &PointSpec::t(t)).unwrap();
            let expect = 1.0 - u.eval(t).unwrap();
            assert!((htt - expect).abs() < 1e-14 && (hf - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn fiber_dependence_needs_a_warped_fiber() {
        let g = warped("sin(t)", Interval::open(0.0, PI), FiberDesc::round_sphere(2));
        let w = Jet2::variable(0.5).along_s();
        assert!(matches!(
            hessian(&g, w, &PointSpec::ts(1.0, 0.5)),
            Err(SmmsError::Form(_))
        ));
    }
}
