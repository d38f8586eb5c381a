//! Independent Ricci computation in explicit coordinates.
//!
//! The warped metric is written as a diagonal metric in a polar chart
//! (`dt² + φ²(dr² + sn_c(r)² dθ² + ...)`), Christoffel symbols are obtained by
//! central differences of the metric entries and Ricci by central differences
//! of the Christoffel symbols. Metric entries are evaluated with plain `f64`
//! arithmetic so nothing here shares code with the jet path.

use super::{CurvatureAtPoint, FiberDesc, PointSpec, Sym2, WarpedMetric};
use crate::error::{Result, SmmsError};

const H_METRIC: f64 = 1e-3;
const H_CHRISTOFFEL: f64 = 1e-3;
const MAX_N: usize = 4;

fn sn(c: f64, r: f64) -> f64 {
    if c > 0.0 {
        (c.sqrt() * r).sin() / c.sqrt()
    } else if c < 0.0 {
        ((-c).sqrt() * r).sinh() / (-c).sqrt()
    } else {
        r
    }
}

/// Chart radius for a constant-curvature factor, away from its poles.
fn chart_radius(c: f64) -> f64 {
    if c > 0.0 {
        0.4 * std::f64::consts::PI / c.sqrt()
    } else {
        0.7
    }
}

const THETA0: f64 = 1.1;

/// Diagonal entries of a unit constant-curvature metric of dimension `d`
/// in geodesic polar coordinates `(r, θ, ϕ)`, appended to `out` times `scale`.
fn polar_block(c: f64, d: usize, x: &[f64], scale: f64, out: &mut Vec<f64>) {
    match d {
        1 => out.push(scale),
        2 => {
            let s = sn(c, x[0]);
            out.extend([scale, scale * s * s]);
        }
        3 => {
            let s = sn(c, x[0]);
            let a = x[1].sin();
            out.extend([scale, scale * s * s, scale * s * s * a * a]);
        }
        _ => unreachable!("checked by caller"),
    }
}

struct Chart<'a> {
    g: &'a WarpedMetric,
    n: usize,
}

impl Chart<'_> {
    fn diag(&self, x: &[f64]) -> Result<Vec<f64>> {
        let phi = self.g.phi.eval(x[0])?;
        let f2 = phi * phi;
        let mut out = Vec::with_capacity(self.n);
        out.push(1.0);
        match &self.g.fiber {
            FiberDesc::Nested(h) => {
                let psi = h.phi.eval(x[1])?;
                out.push(f2);
                let c = h.fiber.constant_curvature().expect("checked");
                polar_block(c, h.fiber.dim(), &x[2..], f2 * psi * psi, &mut out);
            }
            fib => {
                let c = fib.constant_curvature().expect("checked");
                polar_block(c, fib.dim(), &x[1..], f2, &mut out);
            }
        }
        Ok(out)
    }

    fn origin(&self, p: &PointSpec) -> Result<Vec<f64>> {
        let polar = |d: usize, c: f64| -> Vec<f64> {
            match d {
                1 => vec![THETA0],
                2 => vec![chart_radius(c), THETA0],
                _ => vec![chart_radius(c), THETA0, 0.5],
            }
        };
        let mut x = vec![p.t];
        match &self.g.fiber {
            FiberDesc::Nested(h) => {
                x.push(p.s.ok_or_else(|| {
                    SmmsError::Domain("nested fiber requires a fiber coordinate s".into())
                })?);
                let c = h.fiber.constant_curvature().expect("checked");
                x.extend(polar(h.fiber.dim(), c));
            }
            fib => {
                let c = fib.constant_curvature().expect("checked");
                x.extend(polar(fib.dim(), c));
            }
        }
        Ok(x)
    }

    /// Five-point central difference of a vector-valued map along axis `l`.
    fn d5<F>(&self, x: &[f64], l: usize, h: f64, f: F) -> Result<Vec<f64>>
    where
        F: Fn(&[f64]) -> Result<Vec<f64>>,
    {
        let at = |k: f64| -> Result<Vec<f64>> {
            let mut y = x.to_vec();
            y[l] += k * h;
            f(&y)
        };
        let (m2, m1, p1, p2) = (at(-2.0)?, at(-1.0)?, at(1.0)?, at(2.0)?);
        Ok((0..m1.len())
            .map(|i| (m2[i] - 8.0 * m1[i] + 8.0 * p1[i] - p2[i]) / (12.0 * h))
            .collect())
    }

    /// Christoffel symbols `Γ^k_ij`, flattened as `k*n*n + i*n + j`.
    fn christoffel(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        let g = self.diag(x)?;
        let mut dg = Vec::with_capacity(n);
        for l in 0..n {
            dg.push(self.d5(x, l, H_METRIC, |y| self.diag(y))?);
        }
        let mut gam = vec![0.0; n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut s = 0.0;
                    if k == j {
                        s += dg[i][k];
                    }
                    if k == i {
                        s += dg[j][k];
                    }
                    if i == j {
                        s -= dg[k][i];
                    }
                    gam[k * n * n + i * n + j] = 0.5 * s / g[k];
                }
            }
        }
        Ok(gam)
    }
}

/// Ricci tensor of `g` at `p` computed in explicit coordinates, for `n <= 4`
/// and fibers whose curvature is fully determined.
pub fn coordinate_oracle_ricci(g: &WarpedMetric, p: &PointSpec) -> Result<CurvatureAtPoint> {
    let n = g.n();
    if n > MAX_N {
        return Err(SmmsError::Unsupported(format!(
            "coordinate oracle supports n <= {MAX_N}, got {n}"
        )));
    }
    let leaf = match &g.fiber {
        FiberDesc::Nested(h) => &h.fiber,
        f => f,
    };
    if leaf.constant_curvature().is_none() || matches!(leaf, FiberDesc::Nested(_)) {
        return Err(SmmsError::Unsupported(
            "coordinate oracle needs a constant-curvature leaf fiber".into(),
        ));
    }
    let reach = 2.0 * (H_METRIC + H_CHRISTOFFEL);
    g.base().check(p.t - reach, "oracle stencil")?;
    g.base().check(p.t + reach, "oracle stencil")?;
    if let (Some(h), Some(s)) = (g.fiber.nested(), p.s) {
        h.base().check(s - reach, "oracle stencil")?;
        h.base().check(s + reach, "oracle stencil")?;
    }

    let chart = Chart { g, n };
    let x = chart.origin(p)?;
    let gam = chart.christoffel(&x)?;
    let mut dgam = Vec::with_capacity(n);
    for l in 0..n {
        dgam.push(chart.d5(&x, l, H_CHRISTOFFEL, |y| chart.christoffel(y))?);
    }
    let idx = |k: usize, i: usize, j: usize| k * n * n + i * n + j;
    let ric = |i: usize, j: usize| -> f64 {
        let mut r = 0.0;
        for k in 0..n {
            r += dgam[k][idx(k, i, j)] - dgam[j][idx(k, i, k)];
            for l in 0..n {
                r += gam[idx(k, k, l)] * gam[idx(l, i, j)] - gam[idx(k, j, l)] * gam[idx(l, i, k)];
            }
        }
        r
    };
    let gd = chart.diag(&x)?;
    let rho = Sym2::new(
        ric(0, 0) / gd[0],
        ric(0, 1) / (gd[0] * gd[1]).sqrt(),
        ric(1, 1) / gd[1],
        ric(n - 1, n - 1) / gd[n - 1],
    );
    let tau = (0..n).map(|i| ric(i, i) / gd[i]).sum();
    Ok(CurvatureAtPoint { rho, tau })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adcore::{Interval, Profile1D};
    use crate::geometry::ricci;
    use std::f64::consts::{FRAC_PI_3, PI};

    fn warped(src: &str, domain: Interval, fiber: FiberDesc) -> WarpedMetric {
        WarpedMetric::new(Profile1D::parse(src, domain).unwrap(), fiber).unwrap()
    }

    #[test]
    fn round_three_sphere() {
        let g = warped("sin(t)", Interval::open(0.0, PI), FiberDesc::round_sphere(2));
        let c = coordinate_oracle_ricci(&g, &PointSpec::t(FRAC_PI_3)).unwrap();
        assert!((c.rho.tt - 2.0).abs() < 1e-5);
        assert!((c.rho.ss - 2.0).abs() < 1e-5);
    }

    #[test]
    fn hyperbolic_three_space() {
        let g = warped("sinh(t)", Interval::positive_half_line(), FiberDesc::round_sphere(2));
        let c = coordinate_oracle_ricci(&g, &PointSpec::t(1.0)).unwrap();
        for x in [c.rho.tt, c.rho.ss, c.rho.kk] {
            assert!((x + 2.0).abs() < 1e-5, "{c:?}");
        }
    }

    #[test]
    fn agrees_with_warped_formulas() {
        let g = warped("2 + sin(t)/3", Interval::real_line(), FiberDesc::round_sphere(2));
        let p = PointSpec::t(1.0);
        let a = ricci(&g, &p).unwrap();
        let b = coordinate_oracle_ricci(&g, &p).unwrap();
        for (x, y) in a.rho.components().iter().zip(b.rho.components()) {
            assert!((x - y).abs() <= 1e-5 * x.abs().max(1.0), "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn nested_fiber_in_four_dimensions() {
        let inner = warped("2 + cos(s)/2", Interval::real_line(), FiberDesc::round_sphere(2));
        let g = warped("1.5 + t^2", Interval::real_line(), FiberDesc::Nested(Box::new(inner)));
        let p = PointSpec::ts(0.4, 0.8);
        let a = ricci(&g, &p).unwrap();
        let b = coordinate_oracle_ricci(&g, &p).unwrap();
        for (x, y) in a.rho.components().iter().zip(b.rho.components()) {
            assert!((x - y).abs() <= 1e-5 * x.abs().max(1.0), "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn large_dimension_is_unsupported() {
        let g = warped("t", Interval::positive_half_line(), FiberDesc::round_sphere(4));
        assert!(matches!(
            coordinate_oracle_ricci(&g, &PointSpec::t(1.0)),
            Err(SmmsError::Unsupported(_))
        ));
    }
}
