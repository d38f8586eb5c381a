use super::{weighted_point, DensitySpec, SmmsParams};
use crate::error::{Result, SmmsError};
use crate::geometry::{sectional, PointSpec, Sectional, Sym2, WarpedMetric};

const MAX_N: usize = 16;

/// Frobenius norm of `R - P ⊘ g` in the adapted frame.
///
/// Kulkarni–Nomizu convention:
/// `(h ⊘ k)(X,Y,Z,W) = h(X,W)k(Y,Z) + h(Y,Z)k(X,W) - h(X,Z)k(Y,W) - h(Y,W)k(X,Z)`,
/// so that `(g ⊘ g)(X,Y,Y,X) = 2` for orthonormal `X, Y` and a space form of
/// curvature `2λ` has `R = λ g ⊘ g`.
pub fn weyl_norm_from(sec: &Sectional, p: &Sym2) -> Result<f64> {
    let n = sec.n;
    if n > MAX_N {
        return Err(SmmsError::Unsupported(format!(
            "Weyl norm assembly supports n <= {MAX_N}, got {n}"
        )));
    }
    let fiber_weyl = sec.fiber_weyl.ok_or_else(|| {
        SmmsError::Unsupported("fiber Weyl tensor unknown for an Einstein fiber of dim >= 4".into())
    })?;
    let pm = |i: usize, j: usize| -> f64 {
        match (i.min(j), i.max(j)) {
            (0, 0) => p.tt,
            (0, 1) => p.ts,
            (1, 1) => p.ss,
            (a, b) if a == b => p.kk,
            _ => 0.0,
        }
    };
    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for k in 0..n {
                for l in 0..n {
                    if k == l {
                        continue;
                    }
                    let r = if i == l && j == k {
                        sec.pair(i, j)
                    } else if i == k && j == l {
                        -sec.pair(i, j)
                    } else {
                        0.0
                    };
                    let kn = pm(i, l) * delta(j, k) + pm(j, k) * delta(i, l)
                        - pm(i, k) * delta(j, l)
                        - pm(j, l) * delta(i, k);
                    let w = r - kn;
                    sum += w * w;
                }
            }
        }
    }
    Ok((sum + fiber_weyl * fiber_weyl).sqrt())
}

/// `|W_f| = |R - P_f ⊘ g|` at a point.
pub fn weighted_weyl_norm(
    g: &WarpedMetric,
    d: &DensitySpec,
    params: &SmmsParams,
    p: &PointSpec,
) -> Result<f64> {
    let w = weighted_point(g, d, params, p)?;
    weyl_norm_from(&sectional(g, p)?, &w.schouten)
}
