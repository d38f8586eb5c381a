use std::f64::consts::PI;

use super::{Bundle, Expectations, FamilySpec, FamilyTag};
use crate::adcore::{sample_grid, Expr, Interval, Profile1D};
use crate::classify::{GlobalBranch, LocalBranch};
use crate::conformal::ConformalFactor;
use crate::error::{Result, SmmsError};
use crate::geometry::{FiberDesc, WarpedMetric};
use crate::obata::{omega_prime_profile, omega_profile};
use crate::weighted::{DensitySpec, Smms, SmmsParams};

/// Samples used for positivity of transcendental combinations.
const POSITIVITY_SAMPLES: usize = 10_000;

fn inadmissible<T>(msg: impl Into<String>) -> Result<T> {
    Err(SmmsError::Admissibility(msg.into()))
}

/// Truncation for families on the whole line or a half-line.
fn cap(lambda: f64) -> f64 {
    10.0 / (2.0 * lambda.abs()).max(1.0).sqrt()
}

fn t() -> Expr {
    Expr::var()
}

fn profile(e: Expr, dom: Interval) -> Profile1D {
    Profile1D::from_expr(e, dom)
}

fn params(n: usize, m: f64, mu: f64, lambda: f64, kappa: f64) -> SmmsParams {
    SmmsParams::new(n, m, mu).with_lambda(lambda).with_kappa(kappa)
}

struct Parts {
    tag: FamilyTag,
    metric: WarpedMetric,
    density: DensitySpec,
    params: SmmsParams,
    beta: Option<f64>,
    factor: Option<(Profile1D, f64)>,
    trivial: bool,
    local: LocalBranch,
    global: GlobalBranch,
    complete: bool,
    compact: bool,
}

fn finish(p: Parts) -> Result<Bundle> {
    let (lambda, kappa) = (p.params.lambda.unwrap_or(0.0), p.params.kappa.unwrap_or(0.0));
    let (mu, m) = (p.params.mu, p.params.m);
    let (factor, lambda_hat) = match p.factor {
        Some((u, lh)) => (Some(ConformalFactor::new(u)?), Some(lh)),
        None => (None, None),
    };
    Ok(Bundle {
        spec: FamilySpec::new(p.tag),
        smms: Smms::new(p.metric, p.density, p.params)?,
        expected: Expectations {
            lambda,
            kappa,
            mu,
            mu_inert: m == 1.0,
            beta: p.beta,
            lambda_hat,
            local: if p.trivial { LocalBranch::Trivial } else { p.local },
            global: p.global,
        },
        factor,
        complete: p.complete,
        compact: p.compact,
    })
}

fn sphere_metric(n: usize, lambda: f64) -> Result<WarpedMetric> {
    let k = (2.0 * lambda).sqrt();
    let dom = Interval::open(0.0, PI / k);
    WarpedMetric::new(profile((k * t()).sin() / k, dom), FiberDesc::round_sphere(n - 1))
}

/// `v = A + B cos(t√(2λ))` on the round sphere of curvature `2λ`.
pub fn weighted_sphere(n: usize, m: f64, lambda: f64, a: f64, b: f64) -> Result<Bundle> {
    if !(lambda > 0.0) {
        return inadmissible(format!("weighted sphere needs λ > 0, got {lambda}"));
    }
    if !(a > b.abs()) {
        return inadmissible(format!("weighted sphere needs A > |B|, got A = {a}, B = {b}"));
    }
    let metric = sphere_metric(n, lambda)?;
    let k = (2.0 * lambda).sqrt();
    let v = profile(a + b * (k * t()).cos(), *metric.base());
    finish(Parts {
        tag: FamilyTag::WeightedSphere,
        density: DensitySpec::radial(v.clone()),
        params: params(n, m, 2.0 * lambda * (b * b - a * a), lambda, 2.0 * lambda * a),
        metric,
        beta: None,
        factor: Some((v, (a * a - b * b) * lambda)),
        trivial: b == 0.0,
        local: LocalBranch::Einstein,
        global: GlobalBranch::SpaceForm,
        complete: true,
        compact: true,
    })
}

/// `v = A + Bt²` on flat space.
pub fn weighted_euclidean(n: usize, m: f64, a: f64, b: f64) -> Result<Bundle> {
    if !(a > 0.0) || !(b >= 0.0) {
        return inadmissible(format!("weighted Euclidean space needs A > 0, B >= 0, got A = {a}, B = {b}"));
    }
    let dom = Interval::open(0.0, cap(0.0));
    let metric = WarpedMetric::new(profile(t(), dom), FiberDesc::round_sphere(n - 1))?;
    let v = profile(a + b * t().powf(2.0), dom);
    finish(Parts {
        tag: FamilyTag::WeightedEuclidean,
        density: DensitySpec::radial(v.clone()),
        params: params(n, m, -4.0 * a * b, 0.0, 2.0 * b),
        metric,
        beta: None,
        factor: Some((v, 2.0 * a * b)),
        trivial: b == 0.0,
        local: LocalBranch::Einstein,
        global: GlobalBranch::SpaceForm,
        complete: true,
        compact: false,
    })
}

/// `v = A + B cosh(t√(-2λ))` on hyperbolic space of curvature `2λ`.
pub fn weighted_hyperbolic(n: usize, m: f64, lambda: f64, a: f64, b: f64) -> Result<Bundle> {
    if !(lambda < 0.0) {
        return inadmissible(format!("weighted hyperbolic space needs λ < 0, got {lambda}"));
    }
    if !(b >= 0.0) || !(a > -b) {
        return inadmissible(format!("weighted hyperbolic space needs B >= 0, A > -B, got A = {a}, B = {b}"));
    }
    let k = (-2.0 * lambda).sqrt();
    let dom = Interval::open(0.0, cap(lambda));
    let metric = WarpedMetric::new(profile((k * t()).sinh() / k, dom), FiberDesc::round_sphere(n - 1))?;
    let v = profile(a + b * (k * t()).cosh(), dom);
    finish(Parts {
        tag: FamilyTag::WeightedHyperbolic,
        density: DensitySpec::radial(v.clone()),
        params: params(n, m, 2.0 * lambda * (b * b - a * a), lambda, 2.0 * lambda * a),
        metric,
        beta: None,
        factor: Some((v, (a * a - b * b) * lambda)),
        trivial: b == 0.0,
        local: LocalBranch::Einstein,
        global: GlobalBranch::SpaceForm,
        complete: true,
        compact: false,
    })
}

/// Constants of a row of the explicit solution table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableConstants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Used by the `λ = 0` row only.
    pub d: f64,
    pub kappa: f64,
    pub nu: f64,
    /// Constant term of `u` in the `λ = 0` row.
    pub l: f64,
}

/// Largest run of samples of `window` on which all profiles are positive.
fn positive_run(window: Interval, fs: &[&Profile1D]) -> Result<Interval> {
    let ts = sample_grid(&window, POSITIVITY_SAMPLES, 1e-9, cap(0.0))?;
    let ok: Vec<bool> = ts
        .iter()
        .map(|&x| fs.iter().all(|f| f.eval(x).is_ok_and(|y| y > 0.0)))
        .collect();
    let (mut best, mut cur) = ((0usize, 0usize), None::<usize>);
    for (i, &good) in ok.iter().enumerate() {
        match (good, cur) {
            (true, None) => cur = Some(i),
            (false, Some(s)) => {
                if i - s > best.1 - best.0 {
                    best = (s, i);
                }
                cur = None;
            }
            _ => {}
        }
    }
    if let Some(s) = cur {
        if ts.len() - s > best.1 - best.0 {
            best = (s, ts.len());
        }
    }
    if best.1 - best.0 < 2 {
        return inadmissible("φ, v and u are not simultaneously positive on any sampled interval");
    }
    let lo = if best.0 == 0 { window.lo } else { ts[best.0] };
    let hi = if best.1 == ts.len() { window.hi } else { ts[best.1 - 1] };
    Ok(Interval::open(lo, hi))
}

/// One row of the explicit table of Einstein-type solutions (`v = v(t)`,
/// Einstein fiber with constant `β`), chosen by the sign of `λ`.
pub fn table_row(n: usize, m: f64, lambda: f64, k: TableConstants) -> Result<Bundle> {
    let TableConstants { a, b, c, d, kappa, nu, l } = k;
    let nf = n as f64;
    let line = Interval::open(-cap(lambda), cap(lambda));
    let (window, phi, v, u, beta, mu, lambda_hat);
    if lambda > 0.0 {
        let w = (2.0 * lambda).sqrt();
        let r = a.hypot(b);
        if r == 0.0 {
            return inadmissible("table row needs a² + b² > 0");
        }
        let delta = b.atan2(a);
        window = Interval::open((delta - PI / 2.0) / w, (delta + PI / 2.0) / w);
        let (cs, sn) = ((w * t()).cos(), (w * t()).sin());
        phi = a * cs.clone() + b * sn.clone();
        v = kappa / (2.0 * lambda) - b * c * cs.clone() + a * c * sn.clone();
        u = nu / (2.0 * lambda) - (b / w) * cs + (a / w) * sn;
        beta = 2.0 * (a * a + b * b) * (nf - 2.0) * lambda;
        mu = 2.0 * (a * a + b * b) * c * c * lambda - kappa * kappa / (2.0 * lambda);
        lambda_hat = nu * nu / (4.0 * lambda) - (a * a + b * b) / 2.0;
    } else if lambda == 0.0 {
        if kappa != 0.0 && (b - a * c).abs() > 1e-12 * b.abs().max(1.0) {
            return inadmissible(format!("λ = 0 row with κ ≠ 0 needs b = ac, got b = {b}, ac = {}", a * c));
        }
        // ν is fixed to aκ by this row; the `nu` parameter is ignored
        let nu0 = a * kappa;
        window = line;
        phi = a * kappa * t() + b;
        v = 0.5 * kappa * t().powf(2.0) + c * t() + d;
        u = 0.5 * nu0 * t().powf(2.0) + b * t() + l;
        beta = a * a * kappa * kappa * (nf - 2.0);
        mu = c * c - 2.0 * d * kappa;
        lambda_hat = -0.5 * b * b + l * nu0;
    } else if lambda < 0.0 {
        let w = (-2.0 * lambda).sqrt();
        let (ep, em) = ((w * t()).exp(), (-w * t()).exp());
        window = line;
        phi = a * ep.clone() + b * em.clone();
        v = kappa / (2.0 * lambda) + a * c * ep.clone() - b * c * em.clone();
        u = nu / (2.0 * lambda) + (a / w) * ep - (b / w) * em;
        beta = 8.0 * a * b * (nf - 2.0) * lambda;
        mu = -8.0 * a * b * c * c * lambda - kappa * kappa / (2.0 * lambda);
        lambda_hat = nu * nu / (4.0 * lambda) - 2.0 * a * b;
    } else {
        return inadmissible(format!("λ must be finite, got {lambda}"));
    }
    let (phi, v, u) = (profile(phi, window), profile(v, window), profile(u, window));
    let dom = positive_run(window, &[&phi, &v, &u])?;
    // v is constant exactly when c = 0 and, for λ = 0, κ = 0
    let trivial = c == 0.0 && (lambda != 0.0 || kappa == 0.0);
    finish(Parts {
        tag: FamilyTag::TableRow,
        metric: WarpedMetric::new(phi.with_domain(dom), FiberDesc::einstein(n - 1, beta))?,
        density: DensitySpec::radial(v.with_domain(dom)),
        params: params(n, m, mu, lambda, kappa),
        beta: Some(beta),
        factor: Some((u.with_domain(dom), lambda_hat)),
        trivial,
        local: LocalBranch::Einstein,
        global: GlobalBranch::NotApplicable,
        complete: false,
        compact: false,
    })
}

/// `φ = Ae^{t√(-2λ)}` over flat space with `v = κ/(2λ) + Be^{t√(-2λ)}`.
pub fn exp_einstein_warped(
    n: usize,
    m: f64,
    lambda: f64,
    a: f64,
    b: f64,
    kappa: f64,
    lambda_hat: f64,
) -> Result<Bundle> {
    if !(lambda < 0.0) || !(a > 0.0) || !(b >= 0.0) || !(kappa <= 0.0) {
        return inadmissible(format!(
            "exponential Einstein family needs λ < 0, A > 0, B >= 0, κ <= 0 (λ = {lambda}, A = {a}, B = {b}, κ = {kappa})"
        ));
    }
    if b == 0.0 && kappa == 0.0 {
        return inadmissible("B = κ = 0 gives a vanishing density");
    }
    if !(lambda_hat <= 0.0) {
        return inadmissible(format!("paired factor needs λ̂ <= 0, got {lambda_hat}"));
    }
    let w = (-2.0 * lambda).sqrt();
    let dom = Interval::open(-cap(lambda), cap(lambda));
    let metric = WarpedMetric::new(
        profile(a * (w * t()).exp(), dom),
        FiberDesc::SpaceForm { dim: n - 1, curvature: 0.0 },
    )?;
    let v = profile(kappa / (2.0 * lambda) + b * (w * t()).exp(), dom);
    let u = profile((lambda_hat / lambda).sqrt() + (a / w) * (w * t()).exp(), dom);
    finish(Parts {
        tag: FamilyTag::ExpEinsteinWarped,
        metric,
        density: DensitySpec::radial(v),
        params: params(n, m, -kappa * kappa / (2.0 * lambda), lambda, kappa),
        beta: Some(0.0),
        factor: Some((u, lambda_hat)),
        trivial: b == 0.0,
        local: LocalBranch::Einstein,
        global: if b == 0.0 { GlobalBranch::SpaceForm } else { GlobalBranch::ExpEinstein },
        complete: true,
        compact: false,
    })
}

/// Direct product `I × N` where `N` is the cone `ds² + (cs/m)² g_Ñ` over an
/// Einstein manifold with constant `ξ`, and `v = cs/m`,
/// `c = m√ξ/√(m+n-3)`.
pub fn quasi_einstein_product(n: usize, m: f64, xi: f64, a: f64, b: f64) -> Result<Bundle> {
    if m == 1.0 || !(m + n as f64 - 3.0 > 0.0) || n < 4 {
        return inadmissible(format!("quasi-Einstein product needs m ≠ 1, n >= 4, m + n > 3 (n = {n}, m = {m})"));
    }
    if !(xi > 0.0) {
        return inadmissible(format!("Einstein constant ξ must be positive, got {xi}"));
    }
    if a == 0.0 {
        return inadmissible("a = 0 makes u constant, a homothety rather than a conformal change");
    }
    let c = m * xi.sqrt() / (m + n as f64 - 3.0).sqrt();
    let line = Interval::open(-cap(0.0), cap(0.0));
    let root = -b / a;
    let base = if a > 0.0 {
        Interval::open(root.max(line.lo), line.hi)
    } else {
        Interval::open(line.lo, root.min(line.hi))
    };
    if base.is_empty() {
        return inadmissible(format!("u = {a}t + {b} is not positive on {}", line.describe()));
    }
    let s_dom = Interval::open(0.0, cap(0.0));
    let cone = WarpedMetric::new(
        profile((c / m) * t(), s_dom).with_var("s"),
        FiberDesc::einstein(n - 2, xi),
    )?;
    let metric = WarpedMetric::new(Profile1D::constant(1.0, base), FiberDesc::Nested(Box::new(cone)))?;
    finish(Parts {
        tag: FamilyTag::QuasiEinsteinProduct,
        metric,
        density: DensitySpec::Separable {
            base: Profile1D::constant(1.0, base),
            fiber: profile((c / m) * t(), s_dom).with_var("s"),
        },
        params: params(n, m, xi / (m - 1.0), 0.0, 0.0),
        beta: None,
        factor: Some((profile(a * t() + b, base), -0.5 * a * a)),
        trivial: false,
        local: LocalBranch::QuasiEinstein,
        global: GlobalBranch::NotApplicable,
        complete: false,
        compact: false,
    })
}

/// `φ = e^{t√(-2λ)}` over `N = (dx² + ω'(x)² dθ²)` with `v = φ ω`.
pub fn schwarzschild_fiber_warped(m: f64, lambda: f64, lambda_hat: f64) -> Result<Bundle> {
    if !(m > 1.0) || !(lambda < 0.0) || !(lambda_hat < 0.0) {
        return inadmissible(format!(
            "Schwarzschild-fiber family needs m > 1, λ < 0, λ̂ < 0 (m = {m}, λ = {lambda}, λ̂ = {lambda_hat})"
        ));
    }
    let w = (-2.0 * lambda).sqrt();
    // curved fiber terms scale like φ⁻², so the small-φ end is cut at half
    // the usual cap to keep their roundoff below the residual tolerance
    let dom = Interval::open(-0.5 * cap(lambda), cap(lambda));
    let x_dom = Interval::open(0.0, cap(0.0));
    let fiber = WarpedMetric::new(omega_prime_profile(m, x_dom)?, FiberDesc::round_sphere(1))?;
    let metric = WarpedMetric::new(profile((w * t()).exp(), dom), FiberDesc::Nested(Box::new(fiber)))?;
    let u = profile((lambda_hat / lambda).sqrt() + (w * t()).exp() / w, dom);
    finish(Parts {
        tag: FamilyTag::SchwarzschildFiberWarped,
        metric,
        density: DensitySpec::Separable {
            base: profile((w * t()).exp(), dom),
            fiber: omega_profile(m, x_dom)?,
        },
        params: params(3, m, 1.0, lambda, 0.0),
        beta: None,
        factor: Some((u, lambda_hat)),
        trivial: false,
        local: LocalBranch::QuasiEinstein,
        global: GlobalBranch::ExpQuasiEinstein,
        complete: true,
        compact: false,
    })
}

/// Round sphere with `v = Aφ cos θ + B cos(t√(2λ)) + κ/(2λ)`.
pub fn rotated_sphere_density(
    n: usize,
    m: f64,
    lambda: f64,
    a: f64,
    b: f64,
    kappa: f64,
    nu: f64,
) -> Result<Bundle> {
    if !(lambda > 0.0) || n < 3 {
        return inadmissible(format!("rotated density needs λ > 0 and n >= 3 (λ = {lambda}, n = {n})"));
    }
    if !(nu > 1.0) {
        return inadmissible(format!("paired factor needs ν > 1, got {nu}"));
    }
    let w = (2.0 * lambda).sqrt();
    let dom = Interval::open(0.0, PI / w);
    let theta = Interval::open(0.0, PI);
    let fiber = WarpedMetric::new(profile(t().sin(), theta).with_var("s"), FiberDesc::round_sphere(n - 2))?;
    let phi = profile((w * t()).sin() / w, dom);
    let alpha = profile(kappa / (2.0 * lambda) + b * (w * t()).cos(), dom);
    // min over θ of v is α - |A|φ, checked up to the poles
    let closed = Interval::closed(0.0, PI / w);
    let worst_closed = profile(
        kappa / (2.0 * lambda) + b * (w * t()).cos() - a.abs() * (w * t()).sin() / w,
        closed,
    );
    worst_closed
        .check_positive(POSITIVITY_SAMPLES, 1e-9, cap(0.0), "rotated density v")
        .map_err(|e| SmmsError::Admissibility(e.to_string()))?;
    let metric = WarpedMetric::new(phi, FiberDesc::Nested(Box::new(fiber)))?;
    let u = profile((nu - (w * t()).cos()) / (2.0 * lambda), dom);
    finish(Parts {
        tag: FamilyTag::RotatedSphereDensity,
        metric,
        density: DensitySpec::Split {
            v_fiber: profile(a * t().cos(), theta).with_var("s"),
            alpha,
        },
        params: params(
            n,
            m,
            a * a + 2.0 * lambda * b * b - kappa * kappa / (2.0 * lambda),
            lambda,
            kappa,
        ),
        beta: None,
        factor: Some((u, (nu * nu - 1.0) / (4.0 * lambda))),
        trivial: a == 0.0 && b == 0.0,
        local: LocalBranch::Einstein,
        global: GlobalBranch::SpaceForm,
        complete: true,
        compact: true,
    })
}

/// Space form of curvature `2λ` with constant density `e^{-f0/m}`. Without
/// `μ` the family uses `μ = -2λe^{-2f0/m}`, which makes it weighted Einstein
/// with constant `λ`; any other `μ` shifts the constant.
pub fn trivial_space_form(n: usize, m: f64, lambda: f64, f0: f64, mu: Option<f64>) -> Result<Bundle> {
    if !(m > 0.0) {
        return inadmissible(format!("m must be positive, got {m}"));
    }
    let v = (-f0 / m).exp();
    let metric = if lambda > 0.0 {
        sphere_metric(n, lambda)?
    } else if lambda == 0.0 {
        WarpedMetric::new(profile(t(), Interval::open(0.0, cap(0.0))), FiberDesc::round_sphere(n - 1))?
    } else {
        let k = (-2.0 * lambda).sqrt();
        WarpedMetric::new(
            profile((k * t()).sinh() / k, Interval::open(0.0, cap(lambda))),
            FiberDesc::round_sphere(n - 1),
        )?
    };
    let nf = n as f64;
    let mu = mu.unwrap_or(-2.0 * lambda * v * v);
    let tau = 2.0 * nf * (nf - 1.0) * lambda;
    let tau_f = if m == 1.0 { tau } else { tau + m * (m - 1.0) * mu / (v * v) };
    let j = tau_f / (2.0 * (nf + m - 1.0));
    let lambda_eff = (2.0 * (nf - 1.0) * lambda - j) / (nf + m - 2.0);
    let kappa = ((m + nf) * lambda_eff - j) * v / m;
    let density = DensitySpec::constant(v, &metric);
    finish(Parts {
        tag: FamilyTag::TrivialSpaceForm,
        metric,
        density,
        params: params(n, m, mu, lambda_eff, kappa),
        beta: None,
        factor: None,
        trivial: true,
        local: LocalBranch::Trivial,
        global: GlobalBranch::SpaceForm,
        complete: true,
        compact: lambda > 0.0,
    })
}
