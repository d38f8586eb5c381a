//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use smms_core::adcore::{finite_diff_jet, sample_grid, Expr, Func, GridSpec, Interval, Profile1D};
use smms_core::catalog::{
    exp_einstein_warped, make, schwarzschild_fiber_warped, table_row, weighted_euclidean, weighted_hyperbolic,
    weighted_sphere, Bundle, FamilySpec, FamilyTag, TableConstants,
};
use smms_core::classify::{classify, ClassificationInput, GlobalBranch, LocalBranch};
use smms_core::conformal::{apply_with_cap, law_residuals, ConformalFactor};
use smms_core::geometry::{coordinate_oracle_ricci, ricci, FiberDesc, PointSpec, WarpedMetric};
use smms_core::obata::{
    first_integral_drift_traj, nu_identity, omega_trajectory, rk4_integrate, AffineSolution,
};
use smms_core::weighted::{Smms, SmmsParams};
use smms_core::SmmsError;

fn verdict(n: u32, failures: &[String], detail: String) {
    if failures.is_empty() {
        println!("criterion {n}: PASS ({detail})");
    } else {
        println!("criterion {n}: FAIL ({detail})");
        for f in failures.iter().take(10) {
            println!("    {f}");
        }
        panic!("criterion {n} failed on {} case(s)", failures.len());
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pick_m(r: &mut ChaCha8Rng) -> f64 {
    if r.gen_bool(0.15) {
        1.0
    } else {
        r.gen_range(0.3..5.0)
    }
}

#[test]
fn criterion_01_space_forms() {
    let mut r = rng(1);
    let spec = GridSpec::default();
    let (mut fails, mut worst_p, mut worst_k, mut worst_spread) = (Vec::new(), 0.0f64, 0.0f64, 0.0f64);
    for family in 0..3 {
        for _ in 0..20 {
            let n = r.gen_range(2..=6);
            let m = pick_m(&mut r);
            let (b, kappa) = match family {
                0 => {
                    let lambda = r.gen_range(0.1..2.0);
                    let bb: f64 = r.gen_range(-2.0..2.0);
                    let a = bb.abs() + r.gen_range(0.1..3.0);
                    (weighted_sphere(n, m, lambda, a, bb), 2.0 * lambda * a)
                }
                1 => {
                    let bb = r.gen_range(0.0..2.0);
                    (weighted_euclidean(n, m, r.gen_range(0.1..3.0), bb), 2.0 * bb)
                }
                _ => {
                    let lambda = r.gen_range(-2.0..-0.1);
                    let bb = r.gen_range(0.0..2.0);
                    let a = -bb + r.gen_range(0.1..3.0);
                    (weighted_hyperbolic(n, m, lambda, a, bb), 2.0 * lambda * a)
                }
            };
            let b = b.unwrap();
            let rep = b.smms.report(b.expected.lambda, &spec).unwrap();
            worst_p = worst_p.max(rep.residual_p);
            worst_k = worst_k.max((rep.kappa - kappa).abs());
            worst_spread = worst_spread.max(rep.kappa_spread);
            if !(rep.residual_p < 1e-8 && (rep.kappa - kappa).abs() < 1e-8 && rep.kappa_spread < 1e-9) {
                fails.push(format!(
                    "{}: residual_P {:e}, κ {} vs {kappa}, spread {:e}",
                    b.spec.tag, rep.residual_p, rep.kappa, rep.kappa_spread
                ));
            }
        }
    }
    verdict(
        1,
        &fails,
        format!("60 draws, max residual_P {worst_p:.1e}, max κ error {worst_k:.1e}, max spread {worst_spread:.1e}"),
    );
}

fn catalog_sample() -> Vec<Bundle> {
    let mut specs: Vec<FamilySpec> = FamilyTag::ALL.into_iter().map(FamilySpec::new).collect();
    specs.extend([
        FamilySpec::new(FamilyTag::TableRow).with("lambda", -0.5).with("kappa", -1.0).with("nu", -1.0),
        FamilySpec::new(FamilyTag::TableRow).with("lambda", 0.0).with("b", 1.0).with("kappa", 0.5).with("c", 1.0),
        FamilySpec::new(FamilyTag::SchwarzschildFiberWarped).with("m", 2.0),
        FamilySpec::new(FamilyTag::RotatedSphereDensity).with("B", 0.4).with("n", 4.0),
        FamilySpec::new(FamilyTag::TrivialSpaceForm).with("lambda", -0.5).with("mu", 1.0),
    ]);
    specs.iter().map(|s| make(s).unwrap()).collect()
}

#[test]
fn criterion_02_scale_lemma() {
    let spec = GridSpec::default();
    let (mut fails, mut worst) = (Vec::new(), 0.0f64);
    let bundles = catalog_sample();
    for b in &bundles {
        let rep = b.smms.report(b.expected.lambda, &spec).unwrap();
        worst = worst.max(rep.kappa_spread);
        if !(rep.kappa_spread < 1e-9) {
            fails.push(format!("{:?}: κ spread {:e}", b.spec, rep.kappa_spread));
        }
    }
    verdict(2, &fails, format!("{} bundles, max κ spread {worst:.1e}", bundles.len()));
}

fn random_factor(r: &mut ChaCha8Rng, base: Interval) -> ConformalFactor {
    let c0 = r.gen_range(1.0..3.0);
    let c1 = r.gen_range(-0.8..0.8) * c0;
    let w = r.gen_range(0.2..2.0);
    let d = r.gen_range(0.0..PI);
    let e = r.gen_range(-0.1..0.1);
    let t = Expr::var;
    let u = (c0 + c1 * (w * t() + d).sin()) * (e * t()).exp();
    ConformalFactor::new(Profile1D::from_expr(u, base)).unwrap()
}

#[test]
fn criterion_03_conformal_laws() {
    let mut r = rng(3);
    let spec = GridSpec::with_k(64);
    let bundles = catalog_sample();
    let (mut fails, mut worst) = (Vec::new(), [0.0f64; 3]);
    for _ in 0..50 {
        let b = &bundles[r.gen_range(0..bundles.len())];
        let u = random_factor(&mut r, *b.smms.metric.base());
        let l = law_residuals(&b.smms, &u, &spec).unwrap();
        for (w, x) in worst.iter_mut().zip([l.schouten, l.ricci, l.bakry_emery]) {
            *w = w.max(x);
        }
        if !(l.schouten < 1e-7 && l.ricci < 1e-7 && l.bakry_emery < 1e-7) {
            fails.push(format!("{:?} with u = {}: {l:?}", b.spec, u.u.source()));
        }
    }
    verdict(
        3,
        &fails,
        format!(
            "50 pairs, max Schouten {:.1e}, Ricci {:.1e}, Bakry-Emery {:.1e}",
            worst[0], worst[1], worst[2]
        ),
    );
}

/// Ten admissible draws for each sign of `λ`.
fn table_draws() -> Vec<(f64, TableConstants, usize, f64)> {
    let mut r = rng(4);
    let mut out = Vec::new();
    for sign in [1.0, 0.0, -1.0] {
        let mut got = 0;
        while got < 10 {
            let n = r.gen_range(2..=5);
            let m = pick_m(&mut r);
            let lambda = sign * r.gen_range(0.1..1.5);
            let (a, c) = (r.gen_range(-1.5..1.5), r.gen_range(-1.5..1.5));
            let kappa = r.gen_range(-2.0..2.0);
            let b = if sign == 0.0 { a * c } else { r.gen_range(-1.5..1.5) };
            let k = TableConstants {
                a,
                b,
                c,
                d: r.gen_range(-1.0..2.0),
                kappa,
                nu: r.gen_range(-2.0..3.0),
                l: r.gen_range(-1.0..2.0),
            };
            if table_row(n, m, lambda, k).is_ok() {
                out.push((lambda, k, n, m));
                got += 1;
            }
        }
    }
    out
}

#[test]
fn criterion_04_table_reproduction() {
    let spec = GridSpec::default();
    let (mut fails, mut worst) = (Vec::new(), 0.0f64);
    for (lambda, k, n, m) in table_draws() {
        let b = table_row(n, m, lambda, k).unwrap();
        let lh = b.expected.lambda_hat.unwrap();
        let closed = if lambda > 0.0 {
            k.nu * k.nu / (4.0 * lambda) - (k.a * k.a + k.b * k.b) / 2.0
        } else if lambda == 0.0 {
            -k.b * k.b / 2.0 + k.l * k.a * k.kappa
        } else {
            k.nu * k.nu / (4.0 * lambda) - 2.0 * k.a * k.b
        };
        assert!((lh - closed).abs() <= 1e-14 * closed.abs().max(1.0), "λ̂ {lh} vs {closed}");
        let img = apply_with_cap(&b.smms, b.factor.as_ref().unwrap(), spec.cap).unwrap();
        let rep = img.smms.report(lh, &spec).unwrap();
        worst = worst.max(rep.residual_p);
        if !(rep.residual_p < 1e-8) {
            fails.push(format!("λ = {lambda}, {k:?}: ‖P̂ - λ̂ĝ‖ = {:e}", rep.residual_p));
        }
    }
    verdict(4, &fails, format!("30 table draws, max ‖P̂ - λ̂ĝ‖ {worst:.1e}"));
}

#[test]
fn criterion_05_obata_machinery() {
    let mut r = rng(5);
    let mut fails = Vec::new();

    let grid: Vec<f64> = (0..1000).map(|i| 5.0 * (i as f64 + 0.5) / 1000.0).collect();
    let mut ode = 0.0f64;
    for sign in [1.0, 0.0, -1.0] {
        for _ in 0..100 {
            let lambda = sign * r.gen_range(0.05..2.0);
            let s = AffineSolution::solve(
                lambda,
                r.gen_range(-3.0..3.0),
                r.gen_range(-2.0..2.0),
                r.gen_range(-2.0..2.0),
            );
            let res = s.max_ode_residual(&grid).unwrap();
            ode = ode.max(res);
            if !(res < 1e-10) {
                fails.push(format!("closed form λ = {lambda}: ODE residual {res:e}"));
            }
        }
    }

    // first integrals of the two ODEs the integrator is used for
    let mut drift = 0.0f64;
    for m in [1.5, 2.0, 3.0, 4.0, 6.0] {
        let tr = omega_trajectory(m, 10.0, 1e-3).unwrap();
        let d = tr
            .y
            .iter()
            .map(|y| (y[1] * y[1] - 1.0 + y[0].powf(1.0 - m)).abs())
            .fold(0.0, f64::max);
        drift = drift.max(d);
        if !(d < 1e-6) {
            fails.push(format!("ω trajectory m = {m}: drift {d:e}"));
        }
    }
    for (lambda, nu) in [(0.5, 1.0), (2.0, -1.0), (0.0, 0.5), (0.0, -2.0)] {
        let rhs = move |_: f64, y: &[f64]| vec![y[1], nu - 2.0 * lambda * y[0]];
        let tr = rk4_integrate(rhs, 0.0, &[1.0, 0.3], 10.0, 1e-3).unwrap();
        let lh = (2.0 * nu - 2.0 * lambda - 0.09) / 2.0;
        let d = first_integral_drift_traj(&tr, lambda, nu, lh);
        drift = drift.max(d);
        if !(d < 1e-6) {
            fails.push(format!("u'' = ν - 2λu, λ = {lambda}, ν = {nu}: drift {d:e}"));
        }
    }

    let spec = GridSpec::default();
    let mut ident = 0.0f64;
    for (lambda, k, n, m) in table_draws() {
        let b = table_row(n, m, lambda, k).unwrap();
        let nu = if lambda == 0.0 { k.a * k.kappa } else { k.nu };
        let ts = sample_grid(b.smms.metric.base(), spec.k, spec.margin, spec.cap).unwrap();
        let res = nu_identity(&b.smms.metric.phi, lambda, nu, b.expected.lambda_hat.unwrap(), &ts).unwrap();
        ident = ident.max(res);
        if !(res < 1e-9) {
            let big = ts
                .iter()
                .map(|&t| 2.0 * lambda.abs() * b.smms.metric.phi.eval(t).unwrap().powi(2))
                .fold(0.0, f64::max);
            fails.push(format!(
                "ν-identity λ = {lambda}, a = {:.3}, b = {:.3}: {res:.1e}, against terms of size {big:.1e} ({:.1} ulp)",
                k.a,
                k.b,
                res / (big * f64::EPSILON)
            ));
        }
    }
    verdict(
        5,
        &fails,
        format!("max ODE residual {ode:.1e}, max RK4 drift {drift:.1e}, max ν-identity {ident:.1e}"),
    );
}

#[test]
fn criterion_06_theorem_branches() {
    let mut r = rng(6);
    let spec = GridSpec::default();
    let mut fails = Vec::new();
    let (mut ein, mut mu_err) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let n = r.gen_range(2..=5);
        let m = loop {
            let m = r.gen_range(0.3..5.0);
            if (m - 1.0f64).abs() > 0.05 {
                break m;
            }
        };
        let lambda = r.gen_range(-2.0..-0.1);
        let kappa = r.gen_range(-2.0..-0.05);
        let b = exp_einstein_warped(
            n,
            m,
            lambda,
            r.gen_range(0.2..2.0),
            r.gen_range(0.0..2.0),
            kappa,
            r.gen_range(-1.0..0.0),
        )
        .unwrap();
        let rep = b.smms.report(lambda, &spec).unwrap();
        ein = ein.max(rep.residual_einstein);
        if !(rep.residual_einstein < 1e-8) {
            fails.push(format!("exp Einstein {:?}: residual_Einstein {:e}", b.spec, rep.residual_einstein));
        }
        // recover μ from the data with the μ term switched off: the trace of
        // P_f = λg forces τ_f(0) + m(m-1)μ/v² = 2(n+m-1)J, fitted by least squares
        let mut p0 = b.smms.params;
        p0.mu = 0.0;
        let s0 = Smms::new(b.smms.metric.clone(), b.smms.density.clone(), p0).unwrap();
        let nf = n as f64;
        let target = -kappa * kappa / (2.0 * lambda);
        let (mut xy, mut xx) = (0.0, 0.0);
        for p in s0.grid(&GridSpec::with_k(200)).unwrap() {
            let w = s0.point(&p).unwrap();
            let j = (w.rho_f.trace(n) - nf * (nf + m - 2.0) * lambda) / nf;
            let (x, y) = (m * (m - 1.0) / (w.v * w.v), 2.0 * (nf + m - 1.0) * j - w.tau_f);
            xy += x * y;
            xx += x * x;
        }
        let mu = xy / xx;
        let e = (mu - target).abs() / target.abs().max(1.0);
        mu_err = mu_err.max(e);
        if !(e < 1e-8) {
            fails.push(format!("exp Einstein {:?}: μ {mu} vs {target}", b.spec));
        }
    }

    let mut fiber = 0.0f64;
    for m in [1.2, 1.5, 2.0, 3.0, 4.5, 6.0] {
        let b = schwarzschild_fiber_warped(m, -0.5, -0.5).unwrap();
        let rep = b.smms.report(b.expected.lambda, &spec).unwrap();
        let input = ClassificationInput::gather(&b.smms, &rep, b.complete, b.compact, &spec, 1e-8).unwrap();
        let f = input.fiber_be_residual.unwrap();
        fiber = fiber.max(f);
        if !(f < 1e-8) {
            fails.push(format!("Schwarzschild fiber m = {m}: fiber Bakry-Emery {f:e}"));
        }
    }

    // ρ^N = K h with K = -ω'''/ω' = (m(m-1)/2) ω^{-m-1}; 3/(1+x²)² for m = 3
    let tr = omega_trajectory(3.0, 10.0, 1e-3).unwrap();
    let b = schwarzschild_fiber_warped(3.0, -0.5, -0.5).unwrap();
    let h = b.smms.metric.fiber.nested().unwrap().clone();
    let mut coef = 0.0f64;
    for (i, (&x, y)) in tr.t.iter().zip(&tr.y).enumerate() {
        if x <= 0.0 || i % 10 != 0 {
            continue;
        }
        let exact = 3.0 / (1.0 + x * x).powi(2);
        let rk = 3.0 * y[0].powi(-4);
        let closed = if x < 10.0 { ricci(&h, &PointSpec::t(x)).unwrap().rho.tt } else { exact };
        let e = (rk - exact).abs().max((closed - exact).abs());
        coef = coef.max(e);
        if !(e < 1e-6) {
            fails.push(format!("ρ^N coefficient at x = {x}: RK4 {rk}, closed form {closed}, expected {exact}"));
            break;
        }
    }
    verdict(
        6,
        &fails,
        format!(
            "max residual_Einstein {ein:.1e}, max μ error {mu_err:.1e}, max fiber Bakry-Emery {fiber:.1e}, ρ^N coefficient error {coef:.1e}"
        ),
    );
}

#[test]
fn criterion_07_corollary_pipeline() {
    let mut r = rng(7);
    let spec = GridSpec::with_k(400);
    let tol = 1e-8;
    let mut fails = Vec::new();
    let (mut spread, mut lerr) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let (n, m) = (r.gen_range(2..=6), pick_m(&mut r));
        let lambda = r.gen_range(0.1..2.0);
        let bb: f64 = r.gen_range(-2.0..2.0);
        let a = bb.abs() + r.gen_range(0.1..3.0);
        let b = weighted_sphere(n, m, lambda, a, bb).unwrap();
        let img = apply_with_cap(&b.smms, b.factor.as_ref().unwrap(), spec.cap).unwrap();
        let lh = (a * a - bb * bb) * lambda;
        let rep = img.smms.report(lh, &spec).unwrap();
        spread = spread.max(rep.density_spread());
        let e = (rep.lambda_estimate - lh).abs().max(rep.residual_p);
        lerr = lerr.max(e);
        let input = ClassificationInput::gather(&img.smms, &rep, true, true, &spec, tol).unwrap();
        let v = classify(&input, tol);
        let ok = rep.density_spread() < 1e-10
            && e < 1e-8
            && lh > 0.0
            && matches!(&v, Ok(v) if v.global == GlobalBranch::SpaceForm
                && v.local == LocalBranch::Trivial && v.curvature_sign == Some(1));
        if !ok {
            fails.push(format!(
                "{:?}: spread {:e}, λ̂ error {e:e}, verdict {v:?}",
                b.spec,
                rep.density_spread()
            ));
        }
    }
    for b in [weighted_hyperbolic(3, 2.0, -0.5, 1.0, 1.0).unwrap(), weighted_euclidean(3, 2.0, 1.0, 1.0).unwrap()] {
        let rep = b.smms.report(b.expected.lambda, &spec).unwrap();
        let input = ClassificationInput::gather(&b.smms, &rep, true, true, &spec, tol).unwrap();
        if !matches!(classify(&input, tol), Err(SmmsError::Contradiction(_))) {
            fails.push(format!("{}: compact with λ = {} was not rejected", b.spec.tag, b.expected.lambda));
        }
    }
    verdict(
        7,
        &fails,
        format!("20 sphere draws, max density spread {spread:.1e}, max λ̂ error {lerr:.1e}, compact λ <= 0 rejected"),
    );
}

#[test]
fn criterion_08_oracle_equivalence() {
    let mut r = rng(8);
    let mut fails = Vec::new();
    let mut worst = 0.0f64;
    let t = Expr::var;
    for i in 0..20 {
        let n = if i % 2 == 0 { 3 } else { 4 };
        let c0 = r.gen_range(1.0..3.0);
        let phi = c0
            + r.gen_range(-0.8..0.8) * c0 * (r.gen_range(0.3..2.0) * t() + r.gen_range(0.0..PI)).sin()
            + r.gen_range(-0.2..0.2) * t().powf(2.0);
        let base = Interval::open(0.5, 3.5);
        let fiber = if n == 4 && i % 4 == 3 {
            let psi = Profile1D::from_expr(1.0 + 0.5 * t().sin(), Interval::open(0.0, 3.0)).with_var("s");
            FiberDesc::Nested(Box::new(WarpedMetric::new(psi, FiberDesc::round_sphere(1)).unwrap()))
        } else {
            FiberDesc::SpaceForm { dim: n - 1, curvature: r.gen_range(-1.0..1.0) }
        };
        let g = WarpedMetric::new(Profile1D::from_expr(phi, base), fiber).unwrap();
        if g.check_positive(200, 1e-3, 10.0).is_err() {
            continue;
        }
        for _ in 0..5 {
            let p = PointSpec { t: r.gen_range(1.0..3.0), s: g.fiber.nested().map(|_| r.gen_range(0.5..2.5)) };
            let a = ricci(&g, &p).unwrap();
            let b = coordinate_oracle_ricci(&g, &p).unwrap();
            let scale = a.rho.max_abs().max(1.0);
            let e = ((a.rho - b.rho).max_abs() / scale).max((a.tau - b.tau).abs() / a.tau.abs().max(1.0));
            worst = worst.max(e);
            if !(e < 1e-5) {
                fails.push(format!("{} at {p:?}: relative difference {e:e}", g.describe()));
            }
        }
    }
    verdict(8, &fails, format!("20 profiles, max relative difference {worst:.1e}"));
}

/// Random tree of depth at most `depth` that stays finite and moderate on [-1, 1].
fn tree(r: &mut ChaCha8Rng, depth: usize) -> Expr {
    let t = Expr::var;
    if depth == 0 || r.gen_bool(0.25) {
        return if r.gen_bool(0.6) { t() } else { Expr::c(r.gen_range(-2.0..2.0)) };
    }
    let mut sub = || tree(r, depth - 1);
    let (x, y) = (sub(), sub());
    match r.gen_range(0..12) {
        0 => x + y,
        1 => x - y,
        2 => x * y,
        3 => -x,
        4 => x / (1.5 + Expr::call(Func::Sin, y)),
        5 => (1.0 + x.powf(2.0)).pow(Expr::c(r.gen_range(-1.5..1.5))),
        6 => x.sin().exp(),
        7 => (1.0 + x.powf(2.0)).log(),
        8 => (1.0 + x.powf(2.0)).sqrt(),
        9 => x.sin().sinh() + y.cos(),
        10 => x.cos().cosh(),
        _ => Expr::call(Func::Cos, x) * y,
    }
}

#[test]
fn criterion_09_ad_soundness() {
    let mut r = rng(9);
    let mut fails = Vec::new();
    let (mut worst, mut trees) = (0.0f64, 0);
    while trees < 100 {
        let e = tree(&mut r, 5);
        let p = Profile1D::from_expr(e, Interval::real_line());
        let pts: Vec<f64> = (0..10).map(|_| r.gen_range(-1.0..1.0)).collect();
        let jets: Vec<_> = pts.iter().map(|&x| p.eval_jet(x)).collect();
        // keep trees whose first four derivatives stay moderate
        if jets.iter().any(|j| !j.as_ref().is_ok_and(|j| j.value.abs().max(j.d1.abs()).max(j.d2.abs()) < 1e3)) {
            continue;
        }
        trees += 1;
        for (&x, j) in pts.iter().zip(jets) {
            let j = j.unwrap();
            let fd = finite_diff_jet(&p, x, 1e-4).unwrap();
            for (a, b) in [(j.value, fd.value), (j.d1, fd.d1), (j.d2, fd.d2)] {
                let e = (a - b).abs() / a.abs().max(1.0);
                worst = worst.max(e);
                if !(e < 1e-5) {
                    fails.push(format!("{} at t = {x}: jet {a} vs finite difference {b}", p.source()));
                }
            }
        }
    }
    verdict(9, &fails, format!("100 trees x 10 points, max relative difference {worst:.1e}"));
}

#[test]
fn criterion_10_m_one_inertness() {
    let mut r = rng(10);
    let spec = GridSpec::with_k(200);
    let mut fails = Vec::new();
    let mut cases = 0;
    for tag in FamilyTag::ALL {
        if matches!(tag, FamilyTag::QuasiEinsteinProduct | FamilyTag::SchwarzschildFiberWarped) {
            continue;
        }
        let b = make(&FamilySpec::new(tag).with("m", 1.0)).unwrap();
        let base = format!("{:?}", b.smms.report(b.expected.lambda, &spec).unwrap());
        let image = |s: &Smms| {
            b.factor
                .as_ref()
                .map(|u| format!("{:?}", apply_with_cap(s, u, spec.cap).unwrap().smms.report(1.0, &spec).unwrap()))
        };
        let base_image = image(&b.smms);
        for _ in 0..3 {
            let mut p: SmmsParams = b.smms.params;
            p.mu = r.gen_range(-50.0..50.0);
            let s = Smms::new(b.smms.metric.clone(), b.smms.density.clone(), p).unwrap();
            cases += 1;
            if format!("{:?}", s.report(b.expected.lambda, &spec).unwrap()) != base || image(&s) != base_image {
                fails.push(format!("{tag}: report changed with μ = {}", p.mu));
            }
        }
    }
    verdict(10, &fails, format!("{cases} μ changes over 7 families, reports bitwise identical"));
}
