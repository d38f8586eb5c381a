use std::f64::consts::PI;

use proptest::prelude::*;

use smms_core::adcore::{Expr, GridSpec, Interval, Profile1D};
use smms_core::catalog::{make, FamilySpec, FamilyTag};
use smms_core::conformal::{involution_residual, law_residuals, ConformalFactor};
use smms_core::geometry::{ricci, FiberDesc, PointSpec, WarpedMetric};
use smms_core::obata::ObataSolution;
use smms_core::weighted::{form_equivalence_residual, DensitySpec, Smms, SmmsParams};

fn t() -> Expr {
    Expr::var()
}

/// Smooth positive profile on the given interval.
fn wave(c0: f64, c1: f64, w: f64, d: f64, dom: Interval) -> Profile1D {
    Profile1D::from_expr(c0 + c1 * c0 * (w * t() + d).sin(), dom)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jets_are_linear(a in -3.0..3.0f64, b in -3.0..3.0f64, x in -1.0..1.0f64, w in 0.1..3.0f64) {
        let dom = Interval::real_line();
        let p = Profile1D::from_expr((w * t()).sin().exp(), dom);
        let q = Profile1D::from_expr((1.0 + t().powf(2.0)).sqrt(), dom);
        let lhs = p.scale(a).add(&q.scale(b)).eval_jet(x).unwrap();
        let (jp, jq) = (p.eval_jet(x).unwrap(), q.eval_jet(x).unwrap());
        prop_assert!(close(lhs.value, a * jp.value + b * jq.value, 1e-14));
        prop_assert!(close(lhs.d1, a * jp.d1 + b * jq.d1, 1e-14));
        prop_assert!(close(lhs.d2, a * jp.d2 + b * jq.d2, 1e-14));
    }

    #[test]
    fn jets_obey_the_chain_rule(x in -1.5..1.5f64, c in 0.2..2.0f64) {
        let outer = Expr::c(c) * t().cosh() + t().sin();
        let inner = (0.5 * t()).exp() - t().powf(2.0);
        let dom = Interval::real_line();
        let comp = Profile1D::from_expr(outer.substitute(&inner), dom).eval_jet(x).unwrap();
        let q = Profile1D::from_expr(inner, dom).eval_jet(x).unwrap();
        let p = Profile1D::from_expr(outer, dom).eval_jet(q.value).unwrap();
        prop_assert!(close(comp.value, p.value, 1e-12));
        prop_assert!(close(comp.d1, p.d1 * q.d1, 1e-12));
        prop_assert!(close(comp.d2, p.d2 * q.d1 * q.d1 + p.d1 * q.d2, 1e-12));
    }

    #[test]
    fn ricci_trace_and_mixed_terms(
        c0 in 1.0..3.0f64, c1 in -0.8..0.8f64, w in 0.2..2.0f64, d in 0.0..PI,
        n in 2usize..6, k in -1.0..1.0f64, x in 0.6..3.4f64,
    ) {
        let g = WarpedMetric::new(
            wave(c0, c1, w, d, Interval::open(0.5, 3.5)),
            FiberDesc::SpaceForm { dim: n - 1, curvature: k },
        ).unwrap();
        let r = ricci(&g, &PointSpec::t(x)).unwrap();
        let dims = (n - 1) as f64;
        prop_assert!((r.tau - (r.rho_tt() + dims * r.rho_fiber())).abs() < 1e-10);
        prop_assert_eq!(r.rho_mixed(), 0.0);
    }

    #[test]
    fn nested_trace_identity(c0 in 1.0..3.0f64, c1 in -0.8..0.8f64, x in 0.6..3.4f64, s in 0.2..2.8f64, k in 1usize..4) {
        let psi = Profile1D::from_expr(1.0 + 0.4 * t().sin(), Interval::open(0.0, 3.0)).with_var("s");
        let h = WarpedMetric::new(psi, FiberDesc::round_sphere(k)).unwrap();
        let g = WarpedMetric::new(wave(c0, c1, 1.0, 0.3, Interval::open(0.5, 3.5)), FiberDesc::Nested(Box::new(h))).unwrap();
        let r = ricci(&g, &PointSpec::ts(x, s)).unwrap();
        let expected = r.rho.tt + r.rho.ss + k as f64 * r.rho.kk;
        prop_assert!((r.tau - expected).abs() < 1e-10);
    }

    #[test]
    fn space_form_law(n in 2usize..7, sign in 0usize..3, x in 0.05..0.95f64) {
        let (phi, c, hi) = match sign {
            0 => (t().sin(), 1.0, PI),
            1 => (t(), 0.0, 5.0),
            _ => (t().sinh(), -1.0, 5.0),
        };
        let g = WarpedMetric::new(Profile1D::from_expr(phi, Interval::open(0.0, hi)), FiberDesc::round_sphere(n - 1)).unwrap();
        let r = ricci(&g, &PointSpec::t(x * hi)).unwrap();
        let target = (n as f64 - 1.0) * c;
        prop_assert!((r.rho.tt - target).abs() < 1e-9);
        prop_assert!((r.rho.ss - target).abs() < 1e-9);
        prop_assert!((r.rho.kk - target).abs() < 1e-9);
    }

    #[test]
    fn density_forms_agree(a in 1.5..3.0f64, b in -1.0..1.0f64, m in 0.3..5.0f64, n in 2usize..6) {
        let dom = Interval::open(0.0, PI);
        let g = WarpedMetric::new(Profile1D::from_expr(t().sin(), dom), FiberDesc::round_sphere(n - 1)).unwrap();
        let d = DensitySpec::radial(Profile1D::from_expr(a + b * t().cos() + 0.2 * t().powf(2.0), dom));
        let params = SmmsParams::new(n, m, 0.0);
        let grid = smms_core::weighted::instance_grid(&g, &GridSpec::with_k(100)).unwrap();
        prop_assert!(form_equivalence_residual(&g, &d, &params, &grid).unwrap() < 1e-10);
    }

    #[test]
    fn obata_first_integral_is_constant(
        lambda in -1.0..1.0f64, nu in -2.0..2.0f64, u0 in -2.0..2.0f64, u0p in -2.0..2.0f64,
    ) {
        let s = ObataSolution::solve(lambda, nu, u0, u0p);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..200 {
            let j = s.eval_jet(3.0 * i as f64 / 199.0).unwrap();
            let lh = ObataSolution::lambda_hat_from(lambda, nu, j.value, j.d1);
            lo = lo.min(lh);
            hi = hi.max(lh);
        }
        prop_assert!(hi - lo < 1e-10, "spread {}", hi - lo);
        prop_assert!((lo - s.lambda_hat).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conformal_laws_hold_for_random_factors(
        family in 0usize..9, c0 in 1.0..3.0f64, c1 in -0.8..0.8f64, w in 0.2..2.0f64, d in 0.0..PI,
    ) {
        let b = make(&FamilySpec::new(FamilyTag::ALL[family])).unwrap();
        let u = ConformalFactor::new(wave(c0, c1, w, d, *b.smms.metric.base())).unwrap();
        let l = law_residuals(&b.smms, &u, &GridSpec::with_k(36)).unwrap();
        prop_assert!(l.schouten < 1e-7 && l.ricci < 1e-7 && l.bakry_emery < 1e-7, "{:?}", l);
    }

    #[test]
    fn conformal_laws_on_flat_space(c0 in 1.0..3.0f64, c1 in -0.8..0.8f64, w in 0.2..2.0f64, n in 2usize..6) {
        let dom = Interval::open(0.0, 6.0);
        let g = WarpedMetric::new(Profile1D::from_expr(t(), dom), FiberDesc::round_sphere(n - 1)).unwrap();
        let s = Smms::new(g.clone(), DensitySpec::constant(1.0, &g), SmmsParams::new(n, 2.0, 0.0)).unwrap();
        let u = ConformalFactor::new(wave(c0, c1, w, 0.0, dom)).unwrap();
        let l = law_residuals(&s, &u, &GridSpec::with_k(60)).unwrap();
        prop_assert!(l.schouten < 1e-7 && l.ricci < 1e-7 && l.bakry_emery < 1e-7, "{:?}", l);
    }

    #[test]
    fn conformal_change_is_involutive(family in 0usize..9, c0 in 1.0..3.0f64, c1 in -0.5..0.5f64, w in 0.2..1.5f64) {
        let b = make(&FamilySpec::new(FamilyTag::ALL[family])).unwrap();
        let u = ConformalFactor::new(wave(c0, c1, w, 0.4, *b.smms.metric.base())).unwrap();
        let r = involution_residual(&b.smms, &u, &GridSpec::with_k(25)).unwrap();
        prop_assert!(r < 1e-8, "{}", r);
    }

    #[test]
    fn mu_is_inert_when_m_is_one(family in 0usize..9, mu in -20.0..20.0f64) {
        let tag = FamilyTag::ALL[family];
        prop_assume!(!matches!(tag, FamilyTag::QuasiEinsteinProduct | FamilyTag::SchwarzschildFiberWarped));
        let b = make(&FamilySpec::new(tag).with("m", 1.0)).unwrap();
        let mut p = b.smms.params;
        p.mu = mu;
        let s = Smms::new(b.smms.metric.clone(), b.smms.density.clone(), p).unwrap();
        let spec = GridSpec::with_k(50);
        let a = format!("{:?}", b.smms.report(0.3, &spec).unwrap());
        let c = format!("{:?}", s.report(0.3, &spec).unwrap());
        prop_assert_eq!(a, c);
    }
}
