//! Adaptive Gauss–Kronrod quadrature and the arc-length map `T(t) = ∫ dt/u`.

use std::collections::BinaryHeap;
use std::sync::Arc;

use crate::adcore::{Interval, Jet2, JetFn, Profile1D};
use crate::error::{Result, SmmsError};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Quadrature tolerance (absolute, per call).
pub const QUAD_TOL: f64 = 1e-10;
const MAX_SEGMENTS: usize = 4000;

fn gk15<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx)? + f(c + dx)?;
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    Ok((k * h, ((k - g) * h).abs()))
}

#[derive(PartialEq)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// `∫_a^b f` by globally adaptive Gauss–Kronrod 7/15: the segment with the
/// largest error estimate is bisected until the summed estimate is below
/// `tol`. The flag reports convergence. Endpoints are never evaluated.
pub fn integrate<F: Fn(f64) -> Result<f64>>(f: F, a: f64, b: f64, tol: f64) -> Result<(f64, bool)> {
    if a == b {
        return Ok((0.0, true));
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let (value, err) = gk15(&f, lo, hi)?;
    let mut heap = BinaryHeap::from([Segment { a: lo, b: hi, value, err }]);
    let (mut total, mut total_err) = (value, err);
    while total_err > tol && heap.len() < MAX_SEGMENTS {
        let worst = heap.pop().expect("heap is never empty");
        let m = 0.5 * (worst.a + worst.b);
        // below this width the outer Kronrod nodes round onto the endpoints
        let floor = 1e3 * f64::EPSILON * worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE);
        if worst.b - worst.a < floor || !total.is_finite() {
            heap.push(worst);
            break;
        }
        let (lv, le) = gk15(&f, worst.a, m)?;
        let (rv, re) = gk15(&f, m, worst.b)?;
        total += lv + rv - worst.value;
        total_err += le + re - worst.err;
        heap.push(Segment { a: worst.a, b: m, value: lv, err: le });
        heap.push(Segment { a: m, b: worst.b, value: rv, err: re });
    }
    // re-sum to shed the drift of the running totals
    let (v, e) = heap.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.err));
    Ok((sign * v, e <= tol && v.is_finite()))
}

const NODES: usize = 129;

/// The map `t ↦ t̂` with `dt̂ = dt/u`, anchored so that `T(t_ref) = t_ref`
/// at the centre node of the sampling window.
#[derive(Debug)]
pub struct ArcLength {
    u: Profile1D,
    window: Interval,
    nodes: Vec<f64>,
    cum: Vec<f64>,
    image: Interval,
}

impl ArcLength {
    pub fn new(u: &Profile1D, domain: &Interval, cap: f64) -> Result<Self> {
        let window = domain.truncated(cap);
        let len = window.hi - window.lo;
        if !(len > 0.0) {
            return Err(SmmsError::Domain(format!("empty base {}", domain.describe())));
        }
        let nodes: Vec<f64> = (1..=NODES)
            .map(|i| window.lo + len * i as f64 / (NODES + 1) as f64)
            .collect();
        let inv = |t: f64| -> Result<f64> { Ok(1.0 / u.eval(t)?) };
        let mid = NODES / 2;
        let mut cum = vec![0.0; NODES];
        cum[mid] = nodes[mid];
        for i in mid + 1..NODES {
            cum[i] = cum[i - 1] + checked(integrate(inv, nodes[i - 1], nodes[i], QUAD_TOL)?)?;
        }
        for i in (0..mid).rev() {
            cum[i] = cum[i + 1] - checked(integrate(inv, nodes[i], nodes[i + 1], QUAD_TOL)?)?;
        }
        let (lo, lo_conv) = integrate(inv, window.lo, nodes[0], QUAD_TOL)?;
        let (hi, hi_conv) = integrate(inv, nodes[NODES - 1], window.hi, QUAD_TOL)?;
        let lo_ok = lo_conv && lo.is_finite();
        let hi_ok = hi_conv && hi.is_finite();
        let image = Interval {
            lo: if lo_ok { cum[0] - lo } else { f64::NEG_INFINITY },
            hi: if hi_ok { cum[NODES - 1] + hi } else { f64::INFINITY },
            lo_open: window.lo_open || !lo_ok,
            hi_open: window.hi_open || !hi_ok,
        };
        Ok(Self {
            u: u.clone(),
            window,
            nodes,
            cum,
            image,
        })
    }

    /// Domain of `t̂`.
    pub fn image(&self) -> &Interval {
        &self.image
    }

    /// Domain of `t` actually covered (unbounded sides are truncated).
    pub fn window(&self) -> &Interval {
        &self.window
    }

    pub fn factor(&self) -> &Profile1D {
        &self.u
    }

    fn nearest(&self, t: f64) -> usize {
        let len = self.window.hi - self.window.lo;
        let x = (t - self.window.lo) / len * (NODES + 1) as f64 - 1.0;
        (x.round().max(0.0) as usize).min(NODES - 1)
    }

    /// `T(t)`.
    pub fn forward(&self, t: f64) -> Result<f64> {
        self.window.check(t, "arc-length map")?;
        let i = self.nearest(t);
        let (v, _) = integrate(|s| Ok(1.0 / self.u.eval(s)?), self.nodes[i], t, QUAD_TOL)?;
        Ok(self.cum[i] + v)
    }

    /// `T⁻¹(t̂)` by safeguarded Newton iteration.
    pub fn inverse(&self, th: f64) -> Result<f64> {
        self.image.check(th, "inverse arc-length map")?;
        let k = self.cum.partition_point(|&c| c <= th);
        let (mut a, mut b) = match k {
            0 => (self.window.lo, self.nodes[0]),
            k if k == NODES => (self.nodes[NODES - 1], self.window.hi),
            k => (self.nodes[k - 1], self.nodes[k]),
        };
        let mut t = if k == 0 {
            self.nodes[0]
        } else if k == NODES {
            self.nodes[NODES - 1]
        } else {
            let w = (th - self.cum[k - 1]) / (self.cum[k] - self.cum[k - 1]);
            a + w * (b - a)
        };
        if self.window.contains(a) && self.forward(a)? == th {
            return Ok(a);
        }
        if self.window.contains(b) && self.forward(b)? == th {
            return Ok(b);
        }
        for _ in 0..200 {
            let r = self.forward(t)? - th;
            if r == 0.0 {
                return Ok(t);
            }
            if r > 0.0 {
                b = t;
            } else {
                a = t;
            }
            let mut next = t - r * self.u.eval(t)?;
            if !(next > a && next < b) {
                next = 0.5 * (a + b);
            }
            if (next - t).abs() <= 4.0 * f64::EPSILON * t.abs().max(1.0) {
                return Ok(next);
            }
            t = next;
        }
        Ok(t)
    }
}

fn checked((v, ok): (f64, bool)) -> Result<f64> {
    if ok && v.is_finite() {
        Ok(v)
    } else {
        Err(SmmsError::Eval("quadrature of 1/u did not converge between interior nodes".into()))
    }
}

/// `p ∘ T⁻¹` as a profile of `t̂`.
#[derive(Debug)]
pub(crate) struct Reparam {
    pub inner: Profile1D,
    pub map: Arc<ArcLength>,
}

impl JetFn for Reparam {
    fn jet(&self, th: f64) -> Result<Jet2> {
        let t = self.map.inverse(th)?;
        let u = self.map.u.eval_jet(t)?;
        // dt/dt̂ = u, d²t/dt̂² = u u'
        Ok(self.inner.eval_jet(t)?.compose(Jet2::new(t, u.value, u.value * u.d1)))
    }

    fn describe(&self) -> String {
        format!("({}) after arc-length change by u = {}", self.inner.source(), self.map.u.source())
    }
}

pub(crate) fn reparam(p: &Profile1D, map: &Arc<ArcLength>) -> Profile1D {
    if let Some(c) = p.constant_value() {
        return Profile1D::constant(c, map.image);
    }
    Profile1D::custom(
        Arc::new(Reparam {
            inner: p.clone(),
            map: map.clone(),
        }),
        map.image,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_kronrod_on_smooth_and_singular_integrands() {
        let (v, ok) = integrate(|t: f64| Ok(t.cos()), 0.0, 1.0, 1e-12).unwrap();
        assert!(ok && (v - 1f64.sin()).abs() < 1e-14);
        let (v, ok) = integrate(|t: f64| Ok(1.0 / t.sqrt()), 0.0, 1.0, 1e-10).unwrap();
        assert!(ok && (v - 2.0).abs() < 1e-9);
        let (_, ok) = integrate(|t: f64| Ok(1.0 / t), 0.0, 1.0, 1e-10).unwrap();
        assert!(!ok);
    }

    #[test]
    fn unit_factor_is_the_identity() {
        let u = Profile1D::constant(1.0, Interval::open(0.0, 3.0));
        let map = ArcLength::new(&u, &Interval::open(0.0, 3.0), 10.0).unwrap();
        assert!((map.image().lo).abs() < 1e-14 && (map.image().hi - 3.0).abs() < 1e-14);
        for t in [0.01, 1.0, 2.5] {
            assert!((map.forward(t).unwrap() - t).abs() < 1e-14);
            assert!((map.inverse(t).unwrap() - t).abs() < 1e-14);
        }
    }

    #[test]
    fn exponential_factor_and_divergent_end() {
        // u = e^t: T(t) = t_ref + e^{-t_ref} - e^{-t}, finite as t → ∞ only
        let u = Profile1D::parse("exp(t)", Interval::real_line()).unwrap();
        let map = ArcLength::new(&u, &Interval::real_line(), 4.0).unwrap();
        let r = map.forward(0.0).unwrap() - map.forward(-1.0).unwrap();
        assert!((r - (1f64.exp() - 1.0)).abs() < 1e-10);
        for t in [-3.9, -0.2, 3.7] {
            assert!((map.inverse(map.forward(t).unwrap()).unwrap() - t).abs() < 1e-11);
        }
        // u = t on (0, 1): ∫ dt/t diverges at 0
        let u = Profile1D::parse("t", Interval::open(0.0, 1.0)).unwrap();
        let map = ArcLength::new(&u, &Interval::open(0.0, 1.0), 10.0).unwrap();
        assert_eq!(map.image().lo, f64::NEG_INFINITY);
        assert!(map.image().hi.is_finite());
        let t = map.inverse(map.image().hi - 5.0).unwrap();
        assert!((t - (-5.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn reparameterized_jet_obeys_the_chain_rule() {
        let u = Profile1D::parse("2 + sin(t)", Interval::real_line()).unwrap();
        let map = Arc::new(ArcLength::new(&u, &Interval::real_line(), 5.0).unwrap());
        let p = reparam(&Profile1D::parse("t^3", Interval::real_line()).unwrap(), &map);
        let th = map.forward(1.2).unwrap();
        let j = p.eval_jet(th).unwrap();
        let fd = crate::adcore::finite_diff_jet(&p, th, 1e-4).unwrap();
        assert!((j.value - 1.2f64.powi(3)).abs() < 1e-10);
        assert!((j.d1 - fd.d1).abs() < 1e-6 && (j.d2 - fd.d2).abs() < 1e-5);
    }
}
