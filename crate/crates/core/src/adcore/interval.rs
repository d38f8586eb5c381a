use serde::{Deserialize, Serialize};

use crate::error::{Result, SmmsError};

/// Default truncation used when sampling an unbounded side of an interval.
pub const DEFAULT_CAP: f64 = 10.0;

/// A real interval with independently open or closed endpoints.
///
/// Endpoints may be infinite; an infinite endpoint is always treated as open.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    #[serde(default = "yes")]
    pub lo_open: bool,
    #[serde(default = "yes")]
    pub hi_open: bool,
}

fn yes() -> bool {
    true
}

impl Interval {
    pub fn open(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_open: true,
            hi_open: true,
        }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    pub fn real_line() -> Self {
        Self::open(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn positive_half_line() -> Self {
        Self::open(0.0, f64::INFINITY)
    }

    pub fn contains(&self, t: f64) -> bool {
        if !t.is_finite() {
            return false;
        }
        let above = if self.lo_open || self.lo.is_infinite() {
            t > self.lo
        } else {
            t >= self.lo
        };
        let below = if self.hi_open || self.hi.is_infinite() {
            t < self.hi
        } else {
            t <= self.hi
        };
        above && below
    }

    pub fn is_empty(&self) -> bool {
        if self.lo.is_nan() || self.hi.is_nan() {
            return true;
        }
        if self.lo_open || self.hi_open {
            self.lo >= self.hi
        } else {
            self.lo > self.hi
        }
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_open) = if self.lo > other.lo {
            (self.lo, self.lo_open)
        } else if other.lo > self.lo {
            (other.lo, other.lo_open)
        } else {
            (self.lo, self.lo_open || other.lo_open)
        };
        let (hi, hi_open) = if self.hi < other.hi {
            (self.hi, self.hi_open)
        } else if other.hi < self.hi {
            (other.hi, other.hi_open)
        } else {
            (self.hi, self.hi_open || other.hi_open)
        };
        Interval {
            lo,
            hi,
            lo_open,
            hi_open,
        }
    }

    /// Finite window used for sampling: unbounded sides are cut at `±cap`
    /// and the cut side counts as closed.
    pub fn truncated(&self, cap: f64) -> Interval {
        let mut out = *self;
        if self.lo.is_infinite() {
            out.lo = -cap;
            out.lo_open = false;
        }
        if self.hi.is_infinite() {
            out.hi = cap;
            out.hi_open = false;
        }
        out
    }

    pub fn check(&self, t: f64, what: &str) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(SmmsError::Domain(format!(
                "{what}: {t} outside {}",
                self.describe()
            )))
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "{}{}, {}{}",
            if self.lo_open { '(' } else { '[' },
            self.lo,
            self.hi,
            if self.hi_open { ')' } else { ']' }
        )
    }
}

/// Options controlling [`sample_grid`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Number of points (per active axis).
    pub k: usize,
    /// Relative inward shrink applied to open endpoints.
    pub margin: f64,
    /// Truncation for unbounded sides.
    pub cap: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            k: 1000,
            margin: 0.02,
            cap: DEFAULT_CAP,
        }
    }
}

impl GridSpec {
    pub fn with_k(k: usize) -> Self {
        Self {
            k,
            ..Self::default()
        }
    }
}

/// `k` strictly increasing points covering the interval.
///
/// Unbounded sides are truncated at `cap` (the truncation point itself may be
/// sampled). Open finite endpoints are pulled inward by `margin` times the
/// length of the truncated window.
pub fn sample_grid(domain: &Interval, k: usize, margin: f64, cap: f64) -> Result<Vec<f64>> {
    if k < 2 {
        return Err(SmmsError::Domain(format!("grid needs k >= 2, got {k}")));
    }
    if !(margin > 0.0) || !(cap > 0.0) {
        return Err(SmmsError::Domain(format!(
            "grid needs margin > 0 and cap > 0 (margin {margin}, cap {cap})"
        )));
    }
    if domain.is_empty() {
        return Err(SmmsError::Domain(format!(
            "empty interval {}",
            domain.describe()
        )));
    }
    let window = domain.truncated(cap);
    let len = window.hi - window.lo;
    let lo = if window.lo_open {
        window.lo + margin * len
    } else {
        window.lo
    };
    let hi = if window.hi_open {
        window.hi - margin * len
    } else {
        window.hi
    };
    if !(lo < hi) {
        return Err(SmmsError::Domain(format!(
            "interval {} is empty after margin {margin} and cap {cap}",
            domain.describe()
        )));
    }
    let step = (hi - lo) / (k - 1) as f64;
    Ok((0..k)
        .map(|i| if i + 1 == k { hi } else { lo + step * i as f64 })
        .collect())
}
