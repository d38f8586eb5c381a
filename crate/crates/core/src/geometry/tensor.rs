use serde::{Deserialize, Serialize};

/// A symmetric 2-tensor with warped-product symmetry, in the adapted
/// orthonormal frame.
///
/// `tt` pairs `e_t` with itself, `ts` is the mixed base/fiber entry along the
/// `s` direction, `ss` the `s` diagonal entry, and `kk` the common diagonal
/// entry of the remaining `n - 2` fiber directions. All other entries vanish.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Sym2 {
    pub tt: f64,
    pub ts: f64,
    pub ss: f64,
    pub kk: f64,
}

impl Sym2 {
    pub const ZERO: Sym2 = Sym2 {
        tt: 0.0,
        ts: 0.0,
        ss: 0.0,
        kk: 0.0,
    };

    /// The metric itself.
    pub const IDENTITY: Sym2 = Sym2 {
        tt: 1.0,
        ts: 0.0,
        ss: 1.0,
        kk: 1.0,
    };

    pub fn new(tt: f64, ts: f64, ss: f64, kk: f64) -> Self {
        Self { tt, ts, ss, kk }
    }

    /// `c * g`.
    pub fn scalar(c: f64) -> Self {
        Self::new(c, 0.0, c, c)
    }

    /// Trace against the metric in dimension `n`.
    pub fn trace(&self, n: usize) -> f64 {
        self.tt + self.ss + (n as f64 - 2.0) * self.kk
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(c * self.tt, c * self.ts, c * self.ss, c * self.kk)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.tt
            .abs()
            .max(self.ts.abs())
            .max(self.ss.abs())
            .max(self.kk.abs())
    }

    pub fn components(&self) -> [f64; 4] {
        [self.tt, self.ts, self.ss, self.kk]
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|x| x.is_finite())
    }
}

impl std::ops::Add for Sym2 {
    type Output = Sym2;
    fn add(self, o: Sym2) -> Sym2 {
        Sym2::new(self.tt + o.tt, self.ts + o.ts, self.ss + o.ss, self.kk + o.kk)
    }
}

impl std::ops::Sub for Sym2 {
    type Output = Sym2;
    fn sub(self, o: Sym2) -> Sym2 {
        Sym2::new(self.tt - o.tt, self.ts - o.ts, self.ss - o.ss, self.kk - o.kk)
    }
}

impl std::ops::Mul<Sym2> for f64 {
    type Output = Sym2;
    fn mul(self, o: Sym2) -> Sym2 {
        o.scale(self)
    }
}
