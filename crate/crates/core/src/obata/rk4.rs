use crate::error::{Result, SmmsError};

/// Fixed-step trajectory: times and states.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn last(&self) -> (f64, &[f64]) {
        let i = self.t.len() - 1;
        (self.t[i], &self.y[i])
    }
}

/// One classical Runge–Kutta step of size `h` (may be negative).
pub fn rk4_step<F>(rhs: &F, t: f64, y: &[f64], h: f64) -> Vec<f64>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    let axpy = |a: f64, k: &[f64]| -> Vec<f64> { y.iter().zip(k).map(|(yi, ki)| yi + a * ki).collect() };
    let k1 = rhs(t, y);
    let k2 = rhs(t + h / 2.0, &axpy(h / 2.0, &k1));
    let k3 = rhs(t + h / 2.0, &axpy(h / 2.0, &k2));
    let k4 = rhs(t + h, &axpy(h, &k3));
    (0..y.len())
        .map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Integrate `y' = rhs(t, y)` from `t0` to `t1` with steps of size `step`
/// (the last step is shortened to land on `t1`).
pub fn rk4_integrate<F>(rhs: F, t0: f64, y0: &[f64], t1: f64, step: f64) -> Result<Trajectory>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    if !(step > 0.0) {
        return Err(SmmsError::Domain(format!("step must be positive, got {step}")));
    }
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let span = (t1 - t0).abs();
    let full = (span / step).floor() as usize;
    let mut t = vec![t0];
    let mut y = vec![y0.to_vec()];
    let mut cur = y0.to_vec();
    let mut i = 0usize;
    loop {
        let tc = t0 + dir * step * i as f64;
        let remaining = span - step * i as f64;
        if remaining <= step * 1e-9 {
            break;
        }
        let h = if i < full { step } else { remaining };
        cur = rk4_step(&rhs, tc, &cur, dir * h);
        if cur.iter().any(|x| !x.is_finite()) {
            return Err(SmmsError::Step { t: tc + dir * h });
        }
        i += 1;
        t.push(if i <= full { t0 + dir * step * i as f64 } else { t1 });
        y.push(cur.clone());
        if i > full {
            break;
        }
    }
    Ok(Trajectory { t, y })
}
