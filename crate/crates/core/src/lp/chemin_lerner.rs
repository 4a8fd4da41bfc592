use super::blocks::weighted_lr;
use crate::error::{Error, Result};

/// Time-stamped table of block `L^2` norms, block `i` being `j = j_min + i`.
#[derive(Clone, Debug, Default)]
pub struct BlockHistory {
    pub j_min: i32,
    pub times: Vec<f64>,
    pub norms: Vec<Vec<f64>>,
}

impl BlockHistory {
    pub fn new(j_min: i32) -> Self {
        BlockHistory {
            j_min,
            times: Vec::new(),
            norms: Vec::new(),
        }
    }

    pub fn push(&mut self, t: f64, norms: Vec<f64>) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if !(t >= last) {
                return Err(Error::Precondition(format!(
                    "history times must be nondecreasing ({t} after {last})"
                )));
            }
        }
        if let Some(first) = self.norms.first() {
            if first.len() != norms.len() {
                return Err(Error::Config("block count changed inside a history".into()));
            }
        }
        self.times.push(t);
        self.norms.push(norms);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// `|| 2^{js} ||Delta_j u||_{L^q(0,T; L^2)} ||_{l^1}` over a sampled history.
///
/// `q = inf` takes the per-block maximum over samples, finite `q` the
/// trapezoidal rule applied to `||Delta_j u||^q`. An empty history gives 0.
pub fn chemin_lerner_accumulate(history: &BlockHistory, q: f64, s: f64) -> f64 {
    let mut acc = ClAccumulator::default();
    for (t, norms) in history.times.iter().zip(&history.norms) {
        acc.push_with_power(*t, norms, q);
    }
    acc.norm(history.j_min, q, s)
}

/// Running per-block accumulators for `L~^inf` and `L~^q` time norms.
#[derive(Clone, Debug, Default)]
pub struct ClAccumulator {
    last_t: Option<f64>,
    last: Vec<f64>,
    max: Vec<f64>,
    integral: Vec<f64>,
}

impl ClAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a sample; finite-`q` integrals use exponent 1.
    pub fn push(&mut self, t: f64, norms: &[f64]) {
        self.push_with_power(t, norms, 1.0);
    }

    fn push_with_power(&mut self, t: f64, norms: &[f64], q: f64) {
        let p: Vec<f64> = if q.is_infinite() || q == 1.0 {
            norms.to_vec()
        } else {
            norms.iter().map(|v| v.powf(q)).collect()
        };
        if self.max.is_empty() {
            self.max = norms.to_vec();
            self.integral = vec![0.0; norms.len()];
        } else {
            for (m, v) in self.max.iter_mut().zip(norms) {
                *m = m.max(*v);
            }
            let dt = t - self.last_t.unwrap_or(t);
            for ((acc, a), b) in self.integral.iter_mut().zip(&self.last).zip(&p) {
                *acc += 0.5 * dt * (a + b);
            }
        }
        self.last = p;
        self.last_t = Some(t);
    }

    pub fn is_empty(&self) -> bool {
        self.last_t.is_none()
    }

    /// Per-block running maxima.
    pub fn block_max(&self) -> &[f64] {
        &self.max
    }

    /// Per-block time integrals.
    pub fn block_integral(&self) -> &[f64] {
        &self.integral
    }

    /// `L~^inf_t(B^s_{2,1})`.
    pub fn linf(&self, j_min: i32, s: f64) -> f64 {
        weighted_lr(&self.max, j_min, s, 1.0)
    }

    /// `L~^1_t(B^s_{2,1})`.
    pub fn l1(&self, j_min: i32, s: f64) -> f64 {
        weighted_lr(&self.integral, j_min, s, 1.0)
    }

    fn norm(&self, j_min: i32, q: f64, s: f64) -> f64 {
        if self.is_empty() {
            0.0
        } else if q.is_infinite() {
            self.linf(j_min, s)
        } else if q == 1.0 {
            self.l1(j_min, s)
        } else {
            let per: Vec<f64> = self.integral.iter().map(|v| v.powf(1.0 / q)).collect();
            weighted_lr(&per, j_min, s, 1.0)
        }
    }
}
