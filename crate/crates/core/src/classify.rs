//! Soft-margin SVM with a cubic polynomial kernel, trained by SMO.
//!
//! The solver keeps the dual gradient `G = Q alpha - 1` with
//! `Q_ij = y_i y_j K(x_i, x_j)` and at each step updates the maximal violating
//! pair: `i` minimizes the prediction error `E` over the samples whose dual
//! variable can move up, `j` maximizes it over those that can move down, which
//! is the pair with the largest `|E_i - E_j|`. Training stops once that gap is
//! below `kkt_tolerance`, which bounds every per-sample KKT violation by the
//! same tolerance once the bias is placed inside the gap.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::featurize::{FeatureVector, Label};

const TAU: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum SvmError {
    #[error("training data contains a single class")]
    SingleClass,
    #[error("sample `{0}` has a non-finite feature value")]
    NonFiniteFeature(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolyKernel {
    pub degree: u32,
    pub scale: f64,
    pub offset: f64,
}

impl Default for PolyKernel {
    fn default() -> Self {
        Self {
            degree: 3,
            scale: 1.0,
            offset: 1.0,
        }
    }
}

impl PolyKernel {
    #[inline]
    pub fn eval(&self, u: &[f64], v: &[f64]) -> f64 {
        let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
        (self.offset + dot / self.scale).powi(self.degree as i32)
    }
}

/// `(offset + u.v / scale)^3`.
pub fn kernel(u: &[f64], v: &[f64], scale: f64, offset: f64) -> Result<f64, SvmError> {
    if u.len() != v.len() {
        return Err(SvmError::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    Ok(PolyKernel {
        degree: 3,
        scale,
        offset,
    }
    .eval(u, v))
}

/// Per-coordinate z-score parameters fit on a training set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardization {
    pub fn fit(rows: &[&[f64]]) -> Self {
        let dim = rows[0].len();
        let n = rows.len() as f64;
        let mut mean = vec![0.0; dim];
        for r in rows {
            for (m, v) in mean.iter_mut().zip(r.iter()) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut std = vec![0.0; dim];
        if rows.len() > 1 {
            for r in rows {
                for ((s, v), m) in std.iter_mut().zip(r.iter()).zip(&mean) {
                    *s += (v - m) * (v - m);
                }
            }
            std.iter_mut().for_each(|s| *s = (*s / (n - 1.0)).sqrt());
        }
        // constant coordinates are centred but not scaled
        std.iter_mut().filter(|s| **s == 0.0).for_each(|s| *s = 1.0);
        Self { mean, std }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub c: f64,
    pub kkt_tolerance: f64,
    /// Gives up after this many consecutive steps that leave every dual
    /// variable unchanged.
    pub max_passes: usize,
    /// Hard cap on SMO steps.
    pub max_iter: usize,
    pub seed: u64,
    pub standardize: bool,
    pub kernel: PolyKernel,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            kkt_tolerance: 1e-3,
            max_passes: 10,
            max_iter: 1_000_000,
            seed: 0,
            standardize: false,
            kernel: PolyKernel::default(),
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<(), SvmError> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(SvmError::InvalidConfig(format!("C must be positive, got {}", self.c)));
        }
        if !(self.kkt_tolerance.is_finite() && self.kkt_tolerance > 0.0) {
            return Err(SvmError::InvalidConfig(format!(
                "kkt_tolerance must be positive, got {}",
                self.kkt_tolerance
            )));
        }
        if !(self.kernel.scale.is_finite() && self.kernel.scale > 0.0) {
            return Err(SvmError::InvalidConfig(format!(
                "kernel scale must be positive, got {}",
                self.kernel.scale
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    /// Stored in the standardized space when `standardization` is set.
    pub support_vectors: Vec<Vec<f64>>,
    /// `alpha_i * y_i` with morph = +1.
    pub dual_coefs: Vec<f64>,
    pub bias: f64,
    pub kernel: PolyKernel,
    pub standardization: Option<Standardization>,
    pub dim: usize,
    pub c: f64,
    /// Whether the optimizer reached `kkt_tolerance`.
    pub converged: bool,
    pub iterations: usize,
}

impl SvmModel {
    /// Decision value on an already standardized vector.
    fn raw_score(&self, x: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.dual_coefs)
            .map(|(sv, coef)| coef * self.kernel.eval(sv, x))
            .sum::<f64>()
            + self.bias
    }

    pub fn score(&self, x: &[f64]) -> Result<f64, SvmError> {
        if x.len() != self.dim {
            return Err(SvmError::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(match &self.standardization {
            Some(s) => self.raw_score(&s.apply(x)),
            None => self.raw_score(x),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// Label and decision value; a score of exactly 0 is genuine.
pub fn predict(model: &SvmModel, x: &[f64]) -> Result<(Label, f64), SvmError> {
    let score = model.score(x)?;
    let label = if score > 0.0 { Label::Morph } else { Label::Genuine };
    Ok((label, score))
}

pub fn train_svm(features: &[FeatureVector], cfg: &TrainConfig) -> Result<SvmModel, SvmError> {
    cfg.validate()?;
    let Some(first) = features.first() else {
        return Err(SvmError::SingleClass);
    };
    let dim = first.values.len();
    for f in features {
        if f.values.len() != dim {
            return Err(SvmError::DimensionMismatch {
                expected: dim,
                got: f.values.len(),
            });
        }
        if !f.is_finite() {
            return Err(SvmError::NonFiniteFeature(f.sample_id.clone()));
        }
    }
    let y: Vec<f64> = features.iter().map(|f| f.label.sign()).collect();
    if !(y.contains(&1.0) && y.contains(&-1.0)) {
        return Err(SvmError::SingleClass);
    }

    let standardization = cfg.standardize.then(|| {
        let rows: Vec<&[f64]> = features.iter().map(|f| f.values.as_slice()).collect();
        Standardization::fit(&rows)
    });
    let x: Vec<Vec<f64>> = features
        .iter()
        .map(|f| match &standardization {
            Some(s) => s.apply(&f.values),
            None => f.values.clone(),
        })
        .collect();

    let n = x.len();
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = y[i] * y[j] * cfg.kernel.eval(&x[i], &x[j]);
            q[i * n + j] = v;
            q[j * n + i] = v;
        }
    }

    let solution = solve_dual(&q, &y, cfg);

    let mut support_vectors = Vec::new();
    let mut dual_coefs = Vec::new();
    for i in 0..n {
        // bound-clipped variables are exactly zero; tiny positive ones are
        // genuine when kernel values are huge
        if solution.alpha[i] > 0.0 {
            support_vectors.push(x[i].clone());
            dual_coefs.push(solution.alpha[i] * y[i]);
        }
    }
    if !solution.converged {
        log::warn!(
            "SMO stopped after {} steps without reaching KKT tolerance {}",
            solution.iterations,
            cfg.kkt_tolerance
        );
    }
    Ok(SvmModel {
        support_vectors,
        dual_coefs,
        bias: solution.bias,
        kernel: cfg.kernel,
        standardization,
        dim,
        c: cfg.c,
        converged: solution.converged,
        iterations: solution.iterations,
    })
}

struct DualSolution {
    alpha: Vec<f64>,
    bias: f64,
    converged: bool,
    iterations: usize,
}

fn can_move_up(y: f64, alpha: f64, c: f64) -> bool {
    (y > 0.0 && alpha < c) || (y < 0.0 && alpha > 0.0)
}

fn can_move_down(y: f64, alpha: f64, c: f64) -> bool {
    (y > 0.0 && alpha > 0.0) || (y < 0.0 && alpha < c)
}

fn solve_dual(q: &[f64], y: &[f64], cfg: &TrainConfig) -> DualSolution {
    let n = y.len();
    let c = cfg.c;
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];

    // seeded scan order decides which index wins exact ties
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.seed));

    let mut converged = false;
    let mut stalled = 0;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        // -y_t G_t = y_t - u_t, i.e. minus the bias-free prediction error
        let mut i = usize::MAX;
        let mut gmax = f64::NEG_INFINITY;
        let mut j = usize::MAX;
        let mut gmin = f64::INFINITY;
        for &t in &order {
            let v = -y[t] * grad[t];
            if can_move_up(y[t], alpha[t], c) && v > gmax {
                gmax = v;
                i = t;
            }
            if can_move_down(y[t], alpha[t], c) && v < gmin {
                gmin = v;
                j = t;
            }
        }
        if i == usize::MAX || j == usize::MAX || gmax - gmin < cfg.kkt_tolerance {
            converged = true;
            break;
        }
        iterations += 1;

        let (old_i, old_j) = (alpha[i], alpha[j]);
        let qii = q[i * n + i];
        let qjj = q[j * n + j];
        let qij = q[i * n + j];
        if y[i] != y[j] {
            let mut quad = qii + qjj + 2.0 * qij;
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let mut quad = qii + qjj - 2.0 * qij;
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        if di == 0.0 && dj == 0.0 {
            stalled += 1;
            if stalled >= cfg.max_passes {
                break;
            }
            continue;
        }
        stalled = 0;
        for (t, g) in grad.iter_mut().enumerate() {
            *g += q[i * n + t] * di + q[j * n + t] * dj;
        }
    }

    DualSolution {
        bias: bias_from_gradient(&alpha, &grad, y, c),
        alpha,
        converged,
        iterations,
    }
}

/// Average of `y_i G_i` over free variables (negated, since the decision
/// function adds the bias); midpoint of the feasible interval otherwise.
fn bias_from_gradient(alpha: &[f64], grad: &[f64], y: &[f64], c: f64) -> f64 {
    let mut upper = f64::INFINITY;
    let mut lower = f64::NEG_INFINITY;
    let mut free_sum = 0.0;
    let mut free = 0usize;
    for t in 0..y.len() {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                upper = upper.min(yg);
            } else {
                lower = lower.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                upper = upper.min(yg);
            } else {
                lower = lower.max(yg);
            }
        } else {
            free += 1;
            free_sum += yg;
        }
    }
    let rho = if free > 0 {
        free_sum / free as f64
    } else {
        (upper + lower) / 2.0
    };
    -rho
}
