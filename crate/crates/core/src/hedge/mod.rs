//! The multiplicative-weights (Hedge) map in guarded floating point, with
//! relative-entropy instrumentation and numerical probes for its structural
//! lemmas.
//!
//! Exact arithmetic stops at the exponential map, so everything here runs in
//! doubles with explicit tolerances. The map is evaluated in shifted form
//! (subtracting the maximum support payoff inside the exponentials, which is
//! algebraically neutral) and renormalized each step; overflow, NaN, and
//! underflow of a positive coordinate are hard errors, never clamped.

mod probes;

pub use probes::{
    probe_better_response, probe_convexity, probe_derivative, probe_instability,
    probe_stability, ProbeLemma, ProbeReport, ProbeSample, Verdict,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{MixedStrategy, SymmetricGame};
use crate::rational::Rat;

/// Tolerance on the simplex-sum invariant of float strategies.
pub const SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HedgeError {
    #[error("learning rate must be nonnegative, got {0}")]
    NegativeAlpha(f64),
    #[error("strategy is not a float probability vector: {0}")]
    InvalidStrategy(String),
    #[error("expected dimension {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("strategy must be interior (all coordinates positive)")]
    NotInterior,
    #[error("carrier of the first argument must lie inside the carrier of the second")]
    CarrierViolation,
    #[error("numeric failure in the hedge map: {0}")]
    Numeric(String),
}

/// Float shadow of a mixed strategy. Entries are nonnegative and sum to one
/// within [`SUM_TOLERANCE`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FloatStrategy {
    p: Vec<f64>,
}

impl FloatStrategy {
    pub fn new(p: Vec<f64>) -> Result<Self, HedgeError> {
        if p.is_empty() {
            return Err(HedgeError::InvalidStrategy("empty vector".into()));
        }
        for (i, &v) in p.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(HedgeError::InvalidStrategy(format!("entry {i} is {v}")));
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(HedgeError::InvalidStrategy(format!("entries sum to {sum}")));
        }
        Ok(FloatStrategy { p })
    }

    pub fn from_exact(x: &MixedStrategy) -> Self {
        let mut p = x.to_f64s();
        let sum: f64 = p.iter().sum();
        for v in p.iter_mut() {
            *v /= sum;
        }
        FloatStrategy { p }
    }

    pub fn uniform(n: usize) -> Self {
        FloatStrategy { p: vec![1.0 / n as f64; n] }
    }

    pub fn weights(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor rejects empty strategies
    }

    pub fn sum_error(&self) -> f64 {
        (self.p.iter().sum::<f64>() - 1.0).abs()
    }

    pub fn is_interior(&self) -> bool {
        self.p.iter().all(|&v| v > 0.0)
    }

    pub fn carrier_indices(&self) -> Vec<usize> {
        (0..self.p.len()).filter(|&i| self.p[i] > 0.0).collect()
    }
}

impl TryFrom<Vec<f64>> for FloatStrategy {
    type Error = HedgeError;
    fn try_from(p: Vec<f64>) -> Result<Self, HedgeError> {
        FloatStrategy::new(p)
    }
}

impl From<FloatStrategy> for Vec<f64> {
    fn from(s: FloatStrategy) -> Vec<f64> {
        s.p
    }
}

/// Learning-rate and horizon parameters for a dynamics run. The rate must be
/// strictly positive here; `alpha = 0` is only meaningful in identity tests,
/// which call [`hedge_step`] directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HedgeParams {
    pub alpha: f64,
    pub steps: usize,
}

impl HedgeParams {
    pub fn new(alpha: f64, steps: usize) -> Result<Self, HedgeError> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(HedgeError::NegativeAlpha(alpha));
        }
        Ok(HedgeParams { alpha, steps })
    }
}

/// Double-precision copy of a game's payoff matrix, the arena the dynamics
/// run in.
#[derive(Debug, Clone)]
pub struct FloatGame {
    rows: Vec<Vec<f64>>,
}

impl FloatGame {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// `(CX)_i` for every i.
    pub fn payoff_vector(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(x).map(|(c, v)| c * v).sum())
            .collect()
    }
}

impl From<&SymmetricGame> for FloatGame {
    fn from(g: &SymmetricGame) -> Self {
        let n = g.n();
        let rows = (0..n)
            .map(|i| g.matrix().row(i).iter().map(Rat::to_f64).collect())
            .collect();
        FloatGame { rows }
    }
}

/// One application of the Hedge map at learning rate `alpha`:
/// each coordinate is reweighted by `exp(alpha * (CX)_i)` and the result
/// renormalized. Zero coordinates stay zero; positive coordinates must stay
/// positive or the step errors out.
pub fn hedge_step(
    game: &FloatGame,
    x: &FloatStrategy,
    alpha: f64,
) -> Result<FloatStrategy, HedgeError> {
    if !(alpha >= 0.0) {
        return Err(HedgeError::NegativeAlpha(alpha));
    }
    let n = game.n();
    if x.len() != n {
        return Err(HedgeError::Dimension { expected: n, got: x.len() });
    }
    let u = game.payoff_vector(x.weights());
    // shift by the maximum support payoff: algebraically neutral, keeps the
    // largest exponent at exactly zero
    let shift = x
        .weights()
        .iter()
        .zip(&u)
        .filter(|(&p, _)| p > 0.0)
        .map(|(_, &ui)| ui)
        .fold(f64::NEG_INFINITY, f64::max);

    let mut w = Vec::with_capacity(n);
    for (&p, &ui) in x.weights().iter().zip(&u) {
        if p == 0.0 {
            w.push(0.0);
            continue;
        }
        let scaled = p * (alpha * (ui - shift)).exp();
        if !scaled.is_finite() {
            return Err(HedgeError::Numeric(format!(
                "coordinate weight overflowed (payoff {ui}, alpha {alpha})"
            )));
        }
        if scaled == 0.0 {
            return Err(HedgeError::Numeric(format!(
                "positive coordinate underflowed to zero (payoff {ui}, alpha {alpha})"
            )));
        }
        w.push(scaled);
    }
    let total: f64 = w.iter().sum();
    if !total.is_normal() {
        return Err(HedgeError::Numeric(format!("normalizer degenerated to {total}")));
    }
    for v in w.iter_mut() {
        *v /= total;
    }
    FloatStrategy::new(w)
}

/// Relative entropy (Kullback-Leibler divergence) in its relaxed form: the
/// sum runs over the carrier of `p`, which must lie inside the carrier of
/// `q`.
pub fn relative_entropy(p: &FloatStrategy, q: &FloatStrategy) -> Result<f64, HedgeError> {
    if p.len() != q.len() {
        return Err(HedgeError::Dimension { expected: p.len(), got: q.len() });
    }
    let mut sum = 0.0;
    for (&pi, &qi) in p.weights().iter().zip(q.weights()) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return Err(HedgeError::CarrierViolation);
            }
            sum += pi * (pi / qi).ln();
        }
    }
    Ok(sum)
}

/// Closed-form derivative of `alpha -> RE(Y, T_alpha(X))` for interior `X`:
///
/// `(sum_j X(j) (CX)_j e^{alpha (CX)_j}) / (sum_j X(j) e^{alpha (CX)_j}) - Y . CX`
///
/// At `alpha = 0` this is exactly `(X - Y) . CX`.
pub fn re_alpha_derivative(
    game: &FloatGame,
    x: &FloatStrategy,
    y: &FloatStrategy,
    alpha: f64,
) -> Result<f64, HedgeError> {
    if !(alpha >= 0.0) {
        return Err(HedgeError::NegativeAlpha(alpha));
    }
    let n = game.n();
    if x.len() != n {
        return Err(HedgeError::Dimension { expected: n, got: x.len() });
    }
    if y.len() != n {
        return Err(HedgeError::Dimension { expected: n, got: y.len() });
    }
    if !x.is_interior() {
        return Err(HedgeError::NotInterior);
    }
    let u = game.payoff_vector(x.weights());
    let shift = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut num = 0.0;
    let mut den = 0.0;
    for (&p, &ui) in x.weights().iter().zip(&u) {
        let e = p * (alpha * (ui - shift)).exp();
        num += ui * e;
        den += e;
    }
    if !den.is_normal() {
        return Err(HedgeError::Numeric(format!("denominator degenerated to {den}")));
    }
    let y_payoff: f64 = y.weights().iter().zip(&u).map(|(a, b)| a * b).sum();
    Ok(num / den - y_payoff)
}

/// One row of a recorded trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryPoint {
    pub step: usize,
    pub x: FloatStrategy,
    /// `RE(reference, x)` at this step.
    pub re_to_reference: f64,
}

/// Iterate the map from `x0`, recording each iterate and its relative
/// entropy to a caller-supplied reference strategy (step 0 is the start).
pub fn trajectory(
    game: &FloatGame,
    x0: &FloatStrategy,
    params: &HedgeParams,
    reference: &FloatStrategy,
) -> Result<Vec<TrajectoryPoint>, HedgeError> {
    let mut out = Vec::with_capacity(params.steps + 1);
    let mut x = x0.clone();
    out.push(TrajectoryPoint {
        step: 0,
        re_to_reference: relative_entropy(reference, &x)?,
        x: x.clone(),
    });
    for step in 1..=params.steps {
        x = hedge_step(game, &x, params.alpha)?;
        out.push(TrajectoryPoint {
            step,
            re_to_reference: relative_entropy(reference, &x)?,
            x: x.clone(),
        });
    }
    Ok(out)
}
