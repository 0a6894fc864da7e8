//! Numerical falsification probes for the structural lemmas of the Hedge
//! map. Each probe draws seeded samples, measures the quantity the lemma
//! constrains, and classifies every sample as consistent, violated, or not
//! applicable (when the lemma's hypotheses do not hold at measurable scale).
//!
//! Probes are instruments, not proofs: verdicts carry the tolerance used and
//! every sample is recorded so that any verdict can be recomputed from the
//! report alone.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::game::SymmetricGame;

use super::{hedge_step, re_alpha_derivative, relative_entropy, FloatGame, FloatStrategy};

/// Spread below which carrier payoffs count as constant (an unmeasurable or
/// fixed-point sample).
const SPREAD_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeLemma {
    /// `RE(Y, T_alpha(X))` is convex in alpha.
    Convexity,
    /// The map strictly improves the payoff of interior non-fixed points.
    BetterResponse,
    /// RE to a best response decreases; RE to any improving direction
    /// decreases for small alpha.
    Stability,
    /// RE to a weakly-worse strategy inside the carrier strictly increases.
    Instability,
    /// Closed-form RE derivative matches centered finite differences.
    Derivative,
}

impl ProbeLemma {
    pub fn id(&self) -> &'static str {
        match self {
            ProbeLemma::Convexity => "convexity",
            ProbeLemma::BetterResponse => "better-response",
            ProbeLemma::Stability => "stability",
            ProbeLemma::Instability => "instability",
            ProbeLemma::Derivative => "derivative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Violated,
    NotApplicable,
}

/// One recorded draw: inputs, measured quantities, verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeSample {
    pub x: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<f64>>,
    pub alphas: Vec<f64>,
    pub measurements: BTreeMap<String, f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeReport {
    pub lemma: ProbeLemma,
    pub tolerance: f64,
    pub seed: u64,
    pub consistent: usize,
    pub violated: usize,
    pub not_applicable: usize,
    pub samples: Vec<ProbeSample>,
}

impl ProbeReport {
    fn new(lemma: ProbeLemma, tolerance: f64, seed: u64) -> Self {
        ProbeReport {
            lemma,
            tolerance,
            seed,
            consistent: 0,
            violated: 0,
            not_applicable: 0,
            samples: Vec::new(),
        }
    }

    fn push(&mut self, sample: ProbeSample) {
        match sample.verdict {
            Verdict::Consistent => self.consistent += 1,
            Verdict::Violated => self.violated += 1,
            Verdict::NotApplicable => self.not_applicable += 1,
        }
        self.samples.push(sample);
    }

    pub fn total(&self) -> usize {
        self.consistent + self.violated + self.not_applicable
    }

    /// Fold another report of the same lemma and tolerance into this one
    /// (used when sweeping many games).
    pub fn merge(&mut self, other: ProbeReport) {
        debug_assert_eq!(self.lemma, other.lemma);
        self.consistent += other.consistent;
        self.violated += other.violated;
        self.not_applicable += other.not_applicable;
        self.samples.extend(other.samples);
    }
}

fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Interior point of the simplex via normalized exponential draws.
fn sample_interior(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

/// Interior point with every coordinate bounded away from zero (mass floor
/// `floor_mix / n`), so RE differences stay above float noise.
fn sample_interior_floored(rng: &mut ChaCha8Rng, n: usize, floor_mix: f64) -> Vec<f64> {
    let raw = sample_interior(rng, n);
    let u = 1.0 / n as f64;
    raw.into_iter().map(|v| (1.0 - floor_mix) * v + floor_mix * u).collect()
}

/// Arbitrary strategy: a random nonempty support with an interior point on it.
fn sample_any(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let mask: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        if !mask.iter().any(|&b| b) {
            continue;
        }
        let mut out = vec![0.0; n];
        let mut total = 0.0;
        for (i, &keep) in mask.iter().enumerate() {
            if keep {
                let v = -(1.0 - rng.gen::<f64>()).ln();
                out[i] = v;
                total += v;
            }
        }
        for v in out.iter_mut() {
            *v /= total;
        }
        return out;
    }
}

fn spread_over(values: &[f64], indices: impl Iterator<Item = usize>) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in indices {
        lo = lo.min(values[i]);
        hi = hi.max(values[i]);
    }
    hi - lo
}

fn dot_f(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn positive_alphas(alphas: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = alphas.iter().copied().filter(|&a| a > 0.0).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Convexity of `alpha -> RE(Y, T_alpha(X))` for interior X and arbitrary Y:
/// every second difference over the alpha grid must stay above `-tol`.
///
/// Measurements: `min_second_difference`, `max_second_difference`,
/// `payoff_spread`.
pub fn probe_convexity(
    game: &SymmetricGame,
    samples: usize,
    alphas: &[f64],
    tol: f64,
    seed: u64,
) -> ProbeReport {
    let fgame = FloatGame::from(game);
    let n = game.n();
    let mut grid: Vec<f64> = alphas.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut report = ProbeReport::new(ProbeLemma::Convexity, tol, seed);
    for k in 0..samples {
        let mut rng = sample_rng(seed, k as u64);
        let x = FloatStrategy::new(sample_interior(&mut rng, n)).expect("normalized draw");
        let y = FloatStrategy::new(sample_any(&mut rng, n)).expect("normalized draw");

        let f: Vec<f64> = grid
            .iter()
            .map(|&a| {
                let stepped = hedge_step(&fgame, &x, a).expect("guarded step in probe range");
                relative_entropy(&y, &stepped).expect("interior image contains any carrier")
            })
            .collect();

        // slope differences are sign-correct on any grid; on a uniform grid
        // scale back to the raw second difference the tolerance speaks about
        let uniform = grid.windows(2).all(|w| {
            ((w[1] - w[0]) - (grid[1] - grid[0])).abs() < 1e-12
        });
        let mut min_d2 = f64::INFINITY;
        let mut max_d2 = f64::NEG_INFINITY;
        for i in 1..grid.len() - 1 {
            let h1 = grid[i] - grid[i - 1];
            let h2 = grid[i + 1] - grid[i];
            let d2 = if uniform {
                f[i - 1] - 2.0 * f[i] + f[i + 1]
            } else {
                (f[i + 1] - f[i]) / h2 - (f[i] - f[i - 1]) / h1
            };
            min_d2 = min_d2.min(d2);
            max_d2 = max_d2.max(d2);
        }

        let u = fgame.payoff_vector(x.weights());
        let spread = spread_over(&u, 0..n);
        let verdict = if min_d2 >= -tol { Verdict::Consistent } else { Verdict::Violated };
        let mut measurements = BTreeMap::new();
        measurements.insert("min_second_difference".into(), min_d2);
        measurements.insert("max_second_difference".into(), max_d2);
        measurements.insert("payoff_spread".into(), spread);
        report.push(ProbeSample {
            x: x.weights().to_vec(),
            y: Some(y.weights().to_vec()),
            alphas: grid.clone(),
            measurements,
            verdict,
        });
    }
    report
}

/// Strict payoff improvement `(T(X) - X) . CX > tol` for interior
/// non-fixed-point X at every sampled positive alpha.
///
/// Measurements: `min_gap`, `payoff_spread`.
pub fn probe_better_response(
    game: &SymmetricGame,
    samples: usize,
    alphas: &[f64],
    tol: f64,
    seed: u64,
) -> ProbeReport {
    let fgame = FloatGame::from(game);
    let n = game.n();
    let grid = positive_alphas(alphas);
    let mut report = ProbeReport::new(ProbeLemma::BetterResponse, tol, seed);
    for k in 0..samples {
        let mut rng = sample_rng(seed, k as u64);
        let x = FloatStrategy::new(sample_interior(&mut rng, n)).expect("normalized draw");
        let u = fgame.payoff_vector(x.weights());
        let spread = spread_over(&u, 0..n);

        let mut measurements = BTreeMap::new();
        measurements.insert("payoff_spread".into(), spread);
        if spread <= SPREAD_FLOOR {
            // fixed point at float scale: the lemma exempts it
            report.push(ProbeSample {
                x: x.weights().to_vec(),
                y: None,
                alphas: grid.clone(),
                measurements,
                verdict: Verdict::NotApplicable,
            });
            continue;
        }

        let x_payoff = dot_f(x.weights(), &u);
        let min_gap = grid
            .iter()
            .map(|&a| {
                let stepped = hedge_step(&fgame, &x, a).expect("guarded step in probe range");
                dot_f(stepped.weights(), &u) - x_payoff
            })
            .fold(f64::INFINITY, f64::min);
        measurements.insert("min_gap".into(), min_gap);
        let verdict = if min_gap > tol { Verdict::Consistent } else { Verdict::Violated };
        report.push(ProbeSample {
            x: x.weights().to_vec(),
            y: None,
            alphas: grid.clone(),
            measurements,
            verdict,
        });
    }
    report
}

/// Stability toward improving strategies, two hypotheses per sample:
///
/// - best response: with Y the pure best response to interior non-fixed X,
///   `RE(Y, T_alpha(X)) < RE(Y, X)` at every sampled alpha;
/// - improving direction: with any Y satisfying `(Y - X) . CX > 0`, the RE
///   decreases for sufficiently small alpha (checked on a descending ladder
///   below the smallest sampled alpha).
///
/// Measurements: `br_min_decrease`, `small_alpha_decrease`,
/// `improving_gap`, `payoff_spread`.
pub fn probe_stability(
    game: &SymmetricGame,
    samples: usize,
    alphas: &[f64],
    tol: f64,
    seed: u64,
) -> ProbeReport {
    let fgame = FloatGame::from(game);
    let n = game.n();
    let grid = positive_alphas(alphas);
    let mut report = ProbeReport::new(ProbeLemma::Stability, tol, seed);
    for k in 0..samples {
        let mut rng = sample_rng(seed, k as u64);
        // mass floor keeps RE differences measurable
        let x =
            FloatStrategy::new(sample_interior_floored(&mut rng, n, 0.2)).expect("normalized");
        let u = fgame.payoff_vector(x.weights());
        let spread = spread_over(&u, 0..n);

        let mut measurements = BTreeMap::new();
        measurements.insert("payoff_spread".into(), spread);
        if spread <= SPREAD_FLOOR {
            report.push(ProbeSample {
                x: x.weights().to_vec(),
                y: None,
                alphas: grid.clone(),
                measurements,
                verdict: Verdict::NotApplicable,
            });
            continue;
        }

        // best-response arm
        let best = u
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(b.0.cmp(&a.0)))
            .map(|(i, _)| i)
            .expect("nonempty payoff vector");
        let mut y_br = vec![0.0; n];
        y_br[best] = 1.0;
        let y_br = FloatStrategy::new(y_br).expect("pure strategy");
        let re_before = relative_entropy(&y_br, &x).expect("interior x");
        let br_min_decrease = grid
            .iter()
            .map(|&a| {
                let stepped = hedge_step(&fgame, &x, a).expect("guarded step");
                re_before - relative_entropy(&y_br, &stepped).expect("interior image")
            })
            .fold(f64::INFINITY, f64::min);
        measurements.insert("br_min_decrease".into(), br_min_decrease);

        // improving-direction arm: Y strictly better against X but not
        // necessarily a best response
        let beta = rng.gen_range(0.3..0.9);
        let y_mix: Vec<f64> = x
            .weights()
            .iter()
            .enumerate()
            .map(|(i, &v)| (1.0 - beta) * v + if i == best { beta } else { 0.0 })
            .collect();
        let y_mix = FloatStrategy::new(y_mix).expect("convex mix");
        let improving_gap = dot_f(y_mix.weights(), &u) - dot_f(x.weights(), &u);
        measurements.insert("improving_gap".into(), improving_gap);

        let alpha_base = grid.first().copied().unwrap_or(0.1);
        let ladder = [alpha_base, alpha_base / 10.0, alpha_base / 100.0, alpha_base / 1000.0];
        let re_mix_before = relative_entropy(&y_mix, &x).expect("interior x");
        let mut small_alpha_decrease = f64::NEG_INFINITY;
        for &a in ladder.iter() {
            let stepped = hedge_step(&fgame, &x, a).expect("guarded step");
            let d = re_mix_before - relative_entropy(&y_mix, &stepped).expect("interior image");
            small_alpha_decrease = d;
            if d > tol {
                break; // decrease observed at this scale
            }
        }
        measurements.insert("small_alpha_decrease".into(), small_alpha_decrease);

        let verdict = if br_min_decrease > tol && small_alpha_decrease > tol {
            Verdict::Consistent
        } else {
            Verdict::Violated
        };
        report.push(ProbeSample {
            x: x.weights().to_vec(),
            y: Some(y_br.weights().to_vec()),
            alphas: grid.clone(),
            measurements,
            verdict,
        });
    }
    report
}

/// Instability: with `carrier(Y)` inside `carrier(X)`, `Y != X`,
/// non-constant carrier payoffs, and `X . CX >= Y . CX`, the relative
/// entropy `RE(Y, .)` strictly increases at every sampled positive alpha.
///
/// Measurements: `min_increase`, `self_payoff_gap`, `carrier_spread`.
pub fn probe_instability(
    game: &SymmetricGame,
    samples: usize,
    alphas: &[f64],
    tol: f64,
    seed: u64,
) -> ProbeReport {
    let fgame = FloatGame::from(game);
    let n = game.n();
    let grid = positive_alphas(alphas);
    let mut report = ProbeReport::new(ProbeLemma::Instability, tol, seed);
    for k in 0..samples {
        let mut rng = sample_rng(seed, k as u64);

        // carrier of X: full with probability 1/2, else a random subset of size >= 2
        let support: Vec<usize> = if n >= 3 && rng.gen_bool(0.5) {
            let mut s: Vec<usize> = (0..n).collect();
            while s.len() > 2 && rng.gen_bool(0.4) {
                let drop = rng.gen_range(0..s.len());
                s.remove(drop);
            }
            s
        } else {
            (0..n).collect()
        };
        let inner = sample_interior_floored(&mut rng, support.len(), 0.2);
        let mut xw = vec![0.0; n];
        for (slot, &i) in support.iter().enumerate() {
            xw[i] = inner[slot];
        }
        let x = FloatStrategy::new(xw).expect("normalized draw");

        let u = fgame.payoff_vector(x.weights());
        let carrier_spread = spread_over(&u, support.iter().copied());
        let mut measurements = BTreeMap::new();
        measurements.insert("carrier_spread".into(), carrier_spread);
        if carrier_spread <= SPREAD_FLOOR {
            report.push(ProbeSample {
                x: x.weights().to_vec(),
                y: None,
                alphas: grid.clone(),
                measurements,
                verdict: Verdict::NotApplicable,
            });
            continue;
        }

        // Y concentrates toward the worst carrier payoff, so X . CX >= Y . CX
        // holds strictly; alternate pure and mixed forms
        let worst = support
            .iter()
            .copied()
            .min_by(|&a, &b| u[a].partial_cmp(&u[b]).unwrap())
            .expect("nonempty support");
        let y = if k % 2 == 0 {
            let mut yw = vec![0.0; n];
            yw[worst] = 1.0;
            FloatStrategy::new(yw).expect("pure strategy")
        } else {
            let beta = rng.gen_range(0.3..0.9);
            let yw: Vec<f64> = x
                .weights()
                .iter()
                .enumerate()
                .map(|(i, &v)| (1.0 - beta) * v + if i == worst { beta } else { 0.0 })
                .collect();
            FloatStrategy::new(yw).expect("convex mix")
        };
        let self_gap = dot_f(x.weights(), &u) - dot_f(y.weights(), &u);
        measurements.insert("self_payoff_gap".into(), self_gap);

        let re_before = relative_entropy(&y, &x).expect("carrier(Y) inside carrier(X)");
        let min_increase = grid
            .iter()
            .map(|&a| {
                let stepped = hedge_step(&fgame, &x, a).expect("guarded step");
                relative_entropy(&y, &stepped).expect("carrier preserved") - re_before
            })
            .fold(f64::INFINITY, f64::min);
        measurements.insert("min_increase".into(), min_increase);

        let verdict = if min_increase > tol { Verdict::Consistent } else { Verdict::Violated };
        report.push(ProbeSample {
            x: x.weights().to_vec(),
            y: Some(y.weights().to_vec()),
            alphas: grid.clone(),
            measurements,
            verdict,
        });
    }
    report
}

/// Closed-form derivative against a centered finite difference of
/// `alpha -> RE(Y, T_alpha(X))`. Consistent when the difference is within
/// `tol * max(1, |closed|)`.
///
/// Measurements: `closed_form`, `finite_difference`, `relative_error`.
pub fn probe_derivative(
    game: &SymmetricGame,
    samples: usize,
    alphas: &[f64],
    tol: f64,
    seed: u64,
) -> ProbeReport {
    let fgame = FloatGame::from(game);
    let n = game.n();
    let grid = positive_alphas(alphas);
    let mut report = ProbeReport::new(ProbeLemma::Derivative, tol, seed);
    for k in 0..samples {
        let mut rng = sample_rng(seed, k as u64);
        let x = FloatStrategy::new(sample_interior(&mut rng, n)).expect("normalized draw");
        let y = FloatStrategy::new(sample_any(&mut rng, n)).expect("normalized draw");
        let alpha = if grid.is_empty() {
            rng.gen_range(0.05..4.0)
        } else {
            grid[k % grid.len()]
        };

        let closed = re_alpha_derivative(&fgame, &x, &y, alpha).expect("interior x");
        let h = 1e-5 * alpha.max(1.0);
        let h = h.min(alpha / 2.0); // keep alpha - h positive
        let re_at = |a: f64| {
            let stepped = hedge_step(&fgame, &x, a).expect("guarded step");
            relative_entropy(&y, &stepped).expect("interior image")
        };
        let fd = (re_at(alpha + h) - re_at(alpha - h)) / (2.0 * h);
        let rel_err = (closed - fd).abs() / closed.abs().max(1.0);

        let mut measurements = BTreeMap::new();
        measurements.insert("closed_form".into(), closed);
        measurements.insert("finite_difference".into(), fd);
        measurements.insert("relative_error".into(), rel_err);
        let verdict = if rel_err <= tol { Verdict::Consistent } else { Verdict::Violated };
        report.push(ProbeSample {
            x: x.weights().to_vec(),
            y: Some(y.weights().to_vec()),
            alphas: vec![alpha],
            measurements,
            verdict,
        });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rps() -> SymmetricGame {
        SymmetricGame::from_ints(&[&[0, -1, 1], &[1, 0, -1], &[-1, 1, 0]])
    }

    fn coordination() -> SymmetricGame {
        SymmetricGame::from_ints(&[&[1, 0], &[0, 1]])
    }

    fn default_grid() -> Vec<f64> {
        (0..33).map(|i| i as f64 * 0.25).collect()
    }

    #[test]
    fn convexity_holds_on_rps_and_coordination() {
        for game in [rps(), coordination()] {
            let report = probe_convexity(&game, 50, &default_grid(), 1e-9, 17);
            assert_eq!(report.violated, 0, "violations: {:?}", report.samples);
            assert_eq!(report.total(), 50);
        }
    }

    #[test]
    fn better_response_strictly_positive() {
        for game in [rps(), coordination()] {
            let report = probe_better_response(&game, 50, &[0.1, 1.0, 10.0], 1e-12, 17);
            assert_eq!(report.violated, 0);
        }
    }

    #[test]
    fn stability_decreases_re_toward_best_response() {
        // includes the worked case X=(0.8,0.2) on the coordination game
        let game = coordination();
        let fgame = FloatGame::from(&game);
        let x = FloatStrategy::new(vec![0.8, 0.2]).unwrap();
        let y = FloatStrategy::new(vec![1.0, 0.0]).unwrap(); // best response: (CX)_1 = 0.8
        let before = relative_entropy(&y, &x).unwrap();
        for alpha in [0.1, 1.0, 10.0] {
            let after = relative_entropy(&y, &hedge_step(&fgame, &x, alpha).unwrap()).unwrap();
            assert!(after < before, "alpha {alpha}: {after} !< {before}");
        }

        let report = probe_stability(&game, 50, &[0.1, 1.0, 10.0], 1e-12, 17);
        assert_eq!(report.violated, 0, "violations: {:?}", report.samples);
    }

    #[test]
    fn instability_increases_re_on_rps() {
        // zero-sum symmetric games satisfy the hypotheses identically:
        // X . CX = 0 = Y . CX
        let report = probe_instability(&rps(), 50, &[0.1, 1.0, 10.0], 1e-12, 17);
        assert_eq!(report.violated, 0, "violations: {:?}", report.samples);
    }

    #[test]
    fn rps_interior_trajectory_case() {
        // RE(center, .) strictly increases from X=(0.5,0.3,0.2)
        let fgame = FloatGame::from(&rps());
        let x = FloatStrategy::new(vec![0.5, 0.3, 0.2]).unwrap();
        let center = FloatStrategy::uniform(3);
        let mut cur = x;
        let mut last = relative_entropy(&center, &cur).unwrap();
        for _ in 0..20 {
            cur = hedge_step(&fgame, &cur, 1.0).unwrap();
            let re = relative_entropy(&center, &cur).unwrap();
            assert!(re > last);
            last = re;
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        for game in [rps(), coordination()] {
            let report = probe_derivative(&game, 100, &[0.25, 0.5, 1.0, 2.0], 1e-6, 17);
            assert_eq!(report.violated, 0, "violations: {:?}", report.samples);
        }
    }

    #[test]
    fn fixed_point_samples_are_not_applicable() {
        // constant matrix: every strategy is a fixed point, probes must
        // report equality/not-applicable rather than violations
        let game = SymmetricGame::from_ints(&[&[2, 2], &[2, 2]]);
        let br = probe_better_response(&game, 20, &[0.1, 1.0], 1e-12, 17);
        assert_eq!(br.violated, 0);
        assert_eq!(br.not_applicable, 20);
        let st = probe_stability(&game, 20, &[0.1, 1.0], 1e-12, 17);
        assert_eq!(st.violated, 0);
        assert_eq!(st.not_applicable, 20);
        let inst = probe_instability(&game, 20, &[0.1, 1.0], 1e-12, 17);
        assert_eq!(inst.violated, 0);
        assert_eq!(inst.not_applicable, 20);
    }

    #[test]
    fn probe_reports_are_reproducible_from_seed() {
        let a = probe_convexity(&rps(), 10, &default_grid(), 1e-9, 99);
        let b = probe_convexity(&rps(), 10, &default_grid(), 1e-9, 99);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
