//! Seeded random-game generation and the structural-claim counterexample
//! hunt: every generated game runs through the full solve pipeline and is
//! classified; any subgame with neither an equalizer nor a weakly dominated
//! pure strategy becomes a replayable, shrunken counterexample report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::game::SymmetricGame;
use crate::hedge::{
    probe_better_response, probe_convexity, probe_derivative, probe_instability,
    probe_stability, ProbeLemma, ProbeReport,
};
use crate::rational::Rat;
use crate::solver::{solve, SolveResult, StepRecord, TheoremViolation, ViolationKind};

/// Deterministic recipe for a family of random integer games:
/// `(spec, trial index)` fully determines the game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n_min: usize,
    pub n_max: usize,
    /// Entries are integers drawn uniformly from `[-entry_bound, entry_bound]`.
    pub entry_bound: i64,
    pub trials: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(n_min: usize, n_max: usize, entry_bound: i64, trials: usize, seed: u64) -> Self {
        assert!(n_min >= 1 && n_max >= n_min, "strategy-count range must be nonempty");
        assert!(entry_bound >= 0, "entry bound must be nonnegative");
        GenSpec { n_min, n_max, entry_bound, trials, seed }
    }
}

/// Generate the game for one trial. Each trial gets its own ChaCha stream,
/// so games are independent and the mapping is stable under parallelism.
pub fn generate(spec: &GenSpec, trial: usize) -> SymmetricGame {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(trial as u64);
    let n = rng.gen_range(spec.n_min..=spec.n_max);
    let k = spec.entry_bound;
    let rows: Vec<Vec<Rat>> = (0..n)
        .map(|_| (0..n).map(|_| Rat::from_int(rng.gen_range(-k..=k))).collect())
        .collect();
    SymmetricGame::from_rows(rows).expect("generated matrix is square and nonempty")
}

/// How a single trial ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialClass {
    /// Solved with no elimination step (equalizer at the top level, or 1x1).
    EqualizerFound,
    /// Solved after at least one weak-dominance elimination; output verified.
    DominatedFound,
    /// A subgame had neither an equalizer nor a dominated pure strategy.
    TheoremViolation,
    /// The assembled strategy failed the exact Nash check.
    UnverifiedOutput,
}

pub fn classify(result: &SolveResult) -> TrialClass {
    match result {
        SolveResult::Certificate(c) => {
            let eliminated =
                c.steps.iter().any(|s| matches!(s, StepRecord::Elimination { .. }));
            if eliminated {
                TrialClass::DominatedFound
            } else {
                TrialClass::EqualizerFound
            }
        }
        SolveResult::Violation(v) => match v.kind {
            ViolationKind::NoEqualizerNoDominated => TrialClass::TheoremViolation,
            ViolationKind::UnverifiedOutput => TrialClass::UnverifiedOutput,
        },
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HuntCounts {
    pub equalizer_found: usize,
    pub dominated_found: usize,
    pub theorem_violations: usize,
    pub unverified_outputs: usize,
}

impl HuntCounts {
    pub fn total(&self) -> usize {
        self.equalizer_found
            + self.dominated_found
            + self.theorem_violations
            + self.unverified_outputs
    }

    fn add(&mut self, class: TrialClass) {
        match class {
            TrialClass::EqualizerFound => self.equalizer_found += 1,
            TrialClass::DominatedFound => self.dominated_found += 1,
            TrialClass::TheoremViolation => self.theorem_violations += 1,
            TrialClass::UnverifiedOutput => self.unverified_outputs += 1,
        }
    }
}

/// Complete reproduction data for one violating trial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub trial: usize,
    pub spec: GenSpec,
    pub game: SymmetricGame,
    pub violation: TheoremViolation,
    /// Greedy one-strategy-at-a-time shrink of `game` that still violates.
    pub minimized_game: SymmetricGame,
    pub minimized_violation: TheoremViolation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HuntReport {
    pub spec: GenSpec,
    pub counts: HuntCounts,
    pub counterexamples: Vec<CounterexampleReport>,
}

impl HuntReport {
    pub fn found_violations(&self) -> bool {
        self.counts.theorem_violations + self.counts.unverified_outputs > 0
    }
}

/// Run the hunt serially.
pub fn hunt(spec: &GenSpec) -> HuntReport {
    let results: Vec<(TrialClass, Option<CounterexampleReport>)> =
        (0..spec.trials).map(|t| run_trial(spec, t)).collect();
    aggregate(spec, results)
}

/// Run the hunt on a rayon pool with `jobs` workers (`None` = rayon default).
/// Trials derive per-trial seeds, so the report is identical to a serial run.
pub fn hunt_parallel(spec: &GenSpec, jobs: Option<usize>) -> HuntReport {
    let run = || {
        let results: Vec<(TrialClass, Option<CounterexampleReport>)> =
            (0..spec.trials).into_par_iter().map(|t| run_trial(spec, t)).collect();
        aggregate(spec, results)
    };
    match jobs {
        None => run(),
        Some(workers) => rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("worker pool construction")
            .install(run),
    }
}

fn run_trial(spec: &GenSpec, trial: usize) -> (TrialClass, Option<CounterexampleReport>) {
    let game = generate(spec, trial);
    let result = solve(&game);
    let class = classify(&result);
    let report = match result {
        SolveResult::Violation(violation) => {
            let (minimized_game, minimized_violation) = shrink_violation(&game, &violation);
            Some(CounterexampleReport {
                trial,
                spec: spec.clone(),
                game,
                violation,
                minimized_game,
                minimized_violation,
            })
        }
        SolveResult::Certificate(_) => None,
    };
    (class, report)
}

fn aggregate(
    spec: &GenSpec,
    results: Vec<(TrialClass, Option<CounterexampleReport>)>,
) -> HuntReport {
    let mut counts = HuntCounts::default();
    let mut counterexamples = Vec::new();
    for (class, report) in results {
        counts.add(class);
        if let Some(r) = report {
            counterexamples.push(r);
        }
    }
    HuntReport { spec: spec.clone(), counts, counterexamples }
}

/// Greedy shrink: repeatedly try removing one pure strategy; keep the first
/// removal that still yields a violating run. Deterministic by scan order.
fn shrink_violation(
    game: &SymmetricGame,
    violation: &TheoremViolation,
) -> (SymmetricGame, TheoremViolation) {
    let mut current = game.clone();
    let mut current_violation = violation.clone();
    'outer: loop {
        if current.n() < 2 {
            break;
        }
        for i in 0..current.n() {
            let (candidate, _) =
                current.eliminate(i).expect("index in range, size checked above");
            if let SolveResult::Violation(v) = solve(&candidate) {
                current = candidate;
                current_violation = v;
                continue 'outer;
            }
        }
        break;
    }
    (current, current_violation)
}

/// Deterministically re-run a recorded counterexample.
pub fn replay(report: &CounterexampleReport) -> SolveResult {
    solve(&report.game)
}

/// Sweep a probe over `spec.trials` generated games, one or more samples per
/// game, merging everything into a single report. Per-game seeds derive from
/// the master seed, so the sweep is reproducible and order-independent.
pub fn run_probe(
    lemma: ProbeLemma,
    spec: &GenSpec,
    samples_per_game: usize,
    alphas: &[f64],
    tol: f64,
) -> ProbeReport {
    let probe = match lemma {
        ProbeLemma::Convexity => probe_convexity,
        ProbeLemma::BetterResponse => probe_better_response,
        ProbeLemma::Stability => probe_stability,
        ProbeLemma::Instability => probe_instability,
        ProbeLemma::Derivative => probe_derivative,
    };
    let mut merged: Option<ProbeReport> = None;
    for t in 0..spec.trials {
        let game = generate(spec, t);
        let game_seed = spec.seed.wrapping_add((t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let sub = probe(&game, samples_per_game, alphas, tol, game_seed);
        match merged.as_mut() {
            None => merged = Some(sub),
            Some(m) => m.merge(sub),
        }
    }
    let mut report = merged.expect("probe sweep needs at least one trial");
    report.seed = spec.seed;
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let spec = GenSpec::new(2, 4, 3, 10, 42);
        for t in 0..10 {
            assert_eq!(generate(&spec, t), generate(&spec, t));
        }
    }

    #[test]
    fn generation_respects_ranges() {
        let spec = GenSpec::new(3, 3, 1, 100, 7);
        for t in 0..100 {
            let g = generate(&spec, t);
            assert_eq!(g.n(), 3);
            for i in 0..3 {
                for j in 0..3 {
                    let v = g.entry(i, j);
                    assert!(v.is_integer());
                    assert!(*v >= Rat::from_int(-1) && *v <= Rat::from_int(1));
                }
            }
        }
    }

    #[test]
    fn distinct_trials_give_distinct_games() {
        // K=5, n in {3,4}: the family is large enough that 100 draws
        // collide with negligible probability
        let spec = GenSpec::new(3, 4, 5, 100, 11);
        let games: Vec<SymmetricGame> = (0..100).map(|t| generate(&spec, t)).collect();
        let mut distinct = 0;
        for (i, g) in games.iter().enumerate() {
            if !games[..i].contains(g) {
                distinct += 1;
            }
        }
        assert_eq!(distinct, 100);
    }

    #[test]
    fn classification_buckets_are_exhaustive() {
        let spec = GenSpec::new(2, 4, 2, 200, 42);
        let report = hunt(&spec);
        assert_eq!(report.counts.total(), 200);
    }

    #[test]
    fn constant_column_family_is_all_equalizer() {
        // hand-built: every generated game replaced by a constant-column game
        for n in 2..=4 {
            let rows: Vec<Vec<Rat>> = (0..n)
                .map(|i| (0..n).map(|j| Rat::from_int(if j == 0 { 3 } else { i as i64 })).collect())
                .collect();
            let game = SymmetricGame::from_rows(rows).unwrap();
            let result = solve(&game);
            assert_eq!(classify(&result), TrialClass::EqualizerFound);
        }
    }

    #[test]
    fn pd_classifies_as_dominated_found() {
        let pd = SymmetricGame::from_ints(&[&[3, 0], &[5, 1]]);
        assert_eq!(classify(&solve(&pd)), TrialClass::DominatedFound);
    }

    #[test]
    fn parallel_and_serial_hunts_agree() {
        let spec = GenSpec::new(2, 4, 3, 300, 123);
        let serial = hunt(&spec);
        let parallel = hunt_parallel(&spec, Some(4));
        assert_eq!(
            serde_json::to_string(&serial).unwrap(),
            serde_json::to_string(&parallel).unwrap()
        );
    }

    #[test]
    fn counterexamples_replay_identically() {
        // hunt a wide family; if violations exist they must replay exactly
        let spec = GenSpec::new(2, 5, 2, 500, 99);
        let report = hunt(&spec);
        for entry in &report.counterexamples {
            match replay(entry) {
                SolveResult::Violation(v) => {
                    assert_eq!(
                        serde_json::to_string(&v).unwrap(),
                        serde_json::to_string(&entry.violation).unwrap()
                    );
                }
                SolveResult::Certificate(_) => panic!("replay lost the violation"),
            }
        }
    }

    #[test]
    fn probe_sweep_merges_counts() {
        let spec = GenSpec::new(2, 3, 3, 5, 11);
        let report = run_probe(ProbeLemma::Convexity, &spec, 4, &[0.0, 0.5, 1.0, 1.5], 1e-9, );
        assert_eq!(report.total(), 20);
    }
}
