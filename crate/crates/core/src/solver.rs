//! Symmetric equilibrium solver: check for an equalizer, otherwise eliminate
//! the first weakly dominated pure strategy and recurse, zero-padding the
//! subgame solution back up.
//!
//! The solver never takes the underlying structural claim on faith: if some
//! subgame has neither an equalizer nor a weakly dominated pure strategy, or
//! the assembled strategy fails the exact Nash check, a structured
//! [`TheoremViolation`] is returned instead of a guess. Every run emits a
//! replayable certificate chain.

use serde::{Deserialize, Serialize};

use crate::dominance::{first_weakly_dominated, DominanceWitness};
use crate::equalizer::{find_equalizer, EqualizerCertificate};
use crate::error::DimensionError;
use crate::game::{MixedStrategy, SymmetricGame};
use crate::oracle::is_symmetric_nash;
use crate::rational::Rat;

/// One step of the elimination/equalizer chain.
///
/// Indices are in the ORIGINAL game's coordinates (1-based in JSON);
/// dominance witnesses are in the coordinates of the subgame they were found
/// in, which replay reconstructs from the preceding eliminations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum StepRecord {
    /// The subgame over `indices` has an equalizer; its certificate is in
    /// subgame coordinates.
    Equalizer {
        #[serde(with = "crate::one_based::vec")]
        indices: Vec<usize>,
        certificate: EqualizerCertificate,
    },
    /// Pure strategy `index` (original coordinates) was weakly dominated in
    /// the current subgame.
    Elimination {
        #[serde(with = "crate::one_based")]
        index: usize,
        witness: DominanceWitness,
    },
    /// Recursion bottomed out at a single surviving strategy.
    Base {
        #[serde(with = "crate::one_based")]
        index: usize,
    },
}

/// Full evidence trail for one solver run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveCertificate {
    pub steps: Vec<StepRecord>,
    /// Final strategy in the original game's coordinates.
    pub x: MixedStrategy,
    #[serde(with = "crate::one_based::vec")]
    pub support: Vec<usize>,
    /// Result of the mandatory exact symmetric-Nash check of `x`.
    pub verified: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// A subgame with no equalizer and no weakly dominated pure strategy.
    NoEqualizerNoDominated,
    /// The assembled strategy failed the exact Nash check.
    UnverifiedOutput,
}

/// A constructive refutation candidate produced instead of an answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremViolation {
    pub kind: ViolationKind,
    /// The offending (sub)game, in the standard game-file shape.
    pub game: SymmetricGame,
    /// Original indices of the subgame's strategies (1-based in JSON).
    #[serde(with = "crate::one_based::vec")]
    pub index_map: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolveResult {
    Certificate(SolveCertificate),
    Violation(TheoremViolation),
}

impl SolveResult {
    pub fn is_verified_certificate(&self) -> bool {
        matches!(self, SolveResult::Certificate(c) if c.verified)
    }
}

/// Place a subgame strategy back into `n` coordinates via the index map,
/// zeros elsewhere.
pub fn zero_pad(
    y: &MixedStrategy,
    index_map: &[usize],
    n: usize,
) -> Result<MixedStrategy, DimensionError> {
    if y.len() != index_map.len() {
        return Err(DimensionError::Length { expected: index_map.len(), got: y.len() });
    }
    let mut weights = vec![Rat::zero(); n];
    for (w, &orig) in y.weights().iter().zip(index_map) {
        if orig >= n {
            return Err(DimensionError::IndexOutOfRange { index: orig, n });
        }
        weights[orig] = w.clone();
    }
    MixedStrategy::new(weights)
        .map_err(|e| DimensionError::Other(format!("zero-pad produced invalid strategy: {e}")))
}

/// Run the equalizer-or-eliminate loop on `game`.
///
/// Either a fully verified [`SolveCertificate`] comes back, or a
/// [`TheoremViolation`] naming the exact stage that failed. Nothing silent.
pub fn solve(game: &SymmetricGame) -> SolveResult {
    let n = game.n();
    let mut steps = Vec::new();
    // current subgame and its strategies' original indices
    let mut current = game.clone();
    let mut index_map: Vec<usize> = (0..n).collect();

    let final_sub: MixedStrategy = loop {
        if current.n() == 1 {
            steps.push(StepRecord::Base { index: index_map[0] });
            break MixedStrategy::pure(0, 1);
        }
        if let Some(certificate) = find_equalizer(&current) {
            let x = certificate.x.clone();
            steps.push(StepRecord::Equalizer { indices: index_map.clone(), certificate });
            break x;
        }
        match first_weakly_dominated(&current) {
            Some(witness) => {
                let sub_index = witness.index;
                let (next, local_map) = current
                    .eliminate(sub_index)
                    .expect("witness index is in range for the current subgame");
                steps.push(StepRecord::Elimination {
                    index: index_map[sub_index],
                    witness,
                });
                index_map = local_map.iter().map(|&k| index_map[k]).collect();
                current = next;
            }
            None => {
                return SolveResult::Violation(TheoremViolation {
                    kind: ViolationKind::NoEqualizerNoDominated,
                    detail: format!(
                        "subgame of size {} has no equalizer and no weakly dominated pure strategy after {} elimination(s)",
                        index_map.len(),
                        steps.len()
                    ),
                    game: current,
                    index_map,
                });
            }
        }
    };

    let x = zero_pad(&final_sub, &index_map, n)
        .expect("index map is a subset of original coordinates by construction");
    let report = is_symmetric_nash(game, &x).expect("padded strategy matches game dimension");
    let support = x.carrier().indices().to_vec();
    if !report.is_nash {
        return SolveResult::Violation(TheoremViolation {
            kind: ViolationKind::UnverifiedOutput,
            game: game.clone(),
            index_map: (0..n).collect(),
            detail: format!(
                "assembled strategy {:?} fails the exact Nash check: pure strategy {} attains {} against it",
                x.weights(),
                report.violating_index.map(|i| i + 1).unwrap_or(0),
                report.max_payoff
            ),
        });
    }
    SolveResult::Certificate(SolveCertificate { steps, x, support, verified: report.is_nash })
}

/// Re-execute a certificate's steps against `game`, checking every witness
/// and equalizer exactly and reproducing the final strategy.
pub fn replay_certificate(game: &SymmetricGame, cert: &SolveCertificate) -> Result<(), String> {
    let n = game.n();
    let mut current = game.clone();
    let mut index_map: Vec<usize> = (0..n).collect();
    let mut terminal: Option<MixedStrategy> = None;

    for step in &cert.steps {
        match step {
            StepRecord::Elimination { index, witness } => {
                let sub_index = index_map
                    .iter()
                    .position(|&orig| orig == *index)
                    .ok_or_else(|| format!("eliminated index {} not in subgame", index + 1))?;
                if witness.index != sub_index {
                    return Err(format!(
                        "witness index {} does not match subgame position {}",
                        witness.index, sub_index
                    ));
                }
                if !witness.verify(&current).map_err(|e| e.to_string())? {
                    return Err("elimination witness fails substitution".into());
                }
                let (next, local_map) =
                    current.eliminate(sub_index).map_err(|e| e.to_string())?;
                index_map = local_map.iter().map(|&k| index_map[k]).collect();
                current = next;
            }
            StepRecord::Equalizer { indices, certificate } => {
                if indices != &index_map {
                    return Err("equalizer step indices do not match surviving subgame".into());
                }
                let v = current.payoff_vector(&certificate.x).map_err(|e| e.to_string())?;
                if !v.iter().all(|p| *p == certificate.c) {
                    return Err("equalizer certificate fails substitution".into());
                }
                terminal = Some(certificate.x.clone());
            }
            StepRecord::Base { index } => {
                if index_map != vec![*index] {
                    return Err("base step does not match the surviving strategy".into());
                }
                terminal = Some(MixedStrategy::pure(0, 1));
            }
        }
    }

    let terminal = terminal.ok_or("certificate has no terminal step")?;
    let x = zero_pad(&terminal, &index_map, n).map_err(|e| e.to_string())?;
    if x != cert.x {
        return Err("replayed strategy differs from certificate".into());
    }
    let report = is_symmetric_nash(game, &x).map_err(|e| e.to_string())?;
    if report.is_nash != cert.verified {
        return Err("replayed verification flag differs from certificate".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rps() -> SymmetricGame {
        SymmetricGame::from_ints(&[&[0, -1, 1], &[1, 0, -1], &[-1, 1, 0]])
    }

    fn pd() -> SymmetricGame {
        SymmetricGame::from_ints(&[&[3, 0], &[5, 1]])
    }

    fn expect_certificate(result: SolveResult) -> SolveCertificate {
        match result {
            SolveResult::Certificate(c) => c,
            SolveResult::Violation(v) => panic!("unexpected violation: {v:?}"),
        }
    }

    #[test]
    fn singleton_game_solves_to_base_step() {
        let game = SymmetricGame::from_ints(&[&[5]]);
        let cert = expect_certificate(solve(&game));
        assert_eq!(cert.steps, vec![StepRecord::Base { index: 0 }]);
        assert_eq!(cert.x, MixedStrategy::pure(0, 1));
        assert!(cert.verified);
    }

    #[test]
    fn rps_solves_by_equalizer() {
        let cert = expect_certificate(solve(&rps()));
        assert_eq!(cert.x, MixedStrategy::uniform(3));
        assert!(cert.verified);
        assert_eq!(cert.steps.len(), 1);
        assert!(matches!(cert.steps[0], StepRecord::Equalizer { .. }));
    }

    #[test]
    fn pd_solves_by_elimination_then_base() {
        let cert = expect_certificate(solve(&pd()));
        assert_eq!(cert.x, MixedStrategy::pure(1, 2));
        assert!(cert.verified);
        assert_eq!(cert.steps.len(), 2);
        match &cert.steps[0] {
            StepRecord::Elimination { index, witness } => {
                assert_eq!(*index, 0);
                assert_eq!(witness.dominator, MixedStrategy::pure(1, 2));
            }
            other => panic!("expected elimination first, got {other:?}"),
        }
        assert_eq!(cert.steps[1], StepRecord::Base { index: 1 });
        assert_eq!(cert.support, vec![1]);
    }

    #[test]
    fn zero_pad_examples() {
        let y = MixedStrategy::pure(0, 1);
        assert_eq!(zero_pad(&y, &[1], 2).unwrap(), MixedStrategy::pure(1, 2));

        let half = MixedStrategy::uniform(2);
        let padded = zero_pad(&half, &[0, 2], 3).unwrap();
        assert_eq!(
            padded.weights(),
            &[Rat::new(1, 2).unwrap(), Rat::zero(), Rat::new(1, 2).unwrap()]
        );

        assert_eq!(zero_pad(&y, &[0], 1).unwrap(), y);
        assert!(zero_pad(&half, &[0], 3).is_err());
    }

    #[test]
    fn certificates_replay_exactly() {
        for game in [rps(), pd(), SymmetricGame::from_ints(&[&[1, 1], &[1, 0]])] {
            let cert = expect_certificate(solve(&game));
            replay_certificate(&game, &cert).unwrap();
        }
    }

    #[test]
    fn eliminated_coordinates_are_zero_in_output() {
        // three-strategy dominance-solvable game: strategy 3 strictly worse
        let game = SymmetricGame::from_ints(&[&[3, 0, 6], &[5, 1, 7], &[2, 0, 1]]);
        let cert = expect_certificate(solve(&game));
        assert!(cert.verified);
        for step in &cert.steps {
            if let StepRecord::Elimination { index, .. } = step {
                assert!(cert.x.weight(*index).is_zero());
            }
        }
    }

    #[test]
    fn solve_result_serde_round_trip() {
        let cert = solve(&pd());
        let json = serde_json::to_string(&cert).unwrap();
        let back: SolveResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
    }
}
