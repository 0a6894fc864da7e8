//! Weak and strict dominance of pure strategies by mixed strategies,
//! decided by exact LPs over the simplex.
//!
//! By bilinearity it is enough to compare against every pure column: a mixed
//! dominator X beats `E_i` against all mixed opponents iff it does so against
//! all pure ones. The per-column payoff gaps `X . C E_j - E_i . C E_j` are
//! the witness slacks and are re-verified by substitution before a witness
//! is returned.

use serde::{Deserialize, Serialize};

use crate::error::DimensionError;
use crate::game::{MixedStrategy, SymmetricGame};
use crate::rational::Rat;
use crate::ratlp::{lp_solve, LpProblem, LpStatus};

/// Evidence that pure strategy `index` is dominated by `dominator`.
///
/// `slack[j]` is the exact payoff gap in column j. For a weak-dominance
/// witness every slack is nonnegative and at least one is positive; for a
/// strict witness all are positive. `index` is 0-based in memory and 1-based
/// in serialized form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceWitness {
    #[serde(with = "crate::one_based")]
    pub index: usize,
    pub dominator: MixedStrategy,
    pub strict: bool,
    pub slack: Vec<Rat>,
}

impl DominanceWitness {
    /// Exact substitution check of the dominance inequalities.
    pub fn verify(&self, game: &SymmetricGame) -> Result<bool, DimensionError> {
        let gaps = column_gaps(game, &self.dominator, self.index)?;
        if gaps != self.slack {
            return Ok(false);
        }
        let ok = if self.strict {
            gaps.iter().all(Rat::is_positive)
        } else {
            gaps.iter().all(|g| !g.is_negative()) && gaps.iter().any(Rat::is_positive)
        };
        Ok(ok)
    }
}

/// `X . C E_j - E_i . C E_j` for every column j.
fn column_gaps(
    game: &SymmetricGame,
    x: &MixedStrategy,
    i: usize,
) -> Result<Vec<Rat>, DimensionError> {
    let n = game.n();
    if i >= n {
        return Err(DimensionError::IndexOutOfRange { index: i, n });
    }
    let against = game.payoff_vector_transposed(x)?;
    Ok((0..n).map(|j| &against[j] - game.entry(i, j)).collect())
}

fn check_args(game: &SymmetricGame, i: usize) -> Result<(), DimensionError> {
    let n = game.n();
    if n < 2 {
        return Err(DimensionError::Other(
            "dominance needs at least two pure strategies".into(),
        ));
    }
    if i >= n {
        return Err(DimensionError::IndexOutOfRange { index: i, n });
    }
    Ok(())
}

/// Is pure strategy `i` weakly dominated by some mixed strategy?
///
/// LP: maximize the sum of column slacks subject to every slack being
/// nonnegative and X on the simplex. `E_i` itself is feasible with value
/// zero, so the strategy is weakly dominated iff the optimum is positive.
pub fn weakly_dominated(
    i: usize,
    game: &SymmetricGame,
) -> Result<Option<DominanceWitness>, DimensionError> {
    check_args(game, i)?;
    let n = game.n();

    // objective: sum_j X . C E_j  ==  X . (row sums of C)
    let objective: Vec<Rat> = (0..n).map(|k| game.matrix().row(k).iter().sum()).collect();
    let baseline: Rat = game.matrix().row(i).iter().sum();

    // -(X . C E_j) <= -C[i][j]  for every column j
    let ineq = (0..n)
        .map(|j| {
            let row: Vec<Rat> = (0..n).map(|k| -game.entry(k, j)).collect();
            (row, -game.entry(i, j))
        })
        .collect();
    let eq = vec![(vec![Rat::one(); n], Rat::one())];

    let problem = LpProblem { num_vars: n, objective, eq, ineq, nonneg: vec![true; n] };
    let outcome = lp_solve(&problem).expect("dominance LP is well-shaped by construction");
    assert_eq!(outcome.status, LpStatus::Optimal, "simplex-bounded LP must have an optimum");

    if outcome.objective_value.expect("optimal outcome has a value") <= baseline {
        return Ok(None);
    }
    let dominator = MixedStrategy::new(outcome.point.expect("optimal outcome has a point"))
        .expect("LP simplex constraints force a valid strategy");
    let slack = column_gaps(game, &dominator, i)?;
    let witness = DominanceWitness { index: i, dominator, strict: false, slack };
    assert!(witness.verify(game)?, "weak-dominance witness failed substitution");
    Ok(Some(witness))
}

/// Is pure strategy `i` strictly dominated by some mixed strategy?
///
/// LP: maximize the minimum column slack (as a free variable t bounded above
/// by every slack). Strictly dominated iff the optimum is positive.
pub fn strictly_dominated(
    i: usize,
    game: &SymmetricGame,
) -> Result<Option<DominanceWitness>, DimensionError> {
    check_args(game, i)?;
    let n = game.n();

    // variables: X (nonneg, n entries) then t (free)
    let mut objective = vec![Rat::zero(); n];
    objective.push(Rat::one());

    // t - (X . C E_j) <= -C[i][j]
    let ineq = (0..n)
        .map(|j| {
            let mut row: Vec<Rat> = (0..n).map(|k| -game.entry(k, j)).collect();
            row.push(Rat::one());
            (row, -game.entry(i, j))
        })
        .collect();
    let mut ones = vec![Rat::one(); n];
    ones.push(Rat::zero());
    let eq = vec![(ones, Rat::one())];

    let mut nonneg = vec![true; n];
    nonneg.push(false);

    let problem = LpProblem { num_vars: n + 1, objective, eq, ineq, nonneg };
    let outcome = lp_solve(&problem).expect("dominance LP is well-shaped by construction");
    assert_eq!(outcome.status, LpStatus::Optimal, "simplex-bounded LP must have an optimum");

    if !outcome.objective_value.expect("optimal outcome has a value").is_positive() {
        return Ok(None);
    }
    let mut point = outcome.point.expect("optimal outcome has a point");
    point.pop(); // drop t
    let dominator =
        MixedStrategy::new(point).expect("LP simplex constraints force a valid strategy");
    let slack = column_gaps(game, &dominator, i)?;
    let witness = DominanceWitness { index: i, dominator, strict: true, slack };
    assert!(witness.verify(game)?, "strict-dominance witness failed substitution");
    Ok(Some(witness))
}

/// Ascending scan for the first weakly dominated pure strategy.
///
/// Elimination order matters for iterated weak dominance, so the scan order
/// is fixed: smallest index first, recorded in the witness for replay.
pub fn first_weakly_dominated(game: &SymmetricGame) -> Option<DominanceWitness> {
    (0..game.n()).find_map(|i| {
        weakly_dominated(i, game).expect("indices in range by construction")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd() -> SymmetricGame {
        SymmetricGame::from_ints(&[&[3, 0], &[5, 1]])
    }

    fn rps() -> SymmetricGame {
        SymmetricGame::from_ints(&[&[0, -1, 1], &[1, 0, -1], &[-1, 1, 0]])
    }

    #[test]
    fn tie_plus_strict_column_is_weak_dominance() {
        let game = SymmetricGame::from_ints(&[&[1, 1], &[1, 0]]);
        let w = weakly_dominated(1, &game).unwrap().unwrap();
        assert_eq!(w.dominator, MixedStrategy::pure(0, 2));
        assert_eq!(w.slack, vec![Rat::zero(), Rat::one()]);
        assert!(!w.strict);
    }

    #[test]
    fn coordination_game_has_no_dominated_strategy() {
        let game = SymmetricGame::from_ints(&[&[1, 0], &[0, 1]]);
        assert!(weakly_dominated(0, &game).unwrap().is_none());
        assert!(weakly_dominated(1, &game).unwrap().is_none());
        assert!(first_weakly_dominated(&game).is_none());
    }

    #[test]
    fn rps_has_no_dominated_strategy() {
        for i in 0..3 {
            assert!(weakly_dominated(i, &rps()).unwrap().is_none());
        }
    }

    #[test]
    fn pd_cooperate_is_strictly_dominated() {
        let w = strictly_dominated(0, &pd()).unwrap().unwrap();
        assert_eq!(w.dominator, MixedStrategy::pure(1, 2));
        assert_eq!(w.slack, vec![Rat::from_int(2), Rat::one()]);
        assert!(w.strict);
    }

    #[test]
    fn tie_blocks_strict_dominance() {
        let game = SymmetricGame::from_ints(&[&[1, 1], &[1, 0]]);
        assert!(strictly_dominated(1, &game).unwrap().is_none());
    }

    #[test]
    fn one_by_one_game_is_rejected() {
        let game = SymmetricGame::from_ints(&[&[0]]);
        assert!(weakly_dominated(0, &game).is_err());
        assert!(strictly_dominated(0, &game).is_err());
    }

    #[test]
    fn index_out_of_range_is_rejected() {
        assert!(weakly_dominated(5, &pd()).is_err());
    }

    #[test]
    fn first_scan_returns_smallest_index() {
        let (first, witness) = {
            let w = first_weakly_dominated(&pd()).unwrap();
            (w.index, w)
        };
        assert_eq!(first, 0);
        assert_eq!(witness.dominator, MixedStrategy::pure(1, 2));

        let game = SymmetricGame::from_ints(&[&[1, 1], &[1, 0]]);
        let w = first_weakly_dominated(&game).unwrap();
        assert_eq!(w.index, 1);
        assert_eq!(w.dominator, MixedStrategy::pure(0, 2));
    }

    #[test]
    fn strict_implies_weak() {
        // every strict witness index must also be weakly dominated
        for game in [pd(), SymmetricGame::from_ints(&[&[0, 2, 1], &[1, 1, 1], &[2, 0, 0]])] {
            for i in 0..game.n() {
                if strictly_dominated(i, &game).unwrap().is_some() {
                    assert!(weakly_dominated(i, &game).unwrap().is_some());
                }
            }
        }
    }
}
