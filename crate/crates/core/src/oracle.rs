//! Desk-scale ground truth: exact symmetric-Nash checking via the best
//! response condition, exhaustive support enumeration, and the fixed-point
//! support criterion for the multiplicative-weights map.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::DimensionError;
use crate::game::{MixedStrategy, SymmetricGame};
use crate::rational::{dot, Rat};
use crate::ratlp::{lp_feasible_point, LpStatus};

/// Default strategy-count cap for the exponential support sweep.
pub const DEFAULT_ENUMERATION_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0}")]
    Dimension(#[from] DimensionError),
    #[error("support enumeration refused: {n} strategies exceed the cap of {cap} (2^n supports); raise the cap explicitly to override")]
    AboveCap { n: usize, cap: usize },
    #[error("internal error: support enumeration found no symmetric equilibrium, which contradicts Nash existence")]
    EmptyEnumeration,
}

/// Outcome of the exact best-response-condition check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NashCheckReport {
    pub is_nash: bool,
    pub max_payoff: Rat,
    /// A pure strategy strictly better than X against X, when not Nash (1-based in JSON).
    #[serde(with = "crate::one_based::option")]
    pub violating_index: Option<usize>,
    /// True iff every carrier coordinate attains the payoff maximum.
    pub support_ok: bool,
}

/// Best response condition, self-play form: X is a symmetric Nash strategy
/// iff every coordinate in its carrier attains `max_i (CX)_i`.
pub fn is_symmetric_nash(
    game: &SymmetricGame,
    x: &MixedStrategy,
) -> Result<NashCheckReport, DimensionError> {
    let v = game.payoff_vector(x)?;
    let max = v.iter().max().expect("game has at least one strategy").clone();
    let support_ok = x.carrier().indices().iter().all(|&i| v[i] == max);
    // the argmax beats X . C X whenever some carrier coordinate falls short
    let violating_index =
        if support_ok { None } else { v.iter().position(|p| *p == max) };
    Ok(NashCheckReport { is_nash: support_ok, max_payoff: max, violating_index, support_ok })
}

/// Fixed-point criterion of the multiplicative-weights map, exact on
/// rationals: X is a fixed point iff it is pure or its carrier payoffs are
/// all equal.
pub fn is_fixed_point_support(
    game: &SymmetricGame,
    x: &MixedStrategy,
) -> Result<bool, DimensionError> {
    if x.len() != game.n() {
        return Err(DimensionError::Length { expected: game.n(), got: x.len() });
    }
    if x.is_pure().is_some() {
        return Ok(true);
    }
    let v = game.payoff_vector(x)?;
    let carrier = x.carrier();
    let first = &v[carrier.indices()[0]];
    Ok(carrier.indices().iter().all(|&i| &v[i] == first))
}

/// All nonempty supports of `{0..n-1}` in lexicographic order of their
/// sorted index lists.
fn supports_lexicographic(n: usize) -> Vec<Vec<usize>> {
    let mut supports: Vec<Vec<usize>> = (1u32..(1 << n))
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    supports.sort();
    supports
}

/// One symmetric Nash strategy per feasible support, via the exact
/// feasibility system
/// `(CX)_i = v` on the support, `(CX)_j <= v` off it, `X >= 0` supported
/// inside, `sum X = 1`.
///
/// Returns the deduplicated strategies in canonical (support-lexicographic)
/// order. Every returned strategy passes [`is_symmetric_nash`]. The list is
/// never empty for a valid game; emptiness is reported as an internal error
/// rather than an answer.
pub fn enumerate_symmetric_nash(game: &SymmetricGame) -> Result<Vec<MixedStrategy>, OracleError> {
    enumerate_symmetric_nash_with_cap(game, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_symmetric_nash_with_cap(
    game: &SymmetricGame,
    cap: usize,
) -> Result<Vec<MixedStrategy>, OracleError> {
    let n = game.n();
    if n > cap {
        return Err(OracleError::AboveCap { n, cap });
    }

    let mut found: Vec<MixedStrategy> = Vec::new();
    for support in supports_lexicographic(n) {
        if let Some(x) = support_equilibrium(game, &support) {
            if !found.contains(&x) {
                debug_assert!(is_symmetric_nash(game, &x).unwrap().is_nash);
                found.push(x);
            }
        }
    }
    if found.is_empty() {
        return Err(OracleError::EmptyEnumeration);
    }
    Ok(found)
}

/// Feasibility LP for a single support. Variables: X (nonneg) and v (free).
fn support_equilibrium(game: &SymmetricGame, support: &[usize]) -> Option<MixedStrategy> {
    let n = game.n();
    let in_support = |j: usize| support.contains(&j);

    let mut eq = Vec::new();
    let mut ineq = Vec::new();
    for i in 0..n {
        // row i of C with coefficient -1 on v: (CX)_i - v
        let mut row: Vec<Rat> = game.matrix().row(i).to_vec();
        row.push(Rat::from_int(-1));
        if in_support(i) {
            eq.push((row, Rat::zero()));
        } else {
            ineq.push((row, Rat::zero()));
        }
    }
    for j in 0..n {
        if !in_support(j) {
            let mut row = vec![Rat::zero(); n + 1];
            row[j] = Rat::one();
            eq.push((row, Rat::zero()));
        }
    }
    let mut ones = vec![Rat::one(); n];
    ones.push(Rat::zero());
    eq.push((ones, Rat::one()));

    let mut nonneg = vec![true; n];
    nonneg.push(false);

    let outcome = lp_feasible_point(eq, ineq, nonneg)
        .expect("support LP is well-shaped by construction");
    match outcome.status {
        LpStatus::Feasible => {
            let mut point = outcome.point.expect("feasible outcome carries a point");
            point.pop(); // drop v
            Some(MixedStrategy::new(point).expect("LP constraints force a valid strategy"))
        }
        LpStatus::Infeasible => None,
        status => unreachable!("feasibility LP cannot report {status:?}"),
    }
}

/// Exhaustive equalizer existence check: some support carries a strategy
/// whose payoff vector is constant across all n coordinates.
///
/// This is the cross-check route for the single-LP equalizer finder; it
/// sweeps every support instead of solving one program over the full simplex.
pub fn has_equalizer_by_support_sweep(game: &SymmetricGame, cap: usize) -> Result<bool, OracleError> {
    let n = game.n();
    if n > cap {
        return Err(OracleError::AboveCap { n, cap });
    }
    for support in supports_lexicographic(n) {
        let mut eq = Vec::new();
        for i in 0..n {
            let mut row: Vec<Rat> = game.matrix().row(i).to_vec();
            row.push(Rat::from_int(-1));
            eq.push((row, Rat::zero())); // (CX)_i = v for every coordinate
        }
        for j in 0..n {
            if !support.contains(&j) {
                let mut row = vec![Rat::zero(); n + 1];
                row[j] = Rat::one();
                eq.push((row, Rat::zero()));
            }
        }
        let mut ones = vec![Rat::one(); n];
        ones.push(Rat::zero());
        eq.push((ones, Rat::one()));
        let mut nonneg = vec![true; n];
        nonneg.push(false);
        let outcome = lp_feasible_point(eq, vec![], nonneg)
            .expect("support LP is well-shaped by construction");
        if outcome.status == LpStatus::Feasible {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `X . C X` for convenience in reports.
pub fn self_payoff(game: &SymmetricGame, x: &MixedStrategy) -> Result<Rat, DimensionError> {
    Ok(dot(x.weights(), &game.payoff_vector(x)?))
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

    fn strat(parts: &[(i64, i64)]) -> MixedStrategy {
        MixedStrategy::new(parts.iter().map(|&(p, q)| Rat::new(p, q).unwrap()).collect())
            .unwrap()
    }

    #[test]
    fn rps_uniform_is_nash() {
        let report = is_symmetric_nash(&rps(), &MixedStrategy::uniform(3)).unwrap();
        assert!(report.is_nash);
        assert!(report.support_ok);
        assert_eq!(report.max_payoff, Rat::zero());
        assert_eq!(report.violating_index, None);
    }

    #[test]
    fn pd_defect_is_nash_cooperate_is_not() {
        let defect = MixedStrategy::pure(1, 2);
        let report = is_symmetric_nash(&pd(), &defect).unwrap();
        assert!(report.is_nash);
        assert_eq!(report.max_payoff, Rat::one());

        let cooperate = MixedStrategy::pure(0, 2);
        let report = is_symmetric_nash(&pd(), &cooperate).unwrap();
        assert!(!report.is_nash);
        assert_eq!(report.max_payoff, Rat::from_int(5));
        assert_eq!(report.violating_index, Some(1));
    }

    #[test]
    fn pd_enumeration_finds_exactly_defect() {
        let all = enumerate_symmetric_nash(&pd()).unwrap();
        assert_eq!(all, vec![MixedStrategy::pure(1, 2)]);
    }

    #[test]
    fn rps_enumeration_finds_only_uniform() {
        let all = enumerate_symmetric_nash(&rps()).unwrap();
        assert_eq!(all, vec![MixedStrategy::uniform(3)]);
    }

    #[test]
    fn coordination_enumeration_finds_three() {
        let game = SymmetricGame::from_ints(&[&[1, 0], &[0, 1]]);
        let all = enumerate_symmetric_nash(&game).unwrap();
        assert_eq!(
            all,
            vec![
                MixedStrategy::pure(0, 2),
                strat(&[(1, 2), (1, 2)]),
                MixedStrategy::pure(1, 2),
            ]
        );
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let big = SymmetricGame::from_rows(vec![vec![Rat::zero(); 13]; 13]).unwrap();
        assert!(matches!(
            enumerate_symmetric_nash(&big),
            Err(OracleError::AboveCap { n: 13, cap: 12 })
        ));
        // explicit override allows it
        assert!(enumerate_symmetric_nash_with_cap(&big, 13).is_ok());
    }

    #[test]
    fn fixed_point_support_examples() {
        for i in 0..3 {
            assert!(is_fixed_point_support(&rps(), &MixedStrategy::pure(i, 3)).unwrap());
        }
        assert!(is_fixed_point_support(&rps(), &MixedStrategy::uniform(3)).unwrap());
        let skew = strat(&[(1, 2), (1, 2), (0, 1)]);
        assert!(!is_fixed_point_support(&rps(), &skew).unwrap());
    }

    #[test]
    fn equalizer_sweep_matches_known_games() {
        assert!(has_equalizer_by_support_sweep(&rps(), 12).unwrap());
        assert!(!has_equalizer_by_support_sweep(&pd(), 12).unwrap());
        let constant_col = SymmetricGame::from_ints(&[&[1, 0], &[1, 2]]);
        assert!(has_equalizer_by_support_sweep(&constant_col, 12).unwrap());
    }
}
