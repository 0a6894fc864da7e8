//! Equalizer detection: mixed strategies that give every pure strategy the
//! same payoff against them.
//!
//! A strategy X with `CX = c 1` equalizes the game. Existence is decided by
//! one exact feasibility LP over the simplex with the common value `c` kept
//! as a free variable; no positivity shift of `C` is needed, and the shifted
//! formulation is property-tested to agree.

use serde::{Deserialize, Serialize};

use crate::error::DimensionError;
use crate::game::{MixedStrategy, SymmetricGame};
use crate::rational::Rat;
use crate::ratlp::{lp_feasible_point, LpStatus};

/// An equalizer together with its common payoff value, exact by construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualizerCertificate {
    pub x: MixedStrategy,
    pub c: Rat,
}

/// Decide whether the game has an equalizer; if so return one with its value.
///
/// The LP is `CX - c 1 = 0`, `sum X = 1`, `X >= 0`, `c` free. `None` is
/// returned exactly when that system is infeasible.
pub fn find_equalizer(game: &SymmetricGame) -> Option<EqualizerCertificate> {
    let n = game.n();
    let mut eq = Vec::with_capacity(n + 1);
    for i in 0..n {
        // row i of C, then coefficient -1 on the value variable
        let mut row: Vec<Rat> = game.matrix().row(i).to_vec();
        row.push(Rat::from_int(-1));
        eq.push((row, Rat::zero()));
    }
    let mut ones = vec![Rat::one(); n];
    ones.push(Rat::zero());
    eq.push((ones, Rat::one()));

    let mut nonneg = vec![true; n];
    nonneg.push(false); // c is free in sign

    let outcome = lp_feasible_point(eq, vec![], nonneg)
        .expect("equalizer LP is well-shaped by construction");
    match outcome.status {
        LpStatus::Feasible => {
            let mut point = outcome.point.expect("feasible outcome carries a point");
            let c = point.pop().expect("point includes the value variable");
            let x = MixedStrategy::new(point)
                .expect("LP simplex constraints force a valid strategy");
            debug_assert!(is_equalizer(game, &x).unwrap());
            debug_assert_eq!(game.payoff_vector(&x).unwrap()[0], c);
            Some(EqualizerCertificate { x, c })
        }
        LpStatus::Infeasible => None,
        status => unreachable!("feasibility LP cannot report {status:?}"),
    }
}

/// True iff `CX` is a constant vector.
pub fn is_equalizer(game: &SymmetricGame, x: &MixedStrategy) -> Result<bool, DimensionError> {
    let v = game.payoff_vector(x)?;
    Ok(v.iter().all(|p| *p == v[0]))
}
