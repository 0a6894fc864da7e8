//! Reduction from general bimatrix equilibrium computation to the symmetric
//! case and back.
//!
//! The block construction `S = [[0, A'], [B'^T, 0]]` with `A' = A + shift`,
//! `B' = B + shift` strictly positive turns any bimatrix game into a
//! symmetric one whose symmetric equilibria split into a strategy pair of
//! the original game. The back-map is never trusted: every pair is verified
//! against the exact two-sided best-response condition, and anything that
//! fails (or has a zero block) is reported as degenerate rather than
//! returned.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::DimensionError;
use crate::game::{BimatrixGame, Matrix, MixedStrategy, SymmetricGame};
use crate::oracle::NashCheckReport;
use crate::rational::{dot, Rat};

/// The symmetrized game plus the data needed to map solutions back.
#[derive(Debug, Clone)]
pub struct SymmetrizationResult {
    pub s: SymmetricGame,
    /// Offset added to every entry of A and B before embedding.
    pub shift: Rat,
    /// Size of the row-player block inside S.
    pub block_split: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesymmetrizeError {
    #[error("{0}")]
    Dimension(#[from] DimensionError),
    #[error("input strategy is not a symmetric Nash strategy of the symmetrized game")]
    NotNashOnS,
}

/// Outcome of the back-map: a verified pair, or a degenerate report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Desymmetrized {
    Pair { p: MixedStrategy, q: MixedStrategy, row_report: NashCheckReport, col_report: NashCheckReport },
    Degenerate { reason: String },
}

/// Exact two-sided best-response check for a bimatrix game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BimatrixCheck {
    pub row: NashCheckReport,
    pub col: NashCheckReport,
}

impl BimatrixCheck {
    pub fn is_nash(&self) -> bool {
        self.row.is_nash && self.col.is_nash
    }
}

/// Positivity offset: zero when both matrices are already strictly positive,
/// otherwise `1 - (smallest entry)`, which makes the smallest entry exactly 1.
fn positivity_shift(g: &BimatrixGame) -> Rat {
    let min = g.a().min_entry().min(g.b().min_entry()).clone();
    if min.is_positive() {
        Rat::zero()
    } else {
        Rat::one() - min
    }
}

/// Build the symmetrized game.
pub fn symmetrize(g: &BimatrixGame) -> SymmetrizationResult {
    let shift = positivity_shift(g);
    let a = g.a().add_scalar(&shift);
    let bt = g.b().add_scalar(&shift).transpose();
    let m = g.rows();
    let n = g.cols();
    let size = m + n;

    let mut rows = vec![vec![Rat::zero(); size]; size];
    for i in 0..m {
        for j in 0..n {
            rows[i][m + j] = a.entry(i, j).clone();
        }
    }
    for i in 0..n {
        for j in 0..m {
            rows[m + i][j] = bt.entry(i, j).clone();
        }
    }
    let s = SymmetricGame::from_rows(rows).expect("block matrix is square");
    SymmetrizationResult { s, shift, block_split: m }
}

/// Split a symmetric Nash strategy of S into a strategy pair of the original
/// game and verify it exactly. `Z` must already pass the symmetric Nash
/// check on S; a zero block or a failed pair verification yields
/// `Degenerate`, never an unverified pair.
pub fn desymmetrize(
    g: &BimatrixGame,
    r: &SymmetrizationResult,
    z: &MixedStrategy,
) -> Result<Desymmetrized, DesymmetrizeError> {
    if z.len() != r.s.n() {
        return Err(DimensionError::Length { expected: r.s.n(), got: z.len() }.into());
    }
    let report = crate::oracle::is_symmetric_nash(&r.s, z)?;
    if !report.is_nash {
        return Err(DesymmetrizeError::NotNashOnS);
    }

    let m = r.block_split;
    let x_mass: Rat = z.weights()[..m].iter().sum();
    let y_mass: Rat = z.weights()[m..].iter().sum();
    if x_mass.is_zero() || y_mass.is_zero() {
        return Ok(Desymmetrized::Degenerate {
            reason: format!(
                "symmetric equilibrium concentrates on one block (row mass {x_mass}, column mass {y_mass})"
            ),
        });
    }

    let p = MixedStrategy::new(
        z.weights()[..m].iter().map(|w| w / &x_mass).collect(),
    )
    .expect("normalized nonnegative block sums to one");
    let q = MixedStrategy::new(
        z.weights()[m..].iter().map(|w| w / &y_mass).collect(),
    )
    .expect("normalized nonnegative block sums to one");

    let check = is_bimatrix_nash(g, &p, &q)?;
    if !check.is_nash() {
        return Ok(Desymmetrized::Degenerate {
            reason: format!(
                "split pair fails the exact best-response check (row ok: {}, column ok: {})",
                check.row.is_nash, check.col.is_nash
            ),
        });
    }
    Ok(Desymmetrized::Pair { p, q, row_report: check.row, col_report: check.col })
}

/// Best response condition applied to both players: P is supported on
/// maximizers of `A Q`, and Q on maximizers of `B^T P`.
pub fn is_bimatrix_nash(
    g: &BimatrixGame,
    p: &MixedStrategy,
    q: &MixedStrategy,
) -> Result<BimatrixCheck, DimensionError> {
    if p.len() != g.rows() {
        return Err(DimensionError::Length { expected: g.rows(), got: p.len() });
    }
    if q.len() != g.cols() {
        return Err(DimensionError::Length { expected: g.cols(), got: q.len() });
    }
    let row_payoffs = g.a().mul_vec(q.weights())?;
    let col_payoffs = g.b().transpose().mul_vec(p.weights())?;
    Ok(BimatrixCheck {
        row: support_check(&row_payoffs, p),
        col: support_check(&col_payoffs, q),
    })
}

fn support_check(payoffs: &[Rat], strategy: &MixedStrategy) -> NashCheckReport {
    let max = payoffs.iter().max().expect("nonempty payoff vector").clone();
    let support_ok =
        strategy.carrier().indices().iter().all(|&i| payoffs[i] == max);
    let violating_index =
        if support_ok { None } else { payoffs.iter().position(|p| *p == max) };
    NashCheckReport { is_nash: support_ok, max_payoff: max, violating_index, support_ok }
}

/// Expected payoffs of a strategy pair, for reports.
pub fn pair_payoffs(
    g: &BimatrixGame,
    p: &MixedStrategy,
    q: &MixedStrategy,
) -> Result<(Rat, Rat), DimensionError> {
    let aq = g.a().mul_vec(q.weights())?;
    let row = dot(p.weights(), &aq);
    let btp = g.b().transpose().mul_vec(p.weights())?;
    let col = dot(q.weights(), &btp);
    Ok((row, col))
}

/// End-to-end outcome of the bimatrix pipeline. Never an unverified pair:
/// either the exact two-sided check passed, or the failure is spelled out.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BimatrixSolveOutcome {
    Pair {
        p: MixedStrategy,
        q: MixedStrategy,
        /// Symmetric strategy of S the pair was split from.
        z: MixedStrategy,
        shift: Rat,
        row_report: NashCheckReport,
        col_report: NashCheckReport,
        certificate: crate::solver::SolveCertificate,
    },
    Degenerate {
        reason: String,
        shift: Rat,
        certificate: crate::solver::SolveCertificate,
    },
    Violation(crate::solver::TheoremViolation),
}

/// Symmetrize, solve the symmetric game, split the result back, and verify.
///
/// If the solver's strategy concentrates on one block, fall back to the
/// support-enumeration oracle on S (within `oracle_cap`) looking for a
/// splittable symmetric equilibrium before reporting degeneracy.
pub fn solve_bimatrix(g: &BimatrixGame, oracle_cap: usize) -> BimatrixSolveOutcome {
    use crate::solver::{solve, SolveResult};

    let r = symmetrize(g);
    let certificate = match solve(&r.s) {
        SolveResult::Violation(v) => return BimatrixSolveOutcome::Violation(v),
        SolveResult::Certificate(c) => c,
    };
    let first = desymmetrize(g, &r, &certificate.x)
        .expect("solver output is a verified symmetric Nash strategy of S");
    match first {
        Desymmetrized::Pair { p, q, row_report, col_report } => BimatrixSolveOutcome::Pair {
            p,
            q,
            z: certificate.x.clone(),
            shift: r.shift.clone(),
            row_report,
            col_report,
            certificate,
        },
        Desymmetrized::Degenerate { reason } => {
            if r.s.n() <= oracle_cap {
                if let Ok(all) = crate::oracle::enumerate_symmetric_nash_with_cap(&r.s, oracle_cap)
                {
                    for z in all {
                        if let Ok(Desymmetrized::Pair { p, q, row_report, col_report }) =
                            desymmetrize(g, &r, &z)
                        {
                            return BimatrixSolveOutcome::Pair {
                                p,
                                q,
                                z,
                                shift: r.shift.clone(),
                                row_report,
                                col_report,
                                certificate,
                            };
                        }
                    }
                }
            }
            BimatrixSolveOutcome::Degenerate { reason, shift: r.shift, certificate }
        }
    }
}
