//! Exact-arithmetic workbench for symmetric bimatrix games.
//!
//! The pipeline: decide whether a game has an equalizer (one feasibility LP),
//! otherwise eliminate the first weakly dominated pure strategy and recurse,
//! verifying the assembled strategy against an exact Nash check before
//! anything is returned. A support-enumeration oracle provides desk-scale
//! ground truth, a seeded harness hunts for games where the
//! equalizer-or-dominated dichotomy fails, and a guarded floating-point
//! implementation of the multiplicative-weights map probes the dynamics
//! lemmas the dichotomy rests on.
//!
//! All game arithmetic is exact rational; floats appear only in the
//! dynamics module, behind explicit tolerances.

pub mod dominance;
pub mod equalizer;
pub mod error;
pub mod game;
pub mod harness;
pub mod hedge;
pub mod io;
pub mod one_based;
pub mod oracle;
pub mod ratlp;
pub mod rational;
pub mod solver;
pub mod symmetrize;

pub use error::{DimensionError, ParseError, ParseRatError, StrategyError};
pub use game::{BimatrixGame, Carrier, Matrix, MixedStrategy, SymmetricGame};
pub use io::{read_game, read_strategy, write_game, write_strategy, Game};
pub use rational::Rat;
