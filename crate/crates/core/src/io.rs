//! Game and strategy file formats.
//!
//! Games are UTF-8 JSON objects. A symmetric game:
//!
//! ```json
//! {"type": "symmetric", "C": [["0", "-1", "1"], ["1", "0", "-1"], ["-1", "1", "0"]]}
//! ```
//!
//! and a bimatrix game:
//!
//! ```json
//! {"type": "bimatrix", "A": [["1", "0"]], "B": [["0", "1"]]}
//! ```
//!
//! Every entry is a JSON string holding an optionally signed integer or a
//! `p/q` fraction. Round-trips are exact; nothing passes through floats.
//!
//! A strategy file is either a bare JSON array of entries or an object
//! `{"X": [...], "support": [...]}` as produced by the CLI (support indices
//! are 1-based and redundant on input).

use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::game::{BimatrixGame, Matrix, MixedStrategy, SymmetricGame};
use crate::rational::Rat;

/// Either kind of game file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Game {
    Symmetric(SymmetricGame),
    Bimatrix(BimatrixGame),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum GameFile {
    Symmetric {
        #[serde(rename = "C")]
        c: Vec<Vec<Rat>>,
    },
    Bimatrix {
        #[serde(rename = "A")]
        a: Vec<Vec<Rat>>,
        #[serde(rename = "B")]
        b: Vec<Vec<Rat>>,
    },
}

fn matrix_from_file(rows: Vec<Vec<Rat>>, name: &str) -> Result<Matrix, ParseError> {
    Matrix::from_rows(rows).map_err(|e| ParseError::Structure(format!("matrix {name}: {e}")))
}

/// Parse a game file. Malformed JSON and malformed rationals report the
/// parser's line/column; structural violations (ragged rows, empty matrix)
/// report the offending row.
pub fn read_game(text: &str) -> Result<Game, ParseError> {
    let file: GameFile = serde_json::from_str(text)?;
    match file {
        GameFile::Symmetric { c } => {
            let m = matrix_from_file(c, "C")?;
            SymmetricGame::new(m)
                .map(Game::Symmetric)
                .map_err(|e| ParseError::Structure(e.to_string()))
        }
        GameFile::Bimatrix { a, b } => {
            let a = matrix_from_file(a, "A")?;
            let b = matrix_from_file(b, "B")?;
            BimatrixGame::new(a, b)
                .map(Game::Bimatrix)
                .map_err(|e| ParseError::Structure(e.to_string()))
        }
    }
}

pub fn write_game(game: &Game) -> String {
    let file = match game {
        Game::Symmetric(g) => GameFile::Symmetric { c: g.matrix().row_vecs() },
        Game::Bimatrix(g) => {
            GameFile::Bimatrix { a: g.a().row_vecs(), b: g.b().row_vecs() }
        }
    };
    serde_json::to_string(&file).expect("game serialization cannot fail")
}

// Symmetric games embed in reports using the same shape as the file format.
impl Serialize for SymmetricGame {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GameFile::Symmetric { c: self.matrix().row_vecs() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymmetricGame {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match GameFile::deserialize(deserializer)? {
            GameFile::Symmetric { c } => SymmetricGame::from_rows(c)
                .map_err(|e| serde::de::Error::custom(e.to_string())),
            GameFile::Bimatrix { .. } => {
                Err(serde::de::Error::custom("expected a symmetric game"))
            }
        }
    }
}

/// Strategy wire format: exact entries plus the 1-based support.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrategyFile {
    #[serde(rename = "X")]
    pub x: Vec<Rat>,
    pub support: Vec<usize>,
}

impl From<&MixedStrategy> for StrategyFile {
    fn from(s: &MixedStrategy) -> Self {
        StrategyFile { x: s.weights().to_vec(), support: s.carrier().one_based() }
    }
}

pub fn write_strategy(s: &MixedStrategy) -> String {
    serde_json::to_string(&StrategyFile::from(s)).expect("strategy serialization cannot fail")
}

/// Accepts either the object form or a bare array of entries.
pub fn read_strategy(text: &str) -> Result<MixedStrategy, ParseError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Wire {
        Object(StrategyFile),
        Array(Vec<Rat>),
    }
    let entries = match serde_json::from_str::<Wire>(text)? {
        Wire::Object(f) => f.x,
        Wire::Array(v) => v,
    };
    MixedStrategy::new(entries).map_err(|e| ParseError::Structure(e.to_string()))
}
