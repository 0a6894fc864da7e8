//! Game, strategy, and carrier types over exact rationals.
//!
//! All values here are immutable after construction and safe to share across
//! threads. Indices are 0-based internally; serialized output is 1-based.

use serde::{Deserialize, Serialize};

use crate::error::{DimensionError, StrategyError};
use crate::rational::{dot, Rat};

/// Dense rational matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, DimensionError> {
        let m = rows.len();
        if m == 0 {
            return Err(DimensionError::Other("matrix has no rows".into()));
        }
        let n = rows[0].len();
        if n == 0 {
            return Err(DimensionError::Other("matrix has no columns".into()));
        }
        let mut data = Vec::with_capacity(m * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(DimensionError::Other(format!(
                    "ragged matrix: row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    n
                )));
            }
            data.extend(row);
        }
        Ok(Matrix { rows: m, cols: n, data })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| Rat::from_int(v)).collect()).collect(),
        )
        .expect("integer literal matrix is rectangular and nonempty")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.entry(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    /// Matrix-vector product `M x`.
    pub fn mul_vec(&self, x: &[Rat]) -> Result<Vec<Rat>, DimensionError> {
        if x.len() != self.cols {
            return Err(DimensionError::Length { expected: self.cols, got: x.len() });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    pub fn min_entry(&self) -> &Rat {
        self.data.iter().min().expect("matrix is nonempty")
    }

    pub fn add_scalar(&self, k: &Rat) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v + k).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| -v).collect() }
    }
}

/// Symmetric bimatrix game given by the row player's square payoff matrix;
/// the column player implicitly plays its transpose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricGame {
    matrix: Matrix,
}

impl SymmetricGame {
    pub fn new(matrix: Matrix) -> Result<Self, DimensionError> {
        if matrix.rows() != matrix.cols() {
            return Err(DimensionError::Other(format!(
                "payoff matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(SymmetricGame { matrix })
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, DimensionError> {
        SymmetricGame::new(Matrix::from_rows(rows)?)
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        SymmetricGame::new(Matrix::from_ints(rows)).expect("integer literal matrix is square")
    }

    /// Number of pure strategies.
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        self.matrix.entry(i, j)
    }

    /// Exact payoff `X . C Y` of the row player.
    pub fn payoff(&self, x: &MixedStrategy, y: &MixedStrategy) -> Result<Rat, DimensionError> {
        let cy = self.payoff_vector(y)?;
        if x.len() != self.n() {
            return Err(DimensionError::Length { expected: self.n(), got: x.len() });
        }
        Ok(dot(x.weights(), &cy))
    }

    /// The vector `C X`: coordinate i is the payoff of pure strategy i against X.
    pub fn payoff_vector(&self, x: &MixedStrategy) -> Result<Vec<Rat>, DimensionError> {
        self.matrix.mul_vec(x.weights())
    }

    /// The vector `C^T X`: coordinate j is `X . C E_j`, the payoff of mixed X
    /// against pure column j. This is what dominance comparisons range over.
    pub fn payoff_vector_transposed(&self, x: &MixedStrategy) -> Result<Vec<Rat>, DimensionError> {
        if x.len() != self.n() {
            return Err(DimensionError::Length { expected: self.n(), got: x.len() });
        }
        Ok((0..self.n())
            .map(|j| (0..self.n()).map(|i| x.weight(i) * self.entry(i, j)).sum())
            .collect())
    }

    /// Principal submatrix with row and column `i` removed, plus the map from
    /// new positions to positions in this game.
    pub fn eliminate(&self, i: usize) -> Result<(SymmetricGame, Vec<usize>), DimensionError> {
        let n = self.n();
        if n < 2 {
            return Err(DimensionError::Other("cannot eliminate from a 1x1 game".into()));
        }
        if i >= n {
            return Err(DimensionError::IndexOutOfRange { index: i, n });
        }
        let keep: Vec<usize> = (0..n).filter(|&k| k != i).collect();
        let rows = keep
            .iter()
            .map(|&r| keep.iter().map(|&c| self.entry(r, c).clone()).collect())
            .collect();
        Ok((SymmetricGame::from_rows(rows).expect("submatrix of a square matrix is square"), keep))
    }
}

/// General bimatrix game `(A, B)`; A pays the row player, B the column player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimatrixGame {
    a: Matrix,
    b: Matrix,
}

impl BimatrixGame {
    pub fn new(a: Matrix, b: Matrix) -> Result<Self, DimensionError> {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(DimensionError::Other(format!(
                "payoff matrices must have identical dimensions, got {}x{} and {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        Ok(BimatrixGame { a, b })
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }
}

/// Exact probability vector over pure strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedStrategy {
    weights: Vec<Rat>,
}

impl MixedStrategy {
    pub fn new(weights: Vec<Rat>) -> Result<Self, StrategyError> {
        if weights.is_empty() {
            return Err(StrategyError::Empty);
        }
        for (i, w) in weights.iter().enumerate() {
            if w.is_negative() {
                return Err(StrategyError::Negative { index: i, value: w.to_string() });
            }
        }
        let sum: Rat = weights.iter().sum();
        if sum != Rat::one() {
            return Err(StrategyError::BadSum { sum: sum.to_string() });
        }
        Ok(MixedStrategy { weights })
    }

    /// The pure strategy `E_i` in an n-strategy game.
    pub fn pure(i: usize, n: usize) -> Self {
        assert!(i < n, "pure strategy index out of range");
        let weights =
            (0..n).map(|k| if k == i { Rat::one() } else { Rat::zero() }).collect();
        MixedStrategy { weights }
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0);
        let w = Rat::new(1, n as i64).expect("n > 0");
        MixedStrategy { weights: vec![w; n] }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor rejects empty strategies
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &Rat {
        &self.weights[i]
    }

    /// Positive-support index set.
    pub fn carrier(&self) -> Carrier {
        Carrier {
            indices: (0..self.len()).filter(|&i| self.weights[i].is_positive()).collect(),
        }
    }

    pub fn is_interior(&self) -> bool {
        self.carrier().len() == self.len()
    }

    pub fn is_pure(&self) -> Option<usize> {
        let c = self.carrier();
        if c.len() == 1 {
            Some(c.indices()[0])
        } else {
            None
        }
    }

    /// Lossy conversion for the floating-point dynamics.
    pub fn to_f64s(&self) -> Vec<f64> {
        self.weights.iter().map(Rat::to_f64).collect()
    }
}

impl Serialize for MixedStrategy {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.weights().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MixedStrategy {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let weights = Vec::<Rat>::deserialize(deserializer)?;
        MixedStrategy::new(weights).map_err(serde::de::Error::custom)
    }
}

/// Ordered set of pure-strategy indices with positive probability (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Carrier {
    indices: Vec<usize>,
}

impl Carrier {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// 1-based view for reports and serialized output.
    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|&i| i + 1).collect()
    }
}

impl Serialize for Carrier {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.one_based().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Carrier {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let one_based = Vec::<usize>::deserialize(deserializer)?;
        let mut indices: Vec<usize> = one_based
            .into_iter()
            .map(|i| {
                i.checked_sub(1)
                    .ok_or_else(|| serde::de::Error::custom("support indices are 1-based"))
            })
            .collect::<Result<_, _>>()?;
        indices.sort_unstable();
        indices.dedup();
        Ok(Carrier { indices })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rps() -> SymmetricGame {
        SymmetricGame::from_ints(&[&[0, -1, 1], &[1, 0, -1], &[-1, 1, 0]])
    }

    fn strat(parts: &[(i64, i64)]) -> MixedStrategy {
        MixedStrategy::new(parts.iter().map(|&(p, q)| Rat::new(p, q).unwrap()).collect()).unwrap()
    }

    #[test]
    fn pure_vs_pure_payoff_reads_entry() {
        let c = SymmetricGame::from_ints(&[&[1, 0], &[0, 1]]);
        let x = MixedStrategy::pure(0, 2);
        assert_eq!(c.payoff(&x, &x).unwrap(), Rat::one());
    }

    #[test]
    fn rps_uniform_payoff_is_zero() {
        let c = rps();
        let u = MixedStrategy::uniform(3);
        assert_eq!(c.payoff(&u, &u).unwrap(), Rat::zero());
    }

    #[test]
    fn mixed_payoff_exact() {
        // X = Y = (3/4, 1/4) on [[0,3],[1,0]] gives 3/4
        let c = SymmetricGame::from_ints(&[&[0, 3], &[1, 0]]);
        let x = strat(&[(3, 4), (1, 4)]);
        assert_eq!(c.payoff(&x, &x).unwrap(), Rat::new(3, 4).unwrap());
    }

    #[test]
    fn payoff_vector_examples() {
        let c = rps();
        let u = MixedStrategy::uniform(3);
        assert_eq!(c.payoff_vector(&u).unwrap(), vec![Rat::zero(); 3]);

        let constant_col = SymmetricGame::from_ints(&[&[1, 0], &[1, 2]]);
        let e1 = MixedStrategy::pure(0, 2);
        assert_eq!(constant_col.payoff_vector(&e1).unwrap(), vec![Rat::one(), Rat::one()]);

        let c = SymmetricGame::from_ints(&[&[3, 0], &[5, 1]]);
        let half = strat(&[(1, 2), (1, 2)]);
        assert_eq!(
            c.payoff_vector(&half).unwrap(),
            vec![Rat::new(3, 2).unwrap(), Rat::from_int(3)]
        );
    }

    #[test]
    fn payoff_dimension_mismatch_is_error() {
        let c = rps();
        let x = MixedStrategy::uniform(2);
        assert!(c.payoff_vector(&x).is_err());
        assert!(c.payoff(&x, &x).is_err());
    }

    #[test]
    fn carrier_examples() {
        let x = strat(&[(1, 2), (1, 2), (0, 1)]);
        assert_eq!(x.carrier().indices(), &[0, 1]);
        assert_eq!(x.carrier().one_based(), vec![1, 2]);
        assert!(!x.is_interior());

        let pure = MixedStrategy::pure(0, 2);
        assert_eq!(pure.carrier().one_based(), vec![1]);
        assert_eq!(pure.is_pure(), Some(0));

        let u = MixedStrategy::uniform(3);
        assert_eq!(u.carrier().len(), 3);
        assert!(u.is_interior());
    }

    #[test]
    fn strategy_invariants_enforced() {
        assert!(MixedStrategy::new(vec![]).is_err());
        assert!(MixedStrategy::new(vec![Rat::new(-1, 2).unwrap(), Rat::new(3, 2).unwrap()])
            .is_err());
        assert!(MixedStrategy::new(vec![Rat::new(1, 2).unwrap(), Rat::new(1, 3).unwrap()])
            .is_err());
    }

    #[test]
    fn eliminate_principal_submatrix() {
        let pd = SymmetricGame::from_ints(&[&[3, 0], &[5, 1]]);
        let (sub, map) = pd.eliminate(0).unwrap();
        assert_eq!(sub.n(), 1);
        assert_eq!(sub.entry(0, 0), &Rat::one());
        assert_eq!(map, vec![1]);

        let (sub, map) = rps().eliminate(1).unwrap();
        assert_eq!(sub, SymmetricGame::from_ints(&[&[0, 1], &[-1, 0]]));
        assert_eq!(map, vec![0, 2]);

        let one = SymmetricGame::from_ints(&[&[5]]);
        assert!(one.eliminate(0).is_err());
    }

    #[test]
    fn transpose_payoff_identity() {
        // X . (C Y) must equal (C^T X) . Y
        let c = SymmetricGame::from_ints(&[&[2, -1], &[0, 4]]);
        let x = strat(&[(1, 3), (2, 3)]);
        let y = strat(&[(3, 5), (2, 5)]);
        let lhs = c.payoff(&x, &y).unwrap();
        let rhs = dot(&c.payoff_vector_transposed(&x).unwrap(), y.weights());
        assert_eq!(lhs, rhs);
    }
}
