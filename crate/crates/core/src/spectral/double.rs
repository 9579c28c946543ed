use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::alternating::AltComplex;
use crate::complex::SimplicialMap;
use crate::error::{Error, Result};
use crate::linalg::IntegerMatrix;
use crate::multiplicity::{k_max, Kind, MultiplePointTower};

/// Which way the comparison map between the total complex and the oracle
/// complex runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// `Tot → oracle` (the augmentation `f_#` on column 0).
    ToOracle,
    /// `oracle → Tot` (its dual, after regrading).
    FromOracle,
}

/// A chain map between the total complex and an independent complex whose
/// homology the spectral sequence should compute (`C_•(Y)` or its dual).
#[derive(Clone, Debug)]
pub struct Comparison {
    pub direction: Direction,
    /// Ranks of the oracle complex, by degree.
    pub oracle_ranks: BTreeMap<i64, usize>,
    /// Oracle differential `O_n → O_{n−1}`, by source degree `n`.
    pub oracle_boundaries: BTreeMap<i64, IntegerMatrix>,
    /// Nonzero blocks of the map, keyed by the double-complex cell `(col, row)`.
    pub blocks: BTreeMap<(i64, i64), IntegerMatrix>,
}

impl Comparison {
    pub fn oracle_rank(&self, n: i64) -> usize {
        self.oracle_ranks.get(&n).copied().unwrap_or(0)
    }

    pub fn oracle_boundary(&self, n: i64) -> IntegerMatrix {
        self.oracle_boundaries
            .get(&n)
            .cloned()
            .unwrap_or_else(|| IntegerMatrix::zeros(self.oracle_rank(n - 1), self.oracle_rank(n)))
    }
}

/// Whether a double complex is known to contain every nonzero cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Truncation {
    pub p_max: i64,
    pub q_max: i64,
    /// No nonzero columns exist beyond `p_max`.
    pub cols_complete: bool,
    /// No nonzero rows exist beyond `q_max`.
    pub rows_complete: bool,
}

/// A bigraded family of free groups with anticommuting differentials.
///
/// Cells are keyed by `(col, row)` = `(p, q)`; in the multiple-point
/// complexes `p = k − 1` and `q` is the chain degree. The horizontal map of a
/// cell lowers the row (the boundary `∂`), the vertical map lowers the column
/// (`ϱ` or `ϵ`).
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    pub label: String,
    ranks: BTreeMap<(i64, i64), usize>,
    horizontal: BTreeMap<(i64, i64), IntegerMatrix>,
    vertical: BTreeMap<(i64, i64), IntegerMatrix>,
    pub truncation: Truncation,
    pub comparison: Option<Comparison>,
}

impl DoubleComplex {
    pub fn new(label: impl Into<String>, truncation: Truncation) -> Self {
        Self {
            label: label.into(),
            ranks: BTreeMap::new(),
            horizontal: BTreeMap::new(),
            vertical: BTreeMap::new(),
            truncation,
            comparison: None,
        }
    }

    pub fn set_rank(&mut self, col: i64, row: i64, rank: usize) {
        self.ranks.insert((col, row), rank);
    }

    /// Sets the map out of `(col, row)` into `(col, row − 1)`.
    pub fn set_horizontal(&mut self, col: i64, row: i64, m: IntegerMatrix) {
        assert_eq!(m.ncols(), self.rank(col, row), "horizontal map source rank");
        assert_eq!(m.nrows(), self.rank(col, row - 1), "horizontal map target rank");
        self.horizontal.insert((col, row), m);
    }

    /// Sets the map out of `(col, row)` into `(col − 1, row)`.
    pub fn set_vertical(&mut self, col: i64, row: i64, m: IntegerMatrix) {
        assert_eq!(m.ncols(), self.rank(col, row), "vertical map source rank");
        assert_eq!(m.nrows(), self.rank(col - 1, row), "vertical map target rank");
        self.vertical.insert((col, row), m);
    }

    pub fn rank(&self, col: i64, row: i64) -> usize {
        self.ranks.get(&(col, row)).copied().unwrap_or(0)
    }

    pub fn cells(&self) -> impl Iterator<Item = ((i64, i64), usize)> + '_ {
        self.ranks.iter().map(|(&k, &v)| (k, v))
    }

    pub fn horizontal(&self, col: i64, row: i64) -> IntegerMatrix {
        self.horizontal
            .get(&(col, row))
            .cloned()
            .unwrap_or_else(|| IntegerMatrix::zeros(self.rank(col, row - 1), self.rank(col, row)))
    }

    pub fn vertical(&self, col: i64, row: i64) -> IntegerMatrix {
        self.vertical
            .get(&(col, row))
            .cloned()
            .unwrap_or_else(|| IntegerMatrix::zeros(self.rank(col - 1, row), self.rank(col, row)))
    }

    pub fn col_range(&self) -> Option<(i64, i64)> {
        let cols = self.ranks.keys().map(|&(c, _)| c);
        Some((cols.clone().min()?, cols.max()?))
    }

    pub fn row_range(&self) -> Option<(i64, i64)> {
        let rows = self.ranks.keys().map(|&(_, r)| r);
        Some((rows.clone().min()?, rows.max()?))
    }

    /// Ranks of column `col`, rows in increasing order.
    pub fn column_ranks(&self, col: i64) -> Vec<usize> {
        self.ranks.iter().filter(|((c, _), _)| *c == col).map(|(_, &v)| v).collect()
    }

    /// Checks `d′d′ = 0`, `d″d″ = 0` and `d′d″ + d″d′ = 0` on every cell. The
    /// comparison map is checked when the total complex is formed.
    pub fn check_identities(&self) -> Result<()> {
        for &(c, r) in self.ranks.keys() {
            if !self.horizontal(c, r - 1).mul(&self.horizontal(c, r)).is_zero() {
                return Err(Error::NotAComplex(format!("{}: d'd' != 0 at ({c},{r})", self.label)));
            }
            if !self.vertical(c - 1, r).mul(&self.vertical(c, r)).is_zero() {
                return Err(Error::NotAComplex(format!("{}: d''d'' != 0 at ({c},{r})", self.label)));
            }
            let anti = self.horizontal(c - 1, r).mul(&self.vertical(c, r)).add(&self.vertical(c, r - 1).mul(&self.horizontal(c, r)));
            if !anti.is_zero() {
                return Err(Error::NotAComplex(format!("{}: d'd'' + d''d' != 0 at ({c},{r})", self.label)));
            }
        }
        Ok(())
    }

    /// The same complex with every vertical map out of column `col` multiplied
    /// by `factor`. Still a double complex, but rows stop being exact.
    pub fn with_scaled_vertical(&self, col: i64, factor: i64) -> DoubleComplex {
        let mut out = self.clone();
        out.label = format!("{} (vertical maps out of column {col} scaled by {factor})", self.label);
        for (&(c, r), m) in self.vertical.iter() {
            if c == col {
                out.vertical.insert((c, r), m.scaled(factor));
            }
        }
        out
    }

    /// The dual cochain double complex, regraded homologically by negating
    /// both indices so that all differentials again lower the indices.
    pub fn dual(&self) -> Result<DoubleComplex> {
        if !(self.truncation.cols_complete && self.truncation.rows_complete) {
            return Err(Error::DimensionMismatch(format!("{} is truncated; its dual would not be", self.label)));
        }
        let (c0, _) = self.col_range().unwrap_or((0, 0));
        let (r0, _) = self.row_range().unwrap_or((0, 0));
        let truncation = Truncation { p_max: -c0, q_max: -r0, cols_complete: true, rows_complete: true };
        let mut out = DoubleComplex::new(format!("dual of {}", self.label), truncation);
        for (&(c, r), &n) in &self.ranks {
            out.set_rank(-c, -r, n);
        }
        for (&(c, r), m) in &self.horizontal {
            out.horizontal.insert((-c, -r + 1), m.transpose());
        }
        for (&(c, r), m) in &self.vertical {
            out.vertical.insert((-c + 1, -r), m.transpose());
        }
        if let Some(cmp) = &self.comparison {
            let direction = match cmp.direction {
                Direction::ToOracle => Direction::FromOracle,
                Direction::FromOracle => Direction::ToOracle,
            };
            let oracle_ranks = cmp.oracle_ranks.iter().map(|(&n, &r)| (-n, r)).collect();
            let oracle_boundaries = cmp.oracle_boundaries.iter().map(|(&n, m)| (-n + 1, m.transpose())).collect();
            let blocks = cmp.blocks.iter().map(|(&(c, r), m)| ((-c, -r), m.transpose())).collect();
            out.comparison = Some(Comparison { direction, oracle_ranks, oracle_boundaries, blocks });
        }
        Ok(out)
    }
}

/// The double complex of `f`: columns `C_•(W^{p+1})` with vertical maps
/// `ϱ^{p+1}` (kind `W`), or alternating columns `C^Alt_•(D^{p+1})` in
/// product-basis coordinates with vertical maps `ϵ^{p+1}` (kind `D`).
/// Column 0 is `C_•(X)` either way; `f_#` into `C_•(Y)` is attached as the
/// comparison map. The three double-complex identities are checked.
pub fn build_double(f: &Arc<SimplicialMap>, kind: Kind, p_max: usize, q_max: usize) -> Result<DoubleComplex> {
    let y = f.target();
    let dim_y = y.dim().max(0) as usize;
    let tower = MultiplePointTower::new(f, kind, p_max + 1)?;
    let cols_complete = kind == Kind::D && p_max + 1 >= k_max(f);
    let truncation =
        Truncation { p_max: p_max as i64, q_max: q_max as i64, cols_complete, rows_complete: q_max >= dim_y };
    let mut dc = DoubleComplex::new(format!("{kind} double complex"), truncation);
    let mut comparison = Comparison {
        direction: Direction::ToOracle,
        oracle_ranks: (0..=q_max).map(|n| (n as i64, y.count(n))).collect(),
        oracle_boundaries: (1..=q_max).map(|n| (n as i64, y.boundary_unchecked(n))).collect(),
        blocks: BTreeMap::new(),
    };
    match kind {
        Kind::W => {
            for k in 1..=p_max + 1 {
                let z = tower.level(k).complex();
                let c = (k - 1) as i64;
                for q in 0..=q_max {
                    dc.set_rank(c, q as i64, z.count(q));
                }
                for q in 1..=q_max {
                    dc.set_horizontal(c, q as i64, z.boundary_unchecked(q));
                }
                if k >= 2 {
                    for q in 0..=q_max {
                        let mut rho = IntegerMatrix::zeros(tower.level(k - 1).complex().count(q), z.count(q));
                        for i in 1..=k {
                            let m = tower.eps(k, i).matrix(q);
                            rho = if i % 2 == 1 { rho.add(&m) } else { rho.sub(&m) };
                        }
                        dc.set_vertical(c, q as i64, if q % 2 == 0 { rho } else { rho.neg() });
                    }
                }
            }
            for q in 0..=q_max {
                comparison.blocks.insert((0, q as i64), f.matrix(q));
            }
        }
        Kind::D => {
            let columns: Vec<AltComplex> =
                (1..=p_max + 1).map(|k| AltComplex::new(tower.level(k), q_max)).collect::<Result<_>>()?;
            for k in 1..=p_max + 1 {
                let c = (k - 1) as i64;
                let col = &columns[k - 1];
                for q in 0..=q_max {
                    dc.set_rank(c, q as i64, col.basis(q).len());
                }
                for q in 1..=q_max {
                    dc.set_horizontal(c, q as i64, col.boundary(q).clone());
                }
                if k >= 2 {
                    let z = tower.level(k);
                    let below = tower.level(k - 1);
                    for q in 0..=q_max {
                        let target = columns[k - 2].basis(q);
                        let eps = tower.eps(k, k);
                        let m = col.basis(q).matrix_of(z, target.len(), |ch| {
                            let image = eps.pushforward(ch)?;
                            target.coordinates(below, &image)
                        })?;
                        dc.set_vertical(c, q as i64, if q % 2 == 0 { m } else { m.neg() });
                    }
                }
            }
            let x_level = tower.level(1);
            for q in 0..=q_max {
                let basis = columns[0].basis(q);
                let m = basis.matrix_of(x_level, y.count(q), |ch| {
                    let image = f.pushforward(ch)?;
                    image.to_vector(y)
                })?;
                comparison.blocks.insert((0, q as i64), m);
            }
        }
    }
    dc.comparison = Some(comparison);
    dc.check_identities()?;
    Ok(dc)
}

/// Matrix of a block of the comparison map, or zero.
pub(crate) fn block_or_zero(cmp: &Comparison, cell: (i64, i64), rows: usize, cols: usize) -> IntegerMatrix {
    cmp.blocks.get(&cell).cloned().unwrap_or_else(|| IntegerMatrix::zeros(rows, cols))
}
