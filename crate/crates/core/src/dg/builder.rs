//! Assembles a [`DGModule`] from labelled blocks ("cells") and sparse differential entries.

use std::collections::BTreeMap;

use super::{DGModule, GradedSpace};
use crate::error::Result;
use crate::linalg::{QMatrix, Rational};

/// Handle to a block registered with a [`ComplexBuilder`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell(pub usize);

#[derive(Clone, Debug)]
struct CellInfo {
    degree: i64,
    dim: usize,
    offset: usize,
}

#[derive(Default)]
pub struct ComplexBuilder {
    cells: Vec<CellInfo>,
    dims: BTreeMap<i64, usize>,
    entries: BTreeMap<i64, Vec<(usize, usize, Rational)>>,
}

impl ComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a block of `dim` basis vectors in `degree`; blocks in a degree are laid out in
    /// registration order.
    pub fn cell(&mut self, degree: i64, dim: usize) -> Cell {
        let d = self.dims.entry(degree).or_insert(0);
        let info = CellInfo { degree, dim, offset: *d };
        *d += dim;
        self.cells.push(info);
        Cell(self.cells.len() - 1)
    }

    pub fn dim_of(&self, cell: Cell) -> usize {
        self.cells[cell.0].dim
    }

    pub fn degree_of(&self, cell: Cell) -> i64 {
        self.cells[cell.0].degree
    }

    pub fn offset_of(&self, cell: Cell) -> usize {
        self.cells[cell.0].offset
    }

    /// Adds `value` to the coefficient of target basis vector `(to, j)` in `d(from, i)`.
    pub fn add(&mut self, from: Cell, i: usize, to: Cell, j: usize, value: Rational) {
        let s = &self.cells[from.0];
        let t = &self.cells[to.0];
        assert_eq!(t.degree, s.degree + 1, "differential must raise degree by one");
        assert!(i < s.dim && j < t.dim);
        self.entries
            .entry(s.degree)
            .or_default()
            .push((t.offset + j, s.offset + i, value));
    }

    /// Adds a whole block map `m: from -> to` (rows indexed by `to`, columns by `from`).
    pub fn add_block(&mut self, from: Cell, to: Cell, m: &QMatrix) {
        assert_eq!(m.rows(), self.dim_of(to));
        assert_eq!(m.cols(), self.dim_of(from));
        for (r, c, v) in m.entries() {
            self.add(from, c, to, r, v.clone());
        }
    }

    pub fn build(self) -> Result<DGModule> {
        let space = GradedSpace::from_dims(self.dims.clone());
        let mut diffs = BTreeMap::new();
        for (deg, list) in self.entries {
            let rows = space.dim(deg + 1);
            let cols = space.dim(deg);
            let mut m = QMatrix::zeros(rows, cols);
            for (r, c, v) in list {
                m.add_at(r, c, &v);
            }
            if !m.is_zero() {
                diffs.insert(deg, m);
            }
        }
        DGModule::new(space, diffs)
    }
}
