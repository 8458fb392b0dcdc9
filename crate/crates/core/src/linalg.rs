//! Exact sparse linear algebra over the rationals.
//!
//! Every homology computation in the crate bottoms out here: matrices are stored
//! row-major as sorted sparse rows with no explicit zeros, and elimination is
//! carried out in exact arithmetic. Pivot selection is deterministic (leftmost
//! column first, then the entry with the smallest numerator magnitude), so
//! reduced forms and kernel bases are reproducible across runs.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Rational from a machine integer.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics on `d == 0`.
pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Formats as `"p/q"` (always with a denominator, so the format is unambiguous).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub type SparseVec = BTreeMap<usize, Rational>;

/// Sparse rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for row in &self.data {
            let cells: Vec<String> = (0..self.cols)
                .map(|c| row.get(&c).map_or_else(|| "0".to_string(), |v| v.to_string()))
                .collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![SparseVec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].insert(i, Rational::one());
        }
        m
    }

    pub fn scalar(n: usize, s: Rational) -> Self {
        let mut m = Self::zeros(n, n);
        if !s.is_zero() {
            for i in 0..n {
                m.data[i].insert(i, s.clone());
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Self::from_rows(&rows)
    }

    /// Builds a matrix whose columns are the given dense vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.data[i].get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds {}x{}", self.rows, self.cols);
        if v.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, v);
        }
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Rational) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds {}x{}", self.rows, self.cols);
        if v.is_zero() {
            return;
        }
        let e = self.data[i].entry(j).or_insert_with(Rational::zero);
        *e += v;
        if e.is_zero() {
            self.data[i].remove(&j);
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(&j, v)| (i, j, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, j, v) in self.entries() {
            t.data[j].insert(i, v.clone());
        }
        t
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            let mut acc = SparseVec::new();
            for (k, a) in row {
                for (j, b) in &other.data[*k] {
                    let e = acc.entry(*j).or_insert_with(Rational::zero);
                    *e += a * b;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.data[i] = acc;
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(self
            .data
            .iter()
            .map(|row| row.iter().fold(Rational::zero(), |acc, (j, a)| acc + a * &v[*j]))
            .collect())
    }

    pub fn add(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (i, j, v) in other.entries() {
            out.add_at(i, j, v);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> QMatrix {
        if s.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let mut out = self.clone();
        for row in &mut out.data {
            for v in row.values_mut() {
                *v *= s;
            }
        }
        out
    }

    pub fn neg(&self) -> QMatrix {
        self.scale(&q(-1))
    }

    /// Writes `block` into `self` with its top-left corner at `(r0, c0)`, adding to what is there.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &QMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of bounds");
        for (i, j, v) in block.entries() {
            self.add_at(r0 + i, c0 + j, v);
        }
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &QMatrix) -> QMatrix {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        out.add_block(0, 0, self);
        out.add_block(self.rows, self.cols, other);
        out
    }

    /// Kronecker product `self ⊗ other` with row index `i*other.rows + k`.
    pub fn kron(&self, other: &QMatrix) -> QMatrix {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for (i, j, a) in self.entries() {
            for (k, l, b) in other.entries() {
                out.data[i * other.rows + k].insert(j * other.cols + l, a * b);
            }
        }
        out
    }

    /// Reduced row-echelon form.
    pub fn rref(&self) -> Rref {
        let mut rows = self.data.clone();
        let mut pivots = Vec::new();
        let mut next = 0usize;
        for col in 0..self.cols {
            if next == rows.len() {
                break;
            }
            let choice = (next..rows.len())
                .filter_map(|r| rows[r].get(&col).map(|v| (r, v)))
                .min_by(|(ra, a), (rb, b)| {
                    a.numer()
                        .abs()
                        .cmp(&b.numer().abs())
                        .then_with(|| a.denom().cmp(b.denom()))
                        .then_with(|| ra.cmp(rb))
                })
                .map(|(r, _)| r);
            let Some(p) = choice else { continue };
            rows.swap(next, p);
            let inv = rows[next][&col].recip();
            for v in rows[next].values_mut() {
                *v *= &inv;
            }
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == next {
                    continue;
                }
                if let Some(f) = row.get(&col).cloned() {
                    for (j, v) in &pivot_row {
                        let e = row.entry(*j).or_insert_with(Rational::zero);
                        *e -= &f * v;
                    }
                    row.retain(|_, v| !v.is_zero());
                }
            }
            pivots.push(col);
            next += 1;
        }
        Rref {
            matrix: QMatrix { rows: self.rows, cols: self.cols, data: rows },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        // Eliminating along the shorter side is cheaper and gives the same rank.
        if self.cols > self.rows * 2 {
            self.transpose().rref().rank()
        } else {
            self.rref().rank()
        }
    }

    /// Basis of `{ v : self · v = 0 }`, one vector per free column.
    pub fn kernel_basis(&self) -> Subspace {
        let r = self.rref();
        let pivot_set: std::collections::BTreeSet<usize> = r.pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivot_set.contains(c)) {
            let mut v = SparseVec::new();
            v.insert(free, Rational::one());
            for (i, &p) in r.pivots.iter().enumerate() {
                if let Some(a) = r.matrix.data[i].get(&free) {
                    v.insert(p, -a);
                }
            }
            basis.push(v);
        }
        Subspace { ambient: self.cols, basis }
    }

    /// Solves `self · x = b`; `None` when inconsistent. Free variables are set to zero.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = self.clone();
        aug.cols += 1;
        for (i, v) in b.iter().enumerate() {
            aug.set(i, self.cols, v.clone());
        }
        let r = aug.rref();
        if r.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &p) in r.pivots.iter().enumerate() {
            x[p] = r.matrix.get(i, self.cols);
        }
        Ok(Some(x))
    }
}

/// Result of row reduction.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: QMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// A subspace of `Q^ambient` given by a basis of sparse coordinate vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub ambient: usize,
    pub basis: Vec<SparseVec>,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dense_basis(&self) -> Vec<Vec<Rational>> {
        self.basis.iter().map(|v| to_dense(v, self.ambient)).collect()
    }

    /// Matrix whose columns are the basis vectors.
    pub fn as_columns(&self) -> QMatrix {
        let mut m = QMatrix::zeros(self.ambient, self.basis.len());
        for (j, v) in self.basis.iter().enumerate() {
            for (i, a) in v {
                m.set(*i, j, a.clone());
            }
        }
        m
    }

    pub fn is_independent(&self) -> bool {
        self.as_columns().rank() == self.dim()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        matches!(self.as_columns().solve(v), Ok(Some(_)))
    }
}

pub fn to_dense(v: &SparseVec, n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n];
    for (i, a) in v {
        out[*i] = a.clone();
    }
    out
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `dim ker(d_out) - rank(d_in)` for `d_in: C^{n-1} -> C^n`, `d_out: C^n -> C^{n+1}`.
pub fn homology_dim(d_in: &QMatrix, d_out: &QMatrix) -> Result<usize> {
    if d_in.rows() != d_out.cols() {
        return Err(Error::Dimension(format!(
            "incoming differential lands in dimension {} but outgoing starts in {}",
            d_in.rows(),
            d_out.cols()
        )));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(Error::NotAComplex { degree: 0 });
    }
    let kernel = d_out.cols() - d_out.rank();
    Ok(kernel - d_in.rank())
}
