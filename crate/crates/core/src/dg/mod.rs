//! Cochain complexes over the rationals and the operations built from them.
//!
//! Conventions are cohomological throughout: differentials raise degree by one,
//! `X[k]^n = X^{n+k}` with differential `(-1)^k d`, and the cone of `f: X -> Y`
//! is `X[1] ⊕ Y` with differential `[[-d_X, 0], [f, d_Y]]`.

mod builder;
pub mod derived;

use std::collections::BTreeMap;

pub use builder::{Cell, ComplexBuilder};
pub use derived::{bar_tensor, hocolim, holim, Chain, DGFunctor, FiniteCategory, StableRange, Truncated, Variance};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{q, QMatrix, Rational};

/// Finite-dimensional graded vector space.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedSpace {
    dims: BTreeMap<i64, usize>,
    labels: BTreeMap<i64, Vec<String>>,
}

impl GradedSpace {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_dims(dims: impl IntoIterator<Item = (i64, usize)>) -> Self {
        let dims: BTreeMap<i64, usize> = dims.into_iter().filter(|&(_, d)| d > 0).collect();
        GradedSpace { dims, labels: BTreeMap::new() }
    }

    pub fn with_labels(mut self, degree: i64, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim(degree));
        self.labels.insert(degree, labels);
        self
    }

    pub fn label(&self, degree: i64, i: usize) -> String {
        self.labels
            .get(&degree)
            .and_then(|l| l.get(i).cloned())
            .unwrap_or_else(|| format!("e{degree}_{i}"))
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.dims.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.dims.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.dims.keys().next_back().copied()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .map(|(&d, &n)| if d.rem_euclid(2) == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }
}

/// A cochain complex: graded space plus square-zero differential of degree +1.
///
/// `diff[n]` is the matrix of `d: X^n -> X^{n+1}` (rows indexed by `X^{n+1}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGModule {
    space: GradedSpace,
    diff: BTreeMap<i64, QMatrix>,
}

impl DGModule {
    pub fn new(space: GradedSpace, diff: BTreeMap<i64, QMatrix>) -> Result<Self> {
        for (&n, m) in &diff {
            if m.rows() != space.dim(n + 1) || m.cols() != space.dim(n) {
                return Err(Error::Dimension(format!(
                    "differential in degree {n} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    space.dim(n + 1),
                    space.dim(n)
                )));
            }
        }
        let x = DGModule { space, diff: diff.into_iter().filter(|(_, m)| !m.is_zero()).collect() };
        for (&n, m) in &x.diff {
            if let Some(next) = x.diff.get(&(n + 1)) {
                if !next.mul(m)?.is_zero() {
                    return Err(Error::NotAComplex { degree: n });
                }
            }
        }
        Ok(x)
    }

    pub fn zero() -> Self {
        DGModule { space: GradedSpace::zero(), diff: BTreeMap::new() }
    }

    /// `Q^dim` concentrated in one degree with zero differential.
    pub fn concentrated(degree: i64, dim: usize) -> Self {
        DGModule { space: GradedSpace::from_dims([(degree, dim)]), diff: BTreeMap::new() }
    }

    /// Complex with the given differentials `d^n` starting at degree `start`.
    pub fn from_differentials(start: i64, dims: &[usize], diffs: &[QMatrix]) -> Result<Self> {
        let space = GradedSpace::from_dims(dims.iter().enumerate().map(|(i, &d)| (start + i as i64, d)));
        let diff = diffs.iter().enumerate().map(|(i, m)| (start + i as i64, m.clone())).collect();
        Self::new(space, diff)
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self, n: i64) -> usize {
        self.space.dim(n)
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.space.degrees().collect()
    }

    /// The differential `X^n -> X^{n+1}`.
    pub fn d(&self, n: i64) -> QMatrix {
        self.diff
            .get(&n)
            .cloned()
            .unwrap_or_else(|| QMatrix::zeros(self.dim(n + 1), self.dim(n)))
    }

    pub fn homology_dim(&self, n: i64) -> usize {
        let d_out = self.d(n);
        let d_in = self.d(n - 1);
        self.dim(n) - d_out.rank() - d_in.rank()
    }

    /// Nonzero homology dimensions by degree.
    pub fn homology(&self) -> BTreeMap<i64, usize> {
        self.degrees()
            .into_iter()
            .map(|n| (n, self.homology_dim(n)))
            .filter(|&(_, h)| h > 0)
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.homology().is_empty()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.space.euler_characteristic()
    }

    fn degree_span(&self) -> Option<(i64, i64)> {
        Some((self.space.min_degree()?, self.space.max_degree()?))
    }
}

/// Homogeneous linear map between complexes; `components[n]: X^n -> Y^{n+degree}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub degree: i64,
    components: BTreeMap<i64, QMatrix>,
}

impl GradedMap {
    pub fn new(source: &DGModule, target: &DGModule, degree: i64, components: BTreeMap<i64, QMatrix>) -> Result<Self> {
        for (&n, m) in &components {
            if m.cols() != source.dim(n) || m.rows() != target.dim(n + degree) {
                return Err(Error::Dimension(format!(
                    "component at degree {n} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.dim(n + degree),
                    source.dim(n)
                )));
            }
        }
        Ok(GradedMap { degree, components: components.into_iter().filter(|(_, m)| !m.is_zero()).collect() })
    }

    pub fn zero(degree: i64) -> Self {
        GradedMap { degree, components: BTreeMap::new() }
    }

    pub fn identity(x: &DGModule) -> Self {
        GradedMap {
            degree: 0,
            components: x.degrees().into_iter().map(|n| (n, QMatrix::identity(x.dim(n)))).collect(),
        }
    }

    pub fn scalar(x: &DGModule, s: &Rational) -> Self {
        GradedMap {
            degree: 0,
            components: x.degrees().into_iter().map(|n| (n, QMatrix::scalar(x.dim(n), s.clone()))).collect(),
        }
    }

    /// The differential of `x` viewed as a degree-one map.
    pub fn differential(x: &DGModule) -> Self {
        GradedMap { degree: 1, components: x.diff.clone() }
    }

    pub fn component(&self, source: &DGModule, target: &DGModule, n: i64) -> QMatrix {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| QMatrix::zeros(target.dim(n + self.degree), source.dim(n)))
    }

    pub fn components(&self) -> &BTreeMap<i64, QMatrix> {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap> {
        let mut components = BTreeMap::new();
        for (&n, m) in &other.components {
            if let Some(l) = self.components.get(&(n + other.degree)) {
                let c = l.mul(m)?;
                if !c.is_zero() {
                    components.insert(n, c);
                }
            }
        }
        Ok(GradedMap { degree: self.degree + other.degree, components })
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.degree != other.degree {
            return Err(Error::Dimension("adding maps of different degree".into()));
        }
        let mut components = self.components.clone();
        for (&n, m) in &other.components {
            let sum = match components.get(&n) {
                Some(a) => a.add(m)?,
                None => m.clone(),
            };
            if sum.is_zero() {
                components.remove(&n);
            } else {
                components.insert(n, sum);
            }
        }
        Ok(GradedMap { degree: self.degree, components })
    }

    pub fn scale(&self, s: &Rational) -> GradedMap {
        GradedMap {
            degree: self.degree,
            components: self
                .components
                .iter()
                .map(|(&n, m)| (n, m.scale(s)))
                .filter(|(_, m)| !m.is_zero())
                .collect(),
        }
    }

    /// Hom-complex differential `d_Y f - (-1)^{|f|} f d_X`.
    pub fn hom_differential(&self, source: &DGModule, target: &DGModule) -> Result<GradedMap> {
        let dy = GradedMap::differential(target);
        let dx = GradedMap::differential(source);
        let sign = if self.degree.rem_euclid(2) == 0 { q(-1) } else { q(1) };
        dy.compose(self)?.add(&self.compose(&dx)?.scale(&sign))
    }

    /// First degree where `d_Y f != ±f d_X`, if any.
    pub fn chain_map_defect(&self, source: &DGModule, target: &DGModule) -> Result<Option<i64>> {
        let dfx = self.hom_differential(source, target)?;
        Ok(dfx.components.keys().next().copied())
    }
}

/// A degree-one endomorphism `D` with `dD + D² = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MCElement {
    map: GradedMap,
}

impl MCElement {
    pub fn new(carrier: &DGModule, map: GradedMap) -> Result<Self> {
        if map.degree != 1 {
            return Err(Error::Dimension(format!("MC element must have degree 1, got {}", map.degree)));
        }
        let residual = map.hom_differential(carrier, carrier)?.add(&map.compose(&map)?)?;
        if let Some(&n) = residual.components.keys().next() {
            return Err(Error::McViolation { degree: n });
        }
        Ok(MCElement { map })
    }

    pub fn zero() -> Self {
        MCElement { map: GradedMap::zero(1) }
    }

    pub fn map(&self) -> &GradedMap {
        &self.map
    }
}

pub fn shift(x: &DGModule, k: i64) -> DGModule {
    let space = GradedSpace::from_dims(x.space.dims.iter().map(|(&n, &d)| (n - k, d)));
    let sign = if k.rem_euclid(2) == 0 { q(1) } else { q(-1) };
    let diff = x.diff.iter().map(|(&n, m)| (n - k, m.scale(&sign))).collect();
    DGModule { space, diff }
}

/// Mapping cone of a chain map `f: X -> Y` of degree zero.
pub fn cone(x: &DGModule, y: &DGModule, f: &GradedMap) -> Result<DGModule> {
    if f.degree != 0 {
        return Err(Error::Dimension("cone needs a degree-zero map".into()));
    }
    if let Some(n) = f.chain_map_defect(x, y)? {
        return Err(Error::NotAChainMap { degree: n });
    }
    let mut b = ComplexBuilder::new();
    let lo = [x.space.min_degree().map(|d| d - 1), y.space.min_degree()].into_iter().flatten().min();
    let hi = [x.space.max_degree().map(|d| d - 1), y.space.max_degree()].into_iter().flatten().max();
    let (Some(lo), Some(hi)) = (lo, hi) else { return Ok(DGModule::zero()) };
    let mut xs = BTreeMap::new();
    let mut ys = BTreeMap::new();
    for n in lo..=hi {
        xs.insert(n, b.cell(n, x.dim(n + 1)));
        ys.insert(n, b.cell(n, y.dim(n)));
    }
    for n in lo..hi {
        b.add_block(xs[&n], xs[&(n + 1)], &x.d(n + 1).neg());
        b.add_block(xs[&n], ys[&(n + 1)], &f.component(x, y, n + 1));
        b.add_block(ys[&n], ys[&(n + 1)], &y.d(n));
    }
    b.build()
}

/// `X` with differential `d + D`.
pub fn twist(x: &DGModule, d: &MCElement) -> Result<DGModule> {
    let total = GradedMap::differential(x).add(d.map())?;
    DGModule::new(x.space.clone(), total.components)
}

/// Basis layout of `hom(X, Y)^n`: blocks `Hom(X^p, Y^{p+n})` for `p` ascending, each
/// row-major in (target index, source index).
fn hom_layout(x: &DGModule, y: &DGModule, n: i64) -> Vec<(i64, usize)> {
    let mut out = Vec::new();
    let mut off = 0;
    for p in x.degrees() {
        let size = x.dim(p) * y.dim(p + n);
        if size > 0 {
            out.push((p, off));
            off += size;
        }
    }
    out
}

/// Twisted hom complex: `d'f = (d_Y + D_Y) f - (-1)^{|f|} f (d_X + D_X)`.
pub fn hom_dg(x: &DGModule, dx: Option<&MCElement>, y: &DGModule, dy: Option<&MCElement>) -> Result<DGModule> {
    let xt = match dx {
        Some(d) => twist(x, d)?,
        None => x.clone(),
    };
    let yt = match dy {
        Some(d) => twist(y, d)?,
        None => y.clone(),
    };
    hom_complex(&xt, &yt)
}

/// Plain hom complex.
pub fn hom_complex(x: &DGModule, y: &DGModule) -> Result<DGModule> {
    let (Some((xl, xh)), Some((yl, yh))) = (x.degree_span(), y.degree_span()) else {
        return Ok(DGModule::zero());
    };
    let lo = yl - xh;
    let hi = yh - xl;
    let mut b = ComplexBuilder::new();
    let mut cells: BTreeMap<(i64, i64), Cell> = BTreeMap::new();
    for n in lo..=hi {
        for p in x.degrees() {
            let size = x.dim(p) * y.dim(p + n);
            if size > 0 {
                cells.insert((n, p), b.cell(n, size));
            }
        }
    }
    for (&(n, p), &cell) in &cells {
        let ty = y.dim(p + n);
        let sx = x.dim(p);
        let sign = if n.rem_euclid(2) == 0 { q(-1) } else { q(1) };
        // d_Y ∘ E: X^p -> Y^{p+n+1}, same source block p.
        if let Some(&tc) = cells.get(&(n + 1, p)) {
            let dy_t = y.d(p + n).transpose();
            for i in 0..ty {
                for j in 0..sx {
                    for (r, v) in dy_t.row(i) {
                        b.add(cell, i * sx + j, tc, r * sx + j, v.clone());
                    }
                }
            }
        }
        // -(-1)^n E ∘ d_X: X^{p-1} -> Y^{p+n}, block p-1 of degree n+1.
        if let Some(&tc) = cells.get(&(n + 1, p - 1)) {
            let dxm = x.d(p - 1);
            let sx_prev = x.dim(p - 1);
            for i in 0..ty {
                for j in 0..sx {
                    for (c, v) in dxm.row(j) {
                        b.add(cell, i * sx + j, tc, i * sx_prev + c, &sign * v);
                    }
                }
            }
        }
    }
    b.build()
}

/// Coordinates of a graded map in the basis of [`hom_complex`] degree `map.degree`.
pub fn hom_coordinates(x: &DGModule, y: &DGModule, f: &GradedMap) -> Vec<Rational> {
    let n = f.degree;
    let layout = hom_layout(x, y, n);
    let total: usize = x.degrees().iter().map(|&p| x.dim(p) * y.dim(p + n)).sum();
    let mut out = vec![Rational::zero(); total];
    for (p, off) in layout {
        let m = f.component(x, y, p);
        for (i, j, v) in m.entries() {
            out[off + i * x.dim(p) + j] = v.clone();
        }
    }
    out
}

/// Tensor product with the Koszul sign `d(x⊗y) = dx⊗y + (-1)^{|x|} x⊗dy`.
pub fn tensor_dg(x: &DGModule, y: &DGModule) -> Result<DGModule> {
    let mut b = ComplexBuilder::new();
    let mut cells: BTreeMap<(i64, i64), Cell> = BTreeMap::new();
    let mut totals: BTreeMap<i64, Vec<(i64, i64)>> = BTreeMap::new();
    for p in x.degrees() {
        for r in y.degrees() {
            totals.entry(p + r).or_default().push((p, r));
        }
    }
    for (&n, pairs) in &totals {
        for &(p, r) in pairs {
            cells.insert((p, r), b.cell(n, x.dim(p) * y.dim(r)));
        }
    }
    for (&(p, r), &cell) in &cells {
        let dy_dim = y.dim(r);
        if let Some(&tc) = cells.get(&(p + 1, r)) {
            let dx = x.d(p).kron(&QMatrix::identity(dy_dim));
            b.add_block(cell, tc, &dx);
        }
        if let Some(&tc) = cells.get(&(p, r + 1)) {
            let sign = if p.rem_euclid(2) == 0 { q(1) } else { q(-1) };
            let dy = QMatrix::identity(x.dim(p)).kron(&y.d(r)).scale(&sign);
            b.add_block(cell, tc, &dy);
        }
    }
    b.build()
}

/// Block-diagonal direct sum, summands in order within each degree.
pub fn direct_sum(parts: &[DGModule]) -> Result<DGModule> {
    let mut b = ComplexBuilder::new();
    for x in parts {
        let cells: BTreeMap<i64, Cell> = x.degrees().into_iter().map(|n| (n, b.cell(n, x.dim(n)))).collect();
        for (&n, m) in &x.diff {
            b.add_block(cells[&n], cells[&(n + 1)], m);
        }
    }
    b.build()
}

/// Bigraded complex with `d_h: B^{p,q} -> B^{p+1,q}` and `d_v: B^{p,q} -> B^{p,q+1}`.
#[derive(Clone, Debug, Default)]
pub struct DoubleComplex {
    dims: BTreeMap<(i64, i64), usize>,
    dh: BTreeMap<(i64, i64), QMatrix>,
    dv: BTreeMap<(i64, i64), QMatrix>,
}

impl DoubleComplex {
    pub fn new(
        dims: BTreeMap<(i64, i64), usize>,
        dh: BTreeMap<(i64, i64), QMatrix>,
        dv: BTreeMap<(i64, i64), QMatrix>,
    ) -> Result<Self> {
        let dim = |k: &(i64, i64)| dims.get(k).copied().unwrap_or(0);
        for (&(p, qq), m) in &dh {
            if m.cols() != dim(&(p, qq)) || m.rows() != dim(&(p + 1, qq)) {
                return Err(Error::Dimension(format!("horizontal map at ({p},{qq}) has wrong shape")));
            }
        }
        for (&(p, qq), m) in &dv {
            if m.cols() != dim(&(p, qq)) || m.rows() != dim(&(p, qq + 1)) {
                return Err(Error::Dimension(format!("vertical map at ({p},{qq}) has wrong shape")));
            }
        }
        let dc = DoubleComplex { dims, dh, dv };
        for &(p, qq) in dc.dims.keys() {
            let h = dc.h(p, qq);
            let v = dc.v(p, qq);
            if !dc.h(p + 1, qq).mul(&h)?.is_zero() {
                return Err(Error::NotAComplex { degree: p + qq });
            }
            if !dc.v(p, qq + 1).mul(&v)?.is_zero() {
                return Err(Error::NotAComplex { degree: p + qq });
            }
            let anti = dc.v(p + 1, qq).mul(&h)?.add(&dc.h(p, qq + 1).mul(&v)?)?;
            if !anti.is_zero() {
                return Err(Error::NotAntiCommuting { p, q: qq });
            }
        }
        Ok(dc)
    }

    pub fn dim(&self, p: i64, qq: i64) -> usize {
        self.dims.get(&(p, qq)).copied().unwrap_or(0)
    }

    fn h(&self, p: i64, qq: i64) -> QMatrix {
        self.dh
            .get(&(p, qq))
            .cloned()
            .unwrap_or_else(|| QMatrix::zeros(self.dim(p + 1, qq), self.dim(p, qq)))
    }

    fn v(&self, p: i64, qq: i64) -> QMatrix {
        self.dv
            .get(&(p, qq))
            .cloned()
            .unwrap_or_else(|| QMatrix::zeros(self.dim(p, qq + 1), self.dim(p, qq)))
    }
}

/// Total complex `Tot^n = ⊕_{p+q=n} B^{p,q}` (blocks in increasing `p`), differential `d_h + d_v`.
pub fn totalize(bc: &DoubleComplex) -> Result<DGModule> {
    let mut b = ComplexBuilder::new();
    let mut by_total: BTreeMap<i64, Vec<(i64, i64)>> = BTreeMap::new();
    for &(p, qq) in bc.dims.keys() {
        by_total.entry(p + qq).or_default().push((p, qq));
    }
    let mut cells = BTreeMap::new();
    for (&n, keys) in &by_total {
        for &k in keys {
            cells.insert(k, b.cell(n, bc.dim(k.0, k.1)));
        }
    }
    for (&(p, qq), &c) in &cells {
        if let Some(&t) = cells.get(&(p + 1, qq)) {
            b.add_block(c, t, &bc.h(p, qq));
        }
        if let Some(&t) = cells.get(&(p, qq + 1)) {
            b.add_block(c, t, &bc.v(p, qq));
        }
    }
    b.build()
}

/// Canonical truncation: degrees below zero untouched, degree zero replaced by `ker d^0`.
pub fn tau_leq0(x: &DGModule) -> Result<DGModule> {
    let mut b = ComplexBuilder::new();
    let kernel = x.d(0).kernel_basis();
    let kcols = kernel.as_columns();
    let mut cells = BTreeMap::new();
    for n in x.degrees().into_iter().filter(|&n| n < 0) {
        cells.insert(n, b.cell(n, x.dim(n)));
    }
    let zero_cell = b.cell(0, kernel.dim());
    for (&n, &c) in &cells {
        if n + 1 < 0 {
            if let Some(&t) = cells.get(&(n + 1)) {
                b.add_block(c, t, &x.d(n));
            }
        } else {
            // d^{-1} lands in ker d^0; express each image in kernel coordinates.
            let d = x.d(-1);
            for j in 0..x.dim(-1) {
                let col: Vec<Rational> = (0..x.dim(0)).map(|i| d.get(i, j)).collect();
                let coords = kcols
                    .solve(&col)?
                    .ok_or_else(|| Error::NotAComplex { degree: -1 })?;
                for (i, v) in coords.into_iter().enumerate() {
                    if !v.is_zero() {
                        b.add(c, j, zero_cell, i, v);
                    }
                }
            }
        }
    }
    b.build()
}

/// Degree-zero cohomology as a graded space concentrated in degree zero.
pub fn h0(x: &DGModule) -> GradedSpace {
    GradedSpace::from_dims([(0, x.homology_dim(0))])
}

/// `Q` in degree zero.
pub fn unit_complex() -> DGModule {
    DGModule::concentrated(0, 1)
}
