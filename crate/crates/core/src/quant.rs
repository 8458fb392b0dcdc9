//! Weight-filtered complexes: quantum objects (a weight grading plus a weight-raising twist),
//! their classical reductions, the `q`-realization, `hom_ε`, and weight truncations.
//!
//! One unit of weight is one `ε`. A quantum object is stored as its total complex with a
//! weight attached to every basis vector; within each degree the basis is sorted by weight,
//! and the differential never lowers weight. The weight-preserving part is the differential
//! of the layers, so the diagonal twist components vanish by construction.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_traits::{One, Zero};

use crate::dg::{cone, hom_complex, tensor_dg, ComplexBuilder, DGModule, GradedMap};
use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Rational};

/// Restriction of `x` to the basis vectors in `keep` (ascending per degree). Valid when the
/// kept span is a subcomplex or a quotient complex; `DGModule::new` rejects anything else.
fn restrict(x: &DGModule, keep: &BTreeMap<i64, Vec<usize>>) -> Result<DGModule> {
    let mut b = ComplexBuilder::new();
    let cells: BTreeMap<i64, _> = keep.iter().map(|(&n, v)| (n, b.cell(n, v.len()))).collect();
    for (&n, rows_keep) in keep {
        let Some(cols_keep) = keep.get(&(n - 1)) else { continue };
        let d = x.d(n - 1);
        let col_pos: BTreeMap<usize, usize> = cols_keep.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        for (ri, &r) in rows_keep.iter().enumerate() {
            for (c, v) in d.row(r) {
                if let Some(&ci) = col_pos.get(c) {
                    b.add(cells[&(n - 1)], ci, cells[&n], ri, v.clone());
                }
            }
        }
    }
    b.build()
}

/// Inclusion of the span of `sub` into that of `sup` (both ascending index lists per degree).
fn inclusion(
    source: &DGModule,
    target: &DGModule,
    sub: &BTreeMap<i64, Vec<usize>>,
    sup: &BTreeMap<i64, Vec<usize>>,
) -> Result<GradedMap> {
    let mut comps = BTreeMap::new();
    for (&n, s) in sub {
        let t = &sup[&n];
        let mut m = QMatrix::zeros(t.len(), s.len());
        for (j, idx) in s.iter().enumerate() {
            let i = t.binary_search(idx).map_err(|_| Error::Index(format!("basis vector {idx} not in target")))?;
            m.set(i, j, Rational::one());
        }
        comps.insert(n, m);
    }
    GradedMap::new(source, target, 0, comps)
}

/// An object of `Quant⟨ε⟩`: layers `gr^n X` with twist components `D_{nm}: gr^n → gr^m`, `n < m`.
#[derive(Clone, Debug)]
pub struct QuantObject {
    total: DGModule,
    /// Weight of every basis vector of `total`, per degree, ascending.
    weights: BTreeMap<i64, Vec<i64>>,
}

impl PartialEq for QuantObject {
    fn eq(&self, other: &Self) -> bool {
        let nonempty = |w: &BTreeMap<i64, Vec<i64>>| -> BTreeMap<i64, Vec<i64>> {
            w.iter().filter(|(_, v)| !v.is_empty()).map(|(&n, v)| (n, v.clone())).collect()
        };
        let (a, b) = (nonempty(&self.weights), nonempty(&other.weights));
        a == b && a.keys().all(|&n| self.total.d(n) == other.total.d(n))
    }
}

impl QuantObject {
    /// Checks every component of the Maurer-Cartan equation
    /// `d_m D_{nm} + D_{nm} d_n + Σ_{n<p<m} D_{pm} D_{np} = 0` before assembling.
    pub fn new(layers: BTreeMap<i64, DGModule>, twist: BTreeMap<(i64, i64), GradedMap>) -> Result<Self> {
        let empty = DGModule::zero();
        let layer = |n: i64| layers.get(&n).unwrap_or(&empty);
        for (&(n, m), f) in &twist {
            if n >= m {
                return Err(Error::Degree(format!("twist component {n} -> {m} does not raise weight")));
            }
            if f.degree != 1 {
                return Err(Error::Degree(format!("twist component {n} -> {m} has degree {}", f.degree)));
            }
            for (&p, c) in f.components() {
                if c.cols() != layer(n).dim(p) || c.rows() != layer(m).dim(p + 1) {
                    return Err(Error::Dimension(format!("twist component {n} -> {m} in degree {p}")));
                }
            }
        }
        let ws: Vec<i64> = layers.keys().copied().collect();
        for (i, &n) in ws.iter().enumerate() {
            for &m in &ws[i + 1..] {
                let mut r = match twist.get(&(n, m)) {
                    Some(f) => f.hom_differential(layer(n), layer(m))?,
                    None => GradedMap::zero(2),
                };
                for &p in ws.iter().filter(|&&p| n < p && p < m) {
                    if let (Some(a), Some(b)) = (twist.get(&(n, p)), twist.get(&(p, m))) {
                        r = r.add(&b.compose(a)?)?;
                    }
                }
                if let Some(&deg) = r.components().keys().next() {
                    return Err(Error::McViolation { degree: deg });
                }
            }
        }
        let mut b = ComplexBuilder::new();
        let mut cells = BTreeMap::new();
        let mut weights: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        for (&w, x) in &layers {
            for n in x.degrees() {
                cells.insert((w, n), b.cell(n, x.dim(n)));
                weights.entry(n).or_default().extend(std::iter::repeat(w).take(x.dim(n)));
            }
        }
        for (&w, x) in &layers {
            for n in x.degrees() {
                if cells.contains_key(&(w, n + 1)) {
                    b.add_block(cells[&(w, n)], cells[&(w, n + 1)], &x.d(n));
                }
            }
        }
        for (&(n, m), f) in &twist {
            for (&p, c) in f.components() {
                b.add_block(cells[&(n, p)], cells[&(m, p + 1)], c);
            }
        }
        Ok(QuantObject { total: b.build()?, weights })
    }

    /// A classical object viewed as quantum with zero twist.
    pub fn classical(layers: BTreeMap<i64, DGModule>) -> Result<Self> {
        Self::new(layers, BTreeMap::new())
    }

    /// Sorts the basis by weight and checks that the differential never lowers weight.
    fn from_total(total: DGModule, weights: BTreeMap<i64, Vec<i64>>) -> Result<Self> {
        for n in total.degrees() {
            for (r, c, _) in total.d(n).entries() {
                if weights[&(n + 1)][r] < weights[&n][c] {
                    return Err(Error::Degree(format!("differential lowers weight in degree {n}")));
                }
            }
        }
        let perms: BTreeMap<i64, Vec<usize>> = weights
            .iter()
            .map(|(&n, w)| {
                let mut p: Vec<usize> = (0..w.len()).collect();
                p.sort_by_key(|&i| (w[i], i));
                (n, p)
            })
            .collect();
        let mut b = ComplexBuilder::new();
        let cells: BTreeMap<i64, _> = perms.iter().map(|(&n, p)| (n, b.cell(n, p.len()))).collect();
        let inv: BTreeMap<i64, Vec<usize>> = perms
            .iter()
            .map(|(&n, p)| {
                let mut v = vec![0; p.len()];
                for (new, &old) in p.iter().enumerate() {
                    v[old] = new;
                }
                (n, v)
            })
            .collect();
        for n in total.degrees() {
            if !cells.contains_key(&(n + 1)) {
                continue;
            }
            for (r, c, v) in total.d(n).entries() {
                b.add(cells[&n], inv[&n][c], cells[&(n + 1)], inv[&(n + 1)][r], v.clone());
            }
        }
        let weights = perms.iter().map(|(&n, p)| (n, p.iter().map(|&i| weights[&n][i]).collect())).collect();
        Ok(QuantObject { total: b.build()?, weights })
    }

    /// The total complex `(⊕ gr^n X, d + D)`.
    pub fn total(&self) -> &DGModule {
        &self.total
    }

    /// Weights occurring in the object, ascending.
    pub fn weights(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self.weights.values().flatten().copied().collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    fn select(&self, pred: impl Fn(i64) -> bool) -> BTreeMap<i64, Vec<usize>> {
        self.weights
            .iter()
            .map(|(&n, w)| (n, (0..w.len()).filter(|&i| pred(w[i])).collect::<Vec<_>>()))
            .filter(|(_, v)| !v.is_empty())
            .collect()
    }

    fn restricted(&self, pred: impl Fn(i64) -> bool) -> Result<QuantObject> {
        let keep = self.select(pred);
        let total = restrict(&self.total, &keep)?;
        let weights = keep.iter().map(|(&n, v)| (n, v.iter().map(|&i| self.weights[&n][i]).collect())).collect();
        Ok(QuantObject { total, weights })
    }

    /// The layer `gr^n X` with its own differential.
    pub fn layer(&self, n: i64) -> Result<DGModule> {
        restrict(&self.total, &self.select(|w| w == n))
    }

    /// The twist component `D_{nm}` as a map between layers.
    pub fn twist(&self, n: i64, m: i64) -> Result<GradedMap> {
        let (src, tgt) = (self.select(|w| w == n), self.select(|w| w == m));
        let mut comps = BTreeMap::new();
        for (&p, cols) in &src {
            let Some(rows) = tgt.get(&(p + 1)) else { continue };
            let d = self.total.d(p);
            let mut c = QMatrix::zeros(rows.len(), cols.len());
            for (i, &r) in rows.iter().enumerate() {
                for (j, &col) in cols.iter().enumerate() {
                    let v = d.get(r, col);
                    if !v.is_zero() {
                        c.set(i, j, v);
                    }
                }
            }
            comps.insert(p, c);
        }
        GradedMap::new(&self.layer(n)?, &self.layer(m)?, 1, comps)
    }

    /// `T_s`: every weight moves by `s`.
    pub fn regrade(&self, s: i64) -> QuantObject {
        QuantObject {
            total: self.total.clone(),
            weights: self.weights.iter().map(|(&n, w)| (n, w.iter().map(|x| x + s).collect())).collect(),
        }
    }

    /// Tensor product; weights add and the Koszul sign is that of the total complexes.
    pub fn tensor(&self, other: &QuantObject) -> Result<QuantObject> {
        let total = tensor_dg(&self.total, &other.total)?;
        let mut weights: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        for p in self.total.degrees() {
            for r in other.total.degrees() {
                let entry = weights.entry(p + r).or_default();
                for a in &self.weights[&p] {
                    entry.extend(other.weights[&r].iter().map(|b| a + b));
                }
            }
        }
        Self::from_total(total, weights)
    }
}

/// An object of `Classic⟨ε⟩`: a family of complexes indexed by weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicObject {
    layers: BTreeMap<i64, DGModule>,
}

impl ClassicObject {
    pub fn new(layers: BTreeMap<i64, DGModule>) -> Self {
        ClassicObject { layers: layers.into_iter().filter(|(_, x)| x.space().total_dim() > 0).collect() }
    }

    pub fn layers(&self) -> &BTreeMap<i64, DGModule> {
        &self.layers
    }

    pub fn layer(&self, n: i64) -> DGModule {
        self.layers.get(&n).cloned().unwrap_or_else(DGModule::zero)
    }

    pub fn to_quant(&self) -> Result<QuantObject> {
        QuantObject::classical(self.layers.clone())
    }

    /// Homology dimensions per weight and degree.
    pub fn homology(&self) -> BTreeMap<i64, BTreeMap<i64, usize>> {
        self.layers.iter().map(|(&w, x)| (w, x.homology())).filter(|(_, h)| !h.is_empty()).collect()
    }
}

/// Forgets the twist.
pub fn red(x: &QuantObject) -> Result<ClassicObject> {
    let layers = x.weights().into_iter().map(|w| Ok((w, x.layer(w)?))).collect::<Result<_>>()?;
    Ok(ClassicObject::new(layers))
}

/// `X[[q]]` on a window of weights: piece `n` is `∏_{p ≥ n} gr^p X` with the restricted
/// differential, and `q` includes piece `n + 1` into piece `n`.
#[derive(Clone, Debug)]
pub struct QRealization {
    window: RangeInclusive<i64>,
    /// pieces on the window and one above it
    pieces: BTreeMap<i64, DGModule>,
    q: BTreeMap<i64, GradedMap>,
}

impl QRealization {
    pub fn piece(&self, n: i64) -> &DGModule {
        &self.pieces[&n]
    }

    pub fn window(&self) -> RangeInclusive<i64> {
        self.window.clone()
    }

    /// `q: piece(n + 1) → piece(n)`.
    pub fn q_map(&self, n: i64) -> &GradedMap {
        &self.q[&n]
    }

    /// Whether the homotopy limit of the tower `… → piece(n + 1) → piece(n)` is acyclic, as seen
    /// from the window: the tower is constant above the support, so its limit is the piece just
    /// above the window once the window covers the support. Not an invariant of quantum objects.
    pub fn limit_is_acyclic(&self) -> bool {
        self.pieces[&(self.window.end() + 1)].is_acyclic()
    }

    /// `Cone(q: piece(n + 1) → piece(n))`, the derived reduction at weight `n`.
    pub fn cone_q(&self, n: i64) -> Result<DGModule> {
        cone(&self.pieces[&(n + 1)], &self.pieces[&n], &self.q[&n])
    }
}

pub fn q_realization(x: &QuantObject, window: RangeInclusive<i64>) -> Result<QRealization> {
    if window.is_empty() {
        return Err(Error::Index("empty weight window".into()));
    }
    let (lo, hi) = (*window.start(), *window.end());
    let keeps: BTreeMap<i64, _> = (lo..=hi + 1).map(|n| (n, x.select(|w| w >= n))).collect();
    let pieces: BTreeMap<i64, DGModule> =
        keeps.iter().map(|(&n, k)| Ok((n, restrict(&x.total, k)?))).collect::<Result<_>>()?;
    let mut q = BTreeMap::new();
    for n in lo..=hi {
        q.insert(n, inclusion(&pieces[&(n + 1)], &pieces[&n], &keeps[&(n + 1)], &keeps[&n])?);
    }
    Ok(QRealization { window, pieces, q })
}

/// Weight-nondecreasing maps `F → G` raising weight by at least `shift`, as a subcomplex of the
/// twisted hom complex of the totals, together with the positions it occupies there.
fn hom_at_least(f: &QuantObject, g: &QuantObject, shift: i64) -> Result<(DGModule, DGModule, BTreeMap<i64, Vec<usize>>)> {
    let full = hom_complex(&f.total, &g.total)?;
    let mut keep: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for n in full.degrees() {
        let mut off = 0;
        let mut idx = Vec::new();
        for p in f.total.degrees() {
            let (sx, ty) = (f.total.dim(p), g.total.dim(p + n));
            for i in 0..ty {
                for j in 0..sx {
                    if g.weights[&(p + n)][i] - f.weights[&p][j] >= shift {
                        idx.push(off + i * sx + j);
                    }
                }
            }
            off += sx * ty;
        }
        if !idx.is_empty() {
            keep.insert(n, idx);
        }
    }
    let sub = restrict(&full, &keep)?;
    Ok((full, sub, keep))
}

/// The twisted hom complex of `Quant⟨ε⟩`: maps that do not lower weight.
pub fn hom_quant(f: &QuantObject, g: &QuantObject) -> Result<DGModule> {
    Ok(hom_at_least(f, g, 0)?.1)
}

/// `hom_ε(F, G) = Cone(hom(F, T_{-ε} G) → hom(F, G))`, where `T_{-ε}` lowers weights by one so
/// that `hom(F, T_{-ε} G)` is the maps raising weight by at least one.
pub fn hom_eps(f: &QuantObject, g: &QuantObject) -> Result<DGModule> {
    let (_, big, big_keep) = hom_at_least(f, g, 0)?;
    let (_, small, small_keep) = hom_at_least(f, &g.regrade(-1), 0)?;
    // positions are shared: both are subsets of the same ambient hom complex
    let q = inclusion(&small, &big, &small_keep, &big_keep)?;
    cone(&small, &big, &q)
}

/// A weight-filtered complex with weights in `0..=max_weight`; `d = Σ_i d_i` with `d_i`
/// raising weight by `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredComplex {
    inner: QuantObject,
    max_weight: usize,
}

impl FilteredComplex {
    pub fn new(inner: QuantObject, max_weight: usize) -> Result<Self> {
        if let Some(w) = inner.weights().into_iter().find(|&w| w < 0 || w > max_weight as i64) {
            return Err(Error::Degree(format!("weight {w} outside 0..={max_weight}")));
        }
        Ok(FilteredComplex { inner, max_weight })
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn as_quant(&self) -> &QuantObject {
        &self.inner
    }

    pub fn total(&self) -> &DGModule {
        self.inner.total()
    }

    /// The part `d_i` of the differential raising weight by exactly `i`, per source degree.
    pub fn d_component(&self, i: usize) -> BTreeMap<i64, QMatrix> {
        let t = &self.inner.total;
        let w = &self.inner.weights;
        let mut out = BTreeMap::new();
        for n in t.degrees() {
            let d = t.d(n);
            let mut m = QMatrix::zeros(d.rows(), d.cols());
            for (r, c, v) in d.entries() {
                if w[&(n + 1)][r] - w[&n][c] == i as i64 {
                    m.set(r, c, v.clone());
                }
            }
            if !m.is_zero() {
                out.insert(n, m);
            }
        }
        out
    }

    /// The weight-`k` layer with `d_0`.
    pub fn graded_piece(&self, k: usize) -> Result<DGModule> {
        self.inner.layer(k as i64)
    }

    /// `π_{≤k}`: the quotient by the subcomplex of weights `> k`.
    pub fn truncate(&self, k: usize) -> Result<FilteredComplex> {
        if k > self.max_weight {
            return Err(Error::Index(format!("truncation weight {k} above {}", self.max_weight)));
        }
        Ok(FilteredComplex { inner: self.inner.restricted(|w| w <= k as i64)?, max_weight: k })
    }

    pub fn tensor(&self, other: &FilteredComplex) -> Result<FilteredComplex> {
        Ok(FilteredComplex { inner: self.inner.tensor(&other.inner)?, max_weight: self.max_weight + other.max_weight })
    }

    pub fn red(&self) -> Result<ClassicObject> {
        red(&self.inner)
    }
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::linalg::q;

    fn line(degree: i64) -> DGModule {
        DGModule::concentrated(degree, 1)
    }

    fn map(src: &DGModule, tgt: &DGModule, degree: i64, comps: &[(i64, &[&[i64]])]) -> GradedMap {
        let comps = comps.iter().map(|&(n, rows)| (n, QMatrix::from_i64(rows))).collect();
        GradedMap::new(src, tgt, degree, comps).unwrap()
    }

    /// `gr^0 = ℚ` in degree 0 and `gr^1 = ℚ` in degree 1 joined by `D_01 = 1`.
    fn linked_pair() -> QuantObject {
        let (a, b) = (line(0), line(1));
        let d01 = map(&a, &b, 1, &[(0, &[&[1]])]);
        QuantObject::new(BTreeMap::from([(0, a), (1, b)]), BTreeMap::from([((0, 1), d01)])).unwrap()
    }

    fn unlinked_pair() -> QuantObject {
        QuantObject::classical(BTreeMap::from([(0, line(0)), (1, line(1))])).unwrap()
    }

    /// Three weights with all of `D_01`, `D_12`, `D_02` needed for the Maurer-Cartan equation.
    fn three_weights() -> QuantObject {
        let g0 = DGModule::from_differentials(0, &[2, 1], &[QMatrix::from_i64(&[&[1, 0]])]).unwrap();
        let (g1, g2) = (line(1), line(2));
        let d01 = map(&g0, &g1, 1, &[(0, &[&[1, 0]])]);
        let d12 = map(&g1, &g2, 1, &[(1, &[&[1]])]);
        let d02 = map(&g0, &g2, 1, &[(1, &[&[-1]])]);
        QuantObject::new(
            BTreeMap::from([(0, g0), (1, g1), (2, g2)]),
            BTreeMap::from([((0, 1), d01), ((1, 2), d12), ((0, 2), d02)]),
        )
        .unwrap()
    }

    fn random_two_weight(rng: &mut ChaCha8Rng) -> FilteredComplex {
        let mut layers = BTreeMap::new();
        for w in 0..2 {
            let (m, n) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
            let d = QMatrix::from_rows(&(0..n).map(|_| (0..m).map(|_| q(rng.gen_range(-1..=1))).collect()).collect::<Vec<_>>());
            let d = if m == 0 || n == 0 { QMatrix::zeros(n, m) } else { d };
            layers.insert(w, DGModule::from_differentials(0, &[m, n], &[d]).unwrap());
        }
        let (s, t) = (layers[&0].dim(0), layers[&1].dim(1));
        let rows: Vec<Vec<Rational>> = (0..t).map(|_| (0..s).map(|_| q(rng.gen_range(-1..=1))).collect()).collect();
        let c = if s == 0 || t == 0 { QMatrix::zeros(t, s) } else { QMatrix::from_rows(&rows) };
        let d01 = GradedMap::new(&layers[&0], &layers[&1], 1, BTreeMap::from([(0, c)])).unwrap();
        FilteredComplex::new(QuantObject::new(layers, BTreeMap::from([((0, 1), d01)])).unwrap(), 1).unwrap()
    }

    #[test]
    fn red_forgets_the_twist() {
        let x = unlinked_pair();
        let r = red(&x).unwrap();
        assert_eq!(r.layer(0), line(0));
        assert_eq!(r.layer(1), line(1));
        assert_eq!(red(&r.to_quant().unwrap()).unwrap(), r);
        let y = linked_pair();
        assert_eq!(red(&y).unwrap(), r);
        assert_eq!(red(&red(&y).unwrap().to_quant().unwrap()).unwrap(), red(&y).unwrap());
    }

    #[test]
    fn the_twist_changes_homology() {
        let y = linked_pair();
        assert!(y.total().is_acyclic());
        let h = red(&y).unwrap().homology();
        assert_eq!(h.values().map(|x| x.values().sum::<usize>()).sum::<usize>(), 2);
        assert_eq!(y.twist(0, 1).unwrap().components()[&0], QMatrix::from_i64(&[&[1]]));
    }

    #[test]
    fn maurer_cartan_is_checked_componentwise() {
        let (g0, g1, g2) = (line(0), line(1), line(2));
        let d01 = map(&g0, &g1, 1, &[(0, &[&[1]])]);
        let d12 = map(&g1, &g2, 1, &[(1, &[&[1]])]);
        let r = QuantObject::new(
            BTreeMap::from([(0, g0.clone()), (1, g1.clone()), (2, g2)]),
            BTreeMap::from([((0, 1), d01), ((1, 2), d12)]),
        );
        assert!(matches!(r, Err(Error::McViolation { degree: 0 })));
        let back = map(&g1, &g0, 1, &[]);
        assert!(matches!(
            QuantObject::new(BTreeMap::from([(0, g0), (1, g1)]), BTreeMap::from([((1, 0), back)])),
            Err(Error::Degree(_))
        ));
        let x = three_weights();
        assert_eq!(x.weights(), vec![0, 1, 2]);
        assert_eq!(x.total().dim(0), 2);
    }

    #[test]
    fn q_realization_of_a_single_weight() {
        let x = QuantObject::classical(BTreeMap::from([(0, line(0))])).unwrap();
        let r = q_realization(&x, -1..=1).unwrap();
        assert_eq!(r.window(), -1..=1);
        assert_eq!(r.piece(0), &line(0));
        assert_eq!(r.piece(1).space().total_dim(), 0);
        assert!(r.q_map(0).is_zero());
        assert!(r.limit_is_acyclic());
        assert!(!q_realization(&x, -2..=-1).unwrap().limit_is_acyclic());
        assert_eq!(r.q_map(-1).components()[&0], QMatrix::identity(1));
    }

    /// The cone of `q` at weight `n` computes the homology of the layer `gr^n X`.
    #[test]
    fn cone_of_q_is_the_layer() {
        let x = three_weights();
        let r = q_realization(&x, 0..=2).unwrap();
        for n in 0..=2 {
            let c = r.cone_q(n).unwrap();
            assert_eq!(c.homology(), x.layer(n).unwrap().homology(), "weight {n}");
            // q is the identity on the components both pieces share
            for (deg, m) in r.q_map(n).components() {
                let rows = r.piece(n).dim(*deg);
                let cols = r.piece(n + 1).dim(*deg);
                assert_eq!(m.nnz(), cols);
                assert!(cols <= rows);
            }
        }
        assert_eq!(x.layer(0).unwrap().homology(), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn equal_reductions_different_realizations() {
        let (a, b) = (linked_pair(), unlinked_pair());
        assert_eq!(red(&a).unwrap(), red(&b).unwrap());
        let (ra, rb) = (q_realization(&a, 0..=1).unwrap(), q_realization(&b, 0..=1).unwrap());
        assert_ne!(ra.piece(0).homology(), rb.piece(0).homology());
        assert_eq!(ra.piece(1).homology(), rb.piece(1).homology());
    }

    #[test]
    fn hom_eps_of_a_single_weight_is_the_endomorphism_complex() {
        let layer = DGModule::from_differentials(0, &[2, 1], &[QMatrix::from_i64(&[&[1, 1]])]).unwrap();
        let x = QuantObject::classical(BTreeMap::from([(3, layer.clone())])).unwrap();
        let h = hom_eps(&x, &x).unwrap();
        assert_eq!(h.homology(), hom_complex(&layer, &layer).unwrap().homology());
        assert_eq!(h.homology(), hom_quant(&x, &x).unwrap().homology());
    }

    /// Two adjacent weights joined by the identity: `hom_ε` sees only weight-preserving maps,
    /// the classical endomorphisms of the two layers.
    #[test]
    fn hom_eps_of_a_linked_pair() {
        let y = linked_pair();
        let h = hom_eps(&y, &y).unwrap();
        let r = red(&y).unwrap();
        let mut expected: BTreeMap<i64, usize> = BTreeMap::new();
        for x in r.layers().values() {
            for (n, d) in hom_complex(x, x).unwrap().homology() {
                *expected.entry(n).or_default() += d;
            }
        }
        assert_eq!(h.homology(), expected);
        assert_eq!(h.homology(), BTreeMap::from([(0, 2)]));
        // the twisted hom: the twist pairs the two identities with the map a -> b
        assert_eq!(hom_quant(&y, &y).unwrap().homology(), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn hom_eps_is_invariant_under_common_regrading() {
        for x in [linked_pair(), three_weights()] {
            let h = hom_eps(&x, &x).unwrap().homology();
            let s = x.regrade(3);
            assert_eq!(hom_eps(&s, &s).unwrap().homology(), h);
            assert_eq!(hom_eps(&x, &linked_pair()).unwrap().homology(), hom_eps(&s, &linked_pair().regrade(3)).unwrap().homology());
        }
    }

    #[test]
    fn truncation_edges() {
        let x = FilteredComplex::new(three_weights(), 2).unwrap();
        assert_eq!(x.truncate(2).unwrap(), x);
        let t0 = x.truncate(0).unwrap();
        assert_eq!(t0.total(), &x.graded_piece(0).unwrap());
        assert_eq!(t0.red().unwrap().layer(0), x.red().unwrap().layer(0));
        assert!(x.truncate(3).is_err());
        assert!(FilteredComplex::new(three_weights(), 1).is_err());
        // d splits into weight-raising parts
        let mut sum: BTreeMap<i64, QMatrix> = BTreeMap::new();
        for i in 0..=2 {
            for (n, m) in x.d_component(i) {
                let s = sum.remove(&n).map_or(m.clone(), |a| a.add(&m).unwrap());
                sum.insert(n, s);
            }
        }
        for n in x.total().degrees() {
            assert_eq!(sum.get(&n).cloned().unwrap_or_else(|| x.total().d(n)), x.total().d(n));
        }
        assert!(!x.d_component(2).is_empty());
    }

    #[test]
    fn truncation_is_lax_monoidal_and_composes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let (x, y) = (random_two_weight(&mut rng), random_two_weight(&mut rng));
            let xy = x.tensor(&y).unwrap();
            assert_eq!(xy.max_weight(), 2);
            for k in 0..=1 {
                let lhs = xy.truncate(k).unwrap();
                let rhs = x.truncate(k).unwrap().tensor(&y.truncate(k).unwrap()).unwrap().truncate(k).unwrap();
                assert_eq!(lhs, rhs);
            }
            for k in 0..=2 {
                for j in 0..=k {
                    assert_eq!(xy.truncate(k).unwrap().truncate(j).unwrap(), xy.truncate(j).unwrap());
                }
            }
        }
    }

    #[test]
    fn red_is_monoidal() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..10 {
            let (x, y) = (random_two_weight(&mut rng), random_two_weight(&mut rng));
            let lhs = x.tensor(&y).unwrap().red().unwrap();
            let (rx, ry) = (x.red().unwrap(), y.red().unwrap());
            for k in 0..=2 {
                let mut parts = Vec::new();
                for a in 0..=k {
                    parts.push(tensor_dg(&rx.layer(a), &ry.layer(k - a)).unwrap());
                }
                let rhs = crate::dg::direct_sum(&parts).unwrap();
                let l = lhs.layer(k);
                for n in -1..=3 {
                    assert_eq!(l.dim(n), rhs.dim(n));
                    assert_eq!(l.homology_dim(n), rhs.homology_dim(n));
                }
            }
        }
    }
}
