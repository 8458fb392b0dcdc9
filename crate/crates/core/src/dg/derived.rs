//! Finite linear categories, DG functors, and the bar/cobar models for derived tensor
//! products and homotopy (co)limits.
//!
//! Every chain is normalized: identities are basis morphisms and chains containing an
//! identity are quotiented out, so posets give finite models once the window covers the
//! longest chain.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{Cell, ComplexBuilder, DGModule, GradedMap};
use crate::error::{Error, Result};
use crate::linalg::{q, QMatrix, Rational, SparseVec};

/// Linear category with finitely many objects and finite-dimensional hom spaces.
///
/// `compose[(a, b, c)]` has shape `dim(a, c) x (dim(b, c) * dim(a, b))`; the column
/// `g * dim(a, b) + f` holds `g ∘ f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    n_objects: usize,
    hom_dims: Vec<Vec<usize>>,
    compose: BTreeMap<(usize, usize, usize), QMatrix>,
    identities: Vec<usize>,
}

impl FiniteCategory {
    /// Validates shapes, associativity and units. `identities[a]` is the basis index of `id_a`.
    pub fn new(
        hom_dims: Vec<Vec<usize>>,
        compose: BTreeMap<(usize, usize, usize), QMatrix>,
        identities: Vec<usize>,
    ) -> Result<Self> {
        let n = hom_dims.len();
        if hom_dims.iter().any(|r| r.len() != n) || identities.len() != n {
            return Err(Error::Composition("hom table is not square".into()));
        }
        for (a, &id) in identities.iter().enumerate() {
            if id >= hom_dims[a][a] {
                return Err(Error::Composition(format!("identity of object {a} out of range")));
            }
        }
        for (&(a, b, c), m) in &compose {
            if a >= n || b >= n || c >= n {
                return Err(Error::Composition(format!("composition ({a},{b},{c}) names a missing object")));
            }
            if m.rows() != hom_dims[a][c] || m.cols() != hom_dims[b][c] * hom_dims[a][b] {
                return Err(Error::Composition(format!("composition ({a},{b},{c}) has wrong shape")));
            }
        }
        let cat = FiniteCategory { n_objects: n, hom_dims, compose, identities };
        cat.check_units()?;
        cat.check_associativity()?;
        Ok(cat)
    }

    /// One object, `End = Q`.
    pub fn point() -> Self {
        Self::poset(1, &[]).expect("point category is valid")
    }

    /// Poset category generated by the relations `a <= b`; reflexive and transitive closure
    /// is taken. Fails on cycles.
    pub fn poset(n: usize, relations: &[(usize, usize)]) -> Result<Self> {
        let mut le = vec![vec![false; n]; n];
        for (a, row) in le.iter_mut().enumerate() {
            row[a] = true;
        }
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::Composition(format!("relation ({a},{b}) out of range")));
            }
            le[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if le[i][k] && le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && le[i][j] && le[j][i] {
                    return Err(Error::Composition(format!("relations contain a cycle through {i} and {j}")));
                }
            }
        }
        let hom_dims: Vec<Vec<usize>> = le.iter().map(|r| r.iter().map(|&x| usize::from(x)).collect()).collect();
        let mut compose = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if le[a][b] && le[b][c] {
                        compose.insert((a, b, c), QMatrix::identity(1));
                    }
                }
            }
        }
        Self::new(hom_dims, compose, vec![0; n])
    }

    pub fn n_objects(&self) -> usize {
        self.n_objects
    }

    pub fn hom_dim(&self, a: usize, b: usize) -> usize {
        self.hom_dims[a][b]
    }

    pub fn identity(&self, a: usize) -> usize {
        self.identities[a]
    }

    pub fn is_identity(&self, a: usize, b: usize, k: usize) -> bool {
        a == b && self.identities[a] == k
    }

    /// `g ∘ f` for basis morphisms `f: a -> b`, `g: b -> c`, as a sparse vector in `Hom(a, c)`.
    pub fn compose_basis(&self, a: usize, b: usize, c: usize, g: usize, f: usize) -> SparseVec {
        match self.compose.get(&(a, b, c)) {
            Some(m) => {
                let col = g * self.hom_dims[a][b] + f;
                let mut out = SparseVec::new();
                for (r, row) in (0..m.rows()).map(|r| (r, m.row(r))) {
                    if let Some(v) = row.get(&col) {
                        out.insert(r, v.clone());
                    }
                }
                out
            }
            None => SparseVec::new(),
        }
    }

    fn check_units(&self) -> Result<()> {
        for a in 0..self.n_objects {
            for b in 0..self.n_objects {
                for f in 0..self.hom_dims[a][b] {
                    let unit = SparseVec::from([(f, q(1))]);
                    if self.compose_basis(a, b, b, self.identities[b], f) != unit
                        || self.compose_basis(a, a, b, f, self.identities[a]) != unit
                    {
                        return Err(Error::Composition(format!("unit law fails for morphism {f}: {a} -> {b}")));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.n_objects;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for f in 0..self.hom_dims[a][b] {
                            for g in 0..self.hom_dims[b][c] {
                                for h in 0..self.hom_dims[c][d] {
                                    let mut left = SparseVec::new();
                                    for (hg, x) in self.compose_basis(b, c, d, h, g) {
                                        for (k, y) in self.compose_basis(a, b, d, hg, f) {
                                            *left.entry(k).or_insert_with(Rational::zero) += &x * &y;
                                        }
                                    }
                                    let mut right = SparseVec::new();
                                    for (gf, x) in self.compose_basis(a, b, c, g, f) {
                                        for (k, y) in self.compose_basis(a, c, d, h, gf) {
                                            *right.entry(k).or_insert_with(Rational::zero) += &x * &y;
                                        }
                                    }
                                    left.retain(|_, v| !v.is_zero());
                                    right.retain(|_, v| !v.is_zero());
                                    if left != right {
                                        return Err(Error::Composition(format!(
                                            "associativity fails on {a} -> {b} -> {c} -> {d}"
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Nondegenerate chains `(objects, morphisms)` with exactly `len` morphisms.
    pub fn chains(&self, len: usize) -> Vec<Chain> {
        let mut out: Vec<Chain> = (0..self.n_objects).map(|a| Chain { objects: vec![a], morphisms: vec![] }).collect();
        for _ in 0..len {
            let mut next = Vec::new();
            for ch in &out {
                let a = *ch.objects.last().expect("chains are nonempty");
                for b in 0..self.n_objects {
                    for k in 0..self.hom_dims[a][b] {
                        if self.is_identity(a, b, k) {
                            continue;
                        }
                        let mut c = ch.clone();
                        c.objects.push(b);
                        c.morphisms.push(k);
                        next.push(c);
                    }
                }
            }
            out = next;
        }
        out
    }

    /// Interior face: replaces morphisms `i-1, i` (zero-based) by their composite.
    fn merge(&self, ch: &Chain, i: usize) -> Vec<(Chain, Rational)> {
        let (a, b, c) = (ch.objects[i - 1], ch.objects[i], ch.objects[i + 1]);
        let mut out = Vec::new();
        for (h, coeff) in self.compose_basis(a, b, c, ch.morphisms[i], ch.morphisms[i - 1]) {
            if self.is_identity(a, c, h) {
                continue;
            }
            let mut objects = ch.objects.clone();
            objects.remove(i);
            let mut morphisms = ch.morphisms.clone();
            morphisms.splice(i - 1..=i, [h]);
            out.push((Chain { objects, morphisms }, coeff));
        }
        out
    }
}

/// A string `X_0 -> X_1 -> ... -> X_n` of basis morphisms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain {
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphisms.is_empty()
    }

    fn drop_first(&self) -> Chain {
        Chain { objects: self.objects[1..].to_vec(), morphisms: self.morphisms[1..].to_vec() }
    }

    fn drop_last(&self) -> Chain {
        let n = self.morphisms.len();
        Chain { objects: self.objects[..n].to_vec(), morphisms: self.morphisms[..n - 1].to_vec() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    Covariant,
    Contravariant,
}

/// Functor to cochain complexes. `maps[(a, b, k)]` is the image of basis morphism `k: a -> b`,
/// a chain map `F(a) -> F(b)` (covariant) or `F(b) -> F(a)` (contravariant).
#[derive(Clone, Debug)]
pub struct DGFunctor {
    variance: Variance,
    objects: Vec<DGModule>,
    maps: BTreeMap<(usize, usize, usize), GradedMap>,
}

impl DGFunctor {
    pub fn new(
        cat: &FiniteCategory,
        variance: Variance,
        objects: Vec<DGModule>,
        maps: BTreeMap<(usize, usize, usize), GradedMap>,
    ) -> Result<Self> {
        if objects.len() != cat.n_objects() {
            return Err(Error::Dimension(format!(
                "functor has {} objects, category has {}",
                objects.len(),
                cat.n_objects()
            )));
        }
        let f = DGFunctor { variance, objects, maps };
        f.check(cat)?;
        Ok(f)
    }

    /// Every basis morphism acts by the identity; valid when composites of basis morphisms
    /// are basis morphisms (posets, linearized ordinary categories).
    pub fn constant(cat: &FiniteCategory, variance: Variance, x: &DGModule) -> Result<Self> {
        let mut maps = BTreeMap::new();
        for a in 0..cat.n_objects() {
            for b in 0..cat.n_objects() {
                for k in 0..cat.hom_dim(a, b) {
                    maps.insert((a, b, k), GradedMap::identity(x));
                }
            }
        }
        Self::new(cat, variance, vec![x.clone(); cat.n_objects()], maps)
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn object(&self, a: usize) -> &DGModule {
        &self.objects[a]
    }

    fn ends(&self, a: usize, b: usize) -> (&DGModule, &DGModule) {
        match self.variance {
            Variance::Covariant => (&self.objects[a], &self.objects[b]),
            Variance::Contravariant => (&self.objects[b], &self.objects[a]),
        }
    }

    /// Image of a basis morphism, zero when unspecified.
    pub fn map(&self, a: usize, b: usize, k: usize) -> GradedMap {
        self.maps.get(&(a, b, k)).cloned().unwrap_or_else(|| GradedMap::zero(0))
    }

    /// Component at internal degree `p`.
    pub fn map_component(&self, a: usize, b: usize, k: usize, p: i64) -> QMatrix {
        let (s, t) = self.ends(a, b);
        self.map(a, b, k).component(s, t, p)
    }

    fn check(&self, cat: &FiniteCategory) -> Result<()> {
        let n = cat.n_objects();
        for (&(a, b, k), m) in &self.maps {
            if a >= n || b >= n || k >= cat.hom_dim(a, b) {
                return Err(Error::Composition(format!("functor maps a missing morphism ({a},{b},{k})")));
            }
            let (s, t) = self.ends(a, b);
            if m.degree != 0 {
                return Err(Error::Dimension("functor maps must have degree 0".into()));
            }
            GradedMap::new(s, t, 0, m.components().clone())?;
            if let Some(deg) = m.chain_map_defect(s, t)? {
                return Err(Error::NotAChainMap { degree: deg });
            }
        }
        for a in 0..n {
            if self.map(a, a, cat.identity(a)) != GradedMap::identity(&self.objects[a]) {
                return Err(Error::Composition(format!("identity of object {a} is not preserved")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for f in 0..cat.hom_dim(a, b) {
                        for g in 0..cat.hom_dim(b, c) {
                            let lhs = match self.variance {
                                Variance::Covariant => self.map(b, c, g).compose(&self.map(a, b, f))?,
                                Variance::Contravariant => self.map(a, b, f).compose(&self.map(b, c, g))?,
                            };
                            let mut rhs = GradedMap::zero(0);
                            for (h, coeff) in cat.compose_basis(a, b, c, g, f) {
                                rhs = rhs.add(&self.map(a, c, h).scale(&coeff))?;
                            }
                            if lhs != rhs {
                                return Err(Error::Composition(format!(
                                    "functor does not respect composition on {a} -> {b} -> {c}"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn degree_bounds(&self) -> Option<(i64, i64)> {
        let lo = self.objects.iter().filter_map(|x| x.space().min_degree()).min()?;
        let hi = self.objects.iter().filter_map(|x| x.space().max_degree()).max()?;
        Some((lo, hi))
    }
}

/// Range of total degrees where a windowed model computes the true cohomology.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StableRange {
    All,
    From(i64),
    UpTo(i64),
}

impl StableRange {
    pub fn contains(&self, n: i64) -> bool {
        match *self {
            StableRange::All => true,
            StableRange::From(k) => n >= k,
            StableRange::UpTo(k) => n <= k,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Truncated {
    pub complex: DGModule,
    pub stable: StableRange,
}

fn sign(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        q(1)
    } else {
        q(-1)
    }
}

/// Normalized two-sided bar model of `F ⊗^L_I G` with chains of length at most `window`.
///
/// Chain length `n` with `F(X_0)^p ⊗ G(X_n)^r` sits in total degree `p + r - n`.
pub fn bar_tensor(cat: &FiniteCategory, f: &DGFunctor, g: &DGFunctor, window: usize) -> Result<Truncated> {
    if f.variance != Variance::Covariant || g.variance != Variance::Contravariant {
        return Err(Error::Composition("bar model needs F covariant and G contravariant".into()));
    }
    let mut b = ComplexBuilder::new();
    let mut cells: BTreeMap<(Chain, i64, i64), Cell> = BTreeMap::new();
    let mut by_degree: BTreeMap<i64, Vec<(Chain, i64, i64, usize)>> = BTreeMap::new();
    for n in 0..=window {
        for ch in cat.chains(n) {
            let fx = f.object(ch.objects[0]);
            let gx = g.object(*ch.objects.last().expect("nonempty"));
            for p in fx.degrees() {
                for r in gx.degrees() {
                    let size = fx.dim(p) * gx.dim(r);
                    by_degree.entry(p + r - n as i64).or_default().push((ch.clone(), p, r, size));
                }
            }
        }
    }
    for (deg, list) in by_degree {
        for (ch, p, r, size) in list {
            let c = b.cell(deg, size);
            cells.insert((ch, p, r), c);
        }
    }
    for ((ch, p, r), &cell) in &cells {
        let (p, r) = (*p, *r);
        let n = ch.len();
        let fx = f.object(ch.objects[0]);
        let gx = g.object(ch.objects[n]);
        let eps = sign(n as i64);
        if let Some(&t) = cells.get(&(ch.clone(), p + 1, r)) {
            b.add_block(cell, t, &fx.d(p).kron(&QMatrix::identity(gx.dim(r))).scale(&eps));
        }
        if let Some(&t) = cells.get(&(ch.clone(), p, r + 1)) {
            let s = &eps * sign(p);
            b.add_block(cell, t, &QMatrix::identity(fx.dim(p)).kron(&gx.d(r)).scale(&s));
        }
        if n == 0 {
            continue;
        }
        let first = ch.drop_first();
        if let Some(&t) = cells.get(&(first, p, r)) {
            let fmap = f.map_component(ch.objects[0], ch.objects[1], ch.morphisms[0], p);
            b.add_block(cell, t, &fmap.kron(&QMatrix::identity(gx.dim(r))));
        }
        for i in 1..n {
            for (merged, coeff) in cat.merge(ch, i) {
                if let Some(&t) = cells.get(&(merged, p, r)) {
                    let block = QMatrix::scalar(fx.dim(p) * gx.dim(r), coeff * sign(i as i64));
                    b.add_block(cell, t, &block);
                }
            }
        }
        let last = ch.drop_last();
        if let Some(&t) = cells.get(&(last, p, r)) {
            let gmap = g.map_component(ch.objects[n - 1], ch.objects[n], ch.morphisms[n - 1], r);
            b.add_block(cell, t, &QMatrix::identity(fx.dim(p)).kron(&gmap).scale(&eps));
        }
    }
    let complex = b.build()?;
    let stable = match (f.degree_bounds(), g.degree_bounds()) {
        (Some((_, fh)), Some((_, gh))) if !cat.chains(window + 1).is_empty() => {
            StableRange::From(fh + gh - window as i64 + 1)
        }
        _ => StableRange::All,
    };
    Ok(Truncated { complex, stable })
}

/// `hocolim F = F ⊗^L_I Q`.
pub fn hocolim(cat: &FiniteCategory, f: &DGFunctor, window: usize) -> Result<Truncated> {
    let unit = DGFunctor::constant(cat, Variance::Contravariant, &super::unit_complex())?;
    bar_tensor(cat, f, &unit, window)
}

/// Normalized cobar model of `holim F` for covariant `F`, chains of length at most `window`.
///
/// A cochain of length `n` assigns to each chain an element of `F(X_n)`; total degree `p + n`.
pub fn holim(cat: &FiniteCategory, f: &DGFunctor, window: usize) -> Result<Truncated> {
    if f.variance != Variance::Covariant {
        return Err(Error::Composition("holim needs a covariant functor".into()));
    }
    let mut b = ComplexBuilder::new();
    let mut cells: BTreeMap<(Chain, i64), Cell> = BTreeMap::new();
    let mut by_degree: BTreeMap<i64, Vec<(Chain, i64, usize)>> = BTreeMap::new();
    for n in 0..=window {
        for ch in cat.chains(n) {
            let fx = f.object(*ch.objects.last().expect("nonempty"));
            for p in fx.degrees() {
                by_degree.entry(p + n as i64).or_default().push((ch.clone(), p, fx.dim(p)));
            }
        }
    }
    for (deg, list) in by_degree {
        for (ch, p, size) in list {
            let c = b.cell(deg, size);
            cells.insert((ch, p), c);
        }
    }
    for ((ch, p), &cell) in &cells {
        let p = *p;
        let n = ch.len();
        let fx = f.object(ch.objects[n]);
        if let Some(&t) = cells.get(&(ch.clone(), p + 1)) {
            b.add_block(cell, t, &fx.d(p).scale(&sign(n as i64)));
        }
    }
    // Cobar faces, indexed by the target chain of length m = n + 1.
    for m in 1..=window {
        for tch in cat.chains(m) {
            let fx = f.object(tch.objects[m]);
            for p in fx.degrees() {
                let Some(&t) = cells.get(&(tch.clone(), p)) else { continue };
                let last = tch.drop_last();
                if let Some(&s) = cells.get(&(last, p)) {
                    let fmap = f.map_component(tch.objects[m - 1], tch.objects[m], tch.morphisms[m - 1], p);
                    b.add_block(s, t, &fmap);
                }
                for i in 1..m {
                    for (merged, coeff) in cat.merge(&tch, i) {
                        if let Some(&s) = cells.get(&(merged, p)) {
                            b.add_block(s, t, &QMatrix::scalar(fx.dim(p), coeff * sign(i as i64)));
                        }
                    }
                }
                let first = tch.drop_first();
                if let Some(&s) = cells.get(&(first, p)) {
                    b.add_block(s, t, &QMatrix::scalar(fx.dim(p), sign(m as i64)));
                }
            }
        }
    }
    let complex = b.build()?;
    let stable = match f.degree_bounds() {
        Some((lo, _)) if !cat.chains(window + 1).is_empty() => StableRange::UpTo(lo + window as i64 - 1),
        _ => StableRange::All,
    };
    Ok(Truncated { complex, stable })
}
