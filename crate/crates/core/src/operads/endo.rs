use std::collections::BTreeMap;

use num_traits::Zero;

use super::free::{CycComb, CycTree, DTree, TreeComb};
use super::presentation::QuasiFreePresentation;
use crate::error::{Error, Result};
use crate::hochschild::{Algebra, CyclicCochain, HochCochain, TracedAlgebra};
use crate::linalg::Rational;
use crate::signs::parity_sign;

/// Endomorphism circular operad of a finite-dimensional algebra: `hom(A^{⊗n}, A)` in arity
/// `n` and, when a trace is given, all functionals on `A^{⊗(n+1)}` at cyclic level `n`.
/// Compositions are the signed Hochschild ones, so the differential is zero.
#[derive(Clone, Debug)]
pub struct EndomorphismOperad {
    algebra: Algebra,
    trace: Option<TracedAlgebra>,
}

impl EndomorphismOperad {
    pub fn new(algebra: Algebra, trace: Option<Vec<Rational>>) -> Result<Self> {
        let trace = trace.map(|t| TracedAlgebra::new(algebra.clone(), t)).transpose()?;
        Ok(EndomorphismOperad { algebra, trace })
    }

    pub fn from_traced(tr: &TracedAlgebra) -> Self {
        EndomorphismOperad { algebra: tr.algebra.clone(), trace: Some(tr.clone()) }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn traced(&self) -> Option<&TracedAlgebra> {
        self.trace.as_ref()
    }

    pub fn has_cyclic_part(&self) -> bool {
        self.trace.is_some()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.algebra.dim().pow(n as u32 + 1)
    }

    pub fn cyc_dim(&self, n: usize) -> usize {
        if self.trace.is_some() {
            self.dim(n)
        } else {
            0
        }
    }

    pub fn unit(&self) -> HochCochain {
        HochCochain::identity(self.algebra.dim())
    }

    /// `f ∘_i g`, `i` one-based.
    pub fn compose(&self, f: &HochCochain, i: usize, g: &HochCochain) -> Result<HochCochain> {
        if i == 0 || i > f.level() {
            return Err(Error::Index(format!("composition position {i} outside 1..={}", f.level())));
        }
        Ok(f.compose_at(i, g))
    }

    /// `φ ∘_j g = (-1)^{j(q-1)} φ(.., g(..), ..)` with `j` zero-based.
    pub fn cyc_compose(&self, phi: &CyclicCochain, j: usize, g: &HochCochain) -> Result<CyclicCochain> {
        cyc_compose(phi, j, g)
    }

    pub fn lambda(&self, phi: &CyclicCochain) -> CyclicCochain {
        phi.lambda()
    }
}

fn cyc_compose(phi: &CyclicCochain, j: usize, g: &HochCochain) -> Result<CyclicCochain> {
    if j > phi.level() {
        return Err(Error::Index(format!("cyclic position {j} outside 0..={}", phi.level())));
    }
    if phi.level() == 0 && g.level() == 0 {
        return Err(Error::Dimension("insertion would leave a functional with no arguments".into()));
    }
    let t = phi.insert_unsigned(j, g);
    let s = parity_sign(j as i64 * (g.level() as i64 - 1));
    Ok(if s < 0 { t.scale(&-Rational::from_integer(1.into())) } else { t })
}

/// Composite of a noncyclic tree with the value at every preorder vertex supplied.
pub(crate) fn eval_vertices(d: usize, t: &DTree, imgs: &[&HochCochain]) -> HochCochain {
    let steps = t.construction();
    if steps.is_empty() {
        return HochCochain::identity(d);
    }
    let mut f = imgs[0].clone();
    for (v, &(_, pos)) in steps.iter().enumerate().skip(1) {
        f = f.compose_at(pos + 1, imgs[v]);
    }
    f
}

/// Cyclic counterpart of [`eval_vertices`]; `imgs[0]` is unused, the root takes `root`.
pub(crate) fn eval_cyc_vertices(x: &CycTree, root: &CyclicCochain, imgs: &[&HochCochain]) -> Result<CyclicCochain> {
    if x.tree.n_leaves() == 0 {
        return Err(Error::Dimension("cyclic element with no legs has no functional model".into()));
    }
    let mut f = root.clone();
    for (v, &(_, pos)) in x.tree.construction().iter().enumerate().skip(1) {
        f = cyc_compose(&f, pos, imgs[v])?;
    }
    for _ in 0..x.start {
        f = f.lambda();
    }
    Ok(f)
}

/// Value of a generator in the endomorphism operad.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Image {
    Noncyc(HochCochain),
    Cyc(CyclicCochain),
}

impl Image {
    pub fn is_zero(&self) -> bool {
        match self {
            Image::Noncyc(f) => f.is_zero(),
            Image::Cyc(f) => f.is_zero(),
        }
    }

    pub fn values(&self) -> &[Rational] {
        match self {
            Image::Noncyc(f) => f.values(),
            Image::Cyc(f) => f.values(),
        }
    }
}

/// A filtered assignment `g ↦ Σ_k t^k Φ_k(g)` from the generators of a presentation into an
/// endomorphism operad. Weight-`k` parts are only allowed for `k ≥ weight(g)`.
#[derive(Clone, Debug)]
pub struct OperadMap {
    target: EndomorphismOperad,
    /// `images[(g, k)] = Φ_k(g)`
    images: BTreeMap<(usize, usize), Image>,
}

impl OperadMap {
    pub fn new(target: EndomorphismOperad) -> Self {
        OperadMap { target, images: BTreeMap::new() }
    }

    pub fn target(&self) -> &EndomorphismOperad {
        &self.target
    }

    /// Sets `Φ_k(g)`, checking arity, kind, filtration and parity.
    ///
    /// Noncyclic elements of an ungraded algebra have sign-degree `n - 1`, so a generator may
    /// take a nonzero noncyclic value only if its degree is even. Functionals sit in degree one,
    /// so a cyclic generator needs odd degree.
    pub fn set(&mut self, pres: &QuasiFreePresentation, g: usize, k: usize, image: Image) -> Result<()> {
        let gen = pres.generators().get(g).ok_or_else(|| Error::Index(format!("generator {g}")))?;
        let d = self.target.algebra.dim();
        let (level, dim, cyclic) = match &image {
            Image::Noncyc(f) => (f.level(), f.dim(), false),
            Image::Cyc(f) => (f.level(), f.dim(), true),
        };
        if cyclic != gen.cyclic || level != gen.arity || dim != d {
            return Err(Error::Arity { vertex: g, expected: gen.arity, got: level });
        }
        if cyclic && !self.target.has_cyclic_part() {
            return Err(Error::Dimension(format!("{} needs a traced target", gen.name)));
        }
        if k < gen.weight && !image.is_zero() {
            return Err(Error::Degree(format!("{} has weight {} but a nonzero weight-{k} image", gen.name, gen.weight)));
        }
        if gen.degree.rem_euclid(2) != i64::from(cyclic) && !image.is_zero() {
            return Err(Error::Degree(format!(
                "{} has degree {} of the wrong parity for a nonzero image",
                gen.name, gen.degree
            )));
        }
        if image.is_zero() {
            self.images.remove(&(g, k));
        } else {
            self.images.insert((g, k), image);
        }
        Ok(())
    }

    pub fn get(&self, g: usize, k: usize) -> Option<&Image> {
        self.images.get(&(g, k))
    }

    pub fn images(&self) -> impl Iterator<Item = (&(usize, usize), &Image)> {
        self.images.iter()
    }

    pub fn max_image_weight(&self) -> usize {
        self.images.keys().map(|&(_, k)| k).max().unwrap_or(0)
    }

    pub(crate) fn noncyc(&self, g: usize, k: usize) -> Option<&HochCochain> {
        match self.images.get(&(g, k)) {
            Some(Image::Noncyc(f)) => Some(f),
            _ => None,
        }
    }

    pub(crate) fn cyc(&self, g: usize, k: usize) -> Option<&CyclicCochain> {
        match self.images.get(&(g, k)) {
            Some(Image::Cyc(f)) => Some(f),
            _ => None,
        }
    }

    /// Weight-`k` part of the image of a noncyclic tree, built in preorder.
    pub fn eval_tree(&self, t: &DTree, k: usize) -> Result<HochCochain> {
        self.eval_tree_with(t, k, &|g, w| self.noncyc(g, w).cloned())
    }

    /// Like [`eval_tree`](Self::eval_tree) with the noncyclic images supplied by `img`.
    pub(crate) fn eval_tree_with(
        &self,
        t: &DTree,
        k: usize,
        img: &dyn Fn(usize, usize) -> Option<HochCochain>,
    ) -> Result<HochCochain> {
        let d = self.target.algebra.dim();
        let steps = t.construction();
        let n = t.n_leaves();
        if steps.is_empty() {
            return Ok(if k == 0 { HochCochain::identity(d) } else { HochCochain::zero(d, 1) });
        }
        let mut state: BTreeMap<usize, HochCochain> = BTreeMap::new();
        for w in 0..=k {
            if let Some(f) = img(steps[0].0, w) {
                state.insert(w, f);
            }
        }
        for &(g, pos) in &steps[1..] {
            let mut next: BTreeMap<usize, HochCochain> = BTreeMap::new();
            for (w1, f) in &state {
                for w2 in 0..=k - w1 {
                    if let Some(h) = img(g, w2) {
                        let c = f.compose_at(pos + 1, &h);
                        let e = next.entry(w1 + w2).or_insert_with(|| HochCochain::zero(d, c.level()));
                        *e = e.add(&c);
                    }
                }
            }
            state = next;
        }
        Ok(state.remove(&k).unwrap_or_else(|| HochCochain::zero(d, n)))
    }

    /// Weight-`k` part of the image of a cyclic basis element.
    pub fn eval_cyc_tree(&self, x: &CycTree, k: usize) -> Result<CyclicCochain> {
        self.eval_cyc_tree_with(x, k, &|g, w| self.noncyc(g, w).cloned(), &|g, w| self.cyc(g, w).cloned())
    }

    pub(crate) fn eval_cyc_tree_with(
        &self,
        x: &CycTree,
        k: usize,
        img: &dyn Fn(usize, usize) -> Option<HochCochain>,
        cimg: &dyn Fn(usize, usize) -> Option<CyclicCochain>,
    ) -> Result<CyclicCochain> {
        let d = self.target.algebra.dim();
        let n1 = x.tree.n_leaves();
        if n1 == 0 {
            return Err(Error::Dimension("cyclic element with no legs has no functional model".into()));
        }
        let steps = x.tree.construction();
        let mut state: BTreeMap<usize, CyclicCochain> = BTreeMap::new();
        for w in 0..=k {
            if let Some(f) = cimg(steps[0].0, w) {
                state.insert(w, f);
            }
        }
        for &(g, pos) in &steps[1..] {
            let mut next: BTreeMap<usize, CyclicCochain> = BTreeMap::new();
            for (w1, f) in &state {
                for w2 in 0..=k - w1 {
                    if let Some(h) = img(g, w2) {
                        let c = cyc_compose(f, pos, &h)?;
                        let e = next.entry(w1 + w2).or_insert_with(|| CyclicCochain::zero(d, c.level()));
                        *e = e.add(&c);
                    }
                }
            }
            state = next;
        }
        let mut out = state.remove(&k).unwrap_or_else(|| CyclicCochain::zero(d, n1 - 1));
        for _ in 0..x.start {
            out = out.lambda();
        }
        Ok(out)
    }

    pub fn eval(&self, x: &TreeComb, n: usize, k: usize) -> Result<HochCochain> {
        let d = self.target.algebra.dim();
        let mut acc = HochCochain::zero(d, n);
        for (t, c) in x.terms() {
            acc = acc.add(&self.eval_tree(t, k)?.scale(c));
        }
        Ok(acc)
    }

    pub fn eval_cyc(&self, x: &CycComb, n: usize, k: usize) -> Result<CyclicCochain> {
        let d = self.target.algebra.dim();
        let mut acc = CyclicCochain::zero(d, n);
        for (t, c) in x.terms() {
            acc = acc.add(&self.eval_cyc_tree(t, k)?.scale(c));
        }
        Ok(acc)
    }

    /// Weight-`k` part of `Φ(d g)`; the target differential is zero.
    pub fn residual(&self, pres: &QuasiFreePresentation, g: usize, k: usize) -> Result<Image> {
        let gen = &pres.generators()[g];
        Ok(if gen.cyclic {
            Image::Cyc(self.eval_cyc(&pres.d_generator_cyc(g), gen.arity, k)?)
        } else {
            Image::Noncyc(self.eval(&pres.d_generator(g), gen.arity, k)?)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapFailure {
    pub generator: String,
    pub weight: usize,
    pub residual: Image,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MapReport {
    pub failures: Vec<MapFailure>,
}

impl MapReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&MapFailure> {
        self.failures.first()
    }
}

/// Verifies `Φ(d g) = d Φ(g) = 0` for every generator in the arity window and every weight
/// `≤ max_weight`. Failures are ordered by weight, then generator. Cyclic images must be
/// invariant under the cyclic action.
pub fn check_operad_map(pres: &QuasiFreePresentation, map: &OperadMap, max_weight: usize) -> Result<MapReport> {
    for (&(g, _), image) in map.images() {
        if let Image::Cyc(f) = image {
            if !f.is_cyclic() {
                return Err(Error::Degree(format!(
                    "image of {} is not invariant under the cyclic action",
                    pres.generators()[g].name
                )));
            }
        }
    }
    let mut report = MapReport::default();
    for k in 0..=max_weight {
        for (g, gen) in pres.generators().iter().enumerate() {
            if gen.arity > pres.window().max_arity || (gen.cyclic && !map.target.has_cyclic_part()) {
                continue;
            }
            let r = map.residual(pres, g, k)?;
            if r.values().iter().any(|c| !c.is_zero()) {
                report.failures.push(MapFailure { generator: gen.name.clone(), weight: k, residual: r });
            }
        }
    }
    Ok(report)
}
