use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::derivations::YModule;
use super::endo::OperadMap;
use super::free::{compose_trees, cyc_compose_trees, CycComb, CycTree, DTree, FreeOperad, Generator, TreeComb};
use super::presentation::QuasiFreePresentation;
use crate::dg::{ComplexBuilder, DGModule};
use crate::error::{Error, Result};
use crate::hochschild::{CyclicCochain, HochCochain};
use crate::linalg::{QMatrix, Rational};

/// Relabels preorder vertex `v` of `t` by the marked copy of its generator.
fn mark(t: &DTree, v: usize, offset: usize) -> DTree {
    fn go(t: &DTree, v: usize, offset: usize, next: &mut usize) -> DTree {
        match t {
            DTree::Leaf => DTree::Leaf,
            DTree::Node(g, kids) => {
                let here = *next;
                *next += 1;
                let g = if here == v { g + offset } else { *g };
                DTree::Node(g, kids.iter().map(|k| go(k, v, offset, next)).collect())
            }
        }
    }
    go(t, v, offset, &mut 0)
}

/// Kaehler differentials `Ω_P` of a quasi-free presentation, truncated to its window.
///
/// Realized inside the free operad on the generators together with one marked copy `dg` of
/// each: `Ω_P(n)` is spanned by trees with exactly one marked vertex, `P` acts by grafting,
/// and `d(dg) = Σ` over the terms of `d g` with each vertex marked in turn. Marks have the
/// degree of their generator, so the marking derivation has degree zero and commutes with `d`.
#[derive(Clone, Debug)]
pub struct KaehlerModule {
    n_base: usize,
    ext: QuasiFreePresentation,
    base: FreeOperad,
    basis: Vec<Vec<DTree>>,
    cyc_basis: Vec<Vec<CycTree>>,
    index: HashMap<DTree, usize>,
    cyc_index: HashMap<CycTree, usize>,
}

/// `Ω_P` as a module over `P`.
pub fn kaehler_module(pres: &QuasiFreePresentation) -> Result<YModule> {
    Ok(YModule::Kaehler(Box::new(KaehlerModule::new(pres)?)))
}

impl KaehlerModule {
    pub fn new(pres: &QuasiFreePresentation) -> Result<Self> {
        let gens = pres.generators();
        let n_base = gens.len();
        let window = pres.window();
        let mut ext_gens = gens.to_vec();
        ext_gens.extend(gens.iter().map(|g| Generator { name: format!("d{}", g.name), ..g.clone() }));
        let mut d_noncyc = BTreeMap::new();
        let mut d_cyc = BTreeMap::new();
        for (g, gen) in gens.iter().enumerate() {
            if gen.cyclic {
                let dg = pres.d_generator_cyc(g);
                d_cyc.insert(g, dg.clone());
                let mut marked = CycComb::zero();
                for (x, c) in dg.terms() {
                    for v in 0..x.tree.n_vertices() {
                        marked.add_term(CycTree::new(mark(&x.tree, v, n_base), x.start), c.clone());
                    }
                }
                d_cyc.insert(g + n_base, marked);
            } else {
                let dg = pres.d_generator(g);
                d_noncyc.insert(g, dg.clone());
                let mut marked = TreeComb::zero();
                for (t, c) in dg.terms() {
                    for v in 0..t.n_vertices() {
                        marked.add_term(mark(t, v, n_base), c.clone());
                    }
                }
                d_noncyc.insert(g + n_base, marked);
            }
        }
        let ext = QuasiFreePresentation::unchecked(ext_gens, d_noncyc, d_cyc, window);
        let base = FreeOperad::new(gens.to_vec(), window.max_arity, window.max_weight)?;
        let mut basis = Vec::new();
        let mut cyc_basis = Vec::new();
        for n in 0..=window.max_arity {
            let mut b: Vec<DTree> = base
                .basis(n)
                .iter()
                .flat_map(|t| (0..t.n_vertices()).map(move |v| mark(t, v, n_base)))
                .collect();
            b.sort();
            basis.push(b);
            let mut cb: Vec<CycTree> = base
                .cyc_basis(n)
                .iter()
                .flat_map(|x| (0..x.tree.n_vertices()).map(move |v| CycTree::new(mark(&x.tree, v, n_base), x.start)))
                .collect();
            cb.sort();
            cyc_basis.push(cb);
        }
        let index = basis.iter().flat_map(|v| v.iter().enumerate().map(|(i, t)| (t.clone(), i))).collect();
        let cyc_index = cyc_basis.iter().flat_map(|v| v.iter().enumerate().map(|(i, t)| (t.clone(), i))).collect();
        Ok(KaehlerModule { n_base, ext, base, basis, cyc_basis, index, cyc_index })
    }

    /// Generators of `P` followed by their marked copies.
    pub fn generators(&self) -> &[Generator] {
        self.ext.generators()
    }

    pub fn marked(&self, g: usize) -> usize {
        g + self.n_base
    }

    /// Preorder index of the marked vertex.
    pub fn marked_vertex(&self, t: &DTree) -> Option<usize> {
        t.decoration().iter().position(|&g| g >= self.n_base)
    }

    pub fn dim(&self, n: usize) -> usize {
        self.basis.get(n).map_or(0, Vec::len)
    }

    pub fn cyc_dim(&self, n: usize) -> usize {
        self.cyc_basis.get(n).map_or(0, Vec::len)
    }

    pub fn basis(&self, n: usize) -> &[DTree] {
        self.basis.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn cyc_basis(&self, n: usize) -> &[CycTree] {
        self.cyc_basis.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn d(&self, x: &TreeComb) -> Result<TreeComb> {
        self.ext.d_comb(x)
    }

    pub fn d_cyc(&self, x: &CycComb) -> Result<CycComb> {
        self.ext.d_cyc_comb(x)
    }

    pub fn render(&self, x: &TreeComb) -> String {
        self.ext.render(x)
    }

    /// `Ω_P(n)` as a complex graded by tree degree.
    pub fn space(&self, n: usize) -> Result<DGModule> {
        let gens = self.generators();
        let trees = self.basis(n);
        self.graded(trees.len(), |i| trees[i].degree(gens), |i| {
            let image = self.d(&TreeComb::single(trees[i].clone(), Rational::one()))?;
            image.terms().map(|(t, c)| Ok((self.locate(t)?, c.clone()))).collect()
        })
    }

    /// The cyclic part at level `n`.
    pub fn cyc_space(&self, n: usize) -> Result<DGModule> {
        let gens = self.generators();
        let trees = self.cyc_basis(n);
        self.graded(trees.len(), |i| trees[i].tree.degree(gens), |i| {
            let image = self.d_cyc(&CycComb::single(trees[i].clone(), Rational::one()))?;
            image.terms().map(|(t, c)| Ok((self.locate_cyc(t)?, c.clone()))).collect()
        })
    }

    fn locate(&self, t: &DTree) -> Result<usize> {
        self.index.get(t).copied().ok_or_else(|| Error::Index(format!("{} outside the window", t.display(self.generators()))))
    }

    fn locate_cyc(&self, t: &CycTree) -> Result<usize> {
        self.cyc_index.get(t).copied().ok_or_else(|| Error::Index(format!("{t} outside the window")))
    }

    fn graded(
        &self,
        len: usize,
        degree: impl Fn(usize) -> i64,
        d: impl Fn(usize) -> Result<Vec<(usize, Rational)>>,
    ) -> Result<DGModule> {
        let degrees: Vec<i64> = (0..len).map(&degree).collect();
        let mut pos_in_degree = vec![0; len];
        let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
        for (i, &k) in degrees.iter().enumerate() {
            let c = counts.entry(k).or_insert(0);
            pos_in_degree[i] = *c;
            *c += 1;
        }
        let mut b = ComplexBuilder::new();
        let cells: BTreeMap<i64, _> = counts.iter().map(|(&k, &n)| (k, b.cell(k, n))).collect();
        for i in 0..len {
            for (j, c) in d(i)? {
                b.add(cells[&degrees[i]], pos_in_degree[i], cells[&degrees[j]], pos_in_degree[j], c);
            }
        }
        b.build()
    }

    /// Dimension of the degree-zero maps of `P`-modules `Ω_P → M` inside the window, where `M`
    /// is the endomorphism module of `beta`, found by solving the compatibility equations with
    /// the action of `P` (grafting on either side, cyclic insertion and rotation).
    ///
    /// By the universal property this equals the dimension of degree-zero derivations.
    pub fn hom_dimension(&self, beta: &OperadMap) -> Result<usize> {
        let target = beta.target();
        let d = target.algebra().dim();
        let gens = self.generators();
        let w_max = self.ext.window().max_weight;
        let traced = target.has_cyclic_part();
        // unknown blocks: φ(ω) for ω of the degree of M, 0 for noncyclic and 1 for functionals
        let mut offset = 0;
        let mut block: HashMap<DTree, usize> = HashMap::new();
        let mut cyc_block: HashMap<CycTree, usize> = HashMap::new();
        for n in 0..self.basis.len() {
            for t in self.basis(n).iter().filter(|t| t.degree(gens) == 0) {
                block.insert(t.clone(), offset);
                offset += d.pow(n as u32 + 1);
            }
            if traced {
                for x in self.cyc_basis(n).iter().filter(|x| x.tree.degree(gens) == 1) {
                    cyc_block.insert(x.clone(), offset);
                    offset += d.pow(n as u32 + 1);
                }
            }
        }
        let unknowns = offset;
        let mut eqs = Equations::default();
        let unit_vec = |dim: usize, b: usize| {
            let mut v = vec![Rational::zero(); dim];
            v[b] = Rational::one();
            v
        };
        let in_window = |t: &DTree| t.weight(gens) <= w_max;
        let p_trees: Vec<(usize, &DTree, HochCochain)> = (0..self.basis.len())
            .flat_map(|m| self.base.basis(m).iter().map(move |x| (m, x)))
            .filter(|(_, x)| **x != DTree::Leaf)
            .map(|(m, x)| Ok((m, x, beta.eval_tree(x, 0)?)))
            .collect::<Result<_>>()?;
        for n in 0..self.basis.len() {
            for om in self.basis(n) {
                let om_block = block.get(om).copied();
                for (m, x, bx) in &p_trees {
                    if m + n < 1 || m + n - 1 >= self.basis.len() {
                        continue;
                    }
                    // x ∘_i ω
                    for i in 1..=*m {
                        let (t, s) = compose_trees(x, i, om, gens)?;
                        if in_window(&t) {
                            eqs.relate(block.get(&t).copied(), s, om_block, n, d, &unit_vec, |e| {
                                Ok(bx.compose_at(i, &HochCochain::new(d, n, e)?).values().to_vec())
                            })?;
                        }
                    }
                    // ω ∘_i x
                    for i in 1..=n {
                        let (t, s) = compose_trees(om, i, x, gens)?;
                        if in_window(&t) {
                            eqs.relate(block.get(&t).copied(), s, om_block, n, d, &unit_vec, |e| {
                                Ok(HochCochain::new(d, n, e)?.compose_at(i, bx).values().to_vec())
                            })?;
                        }
                    }
                }
                if !traced {
                    continue;
                }
                // X ∘_j ω for cyclic X of P
                for lvl in 0..self.basis.len() {
                    if lvl + n < 1 || lvl + n - 1 >= self.basis.len() {
                        continue;
                    }
                    for xc in self.base.cyc_basis(lvl) {
                        let bx = beta.eval_cyc_tree(xc, 0)?;
                        for j in 0..=lvl {
                            let (t, s) = cyc_compose_trees(xc, j, om, gens)?;
                            if in_window(&t.tree) {
                                eqs.relate(cyc_block.get(&t).copied(), s, om_block, n, d, &unit_vec, |e| {
                                    Ok(target.cyc_compose(&bx, j, &HochCochain::new(d, n, e)?)?.values().to_vec())
                                })?;
                            }
                        }
                    }
                }
            }
            if !traced {
                continue;
            }
            for oc in self.cyc_basis(n) {
                let oc_block = cyc_block.get(oc).copied();
                // rotation
                eqs.relate(cyc_block.get(&oc.lambda()).copied(), 1, oc_block, n, d, &unit_vec, |e| {
                    Ok(CyclicCochain::new(d, n, e)?.lambda().values().to_vec())
                })?;
                // ω ∘_j x
                for (m, x, bx) in &p_trees {
                    if n + m < 1 || n + m - 1 >= self.basis.len() {
                        continue;
                    }
                    for j in 0..=n {
                        let (t, s) = cyc_compose_trees(oc, j, x, gens)?;
                        if in_window(&t.tree) {
                            eqs.relate(cyc_block.get(&t).copied(), s, oc_block, n, d, &unit_vec, |e| {
                                Ok(target.cyc_compose(&CyclicCochain::new(d, n, e)?, j, bx)?.values().to_vec())
                            })?;
                        }
                    }
                }
            }
        }
        Ok(unknowns - eqs.into_matrix(unknowns).rank())
    }
}

/// Rows of a homogeneous linear system, accumulated as triplets.
#[derive(Default)]
struct Equations {
    rows: usize,
    entries: Vec<(usize, usize, Rational)>,
}

impl Equations {
    /// Adds `s · φ(t) = L(φ(ω))` componentwise, where `φ(t)` and `φ(ω)` are unknown blocks or
    /// zero, and `L` is linear on the arity-`n` block of `ω`.
    #[allow(clippy::too_many_arguments)]
    fn relate(
        &mut self,
        lhs: Option<usize>,
        s: i64,
        rhs: Option<usize>,
        n: usize,
        d: usize,
        unit_vec: &dyn Fn(usize, usize) -> Vec<Rational>,
        l: impl Fn(Vec<Rational>) -> Result<Vec<Rational>>,
    ) -> Result<()> {
        if lhs.is_none() && rhs.is_none() {
            return Ok(());
        }
        let src = d.pow(n as u32 + 1);
        let columns: Vec<Vec<Rational>> = match rhs {
            Some(_) => (0..src).map(|b| l(unit_vec(src, b))).collect::<Result<_>>()?,
            None => Vec::new(),
        };
        let out_dim = match (&columns.first(), lhs) {
            (Some(col), _) => col.len(),
            (None, Some(_)) => l(vec![Rational::zero(); src])?.len(),
            (None, None) => unreachable!(),
        };
        let r0 = self.rows;
        if let Some(off) = lhs {
            for r in 0..out_dim {
                self.entries.push((r0 + r, off + r, Rational::from_integer(s.into())));
            }
        }
        if let Some(off) = rhs {
            for (b, col) in columns.iter().enumerate() {
                for (r, v) in col.iter().enumerate() {
                    if !v.is_zero() {
                        self.entries.push((r0 + r, off + b, -v));
                    }
                }
            }
        }
        self.rows += out_dim;
        Ok(())
    }

    fn into_matrix(self, cols: usize) -> QMatrix {
        let mut m = QMatrix::zeros(self.rows, cols);
        for (r, c, v) in self.entries {
            m.add_at(r, c, &v);
        }
        m
    }
}
