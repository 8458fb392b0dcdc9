use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::endo::{eval_cyc_vertices, eval_vertices, OperadMap};
use super::kaehler::KaehlerModule;
use super::presentation::QuasiFreePresentation;
use crate::dg::{ComplexBuilder, DGModule};
use crate::error::{Error, Result};
use crate::hochschild::{CyclicCochain, HochCochain};
use crate::linalg::{QMatrix, Rational};
use crate::signs::parity_sign;

/// A module over the operad of a presentation, in the square-zero sense: `P ⊕ M` is again a
/// circular operad with `M` an ideal whose square vanishes.
#[derive(Clone, Debug)]
pub enum YModule {
    Zero,
    /// The endomorphism operad of an algebra, acted on through the weight-zero part of a map
    /// `β` from the presentation. Noncyclic values sit in degree 0, functionals in degree 1.
    Endomorphism(OperadMap),
    Kaehler(Box<KaehlerModule>),
}

impl YModule {
    pub fn dim(&self, n: usize) -> usize {
        match self {
            YModule::Zero => 0,
            YModule::Endomorphism(b) => b.target().dim(n),
            YModule::Kaehler(k) => k.dim(n),
        }
    }

    pub fn cyc_dim(&self, n: usize) -> usize {
        match self {
            YModule::Zero => 0,
            YModule::Endomorphism(b) => b.target().cyc_dim(n),
            YModule::Kaehler(k) => k.cyc_dim(n),
        }
    }

    pub fn as_kaehler(&self) -> Option<&KaehlerModule> {
        match self {
            YModule::Kaehler(k) => Some(k),
            _ => None,
        }
    }
}

/// The block of derivation coordinates belonging to one generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub generator: usize,
    /// Degree of a derivation supported on this slot.
    pub degree: i64,
    pub offset: usize,
    pub dim: usize,
}

/// Matrix of `D ξ = -(-1)^k ξ ∘ d` on derivations into an endomorphism module, one slot per
/// generator. Slots are noncyclic generators of arity `≤ A` and cyclic ones of arity `< A`,
/// `A` the presentation's arity bound; values on other generators are taken to be zero, which
/// is compatible with `D` as long as `β` sends `m_0`-like nullary generators to zero.
///
/// Entries need not respect the integer grading when `β` does not; only their parity is then
/// meaningful.
#[derive(Clone, Debug)]
pub struct DerivationMatrix {
    slots: Vec<Slot>,
    matrix: QMatrix,
}

impl DerivationMatrix {
    pub fn new(pres: &QuasiFreePresentation, beta: &OperadMap) -> Result<Self> {
        let top = pres.window().max_arity;
        let traced = beta.target().has_cyclic_part();
        let keep = |g: &super::Generator| if g.cyclic { traced && g.arity < top } else { g.arity <= top };
        let lin = linearize(pres, beta, &keep, &keep)?;
        Ok(DerivationMatrix { slots: lin.rows, matrix: lin.matrix })
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn slot(&self, generator: usize) -> Option<&Slot> {
        self.slots.iter().find(|s| s.generator == generator)
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.cols()
    }

    fn slot_at(&self, coord: usize) -> &Slot {
        let i = self.slots.partition_point(|s| s.offset + s.dim <= coord);
        &self.slots[i]
    }

    /// True when every entry raises the slot degree by exactly one.
    pub fn is_homogeneous(&self) -> bool {
        self.matrix.entries().all(|(r, c, _)| self.slot_at(r).degree == self.slot_at(c).degree + 1)
    }

    /// The derivation complex, graded by slot degree.
    pub fn to_complex(&self) -> Result<DGModule> {
        let mut b = ComplexBuilder::new();
        let cells: Vec<_> = self.slots.iter().map(|s| b.cell(s.degree, s.dim)).collect();
        for (r, c, v) in self.matrix.entries() {
            let (to, from) = (self.slot_at(r), self.slot_at(c));
            if to.degree != from.degree + 1 {
                return Err(Error::Degree(format!(
                    "derivation differential maps degree {} to degree {}",
                    from.degree, to.degree
                )));
            }
            let ti = self.slots.iter().position(|s| s == to).expect("slot of a row");
            let fi = self.slots.iter().position(|s| s == from).expect("slot of a column");
            b.add(cells[fi], c - from.offset, cells[ti], r - to.offset, v.clone());
        }
        b.build()
    }
}

/// `ξ ↦ -(-1)^k ξ ∘ d` between possibly different sets of row and column generators.
#[derive(Clone, Debug)]
pub(crate) struct Linearization {
    pub rows: Vec<Slot>,
    pub cols: Vec<Slot>,
    pub matrix: QMatrix,
}

fn slots_for(pres: &QuasiFreePresentation, d: usize, keep: &dyn Fn(&super::Generator) -> bool) -> Vec<Slot> {
    let mut slots = Vec::new();
    let mut offset = 0;
    for (g, gen) in pres.generators().iter().enumerate() {
        if keep(gen) {
            let degree = if gen.cyclic { 1 - gen.degree } else { -gen.degree };
            let dim = d.pow(gen.arity as u32 + 1);
            slots.push(Slot { generator: g, degree, offset, dim });
            offset += dim;
        }
    }
    slots
}

/// Cyclic generators are kept only if `keep` says so; callers must not keep them for an
/// untraced target.
pub(crate) fn linearize(
    pres: &QuasiFreePresentation,
    beta: &OperadMap,
    row_keep: &dyn Fn(&super::Generator) -> bool,
    col_keep: &dyn Fn(&super::Generator) -> bool,
) -> Result<Linearization> {
    let gens = pres.generators();
    let d = beta.target().algebra().dim();
    let rows = slots_for(pres, d, row_keep);
    let cols = slots_for(pres, d, col_keep);
    let col_of: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, s)| (s.generator, i)).collect();
    let n_rows = rows.last().map_or(0, |s| s.offset + s.dim);
    let n_cols = cols.last().map_or(0, |s| s.offset + s.dim);
    let mut matrix = QMatrix::zeros(n_rows, n_cols);
    let basis_values = |dim: usize, b: usize| {
        let mut v = vec![Rational::zero(); dim];
        v[b] = Rational::one();
        v
    };
    for slot in &rows {
        let g = slot.generator;
        let cyclic = gens[g].cyclic;
        let terms: Vec<(super::DTree, usize, Rational)> = if cyclic {
            pres.d_generator_cyc(g).terms().map(|(x, c)| (x.tree.clone(), x.start, c.clone())).collect()
        } else {
            pres.d_generator(g).terms().map(|(t, c)| (t.clone(), 0, c.clone())).collect()
        };
        for (t, start, c) in terms {
            let deco = t.decoration();
            let sd: Vec<i64> = deco.iter().map(|&u| gens[u].sign_degree()).collect();
            let images: Vec<Option<&HochCochain>> = deco.iter().map(|&u| beta.noncyc(u, 0)).collect();
            let root_image = if cyclic { beta.cyc(deco[0], 0) } else { None };
            for (w, &h) in deco.iter().enumerate() {
                let Some(&sh) = col_of.get(&h) else { continue };
                let others_present = deco.iter().enumerate().all(|(u, _)| {
                    u == w || if cyclic && u == 0 { root_image.is_some() } else { images[u].is_some() }
                });
                if !others_present {
                    continue;
                }
                let src = &cols[sh];
                let k = src.degree;
                let before: i64 = sd[..w].iter().sum();
                let sign = -parity_sign(k) * parity_sign(k * before);
                let coef = &c * Rational::from_integer(sign.into());
                let arity = gens[h].arity;
                for b in 0..src.dim {
                    let vals = basis_values(src.dim, b);
                    let out: Vec<Rational> = if cyclic {
                        let xt = super::CycTree { tree: t.clone(), start };
                        let unit = HochCochain::identity(d);
                        let mut imgs: Vec<&HochCochain> = images.iter().map(|i| i.unwrap_or(&unit)).collect();
                        if w == 0 {
                            let root = CyclicCochain::new(d, arity, vals)?;
                            eval_cyc_vertices(&xt, &root, &imgs)?.values().to_vec()
                        } else {
                            let e = HochCochain::new(d, arity, vals)?;
                            imgs[w] = &e;
                            let root = root_image.expect("checked above");
                            eval_cyc_vertices(&xt, root, &imgs)?.values().to_vec()
                        }
                    } else {
                        let e = HochCochain::new(d, arity, vals)?;
                        let imgs: Vec<&HochCochain> =
                            images.iter().enumerate().map(|(u, i)| if u == w { &e } else { i.unwrap() }).collect();
                        eval_vertices(d, &t, &imgs).values().to_vec()
                    };
                    for (r, v) in out.iter().enumerate() {
                        if !v.is_zero() {
                            matrix.add_at(slot.offset + r, src.offset + b, &(&coef * v));
                        }
                    }
                }
            }
        }
    }
    Ok(Linearization { rows, cols, matrix })
}

/// Derivations from the operad of `pres` into `m`, with `D ξ = -(-1)^k ξ ∘ d`.
///
/// Derivations into the Kaehler module itself are not modelled.
pub fn derivation_complex(pres: &QuasiFreePresentation, m: &YModule) -> Result<DGModule> {
    match m {
        YModule::Zero => Ok(DGModule::zero()),
        YModule::Endomorphism(beta) => DerivationMatrix::new(pres, beta)?.to_complex(),
        YModule::Kaehler(_) => Err(Error::Algebra("derivations into the Kaehler module are not modelled".into())),
    }
}
