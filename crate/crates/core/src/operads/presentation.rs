use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::free::{
    brace, cyc_brace, cyc_compose_trees, substitute, CycComb, CycTree, DTree, Generator, TreeComb,
};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, Rational};
use crate::signs::parity_sign;

/// Arity and weight bounds inside which the identities of a presentation are verified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub max_arity: usize,
    pub max_weight: usize,
}

/// Free circular operad on `generators` with a derivation `d` given on generators.
///
/// Identities are verified for generators of arity `≤ window.max_arity`, discarding terms of
/// weight `> window.max_weight`. Differentials of generators outside the window may be
/// incomplete (the generator list is finite) and are only used inside the window.
#[derive(Clone, Debug)]
pub struct QuasiFreePresentation {
    gens: Vec<Generator>,
    d_noncyc: BTreeMap<usize, TreeComb>,
    d_cyc: BTreeMap<usize, CycComb>,
    window: Window,
}

/// Order used by the gradedness guard: weight first, then noncyclic before cyclic, then arity.
fn rank(g: &Generator) -> (usize, bool, usize) {
    (g.weight, g.cyclic, g.arity)
}

impl QuasiFreePresentation {
    /// Validates shapes, degrees, the gradedness guard, and `d² = 0` inside the window.
    pub fn new(
        gens: Vec<Generator>,
        d_noncyc: BTreeMap<usize, TreeComb>,
        d_cyc: BTreeMap<usize, CycComb>,
        window: Window,
    ) -> Result<Self> {
        let p = Self::unchecked(gens, d_noncyc, d_cyc, window);
        p.validate_terms()?;
        p.check_d_squared()?;
        Ok(p)
    }

    pub(crate) fn unchecked(
        gens: Vec<Generator>,
        d_noncyc: BTreeMap<usize, TreeComb>,
        d_cyc: BTreeMap<usize, CycComb>,
        window: Window,
    ) -> Self {
        QuasiFreePresentation { gens, d_noncyc, d_cyc, window }
    }

    fn validate_terms(&self) -> Result<()> {
        let err = |g: &Generator, what: String| Error::Presentation(format!("d({}): {what}", g.name));
        let trees = self
            .d_noncyc
            .iter()
            .flat_map(|(&g, c)| c.terms().map(move |(t, _)| (g, t, false)))
            .chain(self.d_cyc.iter().flat_map(|(&g, c)| c.terms().map(move |(t, _)| (g, &t.tree, true))));
        for (g, t, cyclic) in trees {
            let gen = self.gens.get(g).ok_or_else(|| Error::Index(format!("generator {g}")))?;
            if gen.cyclic != cyclic {
                return Err(err(gen, "cyclic flag of the terms differs from the generator".into()));
            }
            t.validate(&self.gens)?;
            if t.is_cyclic(&self.gens) != cyclic {
                return Err(err(gen, format!("term {} has the wrong kind of root", t.display(&self.gens))));
            }
            if t.n_leaves() != gen.slots() {
                return Err(err(gen, format!("term {} has {} leaves", t.display(&self.gens), t.n_leaves())));
            }
            if t.degree(&self.gens) != gen.degree + 1 {
                return Err(err(gen, format!("term {} has degree {}", t.display(&self.gens), t.degree(&self.gens))));
            }
            let w = t.weight(&self.gens);
            let smaller = t.decoration().iter().all(|&v| rank(&self.gens[v]) < rank(gen));
            if w < gen.weight || (w == gen.weight && !smaller) {
                return Err(err(
                    gen,
                    format!("term {} neither raises weight nor uses smaller generators", t.display(&self.gens)),
                ));
            }
        }
        Ok(())
    }

    fn check_d_squared(&self) -> Result<()> {
        for (g, gen) in self.gens.iter().enumerate() {
            if gen.arity > self.window.max_arity {
                continue;
            }
            let residual = if gen.cyclic {
                let dd = self.d_cyc_comb(&self.d_generator_cyc(g))?;
                (!dd.is_zero()).then(|| self.render_cyc(&dd))
            } else {
                let dd = self.d_comb(&self.d_generator(g))?;
                (!dd.is_zero()).then(|| self.render(&dd))
            };
            if let Some(r) = residual {
                return Err(Error::Presentation(format!("d² does not vanish on {}: {r}", gen.name)));
            }
        }
        Ok(())
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// `d` of a noncyclic generator (zero when unspecified).
    pub fn d_generator(&self, g: usize) -> TreeComb {
        self.d_noncyc.get(&g).cloned().unwrap_or_default()
    }

    pub fn d_generator_cyc(&self, g: usize) -> CycComb {
        self.d_cyc.get(&g).cloned().unwrap_or_default()
    }

    fn in_window(&self, t: &DTree) -> bool {
        t.weight(&self.gens) <= self.window.max_weight
    }

    /// Leibniz sign of `d` reaching preorder vertex `v`.
    fn leibniz(&self, deco: &[usize], v: usize) -> i64 {
        parity_sign(deco[..v].iter().map(|&u| self.gens[u].sign_degree()).sum())
    }

    /// `d` of a noncyclic basis tree, truncated to the weight window.
    pub fn d_tree(&self, t: &DTree) -> Result<TreeComb> {
        let deco = t.decoration();
        let mut out = TreeComb::zero();
        for (v, &g) in deco.iter().enumerate() {
            let lead = Rational::from_integer(self.leibniz(&deco, v).into());
            for (s, c) in self.d_generator(g).terms() {
                let (u, sign) = substitute(t, v, s, &self.gens)?;
                if self.in_window(&u) {
                    out.add_term(u, &lead * c * Rational::from_integer(sign.into()));
                }
            }
        }
        Ok(out)
    }

    /// `d` of a cyclic basis element: `d(T, s) = λ^s d(T, 0)`.
    pub fn d_cyc_tree(&self, x: &CycTree) -> Result<CycComb> {
        let DTree::Node(root, children) = &x.tree else {
            return Err(Error::Tree("cyclic element without a root".into()));
        };
        let deco = x.tree.decoration();
        let mut out = CycComb::zero();
        // the root: graft the subtrees into each term of d(root) in preorder
        for (s, c) in self.d_generator_cyc(*root).terms() {
            let mut acc = vec![(s.clone(), c.clone())];
            let mut pos = 0;
            for child in children {
                if *child != DTree::Leaf {
                    acc = acc
                        .into_iter()
                        .map(|(t, c)| {
                            let (u, sign) = cyc_compose_trees(&t, pos, child, &self.gens)?;
                            Ok((u, c * Rational::from_integer(sign.into())))
                        })
                        .collect::<Result<_>>()?;
                }
                pos += child.n_leaves();
            }
            for (t, c) in acc {
                if self.in_window(&t.tree) {
                    out.add_term(CycTree::new(t.tree, t.start + x.start), c);
                }
            }
        }
        for (v, &g) in deco.iter().enumerate().skip(1) {
            let lead = Rational::from_integer(self.leibniz(&deco, v).into());
            for (s, c) in self.d_generator(g).terms() {
                let (u, sign) = substitute(&x.tree, v, s, &self.gens)?;
                if self.in_window(&u) {
                    out.add_term(CycTree::new(u, x.start), &lead * c * Rational::from_integer(sign.into()));
                }
            }
        }
        Ok(out)
    }

    pub fn d_comb(&self, x: &TreeComb) -> Result<TreeComb> {
        let mut out = TreeComb::zero();
        for (t, c) in x.terms() {
            out = out.add(&self.d_tree(t)?.scale(c));
        }
        Ok(out)
    }

    pub fn d_cyc_comb(&self, x: &CycComb) -> Result<CycComb> {
        let mut out = CycComb::zero();
        for (t, c) in x.terms() {
            out = out.add(&self.d_cyc_tree(t)?.scale(c));
        }
        Ok(out)
    }

    /// The generators of arity `≤ max_arity` alone, with every term mentioning another
    /// generator dropped. The result is a graded free operad with a map that need not square
    /// to zero; it serves questions that ignore the differential.
    #[cfg(test)]
    pub(crate) fn restrict_arity(&self, max_arity: usize) -> QuasiFreePresentation {
        let keep: Vec<usize> = (0..self.gens.len()).filter(|&g| self.gens[g].arity <= max_arity).collect();
        let new_index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        fn relabel(t: &DTree, map: &BTreeMap<usize, usize>) -> Option<DTree> {
            match t {
                DTree::Leaf => Some(DTree::Leaf),
                DTree::Node(g, kids) => Some(DTree::Node(
                    *map.get(g)?,
                    kids.iter().map(|k| relabel(k, map)).collect::<Option<_>>()?,
                )),
            }
        }
        let mut d_noncyc = BTreeMap::new();
        let mut d_cyc = BTreeMap::new();
        for (&g, &i) in &new_index {
            if self.gens[g].cyclic {
                let c: CycComb = self
                    .d_generator_cyc(g)
                    .terms()
                    .filter_map(|(x, c)| Some((CycTree::new(relabel(&x.tree, &new_index)?, x.start), c.clone())))
                    .collect();
                d_cyc.insert(i, c);
            } else {
                let c: TreeComb = self
                    .d_generator(g)
                    .terms()
                    .filter_map(|(t, c)| Some((relabel(t, &new_index)?, c.clone())))
                    .collect();
                d_noncyc.insert(i, c);
            }
        }
        let gens = keep.iter().map(|&g| self.gens[g].clone()).collect();
        let window = Window { max_arity: self.window.max_arity.min(max_arity), ..self.window };
        QuasiFreePresentation::unchecked(gens, d_noncyc, d_cyc, window)
    }

    pub fn render(&self, x: &TreeComb) -> String {
        let parts: Vec<String> =
            x.terms().map(|(t, c)| format!("{} {}", format_rational(c), t.display(&self.gens))).collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn render_cyc(&self, x: &CycComb) -> String {
        let parts: Vec<String> = x
            .terms()
            .map(|(t, c)| format!("{} {}@{}", format_rational(c), t.tree.display(&self.gens), t.start))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    // ---- file format ----

    pub fn to_file(&self) -> PresentationFile {
        let term = |t: &DTree, start: usize, c: &Rational| TermFile {
            tree: t.shape(&self.gens),
            decoration: t.decoration().iter().map(|&g| self.gens[g].name.clone()).collect(),
            start,
            coefficient: format_rational(c),
        };
        let mut differential = Vec::new();
        for (&g, c) in &self.d_noncyc {
            differential.push(DifferentialFile {
                generator: self.gens[g].name.clone(),
                terms: c.terms().map(|(t, c)| term(t, 0, c)).collect(),
            });
        }
        for (&g, c) in &self.d_cyc {
            differential.push(DifferentialFile {
                generator: self.gens[g].name.clone(),
                terms: c.terms().map(|(t, c)| term(&t.tree, t.start, c)).collect(),
            });
        }
        PresentationFile { generators: self.gens.clone(), differential, window: self.window }
    }

    pub fn from_file(f: &PresentationFile) -> Result<Self> {
        let gens = f.generators.clone();
        let index = |name: &str| {
            gens.iter().position(|g| g.name == name).ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))
        };
        let mut d_noncyc = BTreeMap::new();
        let mut d_cyc = BTreeMap::new();
        for entry in &f.differential {
            let g = index(&entry.generator)?;
            let mut nc = TreeComb::zero();
            let mut cy = CycComb::zero();
            for t in &entry.terms {
                let deco = t.decoration.iter().map(|n| index(n)).collect::<Result<Vec<_>>>()?;
                let tree = DTree::from_shape(&t.tree, &deco, &gens)?;
                let c = parse_rational(&t.coefficient)?;
                if gens[g].cyclic {
                    cy.add_term(CycTree::new(tree, t.start), c);
                } else {
                    nc.add_term(tree, c);
                }
            }
            if gens[g].cyclic {
                d_cyc.insert(g, cy);
            } else {
                d_noncyc.insert(g, nc);
            }
        }
        QuasiFreePresentation::new(gens, d_noncyc, d_cyc, f.window)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: PresentationFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }
}

/// JSON form of a presentation. Trees use the planar grammar (a cyclic root is written with
/// angle brackets), decorations list generator names in preorder, coefficients are `p/q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresentationFile {
    pub generators: Vec<Generator>,
    pub differential: Vec<DifferentialFile>,
    pub window: Window,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DifferentialFile {
    pub generator: String,
    pub terms: Vec<TermFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermFile {
    pub tree: String,
    pub decoration: Vec<String>,
    #[serde(default)]
    pub start: usize,
    pub coefficient: String,
}

/// Generators of the curved A∞ operad with traces: `m_n` for `n ≤ top` and `μ_n` for `n ≤ top`.
pub fn mc_generators(top: usize) -> Vec<Generator> {
    let m = (0..=top).map(|n| Generator::new(format!("m{n}"), n, false, 2 - n as i64, usize::from(n < 2)));
    let mu = (0..=top).map(|n| Generator::new(format!("mu{n}"), n, true, 1 - n as i64, 0));
    m.chain(mu).collect()
}

/// The curved A∞ operad with traces:
/// `d m_n = -Σ_p m_p{m_{n+1-p}}` and `d μ_n = -Σ_p μ_p{m_{n+1-p}}`.
///
/// Generators run up to arity `max_arity + 2`, enough for `d²` of every generator of arity
/// `≤ max_arity` to be complete; `d²` is verified there at weights `≤ max_weight`.
pub fn mc_operad(max_arity: usize, max_weight: usize) -> Result<QuasiFreePresentation> {
    let top = max_arity + 2;
    let gens = mc_generators(top);
    let m = |n: usize| n;
    let mu = |n: usize| top + 1 + n;
    let corolla = |g: usize| TreeComb::single(DTree::corolla(g, &gens), Rational::one());
    let mut d_noncyc = BTreeMap::new();
    let mut d_cyc = BTreeMap::new();
    for n in 0..=top {
        let mut dm = TreeComb::zero();
        let mut dmu = CycComb::zero();
        for p in 0..=n + 1 {
            let q = n + 1 - p;
            if p > top || q > top {
                continue;
            }
            dm = dm.add(&brace(&corolla(m(p)), &corolla(m(q)), &gens)?);
            let root = CycComb::single(CycTree::new(DTree::corolla(mu(p), &gens), 0), Rational::one());
            dmu = dmu.add(&cyc_brace(&root, &corolla(m(q)), &gens)?);
        }
        d_noncyc.insert(m(n), dm.neg());
        d_cyc.insert(mu(n), dmu.neg());
    }
    QuasiFreePresentation::new(gens, d_noncyc, d_cyc, Window { max_arity, max_weight })
}

/// The weight-zero noncyclic part of [`mc_operad`]: `m_n` for `2 ≤ n ≤ max_arity + 1`,
/// the truncated A∞ resolution of the associative operad.
pub fn ainfinity_operad(max_arity: usize) -> Result<QuasiFreePresentation> {
    let top = max_arity + 1;
    let gens: Vec<Generator> = (2..=top).map(|n| Generator::new(format!("m{n}"), n, false, 2 - n as i64, 0)).collect();
    let corolla = |n: usize| TreeComb::single(DTree::corolla(n - 2, &gens), Rational::one());
    let mut d_noncyc = BTreeMap::new();
    for n in 2..=top {
        let mut dm = TreeComb::zero();
        for p in 2..n {
            dm = dm.add(&brace(&corolla(p), &corolla(n + 1 - p), &gens)?);
        }
        d_noncyc.insert(n - 2, dm.neg());
    }
    QuasiFreePresentation::new(gens, d_noncyc, BTreeMap::new(), Window { max_arity, max_weight: 0 })
}
