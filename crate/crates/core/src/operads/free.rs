use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::signs::parity_sign;

/// Generator of a free operad. A cyclic generator of arity `n` has `n + 1` slots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub arity: usize,
    pub cyclic: bool,
    pub degree: i64,
    pub weight: usize,
}

impl Generator {
    pub fn new(name: impl Into<String>, arity: usize, cyclic: bool, degree: i64, weight: usize) -> Self {
        Generator { name: name.into(), arity, cyclic, degree, weight }
    }

    /// Number of children a vertex decorated by this generator has.
    pub fn slots(&self) -> usize {
        self.arity + usize::from(self.cyclic)
    }

    /// Degree after operadic suspension; this is the degree entering Koszul signs.
    pub fn sign_degree(&self) -> i64 {
        self.degree + self.arity as i64 - 1 + i64::from(self.cyclic)
    }

    fn odd(&self) -> bool {
        self.sign_degree().rem_euclid(2) == 1
    }
}

/// Generator-decorated planar tree. `Leaf` is the unit tree; vertices carry generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DTree {
    Leaf,
    Node(usize, Vec<DTree>),
}

impl DTree {
    pub fn corolla(g: usize, gens: &[Generator]) -> DTree {
        DTree::Node(g, vec![DTree::Leaf; gens[g].slots()])
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            DTree::Leaf => 1,
            DTree::Node(_, cs) => cs.iter().map(DTree::n_leaves).sum(),
        }
    }

    pub fn n_vertices(&self) -> usize {
        match self {
            DTree::Leaf => 0,
            DTree::Node(_, cs) => 1 + cs.iter().map(DTree::n_vertices).sum::<usize>(),
        }
    }

    /// Generator indices in preorder.
    pub fn decoration(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.walk(&mut |g, _| out.push(g));
        out
    }

    /// Preorder vertices with the number of leaves strictly before each vertex's subtree.
    /// Building the tree by inserting vertices in this order, vertex `k` lands on leaf
    /// `leaves_before` of the partial tree.
    pub fn construction(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        self.walk(&mut |g, before| out.push((g, before)));
        out
    }

    fn walk(&self, f: &mut dyn FnMut(usize, usize)) {
        fn go(t: &DTree, before: &mut usize, f: &mut dyn FnMut(usize, usize)) {
            match t {
                DTree::Leaf => *before += 1,
                DTree::Node(g, cs) => {
                    f(*g, *before);
                    for c in cs {
                        go(c, before, f);
                    }
                }
            }
        }
        go(self, &mut 0, f)
    }

    pub fn degree(&self, gens: &[Generator]) -> i64 {
        self.decoration().iter().map(|&g| gens[g].degree).sum()
    }

    pub fn weight(&self, gens: &[Generator]) -> usize {
        self.decoration().iter().map(|&g| gens[g].weight).sum()
    }

    pub fn sign_degree(&self, gens: &[Generator]) -> i64 {
        self.decoration().iter().map(|&g| gens[g].sign_degree()).sum()
    }

    /// Root generator, if any.
    pub fn root(&self) -> Option<usize> {
        match self {
            DTree::Leaf => None,
            DTree::Node(g, _) => Some(*g),
        }
    }

    pub fn is_cyclic(&self, gens: &[Generator]) -> bool {
        self.root().is_some_and(|g| gens[g].cyclic)
    }

    /// Checks slot counts, and that cyclic generators occur only at the root.
    pub fn validate(&self, gens: &[Generator]) -> Result<()> {
        fn go(t: &DTree, gens: &[Generator], root: bool, v: &mut usize) -> Result<()> {
            if let DTree::Node(g, cs) = t {
                let gen = gens.get(*g).ok_or_else(|| Error::Index(format!("generator {g}")))?;
                if gen.cyclic && !root {
                    return Err(Error::Tree(format!("cyclic generator {} below the root", gen.name)));
                }
                if cs.len() != gen.slots() {
                    return Err(Error::Arity { vertex: *v, expected: gen.slots(), got: cs.len() });
                }
                *v += 1;
                for c in cs {
                    go(c, gens, false, v)?;
                }
            }
            Ok(())
        }
        go(self, gens, true, &mut 0)
    }

    /// Shape in the planar tree grammar; a cyclic root is written `<slots>`.
    pub fn shape(&self, gens: &[Generator]) -> String {
        fn go(t: &DTree, out: &mut String, gens: &[Generator], root: bool) {
            match t {
                DTree::Leaf => out.push('*'),
                DTree::Node(g, cs) => {
                    let (open, close) = if root && gens[*g].cyclic { ('<', '>') } else { ('(', ')') };
                    out.push(open);
                    for c in cs {
                        go(c, out, gens, false);
                    }
                    out.push(close);
                }
            }
        }
        let mut s = String::new();
        go(self, &mut s, gens, true);
        s
    }

    /// Inverse of [`shape`](Self::shape) plus [`decoration`](Self::decoration).
    pub fn from_shape(shape: &str, decoration: &[usize], gens: &[Generator]) -> Result<DTree> {
        let b = shape.as_bytes();
        let mut pos = 0;
        let mut deco = decoration.iter();
        let t = parse_dtree(b, &mut pos, &mut deco, true)?;
        if pos != b.len() || deco.next().is_some() {
            return Err(Error::Parse(format!("trailing input in tree {shape:?} or unused decoration")));
        }
        t.validate(gens)?;
        if t.is_cyclic(gens) != shape.starts_with('<') {
            return Err(Error::Parse(format!("cyclic brackets and generator disagree in {shape:?}")));
        }
        Ok(t)
    }

    /// `m2(m2(*,*),*)`-style rendering with generator names.
    pub fn display(&self, gens: &[Generator]) -> String {
        match self {
            DTree::Leaf => "*".into(),
            DTree::Node(g, cs) => {
                let inner: Vec<String> = cs.iter().map(|c| c.display(gens)).collect();
                format!("{}({})", gens[*g].name, inner.join(","))
            }
        }
    }
}

fn parse_dtree(b: &[u8], pos: &mut usize, deco: &mut std::slice::Iter<usize>, root: bool) -> Result<DTree> {
    let err = |p: usize| Error::Parse(format!("unexpected input at byte {p} of decorated tree"));
    match b.get(*pos) {
        Some(b'*') => {
            *pos += 1;
            Ok(DTree::Leaf)
        }
        Some(&open @ (b'(' | b'<')) => {
            if open == b'<' && !root {
                return Err(err(*pos));
            }
            let close = if open == b'(' { b')' } else { b'>' };
            *pos += 1;
            let g = *deco.next().ok_or_else(|| Error::Parse("decoration shorter than vertex count".into()))?;
            let mut cs = Vec::new();
            while b.get(*pos) != Some(&close) {
                if *pos >= b.len() {
                    return Err(err(*pos));
                }
                cs.push(parse_dtree(b, pos, deco, false)?);
            }
            *pos += 1;
            Ok(DTree::Node(g, cs))
        }
        _ => Err(err(*pos)),
    }
}

// ---- Koszul bookkeeping ----
//
// An element of the free operad is identified with the sequence of its vertices in the
// order they were introduced. A basis tree stands for its preorder sequence; composing or
// substituting produces a tree whose vertices carry the order of introduction as keys,
// and normalizing to preorder costs the Koszul sign of that permutation.

#[derive(Clone, Debug)]
enum LTree {
    Leaf,
    Node(usize, usize, Vec<LTree>),
}

fn label(t: &DTree, key: &mut dyn FnMut() -> usize) -> LTree {
    match t {
        DTree::Leaf => LTree::Leaf,
        DTree::Node(g, cs) => {
            let k = key();
            LTree::Node(*g, k, cs.iter().map(|c| label(c, key)).collect())
        }
    }
}

fn label_from(t: &DTree, start: usize) -> LTree {
    let mut next = start;
    label(t, &mut || {
        next += 1;
        next - 1
    })
}

fn graft(t: &LTree, leaf: usize, sub: &LTree, seen: &mut usize) -> LTree {
    match t {
        LTree::Leaf => {
            *seen += 1;
            if *seen - 1 == leaf {
                sub.clone()
            } else {
                LTree::Leaf
            }
        }
        LTree::Node(g, k, cs) => LTree::Node(*g, *k, cs.iter().map(|c| graft(c, leaf, sub, seen)).collect()),
    }
}

fn fill_leaves(s: &LTree, children: &mut std::vec::IntoIter<LTree>) -> LTree {
    match s {
        LTree::Leaf => children.next().expect("leaf count checked"),
        LTree::Node(g, k, cs) => LTree::Node(*g, *k, cs.iter().map(|c| fill_leaves(c, children)).collect()),
    }
}

/// Strips keys, returning the preorder tree and the Koszul sign of reordering keys to preorder.
fn normalize(t: &LTree, gens: &[Generator]) -> (DTree, i64) {
    fn go(t: &LTree, seq: &mut Vec<(bool, usize)>, gens: &[Generator]) -> DTree {
        match t {
            LTree::Leaf => DTree::Leaf,
            LTree::Node(g, k, cs) => {
                seq.push((gens[*g].odd(), *k));
                DTree::Node(*g, cs.iter().map(|c| go(c, seq, gens)).collect())
            }
        }
    }
    let mut seq = Vec::new();
    let tree = go(t, &mut seq, gens);
    let mut odd_inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i].1 > seq[j].1 && seq[i].0 && seq[j].0 {
                odd_inversions += 1;
            }
        }
    }
    (tree, parity_sign(odd_inversions as i64))
}

/// `x ∘_i y` on basis trees, `i` one-based over the leaves of `x` (cyclic roots included).
pub fn compose_trees(x: &DTree, i: usize, y: &DTree, gens: &[Generator]) -> Result<(DTree, i64)> {
    let m = x.n_leaves();
    if i == 0 || i > m {
        return Err(Error::Index(format!("composition position {i} outside 1..={m}")));
    }
    if y.is_cyclic(gens) {
        return Err(Error::Tree("cannot insert a cyclic element".into()));
    }
    let lx = label_from(x, 0);
    let ly = label_from(y, x.n_vertices());
    let grafted = graft(&lx, i - 1, &ly, &mut 0);
    Ok(normalize(&grafted, gens))
}

/// Replaces preorder vertex `v` of `x` by the tree `s` (whose leaves receive the children of
/// `v` in order). Returns the Koszul reordering sign only; the Leibniz sign is separate.
pub fn substitute(x: &DTree, v: usize, s: &DTree, gens: &[Generator]) -> Result<(DTree, i64)> {
    let sv = s.n_vertices();
    let mut next = 0usize;
    let mut found = None;
    let lx = label(x, &mut || {
        let j = next;
        next += 1;
        if j < v {
            j
        } else if j == v {
            found = Some(j);
            usize::MAX
        } else {
            j + sv
        }
    });
    if found.is_none() {
        return Err(Error::Index(format!("vertex {v} of a tree with {} vertices", x.n_vertices())));
    }
    let ls = label_from(s, v);
    fn go(t: &LTree, ls: &LTree, leaves: usize) -> Result<LTree> {
        match t {
            LTree::Leaf => Ok(LTree::Leaf),
            LTree::Node(g, k, cs) => {
                let cs: Vec<LTree> = cs.iter().map(|c| go(c, ls, leaves)).collect::<Result<_>>()?;
                if *k == usize::MAX {
                    if cs.len() != leaves {
                        return Err(Error::Arity { vertex: 0, expected: cs.len(), got: leaves });
                    }
                    Ok(fill_leaves(ls, &mut cs.into_iter()))
                } else {
                    Ok(LTree::Node(*g, *k, cs))
                }
            }
        }
    }
    let out = go(&lx, &ls, s.n_leaves())?;
    Ok(normalize(&out, gens))
}

// ---- linear combinations ----

/// Finite ℚ-linear combination of basis keys; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combination<K: Ord>(BTreeMap<K, Rational>);

impl<K: Ord + Clone> Default for Combination<K> {
    fn default() -> Self {
        Combination(BTreeMap::new())
    }
}

impl<K: Ord + Clone> Combination<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(k: K, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(k, c);
        out
    }

    pub fn add_term(&mut self, k: K, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(k.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&k);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.0 {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Combination(self.0.iter().map(|(k, c)| (k.clone(), c * s)).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, k: &K) -> Rational {
        self.0.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.0.iter()
    }

    pub fn retain(&mut self, f: impl Fn(&K) -> bool) {
        self.0.retain(|k, _| f(k));
    }
}

impl<K: Ord + Clone> FromIterator<(K, Rational)> for Combination<K> {
    fn from_iter<I: IntoIterator<Item = (K, Rational)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

/// Basis element of the cyclic part: `λ^start` applied to the tree read from leaf 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycTree {
    pub tree: DTree,
    pub start: usize,
}

impl CycTree {
    pub fn new(tree: DTree, start: usize) -> Self {
        let l = tree.n_leaves();
        CycTree { tree, start: if l == 0 { 0 } else { start % l } }
    }

    pub fn lambda(&self) -> CycTree {
        CycTree::new(self.tree.clone(), self.start + 1)
    }

    /// Cyclic level: number of leaves minus one.
    pub fn level(&self) -> isize {
        self.tree.n_leaves() as isize - 1
    }
}

impl fmt::Display for CycTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@{}", self.tree, self.start)
    }
}

pub type TreeComb = Combination<DTree>;
pub type CycComb = Combination<CycTree>;

/// `x ∘_j y` with `j` zero-based in the cyclic reading of `x` (position 0 is the start leaf).
pub fn cyc_compose_trees(x: &CycTree, j: usize, y: &DTree, gens: &[Generator]) -> Result<(CycTree, i64)> {
    let n1 = x.tree.n_leaves();
    if j >= n1 {
        return Err(Error::Index(format!("cyclic position {j} outside 0..{n1}")));
    }
    let leaf = (x.start + j) % n1;
    let wrapped = x.start + j >= n1;
    let (tree, sign) = compose_trees(&x.tree, leaf + 1, y, gens)?;
    let q = y.n_leaves();
    // a wrapped insertion happens only when start > 0, so start + q - 1 does not underflow
    let start = if wrapped { x.start + q - 1 } else { x.start };
    Ok((CycTree::new(tree, start), sign))
}

/// `Σ_i x ∘_i y` over all leaves of `x`.
pub fn brace(x: &TreeComb, y: &TreeComb, gens: &[Generator]) -> Result<TreeComb> {
    let mut out = TreeComb::zero();
    for (a, ca) in x.terms() {
        for (b, cb) in y.terms() {
            for i in 1..=a.n_leaves() {
                let (t, s) = compose_trees(a, i, b, gens)?;
                out.add_term(t, ca * cb * Rational::from_integer(s.into()));
            }
        }
    }
    Ok(out)
}

/// Cyclic brace: every placement, including those wrapping past the start leaf.
pub fn cyc_brace(x: &CycComb, y: &TreeComb, gens: &[Generator]) -> Result<CycComb> {
    let mut out = CycComb::zero();
    for (a, ca) in x.terms() {
        for (b, cb) in y.terms() {
            let c = ca * cb;
            let n1 = a.tree.n_leaves();
            // a nullary insertion skips slot 0, see `CyclicCochain::brace`
            for j in usize::from(b.n_leaves() == 0)..n1 {
                let (t, s) = cyc_compose_trees(a, j, b, gens)?;
                out.add_term(t, &c * Rational::from_integer(s.into()));
            }
            if n1 > 0 {
                let (t0, s0) = cyc_compose_trees(a, 0, b, gens)?;
                let mut t = t0;
                for _ in 1..b.n_leaves() {
                    t = t.lambda();
                    out.add_term(t.clone(), &c * Rational::from_integer(s0.into()));
                }
            }
        }
    }
    Ok(out)
}

pub fn lambda(x: &CycComb) -> CycComb {
    x.terms().map(|(t, c)| (t.lambda(), c.clone())).collect()
}

/// Average over the cyclic orbit; the projection onto λ-invariants.
pub fn symmetrize(x: &CycComb) -> CycComb {
    let mut out = CycComb::zero();
    for (t, c) in x.terms() {
        let n = t.tree.n_leaves().max(1);
        let share = c / Rational::from_integer((n as i64).into());
        let mut r = t.clone();
        for _ in 0..n {
            out.add_term(r.clone(), share.clone());
            r = r.lambda();
        }
    }
    out
}

// ---- basis enumeration ----

struct Enumerator<'a> {
    gens: &'a [Generator],
    memo: HashMap<(usize, usize), Vec<DTree>>,
}

impl Enumerator<'_> {
    /// Noncyclic trees with exactly `n` leaves and weight exactly `w`.
    fn trees(&mut self, n: usize, w: usize) -> Vec<DTree> {
        if let Some(v) = self.memo.get(&(n, w)) {
            return v.clone();
        }
        // a tree cannot contain a proper subtree with the same leaves and weight (that needs
        // weight-zero nullary generators), so the recursion may see an empty entry here
        self.memo.insert((n, w), Vec::new());
        let mut out = Vec::new();
        if n == 1 && w == 0 {
            out.push(DTree::Leaf);
        }
        for g in 0..self.gens.len() {
            let gen = &self.gens[g];
            if gen.cyclic || gen.weight > w {
                continue;
            }
            for cs in self.forests(gen.arity, n, w - gen.weight) {
                out.push(DTree::Node(g, cs));
            }
        }
        out.sort();
        self.memo.insert((n, w), out.clone());
        out
    }

    fn forests(&mut self, k: usize, n: usize, w: usize) -> Vec<Vec<DTree>> {
        if k == 0 {
            return if n == 0 && w == 0 { vec![vec![]] } else { vec![] };
        }
        let mut out = Vec::new();
        for n1 in 0..=n {
            for w1 in 0..=w {
                let firsts = self.trees(n1, w1);
                if firsts.is_empty() {
                    continue;
                }
                let rests = self.forests(k - 1, n - n1, w - w1);
                for f in &firsts {
                    for r in &rests {
                        let mut v = Vec::with_capacity(k);
                        v.push(f.clone());
                        v.extend(r.iter().cloned());
                        out.push(v);
                    }
                }
            }
        }
        out
    }
}

/// Free circular operad on a generator list, truncated to arity `≤ max_arity` and weight
/// `≤ max_weight`. Compositions are exact inside the window; terms of larger weight are
/// dropped, which is the quotient by the ideal of weight `> max_weight`.
#[derive(Clone, Debug)]
pub struct FreeOperad {
    gens: Vec<Generator>,
    max_arity: usize,
    max_weight: usize,
    noncyc: Vec<Vec<DTree>>,
    cyc: Vec<Vec<CycTree>>,
    noncyc_index: HashMap<DTree, usize>,
    cyc_index: HashMap<CycTree, usize>,
}

impl FreeOperad {
    /// Weight-zero generators of arity `≤ 1` would make the arity spaces infinite and are rejected.
    pub fn new(gens: Vec<Generator>, max_arity: usize, max_weight: usize) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| !g.cyclic && g.weight == 0 && g.arity <= 1) {
            return Err(Error::Presentation(format!(
                "generator {} has weight 0 and arity {}; the arity spaces would be infinite",
                g.name, g.arity
            )));
        }
        let mut en = Enumerator { gens: &gens, memo: HashMap::new() };
        let mut noncyc = Vec::new();
        let mut cyc = Vec::new();
        for n in 0..=max_arity {
            let mut ts: Vec<DTree> = (0..=max_weight).flat_map(|w| en.trees(n, w)).collect();
            ts.sort();
            noncyc.push(ts);
            let mut cs = Vec::new();
            for (c, gen) in gens.iter().enumerate().filter(|(_, g)| g.cyclic) {
                for w in gen.weight..=max_weight {
                    for kids in en.forests(gen.slots(), n + 1, w - gen.weight) {
                        for s in 0..=n {
                            cs.push(CycTree::new(DTree::Node(c, kids.clone()), s));
                        }
                    }
                }
            }
            cs.sort();
            cyc.push(cs);
        }
        let noncyc_index = noncyc.iter().flat_map(|v| v.iter().enumerate().map(|(i, t)| (t.clone(), i))).collect();
        let cyc_index = cyc.iter().flat_map(|v| v.iter().enumerate().map(|(i, t)| (t.clone(), i))).collect();
        Ok(FreeOperad { gens, max_arity, max_weight, noncyc, cyc, noncyc_index, cyc_index })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn dim(&self, n: usize) -> usize {
        self.noncyc.get(n).map_or(0, Vec::len)
    }

    /// Dimension of the cyclic part at level `n` (trees with `n + 1` leaves, all starts).
    pub fn cyc_dim(&self, n: usize) -> usize {
        self.cyc.get(n).map_or(0, Vec::len)
    }

    pub fn basis(&self, n: usize) -> &[DTree] {
        self.noncyc.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn cyc_basis(&self, n: usize) -> &[CycTree] {
        self.cyc.get(n).map_or(&[], Vec::as_slice)
    }

    fn truncate(&self, mut x: TreeComb) -> TreeComb {
        x.retain(|t| t.weight(&self.gens) <= self.max_weight);
        x
    }

    fn truncate_cyc(&self, mut x: CycComb) -> CycComb {
        x.retain(|t| t.tree.weight(&self.gens) <= self.max_weight);
        x
    }

    pub fn unit(&self) -> TreeComb {
        TreeComb::single(DTree::Leaf, Rational::one())
    }

    pub fn compose(&self, x: &TreeComb, i: usize, y: &TreeComb) -> Result<TreeComb> {
        let mut out = TreeComb::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                let (t, s) = compose_trees(a, i, b, &self.gens)?;
                out.add_term(t, ca * cb * Rational::from_integer(s.into()));
            }
        }
        Ok(self.truncate(out))
    }

    pub fn cyc_compose(&self, x: &CycComb, j: usize, y: &TreeComb) -> Result<CycComb> {
        let mut out = CycComb::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                let (t, s) = cyc_compose_trees(a, j, b, &self.gens)?;
                out.add_term(t, ca * cb * Rational::from_integer(s.into()));
            }
        }
        Ok(self.truncate_cyc(out))
    }

    /// Coordinates of a combination of arity-`n` trees in [`basis`](Self::basis).
    pub fn coords(&self, x: &TreeComb, n: usize) -> Result<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.dim(n)];
        for (t, c) in x.terms() {
            let i = match self.noncyc_index.get(t) {
                Some(&i) if t.n_leaves() == n => i,
                _ => return Err(Error::Index(format!("tree {t:?} is not in the arity {n} window"))),
            };
            v[i] += c;
        }
        Ok(v)
    }

    pub fn cyc_coords(&self, x: &CycComb, n: usize) -> Result<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.cyc_dim(n)];
        for (t, c) in x.terms() {
            let i = match self.cyc_index.get(t) {
                Some(&i) if t.tree.n_leaves() == n + 1 => i,
                _ => return Err(Error::Index(format!("cyclic tree {t} is not in the level {n} window"))),
            };
            v[i] += c;
        }
        Ok(v)
    }

    pub fn from_coords(&self, n: usize, v: &[Rational]) -> TreeComb {
        self.basis(n).iter().zip(v).map(|(t, c)| (t.clone(), c.clone())).collect()
    }

    pub fn from_cyc_coords(&self, n: usize, v: &[Rational]) -> CycComb {
        self.cyc_basis(n).iter().zip(v).map(|(t, c)| (t.clone(), c.clone())).collect()
    }
}
