//! Planar trees, insertion, enumeration, and tree-indexed collections.
//!
//! Encoding grammar (stable):
//!
//! ```text
//! tree ::= "*" | node        -- "*" alone is the unit tree (no vertex, one input)
//! node ::= "(" slot* ")"
//! slot ::= "*" | node
//! ```
//!
//! Vertices are numbered in preorder and leaves in left-to-right planar order, both from
//! zero, so equal encodings are exactly planar-isomorphic trees. Operadic `∘_i` positions
//! are one-based.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::dg::{direct_sum, tensor_dg, DGModule};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Node {
    Leaf,
    Vertex(Vec<Node>),
}

impl Node {
    fn write(&self, out: &mut String) {
        match self {
            Node::Leaf => out.push('*'),
            Node::Vertex(cs) => {
                out.push('(');
                for c in cs {
                    c.write(out);
                }
                out.push(')');
            }
        }
    }

    fn leaves(&self) -> usize {
        match self {
            Node::Leaf => 1,
            Node::Vertex(cs) => cs.iter().map(Node::leaves).sum(),
        }
    }

    fn vertices(&self) -> usize {
        match self {
            Node::Leaf => 0,
            Node::Vertex(cs) => 1 + cs.iter().map(Node::vertices).sum::<usize>(),
        }
    }

    fn preorder<'a>(&'a self, out: &mut Vec<&'a [Node]>) {
        if let Node::Vertex(cs) = self {
            out.push(cs);
            for c in cs {
                c.preorder(out);
            }
        }
    }
}

/// What occupies a slot of a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// Input with the given planar leaf index.
    Leaf(usize),
    /// Child vertex with the given preorder index.
    Child(usize),
}

/// Rooted planar tree; the unit tree has no vertices and one input.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanarTree {
    root: Node,
}

impl fmt::Debug for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlanarTree({})", self.canonical_form())
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_form())
    }
}

impl PlanarTree {
    pub fn unit() -> Self {
        PlanarTree { root: Node::Leaf }
    }

    pub fn corolla(arity: usize) -> Self {
        PlanarTree { root: Node::Vertex(vec![Node::Leaf; arity]) }
    }

    /// Root vertex whose slots hold the given subtrees; unit subtrees become bare inputs.
    pub fn graft_root(children: Vec<PlanarTree>) -> Self {
        PlanarTree { root: Node::Vertex(children.into_iter().map(|c| c.root).collect()) }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let root = parse_slot(bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::Parse(format!("trailing input at byte {pos} in tree {s:?}")));
        }
        Ok(PlanarTree { root })
    }

    pub fn canonical_form(&self) -> String {
        let mut s = String::new();
        self.root.write(&mut s);
        s
    }

    pub fn is_unit(&self) -> bool {
        self.root == Node::Leaf
    }

    pub fn n_inputs(&self) -> usize {
        self.root.leaves()
    }

    pub fn n_vertices(&self) -> usize {
        self.root.vertices()
    }

    /// Root vertex index (always 0) or `None` for the unit tree.
    pub fn root(&self) -> Option<usize> {
        (!self.is_unit()).then_some(0)
    }

    fn vertex_nodes(&self) -> Vec<&[Node]> {
        let mut out = Vec::new();
        self.root.preorder(&mut out);
        out
    }

    /// Arities of all vertices in preorder.
    pub fn arities(&self) -> Vec<usize> {
        self.vertex_nodes().iter().map(|cs| cs.len()).collect()
    }

    pub fn arity(&self, v: usize) -> Result<usize> {
        self.arities()
            .get(v)
            .copied()
            .ok_or_else(|| Error::Index(format!("vertex {v} of a tree with {} vertices", self.n_vertices())))
    }

    /// Slot contents of every vertex, in preorder.
    pub fn slots(&self) -> Vec<Vec<Slot>> {
        fn walk(node: &Node, leaf: &mut usize, vertex: &mut usize, out: &mut Vec<Vec<Slot>>) {
            if let Node::Vertex(cs) = node {
                let me = out.len();
                out.push(Vec::new());
                *vertex += 1;
                for c in cs {
                    match c {
                        Node::Leaf => {
                            out[me].push(Slot::Leaf(*leaf));
                            *leaf += 1;
                        }
                        Node::Vertex(_) => {
                            out[me].push(Slot::Child(*vertex));
                            walk(c, leaf, vertex, out);
                        }
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut 0, &mut 0, &mut out);
        out
    }

    /// Parent of every vertex (root has `None`).
    pub fn parents(&self) -> Vec<Option<usize>> {
        let slots = self.slots();
        let mut parents = vec![None; slots.len()];
        for (v, ss) in slots.iter().enumerate() {
            for s in ss {
                if let Slot::Child(c) = s {
                    parents[*c] = Some(v);
                }
            }
        }
        parents
    }

    /// Substitutes `plugs[v]` for each listed vertex `v`; unlisted vertices stay corollas.
    pub fn insert(&self, plugs: &BTreeMap<usize, PlanarTree>) -> Result<PlanarTree> {
        let n = self.n_vertices();
        if let Some(&v) = plugs.keys().find(|&&v| v >= n) {
            return Err(Error::Index(format!("plug for vertex {v} of a tree with {n} vertices")));
        }
        let mut counter = 0;
        let root = substitute(&self.root, plugs, &mut counter)?;
        Ok(PlanarTree { root })
    }

    /// [`insert`](Self::insert) plus, for every vertex of the result in preorder, the pair
    /// (vertex of `self`, vertex of its plug) it came from. Unplugged vertices report plug
    /// vertex 0.
    pub fn insert_with_origin(&self, plugs: &BTreeMap<usize, PlanarTree>) -> Result<(PlanarTree, Vec<(usize, usize)>)> {
        let result = self.insert(plugs)?;
        let mut origins = Vec::with_capacity(result.n_vertices());
        let mut counter = 0;
        let labelled = label_substitute(&self.root, plugs, &mut counter);
        labelled.preorder_labels(&mut origins);
        Ok((result, origins))
    }

    /// Grafts `other` onto input `i` (one-based).
    pub fn compose_at(&self, i: usize, other: &PlanarTree) -> Result<PlanarTree> {
        let n = self.n_inputs();
        if i == 0 || i > n {
            return Err(Error::Index(format!("input {i} of a tree with {n} inputs")));
        }
        fn walk(node: &Node, target: usize, seen: &mut usize, other: &Node) -> Node {
            match node {
                Node::Leaf => {
                    *seen += 1;
                    if *seen == target {
                        other.clone()
                    } else {
                        Node::Leaf
                    }
                }
                Node::Vertex(cs) => Node::Vertex(cs.iter().map(|c| walk(c, target, seen, other)).collect()),
            }
        }
        Ok(PlanarTree { root: walk(&self.root, i, &mut 0, &other.root) })
    }

    /// Subtrees hanging from the root slots; empty for the unit tree.
    pub fn root_children(&self) -> Vec<PlanarTree> {
        match &self.root {
            Node::Leaf => Vec::new(),
            Node::Vertex(cs) => cs.iter().map(|c| PlanarTree { root: c.clone() }).collect(),
        }
    }
}

fn parse_slot(bytes: &[u8], pos: &mut usize) -> Result<Node> {
    match bytes.get(*pos) {
        Some(b'*') => {
            *pos += 1;
            Ok(Node::Leaf)
        }
        Some(b'(') => {
            *pos += 1;
            let mut children = Vec::new();
            loop {
                match bytes.get(*pos) {
                    Some(b')') => {
                        *pos += 1;
                        return Ok(Node::Vertex(children));
                    }
                    Some(_) => children.push(parse_slot(bytes, pos)?),
                    None => return Err(Error::Parse("unterminated tree".into())),
                }
            }
        }
        Some(&c) => Err(Error::Parse(format!("unexpected {:?} at byte {}", c as char, *pos))),
        None => Err(Error::Parse("empty tree".into())),
    }
}

fn substitute(node: &Node, plugs: &BTreeMap<usize, PlanarTree>, counter: &mut usize) -> Result<Node> {
    match node {
        Node::Leaf => Ok(Node::Leaf),
        Node::Vertex(cs) => {
            let me = *counter;
            *counter += 1;
            let mut new_children = Vec::with_capacity(cs.len());
            for c in cs {
                new_children.push(substitute(c, plugs, counter)?);
            }
            match plugs.get(&me) {
                None => Ok(Node::Vertex(new_children)),
                Some(plug) => {
                    let got = plug.n_inputs();
                    if got != cs.len() {
                        return Err(Error::Arity { vertex: me, expected: cs.len(), got });
                    }
                    let mut it = new_children.into_iter();
                    Ok(fill(&plug.root, &mut it))
                }
            }
        }
    }
}

fn fill(node: &Node, it: &mut impl Iterator<Item = Node>) -> Node {
    match node {
        Node::Leaf => it.next().expect("plug input count checked"),
        Node::Vertex(cs) => Node::Vertex(cs.iter().map(|c| fill(c, it)).collect()),
    }
}

enum Labelled {
    Leaf,
    Vertex((usize, usize), Vec<Labelled>),
}

impl Labelled {
    fn preorder_labels(&self, out: &mut Vec<(usize, usize)>) {
        if let Labelled::Vertex(l, cs) = self {
            out.push(*l);
            for c in cs {
                c.preorder_labels(out);
            }
        }
    }
}

// Arities were validated by `insert` before this runs.
fn label_substitute(node: &Node, plugs: &BTreeMap<usize, PlanarTree>, counter: &mut usize) -> Labelled {
    match node {
        Node::Leaf => Labelled::Leaf,
        Node::Vertex(cs) => {
            let me = *counter;
            *counter += 1;
            let children: Vec<Labelled> = cs.iter().map(|c| label_substitute(c, plugs, counter)).collect();
            match plugs.get(&me) {
                None => Labelled::Vertex((me, 0), children),
                Some(plug) => {
                    fn go(n: &Node, me: usize, local: &mut usize, it: &mut std::vec::IntoIter<Labelled>) -> Labelled {
                        match n {
                            Node::Leaf => it.next().expect("arity checked"),
                            Node::Vertex(cs) => {
                                let l = *local;
                                *local += 1;
                                Labelled::Vertex((me, l), cs.iter().map(|c| go(c, me, local, it)).collect())
                            }
                        }
                    }
                    go(&plug.root, me, &mut 0, &mut children.into_iter())
                }
            }
        }
    }
}

pub fn canonical_form(t: &PlanarTree) -> String {
    t.canonical_form()
}

/// All planar trees with `n` inputs, at most `max_vertices` vertices, and every vertex arity
/// accepted by `arity_allowed`; sorted by encoding. For `n = 1` the unit tree is included.
pub fn enumerate_trees(n: usize, arity_allowed: &dyn Fn(usize) -> bool, max_vertices: usize) -> Vec<String> {
    let mut gen = Enumerator { allowed: arity_allowed, memo: BTreeMap::new(), forest_memo: BTreeMap::new() };
    let mut out: Vec<String> = (0..=max_vertices)
        .flat_map(|v| gen.trees(n, v))
        .map(|node| {
            let mut s = String::new();
            node.write(&mut s);
            s
        })
        .collect();
    out.sort();
    out
}

/// Trees as [`PlanarTree`] values, same contract as [`enumerate_trees`].
pub fn enumerate_planar(n: usize, arity_allowed: &dyn Fn(usize) -> bool, max_vertices: usize) -> Vec<PlanarTree> {
    enumerate_trees(n, arity_allowed, max_vertices)
        .iter()
        .map(|s| PlanarTree::parse(s).expect("enumerator emits valid encodings"))
        .collect()
}

struct Enumerator<'a> {
    allowed: &'a dyn Fn(usize) -> bool,
    memo: BTreeMap<(usize, usize), Vec<Node>>,
    forest_memo: BTreeMap<(usize, usize, usize), Vec<Vec<Node>>>,
}

impl Enumerator<'_> {
    /// Trees with exactly `n` leaves and `v` vertices.
    fn trees(&mut self, n: usize, v: usize) -> Vec<Node> {
        if let Some(r) = self.memo.get(&(n, v)) {
            return r.clone();
        }
        let mut out = Vec::new();
        if v == 0 {
            if n == 1 {
                out.push(Node::Leaf);
            }
        } else {
            // each slot holds a leaf or at least one vertex
            for k in 0..=(n + v - 1) {
                if !(self.allowed)(k) {
                    continue;
                }
                for forest in self.forest(k, n, v - 1) {
                    out.push(Node::Vertex(forest));
                }
            }
        }
        self.memo.insert((n, v), out.clone());
        out
    }

    /// Sequences of `k` slots with `n` leaves and `v` vertices in total.
    fn forest(&mut self, k: usize, n: usize, v: usize) -> Vec<Vec<Node>> {
        if let Some(r) = self.forest_memo.get(&(k, n, v)) {
            return r.clone();
        }
        let mut out = Vec::new();
        if k == 0 {
            if n == 0 && v == 0 {
                out.push(Vec::new());
            }
        } else {
            for n1 in 0..=n {
                for v1 in 0..=v {
                    let heads = self.trees(n1, v1);
                    if heads.is_empty() {
                        continue;
                    }
                    let tails = self.forest(k - 1, n - n1, v - v1);
                    for h in &heads {
                        for t in &tails {
                            let mut f = Vec::with_capacity(k);
                            f.push(h.clone());
                            f.extend(t.iter().cloned());
                            out.push(f);
                        }
                    }
                }
            }
        }
        self.forest_memo.insert((k, n, v), out.clone());
        out
    }
}

/// Cyclic tree with a principal vertex: its slots are cyclically ordered and the start leaf
/// fixes the identification of the legs with `0..L`. Stored rotated so the start leaf lies
/// in slot 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RigidCyclicTree {
    slots: Vec<PlanarTree>,
    start: usize,
}

impl RigidCyclicTree {
    /// `slots` in cyclic order, `start` a planar leaf index of the concatenated slots.
    pub fn new(slots: Vec<PlanarTree>, start: usize) -> Result<Self> {
        if slots.is_empty() {
            return Err(Error::Tree("principal vertex needs at least one slot".into()));
        }
        let total: usize = slots.iter().map(PlanarTree::n_inputs).sum();
        if (total > 0 && start >= total) || (total == 0 && start != 0) {
            return Err(Error::Index(format!("start leaf {start} of {total}")));
        }
        Ok(Self::canonicalize(slots, start))
    }

    fn canonicalize(mut slots: Vec<PlanarTree>, mut start: usize) -> Self {
        let total: usize = slots.iter().map(PlanarTree::n_inputs).sum();
        if total == 0 {
            let k = slots.len();
            let best = (0..k)
                .min_by_key(|&r| slots[r..].iter().chain(&slots[..r]).map(|s| s.canonical_form()).collect::<Vec<_>>())
                .unwrap_or(0);
            slots.rotate_left(best);
            return RigidCyclicTree { slots, start: 0 };
        }
        while start >= slots[0].n_inputs() {
            start -= slots[0].n_inputs();
            slots.rotate_left(1);
        }
        RigidCyclicTree { slots, start }
    }

    pub fn slots(&self) -> &[PlanarTree] {
        &self.slots
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn n_leaves(&self) -> usize {
        self.slots.iter().map(PlanarTree::n_inputs).sum()
    }

    /// Moves the start to the next leaf in cyclic order.
    pub fn rotate(&self) -> Self {
        let l = self.n_leaves();
        if l == 0 {
            return self.clone();
        }
        Self::canonicalize(self.slots.clone(), (self.start + 1) % l)
    }

    /// `<slot slot ...>@start`, each slot in the planar grammar.
    pub fn canonical_form(&self) -> String {
        let mut s = String::from("<");
        for t in &self.slots {
            s.push_str(&t.canonical_form());
        }
        s.push_str(&format!(">@{}", self.start));
        s
    }

    pub fn parse(s: &str) -> Result<Self> {
        let err = || Error::Parse(format!("bad cyclic tree {s:?}"));
        let body = s.strip_prefix('<').ok_or_else(err)?;
        let (inner, start) = body.split_once(">@").ok_or_else(err)?;
        let start: usize = start.parse().map_err(|_| err())?;
        let bytes = inner.as_bytes();
        let mut pos = 0;
        let mut slots = Vec::new();
        while pos < bytes.len() {
            slots.push(PlanarTree { root: parse_slot(bytes, &mut pos)? });
        }
        Self::new(slots, start)
    }
}

/// Family of complexes indexed by planar trees with at least one vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeCollection {
    entries: BTreeMap<String, DGModule>,
}

impl TreeCollection {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, tree: &PlanarTree, x: DGModule) -> Result<()> {
        if tree.is_unit() {
            return Err(Error::Tree("collections are indexed by trees with a vertex".into()));
        }
        if x.space().total_dim() > 0 {
            self.entries.insert(tree.canonical_form(), x);
        }
        Ok(())
    }

    pub fn get(&self, tree: &PlanarTree) -> Option<&DGModule> {
        self.entries.get(&tree.canonical_form())
    }

    pub fn total_dim(&self, tree: &PlanarTree) -> usize {
        self.get(tree).map_or(0, |x| x.space().total_dim())
    }

    pub fn support(&self) -> impl Iterator<Item = (&String, &DGModule)> {
        self.entries.iter()
    }

    /// `Q` on every corolla with arity in `arities`.
    pub fn unit(arities: impl IntoIterator<Item = usize>) -> Self {
        let mut c = Self::new();
        for k in arities {
            c.entries.insert(PlanarTree::corolla(k).canonical_form(), crate::dg::unit_complex());
        }
        c
    }

    /// `value` on every tree of the given list.
    pub fn constant(trees: &[PlanarTree], value: &DGModule) -> Result<Self> {
        let mut c = Self::new();
        for t in trees {
            c.insert(t, value.clone())?;
        }
        Ok(c)
    }
}

/// `(X ∘ Y)(T) = ⊕_{T = t{t_v}} X(t) ⊗ ⊗_v Y(t_v)`, plugs ranging over trees with a vertex.
pub fn compose_collections(x: &TreeCollection, y: &TreeCollection) -> Result<TreeCollection> {
    let mut by_arity: BTreeMap<usize, Vec<(PlanarTree, &DGModule)>> = BTreeMap::new();
    for (key, m) in &y.entries {
        let t = PlanarTree::parse(key)?;
        by_arity.entry(t.n_inputs()).or_default().push((t, m));
    }
    let mut acc: BTreeMap<String, Vec<DGModule>> = BTreeMap::new();
    for (key, xm) in &x.entries {
        let t = PlanarTree::parse(key)?;
        let arities = t.arities();
        let options: Vec<&[(PlanarTree, &DGModule)]> = arities
            .iter()
            .map(|a| by_arity.get(a).map_or(&[][..], |v| v.as_slice()))
            .collect();
        if options.iter().any(|o| o.is_empty()) {
            continue;
        }
        let mut choice = vec![0usize; arities.len()];
        loop {
            let mut plugs = BTreeMap::new();
            let mut value = xm.clone();
            for (v, &c) in choice.iter().enumerate() {
                let (plug, ym) = &options[v][c];
                plugs.insert(v, plug.clone());
                value = tensor_dg(&value, ym)?;
            }
            let result = t.insert(&plugs)?;
            acc.entry(result.canonical_form()).or_default().push(value);
            // odometer over plug choices
            let mut i = 0;
            while i < choice.len() {
                choice[i] += 1;
                if choice[i] < options[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
        }
    }
    let mut out = TreeCollection::new();
    for (key, parts) in acc {
        let sum = direct_sum(&parts)?;
        if sum.space().total_dim() > 0 {
            out.entries.insert(key, sum);
        }
    }
    Ok(out)
}

/// Parent-child vertex pairs; decompositions `t = s{s_v}` correspond to subsets of these.
pub fn internal_edges(t: &PlanarTree) -> BTreeSet<(usize, usize)> {
    t.parents()
        .iter()
        .enumerate()
        .filter_map(|(v, p)| p.map(|p| (p, v)))
        .collect()
}
