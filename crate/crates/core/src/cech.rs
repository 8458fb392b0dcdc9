//! Čech complexes of covers of finite spaces, with constant rational coefficients.
//!
//! A finite poset carries the Alexandrov topology whose opens are the up-closed sets. The
//! sections of the constant sheaf over an open are the locally constant functions, one
//! coordinate per connected component.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::dg::{ComplexBuilder, DGModule};
use crate::error::{Error, Result};
use crate::linalg::{homology_dim, QMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    labels: Vec<String>,
    /// `leq[a][b]` iff `a ≤ b`.
    leq: Vec<Vec<bool>>,
}

impl FiniteSpace {
    /// The partial order generated by `relations` (`(a, b)` meaning `a ≤ b`).
    pub fn new(n: usize, relations: &[(usize, usize)]) -> Result<Self> {
        Self::labelled((0..n).map(|i| i.to_string()).collect(), relations)
    }

    pub fn labelled(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::Index(format!("relation ({a}, {b}) on {n} points")));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if leq[a][b] && leq[b][a] {
                    return Err(Error::Topology(format!("{} and {} lie on a cycle", labels[a], labels[b])));
                }
            }
        }
        Ok(FiniteSpace { labels, leq })
    }

    /// The minimal finite model of the circle: two open points over two closed ones.
    pub fn circle4() -> Self {
        FiniteSpace::labelled(
            ["a", "b", "c", "d"].map(String::from).to_vec(),
            &[(2, 0), (2, 1), (3, 0), (3, 1)],
        )
        .expect("a partial order")
    }

    /// Circle with `2m` points alternating open and closed, `m ≥ 2`.
    pub fn circle(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Topology("a finite circle needs at least four points".into()));
        }
        // Open points 0..m, closed points m..2m; closed point i sits under opens i and i+1.
        let rel: Vec<(usize, usize)> = (0..m).flat_map(|i| [(m + i, i), (m + i, (i + 1) % m)]).collect();
        FiniteSpace::new(2 * m, &rel)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn is_open(&self, set: &BTreeSet<usize>) -> bool {
        set.iter().all(|&a| (0..self.len()).all(|b| !self.leq[a][b] || set.contains(&b)))
    }

    /// Smallest open containing `x`.
    pub fn star(&self, x: usize) -> BTreeSet<usize> {
        (0..self.len()).filter(|&b| self.leq[x][b]).collect()
    }

    /// Connected components of a subspace, each sorted, ordered by least element.
    pub fn components(&self, set: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &s in set {
            if seen.contains(&s) {
                continue;
            }
            let mut comp = BTreeSet::from([s]);
            let mut stack = vec![s];
            while let Some(a) = stack.pop() {
                for &b in set {
                    if (self.leq[a][b] || self.leq[b][a]) && comp.insert(b) {
                        stack.push(b);
                    }
                }
            }
            seen.extend(comp.iter().copied());
            out.push(comp);
        }
        out
    }

    /// Chains `x_0 < .. < x_k` of a subspace.
    pub fn order_complex(&self, set: &BTreeSet<usize>) -> SimplicialComplex {
        let pts: Vec<usize> = set.iter().copied().collect();
        let mut simplices: Vec<Vec<usize>> = pts.iter().map(|&p| vec![p]).collect();
        let mut frontier = simplices.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for c in &frontier {
                let top = *c.last().expect("nonempty chain");
                for &p in &pts {
                    if p != top && self.leq[top][p] {
                        let mut e = c.clone();
                        e.push(p);
                        next.push(e);
                    }
                }
            }
            simplices.extend(next.iter().cloned());
            frontier = next;
        }
        // Vertices of a chain listed in order; relabel by sorting to get canonical faces.
        SimplicialComplex::new(simplices.into_iter().map(|mut s| {
            s.sort_unstable();
            s
        }))
    }
}

/// A finite abstract simplicial complex; simplices are sorted vertex lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// Closes the given simplices under faces.
    pub fn new(simplices: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut stack: Vec<Vec<usize>> = simplices.into_iter().filter(|s| !s.is_empty()).collect();
        while let Some(s) = stack.pop() {
            if s.len() > 1 {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    if !all.contains(&f) {
                        stack.push(f);
                    }
                }
            }
            all.insert(s);
        }
        let top = all.iter().map(Vec::len).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); top];
        for s in all {
            by_dim[s.len() - 1].push(s);
        }
        SimplicialComplex { by_dim }
    }

    pub fn dimension(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    /// Matrix of `δ: C^k → C^{k+1}`, `(δf)(σ) = Σ_i (-1)^i f(∂_i σ)`.
    pub fn coboundary(&self, k: usize) -> QMatrix {
        let src = self.simplices(k);
        let tgt = self.simplices(k + 1);
        let pos: BTreeMap<&Vec<usize>, usize> = src.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut m = QMatrix::zeros(tgt.len(), src.len());
        for (r, s) in tgt.iter().enumerate() {
            for i in 0..s.len() {
                let mut f = s.clone();
                f.remove(i);
                let sign = if i % 2 == 0 { 1 } else { -1 };
                m.set(r, pos[&f], Rational::from_integer(sign.into()));
            }
        }
        m
    }

    /// Rational cohomology dimensions in degrees `0..=n_max`.
    pub fn cohomology(&self, n_max: usize) -> Result<Vec<usize>> {
        (0..=n_max)
            .map(|k| {
                let d_in = if k == 0 { QMatrix::zeros(self.simplices(0).len(), 0) } else { self.coboundary(k - 1) };
                homology_dim(&d_in, &self.coboundary(k))
            })
            .collect()
    }
}

/// Opens `U_0, .., U_N` of a finite space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    space: FiniteSpace,
    opens: Vec<BTreeSet<usize>>,
}

impl Cover {
    pub fn new(space: FiniteSpace, opens: Vec<BTreeSet<usize>>) -> Result<Self> {
        for (i, u) in opens.iter().enumerate() {
            if let Some(&p) = u.iter().find(|&&p| p >= space.len()) {
                return Err(Error::Index(format!("open {i} contains point {p}")));
            }
            if !space.is_open(u) {
                return Err(Error::Topology(format!("member {i} of the cover is not up-closed")));
            }
        }
        Ok(Cover { space, opens })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn opens(&self) -> &[BTreeSet<usize>] {
        &self.opens
    }

    pub fn intersection(&self, idx: &[usize]) -> BTreeSet<usize> {
        let mut it = idx.iter().map(|&i| &self.opens[i]);
        let Some(first) = it.next() else { return (0..self.space.len()).collect() };
        it.fold(first.clone(), |acc, u| acc.intersection(u).copied().collect())
    }

    /// Increasing index sets of size `k + 1` with nonempty intersection.
    fn faces(&self, k: usize) -> Vec<Vec<usize>> {
        let n = self.opens.len();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k + 1);
        fn rec(c: &Cover, n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k + 1 {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                if !c.intersection(cur).is_empty() {
                    rec(c, n, k, i + 1, cur, out);
                }
                cur.pop();
            }
        }
        rec(self, n, k, 0, &mut cur, &mut out);
        out
    }

    /// True when every nonempty intersection has the rational cohomology of a point.
    pub fn is_good(&self) -> Result<bool> {
        for k in 0..self.opens.len() {
            for idx in self.faces(k) {
                let u = self.intersection(&idx);
                let oc = self.space.order_complex(&u);
                let top = oc.dimension().unwrap_or(0);
                let h = oc.cohomology(top)?;
                if h[0] != 1 || h[1..].iter().any(|&x| x != 0) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `Č^n = ⊕_{i_0 < .. < i_n} Γ(U_{i_0} ∩ .. ∩ U_{i_n}; ℚ)` with the alternating-sum differential.
pub fn cech_complex(cover: &Cover) -> Result<DGModule> {
    let mut b = ComplexBuilder::new();
    let mut cells = BTreeMap::new();
    let mut comps = BTreeMap::new();
    for k in 0..cover.opens.len() {
        for idx in cover.faces(k) {
            let cs = cover.space.components(&cover.intersection(&idx));
            cells.insert(idx.clone(), b.cell(k as i64, cs.len()));
            comps.insert(idx, cs);
        }
    }
    for (idx, cs) in &comps {
        if idx.len() < 2 {
            continue;
        }
        for j in 0..idx.len() {
            let mut face = idx.clone();
            face.remove(j);
            let sign = Rational::from_integer(if j % 2 == 0 { 1.into() } else { (-1).into() });
            for (c, comp) in cs.iter().enumerate() {
                let p = *comp.iter().next().expect("components are nonempty");
                let src = comps[&face].iter().position(|fc| fc.contains(&p)).expect("restriction lands in a component");
                b.add(cells[&face], src, cells[idx], c, sign.clone());
            }
        }
    }
    b.build()
}

/// Index sets of the cover with nonempty intersection.
pub fn nerve(cover: &Cover) -> SimplicialComplex {
    SimplicialComplex::new((0..cover.opens.len()).flat_map(|k| cover.faces(k)))
}

pub fn nerve_cohomology(cover: &Cover, n_max: usize) -> Result<Vec<usize>> {
    nerve(cover).cohomology(n_max)
}

/// Čech cohomology dimensions in degrees `0..=n_max`.
pub fn cech_cohomology(cover: &Cover, n_max: usize) -> Result<Vec<usize>> {
    let c = cech_complex(cover)?;
    Ok((0..=n_max as i64).map(|n| c.homology_dim(n)).collect())
}

/// `{"points": [..], "order": [[x, y], ..], "cover": [[..], ..]}` with `x ≤ y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverFile {
    pub points: Vec<String>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    pub cover: Vec<Vec<String>>,
}

impl CoverFile {
    pub fn to_cover(&self) -> Result<Cover> {
        let index: BTreeMap<&str, usize> = self.points.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
        if index.len() != self.points.len() {
            return Err(Error::Parse("duplicate point names".into()));
        }
        let look = |p: &str| index.get(p).copied().ok_or_else(|| Error::Parse(format!("unknown point {p}")));
        let rel = self.order.iter().map(|(a, b)| Ok((look(a)?, look(b)?))).collect::<Result<Vec<_>>>()?;
        let space = FiniteSpace::labelled(self.points.clone(), &rel)?;
        let opens = self
            .cover
            .iter()
            .map(|u| u.iter().map(|p| look(p)).collect::<Result<BTreeSet<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Cover::new(space, opens)
    }

    pub fn from_json(s: &str) -> Result<Cover> {
        let f: CoverFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        f.to_cover()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn finite_spaces_validate() {
        assert!(matches!(FiniteSpace::new(2, &[(0, 1), (1, 0)]), Err(Error::Topology(_))));
        assert!(matches!(FiniteSpace::new(2, &[(0, 2)]), Err(Error::Index(_))));
        let x = FiniteSpace::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(x.leq(0, 2));
        assert!(x.is_open(&set(&[1, 2])) && !x.is_open(&set(&[0, 1])));
        assert_eq!(x.star(1), set(&[1, 2]));
        let c = FiniteSpace::circle4();
        assert_eq!(c.components(&set(&[0, 1])).len(), 2);
        assert!(matches!(Cover::new(c, vec![set(&[2])]), Err(Error::Topology(_))));
    }

    #[test]
    fn order_complex_of_the_circle() {
        let c = FiniteSpace::circle4();
        let k = c.order_complex(&(0..4).collect());
        assert_eq!(k.simplices(1).len(), 4);
        assert_eq!(k.cohomology(2).unwrap(), vec![1, 1, 0]);
    }

    #[test]
    fn single_open() {
        let x = FiniteSpace::new(3, &[(0, 1), (0, 2)]).unwrap();
        let cover = Cover::new(x, vec![(0..3).collect()]).unwrap();
        assert_eq!(cech_cohomology(&cover, 2).unwrap(), vec![1, 0, 0]);
        assert_eq!(nerve_cohomology(&cover, 2).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn four_point_circle() {
        let c = FiniteSpace::circle4();
        let cover = Cover::new(c.clone(), vec![c.star(2), c.star(3)]).unwrap();
        assert_eq!(cech_cohomology(&cover, 2).unwrap(), vec![1, 1, 0]);
        assert!(!cover.is_good().unwrap());
        // Agrees with the order complex of the whole space, not with the nerve (an edge).
        assert_eq!(c.order_complex(&(0..4).collect()).cohomology(2).unwrap(), vec![1, 1, 0]);
        assert_eq!(nerve_cohomology(&cover, 2).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn disjoint_opens() {
        let x = FiniteSpace::new(4, &[(0, 1), (2, 3)]).unwrap();
        let cover = Cover::new(x, vec![set(&[0, 1]), set(&[2, 3])]).unwrap();
        assert_eq!(cech_cohomology(&cover, 1).unwrap(), vec![2, 0]);
        assert_eq!(nerve_cohomology(&cover, 1).unwrap(), vec![2, 0]);
    }

    #[test]
    fn three_arcs_give_a_circle_nerve() {
        let c = FiniteSpace::circle(3).unwrap();
        // Arcs around the closed points 3, 4, 5; consecutive arcs share one open point.
        let cover = Cover::new(c.clone(), (3..6).map(|p| c.star(p)).collect()).unwrap();
        assert!(cover.intersection(&[0, 1, 2]).is_empty());
        assert!(cover.is_good().unwrap());
        assert_eq!(nerve_cohomology(&cover, 2).unwrap(), vec![1, 1, 0]);
        assert_eq!(cech_cohomology(&cover, 2).unwrap(), vec![1, 1, 0]);
    }

    #[test]
    fn common_point_gives_contractible_nerve() {
        let x = FiniteSpace::new(4, &[(0, 3), (1, 3), (2, 3)]).unwrap();
        let cover = Cover::new(x.clone(), (0..3).map(|p| x.star(p)).collect()).unwrap();
        assert_eq!(nerve_cohomology(&cover, 2).unwrap(), vec![1, 0, 0]);
        assert_eq!(cech_cohomology(&cover, 2).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn cech_squares_to_zero_and_matches_nerve_on_good_covers() {
        let spaces = [FiniteSpace::circle(3).unwrap(), FiniteSpace::circle(4).unwrap()];
        for x in spaces {
            let n = x.len();
            let stars: Vec<_> = (0..n).map(|p| x.star(p)).collect();
            // Every subfamily of minimal opens of size ≤ 4 that is good.
            for mask in 1u32..(1 << n) {
                if mask.count_ones() > 4 {
                    continue;
                }
                let opens: Vec<_> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| stars[i].clone()).collect();
                let cover = Cover::new(x.clone(), opens).unwrap();
                let c = cech_complex(&cover).unwrap();
                if cover.is_good().unwrap() {
                    assert_eq!(cech_cohomology(&cover, 3).unwrap(), nerve_cohomology(&cover, 3).unwrap());
                }
                assert!(c.degrees().iter().all(|&k| c.d(k + 1).mul(&c.d(k)).unwrap().is_zero()));
            }
        }
    }

    #[test]
    fn redundant_open_does_not_change_cohomology() {
        let c = FiniteSpace::circle(3).unwrap();
        let arcs: Vec<_> = (3..6).map(|p| c.star(p)).collect();
        let base = Cover::new(c.clone(), arcs.clone()).unwrap();
        let mut more = arcs;
        more.push(c.star(0));
        let refined = Cover::new(c, more).unwrap();
        assert_eq!(cech_cohomology(&base, 3).unwrap(), cech_cohomology(&refined, 3).unwrap());
    }

    #[test]
    fn cover_file_round_trip() {
        let json = r#"{"points": ["a", "b", "c", "d"],
                       "order": [["c", "a"], ["c", "b"], ["d", "a"], ["d", "b"]],
                       "cover": [["a", "b", "c"], ["a", "b", "d"]]}"#;
        let cover = CoverFile::from_json(json).unwrap();
        assert_eq!(cech_cohomology(&cover, 1).unwrap(), vec![1, 1]);
        assert!(matches!(CoverFile::from_json(r#"{"points": ["a"], "cover": [["z"]]}"#), Err(Error::Parse(_))));
        assert!(matches!(CoverFile::from_json("{"), Err(Error::Parse(_))));
    }
}
