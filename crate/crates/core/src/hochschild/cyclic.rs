use std::ops::RangeInclusive;

use num_traits::Zero;

use super::algebra::{Algebra, TracedAlgebra};
use super::cochain::{digits, hochschild_matrix, undigits, HochCochain};
use crate::dg::{cone, DGModule, GradedMap};
use crate::error::{Error, Result};
use crate::linalg::{q, QMatrix, Rational};
use crate::signs::{parity_sign, rotation_sign};

/// Functional on `A^{⊗(n+1)}`; entry `(a_0, .., a_n)` with `a_0` most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicCochain {
    dim: usize,
    level: usize,
    values: Vec<Rational>,
}

impl CyclicCochain {
    pub fn new(dim: usize, level: usize, values: Vec<Rational>) -> Result<Self> {
        let expected = dim.pow(level as u32 + 1);
        if values.len() != expected {
            return Err(Error::Dimension(format!("cyclic cochain of level {level} needs {expected} values")));
        }
        Ok(CyclicCochain { dim, level, values })
    }

    pub fn zero(dim: usize, level: usize) -> Self {
        CyclicCochain { dim, level, values: vec![Rational::zero(); dim.pow(level as u32 + 1)] }
    }

    pub fn from_fn(dim: usize, level: usize, f: impl Fn(&[usize]) -> Rational) -> Self {
        let values = (0..dim.pow(level as u32 + 1)).map(|t| f(&digits(t, dim, level + 1))).collect();
        CyclicCochain { dim, level, values }
    }

    /// The trace as a level-zero functional.
    pub fn trace(tr: &TracedAlgebra) -> Self {
        CyclicCochain { dim: tr.algebra.dim(), level: 0, values: tr.trace().to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn on_basis(&self, args: &[usize]) -> &Rational {
        &self.values[undigits(args, self.dim)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.dim, self.level), (other.dim, other.level), "incompatible cyclic cochains");
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        CyclicCochain { dim: self.dim, level: self.level, values }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        CyclicCochain { dim: self.dim, level: self.level, values: self.values.iter().map(|a| a * s).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q(-1)))
    }

    /// `ψ(a_{N+1-r}, .., a_N, a_0, .., a_{N-r})`: the last `r` arguments moved to the front.
    pub fn rotate_args(&self, r: usize) -> Self {
        let len = self.level + 1;
        Self::from_fn(self.dim, self.level, |a| {
            let rotated: Vec<usize> = (0..len).map(|i| a[(i + len - r) % len]).collect();
            self.on_basis(&rotated).clone()
        })
    }

    /// `(λφ)(a_0, .., a_n) = (-1)^n φ(a_n, a_0, .., a_{n-1})`.
    pub fn lambda(&self) -> Self {
        self.rotate_args(1).scale(&q(parity_sign(self.level as i64)))
    }

    /// `N = Σ_{i=0}^{n} λ^i`.
    pub fn norm(&self) -> Self {
        let mut acc = self.clone();
        let mut cur = self.clone();
        for _ in 0..self.level {
            cur = cur.lambda();
            acc = acc.add(&cur);
        }
        acc
    }

    pub fn is_cyclic(&self) -> bool {
        self.lambda() == *self
    }

    /// `φ(a_0, .., a_{j-1}, g(a_j, .., a_{j+q-1}), ..)` without sign; `j` is zero-based.
    pub fn insert_unsigned(&self, j: usize, g: &HochCochain) -> Self {
        assert!(j <= self.level, "slot {j} out of range");
        assert_eq!(self.dim, g.dim());
        let qn = g.level();
        let level = self.level + qn - 1;
        Self::from_fn(self.dim, level, |a| {
            let inner = g.on_basis(&a[j..j + qn]);
            let mut outer: Vec<usize> = a[..j].to_vec();
            outer.push(0);
            outer.extend_from_slice(&a[j + qn..]);
            let mut acc = Rational::zero();
            for (c, gc) in inner.iter().enumerate() {
                if !gc.is_zero() {
                    outer[j] = c;
                    acc += gc * self.on_basis(&outer);
                }
            }
            acc
        })
    }

    /// Cyclic brace `φ{g}`: insertions into every slot, including those wrapping around
    /// the distinguished slot `a_0`, each with its Koszul sign.
    pub fn brace(&self, g: &HochCochain) -> Self {
        let qn = g.level();
        if qn == 0 && self.level == 0 {
            return CyclicCochain::zero(self.dim, 0);
        }
        let mut acc = CyclicCochain::zero(self.dim, self.level + qn - 1);
        // with no inputs the placements are the `level` gaps of the result; slot 0 would
        // repeat one of them (the rotation sum over 1..q-1 is minus its r = 0 term)
        let first_slot = usize::from(qn == 0);
        for j in first_slot..=self.level {
            let term = self.insert_unsigned(j, g);
            let s = parity_sign(j as i64 * (qn as i64 - 1));
            acc = if s < 0 { acc.sub(&term) } else { acc.add(&term) };
        }
        if qn >= 2 {
            let first = self.insert_unsigned(0, g);
            let slots = first.level + 1;
            for r in 1..qn {
                let term = first.rotate_args(r);
                acc = if rotation_sign(r, slots) < 0 { acc.sub(&term) } else { acc.add(&term) };
            }
        }
        acc
    }
}

/// Connes' `b` on functionals: `bφ = Σ_{i=0}^{n} (-1)^i φ(.., a_i a_{i+1}, ..) + (-1)^{n+1} φ(a_{n+1} a_0, ..)`.
pub fn cyclic_differential(alg: &Algebra, phi: &CyclicCochain) -> CyclicCochain {
    phi.brace(&HochCochain::multiplication(alg))
}

/// `I(f)(a_0, .., a_n) = tr(a_0 f(a_1, .., a_n))`.
pub fn map_i(f: &HochCochain, tr: &TracedAlgebra) -> CyclicCochain {
    let alg = &tr.algebra;
    CyclicCochain::from_fn(alg.dim(), f.level(), |a| tr.tr(&alg.mul(&alg.basis_vector(a[0]), f.on_basis(&a[1..]))))
}

/// `ω(f) = tr{f} = N(tr ∘ f)`, a functional on `A^{⊗n}` for `f` with `n >= 1` inputs.
/// Satisfies `ω(bf) = -b ω(f)`, so it is a chain map into the shifted cyclic complex.
pub fn omega(f: &HochCochain, tr: &TracedAlgebra) -> CyclicCochain {
    CyclicCochain::trace(tr).brace(f)
}

/// Cocyclic vector space given by its structure maps, on levels `0..=top`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocyclicModule {
    dims: Vec<usize>,
    /// `cofaces[n][i]: C^n -> C^{n+1}`, `0 <= i <= n+1`.
    cofaces: Vec<Vec<QMatrix>>,
    /// `codegeneracies[n][j]: C^{n+1} -> C^n`, `0 <= j <= n`.
    codegeneracies: Vec<Vec<QMatrix>>,
    /// `tau[n]: C^n -> C^n` with `tau^{n+1} = id`.
    tau: Vec<QMatrix>,
}

impl CocyclicModule {
    pub fn new(
        dims: Vec<usize>,
        cofaces: Vec<Vec<QMatrix>>,
        codegeneracies: Vec<Vec<QMatrix>>,
        tau: Vec<QMatrix>,
    ) -> Result<Self> {
        let top = dims.len().checked_sub(1).ok_or_else(|| Error::Dimension("no levels".into()))?;
        if cofaces.len() != top || codegeneracies.len() != top || tau.len() != top + 1 {
            return Err(Error::Dimension("structure maps do not match the number of levels".into()));
        }
        for n in 0..top {
            let shape_ok = cofaces[n].len() == n + 2
                && cofaces[n].iter().all(|m| m.rows() == dims[n + 1] && m.cols() == dims[n])
                && codegeneracies[n].len() == n + 1
                && codegeneracies[n].iter().all(|m| m.rows() == dims[n] && m.cols() == dims[n + 1]);
            if !shape_ok {
                return Err(Error::Dimension(format!("structure maps at level {n} have the wrong shape")));
            }
        }
        for (n, t) in tau.iter().enumerate() {
            if t.rows() != dims[n] || t.cols() != dims[n] {
                return Err(Error::Dimension(format!("cyclic operator at level {n} has the wrong shape")));
            }
            let mut p = QMatrix::identity(dims[n]);
            for _ in 0..=n {
                p = t.mul(&p)?;
            }
            if p != QMatrix::identity(dims[n]) {
                return Err(Error::Algebra(format!("cyclic operator at level {n} does not have order {}", n + 1)));
            }
        }
        let m = CocyclicModule { dims, cofaces, codegeneracies, tau };
        for n in 0..top.saturating_sub(1) {
            if !m.b(n + 1).mul(&m.b(n))?.is_zero() {
                return Err(Error::NotAComplex { degree: n as i64 });
            }
        }
        Ok(m)
    }

    /// The cyclic dual of `A`: `C^n = (A^{⊗(n+1)})^*`.
    pub fn of_algebra(alg: &Algebra, top: usize) -> Result<Self> {
        let d = alg.dim();
        let dims: Vec<usize> = (0..=top).map(|n| d.pow(n as u32 + 1)).collect();
        let mut cofaces = Vec::new();
        let mut codegeneracies = Vec::new();
        for n in 0..top {
            // (δ_i φ)(a) = φ(d_i a) on a ∈ A^{⊗(n+2)}
            let mut faces = vec![QMatrix::zeros(dims[n + 1], dims[n]); n + 2];
            for row in 0..dims[n + 1] {
                let a = digits(row, d, n + 2);
                for (i, face) in faces.iter_mut().enumerate() {
                    let (prod, rest): (&[Rational], Vec<usize>) = if i <= n {
                        (alg.mul_basis(a[i], a[i + 1]), [&a[..i], &[0][..], &a[i + 2..]].concat())
                    } else {
                        (alg.mul_basis(a[n + 1], a[0]), [&[0][..], &a[1..=n]].concat())
                    };
                    let pos = if i <= n { i } else { 0 };
                    for (m, c) in prod.iter().enumerate() {
                        if !c.is_zero() {
                            let mut b = rest.clone();
                            b[pos] = m;
                            face.add_at(row, undigits(&b, d), c);
                        }
                    }
                }
            }
            cofaces.push(faces);
            // (σ_j φ)(a) = φ(a_0, .., a_j, 1, ..) on a ∈ A^{⊗(n+1)}
            let mut degs = vec![QMatrix::zeros(dims[n], dims[n + 1]); n + 1];
            for row in 0..dims[n] {
                let a = digits(row, d, n + 1);
                for (j, deg) in degs.iter_mut().enumerate() {
                    for (u, c) in alg.unit().iter().enumerate() {
                        if !c.is_zero() {
                            let b = [&a[..=j], &[u][..], &a[j + 1..]].concat();
                            deg.add_at(row, undigits(&b, d), c);
                        }
                    }
                }
            }
            codegeneracies.push(degs);
        }
        // (τφ)(a_0, .., a_n) = φ(a_n, a_0, .., a_{n-1})
        let tau = (0..=top)
            .map(|n| {
                let mut t = QMatrix::zeros(dims[n], dims[n]);
                for row in 0..dims[n] {
                    let a = digits(row, d, n + 1);
                    let b: Vec<usize> = (0..=n).map(|i| a[(i + n) % (n + 1)]).collect();
                    t.set(row, undigits(&b, d), q(1));
                }
                t
            })
            .collect();
        Self::new(dims, cofaces, codegeneracies, tau)
    }

    /// The constant module: `Q` at every level, all structure maps the identity.
    pub fn constant(top: usize) -> Self {
        let id = QMatrix::identity(1);
        CocyclicModule {
            dims: vec![1; top + 1],
            cofaces: (0..top).map(|n| vec![id.clone(); n + 2]).collect(),
            codegeneracies: (0..top).map(|n| vec![id.clone(); n + 1]).collect(),
            tau: vec![id; top + 1],
        }
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn coface(&self, n: usize, i: usize) -> &QMatrix {
        &self.cofaces[n][i]
    }

    pub fn codegeneracy(&self, n: usize, j: usize) -> &QMatrix {
        &self.codegeneracies[n][j]
    }

    pub fn tau(&self, n: usize) -> &QMatrix {
        &self.tau[n]
    }

    /// `b = Σ (-1)^i δ_i: C^n -> C^{n+1}`.
    pub fn b(&self, n: usize) -> QMatrix {
        let mut acc = QMatrix::zeros(self.dims[n + 1], self.dims[n]);
        for (i, f) in self.cofaces[n].iter().enumerate() {
            acc.add_block(0, 0, &f.scale(&q(parity_sign(i as i64))));
        }
        acc
    }

    /// `λ = (-1)^n τ`.
    pub fn lambda(&self, n: usize) -> QMatrix {
        self.tau[n].scale(&q(parity_sign(n as i64)))
    }

    pub fn norm(&self, n: usize) -> QMatrix {
        let l = self.lambda(n);
        let mut acc = QMatrix::zeros(self.dims[n], self.dims[n]);
        let mut p = QMatrix::identity(self.dims[n]);
        for _ in 0..=n {
            acc.add_block(0, 0, &p);
            p = l.mul(&p).expect("square");
        }
        acc
    }

    /// `σ_{-1} = σ_n τ_{n+1}: C^{n+1} -> C^n`.
    pub fn extra_codegeneracy(&self, n: usize) -> QMatrix {
        self.codegeneracies[n][n].mul(&self.tau[n + 1]).expect("shapes")
    }

    /// Connes' `B = N σ_{-1} (1 - λ): C^{n+1} -> C^n`.
    pub fn connes_b(&self, n: usize) -> QMatrix {
        let one_minus = QMatrix::identity(self.dims[n + 1]).add(&self.lambda(n + 1).neg()).expect("square");
        self.norm(n).mul(&self.extra_codegeneracy(n).mul(&one_minus).expect("shapes")).expect("shapes")
    }

    pub fn mixed(&self) -> Result<MixedComplex> {
        let top = self.top();
        MixedComplex::new(self.dims.clone(), (0..top).map(|n| self.b(n)).collect(), (0..top).map(|n| self.connes_b(n)).collect())
    }

    /// `dim HC^n` from the subcomplex of λ-invariant cochains, for `n < top`.
    pub fn cyclic_cohomology_lambda(&self, n_max: usize) -> Result<Vec<usize>> {
        if n_max >= self.top() {
            return Err(Error::Dimension(format!("levels up to {} needed, module stops at {}", n_max + 1, self.top())));
        }
        let inv: Vec<QMatrix> = (0..=n_max + 1)
            .map(|n| {
                let one_minus = QMatrix::identity(self.dims[n]).add(&self.lambda(n).neg()).expect("square");
                one_minus.kernel_basis().as_columns()
            })
            .collect();
        let ranks: Vec<usize> = (0..=n_max).map(|n| self.b(n).mul(&inv[n]).expect("shapes").rank()).collect();
        Ok((0..=n_max).map(|n| inv[n].cols() - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 }).collect())
    }

    /// Levelwise tensor product with the diagonal structure maps.
    pub fn diamond(&self, other: &CocyclicModule) -> Result<CocyclicModule> {
        let top = self.top().min(other.top());
        let dims = (0..=top).map(|n| self.dims[n] * other.dims[n]).collect();
        let cofaces = (0..top)
            .map(|n| (0..n + 2).map(|i| self.cofaces[n][i].kron(&other.cofaces[n][i])).collect())
            .collect();
        let codegeneracies = (0..top)
            .map(|n| (0..=n).map(|j| self.codegeneracies[n][j].kron(&other.codegeneracies[n][j])).collect())
            .collect();
        let tau = (0..=top).map(|n| self.tau[n].kron(&other.tau[n])).collect();
        CocyclicModule::new(dims, cofaces, codegeneracies, tau)
    }
}

/// Cochain mixed complex: `b: C^n -> C^{n+1}`, `B: C^{n+1} -> C^n` with `b² = B² = bB + Bb = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedComplex {
    dims: Vec<usize>,
    b: Vec<QMatrix>,
    big_b: Vec<QMatrix>,
}

impl MixedComplex {
    pub fn new(dims: Vec<usize>, b: Vec<QMatrix>, big_b: Vec<QMatrix>) -> Result<Self> {
        let top = dims.len().checked_sub(1).ok_or_else(|| Error::Dimension("no levels".into()))?;
        if b.len() != top || big_b.len() != top {
            return Err(Error::Dimension("need one b and one B per level below the top".into()));
        }
        for n in 0..top {
            if (b[n].rows(), b[n].cols()) != (dims[n + 1], dims[n])
                || (big_b[n].rows(), big_b[n].cols()) != (dims[n], dims[n + 1])
            {
                return Err(Error::Dimension(format!("operators at level {n} have the wrong shape")));
            }
        }
        for n in 0..top.saturating_sub(1) {
            if !b[n + 1].mul(&b[n])?.is_zero() || !big_b[n].mul(&big_b[n + 1])?.is_zero() {
                return Err(Error::NotAComplex { degree: n as i64 });
            }
        }
        // bB + Bb on C^n, where both terms exist.
        for n in 0..top {
            let mut s = big_b[n].mul(&b[n])?;
            if n > 0 {
                s = s.add(&b[n - 1].mul(&big_b[n - 1])?)?;
            }
            if !s.is_zero() {
                return Err(Error::NotAntiCommuting { p: n as i64, q: n as i64 });
            }
        }
        Ok(MixedComplex { dims, b, big_b })
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn b(&self, n: usize) -> &QMatrix {
        &self.b[n]
    }

    pub fn big_b(&self, n: usize) -> &QMatrix {
        &self.big_b[n]
    }

    /// Levels making up `Tot^n`, by ascending slot `k`: `C^{n-2k}`.
    fn slots(&self, n: usize) -> Vec<usize> {
        (0..=n / 2).map(|k| n - 2 * k).collect()
    }

    fn tot_dim(&self, n: usize) -> usize {
        self.slots(n).iter().map(|&l| self.dims[l]).sum()
    }

    /// Total differential `b + B: Tot^n -> Tot^{n+1}`, for `n < top`.
    pub fn total_differential(&self, n: usize) -> QMatrix {
        let src = self.slots(n);
        let tgt = self.slots(n + 1);
        let mut m = QMatrix::zeros(self.tot_dim(n + 1), self.tot_dim(n));
        let offsets = |s: &[usize]| -> Vec<usize> {
            s.iter().scan(0, |acc, &l| {
                let o = *acc;
                *acc += self.dims[l];
                Some(o)
            })
            .collect()
        };
        let (so, to) = (offsets(&src), offsets(&tgt));
        for (k, &l) in src.iter().enumerate() {
            m.add_block(to[k], so[k], &self.b[l]);
            if l > 0 {
                m.add_block(to[k + 1], so[k], &self.big_b[l - 1]);
            }
        }
        m
    }

    /// The total complex on degrees `0..=top`.
    pub fn total(&self) -> Result<DGModule> {
        let top = self.top();
        let dims: Vec<usize> = (0..=top).map(|n| self.tot_dim(n)).collect();
        let diffs: Vec<QMatrix> = (0..top).map(|n| self.total_differential(n)).collect();
        DGModule::from_differentials(0, &dims, &diffs)
    }

    /// Periodicity `S: Tot^n -> Tot^{n+2}`, slot `k` to slot `k+1`.
    pub fn periodicity(&self, n: usize) -> QMatrix {
        let rows = self.tot_dim(n + 2);
        let cols = self.tot_dim(n);
        let mut m = QMatrix::zeros(rows, cols);
        let shift = self.dims[n + 2];
        for i in 0..cols {
            m.set(shift + i, i, q(1));
        }
        m
    }

    /// `dim HC^n` for `n <= n_max < top` from the total complex.
    pub fn cohomology(&self, n_max: usize) -> Result<Vec<usize>> {
        if n_max >= self.top() {
            return Err(Error::Dimension(format!("levels up to {} needed, complex stops at {}", n_max + 1, self.top())));
        }
        let ranks: Vec<usize> = (0..=n_max).map(|n| self.total_differential(n).rank()).collect();
        Ok((0..=n_max).map(|n| self.tot_dim(n) - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 }).collect())
    }

    /// Rank of `S: H^n -> H^{n+2}`, for `n + 2 < top`.
    pub fn periodicity_rank(&self, n: usize) -> Result<usize> {
        let z = self.total_differential(n).kernel_basis().as_columns();
        let sz = self.periodicity(n).mul(&z)?;
        let boundaries = self.total_differential(n + 1);
        let mut joined = QMatrix::zeros(sz.rows(), sz.cols() + boundaries.cols());
        joined.add_block(0, 0, &sz);
        joined.add_block(0, sz.cols(), &boundaries);
        Ok(joined.rank() - boundaries.rank())
    }
}

/// Outcome of inverting the periodicity operator on a degree window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C1Localization {
    /// Stable dimension in even and odd degrees.
    pub dims: [usize; 2],
    /// First degree of each parity from which `S` is an isomorphism throughout the window.
    pub certificate: [usize; 2],
    /// Cohomology dimensions across the window.
    pub cohomology: Vec<usize>,
}

/// Stabilized 2-periodic dimensions of `colim(H^n -S-> H^{n+2} -S-> ..)` read off a window.
pub fn localize_c1(mixed: &MixedComplex, window: RangeInclusive<usize>) -> Result<C1Localization> {
    let (lo, hi) = (*window.start(), *window.end());
    if hi >= mixed.top() || hi < lo + 3 {
        return Err(Error::Dimension(format!(
            "window {lo}..={hi} must contain two periods and end below level {}",
            mixed.top()
        )));
    }
    let h: Vec<usize> = mixed.cohomology(hi)?;
    let s: Vec<usize> = (lo..=hi - 2).map(|n| mixed.periodicity_rank(n)).collect::<Result<_>>()?;
    let mut dims = [0; 2];
    let mut certificate = [0; 2];
    for parity in 0..2 {
        let levels: Vec<usize> = (lo..=hi - 2).filter(|n| n % 2 == parity).collect();
        let good = |n: usize| s[n - lo] == h[n] && h[n] == h[n + 2];
        match (0..levels.len()).find(|&i| levels[i..].iter().all(|&n| good(n))) {
            Some(i) => {
                certificate[parity] = levels[i];
                dims[parity] = h[levels[i]];
            }
            None => {
                return Err(Error::NotStabilized { trace: vec![h[lo..=hi].to_vec(), s] });
            }
        }
    }
    Ok(C1Localization { dims, certificate, cohomology: h[lo..=hi].to_vec() })
}

/// `dim HC^n(A)` for `0 <= n <= n_max` via the λ-invariant subcomplex.
pub fn cyclic_cohomology(alg: &Algebra, n_max: usize) -> Result<Vec<usize>> {
    CocyclicModule::of_algebra(alg, n_max + 1)?.cyclic_cohomology_lambda(n_max)
}

/// Same dimensions from the total complex of the `(b, B)` mixed complex.
pub fn cyclic_cohomology_mixed(alg: &Algebra, n_max: usize) -> Result<Vec<usize>> {
    CocyclicModule::of_algebra(alg, n_max + 1)?.mixed()?.cohomology(n_max)
}

/// Matrix of `ω: Hoch^n -> Hochcyc^{n-1}` on unnormalized bases, `n >= 1`.
pub fn omega_matrix(tr: &TracedAlgebra, n: usize) -> QMatrix {
    assert!(n >= 1, "ω starts at one input");
    let d = tr.algebra.dim();
    let mut m = QMatrix::zeros(d.pow(n as u32), d.pow(n as u32 + 1));
    for row in 0..d.pow(n as u32) {
        let a = digits(row, d, n);
        for r in 0..n {
            let rotated: Vec<usize> = (0..n).map(|i| a[(i + n - r) % n]).collect();
            let s = q(rotation_sign(r, n));
            let base = undigits(&rotated, d) * d;
            for (k, t) in tr.trace().iter().enumerate() {
                if !t.is_zero() {
                    m.add_at(row, base + k, &(&s * t));
                }
            }
        }
    }
    m
}

/// `Cone(ω)` on Hochschild levels `0..=top`. Cohomology is meaningful in degrees below `top - 1`.
pub fn deformation_complex(tr: &TracedAlgebra, top: usize) -> Result<DGModule> {
    if top < 2 {
        return Err(Error::Dimension("the deformation complex needs at least three levels".into()));
    }
    let alg = &tr.algebra;
    let d = alg.dim();
    let hoch_dims: Vec<usize> = (0..=top).map(|n| d.pow(n as u32 + 1)).collect();
    let hoch_diffs = (0..top).map(|n| hochschild_matrix(alg, n, false)).collect::<Result<Vec<_>>>()?;
    let hoch = DGModule::from_differentials(0, &hoch_dims, &hoch_diffs)?;
    let cyc = CocyclicModule::of_algebra(alg, top.saturating_sub(1))?;
    let cyc_dims: Vec<usize> = (1..=top).map(|n| d.pow(n as u32)).collect();
    // Hochcyc[-1]: the shift negates b.
    let cyc_diffs: Vec<QMatrix> = (1..top).map(|n| cyc.b(n - 1).neg()).collect();
    let target = DGModule::from_differentials(1, &cyc_dims, &cyc_diffs)?;
    let comps = (1..=top).map(|n| (n as i64, omega_matrix(tr, n))).collect();
    let w = GradedMap::new(&hoch, &target, 0, comps)?;
    cone(&hoch, &target, &w)
}
