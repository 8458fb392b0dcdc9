use num_traits::{One, Zero};

use super::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{q, QMatrix, Rational};
use crate::signs::{bracket_sign, composition_sign, parity_sign};

/// Multilinear map `A^{⊗n} -> A` stored densely: entry `(i_1..i_n; k)` is the coefficient
/// of `e_k` in `f(e_{i_1}, .., e_{i_n})`, with `i_1` most significant and `k` last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HochCochain {
    dim: usize,
    level: usize,
    values: Vec<Rational>,
}

/// Digits of `idx` in base `d`, most significant first, padded to `len`.
pub(crate) fn digits(mut idx: usize, d: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = idx % d;
        idx /= d;
    }
    out
}

pub(crate) fn undigits(ds: &[usize], d: usize) -> usize {
    ds.iter().fold(0, |acc, &x| acc * d + x)
}

impl HochCochain {
    pub fn new(dim: usize, level: usize, values: Vec<Rational>) -> Result<Self> {
        let expected = dim.pow(level as u32 + 1);
        if values.len() != expected {
            return Err(Error::Dimension(format!(
                "cochain of level {level} over dimension {dim} needs {expected} values, got {}",
                values.len()
            )));
        }
        Ok(HochCochain { dim, level, values })
    }

    pub fn zero(dim: usize, level: usize) -> Self {
        HochCochain { dim, level, values: vec![Rational::zero(); dim.pow(level as u32 + 1)] }
    }

    /// Builds a cochain from its value on each basis input tuple.
    pub fn from_fn(dim: usize, level: usize, f: impl Fn(&[usize]) -> Vec<Rational>) -> Self {
        let mut c = Self::zero(dim, level);
        for t in 0..dim.pow(level as u32) {
            let inputs = digits(t, dim, level);
            let v = f(&inputs);
            c.values[t * dim..(t + 1) * dim].clone_from_slice(&v);
        }
        c
    }

    /// Level-zero cochain given by an element.
    pub fn element(a: &[Rational]) -> Self {
        HochCochain { dim: a.len(), level: 0, values: a.to_vec() }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, 1, |i| {
            let mut v = vec![Rational::zero(); dim];
            v[i[0]] = Rational::one();
            v
        })
    }

    /// The product of `a` as a level-two cochain.
    pub fn multiplication(a: &Algebra) -> Self {
        HochCochain { dim: a.dim(), level: 2, values: a.structure_constants().to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of inputs.
    pub fn level(&self) -> usize {
        self.level
    }

    /// Degree in the shifted (brace) grading.
    pub fn brace_degree(&self) -> i64 {
        self.level as i64 - 1
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Rational] {
        &mut self.values
    }

    /// Value on a tuple of basis vectors.
    pub fn on_basis(&self, inputs: &[usize]) -> &[Rational] {
        let t = undigits(inputs, self.dim);
        &self.values[t * self.dim..(t + 1) * self.dim]
    }

    pub fn eval(&self, args: &[&[Rational]]) -> Vec<Rational> {
        assert_eq!(args.len(), self.level, "wrong number of arguments");
        let mut out = vec![Rational::zero(); self.dim];
        for t in 0..self.dim.pow(self.level as u32) {
            let inputs = digits(t, self.dim, self.level);
            let mut coeff = Rational::one();
            for (a, &i) in args.iter().zip(&inputs) {
                coeff *= &a[i];
                if coeff.is_zero() {
                    break;
                }
            }
            if coeff.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(&self.values[t * self.dim..(t + 1) * self.dim]) {
                *o += &coeff * v;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "cochains over different algebras");
        assert_eq!(self.level, other.level, "cochains of different levels");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        HochCochain { dim: self.dim, level: self.level, values }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        HochCochain { dim: self.dim, level: self.level, values: self.values.iter().map(|a| a * s).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&q(-1))
    }

    /// `f(.., g(a_i, .., a_{i+q-1}), ..)` without sign; `i` is one-based.
    pub fn insert_unsigned(&self, i: usize, g: &HochCochain) -> HochCochain {
        assert!(i >= 1 && i <= self.level, "insertion slot {i} out of range");
        assert_eq!(self.dim, g.dim);
        let d = self.dim;
        let (p, qn) = (self.level, g.level);
        let level = p + qn - 1;
        let mut out = Self::zero(d, level);
        for t in 0..d.pow(level as u32) {
            let inputs = digits(t, d, level);
            let inner = g.on_basis(&inputs[i - 1..i - 1 + qn]);
            let mut outer: Vec<usize> = inputs[..i - 1].to_vec();
            outer.push(0);
            outer.extend_from_slice(&inputs[i - 1 + qn..]);
            let target = &mut out.values[t * d..(t + 1) * d];
            for (c, gc) in inner.iter().enumerate() {
                if gc.is_zero() {
                    continue;
                }
                outer[i - 1] = c;
                for (o, fv) in target.iter_mut().zip(self.on_basis(&outer)) {
                    if !fv.is_zero() {
                        *o += gc * fv;
                    }
                }
            }
        }
        out
    }

    /// Signed partial composition `f ∘_i g`.
    pub fn compose_at(&self, i: usize, g: &HochCochain) -> HochCochain {
        let c = self.insert_unsigned(i, g);
        if composition_sign(i, g.level) < 0 {
            c.neg()
        } else {
            c
        }
    }

    /// `f{g_1, .., g_k}`: sum over order-preserving insertions into distinct inputs.
    pub fn brace(&self, args: &[HochCochain]) -> HochCochain {
        let d = self.dim;
        let k = args.len();
        let level = (self.level + args.iter().map(|g| g.level).sum::<usize>()).saturating_sub(k);
        if k == 0 {
            return self.clone();
        }
        let mut acc = Self::zero(d, level);
        if k > self.level {
            return acc;
        }
        for slots in increasing_tuples(self.level, k) {
            // Insert from the right so earlier slot indices stay valid.
            let mut term = self.clone();
            for (j, g) in args.iter().enumerate().rev() {
                term = term.insert_unsigned(slots[j], g);
            }
            let mut e = 0i64;
            let mut before = 0usize;
            let mut prev = 0usize;
            for (j, g) in args.iter().enumerate() {
                before += slots[j] - 1 - prev;
                e += (g.level as i64 - 1) * before as i64;
                before += g.level;
                prev = slots[j];
            }
            acc = if parity_sign(e) < 0 { acc.sub(&term) } else { acc.add(&term) };
        }
        acc
    }

    pub fn gerstenhaber_bracket(&self, g: &HochCochain) -> HochCochain {
        let fg = self.brace(std::slice::from_ref(g));
        let gf = g.brace(std::slice::from_ref(self));
        if bracket_sign(self.level, g.level) < 0 {
            fg.add(&gf)
        } else {
            fg.sub(&gf)
        }
    }

    /// `(f ∪ g)(a_1, .., a_{p+q}) = f(a_1, .., a_p) g(a_{p+1}, .., a_{p+q})`.
    pub fn cup(&self, g: &HochCochain, alg: &Algebra) -> HochCochain {
        let (p, qn) = (self.level, g.level);
        Self::from_fn(self.dim, p + qn, |inputs| alg.mul(self.on_basis(&inputs[..p]), g.on_basis(&inputs[p..])))
    }
}

/// Strictly increasing `k`-tuples from `1..=n`.
pub(crate) fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in start..=n {
            cur.push(s);
            go(s + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// `(bf)(a_1, .., a_{n+1}) = a_1 f(a_2, ..) + Σ (-1)^i f(.., a_i a_{i+1}, ..) + (-1)^{n+1} f(a_1, .., a_n) a_{n+1}`.
pub fn hochschild_differential(alg: &Algebra, f: &HochCochain) -> HochCochain {
    let d = alg.dim();
    let n = f.level();
    HochCochain::from_fn(d, n + 1, |a| {
        let mut out = alg.mul(&alg.basis_vector(a[0]), f.on_basis(&a[1..]));
        for i in 1..=n {
            let prod = alg.mul_basis(a[i - 1], a[i]);
            let mut merged: Vec<usize> = a[..i - 1].to_vec();
            merged.push(0);
            merged.extend_from_slice(&a[i + 1..]);
            let sign = q(parity_sign(i as i64));
            for (m, c) in prod.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                merged[i - 1] = m;
                for (o, v) in out.iter_mut().zip(f.on_basis(&merged)) {
                    *o += &sign * c * v;
                }
            }
        }
        let last = alg.mul(f.on_basis(&a[..n]), &alg.basis_vector(a[n]));
        let sign = q(parity_sign(n as i64 + 1));
        for (o, v) in out.iter_mut().zip(last) {
            *o += &sign * v;
        }
        out
    })
}

/// Basis of level-`n` cochains used by the complex: all tuples, or only those avoiding
/// the unit `e_0` among the inputs (normalized). Returns flat value indices.
pub fn cochain_basis(dim: usize, level: usize, normalized: bool) -> Vec<usize> {
    (0..dim.pow(level as u32 + 1))
        .filter(|&idx| !normalized || digits(idx / dim, dim, level).iter().all(|&i| i != 0))
        .collect()
}

/// Matrix of `b: C^n -> C^{n+1}` in the chosen bases. Normalized bases need a unit-first
/// algebra.
pub fn hochschild_matrix(alg: &Algebra, n: usize, normalized: bool) -> Result<QMatrix> {
    if normalized && !alg.is_unit_first() {
        return Err(Error::Algebra("normalized cochains need the unit as the first basis vector".into()));
    }
    let d = alg.dim();
    let src = cochain_basis(d, n, normalized);
    let tgt = cochain_basis(d, n + 1, normalized);
    let tgt_pos: std::collections::HashMap<usize, usize> = tgt.iter().enumerate().map(|(r, &i)| (i, r)).collect();
    let src_pos: std::collections::HashMap<usize, usize> = src.iter().enumerate().map(|(c, &i)| (i, c)).collect();
    let mut m = QMatrix::zeros(tgt.len(), src.len());
    let mut add = |row_idx: usize, col_idx: usize, v: &Rational| {
        if let (Some(&r), Some(&c)) = (tgt_pos.get(&row_idx), src_pos.get(&col_idx)) {
            m.add_at(r, c, v);
        }
    };
    for t in 0..d.pow(n as u32 + 1) {
        let a = digits(t, d, n + 1);
        if normalized && a.contains(&0) {
            continue;
        }
        // a_1 f(a_2, ..)
        let tail = undigits(&a[1..], d);
        for o in 0..d {
            for (k, c) in alg.mul_basis(a[0], o).iter().enumerate() {
                if !c.is_zero() {
                    add(t * d + k, tail * d + o, c);
                }
            }
        }
        for i in 1..=n {
            let sign = q(parity_sign(i as i64));
            for (mm, c) in alg.mul_basis(a[i - 1], a[i]).iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut merged: Vec<usize> = a[..i - 1].to_vec();
                merged.push(mm);
                merged.extend_from_slice(&a[i + 1..]);
                let col = undigits(&merged, d);
                for k in 0..d {
                    add(t * d + k, col * d + k, &(&sign * c));
                }
            }
        }
        let head = undigits(&a[..n], d);
        let sign = q(parity_sign(n as i64 + 1));
        for o in 0..d {
            for (k, c) in alg.mul_basis(o, a[n]).iter().enumerate() {
                if !c.is_zero() {
                    add(t * d + k, head * d + o, &(&sign * c));
                }
            }
        }
    }
    Ok(m)
}

/// `dim HH^n(A, A)` for `0 <= n <= n_max`, computed on normalized cochains.
pub fn hochschild_cohomology(alg: &Algebra, n_max: usize) -> Result<Vec<usize>> {
    let (a, _) = if alg.is_unit_first() { (alg.clone(), QMatrix::identity(alg.dim())) } else { alg.unit_first()? };
    let mut ranks = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        ranks.push(hochschild_matrix(&a, n, true)?.rank());
    }
    Ok((0..=n_max)
        .map(|n| {
            let dim = cochain_basis(a.dim(), n, true).len();
            dim - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 }
        })
        .collect())
}

/// The Hochschild complex on levels `0..=top` as a dg module (the last differential is
/// dropped, so cohomology at `top` is not meaningful).
pub fn hochschild_complex(alg: &Algebra, top: usize, normalized: bool) -> Result<crate::dg::DGModule> {
    let a = if normalized && !alg.is_unit_first() { alg.unit_first()?.0 } else { alg.clone() };
    let dims: Vec<usize> = (0..=top).map(|n| cochain_basis(a.dim(), n, normalized).len()).collect();
    let diffs = (0..top).map(|n| hochschild_matrix(&a, n, normalized)).collect::<Result<Vec<_>>>()?;
    crate::dg::DGModule::from_differentials(0, &dims, &diffs)
}
