use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{q, QMatrix, Rational};

/// Finite-dimensional associative unital algebra given by structure constants
/// `e_i e_j = Σ_k c_{ij}^k e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    dim: usize,
    labels: Vec<String>,
    /// `c[(i * dim + j) * dim + k]`
    mult: Vec<Rational>,
    unit: Vec<Rational>,
}

impl Algebra {
    /// Validates associativity and the two-sided unit law on basis elements.
    pub fn new(dim: usize, mult: Vec<Rational>, unit: Vec<Rational>, labels: Option<Vec<String>>) -> Result<Self> {
        if mult.len() != dim * dim * dim || unit.len() != dim {
            return Err(Error::Dimension(format!(
                "algebra of dimension {dim} needs {} structure constants and a unit of length {dim}",
                dim * dim * dim
            )));
        }
        let labels = labels.unwrap_or_else(|| (0..dim).map(|i| format!("e{i}")).collect());
        if labels.len() != dim {
            return Err(Error::Dimension("label count differs from dimension".into()));
        }
        let a = Algebra { dim, labels, mult, unit };
        a.check_unit()?;
        a.check_associative()?;
        Ok(a)
    }

    /// Same as [`new`](Self::new) but without the associativity check; for negative tests and
    /// raw products that are only used as bilinear maps.
    pub fn new_unchecked(dim: usize, mult: Vec<Rational>, unit: Vec<Rational>) -> Self {
        Algebra { dim, labels: (0..dim).map(|i| format!("e{i}")).collect(), mult, unit }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[Rational] {
        &self.unit
    }

    pub fn structure_constants(&self) -> &[Rational] {
        &self.mult
    }

    /// `e_i e_j` as a coefficient slice.
    pub fn mul_basis(&self, i: usize, j: usize) -> &[Rational] {
        let start = (i * self.dim + j) * self.dim;
        &self.mult[start..start + self.dim]
    }

    pub fn mul(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let xy = x * y;
                for (k, c) in self.mul_basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &xy * c;
                    }
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = Rational::one();
        v
    }

    fn check_unit(&self) -> Result<()> {
        for i in 0..self.dim {
            let e = self.basis_vector(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(Error::Algebra(format!("unit law fails on basis element {}", self.labels[i])));
            }
        }
        Ok(())
    }

    fn check_associative(&self) -> Result<()> {
        if let Some((i, j, k)) = self.associator_witness() {
            return Err(Error::Algebra(format!(
                "associativity fails on ({}, {}, {})",
                self.labels[i], self.labels[j], self.labels[k]
            )));
        }
        Ok(())
    }

    /// First basis triple with `(e_i e_j) e_k != e_i (e_j e_k)`.
    pub fn associator_witness(&self) -> Option<(usize, usize, usize)> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.mul_basis(i, j).to_vec();
                for k in 0..self.dim {
                    let left = self.mul(&ij, &self.basis_vector(k));
                    let right = self.mul(&self.basis_vector(i), self.mul_basis(j, k));
                    if left != right {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// Algebra in the basis given by the columns of `p` (invertible).
    pub fn change_basis(&self, p: &QMatrix) -> Result<Algebra> {
        let d = self.dim;
        if p.rows() != d || p.cols() != d || p.rank() != d {
            return Err(Error::Dimension("change of basis must be an invertible square matrix".into()));
        }
        let cols: Vec<Vec<Rational>> = (0..d).map(|j| (0..d).map(|i| p.get(i, j)).collect()).collect();
        let mut mult = Vec::with_capacity(d * d * d);
        for a in &cols {
            for b in &cols {
                let prod = self.mul(a, b);
                let coords = p.solve(&prod)?.expect("invertible");
                mult.extend(coords);
            }
        }
        let unit = p.solve(&self.unit)?.expect("invertible");
        Algebra::new(d, mult, unit, None)
    }

    /// Equivalent algebra whose unit is the basis vector `e_0`, with the basis change used.
    pub fn unit_first(&self) -> Result<(Algebra, QMatrix)> {
        let d = self.dim;
        let pivot = self
            .unit
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| Error::Algebra("zero unit".into()))?;
        let mut p = QMatrix::zeros(d, d);
        for (i, c) in self.unit.iter().enumerate() {
            p.set(i, 0, c.clone());
        }
        let mut col = 1;
        for i in (0..d).filter(|&i| i != pivot) {
            p.set(i, col, Rational::one());
            col += 1;
        }
        let a = self.change_basis(&p)?;
        Ok((a, p))
    }

    pub fn is_unit_first(&self) -> bool {
        self.unit.first().is_some_and(|c| c.is_one()) && self.unit.iter().skip(1).all(Zero::is_zero)
    }

    // ---- standard examples ----

    pub fn ground_field() -> Self {
        Algebra::new(1, vec![q(1)], vec![q(1)], Some(vec!["1".into()])).expect("valid")
    }

    /// `Q[x]/x^n` with basis `1, x, ..., x^{n-1}`.
    pub fn truncated_polynomial(n: usize) -> Self {
        let mut mult = vec![q(0); n * n * n];
        for i in 0..n {
            for j in 0..n {
                if i + j < n {
                    mult[(i * n + j) * n + i + j] = q(1);
                }
            }
        }
        let mut unit = vec![q(0); n];
        unit[0] = q(1);
        let labels = (0..n).map(|i| if i == 0 { "1".to_string() } else { format!("x^{i}") }).collect();
        Algebra::new(n, mult, unit, Some(labels)).expect("valid")
    }

    /// `Q[x]/x^2`.
    pub fn dual_numbers() -> Self {
        Self::truncated_polynomial(2)
    }

    /// `n x n` matrices with basis `E_{ij}` (row-major).
    pub fn matrix_algebra(n: usize) -> Self {
        let d = n * n;
        let mut mult = vec![q(0); d * d * d];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    // E_ij E_jl = E_il
                    let a = i * n + j;
                    let b = j * n + l;
                    mult[(a * d + b) * d + i * n + l] = q(1);
                }
            }
        }
        let mut unit = vec![q(0); d];
        for i in 0..n {
            unit[i * n + i] = q(1);
        }
        let labels = (0..n).flat_map(|i| (0..n).map(move |j| format!("E{i}{j}"))).collect();
        Algebra::new(d, mult, unit, Some(labels)).expect("valid")
    }

    /// Monomial algebra on commuting variables with the given exponent bounds: basis
    /// `x^a` with `a_i < bounds[i]`, and products vanishing once total degree exceeds
    /// `max_total` (use `usize::MAX` for no bound).
    pub fn monomial(bounds: &[usize], max_total: usize) -> Self {
        let mut monos: Vec<Vec<usize>> = vec![vec![]];
        for &b in bounds {
            monos = monos
                .into_iter()
                .flat_map(|m| {
                    (0..b).map(move |e| {
                        let mut m = m.clone();
                        m.push(e);
                        m
                    })
                })
                .collect();
        }
        monos.retain(|m| m.iter().sum::<usize>() <= max_total);
        monos.sort_by_key(|m| (m.iter().sum::<usize>(), m.iter().map(|&e| usize::MAX - e).collect::<Vec<_>>()));
        let d = monos.len();
        let mut mult = vec![q(0); d * d * d];
        for (i, a) in monos.iter().enumerate() {
            for (j, b) in monos.iter().enumerate() {
                let c: Vec<usize> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if let Some(k) = monos.iter().position(|m| *m == c) {
                    mult[(i * d + j) * d + k] = q(1);
                }
            }
        }
        let mut unit = vec![q(0); d];
        unit[0] = q(1);
        let labels = monos
            .iter()
            .map(|m| {
                let parts: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| if e == 1 { format!("x{v}") } else { format!("x{v}^{e}") })
                    .collect();
                if parts.is_empty() {
                    "1".into()
                } else {
                    parts.join("")
                }
            })
            .collect();
        Algebra::new(d, mult, unit, Some(labels)).expect("valid")
    }

    /// Group algebra of the cyclic group of order `n`.
    pub fn cyclic_group(n: usize) -> Self {
        let mut mult = vec![q(0); n * n * n];
        for i in 0..n {
            for j in 0..n {
                mult[(i * n + j) * n + (i + j) % n] = q(1);
            }
        }
        let mut unit = vec![q(0); n];
        unit[0] = q(1);
        Algebra::new(n, mult, unit, Some((0..n).map(|i| format!("g{i}")).collect())).expect("valid")
    }
}

/// Algebra with a trace: `tr(ab) = tr(ba)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracedAlgebra {
    pub algebra: Algebra,
    trace: Vec<Rational>,
}

impl TracedAlgebra {
    pub fn new(algebra: Algebra, trace: Vec<Rational>) -> Result<Self> {
        let d = algebra.dim();
        if trace.len() != d {
            return Err(Error::Dimension(format!("trace of length {} on algebra of dimension {d}", trace.len())));
        }
        for i in 0..d {
            for j in 0..d {
                let ij = dot(&trace, algebra.mul_basis(i, j));
                let ji = dot(&trace, algebra.mul_basis(j, i));
                if ij != ji {
                    return Err(Error::Algebra(format!(
                        "trace is not cyclic on ({}, {})",
                        algebra.labels()[i],
                        algebra.labels()[j]
                    )));
                }
            }
        }
        Ok(TracedAlgebra { algebra, trace })
    }

    pub fn trace(&self) -> &[Rational] {
        &self.trace
    }

    pub fn tr(&self, a: &[Rational]) -> Rational {
        dot(&self.trace, a)
    }

    pub fn is_zero_trace(&self) -> bool {
        self.trace.iter().all(Zero::is_zero)
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}
