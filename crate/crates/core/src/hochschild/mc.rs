use std::collections::BTreeMap;

use super::algebra::Algebra;
use super::cochain::HochCochain;
use crate::error::{Error, Result};

/// Filtered Maurer-Cartan data `M = Σ M_n^k` on an ungraded algebra: `M_n^k` has `n`
/// inputs and filtration weight `k`. Only even `n` carry the right parity, and in weight
/// zero only the product `M_2^0` may be present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvedMC {
    dim: usize,
    components: BTreeMap<(usize, usize), HochCochain>,
}

/// A violated equation: the level-`n`, weight-`k` part of `M{M}` is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McFailure {
    pub n: usize,
    pub k: usize,
    pub residual: HochCochain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McReport {
    /// Ordered by weight, then level.
    pub failures: Vec<McFailure>,
}

impl McReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<(usize, usize)> {
        self.failures.first().map(|f| (f.n, f.k))
    }
}

impl CurvedMC {
    pub fn new(dim: usize, components: BTreeMap<(usize, usize), HochCochain>) -> Result<Self> {
        for (&(n, k), c) in &components {
            if c.dim() != dim || c.level() != n {
                return Err(Error::Dimension(format!("component ({n}, {k}) has the wrong shape")));
            }
            if n % 2 == 1 {
                return Err(Error::Dimension(format!("component ({n}, {k}) has odd arity")));
            }
            if k == 0 && n != 2 {
                return Err(Error::Dimension(format!("weight-zero component at arity {n}")));
            }
        }
        Ok(CurvedMC { dim, components })
    }

    /// The undeformed product.
    pub fn from_algebra(alg: &Algebra) -> Self {
        let mut components = BTreeMap::new();
        components.insert((2, 0), HochCochain::multiplication(alg));
        CurvedMC { dim: alg.dim(), components }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, n: usize, k: usize) -> Option<&HochCochain> {
        self.components.get(&(n, k))
    }

    pub fn components(&self) -> &BTreeMap<(usize, usize), HochCochain> {
        &self.components
    }

    /// Adds (or replaces) a positive-weight component.
    pub fn with_component(mut self, n: usize, k: usize, c: HochCochain) -> Result<Self> {
        self.components.insert((n, k), c);
        Self::new(self.dim, self.components)
    }

    /// The level-`n`, weight-`k` part of `M{M}`.
    pub fn residual(&self, n: usize, k: usize) -> HochCochain {
        let mut acc = HochCochain::zero(self.dim, n);
        for (&(m, l), f) in self.components.range(..) {
            if l > k || m == 0 || m > n + 1 {
                continue;
            }
            if let Some(g) = self.components.get(&(n + 1 - m, k - l)) {
                acc = acc.add(&f.brace(std::slice::from_ref(g)));
            }
        }
        acc
    }
}

/// Checks the Maurer-Cartan equation for every odd level `n <= n_max` and weight `k <= k_max`.
pub fn check_curved_mc(m: &CurvedMC, n_max: usize, k_max: usize) -> McReport {
    let mut failures = Vec::new();
    for k in 0..=k_max {
        for n in (1..=n_max).step_by(2) {
            let residual = m.residual(n, k);
            if !residual.is_zero() {
                failures.push(McFailure { n, k, residual });
            }
        }
    }
    McReport { failures }
}
