//! Order-by-order lifting of operad maps into endomorphism operads.
//!
//! A map `Φ = Σ_k t^k Φ_k` from a quasi-free presentation is built one weight at a time.
//! At weight `K` the images `Φ_K` enter the relations `Φ(d g) = 0` only linearly, through
//! the derivation differential `D` at `β = Φ_0`, so the step reduces to `D Φ_K = θ` where
//! `θ` is the weight-`K` relation evaluated with `Φ_K` set to zero.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use crate::dg::{cone, DGModule, GradedMap};
use crate::error::{Error, Result};
use crate::hochschild::{CurvedMC, CyclicCochain, HochCochain};
use crate::linalg::{format_rational, is_zero_vec, QMatrix, Rational};
use crate::operads::{check_operad_map, linearize, Generator, Image, Linearization, OperadMap, QuasiFreePresentation};

/// A presentation, a target, and a weight-zero operad map `β₀` to be deformed. Images at
/// positive weights may be prescribed; the solver never changes them.
#[derive(Clone, Debug)]
pub struct LiftingProblem {
    pres: QuasiFreePresentation,
    beta0: OperadMap,
    prescribed: OperadMap,
    max_weight: usize,
    lin: Linearization,
    /// Rows where `D θ` only involves generators whose relations were solved.
    closed: Vec<usize>,
    /// Invariant functionals per cyclic level, as columns.
    invariants: BTreeMap<usize, QMatrix>,
}

/// `Φ` with weights `≤ stage`; the relations hold through weight `stage`.
#[derive(Clone, Debug)]
pub struct PartialLift {
    map: OperadMap,
    stage: usize,
}

impl PartialLift {
    pub fn map(&self) -> &OperadMap {
        &self.map
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    /// Reads the noncyclic images as a filtered Maurer-Cartan element, one component per
    /// arity. Fails if two noncyclic generators share an arity.
    pub fn curved_mc(&self, pres: &QuasiFreePresentation) -> Result<CurvedMC> {
        let d = self.map.target().algebra().dim();
        let mut comps = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for (g, gen) in pres.generators().iter().enumerate() {
            if gen.cyclic {
                continue;
            }
            if !seen.insert(gen.arity) {
                return Err(Error::Presentation(format!("two noncyclic generators of arity {}", gen.arity)));
            }
            for k in 0..=self.stage {
                if let Some(Image::Noncyc(f)) = self.map.get(g, k) {
                    comps.insert((gen.arity, k), f.clone());
                }
            }
        }
        CurvedMC::new(d, comps)
    }
}

/// The weight-`weight` relations of a partial lift, one block per row generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Defect {
    weight: usize,
    values: Vec<Rational>,
}

impl Defect {
    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.values)
    }

    /// A copy with one coordinate changed; for negative tests of [`LiftingProblem::verify_cocycle`].
    pub fn perturbed(&self, coord: usize, by: &Rational) -> Defect {
        let mut values = self.values.clone();
        values[coord] += by;
        Defect { weight: self.weight, values }
    }
}

/// Outcome of one step. `class` pairs `θ` with a basis of functionals vanishing on the image
/// of `D`; it is zero exactly when the step is solvable. `certificate` is such a functional
/// with nonzero value on `θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub weight: usize,
    pub residuals: Vec<(String, Image)>,
    pub class: Vec<Rational>,
    pub solvable: bool,
    pub correction: Vec<(String, Image)>,
    pub certificate: Option<Vec<Rational>>,
}

#[derive(Clone, Debug)]
pub enum Step {
    Lifted { lift: PartialLift, report: ObstructionReport },
    Obstructed(ObstructionReport),
}

#[derive(Serialize)]
struct ImageJson<'a> {
    generator: &'a str,
    kind: &'static str,
    values: Vec<String>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    weight: usize,
    solvable: bool,
    class: Vec<String>,
    certificate: Option<Vec<String>>,
    residuals: Vec<ImageJson<'a>>,
    correction: Vec<ImageJson<'a>>,
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn image_json(items: &[(String, Image)]) -> Vec<ImageJson<'_>> {
    items
        .iter()
        .map(|(name, img)| ImageJson {
            generator: name,
            kind: if matches!(img, Image::Cyc(_)) { "cyclic" } else { "noncyclic" },
            values: strings(img.values()),
        })
        .collect()
}

impl ObstructionReport {
    /// Deterministic JSON, rationals as `"p/q"` strings.
    pub fn to_json(&self) -> String {
        let r = ReportJson {
            weight: self.weight,
            solvable: self.solvable,
            class: strings(&self.class),
            certificate: self.certificate.as_deref().map(strings),
            residuals: image_json(&self.residuals),
            correction: image_json(&self.correction),
        };
        serde_json::to_string_pretty(&r).expect("report serializes")
    }
}

fn admissible(gen: &Generator) -> bool {
    // Ungraded targets: noncyclic values have sign-degree `n - 1`, functionals degree one.
    gen.degree.rem_euclid(2) == i64::from(gen.cyclic)
}

fn invariant_functionals(d: usize, n: usize) -> Result<QMatrix> {
    let dim = d.pow(n as u32 + 1);
    let mut cols = Vec::with_capacity(dim);
    for b in 0..dim {
        let mut v = vec![Rational::zero(); dim];
        v[b] = Rational::from_integer(1.into());
        let lam = CyclicCochain::new(d, n, v.clone())?.lambda();
        cols.push(lam.values().iter().zip(&v).map(|(a, e)| a - e).collect::<Vec<_>>());
    }
    Ok(QMatrix::from_columns(dim, &cols).kernel_basis().as_columns())
}

impl LiftingProblem {
    /// `beta0` must carry weight-zero images only and satisfy the weight-zero relations.
    pub fn new(pres: QuasiFreePresentation, beta0: OperadMap) -> Result<Self> {
        if let Some((&(g, k), _)) = beta0.images().find(|(&(_, k), _)| k > 0) {
            return Err(Error::Degree(format!("{} has a weight-{k} image in β₀", pres.generators()[g].name)));
        }
        if let Some(f) = check_operad_map(&pres, &beta0, 0)?.first_failure() {
            return Err(Error::NotAnOperadMap(f.generator.clone()));
        }
        let top = pres.window().max_arity;
        let traced = beta0.target().has_cyclic_part();
        let in_window = |g: &Generator| g.arity <= top && (traced || !g.cyclic);
        let lin = linearize(&pres, &beta0, &in_window, &in_window)?;
        let gens = pres.generators();
        let closed = lin
            .rows
            .iter()
            .enumerate()
            .filter(|(_, s)| s.degree.rem_euclid(2) == 0)
            .filter(|(_, s)| {
                let g = s.generator;
                let mut vertices: Vec<usize> = Vec::new();
                if gens[g].cyclic {
                    for (x, _) in pres.d_generator_cyc(g).terms() {
                        vertices.extend(x.tree.decoration());
                    }
                } else {
                    for (t, _) in pres.d_generator(g).terms() {
                        vertices.extend(t.decoration());
                    }
                }
                vertices.iter().all(|&u| in_window(&gens[u]))
            })
            .map(|(i, _)| i)
            .collect();
        let d = beta0.target().algebra().dim();
        let mut invariants = BTreeMap::new();
        for s in &lin.cols {
            let gen = &gens[s.generator];
            if gen.cyclic && !invariants.contains_key(&gen.arity) {
                invariants.insert(gen.arity, invariant_functionals(d, gen.arity)?);
            }
        }
        let prescribed = OperadMap::new(beta0.target().clone());
        let max_weight = pres.window().max_weight;
        Ok(LiftingProblem { pres, beta0, prescribed, max_weight, lin, closed, invariants })
    }

    /// Fixes `Φ_k(g)` for some `1 ≤ k ≤ max_weight`.
    pub fn prescribe(&mut self, g: usize, k: usize, image: Image) -> Result<()> {
        if k == 0 || k > self.max_weight {
            return Err(Error::Stage { stage: k, window: self.max_weight });
        }
        self.prescribed.set(&self.pres, g, k, image)
    }

    /// Works modulo `t^{w+1}`; at most the presentation's verified weight.
    pub fn with_max_weight(mut self, w: usize) -> Result<Self> {
        if w > self.pres.window().max_weight {
            return Err(Error::Stage { stage: w, window: self.pres.window().max_weight });
        }
        self.max_weight = w;
        Ok(self)
    }

    pub fn presentation(&self) -> &QuasiFreePresentation {
        &self.pres
    }

    pub fn beta0(&self) -> &OperadMap {
        &self.beta0
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    /// The full matrix of `D` on generators in the arity window.
    pub fn derivation_matrix(&self) -> &QMatrix {
        &self.lin.matrix
    }

    /// `β₀` as a stage-zero lift.
    pub fn start(&self) -> PartialLift {
        PartialLift { map: self.beta0.clone(), stage: 0 }
    }

    /// Adds the prescribed weight-`k` images to a copy of `map`.
    fn with_prescribed(&self, map: &OperadMap, k: usize) -> Result<OperadMap> {
        let mut m = map.clone();
        for (&(g, w), img) in self.prescribed.images() {
            if w == k {
                m.set(&self.pres, g, k, img.clone())?;
            }
        }
        Ok(m)
    }

    /// Weight-`(stage + 1)` relations with the unprescribed new images set to zero. Zero at
    /// the top stage.
    pub fn defect(&self, lift: &PartialLift) -> Result<Defect> {
        let k = lift.stage + 1;
        if lift.stage > self.max_weight {
            return Err(Error::Stage { stage: lift.stage, window: self.max_weight });
        }
        let n = self.lin.matrix.rows();
        if lift.stage == self.max_weight {
            return Ok(Defect { weight: k, values: vec![Rational::zero(); n] });
        }
        let map = self.with_prescribed(&lift.map, k)?;
        let mut values = Vec::with_capacity(n);
        for s in &self.lin.rows {
            values.extend(map.residual(&self.pres, s.generator, k)?.values().iter().cloned());
        }
        Ok(Defect { weight: k, values })
    }

    /// `D θ = 0` on every row whose relation only involves solved generators.
    pub fn verify_cocycle(&self, theta: &Defect) -> Result<bool> {
        Ok(self.cocycle_failure(theta)?.is_none())
    }

    fn cocycle_failure(&self, theta: &Defect) -> Result<Option<String>> {
        let image = self.lin.matrix.mul_vec(&theta.values)?;
        for &i in &self.closed {
            let s = &self.lin.rows[i];
            if !is_zero_vec(&image[s.offset..s.offset + s.dim]) {
                return Ok(Some(self.pres.generators()[s.generator].name.clone()));
            }
        }
        Ok(None)
    }

    fn residuals(&self, theta: &Defect) -> Result<Vec<(String, Image)>> {
        let d = self.beta0.target().algebra().dim();
        let mut out = Vec::new();
        for s in &self.lin.rows {
            let v = &theta.values[s.offset..s.offset + s.dim];
            if !is_zero_vec(v) {
                let gen = &self.pres.generators()[s.generator];
                out.push((gen.name.clone(), self.image(d, gen, v.to_vec())?));
            }
        }
        Ok(out)
    }

    fn image(&self, d: usize, gen: &Generator, v: Vec<Rational>) -> Result<Image> {
        Ok(if gen.cyclic {
            Image::Cyc(CyclicCochain::new(d, gen.arity, v)?)
        } else {
            Image::Noncyc(HochCochain::new(d, gen.arity, v)?)
        })
    }

    /// Solves `D Φ = θ` for the weight-`(stage + 1)` images of the unprescribed admissible
    /// generators. Pivoting runs in generator order and free unknowns are set to zero, so
    /// the correction is a basic solution and deterministic. Cyclic unknowns range over
    /// invariant functionals.
    pub fn solve_step(&self, lift: &PartialLift, theta: &Defect) -> Result<Step> {
        let k = theta.weight;
        if k != lift.stage + 1 || lift.stage >= self.max_weight {
            return Err(Error::Stage { stage: lift.stage, window: self.max_weight });
        }
        let gens = self.pres.generators();
        let odd_rows: Vec<usize> = (0..self.lin.rows.len()).filter(|&i| self.lin.rows[i].degree.rem_euclid(2) == 1).collect();
        let unknown: Vec<usize> = (0..self.lin.cols.len())
            .filter(|&i| {
                let g = self.lin.cols[i].generator;
                let gen = &gens[g];
                admissible(gen) && gen.weight <= k && self.prescribed.get(g, k).is_none()
            })
            .collect();
        // Row selection and column parametrization.
        let mut row_of = BTreeMap::new();
        let mut n_rows = 0;
        for &i in &odd_rows {
            let s = &self.lin.rows[i];
            for r in 0..s.dim {
                row_of.insert(s.offset + r, n_rows + r);
            }
            n_rows += s.dim;
        }
        let mut param_cols = Vec::new();
        let mut blocks = Vec::new();
        let mut n_params = 0;
        for &i in &unknown {
            let s = &self.lin.cols[i];
            let gen = &gens[s.generator];
            let basis = if gen.cyclic { self.invariants[&gen.arity].clone() } else { QMatrix::identity(s.dim) };
            blocks.push((i, n_params, basis.clone()));
            param_cols.push((s.offset, n_params, basis.clone()));
            n_params += basis.cols();
        }
        let mut t = QMatrix::zeros(self.lin.matrix.cols(), n_params);
        for (off, p0, basis) in &param_cols {
            for (r, c, v) in basis.entries() {
                t.set(off + r, p0 + c, v.clone());
            }
        }
        let mut sel = QMatrix::zeros(n_rows, self.lin.matrix.rows());
        for (&full, &r) in &row_of {
            sel.set(r, full, Rational::from_integer(1.into()));
        }
        let system = sel.mul(&self.lin.matrix)?.mul(&t)?;
        let rhs: Vec<Rational> = sel.mul_vec(&theta.values)?;
        let residuals = self.residuals(theta)?;
        match system.solve(&rhs)? {
            Some(y) => {
                let d = self.beta0.target().algebra().dim();
                let mut map = self.with_prescribed(&lift.map, k)?;
                let mut correction = Vec::new();
                for (i, p0, basis) in &blocks {
                    let s = &self.lin.cols[*i];
                    let gen = &gens[s.generator];
                    let v = basis.mul_vec(&y[*p0..p0 + basis.cols()])?;
                    if is_zero_vec(&v) {
                        continue;
                    }
                    let img = self.image(d, gen, v)?;
                    map.set(&self.pres, s.generator, k, img.clone())?;
                    correction.push((gen.name.clone(), img));
                }
                if let Some(f) = check_operad_map(&self.pres, &map, k)?.first_failure() {
                    return Err(Error::NotAnOperadMap(f.generator.clone()));
                }
                let report = ObstructionReport {
                    weight: k,
                    residuals,
                    class: Vec::new(),
                    solvable: true,
                    correction,
                    certificate: None,
                };
                Ok(Step::Lifted { lift: PartialLift { map, stage: k }, report })
            }
            None => {
                let coker = system.transpose().kernel_basis().dense_basis();
                let dot = |y: &[Rational]| y.iter().zip(&rhs).fold(Rational::zero(), |acc, (a, b)| acc + a * b);
                let class: Vec<Rational> = coker.iter().map(|y| dot(y)).collect();
                let certificate = coker.iter().find(|y| !dot(y).is_zero()).map(|y| {
                    let mut full = vec![Rational::zero(); self.lin.matrix.rows()];
                    for (&f, &r) in &row_of {
                        full[f] = y[r].clone();
                    }
                    full
                });
                Ok(Step::Obstructed(ObstructionReport {
                    weight: k,
                    residuals,
                    class,
                    solvable: false,
                    correction: Vec::new(),
                    certificate,
                }))
            }
        }
    }

    /// One defect, check and solve. A defect that fails the cocycle check is an upstream
    /// inconsistency and aborts.
    pub fn advance(&self, lift: &PartialLift) -> Result<Step> {
        let theta = self.defect(lift)?;
        if let Some(g) = self.cocycle_failure(&theta)? {
            return Err(Error::NotACocycle(g));
        }
        self.solve_step(lift, &theta)
    }

    /// Lifts `β₀` through weight `k_max`, stopping at the first obstruction.
    pub fn lift(&self, k_max: usize) -> Result<std::result::Result<PartialLift, ObstructionReport>> {
        if k_max > self.max_weight {
            return Err(Error::Stage { stage: k_max, window: self.max_weight });
        }
        let mut cur = self.start();
        while cur.stage < k_max {
            match self.advance(&cur)? {
                Step::Lifted { lift, .. } => cur = lift,
                Step::Obstructed(r) => return Ok(Err(r)),
            }
        }
        Ok(Ok(cur))
    }
}

/// Acyclicity of the cone of a comparison map between derivation complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityReport {
    pub acyclic: bool,
    pub cone_homology: BTreeMap<i64, usize>,
}

pub fn rigidity_check(a: &DGModule, b: &DGModule, f: &GradedMap) -> Result<RigidityReport> {
    let c = cone(a, b, f)?;
    let cone_homology = c.homology();
    Ok(RigidityReport { acyclic: cone_homology.is_empty(), cone_homology })
}
