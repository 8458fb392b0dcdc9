//! JSON file formats for algebras and lifting problems. Rationals are `"p/q"` strings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hochschild::{Algebra, CyclicCochain, HochCochain, TracedAlgebra};
use crate::lifting::LiftingProblem;
use crate::linalg::{format_rational, parse_rational, Rational};
use crate::operads::{EndomorphismOperad, Image, OperadMap, PresentationFile, QuasiFreePresentation};

/// `{"dim": n, "unit": [..], "mult": [[..], ..], "trace": [..]}`. `mult` has `n²` rows in
/// row-major order of `(i, j)`, row `i n + j` holding the coordinates of `e_i e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub dim: usize,
    pub unit: Vec<String>,
    pub mult: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

fn parse_all(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn format_all(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn parse_json<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

impl AlgebraFile {
    pub fn from_algebra(a: &Algebra, trace: Option<&[Rational]>) -> Self {
        let d = a.dim();
        AlgebraFile {
            dim: d,
            unit: format_all(a.unit()),
            mult: a.structure_constants().chunks(d.max(1)).map(format_all).collect(),
            trace: trace.map(format_all),
            labels: Some(a.labels().to_vec()),
        }
    }

    pub fn algebra(&self) -> Result<Algebra> {
        let raw = self.product()?;
        Algebra::new(self.dim, raw.structure_constants().to_vec(), raw.unit().to_vec(), self.labels.clone())
    }

    /// The bilinear product without the associativity and unit checks, for verifying
    /// Maurer-Cartan equations on arbitrary products.
    pub fn product(&self) -> Result<Algebra> {
        let d = self.dim;
        if self.mult.len() != d * d || self.mult.iter().any(|r| r.len() != d) || self.unit.len() != d {
            return Err(Error::Parse(format!("mult needs {} rows of length {d}", d * d)));
        }
        let mut flat = Vec::with_capacity(d * d * d);
        for row in &self.mult {
            flat.extend(parse_all(row)?);
        }
        Ok(Algebra::new_unchecked(d, flat, parse_all(&self.unit)?))
    }

    pub fn trace(&self) -> Result<Option<Vec<Rational>>> {
        self.trace.as_deref().map(parse_all).transpose()
    }

    pub fn traced(&self) -> Result<Option<TracedAlgebra>> {
        match self.trace()? {
            Some(t) => Ok(Some(TracedAlgebra::new(self.algebra()?, t)?)),
            None => Ok(None),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        parse_json(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// One image `Φ_weight(generator)`; `values` in the flat cochain order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageFile {
    pub generator: String,
    pub weight: usize,
    pub values: Vec<String>,
}

/// A lifting problem: presentation, target algebra (with optional trace), `β₀`, prescribed
/// images and the weight to lift to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftingProblemFile {
    pub presentation: PresentationFile,
    pub algebra: AlgebraFile,
    pub beta: Vec<ImageFile>,
    #[serde(default)]
    pub prescribed: Vec<ImageFile>,
    pub lift_to: usize,
}

fn image_of(pres: &QuasiFreePresentation, dim: usize, f: &ImageFile) -> Result<(usize, Image)> {
    let g = pres.generator_index(&f.generator).ok_or_else(|| Error::Parse(format!("unknown generator {}", f.generator)))?;
    let gen = &pres.generators()[g];
    let v = parse_all(&f.values)?;
    let img = if gen.cyclic {
        Image::Cyc(CyclicCochain::new(dim, gen.arity, v)?)
    } else {
        Image::Noncyc(HochCochain::new(dim, gen.arity, v)?)
    };
    Ok((g, img))
}

impl ImageFile {
    pub fn new(generator: &str, weight: usize, values: &[Rational]) -> Self {
        ImageFile { generator: generator.to_string(), weight, values: format_all(values) }
    }
}

impl LiftingProblemFile {
    pub fn from_json(s: &str) -> Result<Self> {
        parse_json(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn problem(&self) -> Result<LiftingProblem> {
        let pres = QuasiFreePresentation::from_file(&self.presentation)?;
        let alg = self.algebra.algebra()?;
        let target = EndomorphismOperad::new(alg.clone(), self.algebra.trace()?)?;
        let mut beta = OperadMap::new(target);
        for f in &self.beta {
            let (g, img) = image_of(&pres, alg.dim(), f)?;
            beta.set(&pres, g, f.weight, img)?;
        }
        let mut p = LiftingProblem::new(pres, beta)?;
        for f in &self.prescribed {
            let (g, img) = image_of(p.presentation(), alg.dim(), f)?;
            p.prescribe(g, f.weight, img)?;
        }
        Ok(p)
    }
}
