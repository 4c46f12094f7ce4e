//! JSON input formats.
//!
//! Coefficients are strings such as `"1/2"`, `"q"` or `"(q+1)/q"`. Structural
//! errors come back with serde's line and column; coefficient errors name the
//! offending field.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ainf::{AInfCategory, CyTrace, Generator};
use crate::algebra::{FiniteAlgebra, HochschildCochain};
use crate::deform::FirstOrderDeformation;
use crate::diagram::{AlgebraDiagram, Poset};
use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, SparseVec};
use crate::scalar::Scalar;

pub use crate::cech::{parse_cech, CechSpec};

fn coeff(s: &str, field: impl FnOnce() -> String) -> Result<Scalar> {
    Scalar::parse(s).map_err(|e| Error::Parse(format!("{}: {e}", field())))
}

fn vector(v: &[String], field: &str) -> Result<Vec<Scalar>> {
    v.iter().enumerate().map(|(i, s)| coeff(s, || format!("{field}[{i}]"))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Base {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "Q(q)")]
    RationalFunctions,
}

/// `{ "base", "basis", "degrees", "unit", "mul" }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub base: Base,
    pub basis: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<i64>>,
    pub unit: Vec<String>,
    pub mul: Vec<Vec<Vec<String>>>,
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<FiniteAlgebra> {
        let n = self.basis.len();
        if self.unit.len() != n {
            return Err(Error::Parse(format!("unit: expected {n} coefficients, found {}", self.unit.len())));
        }
        if self.mul.len() != n {
            return Err(Error::Parse(format!("mul: expected {n} rows, found {}", self.mul.len())));
        }
        let unit = vector(&self.unit, "unit")?;
        let mut mul = Vec::with_capacity(n);
        for (i, row) in self.mul.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse(format!("mul[{i}]: expected {n} entries, found {}", row.len())));
            }
            let mut r = Vec::with_capacity(n);
            for (j, v) in row.iter().enumerate() {
                if v.len() != n {
                    return Err(Error::Parse(format!("mul[{i}][{j}]: expected {n} coefficients, found {}", v.len())));
                }
                r.push(vector(v, &format!("mul[{i}][{j}]"))?);
            }
            mul.push(r);
        }
        if self.base == Base::Rationals {
            let all = unit.iter().chain(mul.iter().flatten().flatten());
            if let Some(c) = all.into_iter().find(|c| !c.is_rational()) {
                return Err(Error::Parse(format!("coefficient {c} depends on q but the base is Q")));
            }
        }
        if let Some(d) = &self.degrees {
            if d.len() != n {
                return Err(Error::Parse(format!("degrees: expected {n} entries, found {}", d.len())));
            }
        }
        FiniteAlgebra::new(self.basis.clone(), self.degrees.clone(), unit, mul)
    }

    pub fn from_algebra(a: &FiniteAlgebra) -> Self {
        let n = a.dim();
        let dense = |v: &SparseVec| v.to_dense(n).iter().map(|c| c.to_string()).collect::<Vec<_>>();
        let rational = a.unit().entries().iter().map(|(_, c)| c).chain(a.table().iter().flatten().flat_map(|v| v.entries().iter().map(|(_, c)| c))).all(Scalar::is_rational);
        AlgebraSpec {
            base: if rational { Base::Rationals } else { Base::RationalFunctions },
            basis: a.labels().to_vec(),
            degrees: a.degrees().map(<[i64]>::to_vec),
            unit: dense(a.unit()),
            mul: a.table().iter().map(|row| row.iter().map(dense).collect()).collect(),
        }
    }
}

pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra> {
    serde_json::from_str::<AlgebraSpec>(text)?.build()
}

/// An algebra block plus `"corrections"`: entries `[i, j, k, [c_0, .., c_{n-1}]]`
/// meaning the `ε_k` part of `e_i e_j` is `Σ c_l e_l`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationSpec {
    pub base: Base,
    pub basis: Vec<String>,
    #[serde(default)]
    pub degrees: Option<Vec<i64>>,
    pub unit: Vec<String>,
    pub mul: Vec<Vec<Vec<String>>>,
    /// Dimension of the parameter space `V`.
    #[serde(default = "one")]
    pub v_dim: usize,
    pub corrections: Vec<(usize, usize, usize, Vec<String>)>,
}

fn one() -> usize {
    1
}

pub fn parse_deformation(text: &str) -> Result<FirstOrderDeformation> {
    let s: DeformationSpec = serde_json::from_str(text)?;
    let a = AlgebraSpec { base: s.base, basis: s.basis, degrees: s.degrees, unit: s.unit, mul: s.mul }.build()?;
    let n = a.dim();
    if s.v_dim == 0 {
        return Err(Error::Parse("v_dim must be positive".into()));
    }
    let mut entries: Vec<Vec<(Vec<usize>, usize, Scalar)>> = vec![Vec::new(); s.v_dim];
    for (idx, (i, j, k, c)) in s.corrections.iter().enumerate() {
        if *i >= n || *j >= n || *k >= s.v_dim || c.len() != n {
            return Err(Error::Parse(format!("corrections[{idx}]: indices or length out of range")));
        }
        for (l, x) in vector(c, &format!("corrections[{idx}]"))?.into_iter().enumerate() {
            if !x.is_zero() {
                entries[*k].push((vec![*i, *j], l, x));
            }
        }
    }
    let corr = entries
        .into_iter()
        .map(|e| HochschildCochain::from_entries(2, n, n, e))
        .collect::<Result<Vec<_>>>()?;
    FirstOrderDeformation::new(a, corr)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetSpec {
    pub elements: Vec<String>,
    #[serde(default)]
    pub relations: Vec<(usize, usize)>,
}

/// `{ "poset", "algebras": {name: algebra}, "maps": {"i<j": rows} }`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramSpec {
    pub poset: PosetSpec,
    pub algebras: BTreeMap<String, AlgebraSpec>,
    #[serde(default)]
    pub maps: BTreeMap<String, Vec<Vec<String>>>,
}

pub fn parse_diagram(text: &str) -> Result<AlgebraDiagram> {
    let s: DiagramSpec = serde_json::from_str(text)?;
    let els = &s.poset.elements;
    let poset = Poset::new(els.clone(), &s.poset.relations)?;
    let index = |name: &str| els.iter().position(|e| e == name).ok_or_else(|| Error::Parse(format!("unknown poset element `{name}`")));
    let mut algebras = Vec::new();
    for e in els {
        let spec = s.algebras.get(e).ok_or_else(|| Error::Parse(format!("algebras: missing `{e}`")))?;
        algebras.push(spec.build().map_err(|err| Error::Parse(format!("algebras.{e}: {err}")))?);
    }
    for k in s.algebras.keys() {
        index(k)?;
    }
    let mut maps = Vec::new();
    for (key, rows) in &s.maps {
        let (a, b) = key.split_once('<').ok_or_else(|| Error::Parse(format!("maps: key `{key}` is not of the form i<j")))?;
        let (i, j) = (index(a.trim())?, index(b.trim())?);
        let rows = rows
            .iter()
            .enumerate()
            .map(|(r, row)| vector(row, &format!("maps.{key}[{r}]")))
            .collect::<Result<Vec<_>>>()?;
        let m = if rows.is_empty() { ExactMatrix::zero(0, algebras[j].dim()) } else { ExactMatrix::from_rows(&rows)? };
        maps.push(((i, j), m));
    }
    AlgebraDiagram::new(poset, algebras, maps)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub label: String,
    pub source: String,
    pub target: String,
    pub degree: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MuSpec {
    pub inputs: Vec<String>,
    pub output: BTreeMap<String, String>,
}

/// `{ "objects", "morphisms", "arity", "mu", "trace", "cy_dimension" }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AInfSpec {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    pub mu: Vec<MuSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cy_dimension: Option<i64>,
}

impl AInfSpec {
    pub fn from_category(c: &AInfCategory) -> Self {
        let gens = c.generators();
        let label = |i: usize| gens[i].label.clone();
        let obj = |x: usize| c.objects()[x].clone();
        let mut mu = Vec::new();
        for s in 2..=c.top_arity() {
            for (ins, v) in c.mu(s) {
                mu.push(MuSpec {
                    inputs: ins.iter().map(|&i| label(i)).collect(),
                    output: v.entries().iter().map(|(i, x)| (label(*i), x.to_string())).collect(),
                });
            }
        }
        AInfSpec {
            objects: c.objects().to_vec(),
            morphisms: gens
                .iter()
                .map(|g| MorphismSpec { label: g.label.clone(), source: obj(g.source), target: obj(g.target), degree: g.degree })
                .collect(),
            arity: Some(c.arity()),
            mu,
            trace: None,
            cy_dimension: None,
        }
    }
}

/// A parsed A∞ input: the category, its declared arity bound, and optional duality data.
#[derive(Clone, Debug)]
pub struct AInfInput {
    pub category: AInfCategory,
    pub arity: usize,
    pub trace: Option<CyTrace>,
    pub cy_dimension: Option<i64>,
}

pub fn parse_ainf(text: &str) -> Result<AInfInput> {
    let s: AInfSpec = serde_json::from_str(text)?;
    let obj = |name: &str| s.objects.iter().position(|o| o == name).ok_or_else(|| Error::Parse(format!("unknown object `{name}`")));
    let mut gens = Vec::new();
    let mut labels: BTreeMap<&str, usize> = BTreeMap::new();
    for (k, m) in s.morphisms.iter().enumerate() {
        if labels.insert(&m.label, k).is_some() {
            return Err(Error::Parse(format!("morphism label `{}` used twice", m.label)));
        }
        gens.push(Generator { label: m.label.clone(), source: obj(&m.source)?, target: obj(&m.target)?, degree: m.degree });
    }
    let gen = |l: &str| labels.get(l).copied().ok_or_else(|| Error::Parse(format!("unknown morphism `{l}`")));
    let longest = s.mu.iter().map(|m| m.inputs.len()).max().unwrap_or(2);
    let arity = s.arity.unwrap_or(longest.max(2));
    let mut entries = Vec::new();
    for (k, m) in s.mu.iter().enumerate() {
        let ins = m.inputs.iter().map(|l| gen(l)).collect::<Result<Vec<_>>>()?;
        let mut out = Vec::new();
        for (l, c) in &m.output {
            out.push((gen(l)?, coeff(c, || format!("mu[{k}].output.{l}"))?));
        }
        entries.push((ins, SparseVec::from_pairs(out)));
    }
    let category = AInfCategory::new(s.objects.clone(), gens, arity.max(longest), entries)?;
    let trace = match &s.trace {
        None => None,
        Some(t) => {
            let mut values = Vec::new();
            for (l, c) in t {
                values.push((gen(l)?, coeff(c, || format!("trace.{l}"))?));
            }
            Some(CyTrace { values })
        }
    };
    Ok(AInfInput { category, arity, trace, cy_dimension: s.cy_dimension })
}

/// Read a file, labelling I/O errors with the path.
pub fn read(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

#[cfg(test)]
mod tests {
    use super::*;

    const DUAL: &str = r#"{"base":"Q","basis":["1","e"],"unit":["1","0"],
        "mul":[[["1","0"],["0","1"]],[["0","1"],["0","0"]]]}"#;

    #[test]
    fn algebra_round_trip() {
        let a = parse_algebra(DUAL).unwrap();
        let d = FiniteAlgebra::dual_numbers();
        assert_eq!((a.unit(), a.table()), (d.unit(), d.table()));
        let again = AlgebraSpec::from_algebra(&a).build().unwrap();
        assert_eq!(a, again);
        let q = FiniteAlgebra::quantum_exterior(Scalar::q());
        let spec = AlgebraSpec::from_algebra(&q);
        assert_eq!(spec.base, Base::RationalFunctions);
        assert_eq!(spec.build().unwrap(), q);
    }

    #[test]
    fn algebra_errors() {
        let e = parse_algebra(&DUAL.replace(r#""0","1"]],[["0","1"]"#, r#""0","1"]],[["0","x"]"#)).unwrap_err();
        assert!(e.to_string().contains("mul[1][0][1]"), "{e}");
        let e = parse_algebra(&DUAL.replace(r#""unit":["1","0"]"#, r#""unit":["1","q"]"#)).unwrap_err();
        assert!(e.to_string().contains("base is Q"), "{e}");
        let e = parse_algebra("{\"base\":\"Q\",\n\"basis\":[1]}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }

    #[test]
    fn deformation_format() {
        let text = r#"{"base":"Q","basis":["1","e"],"unit":["1","0"],
            "mul":[[["1","0"],["0","1"]],[["0","1"],["0","0"]]],
            "corrections":[[1,1,0,["1","0"]]]}"#;
        let d = parse_deformation(text).unwrap();
        d.validate().unwrap();
        assert_eq!(d.v_dim(), 1);
        assert!(!d.corrections()[0].is_zero());
    }

    #[test]
    fn ainf_format() {
        let text = r#"{"objects":["X"],"morphisms":[
            {"label":"1","source":"X","target":"X","degree":0},
            {"label":"x","source":"X","target":"X","degree":1}],
            "mu":[{"inputs":["1","1"],"output":{"1":"1"}},{"inputs":["1","x"],"output":{"x":"1"}},
                  {"inputs":["x","1"],"output":{"x":"1"}}],
            "trace":{"x":"1"},"cy_dimension":1}"#;
        let c = parse_ainf(text).unwrap();
        assert_eq!(c.arity, 2);
        assert!(c.category.validate(2).is_ok());
        assert_eq!(c.trace.unwrap().values, vec![(1, Scalar::one())]);
        assert!(parse_ainf(&text.replace(r#""inputs":["x","1"]"#, r#""inputs":["x","y"]"#)).is_err());
    }
}
