//! On-disk JSON formats for flow presentations and Morse data.
//!
//! Keys are declared in alphabetical order so that pretty-printed output is
//! canonical: parsing a canonical file and writing it back reproduces it
//! byte for byte.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::chain::HomologyGroup;
use crate::error::{Error, Result};
use crate::flowdata::{CritModel, FlowPresentation, ModuliComponentModel};
use crate::morse::{FlowCount, MorseData};
use crate::simplicial::SimplicialComplexData;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub facets: Vec<Vec<usize>>,
    pub vertices: usize,
}

impl ComplexSpec {
    pub fn to_complex(&self) -> Result<SimplicialComplexData> {
        SimplicialComplexData::from_facets(self.vertices, &self.facets)
    }

    pub fn from_complex(k: &SimplicialComplexData) -> Self {
        ComplexSpec {
            facets: k.facets(),
            vertices: k.vertex_count(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindSpec {
    Points,
    Simplicial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriticalSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexSpec>,
    pub index: usize,
    pub kind: KindSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

/// A vertex given by position or by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexRef {
    Index(usize),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuliSpec {
    pub domain: ComplexSpec,
    pub ev_minus: Vec<VertexRef>,
    pub ev_plus: Vec<VertexRef>,
    pub from: usize,
    pub sign: i64,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedGroup {
    pub betti: usize,
    pub degree: usize,
    pub torsion: Vec<u64>,
}

impl ExpectedGroup {
    pub fn group(&self) -> HomologyGroup {
        HomologyGroup::new(self.betti, self.torsion.iter().map(|&t| BigInt::from(t)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column_cap: Option<usize>,
    pub critical: Vec<CriticalSpec>,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Vec<ExpectedGroup>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifold: Option<String>,
    pub moduli: Vec<ModuliSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    pub schema: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountSpec {
    pub count: i64,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorseCriticalSpec {
    pub index: usize,
    pub names: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorseFile {
    pub counts: Vec<CountSpec>,
    pub critical: Vec<MorseCriticalSpec>,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Vec<ExpectedGroup>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifold: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    pub schema: u32,
}

/// Either kind of input; Morse files are recognised by their `counts` key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputFile {
    Flow(FlowFile),
    Morse(MorseFile),
}

fn check_schema(found: u32) -> Result<()> {
    if found != SCHEMA_VERSION {
        return Err(Error::Parse(format!(
            "unsupported schema {found}, expected {SCHEMA_VERSION}"
        )));
    }
    Ok(())
}

pub fn parse_flow_file(text: &str) -> Result<FlowFile> {
    let f: FlowFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    check_schema(f.schema)?;
    Ok(f)
}

pub fn parse_morse_file(text: &str) -> Result<MorseFile> {
    let f: MorseFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    check_schema(f.schema)?;
    Ok(f)
}

pub fn parse_input(text: &str) -> Result<InputFile> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if value.get("counts").is_some() {
        parse_morse_file(text).map(InputFile::Morse)
    } else {
        parse_flow_file(text).map(InputFile::Flow)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types always serialize");
    s.push('\n');
    s
}

fn resolve(refs: &[VertexRef], model: &CritModel, what: &str) -> Result<Vec<usize>> {
    refs.iter()
        .enumerate()
        .map(|(n, r)| match r {
            VertexRef::Index(v) if *v < model.names.len() => Ok(*v),
            VertexRef::Index(v) => Err(Error::InvalidFlowData(format!(
                "{what}[{n}]: vertex {v} out of range for index {}",
                model.index
            ))),
            VertexRef::Name(s) => model.vertex(s).ok_or_else(|| {
                Error::InvalidFlowData(format!(
                    "{what}[{n}]: no vertex named {s:?} at index {}",
                    model.index
                ))
            }),
        })
        .collect()
}

impl FlowFile {
    pub fn to_presentation(&self) -> Result<FlowPresentation> {
        let mut critical = Vec::with_capacity(self.critical.len());
        for (n, c) in self.critical.iter().enumerate() {
            let ctx = |e: Error| Error::InvalidFlowData(format!("critical[{n}]: {e}"));
            let model = match c.kind {
                KindSpec::Points => {
                    if c.complex.is_some() {
                        return Err(Error::InvalidFlowData(format!(
                            "critical[{n}]: points kind takes names, not a complex"
                        )));
                    }
                    CritModel::points(c.index, c.names.clone().unwrap_or_default()).map_err(ctx)?
                }
                KindSpec::Simplicial => {
                    let spec = c.complex.as_ref().ok_or_else(|| {
                        Error::InvalidFlowData(format!("critical[{n}]: simplicial kind needs a complex"))
                    })?;
                    let k = spec.to_complex().map_err(ctx)?;
                    CritModel::simplicial(c.index, k, c.names.clone()).map_err(ctx)?
                }
            };
            critical.push(model);
        }
        let find = |idx: usize, n: usize| {
            critical.iter().find(|c| c.index == idx).ok_or_else(|| {
                Error::InvalidFlowData(format!("moduli[{n}]: no critical set of index {idx}"))
            })
        };
        let mut moduli = Vec::with_capacity(self.moduli.len());
        for (n, m) in self.moduli.iter().enumerate() {
            let domain = m
                .domain
                .to_complex()
                .map_err(|e| Error::InvalidFlowData(format!("moduli[{n}].domain: {e}")))?;
            let src = find(m.from, n)?;
            let tgt = find(m.to, n)?;
            for (refs, what) in [(&m.ev_minus, "ev_minus"), (&m.ev_plus, "ev_plus")] {
                if refs.len() != domain.vertex_count() {
                    return Err(Error::InvalidFlowData(format!(
                        "moduli[{n}].{what}: {} images for {} domain vertices",
                        refs.len(),
                        domain.vertex_count()
                    )));
                }
            }
            moduli.push(ModuliComponentModel {
                from: m.from,
                to: m.to,
                ev_minus: resolve(&m.ev_minus, src, &format!("moduli[{n}].ev_minus"))?,
                ev_plus: resolve(&m.ev_plus, tgt, &format!("moduli[{n}].ev_plus"))?,
                domain,
                sign: m.sign,
            });
        }
        Ok(FlowPresentation {
            dim: self.dim,
            critical,
            moduli,
            column_cap: self.column_cap,
        })
    }
}

impl MorseFile {
    pub fn to_morse_data(&self) -> Result<MorseData> {
        let mut critical = vec![Vec::new(); self.dim + 1];
        for c in &self.critical {
            if c.index > self.dim {
                return Err(Error::InvalidMorseData(format!(
                    "critical index {} exceeds dimension {}",
                    c.index, self.dim
                )));
            }
            if !critical[c.index].is_empty() {
                return Err(Error::InvalidMorseData(format!(
                    "index {} listed twice",
                    c.index
                )));
            }
            critical[c.index] = c.names.clone();
        }
        let counts = self
            .counts
            .iter()
            .map(|c| FlowCount {
                from: c.from.clone(),
                to: c.to.clone(),
                count: c.count,
            })
            .collect();
        MorseData::new(self.dim, critical, counts)
    }
}
