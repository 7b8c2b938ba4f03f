//! Worked examples shipped with the crate, with their expected homology.

use crate::chain::HomologyGroup;
use crate::error::{Error, Result};
use crate::file::{parse_input, ExpectedGroup, InputFile};
use crate::flowdata::{build_multicomplex, FlowPresentation};
use crate::morse::{morse_to_flow, MorseData};
use crate::multicomplex::{homology_table, Multicomplex};

/// `(file name, contents)` of every shipped corpus file.
pub const CORPUS_FILES: &[(&str, &str)] = &[
    ("s2-constant.json", include_str!("../data/s2-constant.json")),
    ("s2-z2.json", include_str!("../data/s2-z2.json")),
    ("s2-minus-z2.json", include_str!("../data/s2-minus-z2.json")),
    ("s2-morse-2.morse.json", include_str!("../data/s2-morse-2.morse.json")),
    ("s2-morse-4.morse.json", include_str!("../data/s2-morse-4.morse.json")),
    ("t2-height.json", include_str!("../data/t2-height.json")),
    ("t2-deformed.json", include_str!("../data/t2-deformed.json")),
    ("t2-morse-4.morse.json", include_str!("../data/t2-morse-4.morse.json")),
    ("s1-constant.json", include_str!("../data/s1-constant.json")),
    ("s1-height.json", include_str!("../data/s1-height.json")),
    ("s1-morse.morse.json", include_str!("../data/s1-morse.morse.json")),
    ("rp2-flow.json", include_str!("../data/rp2-flow.json")),
    ("rp2-morse.morse.json", include_str!("../data/rp2-morse.morse.json")),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntrySource {
    Flow(FlowPresentation),
    Morse(MorseData),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub manifold: String,
    pub source: EntrySource,
    pub expected: Vec<ExpectedGroup>,
    pub notes: String,
}

impl CorpusEntry {
    /// Reads a flow or Morse file; name, manifold and expected homology are required.
    pub fn from_json(text: &str) -> Result<Self> {
        let missing = |what: &str| Error::Parse(format!("corpus entry without {what}"));
        let (name, manifold, expected, notes, source) = match parse_input(text)? {
            InputFile::Flow(f) => {
                let fp = f.to_presentation()?;
                (f.name, f.manifold, f.expected, f.notes, EntrySource::Flow(fp))
            }
            InputFile::Morse(f) => {
                let md = f.to_morse_data()?;
                (f.name, f.manifold, f.expected, f.notes, EntrySource::Morse(md))
            }
        };
        Ok(CorpusEntry {
            name: name.ok_or_else(|| missing("name"))?,
            manifold: manifold.ok_or_else(|| missing("manifold"))?,
            expected: expected.ok_or_else(|| missing("expected homology"))?,
            notes: notes.unwrap_or_default(),
            source,
        })
    }

    pub fn dim(&self) -> usize {
        match &self.source {
            EntrySource::Flow(fp) => fp.dim,
            EntrySource::Morse(md) => md.dim,
        }
    }

    pub fn presentation(&self) -> Result<FlowPresentation> {
        match &self.source {
            EntrySource::Flow(fp) => Ok(fp.clone()),
            EntrySource::Morse(md) => morse_to_flow(md, None),
        }
    }

    pub fn build(&self) -> Result<Multicomplex> {
        build_multicomplex(&self.presentation()?)
    }
}

/// All shipped entries, in [`CORPUS_FILES`] order.
pub fn corpus() -> Vec<CorpusEntry> {
    CORPUS_FILES
        .iter()
        .map(|(file, text)| {
            CorpusEntry::from_json(text).unwrap_or_else(|e| panic!("corpus file {file}: {e}"))
        })
        .collect()
}

pub fn entry(name: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.name == name)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub degree: usize,
    pub expected: HomologyGroup,
    pub found: HomologyGroup,
}

#[derive(Clone, Debug)]
pub struct EntryReport {
    pub name: String,
    /// `HB_0 ..= HB_m`, empty when the build failed.
    pub homology: Vec<HomologyGroup>,
    pub mismatches: Vec<Mismatch>,
    pub error: Option<String>,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.mismatches.is_empty()
    }
}

/// `HB_0 ..= HB_m` of a presentation.
pub fn homology_through_dim(fp: &FlowPresentation) -> Result<Vec<HomologyGroup>> {
    let mc = build_multicomplex(fp)?;
    Ok(homology_table(&mc)?
        .into_iter()
        .take(fp.dim + 1)
        .map(|e| e.group)
        .collect())
}

/// Builds, validates, and compares against the expected groups.
pub fn run_entry(e: &CorpusEntry) -> EntryReport {
    let homology = e.presentation().and_then(|fp| homology_through_dim(&fp));
    match homology {
        Err(err) => EntryReport {
            name: e.name.clone(),
            homology: Vec::new(),
            mismatches: Vec::new(),
            error: Some(err.to_string()),
        },
        Ok(homology) => {
            let mismatches = e
                .expected
                .iter()
                .filter_map(|x| {
                    let expected = x.group();
                    let found = homology
                        .get(x.degree)
                        .cloned()
                        .unwrap_or_else(|| HomologyGroup::free(0));
                    (!found.is_isomorphic(&expected)).then_some(Mismatch {
                        degree: x.degree,
                        expected,
                        found,
                    })
                })
                .collect();
            EntryReport {
                name: e.name.clone(),
                homology,
                mismatches,
                error: None,
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroupReport {
    pub manifold: String,
    pub members: Vec<String>,
    /// `(a, b, degree)` for every pair whose groups differ.
    pub disagreements: Vec<(String, String, usize)>,
    pub errors: Vec<(String, String)>,
}

impl GroupReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty() && self.errors.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct IndependenceReport {
    pub groups: Vec<GroupReport>,
}

impl IndependenceReport {
    pub fn passed(&self) -> bool {
        self.groups.iter().all(GroupReport::passed)
    }
}

/// Pairwise comparison of entries describing the same manifold.
pub fn independence_of(entries: &[CorpusEntry]) -> IndependenceReport {
    let mut manifolds: Vec<&str> = entries.iter().map(|e| e.manifold.as_str()).collect();
    manifolds.sort_unstable();
    manifolds.dedup();
    let groups = manifolds
        .into_iter()
        .map(|man| {
            let members: Vec<&CorpusEntry> = entries.iter().filter(|e| e.manifold == man).collect();
            let mut errors = Vec::new();
            let mut tables = Vec::new();
            for e in &members {
                match e.presentation().and_then(|fp| homology_through_dim(&fp)) {
                    Ok(t) => tables.push((e.name.clone(), t)),
                    Err(err) => errors.push((e.name.clone(), err.to_string())),
                }
            }
            let mut disagreements = Vec::new();
            for a in 0..tables.len() {
                for b in a + 1..tables.len() {
                    let (ta, tb) = (&tables[a].1, &tables[b].1);
                    for k in 0..ta.len().min(tb.len()) {
                        if !ta[k].is_isomorphic(&tb[k]) {
                            disagreements.push((tables[a].0.clone(), tables[b].0.clone(), k));
                        }
                    }
                }
            }
            GroupReport {
                manifold: man.to_string(),
                members: members.iter().map(|e| e.name.clone()).collect(),
                disagreements,
                errors,
            }
        })
        .collect();
    IndependenceReport { groups }
}

pub fn independence_suite() -> IndependenceReport {
    independence_of(&corpus())
}
