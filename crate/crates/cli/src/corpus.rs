//! The built-in fixture corpus shipped with the binary.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::job::{BaseSpec, Coeff, CoverSpec, RepSpec};

const CORPUS_JSON: &str = include_str!("../corpus/corpus.json");

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corpus {
    pub version: u32,
    pub fixtures: Vec<Fixture>,
    /// Jordan constants supplied for the corpus runs, not verified here.
    pub jordan_overrides: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    pub name: String,
    pub base: BaseSpec,
    pub cover: CoverSpec,
    /// Reduced pole order of an Artin–Schreier fixture.
    #[serde(default)]
    pub pole_order: Option<u64>,
    pub reps: Vec<NamedRep>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedRep {
    pub name: String,
    pub ell: u64,
    pub n: u32,
    pub r: usize,
    pub generators: Vec<Vec<Vec<Coeff>>>,
}

impl NamedRep {
    pub fn spec(&self) -> RepSpec {
        RepSpec {
            ell: self.ell,
            n: self.n,
            r: self.r,
            generators: self.generators.clone(),
        }
    }
}

impl Fixture {
    pub fn is_tower(&self) -> bool {
        matches!(self.cover, CoverSpec::Tower { .. })
    }

    pub fn is_kummer(&self) -> bool {
        matches!(self.cover, CoverSpec::Kummer { .. })
    }
}

pub fn corpus() -> Corpus {
    serde_json::from_str(CORPUS_JSON).expect("the built-in corpus is valid")
}
