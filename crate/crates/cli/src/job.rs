//! Job specifications and their translation into library objects.

use std::collections::BTreeMap;
use std::sync::Arc;

use ramify_core::algebra::{FiniteField, LaurentSeries, MatrixFF, PrecisionPolicy, EXACT};
use ramify_core::bound::{DecompositionData, JordanTable};
use ramify_core::cover::{
    build_artin_schreier, build_compositum_tower, build_kummer, lower_break_table, trivial_cover,
    BreakTable, GaloisCover,
};
use ramify_core::group::FiniteGroup;
use ramify_core::ramification::Representation;
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: String,
    #[serde(default)]
    pub base: Option<BaseSpec>,
    #[serde(default)]
    pub cover: Option<CoverSpec>,
    #[serde(default)]
    pub rep: Option<RepSpec>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub suite: Option<String>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    pub p: u64,
    pub a: u32,
}

/// A field element: a bare integer or its coordinates in the polynomial
/// basis.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(u64),
    Coords(Vec<u64>),
}

/// Sparse Laurent polynomial `[[exponent, coefficient], ...]`.
pub type SeriesSpec = Vec<(i64, Coeff)>;

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoverSpec {
    ArtinSchreier {
        f: SeriesSpec,
    },
    Kummer {
        m: u64,
    },
    Tower {
        m: u64,
        f: SeriesSpec,
    },
    /// A filtration supplied directly as lower breaks on a product of
    /// cyclic groups; elements are exponent vectors.
    Breaks {
        group: GroupSpec,
        breaks: Vec<(Vec<u64>, u64)>,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub cyclic_factors: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepSpec {
    pub ell: u64,
    pub n: u32,
    pub r: usize,
    /// Images of the group's standard generators, each an `r × r` array.
    pub generators: Vec<Vec<Vec<Coeff>>>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(rename = "N", default)]
    pub swan_bound: Option<u64>,
    #[serde(rename = "J", default)]
    pub jordan: Option<BTreeMap<String, u64>>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub precision: Option<i64>,
    #[serde(default)]
    pub exhaustive: Option<bool>,
    #[serde(default)]
    pub exact_factorial: Option<bool>,
    #[serde(default)]
    pub decomposition: Option<DecompositionSpec>,
    #[serde(default)]
    pub task: Option<EnumTask>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionSpec {
    pub order_i: u64,
    pub t: u64,
    pub e: u64,
    pub f_sep: u64,
    pub f_insep: u64,
    pub p: u64,
}

impl From<DecompositionSpec> for DecompositionData {
    fn from(d: DecompositionSpec) -> Self {
        DecompositionData {
            order_i: d.order_i,
            t: d.t,
            e: d.e,
            f_sep: d.f_sep,
            f_insep: d.f_insep,
            p: d.p,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnumTask {
    MaxOrder {
        r: usize,
        ell: u64,
        n: u32,
        #[serde(default)]
        samples: Option<u64>,
    },
    Sample {
        r: usize,
        ell: u64,
        n: u32,
        p: u64,
        count: usize,
        #[serde(default)]
        cap: Option<usize>,
    },
    Probe {
        r: usize,
        ell: u64,
        p: u64,
        s: u32,
        #[serde(default)]
        cap: Option<u64>,
    },
}

pub fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

pub fn field(base: &BaseSpec) -> Result<Arc<FiniteField>, CliError> {
    Ok(FiniteField::new(base.p, base.a)?)
}

pub fn element(k: &FiniteField, c: &Coeff) -> Result<u32, CliError> {
    let coords: Vec<u64> = match c {
        Coeff::Int(x) => vec![*x],
        Coeff::Coords(v) => v.clone(),
    };
    let p = k.characteristic() as u64;
    if coords.len() > k.degree() as usize || coords.iter().any(|&x| x >= p) {
        return Err(schema(format!(
            "{coords:?} is not an element of F_{}^{}",
            p,
            k.degree()
        )));
    }
    let digits: Vec<u32> = coords.iter().map(|&x| x as u32).collect();
    Ok(k.from_digits(&digits)?)
}

pub fn series(k: &Arc<FiniteField>, spec: &SeriesSpec) -> Result<LaurentSeries, CliError> {
    let terms = spec
        .iter()
        .map(|(e, c)| Ok((*e, element(k, c)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(LaurentSeries::from_terms(k, &terms, EXACT))
}

/// Product of cyclic groups, `(e_1, ..., e_k)` at the mixed-radix index.
pub fn product_group(factors: &[usize]) -> Result<FiniteGroup, CliError> {
    if factors.contains(&0) {
        return Err(schema("cyclic factors must be positive"));
    }
    Ok(factors.iter().fold(FiniteGroup::trivial(), |acc, &n| {
        FiniteGroup::direct_product(&acc, &FiniteGroup::cyclic(n))
    }))
}

fn mixed_radix(factors: &[usize], exps: &[u64]) -> Result<usize, CliError> {
    if exps.len() != factors.len() {
        return Err(schema(format!(
            "element {exps:?} does not match cyclic factors {factors:?}"
        )));
    }
    let mut idx = 0;
    for (&n, &e) in factors.iter().zip(exps) {
        if e as usize >= n {
            return Err(schema(format!("exponent {e} out of range for Z/{n}")));
        }
        idx = idx * n + e as usize;
    }
    Ok(idx)
}

/// What a job's `cover` field describes.
pub enum Source {
    Cover(Box<GaloisCover>),
    Table(BreakTable),
}

impl Source {
    pub fn group(&self) -> &FiniteGroup {
        match self {
            Source::Cover(c) => c.group(),
            Source::Table(t) => t.group(),
        }
    }

    pub fn break_table(&self, policy: PrecisionPolicy) -> Result<BreakTable, CliError> {
        match self {
            Source::Cover(c) => Ok(lower_break_table(c, policy)?),
            Source::Table(t) => Ok(t.clone()),
        }
    }

    pub fn cover(&self) -> Option<&GaloisCover> {
        match self {
            Source::Cover(c) => Some(c),
            Source::Table(_) => None,
        }
    }
}

pub fn build_source(
    base: &BaseSpec,
    cover: &CoverSpec,
    policy: PrecisionPolicy,
) -> Result<Source, CliError> {
    let k = field(base)?;
    Ok(match cover {
        CoverSpec::ArtinSchreier { f } => {
            Source::Cover(Box::new(build_artin_schreier(&k, &series(&k, f)?, policy)?))
        }
        CoverSpec::Kummer { m } => Source::Cover(Box::new(build_kummer(&k, *m)?)),
        CoverSpec::Tower { m, f } => {
            let lower = if *m == 1 {
                trivial_cover(&k)
            } else {
                build_kummer(&k, *m)?
            };
            Source::Cover(Box::new(build_compositum_tower(
                &lower,
                &series(&k, f)?,
                policy,
            )?))
        }
        CoverSpec::Breaks { group, breaks } => {
            let g = product_group(&group.cyclic_factors)?;
            let mut table = BTreeMap::new();
            for (exps, i) in breaks {
                let x = mixed_radix(&group.cyclic_factors, exps)?;
                if x == g.identity() {
                    return Err(schema("the identity has no break"));
                }
                if table.insert(x, *i).is_some() {
                    return Err(schema(format!("element {exps:?} listed twice")));
                }
            }
            Source::Table(BreakTable::new(g, base.p, table)?)
        }
    })
}

pub fn representation(group: &FiniteGroup, spec: &RepSpec) -> Result<Representation, CliError> {
    let k = FiniteField::new(spec.ell, spec.n)?;
    let gens = group.generators();
    if spec.generators.len() != gens.len() {
        return Err(schema(format!(
            "the group has {} standard generators but {} images were given",
            gens.len(),
            spec.generators.len()
        )));
    }
    let mut images = Vec::with_capacity(gens.len());
    for (&g, rows) in gens.iter().zip(&spec.generators) {
        if rows.len() != spec.r || rows.iter().any(|row| row.len() != spec.r) {
            return Err(schema(format!("generator image is not {0}×{0}", spec.r)));
        }
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|c| element(&k, c)).collect())
            .collect::<Result<Vec<Vec<u32>>, CliError>>()?;
        images.push((g, MatrixFF::from_rows(&k, &rows)?));
    }
    if gens.is_empty() {
        return Ok(Representation::trivial(group.clone(), &k, spec.r));
    }
    Ok(Representation::from_generator_images(
        group.clone(),
        &k,
        spec.r,
        &images,
    )?)
}

/// Default table plus overrides, keys are ranks as strings.
pub fn jordan_table(overrides: Option<&BTreeMap<String, u64>>) -> Result<JordanTable, CliError> {
    let mut table = JordanTable::default();
    if let Some(map) = overrides {
        for (r, &j) in map {
            let r: u32 = r
                .parse()
                .map_err(|_| schema(format!("Jordan table key {r:?} is not a rank")))?;
            table = table.with_entry(r, j)?;
        }
    }
    Ok(table)
}
