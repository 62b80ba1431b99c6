//! Per-command computations. Each returns the `results` payload.

use num_bigint::BigUint;
use ramify_core::bound::{
    claim1_check, decomposition_counts, derived_n_prime, explicit_constants, inertia_structure,
    tameizing_subgroup, wild_order_bound_check, JordanTable,
};
use ramify_core::cover::{CoverRecipe, GaloisCover};
use ramify_core::group_enum::{
    abelian_p_bound_probe, inertia_candidate_sample, max_ell_element_order, EXHAUSTIVE_CAP,
};
use ramify_core::ramification::{
    hasse_arf_check, integer_point_sum, swan_conductor, swan_single_break, upper_jumps, Herbrand,
    RamFiltration, Representation, Q,
};
use ramify_core::Error;
use serde_json::{json, Value};

use crate::encode::{self, rational};
use crate::job::{self, build_source, representation, JobSpec, Source};
use crate::{CliError, Context};

const SAMPLE_SIZE_CAP: usize = 2000;
const DEFAULT_SAMPLES: u64 = 2000;

fn need<'a, T>(x: &'a Option<T>, what: &str) -> Result<&'a T, CliError> {
    x.as_ref()
        .ok_or_else(|| CliError::Schema(format!("this command needs `{what}`")))
}

fn source(job: &JobSpec, ctx: &Context) -> Result<Source, CliError> {
    build_source(
        need(&job.base, "base")?,
        need(&job.cover, "cover")?,
        ctx.policy,
    )
}

pub fn filtration_of(src: &Source, ctx: &Context) -> Result<RamFiltration, CliError> {
    Ok(RamFiltration::from_breaks(&src.break_table(ctx.policy)?)?)
}

fn cover_json(c: &GaloisCover) -> Value {
    let reduced_f = match c.recipe() {
        CoverRecipe::ArtinSchreier { f } => Some(encode::series(f)),
        _ => None,
    };
    json!({
        "reduced_f": reduced_f,
        "degree": c.degree(),
        "ramification_index": c.ramification_index(),
        "precision": c.precision(),
        "uniformizer_exponents": c.uniformizer_exponents().map(|(a, b)| json!({"a": a, "b": b})),
        "t_in_s": encode::series(c.t_in_s()),
        "group_labels": c.group().labels(),
        "intermediate_subgroup": c.intermediate().map(|i| i.subgroup.clone()),
    })
}

pub fn filtration_json(filt: &RamFiltration) -> Value {
    let g = filt.group();
    let subgroups: Vec<Value> = (0..=filt.i_max() + 1)
        .map(|i| json!({"i": i, "order": filt.order(i), "elements": filt.g(i)}))
        .collect();
    let hasse_arf = match hasse_arf_check(filt) {
        Ok(b) => Value::Bool(b),
        Err(_) => Value::Null,
    };
    json!({
        "group_order": g.order(),
        "i_max": filt.i_max(),
        "subgroups": subgroups,
        "lower_jumps": filt.lower_jumps(),
        "upper_jumps": upper_jumps(filt).into_iter().map(rational).collect::<Vec<_>>(),
        "hasse_arf": hasse_arf,
    })
}

pub fn filtration(job: &JobSpec, ctx: &Context) -> Result<Value, CliError> {
    let src = source(job, ctx)?;
    let bt = src.break_table(ctx.policy)?;
    let filt = RamFiltration::from_breaks(&bt)?;
    let g = bt.group();
    let elements: Vec<Value> = g
        .elements()
        .map(|x| json!({"index": x, "label": g.label(x), "i_G": bt.i_g(x)}))
        .collect();
    Ok(json!({
        "elements": elements,
        "filtration": filtration_json(&filt),
        "cover": src.cover().map(cover_json),
    }))
}

/// Shape, inverse and integer-point checks on `φ`.
pub fn herbrand_checks(filt: &RamFiltration, phi: &Herbrand) -> Value {
    let psi = phi.inverse();
    let shape = phi.check_shape().is_ok();
    let inverse = phi
        .breakpoints()
        .iter()
        .all(|&(u, v)| psi.eval(v) == u && phi.eval(psi.eval(v)) == v);
    let integer_formula =
        (1..=filt.i_max() + 2).all(|v| phi.eval(Q::from_integer(v)) == integer_point_sum(filt, v));
    json!({
        "shape": shape,
        "psi_phi_identity": inverse,
        "integer_point_formula": integer_formula,
    })
}

pub fn herbrand(job: &JobSpec, ctx: &Context) -> Result<Value, CliError> {
    let filt = filtration_of(&source(job, ctx)?, ctx)?;
    let phi = Herbrand::phi(&filt);
    Ok(json!({
        "phi": encode::herbrand(&phi),
        "psi": encode::herbrand(&phi.inverse()),
        "final_slope": rational(phi.final_slope()),
        "upper_jumps": upper_jumps(&filt).into_iter().map(rational).collect::<Vec<_>>(),
        "checks": herbrand_checks(&filt, &phi),
    }))
}

pub fn swan_json(rep: &Representation, filt: &RamFiltration) -> Result<Value, CliError> {
    let report = swan_conductor(rep, filt)?;
    let phi = Herbrand::phi(filt);
    let (single, note) = match swan_single_break(rep, filt, &phi) {
        Ok(v) => (rational(v), Value::Null),
        Err(Error::PreconditionFailed(msg)) => (Value::Null, Value::String(msg)),
        Err(e) => return Err(e.into()),
    };
    if let Value::Object(ref o) = single {
        if Some(&rational(report.swan)) != Some(&Value::Object(o.clone())) {
            return Err(Error::MismatchDetected("single-break formula disagrees".into()).into());
        }
    }
    Ok(json!({
        "swan": rational(report.swan),
        "breaks": encode::breaks(&report.breaks),
        "per_jump_terms": encode::breaks(&report.per_jump_terms),
        "rank": rep.rank(),
        "single_break": single,
        "single_break_note": note,
    }))
}

pub fn swan(job: &JobSpec, ctx: &Context, warnings: &mut Vec<String>) -> Result<Value, CliError> {
    let src = source(job, ctx)?;
    let filt = filtration_of(&src, ctx)?;
    let rep = representation(src.group(), need(&job.rep, "rep")?)?;
    if !filt.group().is_abelian() {
        warnings.push("nonabelian group: Swan conductor need not be an integer".into());
    }
    swan_json(&rep, &filt)
}

fn jordan(ctx: &Context) -> Result<JordanTable, CliError> {
    job::jordan_table(Some(&ctx.jordan))
}

/// The whole bound pipeline for one representation with `Sw <= N`.
pub fn bound_pipeline(
    filt: &RamFiltration,
    rep: &Representation,
    n_bound: Option<u64>,
    table: &JordanTable,
    exact_factorial: bool,
    warnings: &mut Vec<String>,
) -> Result<(Value, bool), CliError> {
    let p = filt.residue_characteristic();
    let sw = swan_conductor(rep, filt)?.swan;
    let n_bound = n_bound.unwrap_or_else(|| sw.ceil().to_integer() as u64);
    let structure = inertia_structure(&rep.image_matrices(), p)?;
    let r = rep.rank();
    let claim1 = claim1_check(&structure, r);
    let tame = tameizing_subgroup(&structure)?;
    let j = table.jordan_bound(r as u32)?;
    if table.is_user_supplied(r as u32) {
        warnings.push(format!("J({r}) = {j} is user-supplied, not verified"));
    }
    let constants = explicit_constants(r as u64, p, structure.ell, n_bound, j, exact_factorial)?;
    let derived = derived_n_prime(structure.ell, structure.ell_exponent, j, n_bound);
    let misprint = (structure.ell as u128)
        .checked_pow(r as u32)
        .map(|x| x * j as u128 * n_bound as u128);
    warnings.push(format!(
        "N' = ℓ^r·J·N (= {}) is read as a misprint; using ℓ·r·J·N = {}",
        misprint.map_or("overflow".to_string(), |x| x.to_string()),
        constants.n_prime
    ));
    let wild = wild_order_bound_check(&structure, filt, rep, n_bound, j, constants.n_prime)?;
    let index_ok = BigUint::from(structure.p_sylow_order()) > constants.m0
        || factorial_reaches(&constants.m0, tame.index_tame);
    let holds = claim1.holds() && tame.holds() && wild.holds() && index_ok;
    let g = &structure.group;
    let v = json!({
        "swan": rational(sw),
        "N": n_bound,
        "structure": {
            "order": structure.order(),
            "p_sylow_order": structure.p_sylow_order(),
            "M": structure.m,
            "n": structure.ell_exponent,
            "M_prime": structure.m_prime,
            "abelian": g.is_abelian(),
        },
        "claim1": {
            "exponent_bound": claim1.exponent_bound,
            "elements_ok": claim1.elements_ok,
            "max_ell_order": claim1.max_ell_order,
        },
        "tameizing": {
            "complement_order": tame.complement.len(),
            "H_order": tame.h.len(),
            "index_tame": tame.index_tame,
            "H_normal": tame.h_normal,
            "H_prime_to_p": tame.h_prime_to_p,
            "sequence_exact": tame.sequence_exact,
        },
        "J": j,
        "J_user_supplied": table.is_user_supplied(r as u32),
        "constants": {
            "N_prime": constants.n_prime,
            "N_prime_derived": derived,
            "M0": encode::big(&constants.m0),
            "M_crude": encode::factorial_bound(&constants.m_crude),
        },
        "wild_order": {
            "jumps": wild.jumps,
            "jumps_le_swan": wild.jumps_le_swan,
            "abelian_p_part": wild.abelian_p_part,
            "abelian_from_search": wild.abelian_from_search,
            "exponent_ok": wild.exponent_ok,
            "p_sylow_order": wild.p_sylow_order,
            "torus_bound": encode::big(&wild.torus_bound),
            "torus_bound_holds": wild.torus_bound_holds,
            "printed_bound": encode::big(&wild.printed_bound),
            "printed_bound_holds": wild.printed_bound_holds,
        },
        "index_within_crude_bound": index_ok,
        "holds": holds,
    });
    Ok((v, holds))
}

/// `k <= m0!`, stopping as soon as a partial product reaches `k`.
fn factorial_reaches(m0: &BigUint, k: u64) -> bool {
    let target = BigUint::from(k);
    let mut acc = BigUint::from(1u32);
    let mut i = BigUint::from(1u32);
    while acc < target && &i <= m0 {
        acc *= &i;
        i += 1u32;
    }
    acc >= target
}

pub fn bound(job: &JobSpec, ctx: &Context, warnings: &mut Vec<String>) -> Result<Value, CliError> {
    let mut out = serde_json::Map::new();
    if let Some(d) = job.params.decomposition {
        let r = decomposition_counts(&d.into())?;
        out.insert(
            "decomposition".into(),
            json!({"order_IC": r.order_ic, "tame": r.tame}),
        );
    }
    if job.cover.is_some() || job.rep.is_some() {
        let src = source(job, ctx)?;
        let filt = filtration_of(&src, ctx)?;
        let rep = representation(src.group(), need(&job.rep, "rep")?)?;
        let (v, _) = bound_pipeline(
            &filt,
            &rep,
            job.params.swan_bound,
            &jordan(ctx)?,
            job.params.exact_factorial.unwrap_or(false),
            warnings,
        )?;
        out.insert("pipeline".into(), v);
    }
    if out.is_empty() {
        return Err(CliError::Schema(
            "bound needs a cover and rep, or params.decomposition".into(),
        ));
    }
    Ok(Value::Object(out))
}

pub fn enumerate(job: &JobSpec, ctx: &Context) -> Result<Value, CliError> {
    use crate::job::EnumTask;
    Ok(match need(&job.params.task, "params.task")? {
        EnumTask::MaxOrder { r, ell, n, samples } => {
            let rep = max_ell_element_order(
                *r,
                *ell,
                *n,
                ctx.exhaustive,
                samples.unwrap_or(DEFAULT_SAMPLES),
                ctx.seed,
            )?;
            json!({
                "max_order": rep.max_order,
                "exhaustive": rep.exhaustive,
                "examined": rep.examined,
                "claim_holds": rep.claim_holds,
            })
        }
        EnumTask::Sample {
            r,
            ell,
            n,
            p,
            count,
            cap,
        } => {
            let groups = inertia_candidate_sample(
                *r,
                *ell,
                *n,
                *p,
                *count,
                ctx.seed,
                cap.unwrap_or(SAMPLE_SIZE_CAP),
            )?;
            let list: Vec<Value> = groups
                .iter()
                .map(|g| {
                    let gens: Vec<Value> = g
                        .generators()
                        .iter()
                        .map(|&x| encode::matrix(&g.matrices().unwrap()[x]))
                        .collect();
                    json!({"order": g.order(), "abelian": g.is_abelian(), "generators": gens})
                })
                .collect();
            json!({"groups": list, "exhaustive": false, "seed": ctx.seed})
        }
        EnumTask::Probe { r, ell, p, s, cap } => {
            let rep = abelian_p_bound_probe(*r, *ell, *p, *s, cap.unwrap_or(EXHAUSTIVE_CAP))?;
            json!({
                "n": rep.n,
                "max_order_found": rep.max_order_found,
                "exhaustive": rep.exhaustive,
                "le_printed_bound": rep.le_printed_bound,
                "le_torus_bound": rep.le_torus_bound,
            })
        }
    })
}
