//! Property suites over the built-in corpus.

use std::collections::BTreeMap;

use num_integer::Integer;
use ramify_core::algebra::{FiniteField, MatrixFF};
use ramify_core::bound::{
    claim1_check, decomposition_counts, explicit_constants, star_kernel_check, structure_of,
    tameizing_subgroup, DecompositionData, FactorialBound,
};
use ramify_core::group::FiniteGroup;
use ramify_core::group_enum::{
    abelian_p_bound_probe, group_closure, inertia_candidate_sample, max_ell_element_order,
    EXHAUSTIVE_CAP,
};
use ramify_core::ramification::{
    hasse_arf_check, phi_transitivity_check, pullback_bound_check, swan_conductor, upper_jumps, Q,
};
use ramify_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::commands::{bound_pipeline, filtration_of};
use crate::corpus::{corpus, Fixture};
use crate::encode::{self, rational};
use crate::job::{build_source, jordan_table, representation, Source};
use crate::{CliError, Context};

pub const SUITES: [&str; 6] = [
    "lemma_pullback",
    "hasse_arf",
    "transitivity",
    "claim1",
    "claim2",
    "counts",
];

const COUNT_INSTANCES: usize = 200;
const SAMPLE_CAP: usize = 500;

struct Suite {
    instances: Vec<Value>,
    passed: bool,
}

impl Suite {
    fn new() -> Self {
        Suite {
            instances: Vec::new(),
            passed: true,
        }
    }

    fn push(&mut self, name: String, passed: bool, values: Value) {
        self.passed &= passed;
        self.instances
            .push(json!({"name": name, "passed": passed, "values": values}));
    }

    fn json(self) -> Value {
        json!({"passed": self.passed, "instances": self.instances})
    }
}

pub fn run(
    suite: &str,
    ctx: &Context,
    warnings: &mut Vec<String>,
) -> Result<(Value, bool), CliError> {
    if suite == "all" {
        let mut out = serde_json::Map::new();
        let mut passed = true;
        for name in SUITES {
            let s = run_one(name, ctx, warnings)?;
            passed &= s.passed;
            out.insert(name.to_string(), s.json());
        }
        return Ok((
            json!({"suite": "all", "passed": passed, "suites": out}),
            passed,
        ));
    }
    let s = run_one(suite, ctx, warnings)?;
    let passed = s.passed;
    let mut v = s.json();
    v["suite"] = json!(suite);
    Ok((v, passed))
}

fn run_one(suite: &str, ctx: &Context, warnings: &mut Vec<String>) -> Result<Suite, CliError> {
    match suite {
        "lemma_pullback" => lemma_pullback(ctx),
        "hasse_arf" => hasse_arf(ctx),
        "transitivity" => transitivity(ctx),
        "claim1" => claim1(ctx),
        "claim2" => claim2(ctx, warnings),
        "counts" => counts(ctx),
        other => Err(CliError::UnknownSuite(other.to_string())),
    }
}

fn source(f: &Fixture, ctx: &Context) -> Result<Source, CliError> {
    build_source(&f.base, &f.cover, ctx.policy)
}

fn lemma_pullback(ctx: &Context) -> Result<Suite, CliError> {
    let mut suite = Suite::new();
    for f in corpus().fixtures.iter().filter(|f| f.is_tower()) {
        let src = source(f, ctx)?;
        let cover = src.cover().expect("towers are covers");
        for nr in &f.reps {
            let rep = representation(src.group(), &nr.spec())?;
            let r = pullback_bound_check(cover, &rep, ctx.policy)?;
            // every corpus tower sits over a tame base change
            suite.push(
                format!("{}/{}", f.name, nr.name),
                r.holds && r.equality,
                json!({
                    "sw_K": rational(r.sw_k),
                    "sw_K_prime": rational(r.sw_k_prime),
                    "degree": r.degree,
                    "holds": r.holds,
                    "equality": r.equality,
                    "tame_base_change": true,
                }),
            );
        }
    }
    Ok(suite)
}

fn hasse_arf(ctx: &Context) -> Result<Suite, CliError> {
    let mut suite = Suite::new();
    for f in &corpus().fixtures {
        let filt = filtration_of(&source(f, ctx)?, ctx)?;
        let jumps: Vec<Value> = upper_jumps(&filt).into_iter().map(rational).collect();
        let (passed, verdict) = match hasse_arf_check(&filt) {
            Ok(b) => (b, json!(b)),
            Err(Error::NotAbelian) => (true, Value::Null),
            Err(e) => return Err(e.into()),
        };
        suite.push(
            f.name.clone(),
            passed,
            json!({
                "abelian": filt.group().is_abelian(),
                "lower_jumps": filt.lower_jumps(),
                "upper_jumps": jumps,
                "integral": verdict,
            }),
        );
    }
    Ok(suite)
}

fn transitivity(ctx: &Context) -> Result<Suite, CliError> {
    let mut suite = Suite::new();
    for f in corpus().fixtures.iter().filter(|f| f.is_tower()) {
        let src = source(f, ctx)?;
        let r = phi_transitivity_check(src.cover().expect("towers are covers"), ctx.policy)?;
        let zero = Q::from_integer(0);
        let passed = r.quotient_consistent && r.points.iter().all(|p| p.residual == zero);
        let points: Vec<Value> = r
            .points
            .iter()
            .map(|p| json!({"u": rational(p.u), "lhs": rational(p.lhs), "rhs": rational(p.rhs)}))
            .collect();
        suite.push(
            f.name.clone(),
            passed,
            json!({
                "phi_L_K": encode::herbrand(&r.phi_l_k),
                "phi_L_Kp": encode::herbrand(&r.phi_l_kp),
                "phi_Kp_K": encode::herbrand(&r.phi_kp_k),
                "quotient_consistent": r.quotient_consistent,
                "points": points,
            }),
        );
    }
    Ok(suite)
}

fn claim1(ctx: &Context) -> Result<Suite, CliError> {
    let mut suite = Suite::new();
    let mut cases: Vec<(usize, u64, u32, Option<u64>)> = vec![
        (1, 2, 1, None),
        (1, 3, 1, None),
        (1, 2, 2, None),
        (2, 2, 1, None),
        (2, 3, 1, None),
        (2, 2, 2, None),
        (3, 2, 1, Some(4)),
    ];
    if ctx.exhaustive {
        cases.extend([(2, 5, 1, None), (3, 3, 1, None), (2, 2, 3, None)]);
    }
    for (r, ell, n, expect) in cases {
        let m = max_ell_element_order(r, ell, n, true, 0, ctx.seed)?;
        let passed = m.exhaustive && m.claim_holds && expect.is_none_or(|e| e == m.max_order);
        suite.push(
            format!("max_order/r{r}_l{ell}_n{n}"),
            passed,
            json!({
                "max_order": m.max_order,
                "examined": m.examined,
                "exhaustive": m.exhaustive,
                "expected": expect,
            }),
        );
    }

    let samples: &[(usize, u64, u32, u64, usize)] = &[
        (1, 7, 1, 3, 3),
        (2, 3, 1, 2, 8),
        (2, 5, 1, 2, 4),
        (2, 5, 1, 3, 3),
    ];
    for &(r, ell, n, p, count) in samples {
        let groups = inertia_candidate_sample(r, ell, n, p, count, ctx.seed, SAMPLE_CAP)?;
        for (i, g) in groups.into_iter().enumerate() {
            let s = structure_of(g, p)?;
            let c = claim1_check(&s, r);
            let t = tameizing_subgroup(&s)?;
            suite.push(
                format!("sample/r{r}_l{ell}_n{n}_p{p}/{i}"),
                c.holds() && t.holds(),
                json!({
                    "order": s.order(),
                    "abelian": s.group.is_abelian(),
                    "p_sylow_order": s.p_sylow_order(),
                    "M": s.m,
                    "max_ell_order": c.max_ell_order,
                    "exponent_bound": c.exponent_bound,
                    "H_order": t.h.len(),
                    "index_tame": t.index_tame,
                    "tameizing_holds": t.holds(),
                }),
            );
        }
    }
    Ok(suite)
}

fn claim2(ctx: &Context, warnings: &mut Vec<String>) -> Result<Suite, CliError> {
    let mut suite = Suite::new();
    let corpus = corpus();
    let mut overrides: BTreeMap<String, u64> = corpus.jordan_overrides.clone();
    overrides.extend(ctx.jordan.clone());
    let table = jordan_table(Some(&overrides))?;
    for (r, j) in table.entries() {
        if table.is_user_supplied(*r) {
            warnings.push(format!("J({r}) = {j} is user-supplied, not verified"));
        }
    }
    let mut printed_failures = 0;
    for f in &corpus.fixtures {
        let src = source(f, ctx)?;
        let filt = filtration_of(&src, ctx)?;
        for nr in &f.reps {
            let rep = representation(src.group(), &nr.spec())?;
            let sw = swan_conductor(&rep, &filt)?.swan;
            for n_bound in [1u64, 3] {
                if sw > Q::from_integer(n_bound as i64) {
                    continue;
                }
                let mut scratch = Vec::new();
                let (v, holds) =
                    bound_pipeline(&filt, &rep, Some(n_bound), &table, false, &mut scratch)?;
                if v["wild_order"]["printed_bound_holds"] == json!(false) {
                    printed_failures += 1;
                }
                suite.push(format!("{}/{}/N{n_bound}", f.name, nr.name), holds, v);
            }
        }
    }
    if printed_failures > 0 {
        warnings.push(format!(
            "printed bound r·p^N'·J failed on {printed_failures} pipeline instances"
        ));
    }

    let c = explicit_constants(1, 3, 2, 1, 1, true)?;
    let golden = c.n_prime == 2
        && c.m0 == 9u32.into()
        && c.m_crude == FactorialBound::Exact(362880u32.into());
    suite.push(
        "explicit_constants/r1_p3_l2_N1_J1".into(),
        golden,
        json!({
            "N_prime": c.n_prime,
            "M0": encode::big(&c.m0),
            "M_crude": encode::factorial_bound(&c.m_crude),
        }),
    );

    for (r, ell, p, s) in [(1usize, 2u64, 3u64, 1u32), (2, 2, 3, 1), (2, 3, 2, 1)] {
        let pr = abelian_p_bound_probe(r, ell, p, s, EXHAUSTIVE_CAP)?;
        if !pr.le_printed_bound {
            warnings.push(format!(
                "abelian {p}-subgroup of order {} in GL_{r} over F_{ell}^{} exceeds r·p^s",
                pr.max_order_found, pr.n
            ));
        }
        suite.push(
            format!("probe/r{r}_l{ell}_p{p}_s{s}"),
            pr.le_torus_bound,
            json!({
                "n": pr.n,
                "max_order_found": pr.max_order_found,
                "exhaustive": pr.exhaustive,
                "le_printed_bound": pr.le_printed_bound,
                "le_torus_bound": pr.le_torus_bound,
            }),
        );
    }
    Ok(suite)
}

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn random_valid(rng: &mut ChaCha8Rng) -> DecompositionData {
    let p = PRIMES[rng.gen_range(0..PRIMES.len())];
    let e = rng.gen_range(1..=30);
    let f_sep = rng.gen_range(1..=6);
    let f_insep = p.pow(rng.gen_range(0..=3));
    let t = rng.gen_range(1..=5);
    DecompositionData {
        order_i: t * f_sep * e * f_insep,
        t,
        e,
        f_sep,
        f_insep,
        p,
    }
}

/// Breaks one constraint of a valid instance.
fn corrupt(d: DecompositionData, rng: &mut ChaCha8Rng) -> (DecompositionData, &'static str) {
    let mut d = d;
    match rng.gen_range(0..4) {
        0 => {
            d.order_i += 1;
            (d, "product_mismatch")
        }
        1 => {
            let q = if d.p == 3 { 5 } else { 3 };
            d.f_insep *= q;
            d.order_i *= q;
            (d, "insep_not_p_power")
        }
        2 => {
            d.p = [4, 6, 9, 1][rng.gen_range(0..4)];
            (d, "p_not_prime")
        }
        _ => {
            d.e = 0;
            (d, "zero_ramification")
        }
    }
}

fn data_json(d: &DecompositionData) -> Value {
    json!({
        "order_I": d.order_i, "t": d.t, "e": d.e,
        "f_sep": d.f_sep, "f_insep": d.f_insep, "p": d.p,
    })
}

fn counts(ctx: &Context) -> Result<Suite, CliError> {
    let mut suite = Suite::new();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    for i in 0..COUNT_INSTANCES {
        let d = random_valid(&mut rng);
        let r = decomposition_counts(&d)?;
        let tame = d.f_insep == 1 && d.e.gcd(&d.p) == 1;
        let passed = r.order_ic == d.order_i / (d.t * d.f_sep)
            && r.order_ic == d.e * d.f_insep
            && r.tame == tame;
        suite.push(
            format!("valid/{i}"),
            passed,
            json!({"data": data_json(&d), "order_IC": r.order_ic, "tame": r.tame}),
        );

        let (bad, how) = corrupt(d, &mut rng);
        let outcome = decomposition_counts(&bad);
        let rejected = matches!(outcome, Err(Error::InconsistentCounts(_)));
        suite.push(
            format!("invalid/{i}"),
            rejected,
            json!({
                "data": data_json(&bad),
                "corruption": how,
                "error": outcome.err().map(|e| e.name()),
            }),
        );
    }

    for (name, g, f_sep, e, f_insep, p) in star_examples()? {
        let all: Vec<usize> = g.elements().collect();
        let r = star_kernel_check(&g, &all, f_sep, e, f_insep, p)?;
        suite.push(
            format!("star/{name}"),
            r.holds && r.unique_sylow,
            json!({
                "kernel_order": r.kernel.len(),
                "kernel_sylow_order": r.kernel_sylow_order,
                "unique_sylow": r.unique_sylow,
            }),
        );
    }
    Ok(suite)
}

type StarCase = (&'static str, FiniteGroup, u64, u64, u64, u64);

fn star_examples() -> Result<Vec<StarCase>, CliError> {
    let z6 = FiniteGroup::cyclic(6);
    let z2x4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(4));
    let k = FiniteField::new(7, 1)?;
    let rot = MatrixFF::from_rows(&k, &[vec![0, 6], vec![1, 6]])?;
    let refl = MatrixFF::from_rows(&k, &[vec![0, 1], vec![1, 0]])?;
    let s3 = group_closure(&[rot, refl], 100)?;
    Ok(vec![
        ("z6_fsep3", z6.clone(), 3, 2, 1, 2),
        ("z6_fsep2_p3", z6, 2, 3, 1, 3),
        ("z2xz4_insep", z2x4, 2, 2, 2, 2),
        ("s3_fsep2", s3, 2, 3, 1, 3),
    ])
}
