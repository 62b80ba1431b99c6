use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn ramify(args: &[&str], stdin: &str, envs: &[(&str, &str)]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ramify"))
        .args(args)
        .envs(envs.iter().copied())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    // the process may exit on a usage error before reading its input
    if let Err(e) = child.stdin.take().unwrap().write_all(stdin.as_bytes()) {
        assert_eq!(e.kind(), std::io::ErrorKind::BrokenPipe);
    }
    child.wait_with_output().unwrap()
}

fn run_job(job: &Value, args: &[&str]) -> (i32, Value) {
    let mut all = vec!["run"];
    all.extend_from_slice(args);
    let out = ramify(&all, &job.to_string(), &[]);
    (
        out.status.code().unwrap(),
        serde_json::from_slice(&out.stdout).unwrap(),
    )
}

fn q(num: i64, den: i64) -> Value {
    json!({"num": num, "den": den})
}

fn artin_schreier(p: u64, m: i64) -> Value {
    json!({"base": {"p": p, "a": 1}, "cover": {"type": "artin_schreier", "f": [[-m, 1]]}})
}

fn z6_tower() -> Value {
    json!({"base": {"p": 2, "a": 2}, "cover": {"type": "tower", "m": 3, "f": [[-1, 1]]}})
}

fn with(mut base: Value, extra: Value) -> Value {
    for (k, v) in extra.as_object().unwrap() {
        base[k] = v.clone();
    }
    base
}

#[test]
fn filtration_of_artin_schreier_cover() {
    let (code, report) = run_job(
        &with(artin_schreier(2, 3), json!({"command": "filtration"})),
        &[],
    );
    assert_eq!(code, 0);
    let f = &report["results"]["filtration"];
    assert_eq!(f["lower_jumps"], json!([3]));
    assert_eq!(f["upper_jumps"], json!([q(3, 1)]));
    assert_eq!(f["hasse_arf"], json!(true));
    assert_eq!(report["results"]["elements"][1]["i_G"], json!(4));
    assert_eq!(report["version"], json!(env!("CARGO_PKG_VERSION")));
}

#[test]
fn herbrand_of_tower() {
    let (code, report) = run_job(&with(z6_tower(), json!({"command": "herbrand"})), &[]);
    assert_eq!(code, 0);
    let r = &report["results"];
    assert_eq!(
        r["checks"],
        json!({"shape": true, "psi_phi_identity": true, "integer_point_formula": true})
    );
    assert_eq!(r["final_slope"], q(1, 6));
    assert_eq!(r["upper_jumps"], json!([q(0, 1), q(1, 1)]));
}

#[test]
fn swan_of_faithful_tower_character() {
    let job = with(
        z6_tower(),
        json!({"command": "swan", "rep": {"ell": 7, "n": 1, "r": 1, "generators": [[[6]], [[2]]]}}),
    );
    let (code, report) = run_job(&job, &[]);
    assert_eq!(code, 0);
    let r = &report["results"];
    assert_eq!(r["swan"], q(1, 1));
    assert_eq!(r["single_break"], q(1, 1));
    assert_eq!(r["breaks"], json!([[q(1, 1), 1]]));
}

#[test]
fn break_table_input_allows_fractional_swan() {
    let job = json!({
        "command": "swan",
        "base": {"p": 2, "a": 1},
        "cover": {"type": "breaks", "group": {"cyclic_factors": [4]}, "breaks": [[[1], 2], [[2], 5], [[3], 2]]},
        "rep": {"ell": 5, "n": 1, "r": 1, "generators": [[[2]]]},
    });
    let (code, report) = run_job(&job, &[]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["swan"], q(5, 2));
    assert_eq!(report["results"]["single_break"], Value::Null);
}

#[test]
fn reports_are_deterministic_and_digest_tracks_options() {
    let job = with(z6_tower(), json!({"command": "herbrand"}));
    let a = ramify(&["run"], &job.to_string(), &[]);
    let b = ramify(&["run"], &job.to_string(), &[]);
    assert_eq!(a.stdout, b.stdout);
    let c = ramify(&["run", "--seed", "5"], &job.to_string(), &[]);
    let digest =
        |o: &Output| serde_json::from_slice::<Value>(&o.stdout).unwrap()["inputs_digest"].clone();
    assert_ne!(digest(&a), digest(&c));
}

#[test]
fn bound_needs_a_jordan_constant_for_rank_two() {
    let job = with(
        artin_schreier(2, 1),
        json!({"command": "bound", "rep": {"ell": 3, "n": 1, "r": 2, "generators": [[[0, 1], [1, 0]]]}}),
    );
    let (code, report) = run_job(&job, &[]);
    assert_eq!(code, 1);
    assert_eq!(report["error"]["kind"], json!("NoBoundConfigured"));

    let dir = std::env::temp_dir().join(format!("ramify-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let table = dir.join("jordan.json");
    std::fs::write(&table, r#"{"2": 60}"#).unwrap();
    let (code, report) = run_job(&job, &["--jordan-table", table.to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = &report["results"]["pipeline"];
    assert_eq!(r["J"], json!(60));
    assert_eq!(r["constants"]["N_prime"], json!(3 * 2 * 60));
    assert_eq!(r["holds"], json!(true));
    let warnings = report["warnings"].as_array().unwrap();
    assert!(warnings
        .iter()
        .any(|w| w.as_str().unwrap().contains("user-supplied")));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn decomposition_counts_job() {
    let job = json!({"command": "bound", "params": {"decomposition": {"order_i": 12, "t": 1, "e": 3, "f_sep": 2, "f_insep": 2, "p": 2}}});
    let (code, report) = run_job(&job, &[]);
    assert_eq!(code, 0);
    assert_eq!(
        report["results"]["decomposition"],
        json!({"order_IC": 6, "tame": false})
    );

    let bad = json!({"command": "bound", "params": {"decomposition": {"order_i": 13, "t": 1, "e": 3, "f_sep": 2, "f_insep": 2, "p": 2}}});
    let (code, report) = run_job(&bad, &[]);
    assert_eq!(code, 1);
    assert_eq!(report["error"]["kind"], json!("InconsistentCounts"));
}

#[test]
fn enumeration_job() {
    let job = json!({"command": "enum", "params": {"task": {"mode": "max_order", "r": 3, "ell": 2, "n": 1}}});
    let (code, report) = run_job(&job, &[]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["max_order"], json!(4));
    assert_eq!(report["results"]["exhaustive"], json!(true));

    let job = json!({"command": "enum", "params": {"task": {"mode": "probe", "r": 2, "ell": 2, "p": 3, "s": 1}}});
    let (_, report) = run_job(&job, &[]);
    assert_eq!(report["results"]["max_order_found"], json!(9));
    assert_eq!(report["results"]["le_torus_bound"], json!(true));
}

#[test]
fn malformed_input_exits_one() {
    let out = ramify(&["run"], "{\"command\":", &[]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], json!("InputSchemaError"));

    let (code, v) = run_job(&json!({"command": "swan", "bogus": 1}), &[]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], json!("InputSchemaError"));

    let split = json!({
        "command": "filtration",
        "base": {"p": 2, "a": 1},
        "cover": {"type": "artin_schreier", "f": [[-2, 1], [-1, 1]]},
    });
    let (code, v) = run_job(&split, &[]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], json!("PoleOrderDivisibleByP"));

    let out = ramify(&["run"], "{}", &[("RAMIFY_PRECISION_CAP", "lots")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_suite_exits_one() {
    let out = ramify(&["verify", "nonexistent"], "", &[]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], json!("UnknownSuite"));
}

#[test]
fn output_file_is_written() {
    let dir = std::env::temp_dir().join(format!("ramify-out-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = ramify(
        &[
            "verify",
            "claim1",
            "--exhaustive",
            "--output",
            path.to_str().unwrap(),
        ],
        "",
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["results"]["passed"], json!(true));
    let names: Vec<&str> = v["results"]["instances"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"max_order/r3_l3_n1"));
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn precision_cap_from_environment() {
    let job = with(artin_schreier(2, 7), json!({"command": "filtration"}));
    let out = ramify(
        &["run", "--precision", "16"],
        &job.to_string(),
        &[("RAMIFY_PRECISION_CAP", "8")],
    );
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], json!("InputSchemaError"));
}
