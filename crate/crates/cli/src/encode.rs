//! Canonical JSON encodings. Objects are key-sorted (serde_json's default
//! map), numbers are integers, rationals are `{"num", "den"}`.

use std::str::FromStr;

use num_bigint::BigUint;
use ramify_core::algebra::{LaurentSeries, MatrixFF, EXACT};
use ramify_core::bound::FactorialBound;
use ramify_core::ramification::{Herbrand, Q};
use serde_json::{json, Number, Value};
use sha2::{Digest, Sha256};

pub fn rational(q: Q) -> Value {
    json!({"num": *q.numer(), "den": *q.denom()})
}

pub fn big(b: &BigUint) -> Value {
    Value::Number(Number::from_str(&b.to_string()).expect("decimal digits"))
}

pub fn factorial_bound(f: &FactorialBound) -> Value {
    match f {
        FactorialBound::Exact(v) => json!({"exact": big(v)}),
        FactorialBound::Symbolic { m0 } => json!({"factorial_of": big(m0)}),
    }
}

/// `[[exponent, [coordinates]], ...]` plus the absolute precision (null if
/// exact).
pub fn series(s: &LaurentSeries) -> Value {
    let k = s.field();
    let terms: Vec<Value> = s.terms().map(|(e, c)| json!([e, k.digits(c)])).collect();
    let prec = if s.absolute_precision() == EXACT {
        Value::Null
    } else {
        json!(s.absolute_precision())
    };
    json!({"terms": terms, "precision": prec})
}

pub fn matrix(m: &MatrixFF) -> Value {
    let k = m.field();
    let n = m.dim();
    let rows: Vec<Value> = (0..n)
        .map(|i| Value::Array((0..n).map(|j| json!(k.digits(m.get(i, j)))).collect()))
        .collect();
    Value::Array(rows)
}

pub fn herbrand(h: &Herbrand) -> Value {
    let bps: Vec<Value> = h
        .breakpoints()
        .iter()
        .map(|&(x, y)| json!([rational(x), rational(y)]))
        .collect();
    let slopes: Vec<Value> = h.slopes().iter().map(|&s| rational(s)).collect();
    json!({"breakpoints": bps, "slopes": slopes})
}

pub fn breaks(b: &[(Q, u64)]) -> Value {
    Value::Array(b.iter().map(|&(l, m)| json!([rational(l), m])).collect())
}

pub fn canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON values always serialize")
}

pub fn digest(v: &Value) -> String {
    hex::encode(Sha256::digest(canonical(v).as_bytes()))
}
