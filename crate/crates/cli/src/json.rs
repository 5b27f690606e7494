//! JSON encodings of library objects. Integers that fit in i64 are numbers,
//! larger ones are decimal strings.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use nrc_core::field::{Elem, NumberField};
use nrc_core::ideal::FracIdeal;
use nrc_core::linalg::IntMat;
use nrc_core::prime::{factor_ideal, PrimeIdeal};

pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn matrix_rows(m: &IntMat) -> Value {
    Value::Array(m.to_rows().iter().map(|r| ints(r)).collect())
}

/// Integral-basis coordinates; rational entries as `"p/q"`.
pub fn elem(x: &Elem) -> Value {
    if x.den().is_one() {
        return ints(x.num());
    }
    Value::Array(x.coords().iter().map(|q| if q.is_integer() { int(&q.to_integer()) } else { json!(q.to_string()) }).collect())
}

pub fn prime(p: &PrimeIdeal) -> Value {
    json!({ "p": int(p.p()), "e": p.e(), "f": p.f(), "pi": elem(p.pi()), "norm": int(&p.norm()) })
}

/// An ideal as its prime factorization plus its HNF.
pub fn ideal(k: &NumberField, a: &FracIdeal) -> Value {
    let fac = factor_ideal(k, a)
        .map(|f| Value::Array(f.iter().map(|(p, e)| json!({ "prime": prime(p), "exp": e })).collect()))
        .unwrap_or(Value::Null);
    json!({ "factorization": fac, "hnf": matrix_rows(a.hnf()), "den": int(a.den()), "norm": a.norm().to_string() })
}
