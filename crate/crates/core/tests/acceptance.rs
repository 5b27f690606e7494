//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use nrc_core::classgroup::ClassGroupData;
use nrc_core::field::NumberField;
use nrc_core::ideal::FracIdeal;
use nrc_core::input::{load_field, load_ring, RingSpec};
use nrc_core::linalg::{hnf_full, is_hnf, snf_full, IntMat};
use nrc_core::picard::{picard_group, Check, PicardGroup};
use nrc_core::pipeline::{example1_checks, example2_checks, trivial_ring_check, TimedCheck};
use nrc_core::prime::{decompose_prime, ideal_from_factorization, weak_approx, PrimeIdeal};
use nrc_core::ray::congruence_subgroup;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn ring(name: &str) -> RingSpec {
    load_ring(&root().join("rings").join(name)).expect("shipped ring loads")
}

fn random_matrix(rng: &mut StdRng) -> IntMat {
    let r = rng.random_range(1..=8usize);
    let c = rng.random_range(1..=8usize);
    let sparse = rng.random_bool(0.3);
    let rows = (0..r)
        .map(|_| {
            (0..c)
                .map(|_| if sparse && rng.random_bool(0.6) { BigInt::zero() } else { BigInt::from(rng.random_range(-1_000_000i64..=1_000_000)) })
                .collect()
        })
        .collect();
    IntMat::from_rows(rows).unwrap()
}

fn hnf_snf_suite() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    for t in 0..500 {
        let m = random_matrix(&mut rng);
        let h = hnf_full(&m);
        if &m * &h.u != h.h || !h.u.is_unimodular() || !is_hnf(&h.h) {
            return Err(format!("HNF identity failed on matrix {t}"));
        }
        let s = snf_full(&m);
        if &(&s.u * &m) * &s.v != s.d || !s.u.is_unimodular() || !s.v.is_unimodular() || !s.d.is_diagonal() {
            return Err(format!("SNF identity failed on matrix {t}"));
        }
        let d = s.diagonal();
        for w in d.windows(2) {
            let ok = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            if !ok {
                return Err(format!("SNF divisibility chain broken on matrix {t}: {d:?}"));
            }
        }
        if s.rank() != h.rank {
            return Err(format!("rank mismatch on matrix {t}"));
        }
    }
    Ok("500 matrices".into())
}

fn ideal_suite(fields: &[&NumberField]) -> Result<String, String> {
    let mut count = 0;
    for k in fields {
        let n = k.degree() as u32;
        for ell in nrc_core::arith::primes_up_to(99) {
            let ell = BigInt::from(ell);
            let primes = decompose_prime(k, &ell).map_err(|e| e.to_string())?;
            let sum: u32 = primes.iter().map(|p| p.e() * p.f()).sum();
            if sum != n {
                return Err(format!("sum e f = {sum} at {ell}"));
            }
            let fac: Vec<(PrimeIdeal, i64)> = primes.iter().map(|p| (p.clone(), p.e() as i64)).collect();
            if ideal_from_factorization(k, &fac) != FracIdeal::from_int(n as usize, &ell) {
                return Err(format!("product of primes above {ell} is not {ell} o_K"));
            }
            for p in &primes {
                if p.ideal().norm_int() != ell.pow(p.f()) {
                    return Err(format!("N(P) != {ell}^f"));
                }
                for q in &primes {
                    let prod = p.ideal().mul(k, q.ideal());
                    if prod.norm_int() != p.ideal().norm_int() * q.ideal().norm_int() {
                        return Err(format!("norm not multiplicative above {ell}"));
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} prime pairs"))
}

fn weak_approx_suite(fields: &[&NumberField]) -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    let mut pools = Vec::new();
    for k in fields {
        pools.push(nrc_core::prime::primes_up_to_norm(k, 60).map_err(|e| e.to_string())?);
    }
    for t in 0..100 {
        let which = t % fields.len();
        let (k, pool) = (fields[which], &pools[which]);
        let size = rng.random_range(1..=3usize.min(pool.len()));
        let mut chosen: Vec<(PrimeIdeal, i64)> = Vec::new();
        while chosen.len() < size {
            let p = &pool[rng.random_range(0..pool.len())];
            if !chosen.iter().any(|(q, _)| q == p) {
                chosen.push((p.clone(), rng.random_range(-3i64..=3)));
            }
        }
        let x = weak_approx(k, &chosen).map_err(|e| e.to_string())?;
        for (p, e) in &chosen {
            if p.valuation(&x) != *e {
                return Err(format!("instance {t}: v_P(x) = {} != {e}", p.valuation(&x)));
            }
        }
        // x o_K * prod P^{-e} must be integral
        let rest = FracIdeal::principal(k, &x).unwrap().mul(k, &ideal_from_factorization(k, &chosen.iter().map(|(p, e)| (p.clone(), -e)).collect::<Vec<_>>()));
        if !rest.is_integral() {
            return Err(format!("instance {t}: negative valuation outside S"));
        }
    }
    Ok("100 instances".into())
}

fn additivity_suite(k: &NumberField, cl: &ClassGroupData, pic: &PicardGroup, seed: u64) -> Result<usize, String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let bad = pic.modulus_primes();
    let pool: Vec<PrimeIdeal> = nrc_core::prime::primes_up_to_norm(k, 80)
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|p| !bad.contains(p))
        .collect();
    let random_ideal = |rng: &mut StdRng| {
        let parts: Vec<(PrimeIdeal, i64)> = (0..rng.random_range(1..=3)).map(|_| (pool[rng.random_range(0..pool.len())].clone(), rng.random_range(-2i64..=2))).collect();
        ideal_from_factorization(k, &parts)
    };
    let g = pic.group();
    for t in 0..50 {
        let a = random_ideal(&mut rng);
        let b = random_ideal(&mut rng);
        let da = pic.dlog(k, cl, &a).map_err(|e| e.to_string())?;
        let db = pic.dlog(k, cl, &b).map_err(|e| e.to_string())?;
        let dab = pic.dlog(k, cl, &a.mul(k, &b)).map_err(|e| e.to_string())?;
        if dab != g.add(&da, &db) {
            return Err(format!("pair {t}: dlog(ab) != dlog(a) + dlog(b)"));
        }
    }
    Ok(50)
}

fn property_suites(ex1: &RingSpec, ex2: &RingSpec) -> Check {
    let start = Instant::now();
    let k1 = ex1.k();
    let k2 = ex2.k();
    let mut parts: Vec<(String, Result<String, String>)> = Vec::new();
    parts.push(("(a) HNF/SNF".into(), hnf_snf_suite()));
    parts.push(("(b) ideals".into(), ideal_suite(&[k1, k2])));
    parts.push(("(c) weak approximation".into(), weak_approx_suite(&[k1, k2])));

    let ext = (|| -> Result<String, String> {
        let mut n = 0;
        for spec in [ex1, ex2] {
            let k = spec.k();
            let cl = spec.classgroup(None).map_err(|e| e.to_string())?;
            let pic = picard_group(k, &spec.ring, &cl).map_err(|e| e.to_string())?;
            if pic.order() != pic.a().order() * pic.tclass().group().order() {
                return Err("Picard group: |B| != |A| |C|".into());
            }
            let cs = congruence_subgroup(k, &pic, &cl).map_err(|e| e.to_string())?;
            if cs.ray.order() != cs.ray.a().order() * cl.order() {
                return Err("ray class group: |B| != |A| |C|".into());
            }
            let full = picard_group(k, &nrc_core::ring::NumberRing::maximal(k), &cl).map_err(|e| e.to_string())?;
            if full.order() != full.a().order() * full.tclass().group().order() {
                return Err("maximal ring: |B| != |A| |C|".into());
            }
            n += 3;
        }
        Ok(format!("{n} extensions"))
    })();
    parts.push(("(d) extension cardinality".into(), ext));

    let add = (|| -> Result<String, String> {
        let mut n = 0;
        for (spec, seed) in [(ex1, 11u64), (ex2, 12u64)] {
            let k = spec.k();
            let cl = spec.classgroup(None).map_err(|e| e.to_string())?;
            let pic = picard_group(k, &spec.ring, &cl).map_err(|e| e.to_string())?;
            n += additivity_suite(k, &cl, &pic, seed)?;
        }
        Ok(format!("{n} pairs"))
    })();
    parts.push(("(e) Picard dlog additivity".into(), add));

    let took = start.elapsed();
    let pass = parts.iter().all(|(_, r)| r.is_ok()) && took <= Duration::from_secs(60);
    let detail = parts
        .iter()
        .map(|(name, r)| match r {
            Ok(s) => format!("{name} ok ({s})"),
            Err(e) => format!("{name} FAILED: {e}"),
        })
        .collect::<Vec<_>>()
        .join("; ");
    Check { name: "property suites".into(), pass, detail: format!("{detail}; {:.2}s (limit 60s)", took.as_secs_f64()) }
}

fn trivial_rings(ex1: &RingSpec, ex2: &RingSpec) -> Check {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut pass = true;
    let gauss = load_field(&root().join("fields/gauss.toml")).expect("gauss field");
    let gauss_cl = nrc_core::classgroup::classgroup(&gauss.field, None, vec![], nrc_core::classgroup::DEFAULT_PIP_RADIUS);
    let cases: Vec<(&str, &NumberField, Result<ClassGroupData, String>)> = vec![
        ("Example 1", ex1.k(), ex1.classgroup(None).map_err(|e| e.to_string())),
        ("Example 2", ex2.k(), ex2.classgroup(None).map_err(|e| e.to_string())),
        ("Q(i)", &gauss.field, gauss_cl.map_err(|e| e.to_string())),
    ];
    for (label, k, cl) in cases {
        match cl.and_then(|cl| trivial_ring_check(label, k, &cl).map_err(|e| e.to_string())) {
            Ok(c) => {
                pass &= c.check.pass;
                lines.push(format!("{}: {}", c.check.name, if c.check.pass { "ok" } else { "wrong" }));
            }
            Err(e) => {
                pass = false;
                lines.push(format!("{label}: error {e}"));
            }
        }
    }
    let took = start.elapsed();
    pass &= took <= Duration::from_secs(5);
    Check { name: "trivial-ring regression".into(), pass, detail: format!("{}; {:.2}s (limit 5s)", lines.join("; "), took.as_secs_f64()) }
}

fn main() {
    let ex1 = ring("example1.toml");
    let ex2 = ring("example2.toml");
    let mut rows: Vec<(String, Check)> = Vec::new();
    let fail = |name: &str, e: nrc_core::Error| Check { name: name.into(), pass: false, detail: format!("error: {e}") };
    let flat = |t: TimedCheck| Check { name: t.check.name.clone(), pass: t.pass(), detail: t.timed_detail() };

    match example1_checks(&ex1) {
        Ok(cs) => {
            let labels = ["1", "2", "3", "4", "4 (companion)", "5", "6"];
            for (l, c) in labels.iter().zip(cs) {
                rows.push((l.to_string(), flat(c)));
            }
        }
        Err(e) => rows.push(("1-6".into(), fail("Example 1 pipeline", e))),
    }
    match example2_checks(&ex2) {
        Ok(cs) => rows.extend(cs.into_iter().map(|c| ("7".to_string(), flat(c)))),
        Err(e) => rows.push(("7".into(), fail("Example 2 pipeline", e))),
    }
    rows.push(("8".into(), property_suites(&ex1, &ex2)));
    rows.push(("9".into(), trivial_rings(&ex1, &ex2)));

    let mut failed = 0;
    for (label, c) in &rows {
        println!("{} [{label}] {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        if !c.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", rows.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
