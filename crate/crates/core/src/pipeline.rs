//! End-to-end runs over the two shipped rings, reported as named checks.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::classgroup::ClassGroupData;
use crate::error::Result;
use crate::input::RingSpec;
use crate::normform::{solve_norm_eq, NormForm};
use crate::picard::{picard_group, Check, PicardGroup};
use crate::prime::{decompose_prime, Modulus};
use crate::ray::{congruence_subgroup, split_scan, verify_splitting, CongruenceSubgroup, RowStatus, SplitMode, SplitStatus};
use crate::residue::ResidueUnitGroup;

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, Duration)> {
    let t = Instant::now();
    let v = f()?;
    Ok((v, t.elapsed()))
}

/// A check with its wall-clock time and time limit. `pass` covers both.
#[derive(Clone, Debug)]
pub struct TimedCheck {
    pub check: Check,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl TimedCheck {
    pub fn pass(&self) -> bool {
        self.check.pass && self.in_time()
    }

    pub fn in_time(&self) -> bool {
        self.elapsed <= self.limit
    }

    /// Detail with timing appended.
    pub fn timed_detail(&self) -> String {
        format!(
            "{}; {:.2}s (limit {}s){}",
            self.check.detail,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            if self.in_time() { "" } else { " TOO SLOW" }
        )
    }
}

fn check(name: &str, pass: bool, limit: Duration, took: Duration, detail: String) -> TimedCheck {
    TimedCheck { check: Check { name: name.to_string(), pass, detail }, elapsed: took, limit }
}

fn primes_of(ideal_primes: &[Option<crate::prime::PrimeIdeal>]) -> Vec<String> {
    ideal_primes.iter().map(|p| p.as_ref().map_or("?".to_string(), |p| p.p().to_string())).collect()
}

/// Split primes below `bound` whose status is not excluded and that avoid `skip`.
fn split_set(scan: &[(u64, SplitStatus)], skip: &[u64]) -> Vec<u64> {
    scan.iter().filter(|(l, s)| *s == SplitStatus::Split && !skip.contains(l)).map(|(l, _)| *l).collect()
}

fn coprime_to(scan: &[(u64, SplitStatus)], bad: u64) -> bool {
    scan.iter().filter(|(_, s)| *s != SplitStatus::Excluded).all(|(l, _)| bad % l != 0)
}

/// Does the solver find `f(tuple) = l a^m` with exactly this `m`?
fn recovers(spec: &RingSpec, nf: &NormForm, ell: i64, m: u32, tuple: &[i64], max_m: u32, radius: i64) -> Result<bool> {
    let sols = solve_norm_eq(spec.k(), nf, &BigInt::from(ell), &spec.a, max_m, radius)?;
    let t: Vec<BigInt> = tuple.iter().map(|&x| BigInt::from(x)).collect();
    Ok(sols.iter().any(|s| s.m == m && s.tuple == t && s.sign == 1))
}

/// The subgroup of `Cl^m` attached to the maximal order with trivial modulus.
pub fn hilbert_datum(spec_k: &crate::field::NumberField, cl: &ClassGroupData) -> Result<(PicardGroup, CongruenceSubgroup)> {
    let ring = crate::ring::NumberRing::maximal(spec_k);
    let pic = picard_group(spec_k, &ring, cl)?;
    let cs = congruence_subgroup(spec_k, &pic, cl)?;
    Ok((pic, cs))
}

/// Trivial ring checks: `Pic(o_K) = Cl_K` and the congruence subgroup at `m = (1)`.
pub fn trivial_ring_check(label: &str, k: &crate::field::NumberField, cl: &ClassGroupData) -> Result<TimedCheck> {
    let ((pic, cs), took) = timed(|| hilbert_datum(k, cl))?;
    let ok_pic = pic.group().invariants() == cl.group().invariants();
    let ok_mod = cs.ray.modulus().finite().is_unit() && cs.ray.modulus().infinite().is_empty();
    let ok_ray = cs.ray.group().invariants() == cl.group().invariants();
    // H = P_K: the subgroup is trivial and the quotient is all of Cl_K
    let ok_sub = cs.index == cl.order();
    Ok(check(
        &format!("trivial ring {label}"),
        ok_pic && ok_mod && ok_ray && ok_sub,
        Duration::from_secs(5),
        took,
        format!("Pic(o_K) = {:?}, Cl_K = {:?}, index at m = (1): {}", pic.group().invariants_i64(), cl.group().invariants_i64(), cs.index),
    ))
}

pub fn example1_checks(spec: &RingSpec) -> Result<Vec<TimedCheck>> {
    let k = spec.k();
    let mut out = Vec::new();

    let (cl, took) = timed(|| spec.classgroup(None))?;
    let gp = primes_of(cl.gen_primes());
    out.push(check(
        "Example 1 class group",
        cl.group().invariants_i64() == vec![16, 2] && gp == ["7", "5"],
        Duration::from_secs(5),
        took,
        format!("invariants {:?}, generators above {:?}", cl.group().invariants_i64(), gp),
    ));

    let (pic, took) = timed(|| picard_group(k, &spec.ring, &cl)?.with_representatives(k, &cl, &[]))?;
    let p5 = decompose_prime(k, &BigInt::from(5))?;
    let gen_ok = pic.generator_ideals().first().and_then(|g| g.clone()).is_some_and(|g| p5.iter().any(|p| p.ideal() == &g));
    out.push(check(
        "Example 1 Picard group",
        pic.group().invariants_i64() == vec![2] && gen_ok,
        Duration::from_secs(5),
        took,
        format!("invariants {:?}, generator is the prime above 5: {gen_ok}", pic.group().invariants_i64()),
    ));

    let (cs, took) = timed(|| congruence_subgroup(k, &pic, &cl))?;
    let seven = crate::ideal::FracIdeal::from_int(k.degree(), &BigInt::from(7));
    let res = ResidueUnitGroup::new(k, &seven, &[])?;
    let units: Vec<Vec<BigInt>> = cl.units().generators().iter().map(|u| res.dlog(k, u)).collect::<Result<_>>()?;
    let unit_image = res.group().order() / res.group().quotient(&res.group().subgroup_matrix(&units)?)?.order();
    let identity = cl.order() * res.group().order() / &unit_image;
    out.push(check(
        "Example 1 congruence subgroup",
        cs.ray.modulus().finite() == &seven && cs.index == BigInt::from(2) && cs.ray.order() == identity && identity == BigInt::from(576),
        Duration::from_secs(10),
        took,
        format!(
            "m = (7), index {}, |Cl^m| = {} vs |Cl_K| |(o_K/7)^*| / |im units| = {} * {} / {} = {}",
            cs.index,
            cs.ray.order(),
            cl.order(),
            res.group().order(),
            unit_image,
            identity
        ),
    ));

    let (scan, took) = timed(|| split_scan(k, &pic, &cl, 100, SplitMode::Complete))?;
    let got = split_set(&scan, &[19]);
    let at19 = scan.iter().find(|(l, _)| *l == 19).map(|(_, s)| *s);
    out.push(check(
        "Example 1 split set",
        coprime_to(&scan, 2 * 5 * 7 * 71) && got == vec![17, 23, 47, 79, 97],
        Duration::from_secs(10),
        took,
        format!("split primes < 100 (19 left out) {got:?}, expected [17, 23, 47, 79, 97]; 19 reported as {at19:?}"),
    ));
    let g = spec.class_field_poly.clone().unwrap_or_default();
    let disc_g = crate::poly::discriminant(&g);
    let bad: Vec<u64> = (2..100u64).filter(|&l| (&disc_g % BigInt::from(l)).is_zero()).collect();
    out.push(check(
        "Example 1 split set, primes prime to the polynomial discriminant",
        split_set(&scan, &bad) == vec![17, 23, 47, 79, 97],
        Duration::from_secs(10),
        took,
        format!("split primes < 100 not dividing disc(g): {:?}", split_set(&scan, &bad)),
    ));

    let (rows, took) = timed(|| verify_splitting(k, &pic, &cl, &g, 100))?;
    let compared = rows.iter().filter(|r| matches!(r.status, RowStatus::Agree | RowStatus::Disagree)).count();
    let bad_rows: Vec<u64> = rows.iter().filter(|r| r.status == RowStatus::Disagree).map(|r| r.ell).collect();
    out.push(check(
        "Example 1 reciprocity cross-check",
        bad_rows.is_empty() && compared > 0,
        Duration::from_secs(10),
        took,
        format!("{compared} rows compared, disagreements at {bad_rows:?}"),
    ));

    let nf = spec.norm_form()?;
    let ids: [(i64, u32, [i64; 2]); 5] = [(17, 5, [447, 11]), (23, 7, [1593, 152]), (47, 3, [69, 4]), (79, 4, [173, 15]), (97, 7, [1991, 327])];
    let (found, took) = timed(|| ids.iter().map(|(l, m, t)| recovers(spec, &nf, *l, *m, t, 7, 2500)).collect::<Result<Vec<bool>>>())?;
    out.push(check(
        "Example 1 norm identities",
        nf.display() == "X^2 + 710Y^2" && found.iter().all(|&b| b),
        Duration::from_secs(60),
        took,
        format!("f = {}, recovered {:?}", nf.display(), ids.iter().zip(&found).map(|((l, _, _), b)| (*l, *b)).collect::<Vec<_>>()),
    ));
    Ok(out)
}

pub fn example2_checks(spec: &RingSpec) -> Result<Vec<TimedCheck>> {
    let k = spec.k();
    let start = Instant::now();
    let mut parts: Vec<(String, bool)> = Vec::new();
    parts.push((format!("disc {}", k.disc()), k.disc() == &BigInt::from(18000)));
    let cl = spec.classgroup(None);
    let cl = match cl {
        Ok(c) => c,
        Err(e) => {
            return Ok(vec![check("Example 2 pipeline", false, Duration::from_secs(120), start.elapsed(), format!("class group input rejected: {e}"))])
        }
    };
    parts.push((format!("Cl_K {:?} accepted", cl.group().invariants_i64()), cl.group().invariants_i64() == vec![2, 2]));
    let pic = picard_group(k, &spec.ring, &cl)?.with_representatives(k, &cl, &[])?;
    let p2 = decompose_prime(k, &BigInt::from(2))?;
    let gen_ok = pic.generator_ideals().first().and_then(|g| g.clone()).is_some_and(|g| p2.iter().any(|p| p.ideal() == &g));
    parts.push((format!("Pic(R) {:?}, generator above 2: {gen_ok}", pic.group().invariants_i64()), pic.group().invariants_i64() == vec![2] && gen_ok));
    let scan = split_scan(k, &pic, &cl, 150, SplitMode::Complete)?;
    let got = split_set(&scan, &[]);
    parts.push((format!("split set < 150 {got:?}"), coprime_to(&scan, 2 * 3 * 5 * 11) && got == vec![61, 71, 131]));
    let g = spec.class_field_poly.clone().unwrap_or_default();
    let rows = verify_splitting(k, &pic, &cl, &g, 150)?;
    let disagree: Vec<u64> = rows.iter().filter(|r| r.status == RowStatus::Disagree).map(|r| r.ell).collect();
    let compared = rows.iter().filter(|r| r.status == RowStatus::Agree).count();
    parts.push((format!("cross-check {compared} rows agree, disagreements {disagree:?}"), disagree.is_empty() && compared > 0));
    let nf = spec.norm_form()?;
    let ok61 = recovers(spec, &nf, 61, 0, &[1, 1, 0, 0], 3, 3)?;
    let ok71 = recovers(spec, &nf, 71, 1, &[1, 2, 0, 0], 3, 3)?;
    let ok131 = recovers(spec, &nf, 131, 3, &[2, 8, 3, 1], 3, 8)?;
    parts.push((format!("solver 61: {ok61}, 71*11: {ok71}, 131*11^3: {ok131}"), ok61 && ok71 && ok131));
    let pass = parts.iter().all(|(_, b)| *b);
    let detail = parts.iter().map(|(d, b)| format!("{d}{}", if *b { "" } else { " [wrong]" })).collect::<Vec<_>>().join("; ");
    Ok(vec![check("Example 2 pipeline", pass, Duration::from_secs(120), start.elapsed(), detail)])
}

/// Convenience for callers holding only the ring: modulus of its congruence datum.
pub fn ring_modulus(spec: &RingSpec) -> Result<Modulus> {
    Modulus::new(spec.k(), spec.ring.modulus(spec.k()), vec![])
}

