//! Class groups: exact for imaginary quadratic fields via reduced forms,
//! verified input elsewhere; T-class groups and T-units.

pub mod forms;
pub mod pip;
pub mod tclass;

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::isqrt;
use crate::error::{Error, Result};
use crate::field::{Elem, NumberField};
use crate::group::{FinAbGroup, GenRep};
use crate::ideal::FracIdeal;
use crate::prime::{decompose_prime, factor_ideal, find_prime, primes_up_to_norm, PrimeIdeal};

use forms::{reduced_forms, Form, QuadraticBridge};
pub use pip::{principal_ideal_test, torsion_units, verify_unit, Principal, DEFAULT_PIP_RADIUS};
pub use tclass::{t_units, tclass_dlog, tclassgroup, TClassGroupData};


/// Roots of unity and (claimed) fundamental units.
#[derive(Clone, Debug)]
pub struct Units {
    pub torsion: Elem,
    pub torsion_order: u64,
    pub fundamental: Vec<Elem>,
}

impl Units {
    /// Torsion is computed; fundamental units are checked for unit-ness and count.
    pub fn new(k: &NumberField, fundamental: Vec<Elem>) -> Result<Self> {
        let rank = k.unit_rank();
        if fundamental.len() != rank {
            return Err(Error::MissingUnits(rank));
        }
        for u in &fundamental {
            verify_unit(k, u)?;
        }
        let (torsion, torsion_order) = torsion_units(k);
        Ok(Units { torsion, torsion_order, fundamental })
    }

    /// Torsion generator followed by the fundamental units.
    pub fn generators(&self) -> Vec<Elem> {
        std::iter::once(self.torsion.clone()).chain(self.fundamental.iter().cloned()).collect()
    }
}

/// `P * prod b_i^{exps_i} = gamma * o_K`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub prime: PrimeIdeal,
    pub exps: Vec<BigInt>,
    pub gamma: Elem,
}

/// A claimed class group, checked by [`verify_classgroup_input`].
#[derive(Clone, Debug, Default)]
pub struct ClassGroupInput {
    /// Generators as `(p, pi)` prime specifications.
    pub generators: Vec<(BigInt, Elem)>,
    pub orders: Vec<BigInt>,
    pub witnesses: Vec<Elem>,
    pub relations: Vec<RelationInput>,
}

/// `[P] = sum dlog_i [b_i]`, certified by `P * prod b_i^{(-dlog_i mod e_i)} = gamma * o_K`.
#[derive(Clone, Debug)]
pub struct RelationInput {
    pub p: BigInt,
    pub pi: Elem,
    pub dlog: Vec<BigInt>,
    pub gamma: Elem,
}

#[derive(Debug)]
enum Kind {
    Imaginary { bridge: QuadraticBridge, table: HashMap<Form, Vec<BigInt>> },
    Verified { relations: Mutex<Vec<Relation>>, pip_radius: f64 },
}

impl Clone for Kind {
    fn clone(&self) -> Self {
        match self {
            Kind::Imaginary { bridge, table } => Kind::Imaginary { bridge: bridge.clone(), table: table.clone() },
            Kind::Verified { relations, pip_radius } => Kind::Verified {
                relations: Mutex::new(relations.lock().unwrap().clone()),
                pip_radius: *pip_radius,
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassGroupData {
    group: FinAbGroup,
    gens: Vec<FracIdeal>,
    gen_primes: Vec<Option<PrimeIdeal>>,
    witnesses: Vec<Elem>,
    units: Units,
    kind: Kind,
}

impl ClassGroupData {
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn order(&self) -> BigInt {
        self.group.order()
    }

    pub fn orders(&self) -> &[BigInt] {
        self.group.invariants()
    }

    /// Generator ideals `b_i`.
    pub fn gens(&self) -> &[FracIdeal] {
        &self.gens
    }

    pub fn gen_primes(&self) -> &[Option<PrimeIdeal>] {
        &self.gen_primes
    }

    /// `alpha_i` with `b_i^{e_i} = alpha_i o_K`.
    pub fn witnesses(&self) -> &[Elem] {
        &self.witnesses
    }

    pub fn units(&self) -> &Units {
        &self.units
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.kind, Kind::Imaginary { .. })
    }

    /// Known factor-base relations (verified mode only).
    pub fn relations(&self) -> Vec<Relation> {
        match &self.kind {
            Kind::Verified { relations, .. } => relations.lock().unwrap().clone(),
            Kind::Imaginary { .. } => Vec::new(),
        }
    }

    /// `prod b_i^{v_i}`.
    pub fn ideal_of(&self, k: &NumberField, v: &[BigInt]) -> FracIdeal {
        self.gens
            .iter()
            .zip(v)
            .fold(FracIdeal::unit(k.degree()), |acc, (b, e)| acc.mul(k, &b.pow_big(k, e)))
    }

    /// Returns `(v, delta)` with `a = delta * prod b_i^{v_i}` and `0 <= v_i < e_i`.
    pub fn dlog(&self, k: &NumberField, a: &FracIdeal) -> Result<(Vec<BigInt>, Elem)> {
        match &self.kind {
            Kind::Imaginary { bridge, table } => {
                let v = table
                    .get(&bridge.class_key(k, a))
                    .cloned()
                    .ok_or_else(|| Error::Verification("ideal class missing from the class table".into()))?;
                let n = k.degree();
                let mut j = a.numerator();
                let mut div = Elem::one(n);
                for (i, vi) in v.iter().enumerate() {
                    if !vi.is_zero() {
                        let e = &self.orders()[i] - vi;
                        j = j.mul(k, &self.gens[i].pow_big(k, &e));
                        div = k.mul(&div, &self.witnesses[i]);
                    }
                }
                let g = bridge
                    .principal_generator(k, &j)
                    .ok_or_else(|| Error::Verification("class table produced a non-principal quotient".into()))?;
                let delta = k.div(&g, &div)?.scale(&BigRational::new(BigInt::one(), a.den().clone()));
                Ok((v, delta))
            }
            Kind::Verified { .. } => self.dlog_by_factoring(k, a),
        }
    }

    fn relation_for(&self, k: &NumberField, p: &PrimeIdeal) -> Result<Relation> {
        let Kind::Verified { relations, pip_radius } = &self.kind else { unreachable!() };
        if let Some(r) = relations.lock().unwrap().iter().find(|r| &r.prime == p) {
            return Ok(r.clone());
        }
        let r = derive_relation(k, &self.group, &self.gens, p, *pip_radius)?;
        relations.lock().unwrap().push(r.clone());
        Ok(r)
    }

    fn dlog_by_factoring(&self, k: &NumberField, a: &FracIdeal) -> Result<(Vec<BigInt>, Elem)> {
        let r = self.gens.len();
        let mut w = vec![BigInt::zero(); r];
        let mut delta = Elem::one(k.degree());
        for (p, m) in factor_ideal(k, a)? {
            let rel = self.relation_for(k, &p)?;
            delta = k.mul(&delta, &k.pow(&rel.gamma, m)?);
            for i in 0..r {
                w[i] -= &rel.exps[i] * m;
            }
        }
        let mut v = Vec::with_capacity(r);
        for i in 0..r {
            let (s, vi) = w[i].div_mod_floor(&self.orders()[i]);
            if !s.is_zero() {
                delta = k.mul(&delta, &k.pow_big(&self.witnesses[i], &s)?);
            }
            v.push(vi);
        }
        Ok((v, delta))
    }

    /// Principal ideal test using this class group's data.
    pub fn is_principal(&self, k: &NumberField, a: &FracIdeal) -> Result<Principal> {
        let (v, delta) = self.dlog(k, a)?;
        Ok(if v.iter().all(Zero::is_zero) { Principal::Yes(delta) } else { Principal::No })
    }
}

fn derive_relation(k: &NumberField, g: &FinAbGroup, gens: &[FracIdeal], p: &PrimeIdeal, c: f64) -> Result<Relation> {
    for u in g.elements() {
        let j = gens.iter().zip(&u).fold(p.ideal().clone(), |acc, (b, e)| acc.mul(k, &b.pow_big(k, e)));
        match principal_ideal_test(k, &j, c) {
            Ok(Principal::Yes(gamma)) => return Ok(Relation { prime: p.clone(), exps: u, gamma }),
            Ok(Principal::No) | Err(Error::Inconclusive(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Inconclusive(format!("no class group relation found for a prime above {}", p.p())))
}

fn check_principal(k: &NumberField, a: &FracIdeal, gamma: &Elem, what: &str) -> Result<()> {
    if gamma.is_zero() || &FracIdeal::principal(k, gamma)? != a {
        return Err(Error::Verification(what.to_string()));
    }
    Ok(())
}

/// Exact class group of an imaginary quadratic field.
pub fn classgroup_imag_quadratic(k: &NumberField) -> Result<ClassGroupData> {
    let br = QuadraticBridge::new(k)?;
    let d = br.disc().clone();
    let h = reduced_forms(&d).len();
    let gen_bound = isqrt(&(-&d / 3)).to_u64().unwrap_or(u64::MAX).max(1);
    let class = |i: &FracIdeal| br.class_key(k, i);

    // 1. incremental enumeration from the primes that generate
    let mut elems: HashMap<Form, Vec<i64>> = HashMap::new();
    elems.insert(Form::principal(&d), vec![]);
    let mut rel_cols: Vec<Vec<i64>> = Vec::new();
    let mut raw_gens: Vec<FracIdeal> = Vec::new();
    'outer: for p in crate::arith::primes_up_to(gen_bound) {
        for pr in decompose_prime(k, &BigInt::from(p))? {
            if elems.len() == h {
                break 'outer;
            }
            if pr.norm() > BigInt::from(gen_bound) {
                continue;
            }
            let key = class(pr.ideal());
            if elems.contains_key(&key) {
                continue;
            }
            let j = raw_gens.len();
            raw_gens.push(pr.ideal().clone());
            for v in elems.values_mut() {
                v.push(0);
            }
            for c in rel_cols.iter_mut() {
                c.push(0);
            }
            // order of the new class modulo the current subgroup
            let mut cur = br.form_ideal(k, &key);
            let mut m = 1i64;
            while !elems.contains_key(&class(&cur)) {
                cur = br.form_ideal(k, &class(&cur.mul(k, pr.ideal())));
                m += 1;
            }
            let mut col: Vec<i64> = elems[&class(&cur)].iter().map(|x| -x).collect();
            col[j] += m;
            rel_cols.push(col);
            let old: Vec<(Form, Vec<i64>)> = elems.iter().map(|(f, v)| (f.clone(), v.clone())).collect();
            for (f, v) in old {
                let mut x = br.form_ideal(k, &f);
                for i in 1..m {
                    x = br.form_ideal(k, &class(&x.mul(k, pr.ideal())));
                    let mut w = v.clone();
                    w[j] = i;
                    elems.insert(class(&x), w);
                }
            }
        }
    }
    if elems.len() != h {
        return Err(Error::Verification(format!("prime forms generated {} of {h} classes", elems.len())));
    }
    let r = raw_gens.len();
    let rel_cols: Vec<Vec<BigInt>> = rel_cols.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let g0 = FinAbGroup::from_relations(&crate::linalg::IntMat::from_cols(r, &rel_cols))?;
    let snf_of = |raw: &Vec<i64>| -> Vec<BigInt> {
        let raw: Vec<BigInt> = raw.iter().map(|&x| BigInt::from(x)).collect();
        g0.from_raw(&raw)
    };

    // 2. a basis of prime ideals matching the invariants
    let inv = g0.invariants().to_vec();
    let cand_bound = gen_bound.max(100);
    let mut cands: Vec<(PrimeIdeal, Vec<BigInt>)> = Vec::new();
    for p in crate::arith::primes_up_to(cand_bound) {
        for pr in decompose_prime(k, &BigInt::from(p))? {
            let c = snf_of(&elems[&class(pr.ideal())]);
            cands.push((pr, c));
        }
    }
    // odd residue characteristic first, then by norm
    cands.sort_by(|(a, _), (b, _)| (a.p() == &BigInt::from(2), a.norm()).cmp(&(b.p() == &BigInt::from(2), b.norm())));
    let chosen = choose_basis(&g0, &inv, &cands);
    let (gens, gen_primes, coords): (Vec<FracIdeal>, Vec<Option<PrimeIdeal>>, Vec<Vec<BigInt>>) = match chosen {
        Some(idx) => (
            idx.iter().map(|&i| cands[i].0.ideal().clone()).collect(),
            idx.iter().map(|&i| Some(cands[i].0.clone())).collect(),
            idx.iter().map(|&i| cands[i].1.clone()).collect(),
        ),
        None => {
            // fall back to the SNF generators themselves
            let mut gens = Vec::new();
            let mut coords = Vec::new();
            for i in 0..inv.len() {
                let mut e = vec![BigInt::zero(); inv.len()];
                e[i] = BigInt::one();
                let f = elems.iter().find(|(_, v)| snf_of(v) == e).map(|(f, _)| f.clone()).unwrap();
                gens.push(br.form_ideal(k, &f));
                coords.push(e);
            }
            (gens, vec![None; inv.len()], coords)
        }
    };

    // 3. class table in the chosen basis
    let group = FinAbGroup::from_invariants(inv.clone())?.with_gens(gens.iter().cloned().map(GenRep::Ideal).collect());
    let mut by_snf: HashMap<Vec<BigInt>, Vec<BigInt>> = HashMap::new();
    for v in group.elements() {
        let mut s = g0.zero();
        for (vi, c) in v.iter().zip(&coords) {
            s = g0.add(&s, &g0.scale(c, vi));
        }
        by_snf.insert(s, v);
    }
    let table: HashMap<Form, Vec<BigInt>> = elems.iter().map(|(f, raw)| (f.clone(), by_snf[&snf_of(raw)].clone())).collect();

    let mut witnesses = Vec::new();
    for (b, e) in gens.iter().zip(&inv) {
        let w = br
            .principal_generator(k, &b.pow_big(k, e))
            .ok_or_else(|| Error::Verification("generator power is not principal".into()))?;
        witnesses.push(w);
    }
    let units = Units::new(k, vec![])?;
    Ok(ClassGroupData { group, gens, gen_primes, witnesses, units, kind: Kind::Imaginary { bridge: br, table } })
}

fn choose_basis(g: &FinAbGroup, inv: &[BigInt], cands: &[(PrimeIdeal, Vec<BigInt>)]) -> Option<Vec<usize>> {
    fn rec(
        g: &FinAbGroup,
        inv: &[BigInt],
        cands: &[(PrimeIdeal, Vec<BigInt>)],
        chosen: &mut Vec<usize>,
        budget: &mut u32,
    ) -> bool {
        let slot = chosen.len();
        if slot == inv.len() {
            return true;
        }
        let target: BigInt = inv[..=slot].iter().product();
        for (i, (_, c)) in cands.iter().enumerate() {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            if chosen.contains(&i) || g.elem_order(c) != inv[slot] {
                continue;
            }
            let mut sub: Vec<Vec<BigInt>> = chosen.iter().map(|&j| cands[j].1.clone()).collect();
            sub.push(c.clone());
            let m = g.subgroup_matrix(&sub).ok();
            let size = m.map(|m| g.order() / g.index(&m));
            if size.as_ref() != Some(&target) {
                continue;
            }
            chosen.push(i);
            if rec(g, inv, cands, chosen, budget) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    let mut budget = 100_000;
    rec(g, inv, cands, &mut chosen, &mut budget).then_some(chosen)
}

/// Accepts a claimed class group after checking every identity exactly.
pub fn verify_classgroup_input(
    k: &NumberField,
    input: &ClassGroupInput,
    fundamental_units: Vec<Elem>,
    pip_radius: f64,
) -> Result<ClassGroupData> {
    let r = input.generators.len();
    if input.orders.len() != r || input.witnesses.len() != r {
        return Err(Error::Input("class group generators, orders and witnesses must have equal length".into()));
    }
    let group = FinAbGroup::from_invariants(input.orders.clone())?;
    let mut gens = Vec::with_capacity(r);
    let mut gen_primes = Vec::with_capacity(r);
    for (i, (p, pi)) in input.generators.iter().enumerate() {
        let pr = find_prime(k, p, pi)?;
        let pw = pr.ideal().pow_big(k, &input.orders[i]);
        check_principal(k, &pw, &input.witnesses[i], &format!("witness for generator {} does not generate its power", i + 1))?;
        gens.push(pr.ideal().clone());
        gen_primes.push(Some(pr));
    }
    let group = group.with_gens(gens.iter().cloned().map(GenRep::Ideal).collect());
    let mut relations = Vec::new();
    for ri in &input.relations {
        if ri.dlog.len() != r {
            return Err(Error::Input(format!("relation for ({}, {:?}) has the wrong length", ri.p, ri.pi)));
        }
        let pr = find_prime(k, &ri.p, &ri.pi)?;
        let exps: Vec<BigInt> = ri.dlog.iter().zip(&input.orders).map(|(v, e)| (-v).mod_floor(e)).collect();
        let j = gens.iter().zip(&exps).fold(pr.ideal().clone(), |acc, (b, e)| acc.mul(k, &b.pow_big(k, e)));
        check_principal(k, &j, &ri.gamma, &format!("relation for prime ({}, {:?}) fails", ri.p, ri.pi))?;
        relations.push(Relation { prime: pr, exps, gamma: ri.gamma.clone() });
    }
    // every prime below the Minkowski bound must have a relation
    let mb = k.minkowski_bound().floor() as u64;
    for pr in primes_up_to_norm(k, mb)? {
        if !relations.iter().any(|r| r.prime == pr) {
            relations.push(derive_relation(k, &group, &gens, &pr, pip_radius)?);
        }
    }
    let units = Units::new(k, fundamental_units)?;
    Ok(ClassGroupData {
        group,
        gens,
        gen_primes,
        witnesses: input.witnesses.clone(),
        units,
        kind: Kind::Verified { relations: Mutex::new(relations), pip_radius },
    })
}

/// Class group from verified input when given, otherwise computed (imaginary quadratic fields).
pub fn classgroup(
    k: &NumberField,
    input: Option<&ClassGroupInput>,
    fundamental_units: Vec<Elem>,
    pip_radius: f64,
) -> Result<ClassGroupData> {
    match input {
        Some(i) => verify_classgroup_input(k, i, fundamental_units, pip_radius),
        None if QuadraticBridge::new(k).is_ok() => classgroup_imag_quadratic(k),
        None if k.degree() == 1 => Ok(ClassGroupData {
            group: FinAbGroup::trivial(0),
            gens: vec![],
            gen_primes: vec![],
            witnesses: vec![],
            units: Units::new(k, vec![])?,
            kind: Kind::Verified { relations: Mutex::new(vec![]), pip_radius },
        }),
        None => Err(Error::Input("this field needs a verified [classgroup] block".into())),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::group::vec_i64;
    use crate::ideal::tests::{example1, example2, ints, qs};

    pub fn example2_input() -> (ClassGroupInput, Vec<Elem>) {
        let b = BigInt::from;
        let e = Elem::from_i64;
        let rel = |p: i64, pi: &[i64], d: &[i64], g: &[i64]| RelationInput { p: b(p), pi: e(pi), dlog: vec_i64(d), gamma: e(g) };
        let input = ClassGroupInput {
            generators: vec![(b(11), e(&[2, 1, 0, 0])), (b(2), e(&[-1, 1, 1, 0]))],
            orders: vec_i64(&[2, 2]),
            witnesses: vec![e(&[-2, -1, 0, 0]), e(&[2, 0, 0, 0])],
            relations: vec![
                rel(2, &[-1, 1, 1, 0], &[0, 1], &[2, 0, 0, 0]),
                rel(5, &[0, 1, 0, 0], &[1, 1], &[-2, 0, 1, 1]),
                rel(11, &[6, 1, 0, 0], &[1, 0], &[2, -1, 1, 0]),
            ],
        };
        (input, vec![e(&[0, 0, -1, 0])])
    }

    #[test]
    fn example1_class_group() {
        let k = example1();
        let cl = classgroup_imag_quadratic(&k).unwrap();
        assert_eq!(cl.group().invariants_i64(), vec![16, 2]);
        let ps: Vec<i64> = cl.gen_primes().iter().map(|p| p.as_ref().unwrap().p().try_into().unwrap()).collect();
        assert_eq!(ps, vec![7, 5]);
        for p in [2i64, 3, 5, 7, 11, 13, 17] {
            for pr in decompose_prime(&k, &BigInt::from(p)).unwrap() {
                let (v, d) = cl.dlog(&k, pr.ideal()).unwrap();
                let rhs = cl.ideal_of(&k, &v).mul_elem(&k, &d).unwrap();
                assert_eq!(&rhs, pr.ideal());
            }
        }
        let p5 = decompose_prime(&k, &BigInt::from(5)).unwrap().remove(0);
        match cl.is_principal(&k, &p5.pow(&k, 2)).unwrap() {
            Principal::Yes(g) => assert_eq!(k.norm(&g), BigRational::from_integer(25.into())),
            Principal::No => panic!(),
        }
        let p7 = decompose_prime(&k, &BigInt::from(7)).unwrap().remove(0);
        assert_eq!(cl.is_principal(&k, p7.ideal()).unwrap(), Principal::No);
    }

    #[test]
    fn small_discriminants() {
        let gauss = NumberField::new(ints(&[1, 0, 1]), vec![qs(&[(1, 1), (0, 1)]), qs(&[(0, 1), (1, 1)])]).unwrap();
        assert!(classgroup_imag_quadratic(&gauss).unwrap().group().is_trivial());
        let k23 = NumberField::new(ints(&[6, 1, 1]), vec![qs(&[(1, 1), (0, 1)]), qs(&[(0, 1), (1, 1)])]).unwrap();
        assert_eq!(k23.disc(), &BigInt::from(-23));
        assert_eq!(classgroup_imag_quadratic(&k23).unwrap().group().invariants_i64(), vec![3]);
        assert!(matches!(classgroup_imag_quadratic(&example2()), Err(Error::NotImaginaryQuadratic)));
        let cl = verify_classgroup_input(&gauss, &ClassGroupInput::default(), vec![], DEFAULT_PIP_RADIUS).unwrap();
        assert!(cl.group().is_trivial());
    }

    #[test]
    fn example2_verified() {
        let k = example2();
        let (input, units) = example2_input();
        // the index divisor 3 needs supplied data
        assert!(matches!(
            verify_classgroup_input(&k, &input, units.clone(), DEFAULT_PIP_RADIUS),
            Err(Error::IndexDivisor(_))
        ));
        let mut k = k;
        k.supply_primes(BigInt::from(3), vec![crate::field::SuppliedPrime { pi: Elem::from_i64(&[0, 1, 0, 0]), e: 2, f: 2 }]);
        let cl = verify_classgroup_input(&k, &input, units.clone(), DEFAULT_PIP_RADIUS).unwrap();
        assert_eq!(cl.group().invariants_i64(), vec![2, 2]);
        for p in [2i64, 3, 5, 11, 19, 61] {
            for pr in decompose_prime(&k, &BigInt::from(p)).unwrap() {
                let (v, d) = cl.dlog(&k, pr.ideal()).unwrap();
                assert_eq!(&cl.ideal_of(&k, &v).mul_elem(&k, &d).unwrap(), pr.ideal(), "p = {p}");
            }
        }
        let mut bad = input.clone();
        bad.witnesses[0] = Elem::from_i64(&[3, 1, 0, 0]);
        assert!(matches!(verify_classgroup_input(&k, &bad, units.clone(), DEFAULT_PIP_RADIUS), Err(Error::Verification(_))));
        let mut bad = input;
        bad.relations[1].gamma = Elem::from_i64(&[-2, 0, 1, 2]);
        assert!(verify_classgroup_input(&k, &bad, units, DEFAULT_PIP_RADIUS).is_err());
        assert!(matches!(
            verify_classgroup_input(&k, &ClassGroupInput::default(), vec![], DEFAULT_PIP_RADIUS),
            Err(Error::MissingUnits(1)) | Err(Error::Inconclusive(_))
        ));
    }
}
