//! Picard groups of number rings and their discrete logarithms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::classgroup::{t_units, tclass_dlog, tclassgroup, ClassGroupData, TClassGroupData};
use crate::error::{Error, Result};
use crate::field::{Elem, NumberField};
use crate::group::{FinAbGroup, GenRep};
use crate::ideal::FracIdeal;
use crate::linalg::IntMat;
use crate::prime::{coprime_representative, factor_ideal, primes_up_to_norm, PrimeIdeal};
use crate::residue::ResidueUnitGroup;
use crate::ring::{suborder_unit_subgroup, NumberRing, Order};

/// Norm bound when looking for prime ideals to display as generators.
pub const REPRESENTATIVE_NORM_BOUND: u64 = 1000;

#[derive(Clone, Debug)]
pub struct PicardGroup {
    ring: NumberRing,
    residue: ResidueUnitGroup,
    /// Subgroup of the residue group generated by `(o / f_o)^*` and the T-units.
    a_sub: IntMat,
    a: FinAbGroup,
    tc: TClassGroupData,
    /// `c'_i = lambda_i c_i`, coprime to `f~ m0`.
    lifts: Vec<FracIdeal>,
    lambdas: Vec<Elem>,
    t_units: Vec<Elem>,
    group: FinAbGroup,
    modulus_primes: Vec<PrimeIdeal>,
}

/// Pic(R) from `1 -> A -> Pic(R) -> Cl(o_{K,T}) -> 1`, where `A` is
/// `(o_K / f_o)^* / (o / f_o)^*` modulo the image of the T-units.
pub fn picard_group(k: &NumberField, ring: &NumberRing, cl: &ClassGroupData) -> Result<PicardGroup> {
    let tc = tclassgroup(k, cl, ring.t())?;
    let tu = t_units(k, cl, &tc)?;
    let residue = ResidueUnitGroup::new(k, ring.f_tilde(), &[])?;
    let rg = residue.group();
    let sub = suborder_unit_subgroup(k, ring.order(), &residue)?;
    let mut hgens = sub.to_cols();
    for u in &tu {
        hgens.push(residue.dlog(k, u)?);
    }
    let a_sub = rg.subgroup_matrix(&hgens)?;
    let a = rg.quotient(&a_sub)?;
    let modulus = ring.modulus(k);
    let modulus_primes = ring.modulus_primes(k)?;
    let mut lifts = Vec::new();
    let mut lambdas = Vec::new();
    for c in tc.gens() {
        let (cp, lam) = coprime_representative(k, c, &modulus)?;
        lifts.push(cp);
        lambdas.push(lam);
    }
    let mut pic = PicardGroup {
        ring: ring.clone(),
        residue,
        a_sub,
        a,
        tc,
        lifts,
        lambdas,
        t_units: tu,
        group: FinAbGroup::trivial(0),
        modulus_primes,
    };
    let mut rels = Vec::new();
    for (i, (c, d)) in pic.lifts.iter().zip(pic.tc.group().invariants()).enumerate() {
        let (v, gamma) = tclass_dlog(k, cl, &pic.tc, &c.pow_big(k, d))?;
        if v.iter().any(|x| !x.is_zero()) {
            return Err(Error::Exactness(format!("T-class generator {i} does not have order {d}")));
        }
        rels.push(pic.a_dlog(k, &gamma)?);
    }
    let group = FinAbGroup::extension_assemble(&pic.a, pic.tc.group(), &rels)?;
    if group.order() != pic.a.order() * pic.tc.order() {
        return Err(Error::Exactness("|Pic(R)| differs from |A| |Cl(o_T)|".into()));
    }
    pic.group = group;
    Ok(pic)
}

impl PicardGroup {
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn order(&self) -> BigInt {
        self.group.order()
    }

    pub fn ring(&self) -> &NumberRing {
        &self.ring
    }

    /// The cokernel term `A`.
    pub fn a(&self) -> &FinAbGroup {
        &self.a
    }

    pub fn residue(&self) -> &ResidueUnitGroup {
        &self.residue
    }

    pub fn a_subgroup(&self) -> &IntMat {
        &self.a_sub
    }

    pub fn tclass(&self) -> &TClassGroupData {
        &self.tc
    }

    pub fn t_units(&self) -> &[Elem] {
        &self.t_units
    }

    /// Lifts `c'_i` of the T-class group generators, coprime to the modulus.
    pub fn lifts(&self) -> &[FracIdeal] {
        &self.lifts
    }

    pub fn modulus_primes(&self) -> &[PrimeIdeal] {
        &self.modulus_primes
    }

    /// Coordinates in `A` of an element that is a unit at the primes of `f~`.
    pub fn a_dlog(&self, k: &NumberField, x: &Elem) -> Result<Vec<BigInt>> {
        Ok(self.a.from_raw(&self.residue.dlog(k, x)?))
    }

    /// Pic(R)-coordinates of `psi(x)` for `x` prime to `f~`.
    pub fn elem_dlog(&self, k: &NumberField, x: &Elem) -> Result<Vec<BigInt>> {
        let mut raw = self.a_dlog(k, x)?;
        raw.extend(std::iter::repeat(BigInt::zero()).take(self.tc.group().ngens()));
        Ok(self.group.from_raw(&raw))
    }

    /// Coordinates of `[iota^{-1}(a)]` for an ideal coprime to `f~ m0`.
    pub fn dlog(&self, k: &NumberField, cl: &ClassGroupData, a: &FracIdeal) -> Result<Vec<BigInt>> {
        if self.modulus_primes.iter().any(|p| p.valuation_ideal(a) != 0) {
            return Err(Error::NotCoprime);
        }
        let (v, gamma) = tclass_dlog(k, cl, &self.tc, a)?;
        // a o_T = gamma' prod (c'_i o_T)^{v_i}
        let mut g = gamma;
        for (lam, e) in self.lambdas.iter().zip(&v) {
            if !e.is_zero() {
                g = k.mul(&g, &k.pow_big(lam, &-e)?);
            }
        }
        let mut raw = self.a_dlog(k, &g)?;
        raw.extend(v);
        Ok(self.group.from_raw(&raw))
    }

    /// An o_K-ideal prime to the modulus representing the class with raw
    /// coordinates `(a, c)`.
    pub fn ideal_of_raw(&self, k: &NumberField, raw: &[BigInt]) -> Result<FracIdeal> {
        let n = k.degree();
        let na = self.a.ngens();
        let mut out = FracIdeal::unit(n);
        if raw[..na].iter().any(|x| !x.is_zero()) {
            let res_coords = self.a.lift().mul_vec(&raw[..na]);
            let r = self.residue.element_of(k, &res_coords);
            out = out.mul(k, &self.strip_t(k, &FracIdeal::principal(k, &r)?)?);
        }
        for ((c, e), d) in self.lifts.iter().zip(&raw[na..]).zip(self.tc.group().invariants()) {
            out = out.mul(k, &c.pow_big(k, &e.mod_floor(d)));
        }
        Ok(out)
    }

    fn strip_t(&self, k: &NumberField, a: &FracIdeal) -> Result<FracIdeal> {
        let fac = factor_ideal(k, a)?;
        let kept: Vec<(PrimeIdeal, i64)> = fac.into_iter().filter(|(p, _)| !self.ring.t().contains(p)).collect();
        Ok(crate::prime::ideal_from_factorization(k, &kept))
    }

    /// Representative ideals for the generators. The ideal built from the
    /// lifted T-class generators is kept when it is prime; otherwise the
    /// prime of least norm in the class (below the search bound, avoiding
    /// `avoid`), and failing that the built ideal.
    pub fn representatives(&self, k: &NumberField, cl: &ClassGroupData, avoid: &[PrimeIdeal]) -> Result<Vec<FracIdeal>> {
        let g = &self.group;
        let mut found: Vec<Option<FracIdeal>> = vec![None; g.ngens()];
        // the ideal produced by the construction itself, when it is a prime
        for (i, slot) in found.iter_mut().enumerate() {
            let id = self.ideal_of_raw(k, &g.lift().col(i))?;
            let fac = factor_ideal(k, &id)?;
            if fac.len() == 1 && fac[0].1 == 1 && !avoid.contains(&fac[0].0) {
                *slot = Some(id);
            }
        }
        if found.iter().any(Option::is_none) {
            for p in primes_up_to_norm(k, REPRESENTATIVE_NORM_BOUND)? {
                if self.modulus_primes.contains(&p) || avoid.contains(&p) {
                    continue;
                }
                let v = self.dlog(k, cl, p.ideal())?;
                let hits: Vec<usize> = (0..v.len()).filter(|&i| v[i].is_one() && v.iter().enumerate().all(|(j, x)| j == i || x.is_zero())).collect();
                for i in hits {
                    if found[i].is_none() {
                        found[i] = Some(p.ideal().clone());
                    }
                }
                if found.iter().all(Option::is_some) {
                    break;
                }
            }
        }
        let mut out = Vec::with_capacity(g.ngens());
        for (i, f) in found.into_iter().enumerate() {
            match f {
                Some(p) => out.push(p),
                None => {
                    let id = self.ideal_of_raw(k, &g.lift().col(i))?;
                    if avoid.iter().any(|p| p.valuation_ideal(&id) != 0) {
                        return Err(Error::Inconclusive("no generator representative avoiding the given primes".into()));
                    }
                    out.push(id);
                }
            }
        }
        Ok(out)
    }

    /// Generators carrying their representative ideals.
    pub fn with_representatives(mut self, k: &NumberField, cl: &ClassGroupData, avoid: &[PrimeIdeal]) -> Result<Self> {
        let reps = self.representatives(k, cl, avoid)?;
        self.group = self.group.clone().with_gens(reps.into_iter().map(GenRep::Ideal).collect());
        Ok(self)
    }

    /// Representative ideals attached to the generators, if set.
    pub fn generator_ideals(&self) -> Vec<Option<FracIdeal>> {
        self.group
            .gens()
            .iter()
            .map(|g| match g {
                GenRep::Ideal(i) => Some(i.clone()),
                _ => None,
            })
            .collect()
    }
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Outcome of comparing `Pic(o) -> Pic(R)` with the classes of the primes in T.
#[derive(Clone, Debug)]
pub struct SurjectionReport {
    pub pic_order: Vec<BigInt>,
    pub pic_ring: Vec<BigInt>,
    /// Pic(o)-coordinates of the classes of the primes in T.
    pub kernel_gens: Vec<Vec<BigInt>>,
    pub checks: Vec<Check>,
}

impl SurjectionReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Checks that extension of ideals `Pic(o) -> Pic(R)` is onto with kernel
/// generated by the classes of the primes of T.
pub fn verify_order_ring_surjection(k: &NumberField, ring: &NumberRing, cl: &ClassGroupData) -> Result<SurjectionReport> {
    let n = k.degree();
    let base = NumberRing::new(k, ring.order().clone(), Elem::one(n))?;
    let pic_o = picard_group(k, &base, cl)?;
    let pic_r = picard_group(k, ring, cl)?;
    let avoid = ring.modulus_primes(k)?;
    let reps = pic_o.representatives(k, cl, &avoid)?;
    let go = pic_o.group();
    let gr = pic_r.group();
    let phi: Vec<Vec<BigInt>> = reps.iter().map(|r| pic_r.dlog(k, cl, r)).collect::<Result<_>>()?;
    let mut checks = Vec::new();

    let well_defined = phi.iter().zip(go.invariants()).all(|(col, d)| gr.is_zero(&gr.scale(col, d)));
    checks.push(Check { name: "map respects relations".into(), pass: well_defined, detail: String::new() });

    let img = gr.subgroup_matrix(&phi)?;
    let onto = gr.index(&img).is_one();
    checks.push(Check { name: "map is onto".into(), pass: onto, detail: String::new() });

    let kernel_gens: Vec<Vec<BigInt>> = ring.t().iter().map(|p| pic_o.dlog(k, cl, p.ideal())).collect::<Result<_>>()?;
    let t_in_kernel = kernel_gens.iter().all(|v| {
        let img: Vec<BigInt> = (0..gr.ngens()).map(|r| v.iter().zip(&phi).fold(BigInt::zero(), |s, (x, col)| s + x * &col[r])).collect();
        gr.is_zero(&gr.reduce(&img))
    });
    checks.push(Check { name: "classes of T map to 1".into(), pass: t_in_kernel, detail: String::new() });

    let ksub = go.subgroup_matrix(&kernel_gens)?;
    let quotient_order = go.index(&ksub);
    let sizes = quotient_order == pic_r.order();
    checks.push(Check {
        name: "|Pic(o) / <T>| = |Pic(R)|".into(),
        pass: sizes,
        detail: format!("{} / {} vs {}", go.order(), go.order() / &quotient_order, pic_r.order()),
    });

    let mut compatible = true;
    for p in primes_up_to_norm(k, 60)? {
        if avoid.contains(&p) {
            continue;
        }
        let vo = pic_o.dlog(k, cl, p.ideal())?;
        let vr = pic_r.dlog(k, cl, p.ideal())?;
        let img: Vec<BigInt> = (0..gr.ngens()).map(|r| vo.iter().zip(&phi).fold(BigInt::zero(), |s, (x, col)| s + x * &col[r])).collect();
        if gr.reduce(&img) != vr {
            compatible = false;
        }
    }
    checks.push(Check { name: "extension of prime classes commutes".into(), pass: compatible, detail: String::new() });

    Ok(SurjectionReport {
        pic_order: go.invariants().to_vec(),
        pic_ring: gr.invariants().to_vec(),
        kernel_gens,
        checks,
    })
}

/// `Pic(o)` for an order (no primes inverted).
pub fn picard_of_order(k: &NumberField, o: &Order, cl: &ClassGroupData) -> Result<PicardGroup> {
    picard_group(k, &NumberRing::new(k, o.clone(), Elem::one(k.degree()))?, cl)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::classgroup::tests::example2_input;
    use crate::classgroup::{classgroup_imag_quadratic, verify_classgroup_input, DEFAULT_PIP_RADIUS};
    use crate::field::SuppliedPrime;
    use crate::ideal::tests::{example1, example2};
    use crate::prime::decompose_prime;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    pub fn example2_ring() -> (NumberField, ClassGroupData, NumberRing) {
        let mut k = example2();
        k.supply_primes(b(3), vec![SuppliedPrime { pi: Elem::from_i64(&[0, 1, 0, 0]), e: 2, f: 2 }]);
        let (input, units) = example2_input();
        let cl = verify_classgroup_input(&k, &input, units, DEFAULT_PIP_RADIUS).unwrap();
        let o = Order::new(&k, &IntMat::from_i64(&[&[1, 0, -6, 0], &[0, 1, 0, -9], &[0, 0, 3, 0], &[0, 0, 0, 3]])).unwrap();
        let ring = NumberRing::from_integer(&k, o, &b(11)).unwrap();
        (k, cl, ring)
    }

    #[test]
    fn example1_picard() {
        let k = example1();
        let cl = classgroup_imag_quadratic(&k).unwrap();
        let ring = NumberRing::from_integer(&k, Order::maximal(&k), &b(7)).unwrap();
        let pic = picard_group(&k, &ring, &cl).unwrap().with_representatives(&k, &cl, &[]).unwrap();
        assert_eq!(pic.group().invariants_i64(), vec![2]);
        let p5 = decompose_prime(&k, &b(5)).unwrap().remove(0);
        assert_eq!(pic.generator_ideals()[0].as_ref().unwrap(), p5.ideal());
        assert_eq!(pic.dlog(&k, &cl, p5.ideal()).unwrap(), vec![b(1)]);
        for pr in decompose_prime(&k, &b(17)).unwrap() {
            assert_eq!(pic.dlog(&k, &cl, pr.ideal()).unwrap(), vec![b(0)]);
        }
        let r = verify_order_ring_surjection(&k, &ring, &cl).unwrap();
        assert!(r.pass(), "{:?}", r.checks);
        // R = o_K gives the class group
        let full = picard_group(&k, &NumberRing::maximal(&k), &cl).unwrap();
        assert_eq!(full.group().invariants_i64(), vec![16, 2]);
    }

    #[test]
    fn example2_picard() {
        let (k, cl, ring) = example2_ring();
        let pic = picard_group(&k, &ring, &cl).unwrap().with_representatives(&k, &cl, &[]).unwrap();
        assert_eq!(pic.group().invariants_i64(), vec![2]);
        let p2 = decompose_prime(&k, &b(2)).unwrap().remove(0);
        assert_eq!(pic.dlog(&k, &cl, p2.ideal()).unwrap(), vec![b(1)]);
        assert_eq!(pic.generator_ideals()[0].as_ref().unwrap(), p2.ideal());
        let r = verify_order_ring_surjection(&k, &ring, &cl).unwrap();
        assert!(r.pass(), "{:?}", r.checks);
        // the principal ideal of an element = 1 mod f~ and prime to T is trivial
        let f = ring.f_tilde();
        let x = Elem::one(4).add(&Elem::from_ints(f.hnf().col(2)));
        if ring.t().iter().all(|p| p.valuation(&x) == 0) {
            let v = pic.dlog(&k, &cl, &FracIdeal::principal(&k, &x).unwrap()).unwrap();
            assert!(pic.group().is_zero(&v));
        }
    }
}
