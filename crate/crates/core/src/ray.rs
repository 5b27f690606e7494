//! Ray class groups, the congruence subgroup attached to a number ring, and
//! split-prime tests.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::classgroup::ClassGroupData;
use crate::error::{Error, Result};
use crate::field::{Elem, NumberField};
use crate::group::FinAbGroup;
use crate::ideal::FracIdeal;
use crate::linalg::lattice::kernel;
use crate::linalg::IntMat;
use crate::picard::PicardGroup;
use crate::poly::{discriminant, fp};
use crate::prime::{coprime_representative, decompose_prime, Modulus, PrimeIdeal};
use crate::residue::ResidueUnitGroup;

#[derive(Clone, Debug)]
pub struct RayClassGroup {
    modulus: Modulus,
    residue: ResidueUnitGroup,
    a: FinAbGroup,
    /// Lifts `b'_i = lambda_i b_i` of the class group generators, prime to `m0`.
    lifts: Vec<FracIdeal>,
    lambdas: Vec<Elem>,
    group: FinAbGroup,
    primes: Vec<PrimeIdeal>,
}

/// `Cl_K^m` from `1 -> (o_K/m)^* x signs / im(units) -> Cl^m -> Cl_K -> 1`.
pub fn ray_class_group(k: &NumberField, modulus: &Modulus, cl: &ClassGroupData) -> Result<RayClassGroup> {
    let residue = ResidueUnitGroup::new(k, modulus.finite(), modulus.infinite())?;
    let rg = residue.group();
    let unit_imgs: Vec<Vec<BigInt>> = cl.units().generators().iter().map(|u| residue.dlog(k, u)).collect::<Result<_>>()?;
    let a = rg.quotient(&rg.subgroup_matrix(&unit_imgs)?)?;
    let mut lifts = Vec::new();
    let mut lambdas = Vec::new();
    for b in cl.gens() {
        let (bp, lam) = coprime_representative(k, b, modulus.finite())?;
        lifts.push(bp);
        lambdas.push(lam);
    }
    let primes = residue.primes();
    let mut ray = RayClassGroup {
        modulus: modulus.clone(),
        residue,
        a,
        lifts,
        lambdas,
        group: FinAbGroup::trivial(0),
        primes,
    };
    let mut rels = Vec::new();
    for (b, e) in ray.lifts.iter().zip(cl.orders()) {
        let (w, delta) = cl.dlog(k, &b.pow_big(k, e))?;
        if w.iter().any(|x| !x.is_zero()) {
            return Err(Error::Exactness("class group generator has the wrong order".into()));
        }
        rels.push(ray.a_dlog(k, &delta)?);
    }
    let cgroup = FinAbGroup::from_invariants(cl.orders().to_vec())?;
    ray.group = FinAbGroup::extension_assemble(&ray.a, &cgroup, &rels)?;
    Ok(ray)
}

impl RayClassGroup {
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn order(&self) -> BigInt {
        self.group.order()
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn residue(&self) -> &ResidueUnitGroup {
        &self.residue
    }

    /// `(o_K / m)^* x signs` modulo the global units.
    pub fn a(&self) -> &FinAbGroup {
        &self.a
    }

    pub fn lifts(&self) -> &[FracIdeal] {
        &self.lifts
    }

    fn a_dlog(&self, k: &NumberField, x: &Elem) -> Result<Vec<BigInt>> {
        Ok(self.a.from_raw(&self.residue.dlog(k, x)?))
    }

    /// Ray class of `x o_K` for `x` prime to `m0`, in raw coordinates.
    fn raw_elem(&self, k: &NumberField, x: &Elem, nc: usize) -> Result<Vec<BigInt>> {
        let mut raw = self.a_dlog(k, x)?;
        raw.extend(std::iter::repeat(BigInt::zero()).take(nc));
        Ok(raw)
    }

    /// Coordinates of the ray class of an ideal prime to `m0`.
    pub fn dlog(&self, k: &NumberField, cl: &ClassGroupData, a: &FracIdeal) -> Result<Vec<BigInt>> {
        if self.primes.iter().any(|p| p.valuation_ideal(a) != 0) {
            return Err(Error::NotCoprime);
        }
        let (w, delta) = cl.dlog(k, a)?;
        let mut d = delta;
        for (lam, e) in self.lambdas.iter().zip(&w) {
            if !e.is_zero() {
                d = k.mul(&d, &k.pow_big(lam, &-e)?);
            }
        }
        let mut raw = self.a_dlog(k, &d)?;
        raw.extend(w);
        Ok(self.group.from_raw(&raw))
    }

    /// Ray class of the principal ideal `x o_K`.
    pub fn dlog_elem(&self, k: &NumberField, x: &Elem) -> Result<Vec<BigInt>> {
        let nc = self.lifts.len();
        Ok(self.group.from_raw(&self.raw_elem(k, x, nc)?))
    }
}

/// `(m, M_R)`: the subgroup of `Cl^m` cut out by a number ring, `m = f~ m0`.
#[derive(Clone, Debug)]
pub struct CongruenceSubgroup {
    pub ray: RayClassGroup,
    /// HNF subgroup matrix on the ray class group generators.
    pub m_r: IntMat,
    pub index: BigInt,
    /// Images of the ray class group generators in Pic(R).
    pub to_picard: IntMat,
}

/// The kernel of `Cl^{f~ m0} -> Pic(R)`.
pub fn congruence_subgroup(k: &NumberField, pic: &PicardGroup, cl: &ClassGroupData) -> Result<CongruenceSubgroup> {
    let ring = pic.ring();
    let modulus = Modulus::new(k, ring.modulus(k), vec![])?;
    let ray = ray_class_group(k, &modulus, cl)?;
    let pg = pic.group();
    let na = ray.a.ngens();
    // images of the raw ray generators
    let mut phi_raw: Vec<Vec<BigInt>> = Vec::with_capacity(ray.group.raw_rank());
    for j in 0..na {
        let mut e = vec![BigInt::zero(); na];
        e[j] = BigInt::one();
        let r = ray.residue.element_of(k, &ray.a.lift().mul_vec(&e));
        phi_raw.push(pic.elem_dlog(k, &r)?);
    }
    for b in &ray.lifts {
        phi_raw.push(pic.dlog(k, cl, b)?);
    }
    let p = pg.ngens();
    let phi_raw = IntMat::from_cols(p, &phi_raw);
    let phi = &phi_raw * ray.group.lift();
    let phi = IntMat::from_cols(p, &phi.to_cols().iter().map(|c| pg.reduce(c)).collect::<Vec<_>>());
    let r = ray.group.ngens();
    // x with phi x in D_pic Z^p
    let ker = kernel(&phi.hstack(&pg.relation_matrix())?);
    let kv: Vec<Vec<BigInt>> = ker.to_cols().into_iter().map(|c| c[..r].to_vec()).collect();
    let m_r = ray.group.subgroup_matrix(&kv)?;
    let index = ray.group.index(&m_r);
    if index != pic.order() {
        return Err(Error::Exactness(format!("Cl^m -> Pic(R) has image of order {index}, expected {}", pic.order())));
    }
    Ok(CongruenceSubgroup { ray, m_r, index, to_picard: phi })
}

/// Which notion of splitting to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitMode {
    /// `ell` splits completely in `H_R / Q`.
    Complete,
    /// Some prime of degree one above `ell` splits completely in `H_R / K`.
    DegreeOneExists,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitStatus {
    Split,
    NotSplit,
    Excluded,
}

/// Is `ell` excluded (ramified in K, dividing the modulus or the order index)?
pub fn is_excluded(k: &NumberField, pic: &PicardGroup, ell: &BigInt) -> bool {
    k.disc().is_multiple_of(ell)
        || pic.ring().order().index().is_multiple_of(ell)
        || pic.modulus_primes().iter().any(|p| p.p() == ell)
}

pub fn splits_completely(k: &NumberField, pic: &PicardGroup, cl: &ClassGroupData, ell: &BigInt, mode: SplitMode) -> Result<bool> {
    if is_excluded(k, pic, ell) {
        return Err(Error::RamifiedOrExcluded(ell.clone()));
    }
    let primes = decompose_prime(k, ell)?;
    let trivial = |p: &PrimeIdeal| -> Result<bool> { Ok(pic.group().is_zero(&pic.dlog(k, cl, p.ideal())?)) };
    match mode {
        SplitMode::Complete => {
            if primes.iter().any(|p| p.f() != 1) {
                return Ok(false);
            }
            for p in &primes {
                if !trivial(p)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        SplitMode::DegreeOneExists => {
            for p in primes.iter().filter(|p| p.f() == 1) {
                if trivial(p)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Split status of every rational prime below `bound`, in increasing order.
pub fn split_scan(k: &NumberField, pic: &PicardGroup, cl: &ClassGroupData, bound: u64, mode: SplitMode) -> Result<Vec<(u64, SplitStatus)>> {
    crate::arith::primes_up_to(bound)
        .into_par_iter()
        .map(|ell| {
            let b = BigInt::from(ell);
            if is_excluded(k, pic, &b) {
                return Ok((ell, SplitStatus::Excluded));
            }
            let s = if splits_completely(k, pic, cl, &b, mode)? { SplitStatus::Split } else { SplitStatus::NotSplit };
            Ok((ell, s))
        })
        .collect()
}

/// Does `g` split into distinct linear factors modulo `ell`?
pub fn poly_split_test(g: &[BigInt], ell: u64) -> Result<bool> {
    let lb = BigInt::from(ell);
    if g.len() < 2 {
        return Err(Error::Input("polynomial must have positive degree".into()));
    }
    if discriminant(g).is_multiple_of(&lb) || g.last().unwrap().is_multiple_of(&lb) {
        return Err(Error::DividesDiscriminant(lb));
    }
    Ok(fp::splits_into_distinct_linear(&fp::from_ints(g, ell), ell))
}

/// One row of a reciprocity cross-check against a claimed class field polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitRow {
    pub ell: u64,
    pub criterion: Option<bool>,
    pub poly: Option<bool>,
    pub status: RowStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Agree,
    Disagree,
    /// Ramified in K, dividing the modulus or the order index.
    Excluded,
    /// Divides the polynomial discriminant or leading coefficient.
    PolyExcluded,
}

impl RowStatus {
    pub fn label(self) -> &'static str {
        match self {
            RowStatus::Agree => "AGREE",
            RowStatus::Disagree => "DISAGREE",
            RowStatus::Excluded => "EXCLUDED",
            RowStatus::PolyExcluded => "POLY-EXCLUDED",
        }
    }
}

/// Compare the Picard split criterion with splitting of `g` modulo every prime below `bound`.
pub fn verify_splitting(k: &NumberField, pic: &PicardGroup, cl: &ClassGroupData, g: &[BigInt], bound: u64) -> Result<Vec<SplitRow>> {
    let scan = split_scan(k, pic, cl, bound, SplitMode::Complete)?;
    scan.into_iter()
        .map(|(ell, s)| {
            let criterion = match s {
                SplitStatus::Excluded => None,
                s => Some(s == SplitStatus::Split),
            };
            let poly = match poly_split_test(g, ell) {
                Ok(b) => Some(b),
                Err(Error::DividesDiscriminant(_)) => None,
                Err(e) => return Err(e),
            };
            let status = match (criterion, poly) {
                (None, _) => RowStatus::Excluded,
                (_, None) => RowStatus::PolyExcluded,
                (Some(a), Some(b)) if a == b => RowStatus::Agree,
                _ => RowStatus::Disagree,
            };
            Ok(SplitRow { ell, criterion, poly, status })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classgroup::{classgroup, classgroup_imag_quadratic, ClassGroupInput, DEFAULT_PIP_RADIUS};
    use crate::ideal::tests::{example1, ints, qs};
    use crate::picard::picard_group;
    use crate::picard::tests::example2_ring;
    use crate::ring::{NumberRing, Order};

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn poly_splitting() {
        assert!(poly_split_test(&ints(&[-2, 0, 1]), 7).unwrap());
        let h = ints(&[31684, 0, 354, 0, 1]);
        assert!(poly_split_test(&h, 17).unwrap());
        assert!(!poly_split_test(&h, 13).unwrap());
        assert!(matches!(poly_split_test(&h, 2), Err(Error::DividesDiscriminant(_))));
    }

    #[test]
    fn example1_ray_and_congruence() {
        let k = example1();
        let cl = classgroup_imag_quadratic(&k).unwrap();
        let trivial = Modulus::new(&k, FracIdeal::unit(2), vec![]).unwrap();
        assert_eq!(ray_class_group(&k, &trivial, &cl).unwrap().group().invariants_i64(), vec![16, 2]);
        let ring = NumberRing::from_integer(&k, Order::maximal(&k), &b(7)).unwrap();
        let pic = picard_group(&k, &ring, &cl).unwrap();
        let cs = congruence_subgroup(&k, &pic, &cl).unwrap();
        assert_eq!(cs.ray.order(), b(576));
        assert_eq!(cs.index, b(2));
        // principal ray classes vanish
        let x = Elem::from_i64(&[8, 7]);
        assert!(cs.ray.group().is_zero(&cs.ray.dlog_elem(&k, &x).unwrap()));
        assert!(cs.ray.group().is_zero(&cs.ray.dlog(&k, &cl, &FracIdeal::principal(&k, &x).unwrap()).unwrap()));
        assert!(splits_completely(&k, &pic, &cl, &b(17), SplitMode::Complete).unwrap());
        assert!(!splits_completely(&k, &pic, &cl, &b(13), SplitMode::Complete).unwrap());
        assert!(matches!(splits_completely(&k, &pic, &cl, &b(7), SplitMode::Complete), Err(Error::RamifiedOrExcluded(_))));
        let scan = split_scan(&k, &pic, &cl, 100, SplitMode::Complete).unwrap();
        let split: Vec<u64> = scan.iter().filter(|(_, s)| *s == SplitStatus::Split).map(|(l, _)| *l).collect();
        assert_eq!(split, vec![17, 23, 47, 79, 89, 97]);
        let rows = verify_splitting(&k, &pic, &cl, &ints(&[31684, 0, 354, 0, 1]), 100).unwrap();
        assert!(rows.iter().all(|r| r.status != RowStatus::Disagree));
        assert_eq!(rows.iter().find(|r| r.ell == 89).unwrap().status, RowStatus::PolyExcluded);
    }

    #[test]
    fn gaussian_ray_group() {
        let k = NumberField::new(ints(&[1, 0, 1]), vec![qs(&[(1, 1), (0, 1)]), qs(&[(0, 1), (1, 1)])]).unwrap();
        let cl = classgroup_imag_quadratic(&k).unwrap();
        let m = Modulus::new(&k, FracIdeal::from_int(2, &b(5)), vec![]).unwrap();
        let ray = ray_class_group(&k, &m, &cl).unwrap();
        assert_eq!(ray.order(), b(4));
    }

    #[test]
    fn real_quadratic_signs() {
        // Q(sqrt 2): class number one, fundamental unit 1 + sqrt 2
        let k = NumberField::new(ints(&[-2, 0, 1]), vec![qs(&[(1, 1), (0, 1)]), qs(&[(0, 1), (1, 1)])]).unwrap();
        let input = ClassGroupInput { generators: vec![], orders: vec![], witnesses: vec![], relations: vec![] };
        let cl = classgroup(&k, Some(&input), vec![Elem::from_i64(&[1, 1])], DEFAULT_PIP_RADIUS).unwrap();
        let seven = FracIdeal::from_int(2, &b(7));
        let order = |inf: Vec<usize>| ray_class_group(&k, &Modulus::new(&k, seven.clone(), inf).unwrap(), &cl).unwrap().order();
        assert_eq!(order(vec![]), b(3));
        assert_eq!(order(vec![0]), b(6));
        assert_eq!(order(vec![0, 1]), b(12));
        let ray = ray_class_group(&k, &Modulus::new(&k, seven, vec![0, 1]).unwrap(), &cl).unwrap();
        // -1 is 1 mod 7 up to sign but negative at both places
        assert!(ray.group().is_zero(&ray.dlog_elem(&k, &Elem::from_i64(&[8, 0])).unwrap()));
        assert!(!ray.group().is_zero(&ray.dlog_elem(&k, &Elem::from_i64(&[-6, 0])).unwrap()));
    }

    #[test]
    fn example2_congruence() {
        let (k, cl, ring) = example2_ring();
        let pic = picard_group(&k, &ring, &cl).unwrap();
        let cs = congruence_subgroup(&k, &pic, &cl).unwrap();
        assert_eq!(cs.index, b(2));
        assert!(splits_completely(&k, &pic, &cl, &b(61), SplitMode::Complete).unwrap());
    }
}
