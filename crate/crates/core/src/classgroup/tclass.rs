//! T-class groups `Cl(o_{K,T})` from `Cl_K`, with discrete logarithms that
//! also return the principal part, and generators of the T-units.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{Elem, NumberField};
use crate::group::{FinAbGroup, GenRep};
use crate::ideal::FracIdeal;
use crate::linalg::lattice::{q_inverse, qmat_from_int};
use crate::linalg::{snf_full, IntMat};
use crate::prime::{factor_ideal, PrimeIdeal};

use super::ClassGroupData;

#[derive(Clone, Debug)]
pub struct TClassGroupData {
    group: FinAbGroup,
    t: Vec<PrimeIdeal>,
    /// `c_i` for the nontrivial cyclic factors, in the group's generator order.
    c: Vec<FracIdeal>,
    /// SNF positions of the nontrivial factors (largest first).
    idx: Vec<usize>,
    u: IntMat,
    v: IntMat,
    d: Vec<BigInt>,
    /// `pi_i` with `c'_i = c_i * pi_i`, one per SNF position.
    pis: Vec<Elem>,
    /// `gamma_j` with `P_j = gamma_j * prod b^{X_j}`.
    gammas: Vec<Elem>,
}

impl TClassGroupData {
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn t(&self) -> &[PrimeIdeal] {
        &self.t
    }

    /// Generator ideals `c_i` (integral o_K-ideals).
    pub fn gens(&self) -> &[FracIdeal] {
        &self.c
    }

    pub fn order(&self) -> BigInt {
        self.group.order()
    }

    /// `prod c_i^{v_i}`.
    pub fn ideal_of(&self, k: &NumberField, v: &[BigInt]) -> FracIdeal {
        self.c.iter().zip(v).fold(FracIdeal::unit(k.degree()), |a, (c, e)| a.mul(k, &c.pow_big(k, e)))
    }

    pub fn in_t(&self, p: &PrimeIdeal) -> bool {
        self.t.contains(p)
    }

    /// Is the ideal a product of primes in T?
    pub fn is_t_supported(&self, k: &NumberField, a: &FracIdeal) -> Result<bool> {
        Ok(factor_ideal(k, a)?.iter().all(|(p, _)| self.in_t(p)))
    }
}

/// `rho(y) = prod alpha_k^{y_B,k} * prod gamma_j^{-y_X,j}`.
fn rho(k: &NumberField, cl: &ClassGroupData, gammas: &[Elem], y: &[BigInt]) -> Result<Elem> {
    let l = cl.gens().len();
    let mut r = Elem::one(k.degree());
    for (i, yi) in y.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let f = if i < l { k.pow_big(&cl.witnesses()[i], yi)? } else { k.pow_big(&gammas[i - l], &-yi)? };
        r = k.mul(&r, &f);
    }
    Ok(r)
}

/// T-class group via the SNF of `[D_B | X]`.
pub fn tclassgroup(k: &NumberField, cl: &ClassGroupData, t: &[PrimeIdeal]) -> Result<TClassGroupData> {
    let l = cl.gens().len();
    let e = cl.orders().to_vec();
    let mut t_sorted: Vec<PrimeIdeal> = Vec::new();
    for p in t {
        if !t_sorted.contains(p) {
            t_sorted.push(p.clone());
        }
    }
    let mut xs = Vec::with_capacity(t_sorted.len());
    let mut gammas = Vec::with_capacity(t_sorted.len());
    for p in &t_sorted {
        let (x, g) = cl.dlog(k, p.ideal())?;
        xs.push(x);
        gammas.push(g);
    }
    let m = cl.group().relation_matrix().hstack(&IntMat::from_cols(l, &xs))?;
    let s = snf_full(&m);
    let d = if l == 0 { vec![] } else { s.diagonal() };
    if d.len() < l || d.iter().any(Zero::is_zero) {
        return Err(Error::InfiniteGroup);
    }
    let uinv = q_inverse(&qmat_from_int(&s.u)).expect("unimodular");
    let mut c_all = Vec::with_capacity(l);
    let mut pis = Vec::with_capacity(l);
    for i in 0..l {
        // U^{-1} e_i = r + D_B s
        let col: Vec<BigInt> = (0..l).map(|j| uinv[j][i].to_integer()).collect();
        let mut r = Vec::with_capacity(l);
        let mut pi = Elem::one(k.degree());
        for j in 0..l {
            let (q, rem) = col[j].div_mod_floor(&e[j]);
            if !q.is_zero() {
                pi = k.mul(&pi, &k.pow_big(&cl.witnesses()[j], &q)?);
            }
            r.push(rem);
        }
        c_all.push(cl.ideal_of(k, &r));
        pis.push(pi);
    }
    let idx: Vec<usize> = (0..l).rev().filter(|&i| !d[i].is_one()).collect();
    let inv: Vec<BigInt> = idx.iter().map(|&i| d[i].clone()).collect();
    let c: Vec<FracIdeal> = idx.iter().map(|&i| c_all[i].clone()).collect();
    let group = FinAbGroup::from_invariants(inv)?.with_gens(c.iter().cloned().map(GenRep::Ideal).collect());
    Ok(TClassGroupData { group, t: t_sorted, c, idx, u: s.u, v: s.v, d, pis, gammas })
}

/// Returns `(v, gamma)` with `I o_T = gamma * prod (c_i o_T)^{v_i}`, checked exactly.
pub fn tclass_dlog(k: &NumberField, cl: &ClassGroupData, tc: &TClassGroupData, i: &FracIdeal) -> Result<(Vec<BigInt>, Elem)> {
    let l = cl.gens().len();
    let (w, alpha) = cl.dlog(k, i)?;
    let vp = tc.u.mul_vec(&w);
    let mut n_ext = vec![BigInt::zero(); tc.v.rows()];
    let mut vfull = vec![BigInt::zero(); l];
    for j in 0..l {
        let (q, r) = vp[j].div_mod_floor(&tc.d[j]);
        n_ext[j] = q;
        vfull[j] = r;
    }
    let y = tc.v.mul_vec(&n_ext);
    let mut gamma = k.mul(&alpha, &rho(k, cl, &tc.gammas, &y)?);
    for j in 0..l {
        if !vfull[j].is_zero() {
            gamma = k.mul(&gamma, &k.pow_big(&tc.pis[j], &vfull[j])?);
        }
    }
    let v: Vec<BigInt> = tc.idx.iter().map(|&j| vfull[j].clone()).collect();
    // I * prod c^{-v} * gamma^{-1} must be supported on T
    let rest = i.div(k, &tc.ideal_of(k, &v)).mul_elem(k, &k.inv(&gamma)?)?;
    if !tc.is_t_supported(k, &rest)? {
        return Err(Error::Verification("T-class discrete logarithm failed its witness check".into()));
    }
    Ok((v, gamma))
}

/// Generators of `o_{K,T}^*`: torsion, fundamental units, and one T-unit per
/// kernel vector of `[D_B | X]`.
pub fn t_units(k: &NumberField, cl: &ClassGroupData, tc: &TClassGroupData) -> Result<Vec<Elem>> {
    let l = cl.gens().len();
    let mut out = cl.units().generators();
    let cols = tc.v.cols();
    for j in l..cols {
        let y = tc.v.col(j);
        let u = k.inv(&rho(k, cl, &tc.gammas, &y)?)?;
        out.push(u);
    }
    Ok(out)
}

/// Valuations of `x` at the primes of T; `x` must be a T-unit.
pub fn t_valuations(k: &NumberField, tc: &TClassGroupData, x: &Elem) -> Result<Vec<i64>> {
    let fac = factor_ideal(k, &FracIdeal::principal(k, x)?)?;
    if fac.iter().any(|(p, _)| !tc.in_t(p)) {
        return Err(Error::Verification("element is not a T-unit".into()));
    }
    Ok(tc.t.iter().map(|p| p.valuation(x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classgroup::tests::example2_input;
    use crate::classgroup::{classgroup_imag_quadratic, verify_classgroup_input, DEFAULT_PIP_RADIUS};
    use crate::field::SuppliedPrime;
    use crate::ideal::tests::{example1, example2};
    use crate::prime::decompose_prime;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn example1_t_class_group() {
        let k = example1();
        let cl = classgroup_imag_quadratic(&k).unwrap();
        let t = decompose_prime(&k, &b(7)).unwrap();
        let tc = tclassgroup(&k, &cl, &t).unwrap();
        assert_eq!(tc.group().invariants_i64(), vec![2]);
        let p5 = decompose_prime(&k, &b(5)).unwrap().remove(0);
        let (v, _) = tclass_dlog(&k, &cl, &tc, p5.ideal()).unwrap();
        assert_eq!(v, vec![b(1)]);
        let (v, _) = tclass_dlog(&k, &cl, &tc, t[0].ideal()).unwrap();
        assert_eq!(v, vec![b(0)]);
        for p in [2i64, 3, 11, 13] {
            for pr in decompose_prime(&k, &b(p)).unwrap() {
                tclass_dlog(&k, &cl, &tc, pr.ideal()).unwrap();
            }
        }
        let us = t_units(&k, &cl, &tc).unwrap();
        assert_eq!(us.len(), 3);
        for u in &us[1..] {
            let vals = t_valuations(&k, &tc, u).unwrap();
            assert!(vals.iter().any(|&x| x != 0));
        }
        // trivial T
        let tc0 = tclassgroup(&k, &cl, &[]).unwrap();
        assert_eq!(tc0.group().invariants_i64(), vec![16, 2]);
    }

    #[test]
    fn example2_t_class_group() {
        let mut k = example2();
        k.supply_primes(b(3), vec![SuppliedPrime { pi: Elem::from_i64(&[0, 1, 0, 0]), e: 2, f: 2 }]);
        let (input, units) = example2_input();
        let cl = verify_classgroup_input(&k, &input, units, DEFAULT_PIP_RADIUS).unwrap();
        let t = decompose_prime(&k, &b(11)).unwrap();
        let tc = tclassgroup(&k, &cl, &t).unwrap();
        assert_eq!(tc.group().invariants_i64(), vec![2]);
        let p2 = decompose_prime(&k, &b(2)).unwrap().remove(0);
        let (v, _) = tclass_dlog(&k, &cl, &tc, p2.ideal()).unwrap();
        assert_eq!(v, vec![b(1)]);
        let us = t_units(&k, &cl, &tc).unwrap();
        assert_eq!(us.len(), 2 + 4);
        for u in &us {
            t_valuations(&k, &tc, u).unwrap();
        }
    }
}
