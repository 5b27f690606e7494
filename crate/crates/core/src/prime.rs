//! Prime ideals: decomposition of rational primes, valuations, approximation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{factor_int, prime_divisors, to_u64, valuation_int};
use crate::error::{Error, Result};
use crate::field::{Elem, NumberField};
use crate::ideal::FracIdeal;
use crate::linalg::{hnf_full, IntMat};
use crate::poly::{fp, QPoly};

type Q = BigRational;

#[derive(Clone)]
pub struct PrimeIdeal {
    p: BigInt,
    e: u32,
    f: u32,
    pi: Elem,
    ideal: FracIdeal,
    /// Multiplication by an integral `tau` in `p * P^{-1}` but not in `p * o_K`.
    /// Multiplying by `tau / p` lowers the valuation at P by exactly one.
    tau: IntMat,
    unif: Elem,
}

impl std::fmt::Debug for PrimeIdeal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Prime(p={}, e={}, f={}, pi={:?})", self.p, self.e, self.f, self.pi)
    }
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, o: &Self) -> bool {
        self.ideal == o.ideal
    }
}

impl Eq for PrimeIdeal {}

impl PrimeIdeal {
    fn build(k: &NumberField, p: &BigInt, e: u32, f: u32, pi: Elem) -> Result<Self> {
        let n = k.degree();
        if !pi.is_integral() {
            return Err(Error::Input("prime generator must be integral".into()));
        }
        let ideal = FracIdeal::from_gens(k, &[Elem::integer(n, p.clone()), pi.clone()])?;
        if ideal.is_unit() {
            return Err(Error::Verification(format!("({p}, pi) is the unit ideal")));
        }
        let pinv = ideal.inv(k).scale(&Q::from_integer(p.clone()));
        if !pinv.is_integral() {
            return Err(Error::Verification(format!("({p}, pi) does not divide {p}")));
        }
        let tau = pinv
            .basis()
            .into_iter()
            .map(|b| b.num().to_vec())
            .find(|c| c.iter().any(|x| !x.is_multiple_of(p)))
            .ok_or_else(|| Error::Verification(format!("({p}, pi) equals {p}*o_K")))?;
        let mut pr = PrimeIdeal { p: p.clone(), e, f, pi: pi.clone(), ideal, tau: k.mult_matrix_int(&tau), unif: pi };
        pr.unif = pr.find_uniformizer(k)?;
        Ok(pr)
    }

    fn find_uniformizer(&self, k: &NumberField) -> Result<Elem> {
        let n = k.degree();
        let p = Elem::integer(n, self.p.clone());
        if self.e == 1 {
            return Ok(p);
        }
        let b = self.ideal.basis();
        let mut cands = vec![self.pi.clone(), self.pi.add(&p)];
        cands.extend(b.iter().cloned());
        for i in 0..n {
            for j in i + 1..n {
                cands.push(b[i].add(&b[j]));
            }
        }
        cands
            .into_iter()
            .find(|c| !c.is_zero() && self.valuation(c) == 1)
            .ok_or_else(|| Error::Verification(format!("no uniformizer found above {}", self.p)))
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    /// Second generator of the two-element representation `(p, pi)`.
    pub fn pi(&self) -> &Elem {
        &self.pi
    }

    pub fn ideal(&self) -> &FracIdeal {
        &self.ideal
    }

    /// An element of valuation exactly one.
    pub fn uniformizer(&self) -> &Elem {
        &self.unif
    }

    pub fn norm(&self) -> BigInt {
        self.p.pow(self.f)
    }

    fn valuation_primitive(&self, x: &[BigInt]) -> i64 {
        let mut y = x.to_vec();
        let mut v = 0;
        loop {
            let z = self.tau.mul_vec(&y);
            if z.iter().all(|c| c.is_multiple_of(&self.p)) {
                y = z.into_iter().map(|c| c / &self.p).collect();
                v += 1;
            } else {
                return v;
            }
        }
    }

    /// Valuation of a nonzero element.
    pub fn valuation(&self, x: &Elem) -> i64 {
        assert!(!x.is_zero(), "valuation of zero");
        let content = x.num().iter().fold(BigInt::zero(), |a, b| a.gcd(b));
        let prim: Vec<BigInt> = x.num().iter().map(|c| c / &content).collect();
        let e = self.e as i64;
        e * (valuation_int(&content, &self.p) as i64 - valuation_int(x.den(), &self.p) as i64)
            + self.valuation_primitive(&prim)
    }

    /// Valuation of a nonzero fractional ideal: the minimum over a Z-basis.
    pub fn valuation_ideal(&self, a: &FracIdeal) -> i64 {
        let v = (0..a.dim())
            .map(|j| Elem::from_ints(a.hnf().col(j)))
            .filter(|b| !b.is_zero())
            .map(|b| self.valuation(&b))
            .min()
            .expect("nonzero ideal");
        v - self.e as i64 * valuation_int(a.den(), &self.p) as i64
    }

    pub fn pow(&self, k: &NumberField, t: i64) -> FracIdeal {
        self.ideal.pow(k, t)
    }

    /// Size of the residue field minus one, with its factorization.
    pub fn residue_unit_order(&self) -> (BigInt, Vec<(BigInt, u32)>) {
        let q1 = self.norm() - 1;
        let fac = factor_int(&q1);
        (q1, fac)
    }

    /// Does `x` have multiplicative order exactly `q - 1` modulo this prime?
    pub fn is_primitive_root(&self, k: &NumberField, x: &[BigInt], q1: &BigInt, fac: &[(BigInt, u32)]) -> bool {
        let one = self.ideal.reduce(&Elem::one(k.degree()).num().to_vec());
        let x = self.ideal.reduce(x);
        if x.iter().all(Zero::is_zero) {
            return false;
        }
        if self.ideal.pow_mod(k, &x, q1) != one {
            return false;
        }
        fac.iter().all(|(r, _)| self.ideal.pow_mod(k, &x, &(q1 / r)) != one)
    }

    /// Deterministic search for a generator of `(o_K / P)^*`.
    ///
    /// Returns `None` only if no element of order `N(P) - 1` exists among the
    /// candidates, which for a genuine prime is astronomically unlikely.
    pub fn primitive_root(&self, k: &NumberField) -> Option<Vec<BigInt>> {
        let n = k.degree();
        let (q1, fac) = self.residue_unit_order();
        if q1.is_one() {
            return Some(Elem::one(n).num().to_vec());
        }
        let base: u64 = to_u64(&self.p).map_or(7, |p| p.min(7));
        for t in 1u64..20000 {
            let mut c = vec![BigInt::zero(); n];
            let mut r = t;
            for slot in c.iter_mut() {
                *slot = BigInt::from(r % base);
                r /= base;
            }
            if r > 0 {
                break;
            }
            if self.is_primitive_root(k, &c, &q1, &fac) {
                return Some(self.ideal.reduce(&c));
            }
        }
        None
    }
}

/// A modulus `m0 * m_inf` with `m_inf` a set of real places (by index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modulus {
    finite: FracIdeal,
    infinite: Vec<usize>,
}

impl Modulus {
    pub fn new(k: &NumberField, finite: FracIdeal, mut infinite: Vec<usize>) -> Result<Self> {
        if !finite.is_integral() {
            return Err(Error::Input("finite part of a modulus must be integral".into()));
        }
        infinite.sort_unstable();
        infinite.dedup();
        if infinite.iter().any(|&i| i >= k.signature().0) {
            return Err(Error::Input("infinite part must index real places".into()));
        }
        Ok(Modulus { finite, infinite })
    }

    pub fn finite(&self) -> &FracIdeal {
        &self.finite
    }

    pub fn infinite(&self) -> &[usize] {
        &self.infinite
    }
}

fn sorted_factor_key(g: &fp::Poly) -> (usize, Vec<u64>) {
    (g.len(), g.iter().rev().copied().collect())
}

/// Decomposition of a rational prime into prime ideals.
///
/// Primes dividing the index `[o_K : Z[theta]]` need a verified decomposition
/// supplied with the field; otherwise the factorization of the defining
/// polynomial modulo `ell` is used.
pub fn decompose_prime(k: &NumberField, ell: &BigInt) -> Result<Vec<PrimeIdeal>> {
    if ell <= &BigInt::one() || !crate::arith::is_prime(ell) {
        return Err(Error::Input(format!("{ell} is not prime")));
    }
    if let Some(sp) = k.supplied_primes(ell) {
        let primes = sp
            .iter()
            .map(|s| PrimeIdeal::build(k, ell, s.e, s.f, s.pi.clone()))
            .collect::<Result<Vec<_>>>()?;
        verify_decomposition(k, ell, &primes)?;
        return Ok(primes);
    }
    if k.index().is_multiple_of(ell) {
        return Err(Error::IndexDivisor(ell.clone()));
    }
    let p = to_u64(ell).ok_or_else(|| Error::Input(format!("prime {ell} too large for decomposition")))?;
    let mut facs = fp::factor(&fp::from_ints(k.poly(), p), p);
    facs.sort_by_key(|(g, _)| sorted_factor_key(g));
    let n = k.degree();
    let mut out = Vec::with_capacity(facs.len());
    for (g, mult) in facs {
        let f = (g.len() - 1) as u32;
        let pi = if f as usize == n {
            Elem::integer(n, ell.clone())
        } else {
            let coeffs: Vec<Q> = g.iter().map(|&c| Q::from_integer(BigInt::from(c))).collect();
            k.from_power_basis(&QPoly::new(coeffs))
        };
        out.push(PrimeIdeal::build(k, ell, mult as u32, f, pi)?);
    }
    Ok(out)
}

/// Checks norms, `sum e f = n`, distinctness, `prod P^e = ell o_K` and that
/// residue rings of degree > 1 are fields.
pub fn verify_decomposition(k: &NumberField, ell: &BigInt, primes: &[PrimeIdeal]) -> Result<()> {
    let n = k.degree();
    let mut total = 0usize;
    let mut prod = FracIdeal::unit(n);
    for (i, pr) in primes.iter().enumerate() {
        if pr.ideal.norm_int() != ell.pow(pr.f) {
            return Err(Error::Verification(format!("prime above {ell} has norm {} not {ell}^{}", pr.ideal.norm_int(), pr.f)));
        }
        if primes[..i].iter().any(|q| q == pr) {
            return Err(Error::Verification(format!("repeated prime above {ell}")));
        }
        total += (pr.e * pr.f) as usize;
        prod = prod.mul(k, &pr.ideal.pow(k, pr.e as i64));
    }
    if total != n {
        return Err(Error::Verification(format!("sum of e*f above {ell} is {total}, expected {n}")));
    }
    if prod != FracIdeal::from_int(n, ell) {
        return Err(Error::Verification(format!("product of primes differs from {ell}*o_K")));
    }
    for pr in primes.iter().filter(|p| p.f > 1) {
        if pr.primitive_root(k).is_none() {
            return Err(Error::Verification(format!("residue ring of a prime above {ell} is not a field")));
        }
    }
    Ok(())
}

/// Factorization of a nonzero fractional ideal, primes sorted by `(p, decomposition order)`.
pub fn factor_ideal(k: &NumberField, a: &FracIdeal) -> Result<Vec<(PrimeIdeal, i64)>> {
    let mut ps = prime_divisors(&a.numerator().norm_int());
    ps.extend(prime_divisors(a.den()));
    ps.sort();
    ps.dedup();
    let mut out = Vec::new();
    for p in ps {
        for pr in decompose_prime(k, &p)? {
            let v = pr.valuation_ideal(a);
            if v != 0 {
                out.push((pr, v));
            }
        }
    }
    Ok(out)
}

/// Rebuilds `prod P^v`.
pub fn ideal_from_factorization(k: &NumberField, fac: &[(PrimeIdeal, i64)]) -> FracIdeal {
    fac.iter().fold(FracIdeal::unit(k.degree()), |acc, (p, v)| acc.mul(k, &p.pow(k, *v)))
}

/// Finds `a in A`, `b in B` with `a + b = 1` for coprime integral ideals.
pub fn split_one(k: &NumberField, a: &FracIdeal, b: &FracIdeal) -> Result<(Elem, Elem)> {
    let n = k.degree();
    let m = a.hnf().hstack(b.hnf())?;
    let h = hnf_full(&m);
    if h.rank != n || (0..n).any(|i| !h.h[(i, n + i)].is_one()) {
        return Err(Error::NotCoprime);
    }
    let z = h.u.col(n);
    let x = Elem::from_ints(a.hnf().mul_vec(&z[..n]));
    let y = Elem::from_ints(b.hnf().mul_vec(&z[n..]));
    debug_assert!(x.add(&y).is_one());
    Ok((x, y))
}

/// Solves `x = x_i mod A_i` for pairwise coprime integral ideals; `x` is reduced modulo the product.
pub fn ideal_crt(k: &NumberField, parts: &[(FracIdeal, Elem)]) -> Result<Elem> {
    let n = k.degree();
    if parts.is_empty() {
        return Ok(Elem::zero(n));
    }
    let mut acc = Elem::zero(n);
    let total = parts.iter().fold(FracIdeal::unit(n), |t, (a, _)| t.mul(k, a));
    for (i, (ai, xi)) in parts.iter().enumerate() {
        let others = parts
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(FracIdeal::unit(n), |t, (_, (a, _))| t.mul(k, a));
        let (_, e) = split_one(k, ai, &others)?;
        acc = acc.add(&k.mul(&e, xi));
    }
    if !acc.is_integral() {
        return Err(Error::Input("CRT residues must be integral".into()));
    }
    Ok(total.reduce_elem(&acc))
}

/// Element `a` with `v_P(a) = e_P` for the listed primes and `v_Q(a) >= 0` elsewhere.
pub fn weak_approx(k: &NumberField, targets: &[(PrimeIdeal, i64)]) -> Result<Elem> {
    let n = k.degree();
    if targets.is_empty() {
        return Ok(Elem::one(n));
    }
    for (i, (p, _)) in targets.iter().enumerate() {
        if targets[..i].iter().any(|(q, _)| q == p) {
            return Err(Error::Input("weak approximation needs distinct primes".into()));
        }
    }
    let mut rational: Vec<BigInt> = targets.iter().map(|(p, _)| p.p.clone()).collect();
    rational.sort();
    rational.dedup();
    let mut parts = Vec::new();
    let mut den = BigInt::one();
    for ell in &rational {
        let mut local: Vec<(PrimeIdeal, i64)> = Vec::new();
        for pr in decompose_prime(k, ell)? {
            let t = targets.iter().find(|(q, _)| *q == pr).map_or(0, |(_, v)| *v);
            local.push((pr, t));
        }
        // smallest k_p making every target nonnegative after multiplying by p^k_p
        let kp = local.iter().map(|(pr, t)| if *t < 0 { (-t + pr.e as i64 - 1) / pr.e as i64 } else { 0 }).max().unwrap();
        den *= ell.pow(kp as u32);
        for (pr, t) in local {
            let t = t + pr.e as i64 * kp;
            let modulus = pr.pow(k, t + 1);
            let x = k.pow_u(&pr.unif, t as u64);
            parts.push((modulus, x));
        }
    }
    let b = ideal_crt(k, &parts)?;
    Ok(b.scale(&Q::new(BigInt::one(), den)))
}

/// Returns `(a', gamma)` with `a' = gamma * a` integral and coprime to `m0`.
pub fn coprime_representative(k: &NumberField, a: &FracIdeal, m0: &FracIdeal) -> Result<(FracIdeal, Elem)> {
    let n = k.degree();
    if a.is_integral() && a.is_coprime_to(m0) {
        return Ok((a.clone(), Elem::one(n)));
    }
    let mut ps = prime_divisors(&m0.norm_int());
    ps.extend(prime_divisors(a.den()));
    ps.sort();
    ps.dedup();
    let mut targets = Vec::new();
    for ell in &ps {
        for pr in decompose_prime(k, ell)? {
            let v = pr.valuation_ideal(a);
            let divides_m0 = pr.valuation_ideal(m0) > 0;
            if divides_m0 || v < 0 {
                targets.push((pr, -v));
            }
        }
    }
    let gamma = weak_approx(k, &targets)?;
    let ap = a.mul_elem(k, &gamma)?;
    debug_assert!(ap.is_integral() && ap.is_coprime_to(m0));
    Ok((ap, gamma))
}

/// The prime above `p` equal to `p o_K + pi o_K`.
pub fn find_prime(k: &NumberField, p: &BigInt, pi: &Elem) -> Result<PrimeIdeal> {
    let target = FracIdeal::from_gens(k, &[Elem::integer(k.degree(), p.clone()), pi.clone()])?;
    decompose_prime(k, p)?
        .into_iter()
        .find(|pr| pr.ideal == target)
        .ok_or_else(|| Error::Verification(format!("({p}, {pi:?}) is not a prime ideal")))
}

/// Every prime ideal of norm at most `bound`, sorted by rational prime.
pub fn primes_up_to_norm(k: &NumberField, bound: u64) -> Result<Vec<PrimeIdeal>> {
    let mut out = Vec::new();
    for p in crate::arith::primes_up_to(bound) {
        for pr in decompose_prime(k, &BigInt::from(p))? {
            if pr.norm() <= BigInt::from(bound) {
                out.push(pr);
            }
        }
    }
    Ok(out)
}

/// Is a nonzero element a unit at every prime in `primes`?
pub fn is_coprime_elem(x: &Elem, primes: &[PrimeIdeal]) -> bool {
    primes.iter().all(|p| p.valuation(x) == 0)
}

pub fn abs_norm_int(k: &NumberField, x: &Elem) -> BigInt {
    k.norm(x).numer().abs() / k.norm(x).denom()
}
