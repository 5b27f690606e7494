//! Unit groups `(o_K / m)^*`, optionally with sign components at real places.
//!
//! Each prime power `P^k || m` contributes a lifted primitive root of the
//! residue field and the generators `1 + y` of the filtration quotients
//! `(1 + P^i) / (1 + P^{i+1})`; the relations between them are computed
//! exactly and reduced by SNF.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{Elem, NumberField};
use crate::group::{FinAbGroup, GenRep};
use crate::ideal::FracIdeal;
use crate::linalg::lattice::lattice_coords;
use crate::linalg::{hnf_basis, hnf_full, IntMat};
use crate::prime::{factor_ideal, ideal_crt, weak_approx, PrimeIdeal};

#[derive(Clone, Debug)]
struct Level {
    /// `y_j in P^i`, an F_p-basis of `P^i / P^{i+1}`.
    ys: Vec<Vec<BigInt>>,
    /// `[y | P^{i+1}]` and its HNF transform, for solving coordinates.
    hnf: IntMat,
    u: IntMat,
    /// `(1 + y_j)^{-1} mod P^k`.
    inv: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug)]
struct Local {
    prime: PrimeIdeal,
    exp: u32,
    pk: FracIdeal,
    g: Vec<BigInt>,
    q1: BigInt,
    /// `g^{-1} mod P^k`.
    g_inv: Vec<BigInt>,
    levels: Vec<Level>,
    offset: usize,
}

impl Local {
    fn rank(&self) -> usize {
        1 + self.levels.iter().map(|l| l.ys.len()).sum::<usize>()
    }
}

#[derive(Clone, Debug)]
pub struct ResidueUnitGroup {
    modulus: FracIdeal,
    infinite: Vec<usize>,
    locals: Vec<Local>,
    /// Raw generators as global elements (CRT lifts, then sign generators).
    raw_gens: Vec<Elem>,
    /// Sign bits of the finite raw generators at the places in `infinite`.
    raw_signs: Vec<Vec<u8>>,
    group: FinAbGroup,
}

/// Baby-step giant-step in the cyclic group `(o_K / P)^*` of order `q1`.
fn residue_log(k: &NumberField, p: &FracIdeal, g: &[BigInt], x: &[BigInt], q1: &BigInt) -> Result<BigInt> {
    let x = p.reduce(x);
    let one = p.reduce(&Elem::one(k.degree()).num().to_vec());
    if x == one {
        return Ok(BigInt::zero());
    }
    let q1u = q1.to_u64().ok_or_else(|| Error::ResidueRingTooLarge(q1 + 1))?;
    let m = q1u.sqrt() + 1;
    let mut table: HashMap<Vec<BigInt>, u64> = HashMap::with_capacity(m as usize);
    let mut cur = one.clone();
    for j in 0..m {
        table.entry(cur.clone()).or_insert(j);
        cur = p.mul_mod(k, &cur, g);
    }
    // giant step g^{-m}
    let gm_inv = p.pow_mod(k, g, &(q1 - BigInt::from(m % q1u)).mod_floor(q1));
    let mut y = x;
    for i in 0..=m {
        if let Some(&j) = table.get(&y) {
            return Ok(BigInt::from(i * m + j).mod_floor(q1));
        }
        y = p.mul_mod(k, &y, &gm_inv);
    }
    Err(Error::Input("element is not a unit modulo the prime".into()))
}

impl Local {
    fn build(k: &NumberField, prime: PrimeIdeal, exp: u32) -> Result<Self> {
        let n = k.degree();
        let pk = prime.pow(k, exp as i64);
        let g = prime.primitive_root(k).ok_or_else(|| Error::Verification("no primitive root found".into()))?;
        let g = pk.reduce(&g);
        let q = prime.norm();
        let q1 = &q - 1;
        let ord = &q1 * q.pow(exp - 1);
        let g_inv = pk.pow_mod(k, &g, &(&ord - 1));
        let mut levels = Vec::new();
        for i in 1..exp {
            let pi = prime.pow(k, i as i64);
            let next = prime.pow(k, i as i64 + 1);
            let mut lat = next.hnf().clone();
            let mut ys = Vec::new();
            for c in pi.hnf().to_cols() {
                if lattice_coords(&lat, &c).is_none() {
                    lat = hnf_basis(&lat.hstack(&IntMat::from_cols(n, &[c.clone()]))?);
                    ys.push(c);
                }
            }
            debug_assert_eq!(ys.len() as u32, prime.f());
            let full = hnf_full(&IntMat::from_cols(n, &ys).hstack(next.hnf())?);
            let cols = full.h.cols();
            let hnf = full.h.select_cols(&(cols - n..cols).collect::<Vec<_>>());
            let inv = ys
                .iter()
                .map(|y| {
                    let one_y: Vec<BigInt> = Elem::one(n).num().iter().zip(y).map(|(a, b)| a + b).collect();
                    pk.pow_mod(k, &one_y, &(&ord - 1))
                })
                .collect();
            levels.push(Level { ys, hnf, u: full.u, inv });
        }
        Ok(Local { prime, exp, pk, g, q1, g_inv, levels, offset: 0 })
    }

    /// Exponents `(a, c)` with `x = g^a prod (1 + y)^c mod P^k`.
    fn dlog(&self, k: &NumberField, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let n = k.degree();
        let a = residue_log(k, self.prime.ideal(), &self.g, x, &self.q1)?;
        let mut out = vec![a.clone()];
        let mut cur = self.pk.mul_mod(k, x, &self.pk.pow_mod(k, &self.g_inv, &a));
        let p = self.prime.p();
        for lvl in &self.levels {
            let mut z = cur.clone();
            z[0] -= 1;
            let t = lattice_coords(&lvl.hnf, &z).ok_or_else(|| Error::Input("filtration step failed".into()))?;
            let mut tf = vec![BigInt::zero(); lvl.u.rows() - n];
            tf.extend(t);
            let coeff = lvl.u.mul_vec(&tf);
            for (j, inv) in lvl.inv.iter().enumerate() {
                let c = coeff[j].mod_floor(p);
                if !c.is_zero() {
                    cur = self.pk.mul_mod(k, &cur, &self.pk.pow_mod(k, inv, &c));
                }
                out.push(c);
            }
        }
        debug_assert!({
            let mut one = vec![BigInt::zero(); n];
            one[0] = BigInt::one();
            cur == self.pk.reduce(&one)
        });
        Ok(out)
    }

    fn gens(&self, k: &NumberField) -> Vec<Vec<BigInt>> {
        let n = k.degree();
        let mut out = vec![self.g.clone()];
        for lvl in &self.levels {
            for y in &lvl.ys {
                let mut v = y.clone();
                v[0] += 1;
                out.push(self.pk.reduce(&v[..n]));
            }
        }
        out
    }

    /// Relation columns (local coordinates).
    fn relations(&self, k: &NumberField) -> Result<Vec<Vec<BigInt>>> {
        let r = self.rank();
        let gens = self.gens(k);
        let mut cols = Vec::with_capacity(r);
        let mut j = 0;
        let orders: Vec<BigInt> = std::iter::once(self.q1.clone())
            .chain(self.levels.iter().flat_map(|l| std::iter::repeat(self.prime.p().clone()).take(l.ys.len())))
            .collect();
        for (gen, ord) in gens.iter().zip(&orders) {
            let pw = self.pk.pow_mod(k, gen, ord);
            let c = self.dlog(k, &pw)?;
            let mut col: Vec<BigInt> = c.into_iter().map(|x| -x).collect();
            col[j] += ord;
            cols.push(col);
            j += 1;
        }
        Ok(cols)
    }
}

/// Writes `x` (a unit at every prime of `m`) as `a / b` with `a, b` integral and coprime to `m`.
pub fn coprime_fraction(k: &NumberField, x: &Elem, m: &[PrimeIdeal]) -> Result<(Elem, Elem)> {
    let n = k.degree();
    if x.is_integral() {
        return Ok((x.clone(), Elem::one(n)));
    }
    let d = FracIdeal::from_gens(k, &[Elem::one(n), x.clone()])?.inv(k);
    let mut targets: Vec<(PrimeIdeal, i64)> = factor_ideal(k, &d)?;
    for p in m {
        if targets.iter().any(|(q, _)| q == p) {
            return Err(Error::NotCoprime);
        }
        targets.push((p.clone(), 0));
    }
    let b = weak_approx(k, &targets)?;
    let a = k.mul(x, &b);
    debug_assert!(a.is_integral() && b.is_integral());
    Ok((a, b))
}

impl ResidueUnitGroup {
    /// `(o_K / m)^*`, times `{+-1}` at each listed real place.
    pub fn new(k: &NumberField, m: &FracIdeal, infinite: &[usize]) -> Result<Self> {
        let n = k.degree();
        if !m.is_integral() {
            return Err(Error::Input("modulus must be integral".into()));
        }
        let fac = factor_ideal(k, m)?;
        let mut locals = Vec::with_capacity(fac.len());
        let mut offset = 0;
        for (p, e) in fac {
            let mut l = Local::build(k, p, e as u32)?;
            l.offset = offset;
            offset += l.rank();
            locals.push(l);
        }
        let finite_rank = offset;
        let rank = finite_rank + infinite.len();
        let mut rel = IntMat::zeros(rank, rank);
        let mut raw_gens = Vec::with_capacity(rank);
        for (li, l) in locals.iter().enumerate() {
            for (j, col) in l.relations(k)?.into_iter().enumerate() {
                for (i, x) in col.into_iter().enumerate() {
                    rel[(l.offset + i, l.offset + j)] = x;
                }
            }
            for g in l.gens(k) {
                let parts: Vec<(FracIdeal, Elem)> = locals
                    .iter()
                    .enumerate()
                    .map(|(lj, o)| (o.pk.clone(), if lj == li { Elem::from_ints(g.clone()) } else { Elem::one(n) }))
                    .collect();
                raw_gens.push(ideal_crt(k, &parts)?);
            }
        }
        let raw_signs: Vec<Vec<u8>> = raw_gens.iter().map(|g| sign_bits(k, g, infinite)).collect();
        // finite relations may be negative somewhere; compensate with sign generators
        for j in 0..finite_rank {
            for s in 0..infinite.len() {
                let odd = (0..finite_rank).filter(|&i| rel[(i, j)].is_odd() && raw_signs[i][s] == 1).count() % 2;
                rel[(finite_rank + s, j)] = BigInt::from(odd as i64);
            }
        }
        for (s, &place) in infinite.iter().enumerate() {
            rel[(finite_rank + s, finite_rank + s)] = BigInt::from(2);
            raw_gens.push(sign_generator(k, m, infinite, place)?);
        }
        let group = FinAbGroup::from_relations(&rel)?;
        let mut out = ResidueUnitGroup {
            modulus: m.clone(),
            infinite: infinite.to_vec(),
            locals,
            raw_gens,
            raw_signs,
            group,
        };
        let reps: Vec<GenRep> = (0..out.group.ngens()).map(|i| GenRep::Elem(out.raw_product(k, &out.group.lift().col(i)))).collect();
        out.group = out.group.clone().with_gens(reps);
        Ok(out)
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn modulus(&self) -> &FracIdeal {
        &self.modulus
    }

    pub fn infinite(&self) -> &[usize] {
        &self.infinite
    }

    pub fn order(&self) -> BigInt {
        self.group.order()
    }

    /// The primes dividing the modulus.
    pub fn primes(&self) -> Vec<PrimeIdeal> {
        self.locals.iter().map(|l| l.prime.clone()).collect()
    }

    /// `prod g_raw^{e}` reduced modulo `m` (exponents taken nonnegative).
    fn raw_product(&self, k: &NumberField, e: &[BigInt]) -> Elem {
        let n = k.degree();
        let mut acc = Elem::one(n).num().to_vec();
        let m = &self.modulus;
        let fr = self.raw_signs.len();
        let mut signs_needed: Vec<u8> = e[fr..].iter().map(|x| u8::from(x.is_odd())).collect();
        for (i, (g, x)) in self.raw_gens[..fr].iter().zip(e).enumerate() {
            if x.is_odd() {
                for (a, b) in signs_needed.iter_mut().zip(&self.raw_signs[i]) {
                    *a ^= b;
                }
            }
            let l = self.locals.iter().find(|l| i >= l.offset && i < l.offset + l.rank()).unwrap();
            let ord = &l.q1 * l.prime.norm().pow(l.exp - 1);
            acc = m.mul_mod(k, &acc, &m.pow_mod(k, g.num(), &x.mod_floor(&ord)));
        }
        let mut r = Elem::from_ints(acc);
        if !self.infinite.is_empty() {
            r = fix_signs(k, m, &self.infinite, &r, &signs_needed);
        }
        r
    }

    /// Raw coordinates of `x`, which must be a unit at every prime dividing `m`.
    pub fn raw_dlog(&self, k: &NumberField, x: &Elem) -> Result<Vec<BigInt>> {
        let primes = self.primes();
        if x.is_zero() || primes.iter().any(|p| p.valuation(x) != 0) {
            return Err(Error::NotCoprime);
        }
        let (a, b) = coprime_fraction(k, x, &primes)?;
        let mut out = self.raw_dlog_int(k, &a)?;
        let ob = self.raw_dlog_int(k, &b)?;
        for (o, y) in out.iter_mut().zip(ob) {
            *o -= y;
        }
        Ok(out)
    }

    fn raw_dlog_int(&self, k: &NumberField, x: &Elem) -> Result<Vec<BigInt>> {
        let mut out = Vec::with_capacity(self.group.raw_rank());
        for l in &self.locals {
            out.extend(l.dlog(k, &l.pk.reduce(x.num()))?);
        }
        if !self.infinite.is_empty() {
            let mut s = sign_bits(k, x, &self.infinite);
            for (c, gs) in out.iter().zip(&self.raw_signs) {
                if c.is_odd() {
                    for (a, b) in s.iter_mut().zip(gs) {
                        *a ^= b;
                    }
                }
            }
            out.extend(s.into_iter().map(BigInt::from));
        }
        Ok(out)
    }

    /// SNF coordinates of `x`.
    pub fn dlog(&self, k: &NumberField, x: &Elem) -> Result<Vec<BigInt>> {
        Ok(self.group.from_raw(&self.raw_dlog(k, x)?))
    }

    /// A representative element (integral) of the class with SNF coordinates `v`.
    pub fn element_of(&self, k: &NumberField, v: &[BigInt]) -> Elem {
        self.raw_product(k, &self.group.to_raw(v))
    }
}

fn sign_bits(k: &NumberField, x: &Elem, places: &[usize]) -> Vec<u8> {
    if places.is_empty() {
        return vec![];
    }
    let s = k.real_signs(x);
    places.iter().map(|&i| u8::from(s[i] < 0)).collect()
}

/// An element `= 1 mod m`, negative at `place` and positive at the other listed places.
fn sign_generator(k: &NumberField, m: &FracIdeal, places: &[usize], place: usize) -> Result<Elem> {
    let want: Vec<u8> = places.iter().map(|&i| u8::from(i == place)).collect();
    search_sign_pattern(k, m, places, &Elem::one(k.degree()), &want)
}

/// Adjusts `x` modulo `m` so that its signs at `places` match `want`.
fn fix_signs(k: &NumberField, m: &FracIdeal, places: &[usize], x: &Elem, want: &[u8]) -> Elem {
    search_sign_pattern(k, m, places, x, want).expect("sign pattern reachable")
}

fn search_sign_pattern(k: &NumberField, m: &FracIdeal, places: &[usize], x: &Elem, want: &[u8]) -> Result<Elem> {
    let n = k.degree();
    if sign_bits(k, x, places) == want {
        return Ok(x.clone());
    }
    let mmin = m.min_integer().to_integer();
    // x + N s w with w in a small box: for large s the signs are those of w
    for radius in 1i64..=3 {
        let side = (2 * radius + 1) as u64;
        for shift in 0..64u32 {
            let scale = &mmin << shift;
            for t in 0..side.pow(n as u32) {
                let mut r = t;
                let mut w = Vec::with_capacity(n);
                for _ in 0..n {
                    w.push(BigInt::from((r % side) as i64 - radius) * &scale);
                    r /= side;
                }
                let y = x.add(&Elem::from_ints(w));
                if !y.is_zero() && sign_bits(k, &y, places) == want {
                    return Ok(y);
                }
            }
        }
    }
    Err(Error::Inconclusive("no element with the requested signs found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::tests::{example1, example2, ints, qs};
    use crate::prime::decompose_prime;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn units_among(g: &ResidueUnitGroup, cands: &[&[i64]]) -> Vec<Elem> {
        cands
            .iter()
            .map(|c| Elem::from_i64(c))
            .filter(|x| g.primes().iter().all(|p| p.valuation(x) == 0))
            .collect()
    }

    fn check_order(k: &NumberField, m: &FracIdeal) -> ResidueUnitGroup {
        let g = ResidueUnitGroup::new(k, m, &[]).unwrap();
        let mut phi = Q::from_integer(m.norm_int());
        for (p, _) in factor_ideal(k, m).unwrap() {
            let q = Q::from_integer(p.norm());
            phi = phi * (Q::one() - Q::one() / q);
        }
        assert_eq!(Q::from_integer(g.order()), phi);
        g
    }

    type Q = num_rational::BigRational;

    #[test]
    fn example1_residue_groups() {
        let k = example1();
        let g = check_order(&k, &FracIdeal::unit(2));
        assert!(g.group().is_trivial());
        let p5 = decompose_prime(&k, &b(5)).unwrap().remove(0);
        let g = check_order(&k, p5.ideal());
        assert_eq!(g.group().invariants_i64(), vec![4]);
        let g = check_order(&k, &FracIdeal::from_int(2, &b(7)));
        assert_eq!(g.group().invariants_i64(), vec![6, 6]);
        let m = FracIdeal::from_int(2, &b(7)).mul(&k, &p5.pow(&k, 3)).mul(&k, &FracIdeal::from_int(2, &b(4)));
        let g = check_order(&k, &m);
        // dlog is a homomorphism and generators round-trip
        let xs = units_among(&g, &[&[3, 1], &[1, 4], &[11, -9], &[1, 2], &[9, -4], &[-13, 6]]);
        assert!(xs.len() >= 3);
        for x in &xs {
            for y in &xs {
                let d = g.group().add(&g.dlog(&k, x).unwrap(), &g.dlog(&k, y).unwrap());
                assert_eq!(d, g.dlog(&k, &k.mul(x, y)).unwrap());
            }
        }
        for i in 0..g.group().ngens() {
            let mut e = g.group().zero();
            e[i] = b(1);
            let r = g.element_of(&k, &e);
            assert_eq!(g.dlog(&k, &r).unwrap(), e);
        }
        // 1 mod m is trivial
        let one_mod = Elem::one(2).add(&Elem::from_ints(m.hnf().col(1)));
        assert!(g.group().is_zero(&g.dlog(&k, &one_mod).unwrap()));
    }

    #[test]
    fn fractional_and_wild() {
        let k = example2();
        let mut k = k;
        k.supply_primes(b(3), vec![crate::field::SuppliedPrime { pi: Elem::from_i64(&[0, 1, 0, 0]), e: 2, f: 2 }]);
        let p3 = decompose_prime(&k, &b(3)).unwrap().remove(0);
        let m = p3.pow(&k, 3).mul(&k, &FracIdeal::from_int(4, &b(2)));
        let g = check_order(&k, &m);
        let xs = units_among(&g, &[&[1, 0, 1, 0], &[5, 1, 0, 1], &[1, 1, 1, 1], &[2, 0, 1, 1], &[1, 2, 0, 1]]);
        assert!(xs.len() >= 2);
        let x = &xs[0];
        // a fraction whose denominator is prime to m
        let y = xs[1].scale(&Q::new(b(1), b(7)));
        let dx = g.dlog(&k, x).unwrap();
        let dy = g.dlog(&k, &y).unwrap();
        assert_eq!(g.group().add(&dx, &dy), g.dlog(&k, &k.mul(x, &y)).unwrap());
        // and one whose denominator involves a prime of m
        let z = k.div(x, &xs[1]).unwrap();
        let dz = g.dlog(&k, &z).unwrap();
        assert_eq!(g.group().add(&dz, &g.dlog(&k, &xs[1]).unwrap()), dx);
        assert!(matches!(g.dlog(&k, &Elem::from_i64(&[0, 1, 0, 0])), Err(Error::NotCoprime)));
    }

    #[test]
    fn gaussian_and_real_places() {
        let gauss = NumberField::new(ints(&[1, 0, 1]), vec![qs(&[(1, 1), (0, 1)]), qs(&[(0, 1), (1, 1)])]).unwrap();
        let g = check_order(&gauss, &FracIdeal::from_int(2, &b(5)));
        assert_eq!(g.order(), b(16));
        let g = check_order(&gauss, &FracIdeal::from_int(2, &b(2)));
        assert_eq!(g.order(), b(2));
        // Q(sqrt 2): (o/3)^* x signs at both real places
        let k = NumberField::new(ints(&[-2, 0, 1]), vec![qs(&[(1, 1), (0, 1)]), qs(&[(0, 1), (1, 1)])]).unwrap();
        let m = FracIdeal::from_int(2, &b(3));
        let g = ResidueUnitGroup::new(&k, &m, &[0, 1]).unwrap();
        assert_eq!(g.order(), b(8 * 4));
        let neg = Elem::integer(2, -1);
        let d = g.dlog(&k, &neg).unwrap();
        assert!(!g.group().is_zero(&d));
        // a totally positive element = 1 mod 3 is trivial
        let x = Elem::from_i64(&[7, 3]);
        assert_eq!(k.real_signs(&x), vec![1, 1]);
        assert!(g.group().is_zero(&g.dlog(&k, &x).unwrap()));
        for i in 0..g.group().ngens() {
            let mut e = g.group().zero();
            e[i] = b(1);
            assert_eq!(g.dlog(&k, &g.element_of(&k, &e)).unwrap(), e);
        }
    }
}
