//! Number fields given by a monic defining polynomial and an integral basis.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::lattice::{q_det, q_inverse, q_mul_vec, q_solve, QMat};
use crate::linalg::IntMat;
use crate::numeric::complex_roots;
use crate::poly::{count_real_roots, count_roots_in, fp, integer_roots_monic, isolate_real_roots, QPoly};
use crate::poly;

type Q = BigRational;

/// Scale (as a power of two) applied to the T2 Gram matrix before rounding.
pub const T2_SHIFT: u32 = 24;

/// An element of K in coordinates over the integral basis, with a common denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    num: Vec<BigInt>,
    den: BigInt,
}

impl Elem {
    pub fn new(num: Vec<BigInt>, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut g = den.clone();
        for x in &num {
            g = g.gcd(x);
        }
        if den.is_negative() {
            g = -g;
        }
        let num = num.into_iter().map(|x| x / &g).collect();
        Elem { num, den: den / g }
    }

    pub fn from_ints(num: Vec<BigInt>) -> Self {
        Elem { num, den: BigInt::one() }
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Self::from_ints(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn from_q(v: &[Q]) -> Self {
        let den = v.iter().fold(BigInt::one(), |a, x| a.lcm(x.denom()));
        let num = v.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
        Self::new(num, den)
    }

    pub fn rational(n: usize, q: &Q) -> Self {
        let mut num = vec![BigInt::zero(); n];
        num[0] = q.numer().clone();
        Self::new(num, q.denom().clone())
    }

    pub fn integer(n: usize, k: impl Into<BigInt>) -> Self {
        let mut num = vec![BigInt::zero(); n];
        num[0] = k.into();
        Elem { num, den: BigInt::one() }
    }

    pub fn one(n: usize) -> Self {
        Self::integer(n, 1)
    }

    pub fn zero(n: usize) -> Self {
        Self::integer(n, 0)
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn num(&self) -> &[BigInt] {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn coords(&self) -> Vec<Q> {
        self.num.iter().map(|x| Q::new(x.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// The rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<Q> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(Q::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn add(&self, o: &Elem) -> Elem {
        let num = self.num.iter().zip(&o.num).map(|(a, b)| a * &o.den + b * &self.den).collect();
        Elem::new(num, &self.den * &o.den)
    }

    pub fn neg(&self) -> Elem {
        Elem { num: self.num.iter().map(|x| -x).collect(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Elem) -> Elem {
        self.add(&o.neg())
    }

    pub fn scale(&self, q: &Q) -> Elem {
        Elem::new(self.num.iter().map(|x| x * q.numer()).collect(), &self.den * q.denom())
    }

    pub fn scale_int(&self, k: &BigInt) -> Elem {
        Elem::new(self.num.iter().map(|x| x * k).collect(), self.den.clone())
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.num.iter().map(|x| x.to_string()).collect();
        if self.den.is_one() {
            write!(f, "[{}]", v.join(", "))
        } else {
            write!(f, "[{}]/{}", v.join(", "), self.den)
        }
    }
}

/// A prime decomposition supplied as verified input (used for index divisors).
#[derive(Clone, Debug)]
pub struct SuppliedPrime {
    pub pi: Elem,
    pub e: u32,
    pub f: u32,
}

#[derive(Clone, Debug)]
pub struct NumberField {
    poly: Vec<BigInt>,
    n: usize,
    basis: QMat,
    basis_inv: QMat,
    table: Vec<Vec<Vec<BigInt>>>,
    traces: Vec<BigInt>,
    disc: BigInt,
    index: BigInt,
    signature: (usize, usize),
    irreducibility_witness: Option<u64>,
    real_roots: Vec<(Q, Q)>,
    poly_sturm: Vec<QPoly>,
    embeddings: Vec<Vec<Complex64>>,
    t2: IntMat,
    supplied: BTreeMap<BigInt, Vec<SuppliedPrime>>,
}

fn small_primes(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

impl NumberField {
    /// Builds the field from a monic integer polynomial (low degree first) and
    /// basis elements given by their coordinates over `1, theta, ..., theta^(n-1)`.
    pub fn new(poly: Vec<BigInt>, basis_elems: Vec<Vec<Q>>) -> Result<Self> {
        if poly.len() < 2 {
            return Err(Error::Input("defining polynomial must have degree >= 1".into()));
        }
        if !poly.last().unwrap().is_one() {
            return Err(Error::Input("defining polynomial must be monic".into()));
        }
        let n = poly.len() - 1;
        if basis_elems.len() != n || basis_elems.iter().any(|b| b.len() != n) {
            return Err(Error::Input(format!("basis must consist of {n} vectors of length {n}")));
        }
        if !(basis_elems[0][0].is_one() && basis_elems[0][1..].iter().all(Zero::is_zero)) {
            return Err(Error::FirstBasisNotOne);
        }
        let fq = QPoly::from_ints(&poly);
        if n >= 2 {
            if let Some(r) = integer_roots_monic(&poly).first() {
                return Err(Error::RationalRoot(r.to_string()));
            }
            if fq.gcd(&fq.derivative()).deg() != Some(0) {
                return Err(Error::NotSquarefree);
            }
        }
        let basis: QMat = (0..n).map(|i| (0..n).map(|j| basis_elems[j][i].clone()).collect()).collect();
        let basis_inv = q_inverse(&basis).ok_or(Error::SingularBasis)?;
        let polys: Vec<QPoly> = basis_elems.iter().map(|b| QPoly::new(b.clone())).collect();
        let mut table = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let prod = polys[i].mul(&polys[j]).rem(&fq);
                let mut c = prod.0.clone();
                c.resize(n, Q::zero());
                let coords = q_mul_vec(&basis_inv, &c);
                if coords.iter().any(|x| !x.is_integer()) {
                    return Err(Error::NotClosed);
                }
                table[i][j] = coords.into_iter().map(|x| x.to_integer()).collect();
            }
        }
        let traces: Vec<BigInt> = (0..n).map(|k| (0..n).map(|i| table[k][i][i].clone()).sum()).collect();
        let mut tr = IntMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                tr[(i, j)] = table[i][j].iter().zip(&traces).map(|(a, b)| a * b).sum();
            }
        }
        let disc = tr.det();
        let det_b = q_det(&basis);
        let disc_f = poly::discriminant(&poly);
        if Q::from_integer(disc.clone()) != &det_b * &det_b * Q::from_integer(disc_f) {
            return Err(Error::Input("basis discriminant is inconsistent with the polynomial".into()));
        }
        let inv_det = (Q::one() / det_b).abs();
        if !inv_det.is_integer() {
            return Err(Error::Input("basis lattice does not contain Z[theta]".into()));
        }
        let index = inv_det.to_integer();
        let r1 = if n == 1 { 1 } else { count_real_roots(&fq) };
        let signature = (r1, (n - r1) / 2);
        let irreducibility_witness = if n == 1 {
            Some(2)
        } else {
            small_primes(200).into_iter().find(|&p| fp::is_irreducible(&fp::from_ints(&poly, p), p))
        };
        let real_roots = if n == 1 { Vec::new() } else { isolate_real_roots(&fq) };
        let poly_sturm = fq.sturm();

        let mut fld = NumberField {
            poly,
            n,
            basis,
            basis_inv,
            table,
            traces,
            disc,
            index,
            signature,
            irreducibility_witness,
            real_roots,
            poly_sturm,
            embeddings: Vec::new(),
            t2: IntMat::zeros(n, n),
            supplied: BTreeMap::new(),
        };
        fld.compute_embeddings();
        Ok(fld)
    }

    fn compute_embeddings(&mut self) {
        let n = self.n;
        let (r1, r2) = self.signature;
        let places: Vec<Complex64> = if n == 1 {
            vec![Complex64::new(-self.poly[0].to_f64().unwrap(), 0.0)]
        } else {
            let c: Vec<f64> = self.poly.iter().map(|x| x.to_f64().unwrap_or(f64::MAX)).collect();
            let mut roots = complex_roots(&c);
            roots.sort_by(|a, b| a.im.abs().partial_cmp(&b.im.abs()).unwrap());
            let mut real: Vec<Complex64> = roots[..r1].iter().map(|z| Complex64::new(z.re, 0.0)).collect();
            real.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
            let mut cplx: Vec<Complex64> = roots[r1..].iter().filter(|z| z.im > 0.0).copied().collect();
            cplx.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
            cplx.truncate(r2);
            real.into_iter().chain(cplx).collect()
        };
        let cols: Vec<QPoly> = (0..n).map(|j| QPoly::new((0..n).map(|i| self.basis[i][j].clone()).collect())).collect();
        self.embeddings = places
            .iter()
            .map(|&z| {
                cols.iter()
                    .map(|p| {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for c in p.0.iter().rev() {
                            acc = acc * z + c.to_f64().unwrap();
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let scale = (1u64 << T2_SHIFT) as f64;
        let mut g = IntMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for (k, e) in self.embeddings.iter().enumerate() {
                    let v = (e[i] * e[j].conj()).re;
                    s += if k < r1 { v } else { 2.0 * v };
                }
                g[(i, j)] = BigInt::from((s * scale).round() as i128);
            }
        }
        self.t2 = g;
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &[BigInt] {
        &self.poly
    }

    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    /// `[o_K : Z[theta]]`.
    pub fn index(&self) -> &BigInt {
        &self.index
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn unit_rank(&self) -> usize {
        self.signature.0 + self.signature.1 - 1
    }

    pub fn is_totally_imaginary(&self) -> bool {
        self.signature.0 == 0
    }

    pub fn irreducibility_witness(&self) -> Option<u64> {
        self.irreducibility_witness
    }

    /// Basis elements as coordinate vectors over the power basis.
    pub fn basis_power_coords(&self) -> Vec<Vec<Q>> {
        (0..self.n).map(|j| (0..self.n).map(|i| self.basis[i][j].clone()).collect()).collect()
    }

    /// Structure constants: coordinates of `omega_i * omega_j`.
    pub fn table(&self) -> &Vec<Vec<Vec<BigInt>>> {
        &self.table
    }

    pub fn t2_gram(&self) -> &IntMat {
        &self.t2
    }

    pub fn embeddings_of_basis(&self) -> &Vec<Vec<Complex64>> {
        &self.embeddings
    }

    pub fn minkowski_bound(&self) -> f64 {
        let n = self.n as f64;
        let r2 = self.signature.1 as i32;
        let fact: f64 = (1..=self.n).map(|k| k as f64).product();
        (4.0 / std::f64::consts::PI).powi(r2) * fact / n.powi(self.n as i32) * self.disc.to_f64().unwrap().abs().sqrt()
    }

    pub fn supply_primes(&mut self, p: BigInt, primes: Vec<SuppliedPrime>) {
        self.supplied.insert(p, primes);
    }

    pub fn supplied_primes(&self, p: &BigInt) -> Option<&Vec<SuppliedPrime>> {
        self.supplied.get(p)
    }

    pub fn supplied_all(&self) -> &BTreeMap<BigInt, Vec<SuppliedPrime>> {
        &self.supplied
    }

    pub fn one(&self) -> Elem {
        Elem::one(self.n)
    }

    pub fn zero(&self) -> Elem {
        Elem::zero(self.n)
    }

    /// Integer coordinate product.
    pub fn mul_int(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = self.n;
        let mut out = vec![BigInt::zero(); n];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[j].is_zero() {
                    continue;
                }
                let ab = &a[i] * &b[j];
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &ab * t;
                    }
                }
            }
        }
        out
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        Elem::new(self.mul_int(&a.num, &b.num), &a.den * &b.den)
    }

    /// Matrix of multiplication by an integral coordinate vector (column j = a*omega_j).
    pub fn mult_matrix_int(&self, a: &[BigInt]) -> IntMat {
        let n = self.n;
        let mut m = IntMat::zeros(n, n);
        for j in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[j] = BigInt::one();
            let c = self.mul_int(a, &e);
            for i in 0..n {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn norm_int(&self, a: &[BigInt]) -> BigInt {
        self.mult_matrix_int(a).det()
    }

    pub fn norm(&self, a: &Elem) -> Q {
        Q::new(self.norm_int(&a.num), a.den.pow(self.n as u32))
    }

    pub fn trace(&self, a: &Elem) -> Q {
        let t: BigInt = a.num.iter().zip(&self.traces).map(|(x, y)| x * y).sum();
        Q::new(t, a.den.clone())
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = self.mult_matrix_int(&a.num);
        let mq: QMat = m.to_rows().into_iter().map(|r| r.into_iter().map(Q::from_integer).collect()).collect();
        let mut e1 = vec![Q::zero(); self.n];
        e1[0] = Q::from_integer(a.den.clone());
        let y = q_solve(&mq, &e1).ok_or(Error::DivisionByZero)?;
        Ok(Elem::from_q(&y))
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, e: i64) -> Result<Elem> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        Ok(self.pow_u(&base, e.unsigned_abs()))
    }

    pub fn pow_u(&self, a: &Elem, mut e: u64) -> Elem {
        let mut r = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }

    pub fn pow_big(&self, a: &Elem, e: &BigInt) -> Result<Elem> {
        let base = if e.is_negative() { self.inv(a)? } else { a.clone() };
        let e = e.abs();
        let mut r = self.one();
        let bits = e.bits();
        for i in (0..bits).rev() {
            r = self.mul(&r, &r);
            if e.bit(i) {
                r = self.mul(&r, &base);
            }
        }
        Ok(r)
    }

    /// The element as a polynomial in theta of degree < n.
    pub fn to_power_basis(&self, a: &Elem) -> QPoly {
        let c = a.coords();
        QPoly::new(crate::linalg::lattice::q_mul_vec(&self.basis, &c))
    }

    pub fn from_power_basis(&self, p: &QPoly) -> Elem {
        let fq = QPoly::from_ints(&self.poly);
        let mut c = p.rem(&fq).0;
        c.resize(self.n, Q::zero());
        Elem::from_q(&q_mul_vec(&self.basis_inv, &c))
    }

    pub fn theta(&self) -> Elem {
        let mut c = vec![Q::zero(); self.n.max(2)];
        c[1] = Q::one();
        self.from_power_basis(&QPoly::new(c))
    }

    /// Signs of `a` at the real places, ordered by increasing real root.
    pub fn real_signs(&self, a: &Elem) -> Vec<i8> {
        if self.n == 1 {
            let v = a.as_rational().unwrap();
            return vec![if v.is_negative() { -1 } else { 1 }];
        }
        let pa = self.to_power_basis(a);
        if pa.deg() == Some(0) {
            let s = if pa.lc().is_negative() { -1 } else { 1 };
            return vec![s; self.real_roots.len()];
        }
        let sq = pa.divrem(&pa.gcd(&pa.derivative())).0;
        let sa = sq.sturm();
        let two = Q::from_integer(BigInt::from(2));
        self.real_roots
            .iter()
            .map(|iv| {
                let (mut lo, mut hi) = iv.clone();
                while count_roots_in(&sa, &lo, &hi) > 0 {
                    let m = (&lo + &hi) / &two;
                    if count_roots_in(&self.poly_sturm, &lo, &m) == 1 {
                        hi = m;
                    } else {
                        lo = m;
                    }
                }
                if pa.eval(&hi).is_negative() {
                    -1
                } else {
                    1
                }
            })
            .collect()
    }

    /// Complex embeddings at the r1 + r2 places (one per conjugate pair).
    pub fn embed(&self, a: &Elem) -> Vec<Complex64> {
        let d = a.den.to_f64().unwrap();
        self.embeddings
            .iter()
            .map(|e| {
                let mut s = Complex64::new(0.0, 0.0);
                for (x, w) in a.num.iter().zip(e) {
                    s += w * x.to_f64().unwrap();
                }
                s / d
            })
            .collect()
    }

    /// Approximate T2 norm `sum |sigma(a)|^2` over all n embeddings.
    pub fn t2_norm(&self, a: &Elem) -> f64 {
        let r1 = self.signature.0;
        self.embed(a).iter().enumerate().map(|(k, z)| if k < r1 { z.norm_sqr() } else { 2.0 * z.norm_sqr() }).sum()
    }

    /// Is `a` a root of unity? Checked exactly via `a^k = 1` for the orders
    /// allowed by the degree.
    pub fn root_of_unity_order(&self, a: &Elem) -> Option<u64> {
        if !a.is_integral() || a.is_zero() {
            return None;
        }
        let max_order = 2 * (self.n as u64).pow(2) + 2;
        let mut x = a.clone();
        for k in 1..=max_order {
            if x.is_one() {
                return Some(k);
            }
            x = self.mul(&x, a);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn qs(v: &[(i64, i64)]) -> Vec<Q> {
        v.iter().map(|&(a, b)| Q::new(a.into(), b.into())).collect()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    pub fn example1() -> NumberField {
        NumberField::new(ints(&[710, 0, 1]), vec![qs(&[(1, 1), (0, 1)]), qs(&[(0, 1), (1, 1)])]).unwrap()
    }

    pub fn example2() -> NumberField {
        NumberField::new(
            ints(&[45, 0, 15, 0, 1]),
            vec![
                qs(&[(1, 1), (0, 1), (0, 1), (0, 1)]),
                qs(&[(0, 1), (1, 1), (0, 1), (0, 1)]),
                qs(&[(2, 1), (0, 1), (1, 3), (0, 1)]),
                qs(&[(0, 1), (3, 1), (0, 1), (1, 3)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn discriminants_and_signatures() {
        let k1 = example1();
        assert_eq!(k1.disc(), &BigInt::from(-2840));
        assert_eq!(k1.signature(), (0, 1));
        let k2 = example2();
        assert_eq!(k2.disc(), &BigInt::from(18000));
        assert_eq!(k2.index(), &BigInt::from(9));
        assert_eq!(k2.signature(), (0, 2));
        assert!(k2.irreducibility_witness().is_some());
        let g = NumberField::new(ints(&[1, 0, 1]), vec![qs(&[(1, 1), (0, 1)]), qs(&[(0, 1), (1, 1)])]).unwrap();
        assert_eq!(g.disc(), &BigInt::from(-4));
        assert_eq!(g.signature(), (0, 1));
    }

    #[test]
    fn loader_rejections() {
        let b = vec![qs(&[(1, 1), (0, 1)]), qs(&[(0, 1), (1, 1)])];
        assert_eq!(NumberField::new(ints(&[-4, 0, 1]), b.clone()).unwrap_err(), Error::RationalRoot("-2".into()));
        let bad = vec![qs(&[(1, 1), (0, 1)]), qs(&[(0, 1), (1, 2)])];
        assert_eq!(NumberField::new(ints(&[710, 0, 1]), bad).unwrap_err(), Error::NotClosed);
        let not_one = vec![qs(&[(0, 1), (1, 1)]), qs(&[(1, 1), (0, 1)])];
        assert_eq!(NumberField::new(ints(&[710, 0, 1]), not_one).unwrap_err(), Error::FirstBasisNotOne);
    }

    #[test]
    fn arithmetic_example1() {
        let k = example1();
        let a = Elem::from_i64(&[0, 1]);
        assert_eq!(k.mul(&a, &a), Elem::from_i64(&[-710, 0]));
        let p = k.mul(&Elem::from_i64(&[1, 1]), &Elem::from_i64(&[1, -1]));
        assert_eq!(p, Elem::from_i64(&[711, 0]));
        let inv = k.inv(&a).unwrap();
        assert_eq!(inv, Elem::new(ints(&[0, -1]), BigInt::from(710)));
        assert!(k.mul(&a, &inv).is_one());
        assert_eq!(k.norm(&Elem::from_i64(&[447, 11])), Q::from_integer(BigInt::from(17 * 7i64.pow(5))));
    }

    #[test]
    fn norms_example2() {
        let k = example2();
        assert_eq!(k.norm(&k.one()), Q::one());
        assert_eq!(k.norm(&Elem::from_i64(&[1, 1, 0, 0])), Q::from_integer(61.into()));
        assert_eq!(k.norm(&Elem::from_i64(&[1, 2, 0, 0])), Q::from_integer(781.into()));
        // 2 + 8a + 3a^2 + a^3 in the integral basis
        assert_eq!(k.norm(&Elem::from_i64(&[-16, -1, 9, 3])), Q::from_integer((131 * 1331).into()));
        // N(a + b*alpha) = b^4 f(-a/b)
        for (a, b) in [(1i64, 2i64), (3, -1), (-5, 7)] {
            let f = |x: Q| x.clone().pow(4) + Q::from_integer(15.into()) * x.clone().pow(2) + Q::from_integer(45.into());
            let expect = Q::from_integer(BigInt::from(b).pow(4)) * f(Q::new((-a).into(), b.into()));
            assert_eq!(k.norm(&Elem::from_i64(&[a, b, 0, 0])), expect);
        }
        // rational q has norm q^n
        let h = Elem::rational(4, &Q::new(1.into(), 2.into()));
        assert_eq!(k.norm(&h), Q::new(1.into(), 16.into()));
    }

    #[test]
    fn associativity_of_table() {
        let k = example2();
        let n = k.degree();
        let e = |i: usize| {
            let mut v = vec![0i64; n];
            v[i] = 1;
            Elem::from_i64(&v)
        };
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    assert_eq!(k.mul(&k.mul(&e(i), &e(j)), &e(l)), k.mul(&e(i), &k.mul(&e(j), &e(l))));
                }
            }
        }
    }

    #[test]
    fn real_signs_quadratic() {
        // Q(sqrt 3): roots -sqrt3 < sqrt3
        let k = NumberField::new(ints(&[-3, 0, 1]), vec![qs(&[(1, 1), (0, 1)]), qs(&[(0, 1), (1, 1)])]).unwrap();
        assert_eq!(k.signature(), (2, 0));
        assert_eq!(k.real_signs(&Elem::from_i64(&[0, 1])), vec![-1, 1]);
        assert_eq!(k.real_signs(&Elem::from_i64(&[2, 1])), vec![1, 1]);
        assert_eq!(k.real_signs(&Elem::from_i64(&[1, 1])), vec![-1, 1]);
        assert_eq!(k.real_signs(&Elem::from_i64(&[-2, 0])), vec![-1, -1]);
    }

    #[test]
    fn roots_of_unity() {
        let g = NumberField::new(ints(&[1, 0, 1]), vec![qs(&[(1, 1), (0, 1)]), qs(&[(0, 1), (1, 1)])]).unwrap();
        assert_eq!(g.root_of_unity_order(&Elem::from_i64(&[0, 1])), Some(4));
        assert_eq!(g.root_of_unity_order(&Elem::from_i64(&[1, 1])), None);
    }
}
