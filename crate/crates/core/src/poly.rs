//! Univariate polynomials over Q and over F_p.
//!
//! Coefficients are stored low degree first.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::IntMat;

type Q = BigRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(pub Vec<Q>);

impl QPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn from_ints(c: &[BigInt]) -> Self {
        Self::new(c.iter().cloned().map(Q::from_integer).collect())
    }

    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial has degree `None`.
    pub fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.0.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        let c = (0..n)
            .map(|i| {
                let a = self.0.get(i).cloned().unwrap_or_else(Q::zero);
                let b = o.0.get(i).cloned().unwrap_or_else(Q::zero);
                a + b
            })
            .collect();
        QPoly::new(c)
    }

    pub fn neg(&self) -> QPoly {
        QPoly(self.0.iter().map(|x| -x).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Q) -> QPoly {
        QPoly::new(self.0.iter().map(|x| x * s).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::new(c)
    }

    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.0.len() - 1;
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quo = vec![Q::zero(); r.len() - dd];
        let lc = d.lc();
        for k in (0..quo.len()).rev() {
            let f = &r[k + dd] / &lc;
            if f.is_zero() {
                continue;
            }
            for (j, c) in d.0.iter().enumerate() {
                r[k + j] -= &f * c;
            }
            quo[k] = f;
        }
        r.truncate(dd);
        (QPoly::new(quo), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Q::one() / self.lc()))
    }

    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * Q::from_integer(BigInt::from(i))).collect())
    }

    /// Sturm sequence `f, f', -rem(...)...`.
    pub fn sturm(&self) -> Vec<QPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }

    /// Cauchy bound: all roots satisfy |z| < bound.
    pub fn root_bound(&self) -> Q {
        let lc = self.lc().abs();
        let m = self.0.iter().take(self.0.len().saturating_sub(1)).map(|c| c.abs() / &lc).max().unwrap_or_else(Q::zero);
        m + Q::one()
    }
}

fn sign_changes(seq: &[QPoly], x: &Q) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| {
            let v = p.eval(x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn sign_changes_at_infinity(seq: &[QPoly], positive: bool) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| {
            let s = if p.lc().is_positive() { 1 } else { -1 };
            let odd = p.deg().unwrap_or(0) % 2 == 1;
            if !positive && odd {
                -s
            } else {
                s
            }
        })
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of a squarefree polynomial.
pub fn count_real_roots(f: &QPoly) -> usize {
    let s = f.sturm();
    sign_changes_at_infinity(&s, false) - sign_changes_at_infinity(&s, true)
}

/// Number of roots in the half-open interval `(a, b]`.
pub fn count_roots_in(sturm: &[QPoly], a: &Q, b: &Q) -> usize {
    sign_changes(sturm, a) - sign_changes(sturm, b)
}

/// Disjoint intervals `(a, b]`, each containing exactly one real root, in increasing order.
pub fn isolate_real_roots(f: &QPoly) -> Vec<(Q, Q)> {
    let s = f.sturm();
    let bnd = f.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-bnd.clone(), bnd)];
    while let Some((a, b)) = stack.pop() {
        match count_roots_in(&s, &a, &b) {
            0 => {}
            1 => out.push((a, b)),
            _ => {
                let m = (&a + &b) / Q::from_integer(BigInt::from(2));
                stack.push((a, m.clone()));
                stack.push((m, b));
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Halves an isolating interval until it is shorter than `width`.
pub fn refine_root(sturm: &[QPoly], mut iv: (Q, Q), width: &Q) -> (Q, Q) {
    let two = Q::from_integer(BigInt::from(2));
    while &(&iv.1 - &iv.0) > width {
        let m = (&iv.0 + &iv.1) / &two;
        if count_roots_in(sturm, &iv.0, &m) == 1 {
            iv.1 = m;
        } else {
            iv.0 = m;
        }
    }
    iv
}

/// Rational (hence integer, for monic input) roots of a monic integer polynomial.
pub fn integer_roots_monic(f: &[BigInt]) -> Vec<BigInt> {
    let p = QPoly::from_ints(f);
    let g = p.gcd(&p.derivative());
    let sq = p.divrem(&g).0;
    let s = sq.sturm();
    let half = Q::new(BigInt::one(), BigInt::from(4));
    let mut roots = Vec::new();
    for iv in isolate_real_roots(&sq) {
        let (a, b) = refine_root(&s, iv, &half);
        let mut c = a.ceil().to_integer();
        while Q::from_integer(c.clone()) <= b {
            if p.eval(&Q::from_integer(c.clone())).is_zero() {
                roots.push(c.clone());
            }
            c += 1;
        }
    }
    roots
}

/// Resultant of two integer polynomials via the Sylvester determinant.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut s = IntMat::zeros(size, size);
    for i in 0..n {
        for (k, c) in f.iter().rev().enumerate() {
            s[(i, i + k)] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in g.iter().rev().enumerate() {
            s[(n + i, i + k)] = c.clone();
        }
    }
    s.det()
}

/// Discriminant of an integer polynomial of degree >= 1.
pub fn discriminant(f: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    if n == 1 {
        return BigInt::one();
    }
    let df: Vec<BigInt> = f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let r = resultant(f, &df);
    let lc = f.last().unwrap();
    let sign = if (n * (n - 1) / 2) % 2 == 1 { -BigInt::one() } else { BigInt::one() };
    sign * r / lc
}

/// Polynomials over F_p for word-size primes.
pub mod fp {
    use super::*;
    use crate::linalg::modp::{invmod, mulmod};

    pub type Poly = Vec<u64>;

    pub fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn from_ints(c: &[BigInt], p: u64) -> Poly {
        let pb = BigInt::from(p);
        trim(c.iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()).collect())
    }

    pub fn deg(a: &Poly) -> isize {
        a.len() as isize - 1
    }

    pub fn add(a: &Poly, b: &Poly, p: u64) -> Poly {
        let n = a.len().max(b.len());
        trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect())
    }

    pub fn sub(a: &Poly, b: &Poly, p: u64) -> Poly {
        let n = a.len().max(b.len());
        trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
    }

    pub fn mul(a: &Poly, b: &Poly, p: u64) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut c = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                c[i + j] = (c[i + j] + mulmod(x, y, p)) % p;
            }
        }
        trim(c)
    }

    pub fn divrem(a: &Poly, d: &Poly, p: u64) -> (Poly, Poly) {
        assert!(!d.is_empty(), "division by zero polynomial");
        let dd = d.len() - 1;
        if a.len() <= dd {
            return (Vec::new(), a.clone());
        }
        let inv = invmod(d[dd], p);
        let mut r = a.clone();
        let mut q = vec![0u64; a.len() - dd];
        for k in (0..q.len()).rev() {
            let f = mulmod(r[k + dd], inv, p);
            if f == 0 {
                continue;
            }
            for (j, &c) in d.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mulmod(f, c, p)) % p;
            }
            q[k] = f;
        }
        r.truncate(dd);
        (trim(q), trim(r))
    }

    pub fn rem(a: &Poly, d: &Poly, p: u64) -> Poly {
        divrem(a, d, p).1
    }

    pub fn monic(a: &Poly, p: u64) -> Poly {
        match a.last() {
            None => Vec::new(),
            Some(&l) => {
                let inv = invmod(l, p);
                a.iter().map(|&x| mulmod(x, inv, p)).collect()
            }
        }
    }

    pub fn gcd(a: &Poly, b: &Poly, p: u64) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        monic(&a, p)
    }

    pub fn derivative(a: &Poly, p: u64) -> Poly {
        trim(a.iter().enumerate().skip(1).map(|(i, &c)| mulmod(c, (i as u64) % p, p)).collect())
    }

    pub fn powmod(base: &Poly, e: &BigUint, m: &Poly, p: u64) -> Poly {
        let mut r: Poly = rem(&vec![1], m, p);
        let b = rem(base, m, p);
        for i in (0..e.bits()).rev() {
            r = rem(&mul(&r, &r, p), m, p);
            if e.bit(i) {
                r = rem(&mul(&r, &b, p), m, p);
            }
        }
        r
    }

    fn x() -> Poly {
        vec![0, 1]
    }

    /// Squarefree decomposition: pairs (squarefree factor, multiplicity).
    pub fn squarefree(f: &Poly, p: u64) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if deg(f) <= 0 {
            return out;
        }
        let f = monic(f, p);
        let df = derivative(&f, p);
        let mut c = gcd(&f, &df, p);
        let mut w = divrem(&f, &c, p).0;
        let mut i = 1;
        while deg(&w) > 0 {
            let y = gcd(&w, &c, p);
            let z = divrem(&w, &y, p).0;
            if deg(&z) > 0 {
                out.push((z, i));
            }
            i += 1;
            w = y;
            c = divrem(&c, &w, p).0;
        }
        if deg(&c) > 0 {
            // c is a p-th power; coefficients are fixed by Frobenius
            let root: Poly = c.iter().step_by(p as usize).copied().collect();
            for (g, m) in squarefree(&root, p) {
                out.push((g, m * p as usize));
            }
        }
        out
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    pub fn ddf(f: &Poly, p: u64) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        let mut fs = monic(f, p);
        let mut h = x();
        let mut d = 1;
        let pb = BigUint::from(p);
        while deg(&fs) >= 2 * d as isize {
            h = powmod(&h, &pb, &fs, p);
            let g = gcd(&sub(&h, &x(), p), &fs, p);
            if deg(&g) > 0 {
                fs = divrem(&fs, &g, p).0;
                h = rem(&h, &fs, p);
                out.push((g, d));
            }
            d += 1;
        }
        if deg(&fs) > 0 {
            let k = deg(&fs) as usize;
            out.push((fs, k));
        }
        out
    }

    struct Rng(u64);
    impl Rng {
        fn next(&mut self) -> u64 {
            self.0 ^= self.0 << 13;
            self.0 ^= self.0 >> 7;
            self.0 ^= self.0 << 17;
            self.0
        }
    }

    /// Equal-degree factorization (Cantor-Zassenhaus) into factors of degree `d`.
    pub fn edf(f: &Poly, d: usize, p: u64) -> Vec<Poly> {
        let n = deg(f) as usize;
        if n == d {
            return vec![monic(f, p)];
        }
        let mut rng = Rng(0x2545_F491_4F6C_DD1D ^ (p.wrapping_mul(31) + n as u64));
        let q = BigUint::from(p).pow(d as u32);
        loop {
            let a: Poly = trim((0..n).map(|_| rng.next() % p).collect());
            if deg(&a) <= 0 {
                continue;
            }
            let b = if p == 2 {
                let mut t = a.clone();
                let mut acc = a.clone();
                for _ in 1..d {
                    t = rem(&mul(&t, &t, p), f, p);
                    acc = add(&acc, &t, p);
                }
                acc
            } else {
                let e = (&q - 1u32) / 2u32;
                sub(&powmod(&a, &e, f, p), &vec![1], p)
            };
            let g = gcd(&b, f, p);
            if deg(&g) > 0 && deg(&g) < n as isize {
                let h = divrem(f, &g, p).0;
                let mut out = edf(&g, d, p);
                out.extend(edf(&h, d, p));
                return out;
            }
        }
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// sorted by (degree, coefficients from the top).
    pub fn factor(f: &Poly, p: u64) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        for (g, m) in squarefree(f, p) {
            for (h, d) in ddf(&g, p) {
                for irr in edf(&h, d, p) {
                    out.push((irr, m));
                }
            }
        }
        out.sort_by(|a, b| {
            a.0.len().cmp(&b.0.len()).then_with(|| a.0.iter().rev().cmp(b.0.iter().rev()))
        });
        out
    }

    pub fn is_irreducible(f: &Poly, p: u64) -> bool {
        let f = monic(f, p);
        if deg(&f) < 1 {
            return false;
        }
        let sq = squarefree(&f, p);
        if sq.len() != 1 || sq[0].1 != 1 {
            return false;
        }
        let dd = ddf(&f, p);
        dd.len() == 1 && dd[0].1 as isize == deg(&f)
    }

    /// True iff `f` is a product of distinct linear factors mod p.
    pub fn splits_into_distinct_linear(f: &Poly, p: u64) -> bool {
        let f = monic(f, p);
        let xp = powmod(&x(), &BigUint::from(p), &f, p);
        let g = gcd(&sub(&xp, &x(), p), &f, p);
        deg(&g) == deg(&f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn sturm_counts() {
        // x^2 + 710: no real roots; x^2 - 3: two
        assert_eq!(count_real_roots(&QPoly::from_ints(&ints(&[710, 0, 1]))), 0);
        assert_eq!(count_real_roots(&QPoly::from_ints(&ints(&[-3, 0, 1]))), 2);
        // (x-1)(x-2)(x+5) = x^3 - 2x^2 ... expand: x^3 +2x^2 -13x +10
        let f = QPoly::from_ints(&ints(&[10, -13, 2, 1]));
        assert_eq!(count_real_roots(&f), 3);
        let mut r = integer_roots_monic(&ints(&[10, -13, 2, 1]));
        r.sort();
        assert_eq!(r, ints(&[-5, 1, 2]));
        assert!(integer_roots_monic(&ints(&[45, 0, 15, 0, 1])).is_empty());
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant(&ints(&[1, 0, 1])), BigInt::from(-4));
        assert_eq!(discriminant(&ints(&[710, 0, 1])), BigInt::from(-2840));
        // independent value (sympy): disc(x^4+15x^2+45) = 1458000
        assert_eq!(discriminant(&ints(&[45, 0, 15, 0, 1])), BigInt::from(1_458_000));
        // sympy: 2^10 * 5^2 * 71^2 * 89^2
        let d = BigInt::from(1024u64 * 25 * 71 * 71 * 89 * 89);
        assert_eq!(discriminant(&ints(&[31684, 0, 354, 0, 1])), d);
    }

    #[test]
    fn factor_mod_p() {
        // x^2+710 mod 7 = x^2 + 3 = (x-2)(x+2)
        let f = fp::from_ints(&ints(&[710, 0, 1]), 7);
        let fac = fp::factor(&f, 7);
        assert_eq!(fac, vec![(vec![2, 1], 1), (vec![5, 1], 1)]);
        // mod 5: x^2
        assert_eq!(fp::factor(&fp::from_ints(&ints(&[710, 0, 1]), 5), 5), vec![(vec![0, 1], 2)]);
        // x^4+15x^2+45 mod 2 = x^4+x^2+1 = (x^2+x+1)^2
        assert_eq!(fp::factor(&fp::from_ints(&ints(&[45, 0, 15, 0, 1]), 2), 2), vec![(vec![1, 1, 1], 2)]);
        // mod 11: four linear factors, roots 2,5,6,9
        let fac = fp::factor(&fp::from_ints(&ints(&[45, 0, 15, 0, 1]), 11), 11);
        let roots: Vec<u64> = fac.iter().map(|(g, _)| (11 - g[0]) % 11).collect();
        assert_eq!(fac.len(), 4);
        let mut rs = roots.clone();
        rs.sort();
        assert_eq!(rs, vec![2, 5, 6, 9]);
        // mod 7 inert
        assert!(fp::is_irreducible(&fp::from_ints(&ints(&[45, 0, 15, 0, 1]), 7), 7));
    }

    #[test]
    fn split_tests() {
        assert!(fp::splits_into_distinct_linear(&fp::from_ints(&ints(&[-2, 0, 1]), 7), 7));
        let g = ints(&[31684, 0, 354, 0, 1]);
        assert!(fp::splits_into_distinct_linear(&fp::from_ints(&g, 17), 17));
        assert!(!fp::splits_into_distinct_linear(&fp::from_ints(&g, 13), 13));
    }

    #[test]
    fn product_of_factors_recovers_input() {
        for p in [2u64, 3, 5, 7, 13] {
            let f = fp::from_ints(&ints(&[3, 1, 0, 4, 2, 0, 1, 1]), p);
            let mut prod = vec![1u64];
            for (g, m) in fp::factor(&f, p) {
                for _ in 0..m {
                    prod = fp::mul(&prod, &g, p);
                }
            }
            assert_eq!(prod, fp::monic(&f, p));
        }
    }
}
