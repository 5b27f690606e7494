//! Fractional ideals of the maximal order as HNF lattices over the integral basis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{Elem, NumberField};
use crate::linalg::lattice::{lattice_coords, lattice_preimage, reduce_mod_hnf, QMat};
use crate::linalg::{hnf_basis, hnf_modular, IntMat};

type Q = BigRational;

/// A nonzero fractional ideal `H / den` with `H` an upper triangular HNF basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FracIdeal {
    hnf: IntMat,
    den: BigInt,
}

impl std::fmt::Debug for FracIdeal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Ideal({:?}/{})", self.hnf, self.den)
    }
}

impl FracIdeal {
    fn normalized(hnf: IntMat, den: BigInt) -> Self {
        let mut g = den.clone();
        for i in 0..hnf.rows() {
            for j in i..hnf.cols() {
                g = g.gcd(&hnf[(i, j)]);
            }
        }
        if g.is_one() {
            return FracIdeal { hnf, den };
        }
        let rows = hnf.to_rows().into_iter().map(|r| r.into_iter().map(|x| x / &g).collect()).collect();
        FracIdeal { hnf: IntMat::from_rows(rows).unwrap(), den: den / g }
    }

    /// Builds an ideal from an integral HNF-able basis matrix and a denominator.
    /// The lattice must be an o_K-module of full rank.
    pub fn from_lattice(m: &IntMat, den: BigInt) -> Result<Self> {
        let b = hnf_basis(m);
        if b.cols() != m.rows() {
            return Err(Error::ZeroIdeal);
        }
        Ok(Self::normalized(b, den))
    }

    pub fn unit(n: usize) -> Self {
        FracIdeal { hnf: IntMat::identity(n), den: BigInt::one() }
    }

    pub fn hnf(&self) -> &IntMat {
        &self.hnf
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn dim(&self) -> usize {
        self.hnf.rows()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_unit(&self) -> bool {
        self.den.is_one() && self.hnf == IntMat::identity(self.dim())
    }

    /// Norm `det(H) / den^n`.
    pub fn norm(&self) -> Q {
        Q::new(self.hnf.det().abs(), self.den.pow(self.dim() as u32))
    }

    /// Norm of an integral ideal as an integer.
    pub fn norm_int(&self) -> BigInt {
        assert!(self.is_integral());
        self.hnf.det().abs()
    }

    /// Z-basis elements.
    pub fn basis(&self) -> Vec<Elem> {
        (0..self.dim()).map(|j| Elem::new(self.hnf.col(j), self.den.clone())).collect()
    }

    /// Smallest positive rational integer in the ideal.
    pub fn min_integer(&self) -> Q {
        Q::new(self.hnf[(0, 0)].clone(), self.den.clone())
    }

    /// Ideal generated over o_K by the given elements.
    pub fn from_gens(k: &NumberField, gens: &[Elem]) -> Result<Self> {
        let n = k.degree();
        let gens: Vec<&Elem> = gens.iter().filter(|g| !g.is_zero()).collect();
        if gens.is_empty() {
            return Err(Error::ZeroIdeal);
        }
        let den = gens.iter().fold(BigInt::one(), |a, g| a.lcm(g.den()));
        let mut cols = Vec::with_capacity(gens.len() * n);
        let mut modulus = BigInt::zero();
        for g in &gens {
            let scaled: Vec<BigInt> = g.num().iter().map(|x| x * (&den / g.den())).collect();
            let m = k.mult_matrix_int(&scaled);
            if modulus.is_zero() {
                modulus = m.det().abs();
            } else {
                modulus = modulus.gcd(&m.det().abs());
            }
            cols.extend(m.to_cols());
        }
        let m = IntMat::from_cols(n, &cols);
        let h = hnf_modular(&m, &modulus);
        Ok(Self::normalized(h, den))
    }

    pub fn principal(k: &NumberField, x: &Elem) -> Result<Self> {
        Self::from_gens(k, std::slice::from_ref(x))
    }

    pub fn from_int(n: usize, m: &BigInt) -> Self {
        assert!(!m.is_zero());
        Self::from_rational(n, &Q::from_integer(m.clone()))
    }

    pub fn from_rational(n: usize, q: &Q) -> Self {
        assert!(!q.is_zero());
        let h = IntMat::diagonal(&vec![q.numer().abs(); n]);
        Self::normalized(h, q.denom().clone())
    }

    pub fn mul(&self, k: &NumberField, o: &FracIdeal) -> FracIdeal {
        let n = self.dim();
        let a = self.hnf.to_cols();
        let b = o.hnf.to_cols();
        let mut cols = Vec::with_capacity(n * n);
        for x in &a {
            for y in &b {
                cols.push(k.mul_int(x, y));
            }
        }
        let m = IntMat::from_cols(n, &cols);
        let d = self.hnf.det().abs() * o.hnf.det().abs();
        Self::normalized(hnf_modular(&m, &d), &self.den * &o.den)
    }

    pub fn mul_elem(&self, k: &NumberField, x: &Elem) -> Result<FracIdeal> {
        if x.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let cols: Vec<Vec<BigInt>> = self.hnf.to_cols().iter().map(|c| k.mul_int(c, x.num())).collect();
        let m = IntMat::from_cols(self.dim(), &cols);
        Ok(Self::normalized(hnf_basis(&m), &self.den * x.den()))
    }

    pub fn scale(&self, q: &Q) -> FracIdeal {
        assert!(!q.is_zero());
        let rows = self.hnf.to_rows().into_iter().map(|r| r.into_iter().map(|x| x * q.numer().abs()).collect()).collect();
        Self::normalized(IntMat::from_rows(rows).unwrap(), &self.den * q.denom())
    }

    pub fn inv(&self, k: &NumberField) -> FracIdeal {
        let n = self.dim();
        let nrm = self.hnf.det().abs();
        let mut a: QMat = Vec::with_capacity(n * n);
        for c in self.hnf.to_cols() {
            let m = k.mult_matrix_int(&c);
            for row in m.to_rows() {
                a.push(row.into_iter().map(|x| Q::new(x, nrm.clone())).collect());
            }
        }
        let l = lattice_preimage(&a, n).expect("ideal lattice has full rank");
        // (H/d)^{-1} = d * L / N(H)
        let scaled = IntMat::from_rows(l.to_rows().into_iter().map(|r| r.into_iter().map(|x| x * &self.den).collect()).collect()).unwrap();
        Self::normalized(hnf_basis(&scaled), nrm)
    }

    pub fn div(&self, k: &NumberField, o: &FracIdeal) -> FracIdeal {
        self.mul(k, &o.inv(k))
    }

    pub fn pow(&self, k: &NumberField, e: i64) -> FracIdeal {
        let base = if e < 0 { self.inv(k) } else { self.clone() };
        let mut r = FracIdeal::unit(self.dim());
        let mut b = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(k, &b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(k, &b);
            }
        }
        r
    }

    pub fn pow_big(&self, k: &NumberField, e: &BigInt) -> FracIdeal {
        let base = if e.is_negative() { self.inv(k) } else { self.clone() };
        let e = e.abs();
        let mut r = FracIdeal::unit(self.dim());
        for i in (0..e.bits()).rev() {
            r = r.mul(k, &r);
            if e.bit(i) {
                r = r.mul(k, &base);
            }
        }
        r
    }

    /// Sum of ideals (lattice join).
    pub fn add(&self, o: &FracIdeal) -> FracIdeal {
        let den = self.den.lcm(&o.den);
        let a = scale_mat(&self.hnf, &(&den / &self.den));
        let b = scale_mat(&o.hnf, &(&den / &o.den));
        let m = a.hstack(&b).unwrap();
        let d = a.det().abs().gcd(&b.det().abs());
        Self::normalized(hnf_modular(&m, &d), den)
    }

    /// Intersection of two integral ideals.
    pub fn intersect(&self, k: &NumberField, o: &FracIdeal) -> FracIdeal {
        // a ∩ b = (a^{-1} + b^{-1})^{-1}
        self.inv(k).add(&o.inv(k)).inv(k)
    }

    pub fn contains(&self, x: &Elem) -> bool {
        if x.is_zero() {
            return true;
        }
        let v: Vec<BigInt> = x.num().iter().map(|c| c * &self.den).collect();
        if v.iter().any(|c| !c.is_multiple_of(x.den())) {
            return false;
        }
        let v: Vec<BigInt> = v.into_iter().map(|c| c / x.den()).collect();
        lattice_coords(&self.hnf, &v).is_some()
    }

    /// Is `self` contained in `o`?
    pub fn is_subset_of(&self, o: &FracIdeal) -> bool {
        self.basis().iter().all(|b| o.contains(b))
    }

    /// For integral ideals: `self + o = o_K`.
    pub fn is_coprime_to(&self, o: &FracIdeal) -> bool {
        self.add(o).is_unit()
    }

    /// Canonical representative of an integral vector modulo this integral ideal.
    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert!(self.is_integral(), "reduction modulo a fractional ideal");
        reduce_mod_hnf(&self.hnf, x)
    }

    pub fn mul_mod(&self, k: &NumberField, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        self.reduce(&k.mul_int(a, b))
    }

    /// `x^e` modulo this integral ideal (`e >= 0`).
    pub fn pow_mod(&self, k: &NumberField, x: &[BigInt], e: &BigInt) -> Vec<BigInt> {
        assert!(!e.is_negative());
        let mut r = self.reduce(&Elem::one(self.dim()).num().to_vec());
        let b = self.reduce(x);
        for i in (0..e.bits()).rev() {
            r = self.mul_mod(k, &r, &r);
            if e.bit(i) {
                r = self.mul_mod(k, &r, &b);
            }
        }
        r
    }

    pub fn reduce_elem(&self, x: &Elem) -> Elem {
        assert!(x.is_integral());
        Elem::from_ints(self.reduce(x.num()))
    }

    /// Numerator ideal `den * self` (integral).
    pub fn numerator(&self) -> FracIdeal {
        FracIdeal { hnf: self.hnf.clone(), den: BigInt::one() }
    }

    /// Is the lattice closed under multiplication by every basis element?
    pub fn is_ok_module(&self, k: &NumberField) -> bool {
        let n = self.dim();
        for c in self.hnf.to_cols() {
            for j in 0..n {
                let mut e = vec![BigInt::zero(); n];
                e[j] = BigInt::one();
                if lattice_coords(&self.hnf, &k.mul_int(&c, &e)).is_none() {
                    return false;
                }
            }
        }
        true
    }
}

fn scale_mat(m: &IntMat, f: &BigInt) -> IntMat {
    if f.is_one() {
        return m.clone();
    }
    IntMat::from_rows(m.to_rows().into_iter().map(|r| r.into_iter().map(|x| x * f).collect()).collect()).unwrap()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::field::NumberField;

    pub fn qs(v: &[(i64, i64)]) -> Vec<Q> {
        v.iter().map(|&(a, b)| Q::new(a.into(), b.into())).collect()
    }

    pub fn ints(v: &[i64]) -> Vec<BigInt> {
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
    fn basic_ops() {
        let k = example1();
        let p5 = FracIdeal::from_gens(&k, &[Elem::from_i64(&[5, 0]), Elem::from_i64(&[0, 1])]).unwrap();
        assert_eq!(p5.norm(), Q::from_integer(5.into()));
        assert_eq!(p5.mul(&k, &p5), FracIdeal::from_int(2, &5.into()));
        let inv = p5.inv(&k);
        assert!(p5.mul(&k, &inv).is_unit());
        assert_eq!(inv.norm(), Q::new(1.into(), 5.into()));
        assert!(p5.is_ok_module(&k));
        let p7 = FracIdeal::from_gens(&k, &[Elem::from_i64(&[7, 0]), Elem::from_i64(&[2, 1])]).unwrap();
        let p7b = FracIdeal::from_gens(&k, &[Elem::from_i64(&[7, 0]), Elem::from_i64(&[-2, 1])]).unwrap();
        assert_ne!(p7, p7b);
        assert_eq!(p7.norm() * p7b.norm(), Q::from_integer(49.into()));
        assert_eq!(p7.mul(&k, &p7b), FracIdeal::from_int(2, &7.into()));
        assert!(p7.is_coprime_to(&p7b));
        assert!(!p7.is_coprime_to(&FracIdeal::from_int(2, &7.into())));
        assert_eq!(p7.intersect(&k, &p7b), FracIdeal::from_int(2, &7.into()));
        let x = Elem::from_i64(&[3, 1]);
        assert_eq!(FracIdeal::principal(&k, &x).unwrap().norm(), Q::from_integer(719.into()));
        assert_eq!(p7.pow(&k, -2).mul(&k, &p7.pow(&k, 2)), FracIdeal::unit(2));
    }

    #[test]
    fn norm_multiplicative_example2() {
        let k = example2();
        let a = FracIdeal::principal(&k, &Elem::from_i64(&[1, 1, 0, 0])).unwrap();
        let b = FracIdeal::from_gens(&k, &[Elem::from_i64(&[11, 0, 0, 0]), Elem::from_i64(&[2, 1, 0, 0])]).unwrap();
        assert_eq!(a.norm(), Q::from_integer(61.into()));
        assert_eq!(b.norm(), Q::from_integer(11.into()));
        assert_eq!(a.mul(&k, &b).norm(), Q::from_integer(671.into()));
        let c = a.mul(&k, &b).div(&k, &b);
        assert_eq!(c, a);
    }
}
