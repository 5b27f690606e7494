//! Positive definite binary quadratic forms and their correspondence with
//! ideals of an imaginary quadratic field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{Elem, NumberField};
use crate::ideal::FracIdeal;
use crate::linalg::IntMat;

/// `a x^2 + b x y + c y^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl Form {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        Form { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn disc(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn is_reduced(&self) -> bool {
        let ab = self.b.abs();
        ab <= self.a && self.a <= self.c && (!(ab == self.a || self.a == self.c) || !self.b.is_negative())
    }

    /// Reduced equivalent form together with the substitution matrix `M`
    /// (`f_red(x, y) = f(M (x, y))`, `det M = 1`).
    pub fn reduce(&self) -> (Form, [[BigInt; 2]; 2]) {
        let (mut a, mut b, mut c) = (self.a.clone(), self.b.clone(), self.c.clone());
        let mut m = [[BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]];
        loop {
            // translate so that -a < b <= a
            let two_a = &a * 2;
            let k = (&a - &b).div_floor(&two_a);
            if !k.is_zero() {
                c = &a * &k * &k + &b * &k + &c;
                b += &two_a * &k;
                // column 1 += k * column 0
                for row in m.iter_mut() {
                    let t = &row[0] * &k;
                    row[1] += t;
                }
            }
            if a > c || (a == c && b.is_negative()) {
                // (x, y) -> (-y, x)
                std::mem::swap(&mut a, &mut c);
                b = -b;
                for row in m.iter_mut() {
                    let x0 = row[0].clone();
                    row[0] = row[1].clone();
                    row[1] = -x0;
                }
                continue;
            }
            return (Form { a, b, c }, m);
        }
    }

    pub fn principal(d: &BigInt) -> Form {
        let b = d.mod_floor(&BigInt::from(2));
        let c = (&b * &b - d) / 4;
        Form { a: BigInt::one(), b, c }
    }
}

/// All reduced primitive forms of discriminant `d < 0`.
pub fn reduced_forms(d: &BigInt) -> Vec<Form> {
    assert!(d.is_negative());
    let mut out = Vec::new();
    let mut a = BigInt::one();
    while BigInt::from(3) * &a * &a <= -d {
        let mut b: BigInt = -&a + 1;
        while b <= a {
            let num: BigInt = &b * &b - d;
            let den = BigInt::from(4) * &a;
            if num.is_multiple_of(&den) {
                let c = num / den;
                let f = Form { a: a.clone(), b: b.clone(), c };
                if f.is_reduced() && a.gcd(&b).gcd(&f.c).is_one() {
                    out.push(f);
                }
            }
            b += 1;
        }
        a += 1;
    }
    out
}

/// Bridge between ideals of an imaginary quadratic field and forms of its discriminant.
#[derive(Clone, Debug)]
pub struct QuadraticBridge {
    disc: BigInt,
    /// trace of the second basis element
    t: BigInt,
    /// sign of Im(sigma(omega))
    im_sign: i8,
}

impl QuadraticBridge {
    pub fn new(k: &NumberField) -> Result<Self> {
        if k.degree() != 2 || !k.disc().is_negative() {
            return Err(Error::NotImaginaryQuadratic);
        }
        let omega = Elem::from_i64(&[0, 1]);
        let t = k.trace(&omega).to_integer();
        let im = k.embeddings_of_basis()[0][1].im;
        Ok(QuadraticBridge { disc: k.disc().clone(), t, im_sign: if im > 0.0 { 1 } else { -1 } })
    }

    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    fn conj(&self, x: &[BigInt]) -> Vec<BigInt> {
        // x = u + v w, conj(w) = t - w
        vec![&x[0] + &x[1] * &self.t, -&x[1]]
    }

    /// Sign of Im(sigma(conj(x) y)).
    fn orientation(&self, k: &NumberField, x: &[BigInt], y: &[BigInt]) -> i8 {
        let p = k.mul_int(&self.conj(x), y);
        match p[1].sign() {
            num_bigint::Sign::Plus => self.im_sign,
            num_bigint::Sign::Minus => -self.im_sign,
            num_bigint::Sign::NoSign => 0,
        }
    }

    /// Oriented Z-basis of an integral ideal and the attached form of discriminant `d`.
    pub fn ideal_form(&self, k: &NumberField, i: &FracIdeal) -> (Form, [Vec<BigInt>; 2]) {
        assert!(i.is_integral());
        let b1 = i.hnf().col(0);
        let mut b2 = i.hnf().col(1);
        if self.orientation(k, &b1, &b2) < 0 {
            b2 = b2.iter().map(|x| -x).collect();
        }
        let n = i.norm_int();
        let a = k.norm_int(&b1) / &n;
        let c = k.norm_int(&b2) / &n;
        let tr: BigInt = {
            let p = k.mul_int(&self.conj(&b1), &b2);
            k.trace(&Elem::from_ints(p)).to_integer()
        };
        let b = -tr / &n;
        (Form { a, b, c }, [b1, b2])
    }

    /// Reduced form of the class of a nonzero fractional ideal.
    pub fn class_key(&self, k: &NumberField, i: &FracIdeal) -> Form {
        self.ideal_form(k, &i.numerator()).0.reduce().0
    }

    /// The ideal `a Z + (-b + sqrt d)/2 Z` attached to a primitive form.
    pub fn form_ideal(&self, k: &NumberField, f: &Form) -> FracIdeal {
        // sqrt d = s (2w - t) with s chosen so Im > 0
        let half = if self.im_sign > 0 {
            vec![(-&f.b - &self.t) / 2, BigInt::one()]
        } else {
            vec![(-&f.b + &self.t) / 2, -BigInt::one()]
        };
        let m = IntMat::from_cols(2, &[vec![f.a.clone(), BigInt::zero()], half]);
        let id = FracIdeal::from_lattice(&m, BigInt::one()).expect("form ideal has full rank");
        debug_assert!(id.is_ok_module(k));
        id
    }

    /// Generator of `i` if principal, `None` otherwise (exact).
    pub fn principal_generator(&self, k: &NumberField, i: &FracIdeal) -> Option<Elem> {
        let num = i.numerator();
        let (f, [b1, b2]) = self.ideal_form(k, &num);
        let (r, m) = f.reduce();
        if !r.a.is_one() {
            return None;
        }
        // the reduced form's first basis vector is p*b1 - r*b2
        let g: Vec<BigInt> = b1.iter().zip(&b2).map(|(x, y)| &m[0][0] * x - &m[1][0] * y).collect();
        let g = Elem::from_ints(g).scale(&num_rational::BigRational::new(BigInt::one(), i.den().clone()));
        debug_assert!(FracIdeal::principal(k, &g).unwrap() == *i);
        Some(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::tests::example1;
    use crate::prime::decompose_prime;

    #[test]
    fn reduced_form_counts() {
        assert_eq!(reduced_forms(&BigInt::from(-23)).len(), 3);
        assert_eq!(reduced_forms(&BigInt::from(-4)).len(), 1);
        assert_eq!(reduced_forms(&BigInt::from(-2840)).len(), 32);
        let f = Form::new(7, 13, 107);
        let (r, m) = f.reduce();
        assert!(r.is_reduced());
        assert_eq!(r.disc(), f.disc());
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        assert!(det.is_one());
    }

    #[test]
    fn ideal_form_roundtrip() {
        let k = example1();
        let br = QuadraticBridge::new(&k).unwrap();
        for p in [2i64, 3, 5, 7, 11] {
            for pr in decompose_prime(&k, &BigInt::from(p)).unwrap() {
                let key = br.class_key(&k, pr.ideal());
                assert_eq!(key.disc(), BigInt::from(-2840));
                let back = br.form_ideal(&k, &key);
                // same class: back / P is principal
                let q = back.div(&k, pr.ideal());
                assert!(br.principal_generator(&k, &q).is_some(), "p = {p}");
                // products correspond to the class of the product
                let sq = pr.ideal().mul(&k, pr.ideal());
                let b2 = back.mul(&k, &back);
                assert_eq!(br.class_key(&k, &sq), br.class_key(&k, &b2));
            }
        }
        let p7 = decompose_prime(&k, &BigInt::from(7)).unwrap();
        assert!(br.principal_generator(&k, p7[0].ideal()).is_none());
        let g = br.principal_generator(&k, &p7[0].ideal().mul(&k, p7[1].ideal())).unwrap();
        assert_eq!(k.norm(&g).abs(), num_rational::BigRational::from_integer(49.into()));
    }
}
