//! Principal ideal testing by short-vector enumeration, and torsion units.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::field::{Elem, NumberField, T2_SHIFT};
use crate::ideal::FracIdeal;
use crate::linalg::lll::{congruent, fincke_pohst, gram_f64, lll_gram, Enumeration};
use crate::linalg::IntMat;

use super::forms::QuadraticBridge;

/// Default multiplier `c` in the enumeration radius `c * n * N(a)^(2/n)`.
pub const DEFAULT_PIP_RADIUS: f64 = 10.0;
const NODE_LIMIT: u64 = 20_000_000;

/// Outcome of a principal ideal test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Principal {
    Yes(Elem),
    /// Provably not principal.
    No,
}

/// LLL-reduced basis (columns, integral coordinates) of an integral lattice
/// and its approximate T2 Gram matrix.
pub fn reduced_basis(k: &NumberField, b: &IntMat) -> (IntMat, Vec<Vec<f64>>) {
    let g = congruent(k.t2_gram(), b);
    let u = lll_gram(&g);
    let gr = congruent(&g, &u);
    (b * &u, gram_f64(&gr))
}

/// Enumerates integral elements of the lattice spanned by `basis` with T2
/// at most `t2_bound`; `visit` returns `true` to stop.
pub fn short_elements(
    k: &NumberField,
    basis: &IntMat,
    t2_bound: f64,
    mut visit: impl FnMut(Vec<BigInt>) -> bool,
) -> Enumeration {
    let (b, g) = reduced_basis(k, basis);
    let scale = (1u64 << T2_SHIFT) as f64;
    fincke_pohst(&g, t2_bound * scale, NODE_LIMIT, |x| {
        let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        visit(b.mul_vec(&xb))
    })
}

/// Principal ideal test. Imaginary quadratic fields get an exact answer; other
/// fields search for a generator of T2 at most `c * n * N(a)^(2/n)` and report
/// `Inconclusive` when the search space is exhausted.
pub fn principal_ideal_test(k: &NumberField, a: &FracIdeal, c: f64) -> Result<Principal> {
    let n = k.degree();
    let den = BigRational::new(BigInt::one(), a.den().clone());
    if n == 1 {
        return Ok(Principal::Yes(Elem::integer(1, a.hnf()[(0, 0)].clone()).scale(&den)));
    }
    if let Ok(br) = QuadraticBridge::new(k) {
        return Ok(match br.principal_generator(k, a) {
            Some(g) => Principal::Yes(g),
            None => Principal::No,
        });
    }
    let num = a.numerator();
    let norm = num.norm_int();
    if norm.is_one() {
        return Ok(Principal::Yes(Elem::one(n).scale(&den)));
    }
    let bound = c * n as f64 * norm.to_f64().unwrap().powf(2.0 / n as f64);
    let mut found = None;
    let outcome = short_elements(k, num.hnf(), bound, |v| {
        if k.norm_int(&v).abs() == norm {
            found = Some(v);
            true
        } else {
            false
        }
    });
    match found {
        Some(v) => {
            let g = Elem::from_ints(v);
            debug_assert_eq!(FracIdeal::principal(k, &g).unwrap(), num);
            Ok(Principal::Yes(g.scale(&den)))
        }
        None => Err(Error::Inconclusive(match outcome {
            Enumeration::NodeLimit => format!("enumeration node limit reached below T2 radius {bound:.1}"),
            _ => format!("no generator with T2 <= {bound:.1}"),
        })),
    }
}

/// Generator of the group of roots of unity and its order.
pub fn torsion_units(k: &NumberField) -> (Elem, u64) {
    let n = k.degree();
    let minus_one = Elem::integer(n, -1);
    if k.signature().0 > 0 {
        return (minus_one, 2);
    }
    let mut best = (minus_one, 2u64);
    // roots of unity are exactly the nonzero integers with T2 = n
    short_elements(k, &IntMat::identity(n), n as f64 + 0.5, |v| {
        let x = Elem::from_ints(v);
        if let Some(o) = k.root_of_unity_order(&x) {
            if o > best.1 {
                best = (x, o);
            }
        }
        false
    });
    best
}

/// Checks that a claimed unit is integral with norm +-1.
pub fn verify_unit(k: &NumberField, u: &Elem) -> Result<()> {
    if !u.is_integral() || u.is_zero() || !k.norm(u).abs().is_one() {
        return Err(Error::Verification(format!("{u:?} is not a unit")));
    }
    let inv = k.inv(u)?;
    if !inv.is_integral() {
        return Err(Error::Verification(format!("{u:?} has a non-integral inverse")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::tests::{example1, example2, ints, qs};
    use crate::prime::decompose_prime;

    #[test]
    fn torsion() {
        let gauss = NumberField::new(ints(&[1, 0, 1]), vec![qs(&[(1, 1), (0, 1)]), qs(&[(0, 1), (1, 1)])]).unwrap();
        assert_eq!(torsion_units(&gauss).1, 4);
        assert_eq!(torsion_units(&example1()).1, 2);
        assert_eq!(torsion_units(&example2()).1, 2);
    }

    #[test]
    fn pip_example2() {
        let k = example2();
        let b = BigInt::from;
        let p11 = decompose_prime(&k, &b(11)).unwrap();
        // (11, alpha + 2)^2 = (-2 - alpha)
        let sq = p11[0].pow(&k, 2);
        match principal_ideal_test(&k, &sq, DEFAULT_PIP_RADIUS).unwrap() {
            Principal::Yes(g) => assert_eq!(FracIdeal::principal(&k, &g).unwrap(), sq),
            Principal::No => panic!(),
        }
        assert!(matches!(principal_ideal_test(&k, p11[0].ideal(), DEFAULT_PIP_RADIUS), Err(Error::Inconclusive(_))));
        let x = Elem::from_i64(&[3, 1, 3, 0]);
        let i = FracIdeal::principal(&k, &x).unwrap().scale(&BigRational::new(b(1), b(6)));
        match principal_ideal_test(&k, &i, DEFAULT_PIP_RADIUS).unwrap() {
            Principal::Yes(g) => assert_eq!(FracIdeal::principal(&k, &g).unwrap(), i),
            Principal::No => panic!(),
        }
    }

    #[test]
    fn units() {
        let k = example2();
        verify_unit(&k, &Elem::from_i64(&[0, 0, 1, 0])).unwrap();
        assert!(verify_unit(&k, &Elem::from_i64(&[0, 1, 0, 0])).is_err());
    }
}
