//! Column Hermite normal form.
//!
//! `H = M * U` with `U` unimodular. Zero columns sit on the left; the nonzero
//! block is upper triangular in echelon form (the pivot of the last column is in
//! the lowest nonzero row), pivots are positive and entries to the right of a
//! pivot are reduced into `[0, pivot)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::mat::IntMat;

/// Extended gcd with a nonnegative gcd: `x*a + y*b = g`.
pub fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_mod_floor(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let s = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s);
        let t = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: IntMat,
    pub u: IntMat,
    pub rank: usize,
}

/// Column HNF with transformation: returns `(H, U)` with `H = M*U`.
pub fn hnf(m: &IntMat) -> (IntMat, IntMat) {
    let r = hnf_full(m);
    (r.h, r.u)
}

pub fn hnf_full(m: &IntMat) -> Hnf {
    let mut h = m.clone();
    let mut u = IntMat::identity(m.cols());
    let rank = reduce(&mut h, Some(&mut u));
    Hnf { h, u, rank }
}

/// The nonzero columns of the HNF, i.e. a canonical basis of the column lattice.
pub fn hnf_basis(m: &IntMat) -> IntMat {
    let mut h = m.clone();
    let rank = reduce(&mut h, None);
    let c = h.cols();
    h.select_cols(&(c - rank..c).collect::<Vec<_>>())
}

/// Canonical basis of a full-rank lattice known to contain `d * Z^n`.
///
/// Entries are kept reduced modulo `d` throughout, which keeps them small when
/// many generators are supplied.
pub fn hnf_modular(m: &IntMat, d: &BigInt) -> IntMat {
    assert!(d.is_positive(), "modulus must be positive");
    let n = m.rows();
    let mut active: Vec<Vec<BigInt>> =
        m.to_cols().into_iter().map(|c| c.iter().map(|x| x.mod_floor(d)).collect()).collect();
    let mut done: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let mut e = vec![BigInt::zero(); n];
        e[i] = d.clone();
        active.push(e);
        // gcd-combine row i into one column
        let mut piv: Option<Vec<BigInt>> = None;
        let mut rest = Vec::with_capacity(active.len());
        for c in active.drain(..) {
            if c[i].is_zero() {
                rest.push(c);
                continue;
            }
            match piv.take() {
                None => piv = Some(c),
                Some(p) => {
                    let (a, b) = (&p[i], &c[i]);
                    let (g, x, y) = xgcd(a, b);
                    let (bg, ag) = (b / &g, a / &g);
                    let np: Vec<BigInt> =
                        p.iter().zip(&c).map(|(s, t)| (&x * s + &y * t).mod_floor(d)).collect();
                    let nc: Vec<BigInt> =
                        p.iter().zip(&c).map(|(s, t)| (&bg * s - &ag * t).mod_floor(d)).collect();
                    let mut np = np;
                    if np[i].is_zero() {
                        // g == d: the reduction wiped the pivot; restore it
                        np[i] = d.clone();
                    }
                    piv = Some(np);
                    rest.push(nc);
                }
            }
        }
        let p = piv.expect("d*e_i guarantees a pivot");
        done.push(p);
        active = rest
            .into_iter()
            .filter(|c| c.iter().take(i).any(|x| !x.is_zero()))
            .map(|mut c| {
                c[i] = BigInt::zero();
                c
            })
            .collect();
    }
    done.reverse();
    let mut h = IntMat::from_cols(n, &done);
    for i in 0..n {
        for k in i + 1..n {
            h[(k, i)] = BigInt::zero();
        }
    }
    for i in (0..n).rev() {
        let p = h[(i, i)].clone();
        for j in i + 1..n {
            let q = h[(i, j)].div_floor(&p);
            if !q.is_zero() {
                h.add_col_multiple(j, i, &-q);
            }
        }
    }
    h
}

fn reduce(h: &mut IntMat, mut u: Option<&mut IntMat>) -> usize {
    let rows = h.rows();
    let mut k = h.cols();
    for i in (0..rows).rev() {
        if k == 0 {
            break;
        }
        loop {
            // smallest nonzero entry among active columns goes to column k-1
            let best = (0..k)
                .filter(|&j| !h[(i, j)].is_zero())
                .min_by(|&a, &b| h[(i, a)].abs().cmp(&h[(i, b)].abs()).then(b.cmp(&a)));
            let Some(b) = best else { break };
            if b != k - 1 {
                h.swap_cols(b, k - 1);
                if let Some(u) = u.as_deref_mut() {
                    u.swap_cols(b, k - 1);
                }
            }
            let mut clean = true;
            for j in 0..k - 1 {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let a = h[(i, k - 1)].clone();
                let bv = h[(i, j)].clone();
                if bv.is_multiple_of(&a) {
                    let q = -(&bv / &a);
                    h.add_col_multiple(j, k - 1, &q);
                    if let Some(u) = u.as_deref_mut() {
                        u.add_col_multiple(j, k - 1, &q);
                    }
                } else {
                    let (g, x, y) = xgcd(&a, &bv);
                    let (bg, ag) = (&bv / &g, -(&a / &g));
                    h.combine_cols(k - 1, j, &x, &y, &bg, &ag);
                    if let Some(u) = u.as_deref_mut() {
                        u.combine_cols(k - 1, j, &x, &y, &bg, &ag);
                    }
                    clean = false;
                }
            }
            if clean || (0..k - 1).all(|j| h[(i, j)].is_zero()) {
                break;
            }
        }
        if h[(i, k - 1)].is_zero() {
            continue;
        }
        if h[(i, k - 1)].is_negative() {
            h.negate_col(k - 1);
            if let Some(u) = u.as_deref_mut() {
                u.negate_col(k - 1);
            }
        }
        let p = h[(i, k - 1)].clone();
        for j in k..h.cols() {
            let q = h[(i, j)].div_floor(&p);
            if !q.is_zero() {
                let q = -q;
                h.add_col_multiple(j, k - 1, &q);
                if let Some(u) = u.as_deref_mut() {
                    u.add_col_multiple(j, k - 1, &q);
                }
            }
        }
        k -= 1;
    }
    h.cols() - k
}

/// True if `h` is in the column HNF produced by [`hnf`].
pub fn is_hnf(h: &IntMat) -> bool {
    let mut row_limit = h.rows();
    let mut seen_nonzero = false;
    for j in (0..h.cols()).rev() {
        let Some(p) = (0..row_limit).rev().find(|&i| !h[(i, j)].is_zero()) else {
            // zero column: everything to the left must be zero too
            for jj in 0..=j {
                if !h.is_col_zero(jj) {
                    return false;
                }
            }
            return true;
        };
        if (p + 1..h.rows()).any(|i| !h[(i, j)].is_zero()) {
            return false;
        }
        let pv = &h[(p, j)];
        if !pv.is_positive() {
            return false;
        }
        for jj in j + 1..h.cols() {
            let x = &h[(p, jj)];
            if x.is_negative() || x >= pv {
                return false;
            }
        }
        row_limit = p;
        seen_nonzero = true;
    }
    let _ = seen_nonzero;
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_fixed() {
        let i = IntMat::identity(2);
        let (h, u) = hnf(&i);
        assert_eq!(h, i);
        assert_eq!(u, i);
    }

    #[test]
    fn upper_triangular_example() {
        let m = IntMat::from_i64(&[&[2, 1], &[0, 3]]);
        let (h, u) = hnf(&m);
        assert_eq!(&m * &u, h);
        assert!(u.is_unimodular());
        assert!(is_hnf(&h));
        assert_eq!(h.diag(), vec![BigInt::from(2), BigInt::from(3)]);
        assert_eq!(h, IntMat::from_i64(&[&[2, 1], &[0, 3]]));
    }

    #[test]
    fn determinant_preserved() {
        // cofactor determinant computed by hand: -3
        let m = IntMat::from_i64(&[&[0, 1, 2, 1], &[3, 4, 5, 0], &[6, 7, 9, 2], &[1, 0, 0, 1]]);
        let (h, u) = hnf(&m);
        assert_eq!(&m * &u, h);
        assert!(is_hnf(&h));
        assert_eq!(h.det().abs(), m.det().abs());
    }

    #[test]
    fn rank_deficient_zero_columns_left() {
        let m = IntMat::from_i64(&[&[2, 4, 6], &[1, 2, 3]]);
        let r = hnf_full(&m);
        assert_eq!(r.rank, 1);
        assert!(r.h.is_col_zero(0) && r.h.is_col_zero(1));
        assert_eq!(&m * &r.u, r.h);
        assert!(is_hnf(&r.h));
    }

    #[test]
    fn idempotent() {
        let m = IntMat::from_i64(&[&[5, 3, 7], &[2, 8, 1], &[4, 4, 9]]);
        let (h, _) = hnf(&m);
        let (h2, u2) = hnf(&h);
        assert_eq!(h, h2);
        assert_eq!(u2, IntMat::identity(3));
    }

    #[test]
    fn modular_matches_plain() {
        let m = IntMat::from_i64(&[&[6, 4, 10, 3], &[0, 8, 2, 5], &[2, 2, 6, 1]]);
        let basis = hnf_basis(&m);
        let d = basis.det().abs();
        assert_eq!(hnf_modular(&m, &d), basis);
        assert_eq!(hnf_modular(&m, &(&d * 7)), basis);
    }
}
