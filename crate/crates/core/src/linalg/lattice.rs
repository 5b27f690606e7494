//! Rational matrices, kernels and lattice membership.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::hnf::{hnf_basis, hnf_full};
use super::mat::IntMat;
use super::snf::snf_full;
use crate::error::{Error, Result};

pub type Q = BigRational;
/// Row-major rational matrix.
pub type QMat = Vec<Vec<Q>>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qmat_from_int(m: &IntMat) -> QMat {
    m.to_rows().into_iter().map(|r| r.into_iter().map(Q::from_integer).collect()).collect()
}

pub fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn q_det(a: &QMat) -> Q {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Q::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Q::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        let piv = m[k][k].clone();
        det *= &piv;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &piv;
            for j in k..n {
                let t = &f * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Solves `A x = b` for square nonsingular `A`.
pub fn q_solve(a: &QMat, b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: QMat = a.iter().zip(b).map(|(r, x)| {
        let mut r = r.clone();
        r.push(x.clone());
        r
    }).collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(p, k);
        let piv = m[k][k].clone();
        for j in k..=n {
            m[k][j] = &m[k][j] / &piv;
        }
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone();
            for j in k..=n {
                let t = &f * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub fn q_inverse(a: &QMat) -> Option<QMat> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<Q> = (0..n).map(|i| if i == j { Q::one() } else { Q::zero() }).collect();
        cols.push(q_solve(a, &e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

pub fn q_mul_vec(a: &QMat, v: &[Q]) -> Vec<Q> {
    a.iter().map(|r| r.iter().zip(v).fold(Q::zero(), |s, (x, y)| s + x * y)).collect()
}

/// Basis (as HNF columns) of `{ y in Z^n : A y in Z^m }` for `A` of full column rank.
pub fn lattice_preimage(a: &QMat, n: usize) -> Result<IntMat> {
    let s = lcm_of_denominators(a.iter().flatten());
    let rows: Vec<Vec<BigInt>> =
        a.iter().map(|r| r.iter().map(|x| (x * Q::from_integer(s.clone())).to_integer()).collect()).collect();
    let m = if rows.is_empty() { IntMat::zeros(0, n) } else { IntMat::from_rows(rows)? };
    let sn = snf_full(&m);
    let mut scale = Vec::with_capacity(n);
    for i in 0..n {
        let d = if i < m.rows() { sn.d[(i, i)].clone() } else { BigInt::zero() };
        if d.is_zero() {
            return Err(Error::RankDeficient);
        }
        scale.push(&s / s.gcd(&d));
    }
    let mut basis = sn.v.clone();
    for (j, f) in scale.iter().enumerate() {
        for i in 0..n {
            basis[(i, j)] = &basis[(i, j)] * f;
        }
    }
    Ok(hnf_basis(&basis))
}

/// Columns spanning the integer kernel `{ x : M x = 0 }`.
pub fn kernel(m: &IntMat) -> IntMat {
    let h = hnf_full(m);
    let k = m.cols() - h.rank;
    h.u.select_cols(&(0..k).collect::<Vec<_>>())
}

/// Coordinates of `v` in the column lattice of an HNF basis (as from `hnf_basis`).
pub fn lattice_coords(basis: &IntMat, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let r = basis.cols();
    let mut res: Vec<BigInt> = v.to_vec();
    let mut y = vec![BigInt::zero(); r];
    let mut limit = basis.rows();
    for j in (0..r).rev() {
        let p = (0..limit).rev().find(|&i| !basis[(i, j)].is_zero())?;
        // rows strictly between this pivot and the previous one must already vanish
        if (p + 1..limit).any(|i| !res[i].is_zero()) {
            return None;
        }
        let (qt, rm) = res[p].div_rem(&basis[(p, j)]);
        if !rm.is_zero() {
            return None;
        }
        for i in 0..=p {
            let t = &basis[(i, j)] * &qt;
            res[i] -= t;
        }
        y[j] = qt;
        limit = p;
    }
    if res.iter().all(Zero::is_zero) {
        Some(y)
    } else {
        None
    }
}

pub fn in_lattice(basis: &IntMat, v: &[BigInt]) -> bool {
    lattice_coords(basis, v).is_some()
}

/// Reduces `v` modulo a full-rank upper triangular HNF basis to its canonical residue.
pub fn reduce_mod_hnf(h: &IntMat, v: &[BigInt]) -> Vec<BigInt> {
    let n = h.rows();
    let mut x = v.to_vec();
    for i in (0..n).rev() {
        let q = x[i].div_floor(&h[(i, i)]);
        if !q.is_zero() {
            for k in 0..=i {
                let t = &h[(k, i)] * &q;
                x[k] -= t;
            }
        }
    }
    x
}

/// Is every column of `sub` in the lattice spanned by `sup` (HNF basis)?
pub fn contains_lattice(sup: &IntMat, sub: &IntMat) -> bool {
    (0..sub.cols()).all(|j| in_lattice(sup, &sub.col(j)))
}

pub fn abs_det(m: &IntMat) -> BigInt {
    m.det().abs()
}
