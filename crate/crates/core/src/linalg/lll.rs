//! LLL reduction of positive definite Gram matrices and Fincke–Pohst enumeration.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntMat;

type Q = BigRational;

fn gram_schmidt(g: &IntMat) -> (Vec<Vec<Q>>, Vec<Q>) {
    let n = g.rows();
    let mut mu = vec![vec![Q::zero(); n]; n];
    let mut r = vec![vec![Q::zero(); n]; n];
    let mut b = vec![Q::zero(); n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = Q::from_integer(g[(i, j)].clone());
            for k in 0..j {
                s -= &mu[j][k] * &r[i][k];
            }
            r[i][j] = s.clone();
            if j < i {
                mu[i][j] = if b[j].is_zero() { Q::zero() } else { s / &b[j] };
            } else {
                b[i] = s;
            }
        }
    }
    (mu, b)
}

fn sub_multiple(g: &mut IntMat, u: &mut IntMat, k: usize, j: usize, q: &BigInt) {
    let n = g.rows();
    // b_k <- b_k - q b_j
    for i in 0..n {
        let t = &g[(j, i)] * q;
        g[(k, i)] -= t;
    }
    for i in 0..n {
        let t = &g[(i, j)] * q;
        g[(i, k)] -= t;
    }
    let neg = -q;
    u.add_col_multiple(k, j, &neg);
}

fn round_q(x: &Q) -> BigInt {
    let two = BigInt::from(2);
    let num = x.numer() * &two + x.denom();
    let den = x.denom() * two;
    num_integer::Integer::div_floor(&num, &den)
}

/// LLL-reduces the lattice with Gram matrix `g` (positive definite).
/// Returns `U` unimodular with `U^T g U` reduced (delta = 3/4).
pub fn lll_gram(g: &IntMat) -> IntMat {
    let n = g.rows();
    let mut g = g.clone();
    let mut u = IntMat::identity(n);
    if n <= 1 {
        return u;
    }
    let delta = Q::new(BigInt::from(3), BigInt::from(4));
    let half = Q::new(BigInt::one(), BigInt::from(2));
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&g);
            if mu[k][j].abs() > half {
                let q = round_q(&mu[k][j]);
                sub_multiple(&mut g, &mut u, k, j, &q);
            }
        }
        let (mu, b) = gram_schmidt(&g);
        let lhs = b[k].clone();
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &b[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            g.swap_rows(k, k - 1);
            g.swap_cols(k, k - 1);
            u.swap_cols(k, k - 1);
            k = if k > 1 { k - 1 } else { 1 };
        }
    }
    u
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Enumeration {
    Completed,
    Stopped,
    NodeLimit,
}

/// Enumerates nonzero `x` with `x^T g x <= bound`, one of each `+-x` pair
/// (last nonzero coordinate positive). `visit` returns `true` to stop early.
pub fn fincke_pohst(g: &[Vec<f64>], bound: f64, node_limit: u64, mut visit: impl FnMut(&[i64]) -> bool) -> Enumeration {
    let n = g.len();
    // q[i][i] and q[i][j] (j > i) from the Cholesky-style decomposition
    let mut q = g.to_vec();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    if (0..n).any(|i| !(q[i][i] > 0.0)) {
        return Enumeration::Completed;
    }
    let bound = bound * (1.0 + 1e-9) + 1e-9;
    let mut x = vec![0i64; n];
    let mut nodes = 0u64;
    fn rec(
        i: usize,
        rem: f64,
        q: &[Vec<f64>],
        x: &mut Vec<i64>,
        top_zero: bool,
        nodes: &mut u64,
        limit: u64,
        visit: &mut dyn FnMut(&[i64]) -> bool,
    ) -> Option<Enumeration> {
        let n = q.len();
        let c: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
        let w = (rem.max(0.0) / q[i][i]).sqrt();
        let lo = if top_zero { 0 } else { (c - w).ceil() as i64 };
        let hi = (c + w).floor() as i64;
        for v in lo..=hi {
            *nodes += 1;
            if *nodes > limit {
                return Some(Enumeration::NodeLimit);
            }
            let d = v as f64 - c;
            let r = rem - q[i][i] * d * d;
            if r < 0.0 {
                continue;
            }
            x[i] = v;
            if i == 0 {
                if x.iter().any(|&t| t != 0) && visit(x) {
                    return Some(Enumeration::Stopped);
                }
            } else if let Some(e) = rec(i - 1, r, q, x, top_zero && v == 0, nodes, limit, visit) {
                return Some(e);
            }
        }
        x[i] = 0;
        None
    }
    if n == 0 {
        return Enumeration::Completed;
    }
    rec(n - 1, bound, &q, &mut x, true, &mut nodes, node_limit, &mut visit).unwrap_or(Enumeration::Completed)
}

/// Converts an integer Gram matrix to floating point.
pub fn gram_f64(g: &IntMat) -> Vec<Vec<f64>> {
    g.to_rows().iter().map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::MAX)).collect()).collect()
}

/// `U^T G U`.
pub fn congruent(g: &IntMat, u: &IntMat) -> IntMat {
    &(&u.transpose() * g) * u
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lll_reduces_skewed_basis() {
        // basis (1, 0), (1000, 1) of Z^2
        let g = IntMat::from_i64(&[&[1, 1000], &[1000, 1000001]]);
        let u = lll_gram(&g);
        assert!(u.is_unimodular());
        let r = congruent(&g, &u);
        assert_eq!(r[(0, 0)], BigInt::one());
        assert_eq!(r[(1, 1)], BigInt::one());
    }

    #[test]
    fn enumerates_short_vectors() {
        let g = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let mut found = Vec::new();
        let e = fincke_pohst(&g, 2.0, 1_000, |x| {
            found.push(x.to_vec());
            false
        });
        assert_eq!(e, Enumeration::Completed);
        // (1,0),(0,1),(1,1),(-1,1)
        assert_eq!(found.len(), 4);
        let e = fincke_pohst(&g, 100.0, 5, |_| false);
        assert_eq!(e, Enumeration::NodeLimit);
    }
}
