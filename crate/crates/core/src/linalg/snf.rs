//! Smith normal form with both transformation matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::mat::IntMat;

#[derive(Clone, Debug)]
pub struct Snf {
    /// `D = U * M * V`, diagonal, `d1 | d2 | ...`, zeros last.
    pub d: IntMat,
    pub u: IntMat,
    pub v: IntMat,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        self.d.diag()
    }

    pub fn rank(&self) -> usize {
        self.d.diag().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn snf(m: &IntMat) -> (IntMat, IntMat, IntMat) {
    let s = snf_full(m);
    (s.d, s.u, s.v)
}

pub fn snf_full(m: &IntMat) -> Snf {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMat::identity(r);
    let mut v = IntMat::identity(c);
    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &a[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return Snf { d: a, u, v };
            };
            a.swap_rows(t, bi);
            u.swap_rows(t, bi);
            a.swap_cols(t, bj);
            v.swap_cols(t, bj);
            if a[(t, t)].is_negative() {
                a.negate_row(t);
                u.negate_row(t);
            }
            let p = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..r {
                let q = a[(i, t)].div_floor(&p);
                if !q.is_zero() {
                    let q = -q;
                    a.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                }
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..c {
                let q = a[(t, j)].div_floor(&p);
                if !q.is_zero() {
                    let q = -q;
                    a.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                }
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::from(1);
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
    }
    Snf { d: a, u, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMat) -> Snf {
        let s = snf_full(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        assert!(s.d.is_diagonal());
        let d = s.d.diag();
        for w in d.windows(2) {
            if w[1].is_zero() {
                continue;
            }
            assert!(!w[0].is_zero() && w[1].is_multiple_of(&w[0]), "{:?}", d);
        }
        s
    }

    #[test]
    fn already_diagonal() {
        let m = IntMat::from_i64(&[&[2, 0], &[0, 4]]);
        let s = check(&m);
        assert_eq!(s.d, m);
        assert_eq!(s.u, IntMat::identity(2));
        assert_eq!(s.v, IntMat::identity(2));
    }

    #[test]
    fn small_examples() {
        let s = check(&IntMat::from_i64(&[&[1, 1], &[0, 2]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(2)]);
        let s = check(&IntMat::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        let s = check(&IntMat::from_i64(&[&[4, 6, 0], &[6, 9, 0]]));
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn zero_and_empty() {
        check(&IntMat::zeros(2, 3));
        check(&IntMat::zeros(0, 3));
        check(&IntMat::zeros(3, 0));
    }
}
