//! Finite abelian groups presented as `(G, D_G)`: generators with a diagonal
//! relation matrix, plus the coordinate change from an underlying raw presentation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::ideal::FracIdeal;
use crate::linalg::lattice::{in_lattice, q_inverse, qmat_from_int};
use crate::linalg::{hnf_basis, snf_full, IntMat};

/// Concrete representative carried by a generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenRep {
    /// Exponent vector over the generators of some parent presentation.
    Coords(Vec<BigInt>),
    Ideal(FracIdeal),
    Elem(Elem),
    Label(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAbGroup {
    /// Cyclic orders, largest first, each dividing the previous one; all > 1.
    invariants: Vec<BigInt>,
    gens: Vec<GenRep>,
    /// `k x r`: raw coordinates to SNF coordinates.
    proj: IntMat,
    /// `r x k`: each column writes a generator in raw coordinates.
    lift: IntMat,
}

impl FinAbGroup {
    pub fn trivial(raw_rank: usize) -> Self {
        FinAbGroup { invariants: vec![], gens: vec![], proj: IntMat::zeros(0, raw_rank), lift: IntMat::zeros(raw_rank, 0) }
    }

    /// Group with raw generators `g_1..g_r` subject to the column relations of `rel` (`r x s`).
    pub fn from_relations(rel: &IntMat) -> Result<Self> {
        let r = rel.rows();
        if r == 0 {
            return Ok(Self::trivial(0));
        }
        let s = snf_full(rel);
        let d = s.diagonal();
        if d.len() < r || d.iter().any(Zero::is_zero) {
            return Err(Error::InfiniteGroup);
        }
        let uinv = q_inverse(&qmat_from_int(&s.u)).expect("unimodular");
        // nontrivial cyclic factors, largest first
        let idx: Vec<usize> = (0..r).rev().filter(|&i| !d[i].is_one()).collect();
        let invariants: Vec<BigInt> = idx.iter().map(|&i| d[i].abs()).collect();
        let proj = s.u.select_rows(&idx);
        let mut lift = IntMat::zeros(r, idx.len());
        for (c, &i) in idx.iter().enumerate() {
            for j in 0..r {
                lift[(j, c)] = uinv[j][i].to_integer();
            }
        }
        let proj = proj_reduced(&proj, &invariants);
        let gens = (0..idx.len()).map(|c| GenRep::Coords(lift.col(c))).collect();
        Ok(FinAbGroup { invariants, gens, proj, lift })
    }

    /// Group with the given invariants (largest first, each dividing the
    /// previous) on its own generators.
    pub fn from_invariants(inv: Vec<BigInt>) -> Result<Self> {
        if inv.iter().any(|d| d <= &BigInt::one()) {
            return Err(Error::Input("group invariants must exceed 1".into()));
        }
        if inv.windows(2).any(|w| !w[0].is_multiple_of(&w[1])) {
            return Err(Error::Input("group invariants must form a divisibility chain, largest first".into()));
        }
        let k = inv.len();
        let gens = (0..k).map(|i| GenRep::Coords(IntMat::identity(k).col(i))).collect();
        Ok(FinAbGroup { invariants: inv, gens, proj: IntMat::identity(k), lift: IntMat::identity(k) })
    }

    /// Direct sum of cyclic groups of the given orders on abstract generators.
    pub fn cyclic_product(orders: &[i64]) -> Result<Self> {
        let d: Vec<BigInt> = orders.iter().map(|&x| BigInt::from(x)).collect();
        Self::from_relations(&IntMat::diagonal(&d))
    }

    pub fn with_gens(mut self, gens: Vec<GenRep>) -> Self {
        assert_eq!(gens.len(), self.invariants.len());
        self.gens = gens;
        self
    }

    pub fn invariants(&self) -> &[BigInt] {
        &self.invariants
    }

    pub fn invariants_i64(&self) -> Vec<i64> {
        self.invariants.iter().map(|x| x.to_i64().expect("small invariant")).collect()
    }

    pub fn gens(&self) -> &[GenRep] {
        &self.gens
    }

    pub fn ngens(&self) -> usize {
        self.invariants.len()
    }

    pub fn raw_rank(&self) -> usize {
        self.proj.cols()
    }

    pub fn proj(&self) -> &IntMat {
        &self.proj
    }

    pub fn lift(&self) -> &IntMat {
        &self.lift
    }

    pub fn order(&self) -> BigInt {
        self.invariants.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    /// The diagonal relation matrix `D_G`.
    pub fn relation_matrix(&self) -> IntMat {
        IntMat::diagonal(&self.invariants)
    }

    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.ngens(), "coordinate length");
        v.iter().zip(&self.invariants).map(|(x, d)| x.mod_floor(d)).collect()
    }

    /// SNF coordinates of an element given in raw coordinates.
    pub fn from_raw(&self, raw: &[BigInt]) -> Vec<BigInt> {
        self.reduce(&self.proj.mul_vec(raw))
    }

    pub fn to_raw(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.lift.mul_vec(v)
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.ngens()]
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, a: &[BigInt], k: &BigInt) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().map(|x| x * k).collect();
        self.reduce(&s)
    }

    pub fn is_zero(&self, a: &[BigInt]) -> bool {
        self.reduce(a).iter().all(Zero::is_zero)
    }

    pub fn elem_order(&self, a: &[BigInt]) -> BigInt {
        self.reduce(a)
            .iter()
            .zip(&self.invariants)
            .fold(BigInt::one(), |acc, (x, d)| acc.lcm(&(d / x.gcd(d))))
    }

    /// HNF of `[H | D_G]`; the subgroup generated by `h_gens` corresponds to its column lattice.
    pub fn subgroup_matrix(&self, h_gens: &[Vec<BigInt>]) -> Result<IntMat> {
        let k = self.ngens();
        if let Some(v) = h_gens.iter().find(|v| v.len() != k) {
            return Err(Error::Dimension(format!("subgroup generator of length {} in a group with {k} generators", v.len())));
        }
        let h = IntMat::from_cols(k, h_gens);
        Ok(hnf_basis(&h.hstack(&self.relation_matrix())?))
    }

    /// Index of the subgroup represented by `m`.
    pub fn index(&self, m: &IntMat) -> BigInt {
        m.det().abs()
    }

    /// `G / H` where `H` is given by a subgroup matrix; coordinates of the
    /// quotient are computed from this group's SNF coordinates.
    pub fn quotient(&self, m: &IntMat) -> Result<FinAbGroup> {
        let k = self.ngens();
        if m.rows() != k {
            return Err(Error::Dimension(format!("subgroup matrix has {} rows, group has {k} generators", m.rows())));
        }
        let d = self.relation_matrix();
        if !(0..k).all(|j| in_lattice(&hnf_basis(m), &d.col(j))) {
            return Err(Error::Input("subgroup matrix does not contain the group relations".into()));
        }
        Self::from_relations(m)
    }

    /// Assembles `B` from `1 -> A -> B -> C -> 1`.
    ///
    /// `rels[i]` is the A-discrete logarithm of `c~_i^{d_i}`, where `c~_i` lifts
    /// the i-th generator of `C` and `d_i` is its order. Raw coordinates of the
    /// result are `(A-coordinates, C-coordinates)`.
    pub fn extension_assemble(a: &FinAbGroup, c: &FinAbGroup, rels: &[Vec<BigInt>]) -> Result<FinAbGroup> {
        let (ka, kc) = (a.ngens(), c.ngens());
        if rels.len() != kc || rels.iter().any(|r| r.len() != ka) {
            return Err(Error::Dimension("extension relations must be A-vectors, one per C-generator".into()));
        }
        let mut m = IntMat::zeros(ka + kc, ka + kc);
        for i in 0..ka {
            m[(i, i)] = a.invariants[i].clone();
        }
        for (j, r) in rels.iter().enumerate() {
            for i in 0..ka {
                m[(i, ka + j)] = -&r[i];
            }
            m[(ka + j, ka + j)] = c.invariants[j].clone();
        }
        let b = Self::from_relations(&m)?;
        debug_assert_eq!(b.order(), a.order() * c.order());
        Ok(b)
    }

    /// Every element as a coordinate vector (only for small groups).
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![Vec::new()];
        for d in &self.invariants {
            let d = d.to_u64().expect("small group");
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..d).map(move |x| {
                        let mut w = v.clone();
                        w.push(BigInt::from(x));
                        w
                    })
                })
                .collect();
        }
        out
    }
}

fn proj_reduced(proj: &IntMat, inv: &[BigInt]) -> IntMat {
    let mut p = proj.clone();
    for (i, d) in inv.iter().enumerate() {
        for j in 0..p.cols() {
            p[(i, j)] = p[(i, j)].mod_floor(d);
        }
    }
    p
}

pub fn vec_i64(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn vec_to_i64(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().expect("fits in i64")).collect()
}

/// Does `v` lie in the column lattice of the HNF matrix `m`?
pub fn in_subgroup(m: &IntMat, v: &[BigInt]) -> bool {
    in_lattice(m, v)
}
