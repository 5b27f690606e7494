//! Orders, their conductors, and number rings `R = o[1/eps]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{Elem, NumberField};
use crate::ideal::FracIdeal;
use crate::linalg::lattice::{in_lattice, lattice_coords, lattice_preimage, q_inverse, qmat_from_int, Q, QMat};
use crate::linalg::{hnf_basis, snf_full, IntMat};
use crate::prime::{factor_ideal, PrimeIdeal};
use crate::residue::ResidueUnitGroup;

/// Largest residue ring `o / f_o` that will be enumerated.
pub const RESIDUE_ENUM_BOUND: u64 = 1_000_000;

/// An order of `K`, as a lattice in integral-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order {
    basis: IntMat,
    index: BigInt,
    conductor: FracIdeal,
}

impl Order {
    /// Validates that the columns of `basis` span a subring of `o_K` of full rank.
    pub fn new(k: &NumberField, basis: &IntMat) -> Result<Self> {
        let n = k.degree();
        if basis.rows() != n {
            return Err(Error::Dimension(format!("order basis has {} rows, field degree is {n}", basis.rows())));
        }
        let h = hnf_basis(basis);
        if h.cols() != n {
            return Err(Error::SingularBasis);
        }
        if !in_lattice(&h, Elem::one(n).num()) {
            return Err(Error::Input("order does not contain 1".into()));
        }
        let cols = h.to_cols();
        for a in &cols {
            for b in &cols {
                if !in_lattice(&h, &k.mul_int(a, b)) {
                    return Err(Error::NotClosed);
                }
            }
        }
        let index = h.det().abs();
        let conductor = conductor_of_lattice(k, &h)?;
        Ok(Order { basis: h, index, conductor })
    }

    pub fn maximal(k: &NumberField) -> Self {
        let n = k.degree();
        Order { basis: IntMat::identity(n), index: BigInt::one(), conductor: FracIdeal::unit(n) }
    }

    pub fn basis(&self) -> &IntMat {
        &self.basis
    }

    /// `[o_K : o]`.
    pub fn index(&self) -> &BigInt {
        &self.index
    }

    /// `f_o = { x in o_K : x o_K in o }`.
    pub fn conductor(&self) -> &FracIdeal {
        &self.conductor
    }

    pub fn is_maximal(&self) -> bool {
        self.index.is_one()
    }

    pub fn contains(&self, x: &Elem) -> bool {
        x.is_integral() && in_lattice(&self.basis, x.num())
    }
}

/// The conductor `{ x in o_K : x o_K in o }` of the order spanned by `basis`.
pub fn conductor_of_order(k: &NumberField, basis: &IntMat) -> Result<FracIdeal> {
    conductor_of_lattice(k, &hnf_basis(basis))
}

fn conductor_of_lattice(k: &NumberField, h: &IntMat) -> Result<FracIdeal> {
    let n = k.degree();
    let oinv = q_inverse(&qmat_from_int(h)).ok_or(Error::SingularBasis)?;
    // x in f iff O^{-1} M(w_i) x is integral for every basis element w_i
    let mut a: QMat = Vec::with_capacity(n * n);
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = BigInt::one();
        let m = qmat_from_int(&k.mult_matrix_int(&e));
        for row in &oinv {
            a.push((0..n).map(|c| (0..n).fold(Q::zero(), |s, j| s + &row[j] * &m[j][c])).collect());
        }
    }
    let f = lattice_preimage(&a, n)?;
    FracIdeal::from_lattice(&f, BigInt::one())
}

/// `R = o[1/eps]` for a T-unit `eps` of `o`.
#[derive(Clone, Debug)]
pub struct NumberRing {
    order: Order,
    epsilon: Elem,
    t: Vec<PrimeIdeal>,
    m0: FracIdeal,
}

impl NumberRing {
    pub fn new(k: &NumberField, order: Order, epsilon: Elem) -> Result<Self> {
        let n = k.degree();
        if epsilon.is_zero() || !order.contains(&epsilon) {
            return Err(Error::Input("epsilon must be a nonzero element of the order".into()));
        }
        let fac = factor_ideal(k, &FracIdeal::principal(k, &epsilon)?)?;
        let t: Vec<PrimeIdeal> = fac.into_iter().map(|(p, _)| p).collect();
        let m0 = t.iter().fold(FracIdeal::unit(n), |a, p| a.mul(k, p.ideal()));
        if !order.conductor().is_coprime_to(&m0) {
            return Err(Error::Hypothesis("the conductor of the order must be prime to the primes inverted in R".into()));
        }
        Ok(NumberRing { order, epsilon, t, m0 })
    }

    /// `R = Z[1/a] o`.
    pub fn from_integer(k: &NumberField, order: Order, a: &BigInt) -> Result<Self> {
        Self::new(k, order, Elem::integer(k.degree(), a.clone()))
    }

    /// The ring of integers itself.
    pub fn maximal(k: &NumberField) -> Self {
        NumberRing { order: Order::maximal(k), epsilon: Elem::one(k.degree()), t: vec![], m0: FracIdeal::unit(k.degree()) }
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn epsilon(&self) -> &Elem {
        &self.epsilon
    }

    /// The primes dividing `eps o_K`.
    pub fn t(&self) -> &[PrimeIdeal] {
        &self.t
    }

    /// `m0 = prod_{P in T} P`.
    pub fn m0(&self) -> &FracIdeal {
        &self.m0
    }

    /// `f~ = f_o`.
    pub fn f_tilde(&self) -> &FracIdeal {
        self.order.conductor()
    }

    /// The admissible modulus `f~ m0`.
    pub fn modulus(&self, k: &NumberField) -> FracIdeal {
        self.f_tilde().mul(k, &self.m0)
    }

    /// Primes dividing `f~ m0`.
    pub fn modulus_primes(&self, k: &NumberField) -> Result<Vec<PrimeIdeal>> {
        let mut ps: Vec<PrimeIdeal> = factor_ideal(k, self.f_tilde())?.into_iter().map(|(p, _)| p).collect();
        ps.extend(self.t.iter().cloned());
        Ok(ps)
    }
}

/// Subgroup matrix of the image of `(o / f_o)^*` in `(o_K / f_o)^*`, where
/// `res` is the residue unit group modulo the conductor of `o`.
pub fn suborder_unit_subgroup(k: &NumberField, o: &Order, res: &ResidueUnitGroup) -> Result<IntMat> {
    let n = k.degree();
    let g = res.group();
    if o.is_maximal() {
        return Ok(IntMat::identity(g.ngens()));
    }
    // o / f in o-coordinates: SNF of the conductor's coordinates in o
    let oinv = q_inverse(&qmat_from_int(o.basis())).ok_or(Error::SingularBasis)?;
    let f = res.modulus().hnf();
    let fo_rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|c| (0..n).fold(Q::zero(), |s, j| s + &oinv[i][j] * Q::from_integer(f[(j, c)].clone())).to_integer()).collect())
        .collect();
    let s = snf_full(&IntMat::from_rows(fo_rows)?);
    let d = s.diagonal();
    let size: BigInt = d.iter().product();
    if size > BigInt::from(RESIDUE_ENUM_BOUND) {
        return Err(Error::ResidueRingTooLarge(size));
    }
    let uinv = q_inverse(&qmat_from_int(&s.u)).expect("unimodular");
    // additive generators of o / f as elements of o_K
    let gens: Vec<Vec<BigInt>> = (0..n)
        .map(|c| {
            let oc: Vec<BigInt> = (0..n).map(|r| uinv[r][c].to_integer()).collect();
            o.basis().mul_vec(&oc)
        })
        .collect();
    let primes = res.primes();
    let dsz: Vec<u64> = d.iter().map(|x| x.to_u64().unwrap()).collect();
    let mut units = Vec::new();
    let mut idx = vec![0u64; n];
    'outer: loop {
        let mut x = vec![BigInt::zero(); n];
        for (c, &t) in idx.iter().enumerate() {
            if t > 0 {
                for r in 0..n {
                    x[r] += &gens[c][r] * t;
                }
            }
        }
        let xe = Elem::from_ints(res.modulus().reduce(&x));
        if !xe.is_zero() && primes.iter().all(|p| p.valuation(&xe) == 0) {
            units.push(xe);
        }
        for c in 0..n {
            idx[c] += 1;
            if idx[c] < dsz[c] {
                continue 'outer;
            }
            idx[c] = 0;
        }
        break;
    }
    let target = BigInt::from(units.len());
    let mut hgens: Vec<Vec<BigInt>> = Vec::new();
    let mut sub = g.subgroup_matrix(&[])?;
    for u in &units {
        let v = res.dlog(k, u)?;
        if lattice_coords(&sub, &v).is_some() {
            continue;
        }
        hgens.push(v);
        sub = g.subgroup_matrix(&hgens)?;
        if g.order() / g.index(&sub) == target {
            break;
        }
    }
    if g.order() / g.index(&sub) != target {
        return Err(Error::Exactness("suborder units do not form a subgroup of the expected size".into()));
    }
    Ok(sub)
}

/// Number of residues of `o / f_o` (as a sanity value).
pub fn residue_ring_size(o: &Order) -> BigInt {
    o.conductor().norm_int().div_floor(o.index())
}
