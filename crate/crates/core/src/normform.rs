//! Norm forms `f(x) = N(x_1 a_1 + ... + x_n a_n)` and bounded searches for
//! solutions of `f(x) = +-l a^m`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::classgroup::ClassGroupData;
use crate::error::{Error, Result};
use crate::field::{Elem, NumberField};
use crate::linalg::lattice::lattice_coords;
use crate::linalg::IntMat;
use crate::numeric::complex_roots;
use crate::picard::PicardGroup;
use crate::ray::{splits_completely, SplitMode};

/// Sparse multivariate polynomial: exponent vector -> coefficient.
pub type Monomials = BTreeMap<Vec<u32>, BigInt>;

fn poly_mul(a: &Monomials, b: &Monomials) -> Monomials {
    let mut out = Monomials::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_add_assign(a: &mut Monomials, b: &Monomials, sign: bool) {
    for (e, c) in b {
        let t = a.entry(e.clone()).or_insert_with(BigInt::zero);
        if sign {
            *t += c;
        } else {
            *t -= c;
        }
    }
    a.retain(|_, c| !c.is_zero());
}

#[derive(Clone, Debug)]
pub struct NormForm {
    basis: Vec<Elem>,
    /// Coordinates of the basis in the integral basis, as columns.
    basis_mat: IntMat,
    coeffs: Monomials,
}

/// Expand `det(sum x_i M(a_i))` for an integral basis `a_1..a_n` of a full-rank module.
pub fn expand_norm_form(k: &NumberField, basis: &[Elem]) -> Result<NormForm> {
    let n = k.degree();
    if basis.len() != n {
        return Err(Error::Input(format!("norm form basis needs {n} elements, got {}", basis.len())));
    }
    if let Some(b) = basis.iter().find(|b| !b.is_integral()) {
        return Err(Error::Input(format!("norm form basis element {b:?} is not integral")));
    }
    let basis_mat = IntMat::from_cols(n, &basis.iter().map(|b| b.num().to_vec()).collect::<Vec<_>>());
    if basis_mat.det().is_zero() {
        return Err(Error::RankDeficient);
    }
    let mats: Vec<IntMat> = basis.iter().map(|b| k.mult_matrix_int(b.num())).collect();
    // entry (r, c) as a linear form in x
    let entry = |r: usize, c: usize| -> Monomials {
        let mut m = Monomials::new();
        for (i, mi) in mats.iter().enumerate() {
            if !mi[(r, c)].is_zero() {
                let mut e = vec![0u32; n];
                e[i] = 1;
                m.insert(e, mi[(r, c)].clone());
            }
        }
        m
    };
    let entries: Vec<Vec<Monomials>> = (0..n).map(|r| (0..n).map(|c| entry(r, c)).collect()).collect();
    // Laplace expansion along rows, memoised on the set of used columns
    let mut memo: HashMap<u64, Monomials> = HashMap::new();
    let full = (1u64 << n) - 1;
    let mut one = Monomials::new();
    one.insert(vec![0; n], BigInt::one());
    memo.insert(full, one);
    for used in (0..full).rev() {
        let row = used.count_ones() as usize;
        let mut acc = Monomials::new();
        let mut sign = true;
        for c in 0..n {
            if used & (1 << c) != 0 {
                continue;
            }
            if let Some(minor) = memo.get(&(used | (1 << c))) {
                if !entries[row][c].is_empty() && !minor.is_empty() {
                    poly_add_assign(&mut acc, &poly_mul(&entries[row][c], minor), sign);
                }
            }
            sign = !sign;
        }
        memo.insert(used, acc);
    }
    let coeffs = memo.remove(&0).unwrap_or_default();
    Ok(NormForm { basis: basis.to_vec(), basis_mat, coeffs })
}

impl NormForm {
    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    pub fn nvars(&self) -> usize {
        self.basis.len()
    }

    pub fn coefficients(&self) -> &Monomials {
        &self.coeffs
    }

    pub fn coefficient(&self, e: &[u32]) -> BigInt {
        self.coeffs.get(e).cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &[BigInt]) -> BigInt {
        self.coeffs
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(c.clone(), |acc, (&p, xi)| acc * xi.pow(p)))
            .sum()
    }

    pub fn eval_i64(&self, x: &[i64]) -> BigInt {
        self.eval(&x.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>())
    }

    /// The element `sum x_i a_i`.
    pub fn element(&self, x: &[BigInt]) -> Elem {
        Elem::from_ints(self.basis_mat.mul_vec(x))
    }

    /// Coordinates of `g` over the basis, if `g` lies in the module.
    pub fn coords_of(&self, g: &Elem) -> Option<Vec<BigInt>> {
        if !g.is_integral() {
            return None;
        }
        lattice_coords(&self.basis_mat, g.num())
    }

    /// Coefficients (low degree first) of `t -> f(x_1, .., x_{n-1}, t)`.
    fn last_var_poly(&self, head: &[BigInt]) -> Vec<BigInt> {
        let n = self.nvars();
        let mut out = vec![BigInt::zero(); n + 1];
        for (e, c) in &self.coeffs {
            let v = e[..n - 1].iter().zip(head).fold(c.clone(), |acc, (&p, xi)| acc * xi.pow(p));
            out[e[n - 1] as usize] += v;
        }
        out
    }

    /// Human-readable form with variables X, Y, Z, W (or x1..xn beyond four).
    pub fn display(&self) -> String {
        let n = self.nvars();
        let names: Vec<String> =
            if n <= 4 { ["X", "Y", "Z", "W"][..n].iter().map(|s| s.to_string()).collect() } else { (1..=n).map(|i| format!("x{i}")).collect() };
        let mut terms: Vec<(&Vec<u32>, &BigInt)> = self.coeffs.iter().collect();
        terms.sort_by(|a, b| b.0.cmp(a.0));
        let mut s = String::new();
        for (i, (e, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let mono: Vec<String> = e
                .iter()
                .zip(&names)
                .filter(|(p, _)| **p > 0)
                .map(|(p, v)| if *p == 1 { v.clone() } else { format!("{v}^{p}") })
                .collect();
            if !a.is_one() || mono.is_empty() {
                s.push_str(&a.to_string());
            }
            s.push_str(&mono.join(""));
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NormSolution {
    pub m: u32,
    /// +1 or -1.
    pub sign: i8,
    pub tuple: Vec<BigInt>,
    pub value: BigInt,
}

/// Integer roots of an integer polynomial with `|t| <= radius`, located
/// numerically and confirmed exactly.
fn integer_roots_in(c: &[BigInt], radius: i64) -> Vec<BigInt> {
    let mut c = c.to_vec();
    while c.len() > 1 && c.last().unwrap().is_zero() {
        c.pop();
    }
    let eval = |t: &BigInt| c.iter().rev().fold(BigInt::zero(), |acc, a| acc * t + a);
    if c.len() == 1 {
        return Vec::new();
    }
    if c.len() == 2 {
        let (q, r) = (-&c[0]).div_rem(&c[1]);
        return if r.is_zero() && q.abs() <= BigInt::from(radius) { vec![q] } else { Vec::new() };
    }
    let cf: Vec<f64> = c.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect();
    if cf.iter().any(|x| !x.is_finite()) {
        return (-radius..=radius).map(BigInt::from).filter(|t| eval(t).is_zero()).collect();
    }
    let mut out: Vec<BigInt> = Vec::new();
    for z in complex_roots(&cf) {
        if z.im.abs() > 1.0 + 1e-6 * z.re.abs() || z.re.abs() > radius as f64 + 2.0 {
            continue;
        }
        let r = z.re.round() as i64;
        for t in (r - 1)..=(r + 1) {
            if t.abs() > radius {
                continue;
            }
            let tb = BigInt::from(t);
            if !out.contains(&tb) && eval(&tb).is_zero() {
                out.push(tb);
            }
        }
    }
    out.sort();
    out
}

/// All `x` with `|x_i| <= radius` and `f(x) = +-l a^m`, `0 <= m <= max_m`,
/// sorted by `m` then tuple. The negative sign is skipped for totally
/// imaginary fields, where the norm is non-negative.
pub fn solve_norm_eq(
    k: &NumberField,
    nf: &NormForm,
    ell: &BigInt,
    a: &BigInt,
    max_m: u32,
    radius: i64,
) -> Result<Vec<NormSolution>> {
    if a.is_zero() || !ell.gcd(a).is_one() {
        return Err(Error::Hypothesis(format!("need l = {ell} prime to a = {a}")));
    }
    let n = nf.nvars();
    let signs: Vec<i8> = if k.is_totally_imaginary() { vec![1] } else { vec![1, -1] };
    let targets: Vec<(u32, i8, BigInt)> = (0..=max_m)
        .flat_map(|m| {
            let v = ell * a.pow(m);
            signs.iter().map(move |&s| (m, s, if s > 0 { v.clone() } else { -v.clone() })).collect::<Vec<_>>()
        })
        .collect();
    let heads: Vec<i64> = (-radius..=radius).collect();
    let mut sols: Vec<NormSolution> = heads
        .par_iter()
        .flat_map_iter(|&x1| {
            let mut found = Vec::new();
            let mut head = vec![BigInt::from(x1); n.saturating_sub(1)];
            if n == 1 {
                head.clear();
            }
            let width = (2 * radius + 1) as u64;
            let inner = width.pow(n.saturating_sub(2) as u32);
            let count = if n >= 2 { inner } else { 1 };
            for idx in 0..count {
                let mut r = idx;
                for h in head.iter_mut().skip(1) {
                    *h = BigInt::from((r % width) as i64 - radius);
                    r /= width;
                }
                let base = nf.last_var_poly(&head);
                for (m, s, t) in &targets {
                    let mut g = base.clone();
                    g[0] -= t;
                    for root in integer_roots_in(&g, radius) {
                        let mut tuple = head.clone();
                        tuple.push(root);
                        found.push(NormSolution { m: *m, sign: *s, tuple, value: t.clone() });
                    }
                }
            }
            found
        })
        .collect();
    // independent re-check through the field norm
    for s in &sols {
        let norm = k.norm(&nf.element(&s.tuple));
        if norm.numer() != &s.value || !norm.denom().is_one() {
            return Err(Error::Exactness(format!("norm form disagrees with the field norm at {:?}", s.tuple)));
        }
    }
    sols.sort();
    sols.dedup();
    Ok(sols)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossVerdict {
    /// Criterion true and a solution was found.
    Agree,
    /// Criterion false and no solution was found.
    AgreeNone,
    /// Criterion true, nothing found inside the search box.
    BoundedMiss,
    /// Criterion false but a solution exists.
    Fail,
}

#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub ell: BigInt,
    pub criterion: bool,
    pub hit: Option<NormSolution>,
    pub verdict: CrossVerdict,
}

/// Compare the degree-one split criterion with a bounded norm equation search.
#[allow(clippy::too_many_arguments)]
pub fn criterion_crosscheck(
    k: &NumberField,
    pic: &PicardGroup,
    cl: &ClassGroupData,
    nf: &NormForm,
    ell: &BigInt,
    a: &BigInt,
    max_m: u32,
    radius: i64,
) -> Result<CrossCheck> {
    if (a % ell).is_zero() {
        return Err(Error::Hypothesis(format!("{ell} divides a = {a}")));
    }
    if (pic.ring().order().index() % ell).is_zero() {
        return Err(Error::Hypothesis(format!("{ell} divides the order index")));
    }
    let criterion = splits_completely(k, pic, cl, ell, SplitMode::DegreeOneExists)?;
    let hit = solve_norm_eq(k, nf, ell, a, max_m, radius)?.into_iter().next();
    let verdict = match (criterion, hit.is_some()) {
        (true, true) => CrossVerdict::Agree,
        (false, false) => CrossVerdict::AgreeNone,
        (true, false) => CrossVerdict::BoundedMiss,
        (false, true) => CrossVerdict::Fail,
    };
    Ok(CrossCheck { ell: ell.clone(), criterion, hit, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classgroup::classgroup_imag_quadratic;
    use crate::ideal::tests::{example1, example2, ints, qs};
    use crate::picard::picard_group;
    use crate::picard::tests::example2_ring;
    use crate::ring::{NumberRing, Order};

    fn e(v: &[i64]) -> Elem {
        Elem::from_i64(v)
    }

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn power_basis(k: &NumberField) -> Vec<Elem> {
        let n = k.degree();
        let theta = k.theta();
        (0..n).map(|i| k.pow_u(&theta, i as u64)).collect()
    }

    #[test]
    fn example1_form() {
        let k = example1();
        let nf = expand_norm_form(&k, &[e(&[1, 0]), e(&[0, 1])]).unwrap();
        assert_eq!(nf.display(), "X^2 + 710Y^2");
        assert_eq!(nf.eval_i64(&[447, 11]), b(17) * b(7).pow(5));
    }

    #[test]
    fn gaussian_form() {
        let k = NumberField::new(ints(&[1, 0, 1]), vec![qs(&[(1, 1), (0, 1)]), qs(&[(0, 1), (1, 1)])]).unwrap();
        let nf = expand_norm_form(&k, &[e(&[1, 0]), e(&[0, 1])]).unwrap();
        assert_eq!(nf.display(), "X^2 + Y^2");
    }

    #[test]
    fn example2_form_identities() {
        let k = example2();
        let nf = expand_norm_form(&k, &power_basis(&k)).unwrap();
        assert_eq!(nf.eval_i64(&[1, 1, 0, 0]), b(61));
        assert_eq!(nf.eval_i64(&[1, 2, 0, 0]), b(781));
        assert_eq!(nf.eval_i64(&[2, 8, 3, 1]), b(131) * b(11).pow(3));
        assert_eq!(nf.coefficient(&[4, 0, 0, 0]), b(1));
        assert_eq!(nf.coefficient(&[0, 4, 0, 0]), b(45));
    }

    #[test]
    fn rank_deficient_basis() {
        let k = example1();
        assert!(matches!(expand_norm_form(&k, &[e(&[1, 0]), e(&[2, 0])]), Err(Error::RankDeficient)));
    }

    #[test]
    fn solver_example1() {
        let k = example1();
        let nf = expand_norm_form(&k, &[e(&[1, 0]), e(&[0, 1])]).unwrap();
        let s = solve_norm_eq(&k, &nf, &b(17), &b(7), 7, 2500).unwrap();
        assert!(s.iter().any(|s| s.m == 5 && s.tuple == vec![b(447), b(11)]));
        let s97 = solve_norm_eq(&k, &nf, &b(97), &b(7), 7, 2500).unwrap();
        assert!(s97.iter().any(|s| s.m == 7 && s.tuple == vec![b(1991), b(327)]));
        let s = solve_norm_eq(&k, &nf, &b(47), &b(7), 5, 500).unwrap();
        assert!(s.iter().any(|s| s.m == 3 && s.tuple == vec![b(69), b(4)]));
        assert!(solve_norm_eq(&k, &nf, &b(13), &b(7), 7, 2500).unwrap().is_empty());
    }

    #[test]
    fn solver_example2() {
        let k = example2();
        let nf = expand_norm_form(&k, &power_basis(&k)).unwrap();
        let s = solve_norm_eq(&k, &nf, &b(131), &b(11), 3, 8).unwrap();
        assert!(s.iter().any(|s| s.m == 3 && s.tuple == vec![b(2), b(8), b(3), b(1)]));
    }

    #[test]
    fn crosscheck_examples() {
        let k = example1();
        let cl = classgroup_imag_quadratic(&k).unwrap();
        let ring = NumberRing::from_integer(&k, Order::maximal(&k), &b(7)).unwrap();
        let pic = picard_group(&k, &ring, &cl).unwrap();
        let nf = expand_norm_form(&k, &[e(&[1, 0]), e(&[0, 1])]).unwrap();
        let c = criterion_crosscheck(&k, &pic, &cl, &nf, &b(17), &b(7), 7, 2500).unwrap();
        assert_eq!(c.verdict, CrossVerdict::Agree);
        let c = criterion_crosscheck(&k, &pic, &cl, &nf, &b(13), &b(7), 7, 2500).unwrap();
        assert_eq!(c.verdict, CrossVerdict::AgreeNone);

        let (k, cl, ring) = example2_ring();
        let pic = picard_group(&k, &ring, &cl).unwrap();
        let nf = expand_norm_form(&k, &power_basis(&k)).unwrap();
        let c = criterion_crosscheck(&k, &pic, &cl, &nf, &b(61), &b(11), 2, 3).unwrap();
        assert_eq!(c.verdict, CrossVerdict::Agree);
        assert_eq!(c.hit.unwrap().m, 0);
    }

    #[test]
    fn multiplicative_through_coords() {
        let k = example2();
        let nf = expand_norm_form(&k, &power_basis(&k)).unwrap();
        let g1 = nf.element(&ints(&[1, 2, 0, -1]));
        let g2 = nf.element(&ints(&[3, 0, 1, 1]));
        let x1 = nf.coords_of(&g1).unwrap();
        let x2 = nf.coords_of(&g2).unwrap();
        let x12 = nf.coords_of(&k.mul(&g1, &g2)).unwrap();
        assert_eq!(nf.eval(&x12), nf.eval(&x1) * nf.eval(&x2));
    }
}
