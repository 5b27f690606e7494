//! TOML descriptions of fields and number rings.
//!
//! A field file holds `poly` (low degree first, monic), `basis` (integral
//! basis over the power basis, entries as integers or `"p/q"` strings) and
//! optional `[[primes]]` blocks supplying decompositions of index divisors.
//!
//! A ring file points at a field file and gives `order_basis` (elements in
//! integral-basis coordinates), either `a` or `epsilon`, and the optional
//! `[classgroup]`, `[units]`, `[solver]` and `[class_field]` blocks.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Deserialize;

use crate::classgroup::{self, ClassGroupData, ClassGroupInput, RelationInput, DEFAULT_PIP_RADIUS};
use crate::error::{Error, Result};
use crate::field::{Elem, NumberField, SuppliedPrime};
use crate::linalg::IntMat;
use crate::normform::{expand_norm_form, NormForm};
use crate::prime::decompose_prime;
use crate::ring::{NumberRing, Order};

type Q = BigRational;

/// An integer or rational entry: a TOML integer or a string `"n"` / `"p/q"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    pub fn to_q(&self) -> Result<Q> {
        match self {
            Num::Int(v) => Ok(Q::from_integer(BigInt::from(*v))),
            Num::Str(s) => {
                let s = s.trim();
                let parse = |t: &str| t.trim().parse::<BigInt>().map_err(|_| Error::Input(format!("not a number: {s:?}")));
                match s.split_once('/') {
                    Some((p, q)) => {
                        let q = parse(q)?;
                        if q.is_zero() {
                            return Err(Error::Input(format!("zero denominator in {s:?}")));
                        }
                        Ok(Q::new(parse(p)?, q))
                    }
                    None => Ok(Q::from_integer(parse(s)?)),
                }
            }
        }
    }

    pub fn to_int(&self) -> Result<BigInt> {
        let q = self.to_q()?;
        if !q.is_integer() {
            return Err(Error::Input(format!("expected an integer, got {q}")));
        }
        Ok(q.to_integer())
    }
}

fn ints(v: &[Num]) -> Result<Vec<BigInt>> {
    v.iter().map(Num::to_int).collect()
}

fn elem(v: &[Num], n: usize, what: &str) -> Result<Elem> {
    if v.len() != n {
        return Err(Error::Input(format!("{what}: expected {n} coordinates, got {}", v.len())));
    }
    let q: Vec<Q> = v.iter().map(Num::to_q).collect::<Result<_>>()?;
    Ok(Elem::from_q(&q))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PrimeSpec {
    p: Num,
    pi: Vec<Num>,
    e: u32,
    f: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldFile {
    #[serde(default)]
    name: Option<String>,
    poly: Vec<Num>,
    basis: Vec<Vec<Num>>,
    #[serde(default)]
    primes: Vec<PrimeSpec>,
}

#[derive(Clone, Debug)]
pub struct FieldSpec {
    pub name: Option<String>,
    pub path: PathBuf,
    pub field: NumberField,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn parse_toml<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

pub fn parse_field(text: &str, path: &Path) -> Result<FieldSpec> {
    let f: FieldFile = parse_toml(path, text)?;
    let poly = ints(&f.poly)?;
    let basis: Vec<Vec<Q>> = f.basis.iter().map(|b| b.iter().map(Num::to_q).collect::<Result<_>>()).collect::<Result<_>>()?;
    let mut field = NumberField::new(poly, basis).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let n = field.degree();
    let mut grouped: std::collections::BTreeMap<BigInt, Vec<SuppliedPrime>> = Default::default();
    for (i, ps) in f.primes.iter().enumerate() {
        let pi = elem(&ps.pi, n, &format!("primes[{i}].pi"))?;
        grouped.entry(ps.p.to_int()?).or_default().push(SuppliedPrime { pi, e: ps.e, f: ps.f });
    }
    for (p, list) in grouped {
        field.supply_primes(p.clone(), list);
        decompose_prime(&field, &p).map_err(|e| Error::Input(format!("{}: supplied decomposition of {p}: {e}", path.display())))?;
    }
    Ok(FieldSpec { name: f.name, path: path.to_path_buf(), field })
}

pub fn load_field(path: &Path) -> Result<FieldSpec> {
    parse_field(&read(path)?, path)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GenSpec {
    p: Num,
    pi: Vec<Num>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationSpec {
    p: Num,
    pi: Vec<Num>,
    dlog: Vec<Num>,
    gamma: Vec<Num>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassGroupBlock {
    generators: Vec<GenSpec>,
    orders: Vec<Num>,
    witnesses: Vec<Vec<Num>>,
    #[serde(default)]
    relations: Vec<RelationSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitsBlock {
    #[serde(default)]
    fundamental: Vec<Vec<Num>>,
}

/// Search bounds used by the norm equation solver and scans.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBounds {
    #[serde(default = "default_radius")]
    pub radius: i64,
    #[serde(default = "default_max_m")]
    pub max_m: u32,
    #[serde(default = "default_pip")]
    pub pip_radius: f64,
    #[serde(default = "default_range")]
    pub range: u64,
}

fn default_radius() -> i64 {
    50
}
fn default_max_m() -> u32 {
    4
}
fn default_pip() -> f64 {
    DEFAULT_PIP_RADIUS
}
fn default_range() -> u64 {
    100
}

impl Default for SolverBounds {
    fn default() -> Self {
        SolverBounds { radius: default_radius(), max_m: default_max_m(), pip_radius: default_pip(), range: default_range() }
    }
}

/// A polynomial claimed to define the ring class field over Q.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassFieldBlock {
    poly: Vec<Num>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RingFile {
    #[serde(default)]
    name: Option<String>,
    field: String,
    #[serde(default)]
    order_basis: Option<Vec<Vec<Num>>>,
    #[serde(default)]
    a: Option<Num>,
    #[serde(default)]
    epsilon: Option<Vec<Num>>,
    #[serde(default)]
    classgroup: Option<ClassGroupBlock>,
    #[serde(default)]
    units: Option<UnitsBlock>,
    #[serde(default)]
    solver: Option<SolverBounds>,
    #[serde(default)]
    class_field: Option<ClassFieldBlock>,
}

#[derive(Clone, Debug)]
pub struct RingSpec {
    pub name: Option<String>,
    pub field: FieldSpec,
    /// Order basis elements in integral-basis coordinates.
    pub order_basis: Vec<Elem>,
    pub ring: NumberRing,
    /// The integer `a` with `R = o[1/a]`; `|N(epsilon)|` when `epsilon` is given.
    pub a: BigInt,
    pub classgroup_input: Option<ClassGroupInput>,
    pub fundamental_units: Vec<Elem>,
    pub solver: SolverBounds,
    pub class_field_poly: Option<Vec<BigInt>>,
}

pub fn parse_ring(text: &str, path: &Path) -> Result<RingSpec> {
    let r: RingFile = parse_toml(path, text)?;
    let fpath = path.parent().unwrap_or(Path::new(".")).join(&r.field);
    let field = load_field(&fpath)?;
    let k = &field.field;
    let n = k.degree();
    let ctx = |e: Error| Error::Input(format!("{}: {e}", path.display()));

    let order_basis: Vec<Elem> = match &r.order_basis {
        Some(b) => b.iter().enumerate().map(|(i, v)| elem(v, n, &format!("order_basis[{i}]"))).collect::<Result<_>>()?,
        None => (0..n).map(|i| {
            let mut v = vec![BigInt::from(0); n];
            v[i] = BigInt::one();
            Elem::from_ints(v)
        }).collect(),
    };
    if order_basis.len() != n || order_basis.iter().any(|b| !b.is_integral()) {
        return Err(Error::Input(format!("{}: order_basis needs {n} integral elements", path.display())));
    }
    let basis_mat = IntMat::from_cols(n, &order_basis.iter().map(|b| b.num().to_vec()).collect::<Vec<_>>());
    let order = Order::new(k, &basis_mat).map_err(ctx)?;

    let (ring, a) = match (&r.a, &r.epsilon) {
        (Some(a), None) => {
            let a = a.to_int()?;
            (NumberRing::from_integer(k, order, &a).map_err(ctx)?, a.abs())
        }
        (None, Some(eps)) => {
            let eps = elem(eps, n, "epsilon")?;
            let norm = k.norm(&eps);
            if !norm.is_integer() {
                return Err(Error::Input(format!("{}: epsilon must be integral", path.display())));
            }
            let a = norm.to_integer().abs();
            (NumberRing::new(k, order, eps).map_err(ctx)?, a)
        }
        (None, None) => (NumberRing::new(k, order, k.one()).map_err(ctx)?, BigInt::one()),
        (Some(_), Some(_)) => return Err(Error::Input(format!("{}: give either a or epsilon, not both", path.display()))),
    };

    let classgroup_input = match &r.classgroup {
        None => None,
        Some(c) => {
            let generators = c
                .generators
                .iter()
                .enumerate()
                .map(|(i, g)| Ok((g.p.to_int()?, elem(&g.pi, n, &format!("classgroup.generators[{i}].pi"))?)))
                .collect::<Result<_>>()?;
            let witnesses = c.witnesses.iter().enumerate().map(|(i, w)| elem(w, n, &format!("classgroup.witnesses[{i}]"))).collect::<Result<_>>()?;
            let relations = c
                .relations
                .iter()
                .enumerate()
                .map(|(i, rel)| {
                    Ok(RelationInput {
                        p: rel.p.to_int()?,
                        pi: elem(&rel.pi, n, &format!("classgroup.relations[{i}].pi"))?,
                        dlog: ints(&rel.dlog)?,
                        gamma: elem(&rel.gamma, n, &format!("classgroup.relations[{i}].gamma"))?,
                    })
                })
                .collect::<Result<_>>()?;
            Some(ClassGroupInput { generators, orders: ints(&c.orders)?, witnesses, relations })
        }
    };
    let fundamental_units = match &r.units {
        None => Vec::new(),
        Some(u) => u.fundamental.iter().enumerate().map(|(i, v)| elem(v, n, &format!("units.fundamental[{i}]"))).collect::<Result<_>>()?,
    };
    let class_field_poly = r.class_field.as_ref().map(|c| ints(&c.poly)).transpose()?;
    Ok(RingSpec {
        name: r.name,
        field,
        order_basis,
        ring,
        a,
        classgroup_input,
        fundamental_units,
        solver: r.solver.unwrap_or_default(),
        class_field_poly,
    })
}

pub fn load_ring(path: &Path) -> Result<RingSpec> {
    parse_ring(&read(path)?, path)
}

/// A field file or a ring file, told apart by the `field` key of a ring file.
#[derive(Clone, Debug)]
pub enum Spec {
    Field(FieldSpec),
    Ring(Box<RingSpec>),
}

impl Spec {
    pub fn field(&self) -> &FieldSpec {
        match self {
            Spec::Field(f) => f,
            Spec::Ring(r) => &r.field,
        }
    }
}

pub fn load_any(path: &Path) -> Result<Spec> {
    let text = read(path)?;
    let table: toml::Table = parse_toml(path, &text)?;
    if table.contains_key("field") {
        Ok(Spec::Ring(Box::new(parse_ring(&text, path)?)))
    } else {
        Ok(Spec::Field(parse_field(&text, path)?))
    }
}

impl RingSpec {
    pub fn k(&self) -> &NumberField {
        &self.field.field
    }

    /// Class group from the verified block, or computed when the field allows it.
    pub fn classgroup(&self, pip_radius: Option<f64>) -> Result<ClassGroupData> {
        let r = pip_radius.unwrap_or(self.solver.pip_radius);
        classgroup::classgroup(self.k(), self.classgroup_input.as_ref(), self.fundamental_units.clone(), r)
    }

    /// Norm form over the order basis.
    pub fn norm_form(&self) -> Result<NormForm> {
        expand_norm_form(self.k(), &self.order_basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(Num::Str("-3/6".into()).to_q().unwrap(), Q::new(BigInt::from(-1), BigInt::from(2)));
        assert_eq!(Num::Int(7).to_int().unwrap(), BigInt::from(7));
        assert!(Num::Str("1/2".into()).to_int().is_err());
        assert!(Num::Str("1/0".into()).to_q().is_err());
        assert!(Num::Str("x".into()).to_q().is_err());
    }

    #[test]
    fn field_text() {
        let f = parse_field("poly = [1, 0, 1]\nbasis = [[1, 0], [0, 1]]\n", Path::new("gauss.toml")).unwrap();
        assert_eq!(f.field.disc(), &BigInt::from(-4));
        let err = parse_field("poly = [1, 0, 1]\nbasis = [[1, 0], [0, \"1/2\"]]\n", Path::new("bad.toml")).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
        let err = parse_field("poly = [1, 0, 1]\nbasis = [[1, 0]\n", Path::new("bad.toml")).unwrap_err();
        assert!(err.to_string().contains("line"), "{err}");
    }
}
