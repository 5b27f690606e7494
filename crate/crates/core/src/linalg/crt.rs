use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::hnf::xgcd;
use crate::error::{Error, Result};

/// Solves `x = r_i mod m_i` for pairwise coprime positive moduli.
///
/// Returns `(x, M)` with `0 <= x < M = prod m_i`.
pub fn crt_solve(residues: &[(BigInt, BigInt)]) -> Result<(BigInt, BigInt)> {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (r, mi) in residues {
        if mi <= &BigInt::zero() {
            return Err(Error::Input("CRT modulus must be positive".into()));
        }
        let (g, s, _) = xgcd(&m, mi);
        if !g.is_one() {
            return Err(Error::NonCoprimeModuli);
        }
        // x + m*t = r mod mi  =>  t = (r - x) * m^{-1} mod mi
        let t = ((r - &x) * s).mod_floor(mi);
        x += &m * t;
        m *= mi;
        x = x.mod_floor(&m);
    }
    Ok((x, m))
}
