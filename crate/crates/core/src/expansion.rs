//! Expanded matrices Ω_μ(A) and the rank sequence ω_μ.
//!
//! Block `(i, d)` of Ω_μ(A) is the π^d coefficient matrix of π^i A, for
//! `0 ≤ i, d < μ`. The ranks ω_μ are Legendre conjugate to the minor
//! valuations ζ_k, and their increments count the Smith–McMillan exponents
//! below each threshold.

use serde::Serialize;

use crate::linalg::{ScalarMatrix, SeriesMatrix};
use crate::{Error, ZetaOutcome};

/// Everything the rank sequence says about a proper matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpansionProfile {
    /// ω_0, …, ω_{M+1}.
    pub omegas: Vec<u64>,
    /// ω_{M+1} − ω_M.
    pub rank: u64,
    /// α_1 ≤ … ≤ α_rank.
    pub exponents: Vec<u64>,
    /// ζ_0, …, ζ_rank.
    pub zetas: Vec<u64>,
}

fn size(coeffs: &[ScalarMatrix]) -> Result<usize, Error> {
    coeffs
        .first()
        .map(ScalarMatrix::rows)
        .ok_or_else(|| Error::Invalid("no coefficient matrices".into()))
}

/// Ω_μ(A) for `A = Σ_d coeffs[d] π^d`.
pub fn expanded_matrix(coeffs: &[ScalarMatrix], mu: usize) -> Result<ScalarMatrix, Error> {
    let n = size(coeffs)?;
    let field = coeffs[0].field().clone();
    let mut out = ScalarMatrix::zeros(field, mu * n, mu * n);
    if mu == 0 {
        return Ok(out);
    }
    let mut cur = SeriesMatrix::from_coeffs(coeffs, mu as i64)?;
    let ones = vec![1i64; n];
    for i in 0..mu {
        for d in i..mu {
            let block = cur.coeff_matrix(d as i64)?;
            for r in 0..n {
                for c in 0..n {
                    out.set(i * n + r, d * n + c, block.get(r, c).clone());
                }
            }
        }
        if i + 1 < mu {
            cur = cur.scale_left(&ones)?.truncate(mu as i64 - 1);
        }
    }
    Ok(out)
}

/// Leading `k × k` submatrix.
fn leading(m: &ScalarMatrix, k: usize) -> ScalarMatrix {
    let mut out = ScalarMatrix::zeros(m.field().clone(), k, k);
    for i in 0..k {
        for j in 0..k {
            out.set(i, j, m.get(i, j).clone());
        }
    }
    out
}

pub fn omega(coeffs: &[ScalarMatrix], mu: usize) -> Result<u64, Error> {
    Ok(expanded_matrix(coeffs, mu)?.rank() as u64)
}

/// ω_0, …, ω_top, using that Ω_μ is the leading block of Ω_{μ+1}.
pub fn omegas(coeffs: &[ScalarMatrix], top: usize) -> Result<Vec<u64>, Error> {
    let n = size(coeffs)?;
    let big = expanded_matrix(coeffs, top)?;
    Ok((0..=top)
        .map(|mu| leading(&big, mu * n).rank() as u64)
        .collect())
}

/// ζ(A) from ω_M and ω_{M+1}.
///
/// When every Smith–McMillan exponent is at most M the rank increment
/// `ω_{M+1} − ω_M` is n and `Mn − ω_M = Σ α_i`. A value above M is
/// reported as InfiniteBeyond so that the outcome depends only on whether
/// ζ(A) ≤ M.
pub fn zeta_expand(coeffs: &[ScalarMatrix], budget: u64) -> Result<ZetaOutcome, Error> {
    let n = size(coeffs)? as u64;
    let m = budget as usize;
    let big = expanded_matrix(coeffs, m + 1)?;
    let w_m = leading(&big, m * n as usize).rank() as u64;
    let w_m1 = big.rank() as u64;
    if w_m1 - w_m < n || budget * n - w_m > budget {
        Ok(ZetaOutcome::InfiniteBeyond(budget))
    } else {
        Ok(ZetaOutcome::Zeta(budget * n - w_m))
    }
}

/// ζ_k = max_μ (kμ − ω_μ) over `μ ∈ [0, M+1]`, for `k ∈ [0, r]`.
pub fn zetas_from_omegas(omegas: &[u64]) -> Vec<u64> {
    let top = omegas.len() - 1;
    let r = if top == 0 {
        0
    } else {
        omegas[top] - omegas[top - 1]
    };
    (0..=r as i64)
        .map(|k| {
            omegas
                .iter()
                .enumerate()
                .map(|(mu, &w)| k * mu as i64 - w as i64)
                .max()
                .expect("ω_0 is present") as u64
        })
        .collect()
}

pub fn zeta_sequence(coeffs: &[ScalarMatrix], budget: u64) -> Result<Vec<u64>, Error> {
    Ok(zetas_from_omegas(&omegas(coeffs, budget as usize + 1)?))
}

/// ω_μ = max_k (kμ − ζ_k), the inverse transform.
pub fn omegas_from_zetas(zetas: &[u64], top: usize) -> Vec<u64> {
    (0..=top as i64)
        .map(|mu| {
            zetas
                .iter()
                .enumerate()
                .map(|(k, &z)| k as i64 * mu - z as i64)
                .max()
                .expect("ζ_0 is present") as u64
        })
        .collect()
}

/// Smith–McMillan data from the rank sequence, with the exponents derived
/// twice (from ω increments and from ζ increments) and compared.
pub fn smith_exponents(coeffs: &[ScalarMatrix], budget: u64) -> Result<ExpansionProfile, Error> {
    let omegas = omegas(coeffs, budget as usize + 1)?;
    profile_from_omegas(omegas)
}

pub(crate) fn profile_from_omegas(omegas: Vec<u64>) -> Result<ExpansionProfile, Error> {
    let zetas = zetas_from_omegas(&omegas);
    let rank = zetas.len() as u64 - 1;
    let counts: Vec<u64> = omegas.windows(2).map(|w| w[1] - w[0]).collect();
    let mut exponents = Vec::with_capacity(rank as usize);
    for i in 1..=rank {
        let d = counts
            .iter()
            .position(|&c| c >= i)
            .ok_or_else(|| Error::Inconsistent(format!("no threshold reaches count {i}")))?;
        exponents.push(d as u64);
    }
    let from_zetas: Vec<u64> = zetas.windows(2).map(|w| w[1] - w[0]).collect();
    if from_zetas != exponents {
        return Err(Error::Inconsistent(format!(
            "exponents {exponents:?} from rank increments, {from_zetas:?} from minor valuations"
        )));
    }
    Ok(ExpansionProfile {
        omegas,
        rank,
        exponents,
        zetas,
    })
}
