//! Combinatorial relaxation: repeatedly compare ζ with its matching lower
//! bound and modify the matrix until the bound is attained.

use serde::Serialize;

use crate::linalg::{LinalgError, ScalarMatrix, SeriesMatrix};
use crate::matching::{min_weight_pm_dual, DualValue, WeightedBipartite};
use crate::series::Valuation;
use crate::ZetaOutcome;

/// One pass of the main loop, reported after the tightness test.
#[derive(Clone, Debug, Serialize)]
pub struct RelaxStep {
    pub iteration: usize,
    /// Accumulated lower bound after this pass.
    pub gamma: u64,
    /// Minimum perfect-matching weight of the current matrix.
    pub matching_value: u64,
    pub dp: Vec<i64>,
    pub dq: Vec<i64>,
    /// Rank of the tight coefficient matrix.
    pub tight_rank: usize,
    /// The scaled matrix whose π⁰ coefficient was tested.
    #[serde(skip)]
    pub scaled: SeriesMatrix,
}

/// Support graph of a proper series matrix; entries that vanish to
/// precision become absent edges.
pub fn weighted_graph(c: &SeriesMatrix) -> WeightedBipartite {
    let weights = c
        .valuations()
        .into_iter()
        .map(|v| match v {
            Valuation::Known(w) => Some(w),
            Valuation::AtLeast(_) => None,
        })
        .collect();
    WeightedBipartite::new(c.n(), weights).expect("proper matrices have nonnegative weights")
}

pub fn zeta_comb_relax(coeffs: &[ScalarMatrix], budget: u64) -> Result<ZetaOutcome, LinalgError> {
    zeta_comb_relax_observed(coeffs, budget, |_| {})
}

/// ζ of `A = Σ_d coeffs[d] π^d` when it is at most `budget`.
///
/// `C` is always an exact π-polynomial (the input truncated at the budget,
/// then images under K-matrices and π-scalings), so before scaling each
/// entry is cut or zero-padded to the horizon that leaves exactly
/// `budget − γ + 1` known coefficients after scaling.
pub fn zeta_comb_relax_observed(
    coeffs: &[ScalarMatrix],
    budget: u64,
    mut observe: impl FnMut(&RelaxStep),
) -> Result<ZetaOutcome, LinalgError> {
    let m = budget as i64;
    let keep = coeffs.len().min(budget as usize + 1);
    let mut c = SeriesMatrix::from_coeffs(&coeffs[..keep], m + 1)?;
    let n = c.n();
    let mut gamma = 0i64;
    for iteration in 0.. {
        let g = weighted_graph(&c);
        let dual = min_weight_pm_dual(&g, Some(m - gamma));
        let value = match dual.value {
            DualValue::Finite(v) => v,
            DualValue::Infinite | DualValue::ExceedsThreshold => {
                return Ok(ZetaOutcome::InfiniteBeyond(budget))
            }
        };
        gamma += value;
        let p = m - gamma + 1;
        let padded = c.map(|i, j, s| s.with_exact_prec(p + dual.dp[i] + dual.dq[j]));
        let neg_dp: Vec<i64> = dual.dp.iter().map(|x| -x).collect();
        let neg_dq: Vec<i64> = dual.dq.iter().map(|x| -x).collect();
        let b = padded.scale_left(&neg_dp)?.scale_right(&neg_dq)?;
        debug_assert!(b.entries().iter().all(|s| s.prec() == p));
        let sharp = b.coeff_matrix(0)?;
        let (u, r) = sharp.zero_row_transform()?;
        observe(&RelaxStep {
            iteration,
            gamma: gamma as u64,
            matching_value: value as u64,
            dp: dual.dp,
            dq: dual.dq,
            tight_rank: r,
            scaled: b.clone(),
        });
        if r == n {
            return Ok(ZetaOutcome::Zeta(gamma as u64));
        }
        c = b.left_mul_scalar(&u)?;
    }
    unreachable!("the loop returns once γ exceeds the budget")
}
