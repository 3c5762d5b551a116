//! Skew polynomial matrices `A = Σ_d A_d s^d` over `K[s; σ, δ]`.
//!
//! With π = s⁻¹ the matrix `A s^{−ℓ} = Σ_d A_d π^{ℓ−d}` is proper and
//! `deg Det A = ℓn − ζ(A s^{−ℓ})`, where `ζ(A s^{−ℓ}) ≤ ℓn` whenever A is
//! nonsingular. Every query below reduces to a ζ computation on that
//! proper matrix.

use std::sync::Arc;
use std::thread;

use serde::Serialize;

use crate::expansion::{smith_exponents, zeta_expand, ExpansionProfile};
use crate::field::{FieldSpec, Scalar, Twist};
use crate::linalg::{series_diagonalize, ScalarMatrix, SeriesMatrix};
use crate::relax::zeta_comb_relax;
use crate::series::same_field;
use crate::{Error, ZetaOutcome};

/// Which ζ engine to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Algorithm {
    Relax,
    Expand,
    Oracle,
    /// Run all three and require identical answers.
    All,
}

/// ζ of `Σ_d coeffs[d] π^d` with budget `M`.
pub fn zeta(coeffs: &[ScalarMatrix], budget: u64, algo: Algorithm) -> Result<ZetaOutcome, Error> {
    match algo {
        Algorithm::Relax => Ok(zeta_comb_relax(coeffs, budget)?),
        Algorithm::Expand => zeta_expand(coeffs, budget),
        Algorithm::Oracle => zeta_oracle(coeffs, budget),
        Algorithm::All => {
            let (r, e, o) = thread::scope(|s| {
                let r = s.spawn(|| zeta(coeffs, budget, Algorithm::Relax));
                let e = s.spawn(|| zeta(coeffs, budget, Algorithm::Expand));
                let o = zeta(coeffs, budget, Algorithm::Oracle);
                (r.join(), e.join(), o)
            });
            let r = r.expect("relaxation thread panicked")?;
            let e = e.expect("expansion thread panicked")?;
            let o = o?;
            if r == e && e == o {
                Ok(r)
            } else {
                Err(Error::Disagreement(format!(
                    "relax {r:?}, expand {e:?}, oracle {o:?}"
                )))
            }
        }
    }
}

/// Runs the diagonalization at budgets 0, 1, 3, 7, … up to `budget`. A run
/// at budget m on the input cut to m + 1 terms finds ζ exactly when ζ ≤ m,
/// and the small runs avoid carrying long series through the elimination.
fn zeta_oracle(coeffs: &[ScalarMatrix], budget: u64) -> Result<ZetaOutcome, Error> {
    let mut m = 0u64;
    loop {
        let m_now = m.min(budget);
        let keep = coeffs.len().min(m_now as usize + 1);
        let a = SeriesMatrix::from_coeffs(&coeffs[..keep], m_now as i64 + 1)?;
        match series_diagonalize(&a, m_now)?.outcome() {
            ZetaOutcome::Zeta(z) => return Ok(ZetaOutcome::Zeta(z)),
            ZetaOutcome::InfiniteBeyond(_) if m_now == budget => {
                return Ok(ZetaOutcome::InfiniteBeyond(budget))
            }
            ZetaOutcome::InfiniteBeyond(_) => m = 2 * m + 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DegDet {
    Deg(i64),
    /// A is singular.
    MinusInfinity,
    /// A user budget below ℓn was exceeded: deg Det A is less than this
    /// value (possibly −∞).
    Below(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrdDet {
    Ord(u64),
    /// A is singular.
    PlusInfinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Dimension {
    Dim(u64),
    /// A is singular; the solution space is infinite dimensional.
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewPolyMatrix {
    field: Arc<FieldSpec>,
    n: usize,
    coeffs: Vec<ScalarMatrix>,
}

impl SkewPolyMatrix {
    /// `coeffs[d]` is `A_d`. Trailing zero coefficients are dropped.
    pub fn new(field: Arc<FieldSpec>, mut coeffs: Vec<ScalarMatrix>) -> Result<Self, Error> {
        let n = coeffs
            .first()
            .map(ScalarMatrix::rows)
            .ok_or_else(|| Error::Invalid("no coefficient matrices".into()))?;
        if n == 0 {
            return Err(Error::Invalid("empty matrix".into()));
        }
        for c in &coeffs {
            if c.rows() != n || c.cols() != n {
                return Err(Error::Invalid("coefficient matrices must be n×n".into()));
            }
            if !same_field(c.field(), &field) {
                return Err(Error::Invalid(
                    "coefficient matrix over another field".into(),
                ));
            }
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(ScalarMatrix::is_zero) {
            coeffs.pop();
        }
        Ok(SkewPolyMatrix { field, n, coeffs })
    }

    /// Build from entries given as ascending coefficient lists in s.
    pub fn from_entries(
        field: Arc<FieldSpec>,
        entries: &[Vec<Vec<Scalar>>],
    ) -> Result<Self, Error> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("matrix must be square and nonempty".into()));
        }
        let len = entries
            .iter()
            .flatten()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
            .max(1);
        let mut coeffs = vec![ScalarMatrix::zeros(field.clone(), n, n); len];
        for (i, row) in entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                for (d, c) in e.iter().enumerate() {
                    if !field.contains(c) {
                        return Err(Error::Invalid(format!(
                            "entry ({i}, {j}) is not in {}",
                            field.describe()
                        )));
                    }
                    coeffs[d].set(i, j, c.clone());
                }
            }
        }
        SkewPolyMatrix::new(field, coeffs)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ScalarMatrix] {
        &self.coeffs
    }

    /// Entry `(i, j)` as ascending coefficients in s.
    pub fn entry(&self, i: usize, j: usize) -> Vec<Scalar> {
        self.coeffs.iter().map(|c| c.get(i, j).clone()).collect()
    }

    /// The default budget ℓn.
    pub fn default_budget(&self) -> u64 {
        (self.ell() * self.n) as u64
    }

    /// Coefficients of `A s^{−ℓ}` in π: the π^k coefficient is `A_{ℓ−k}`.
    pub fn proper_coeffs(&self) -> Vec<ScalarMatrix> {
        self.coeffs.iter().rev().cloned().collect()
    }

    /// The same coefficients read over another field (used for the
    /// commutative shadow and for reversals).
    pub fn over(&self, field: Arc<FieldSpec>) -> Result<SkewPolyMatrix, Error> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let entries = (0..self.n)
                    .flat_map(|i| (0..self.n).map(move |j| (i, j)))
                    .map(|(i, j)| c.get(i, j).clone())
                    .collect();
                ScalarMatrix::new(field.clone(), self.n, self.n, entries)
            })
            .collect::<Result<Vec<_>, _>>()?;
        SkewPolyMatrix::new(field, coeffs)
    }

    /// Product in `K[s; σ, δ]`, using `s b = σ(b) s + δ(b)`.
    pub fn mul(&self, o: &SkewPolyMatrix) -> Result<SkewPolyMatrix, Error> {
        if self.n != o.n || !same_field(&self.field, &o.field) {
            return Err(Error::Invalid("factors differ in size or field".into()));
        }
        let k = &self.field;
        let n = self.n;
        let len = self.ell() + o.ell() + 1;
        let mut out = vec![ScalarMatrix::zeros(k.clone(), n, n); len];
        for i in 0..n {
            for j in 0..n {
                let mut acc = vec![k.zero(); len];
                for m in 0..n {
                    for (e, b) in o.entry(m, j).iter().enumerate() {
                        if b.is_zero() {
                            continue;
                        }
                        // s^d b, built up one power at a time
                        let mut sb = vec![b.clone()];
                        for (d, a) in self.entry(i, m).iter().enumerate() {
                            if d > 0 {
                                sb = s_times(k, &sb);
                            }
                            if a.is_zero() {
                                continue;
                            }
                            for (p, c) in sb.iter().enumerate() {
                                acc[p + e] = &acc[p + e] + &(a * c);
                            }
                        }
                    }
                }
                for (d, c) in acc.into_iter().enumerate() {
                    out[d].set(i, j, c);
                }
            }
        }
        SkewPolyMatrix::new(k.clone(), out)
    }

    pub fn zeta(&self, budget: u64, algo: Algorithm) -> Result<ZetaOutcome, Error> {
        zeta(&self.proper_coeffs(), budget, algo)
    }

    pub fn deg_det(&self, algo: Algorithm) -> Result<DegDet, Error> {
        self.deg_det_with_budget(algo, None)
    }

    /// `deg Det A = ℓn − ζ(A s^{−ℓ})`. A budget below ℓn can only shrink
    /// the range in which a finite answer is reported.
    pub fn deg_det_with_budget(
        &self,
        algo: Algorithm,
        budget: Option<u64>,
    ) -> Result<DegDet, Error> {
        let ln = self.default_budget();
        let m = budget.unwrap_or(ln);
        Ok(match self.zeta(m, algo)? {
            ZetaOutcome::Zeta(z) => DegDet::Deg(ln as i64 - z as i64),
            ZetaOutcome::InfiniteBeyond(_) if m >= ln => DegDet::MinusInfinity,
            ZetaOutcome::InfiniteBeyond(_) => DegDet::Below(ln as i64 - m as i64),
        })
    }

    /// `ord Det A = ℓn − deg Det Â` with `Â = Σ_d A_d s'^{ℓ−d}` over
    /// `K[s'; σ⁻¹]`. Needs δ = 0.
    pub fn ord_det(&self, algo: Algorithm) -> Result<OrdDet, Error> {
        if self.field.twist().has_derivation() {
            return Err(Error::Unsupported(
                "ord Det is not a valuation when the derivation is nonzero".into(),
            ));
        }
        let rev = self.reversed()?;
        let ln = self.default_budget() as i64;
        match rev.deg_det(algo)? {
            DegDet::Deg(d) => {
                Ok(OrdDet::Ord(u64::try_from(ln - d).map_err(|_| {
                    Error::Inconsistent("negative order".into())
                })?))
            }
            DegDet::MinusInfinity => Ok(OrdDet::PlusInfinity),
            DegDet::Below(_) => unreachable!("default budget"),
        }
    }

    /// `Â = Σ_d A_d s'^{ℓ−d}` over `K[s'; σ⁻¹]`, whose degree determinant
    /// gives `ord Det A`. Needs δ = 0.
    pub fn reversed(&self) -> Result<SkewPolyMatrix, Error> {
        let rev_field = Arc::new(self.field.inverse_twist()?);
        let shadow = self.over(rev_field.clone())?;
        SkewPolyMatrix::new(rev_field, shadow.proper_coeffs())
    }

    /// Dimension of the solution space of `A y = 0` over an adequate
    /// extension: deg Det A for differential operators, deg Det A − ord Det A
    /// for shift and q-shift operators. The q-shift case applies the
    /// difference formula by analogy.
    pub fn solution_dimension(&self, algo: Algorithm) -> Result<Dimension, Error> {
        let deg = match self.field.twist() {
            Twist::Commutative => {
                return Err(Error::Unsupported(
                    "a commutative matrix does not define an operator".into(),
                ))
            }
            _ => self.deg_det(algo)?,
        };
        let DegDet::Deg(deg) = deg else {
            return Ok(Dimension::Infinite);
        };
        let dim = match self.field.twist() {
            Twist::Differential => deg,
            _ => match self.ord_det(algo)? {
                OrdDet::Ord(o) => deg - o as i64,
                OrdDet::PlusInfinity => {
                    return Err(Error::Inconsistent(
                        "nonsingular matrix with infinite order".into(),
                    ))
                }
            },
        };
        u64::try_from(dim)
            .map(Dimension::Dim)
            .map_err(|_| Error::Inconsistent(format!("negative dimension {dim}")))
    }

    /// Smith–McMillan data of `A s^{−ℓ}` with budget ℓn.
    pub fn smith_data(&self) -> Result<ExpansionProfile, Error> {
        smith_exponents(&self.proper_coeffs(), self.default_budget())
    }
}

/// `s · Σ c_k s^k = Σ (σ(c_k) s^{k+1} + δ(c_k) s^k)`.
fn s_times(k: &FieldSpec, p: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![k.zero(); p.len() + 1];
    for (i, c) in p.iter().enumerate() {
        out[i + 1] = &out[i + 1] + &k.sigma(c);
        let d = k.delta(c);
        if !d.is_zero() {
            out[i] = &out[i] + &d;
        }
    }
    out
}
