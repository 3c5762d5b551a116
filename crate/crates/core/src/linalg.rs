//! Matrices over K and over truncated series.

use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldSpec, Scalar};
use crate::series::{same_field, Series, SeriesError, Valuation};
use crate::ZetaOutcome;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrices belong to different fields")]
    FieldMismatch,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("left scaling by the negative power π^{0} is not available")]
    NegativeLeftExponent(i64),
    #[error("coefficient of π^{d} requested but entries are only known below π^{horizon}")]
    InsufficientPrecision { d: i64, horizon: i64 },
    #[error("entry ({0}, {1}) has negative valuation")]
    NotProper(usize, usize),
}

/// Dense row-major matrix over K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix {
    field: Arc<FieldSpec>,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn new(
        field: Arc<FieldSpec>,
        rows: usize,
        cols: usize,
        entries: Vec<Scalar>,
    ) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Dimension(format!(
                "{} entries for a {rows}×{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| !field.contains(e)) {
            return Err(LinalgError::FieldMismatch);
        }
        Ok(ScalarMatrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(field: Arc<FieldSpec>, rows: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Dimension("ragged rows".into()));
        }
        ScalarMatrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(field: Arc<FieldSpec>, rows: usize, cols: usize) -> Self {
        let z = field.zero();
        ScalarMatrix {
            field,
            rows,
            cols,
            entries: vec![z; rows * cols],
        }
    }

    pub fn identity(field: Arc<FieldSpec>, n: usize) -> Self {
        let mut m = ScalarMatrix::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = m.field.one();
        }
        m
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, o: &ScalarMatrix) -> Result<ScalarMatrix, LinalgError> {
        if self.cols != o.rows {
            return Err(LinalgError::Dimension(format!(
                "{}×{} times {}×{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        if !same_field(&self.field, &o.field) {
            return Err(LinalgError::FieldMismatch);
        }
        let mut out = ScalarMatrix::zeros(self.field.clone(), self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let s = out.get(i, j) + &(a * b);
                        out.set(i, j, s);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, o: &ScalarMatrix) -> Result<ScalarMatrix, LinalgError> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(LinalgError::Dimension(
                "sum of differently shaped matrices".into(),
            ));
        }
        let entries = self
            .entries
            .iter()
            .zip(&o.entries)
            .map(|(a, b)| a + b)
            .collect();
        ScalarMatrix::new(self.field.clone(), self.rows, self.cols, entries)
    }

    /// Rank by exact Gaussian elimination.
    ///
    /// Within a column the pivot is the nonzero entry of smallest
    /// [`Scalar::weight`]; this only affects the size of intermediate
    /// values, never the rank.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let pivot = (rank..m.rows)
                .filter(|&r| !m.get(r, c).is_zero())
                .min_by_key(|&r| m.get(r, c).weight());
            let Some(p) = pivot else { continue };
            m.swap_rows(rank, p);
            m.eliminate_below(rank, c, None);
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Clear column `c` below row `p` with `row_r −= (m_rc / m_pc) row_p`,
    /// mirroring each operation on `track` when given.
    fn eliminate_below(&mut self, p: usize, c: usize, mut track: Option<&mut ScalarMatrix>) {
        let inv = self.get(p, c).inv().expect("pivot is nonzero");
        for r in p + 1..self.rows {
            if self.get(r, c).is_zero() {
                continue;
            }
            let f = self.get(r, c) * &inv;
            for j in c..self.cols {
                let x = self.get(p, j);
                if !x.is_zero() {
                    let v = self.get(r, j) - &(&f * x);
                    self.set(r, j, v);
                }
            }
            if let Some(u) = track.as_deref_mut() {
                for j in 0..u.cols {
                    let x = u.get(p, j);
                    if !x.is_zero() {
                        let v = u.get(r, j) - &(&f * x);
                        u.set(r, j, v);
                    }
                }
            }
        }
    }

    /// An invertible `U`, built from row swaps and row additions only, such
    /// that `U·M` has exactly `r = rank M` nonzero rows (the first `r`).
    /// Pivots are the first nonzero entry in each column.
    pub fn zero_row_transform(&self) -> Result<(ScalarMatrix, usize), LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Dimension(
                "zero_row_transform needs a square matrix".into(),
            ));
        }
        let mut m = self.clone();
        let mut u = ScalarMatrix::identity(self.field.clone(), self.rows);
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(rank, p);
            u.swap_rows(rank, p);
            m.eliminate_below(rank, c, Some(&mut u));
            rank += 1;
        }
        Ok((u, rank))
    }
}

/// Square matrix of truncated series.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesMatrix {
    field: Arc<FieldSpec>,
    n: usize,
    entries: Vec<Series>,
}

/// Outcome of the diagonalization oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagResult {
    /// Exponents `α_1 ≤ … ≤ α_n` of the diagonal form, with `zeta = Σ α_i`.
    Finite {
        exponents: Vec<u64>,
        zeta: u64,
    },
    SingularOrBeyond(u64),
}

impl DiagResult {
    pub fn outcome(&self) -> ZetaOutcome {
        match self {
            DiagResult::Finite { zeta, .. } => ZetaOutcome::Zeta(*zeta),
            DiagResult::SingularOrBeyond(m) => ZetaOutcome::InfiniteBeyond(*m),
        }
    }
}

impl SeriesMatrix {
    pub fn new(field: Arc<FieldSpec>, n: usize, entries: Vec<Series>) -> Result<Self, LinalgError> {
        if entries.len() != n * n {
            return Err(LinalgError::Dimension(format!(
                "{} entries for n = {n}",
                entries.len()
            )));
        }
        if entries.iter().any(|e| !same_field(e.field(), &field)) {
            return Err(LinalgError::FieldMismatch);
        }
        Ok(SeriesMatrix { field, n, entries })
    }

    /// `Σ_d coeffs[d] π^d`, exact, stored to horizon `prec`.
    pub fn from_coeffs(coeffs: &[ScalarMatrix], prec: i64) -> Result<Self, LinalgError> {
        let first = coeffs
            .first()
            .ok_or_else(|| LinalgError::Dimension("no coefficient matrices".into()))?;
        let n = first.rows;
        let field = first.field.clone();
        for c in coeffs {
            if c.rows != n || c.cols != n {
                return Err(LinalgError::Dimension(
                    "coefficient matrices differ in shape".into(),
                ));
            }
            if !same_field(&c.field, &field) {
                return Err(LinalgError::FieldMismatch);
            }
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let terms: Vec<Scalar> = coeffs.iter().map(|c| c.get(i, j).clone()).collect();
                entries.push(Series::from_terms(field.clone(), &terms, prec));
            }
        }
        Ok(SeriesMatrix { field, n, entries })
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Series {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: Series) {
        self.entries[i * self.n + j] = s;
    }

    pub fn entries(&self) -> &[Series] {
        &self.entries
    }

    /// Smallest entry horizon.
    pub fn horizon(&self) -> i64 {
        self.entries
            .iter()
            .map(Series::prec)
            .min()
            .unwrap_or(i64::MAX)
    }

    pub fn valuations(&self) -> Vec<Valuation> {
        self.entries.iter().map(Series::valuation).collect()
    }

    pub fn map(&self, f: impl Fn(usize, usize, &Series) -> Series) -> SeriesMatrix {
        let n = self.n;
        let entries = (0..n * n)
            .map(|k| f(k / n, k % n, &self.entries[k]))
            .collect();
        SeriesMatrix {
            field: self.field.clone(),
            n,
            entries,
        }
    }

    pub fn truncate(&self, m: i64) -> SeriesMatrix {
        self.map(|_, _, s| s.truncate(m))
    }

    /// `U·B`: since K sits left of π, each π-coefficient matrix is multiplied
    /// by `U`.
    pub fn left_mul_scalar(&self, u: &ScalarMatrix) -> Result<SeriesMatrix, LinalgError> {
        if u.rows != self.n || u.cols != self.n {
            return Err(LinalgError::Dimension("U must be n×n".into()));
        }
        if !same_field(&u.field, &self.field) {
            return Err(LinalgError::FieldMismatch);
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let prec = (0..n).map(|k| self.get(k, j).prec()).min().unwrap_or(0);
                let mut acc = Series::zero(self.field.clone(), prec);
                for k in 0..n {
                    let c = u.get(i, k);
                    if !c.is_zero() {
                        acc = acc.add(&self.get(k, j).scalar_left_mul(c)?)?;
                    }
                }
                entries.push(acc);
            }
        }
        Ok(SeriesMatrix {
            field: self.field.clone(),
            n,
            entries,
        })
    }

    /// Row `i` becomes `π^{e_i} · row_i`. Exponents must be nonnegative.
    pub fn scale_left(&self, e: &[i64]) -> Result<SeriesMatrix, LinalgError> {
        if e.len() != self.n {
            return Err(LinalgError::Dimension("exponent vector length".into()));
        }
        if let Some(&bad) = e.iter().find(|&&x| x < 0) {
            return Err(LinalgError::NegativeLeftExponent(bad));
        }
        Ok(self.map(|i, _, s| s.left_mul_pi_pow(e[i] as u64)))
    }

    /// Column `j` becomes `col_j · π^{e_j}`.
    pub fn scale_right(&self, e: &[i64]) -> Result<SeriesMatrix, LinalgError> {
        if e.len() != self.n {
            return Err(LinalgError::Dimension("exponent vector length".into()));
        }
        Ok(self.map(|_, j, s| s.right_shift(e[j])))
    }

    /// Matrix of `π^d` coefficients.
    pub fn coeff_matrix(&self, d: i64) -> Result<ScalarMatrix, LinalgError> {
        let horizon = self.horizon();
        if d >= horizon {
            return Err(LinalgError::InsufficientPrecision { d, horizon });
        }
        let entries = self
            .entries
            .iter()
            .map(|s| s.coeff(d).expect("below horizon"))
            .collect();
        ScalarMatrix::new(self.field.clone(), self.n, self.n, entries)
    }

    pub fn mul(&self, o: &SeriesMatrix) -> Result<SeriesMatrix, LinalgError> {
        if self.n != o.n {
            return Err(LinalgError::Dimension("product of different sizes".into()));
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: Option<Series> = None;
                for k in 0..n {
                    let t = self.get(i, k).mul(o.get(k, j))?;
                    acc = Some(match acc {
                        None => t,
                        Some(a) => a.add(&t)?,
                    });
                }
                entries.push(acc.expect("n >= 1"));
            }
        }
        SeriesMatrix::new(self.field.clone(), n, entries)
    }
}

/// Left multiplication by a scalar matrix (each π-coefficient is multiplied).
pub fn mat_mul_scalar_series(
    u: &ScalarMatrix,
    b: &SeriesMatrix,
) -> Result<SeriesMatrix, LinalgError> {
    b.left_mul_scalar(u)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `D(π^e)·B` or `B·D(π^e)`.
pub fn diag_scale(
    b: &SeriesMatrix,
    side: Side,
    exponents: &[i64],
) -> Result<SeriesMatrix, LinalgError> {
    match side {
        Side::Left => b.scale_left(exponents),
        Side::Right => b.scale_right(exponents),
    }
}

pub fn coeff_matrix(b: &SeriesMatrix, d: i64) -> Result<ScalarMatrix, LinalgError> {
    b.coeff_matrix(d)
}

/// Smith–McMillan exponents by elimination with a minimum-valuation pivot.
///
/// Everything is truncated to horizon `M + 1`. The pivot `d` has the
/// smallest valuation `v` in the current block, so each update
/// `a_ij − (a_i0 d⁻¹)·a_0j` stays exact to that absolute horizon. Clearing
/// the pivot row by column operations does not touch the remaining block
/// and is skipped.
pub fn series_diagonalize(a: &SeriesMatrix, budget: u64) -> Result<DiagResult, LinalgError> {
    let m = budget as i64;
    let n = a.n;
    let horizon = a.horizon();
    if horizon < m + 1 {
        return Err(LinalgError::InsufficientPrecision { d: m, horizon });
    }
    for (k, v) in a.valuations().iter().enumerate() {
        if matches!(v, Valuation::Known(x) if *x < 0) {
            return Err(LinalgError::NotProper(k / n, k % n));
        }
    }
    let mut block: Vec<Vec<Series>> = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j).truncate(m)).collect())
        .collect();
    let mut exponents = Vec::with_capacity(n);
    let mut sum = 0i64;
    while !block.is_empty() {
        let size = block.len() as i64;
        // among entries of least valuation, the one with the smallest
        // coefficients keeps the quotients small
        let mut best: Option<((i64, u64), usize, usize)> = None;
        for (i, row) in block.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                if let Valuation::Known(v) = s.valuation() {
                    let key = (v, s.weight());
                    if best.is_none_or(|(bk, _, _)| key < bk) {
                        best = Some((key, i, j));
                    }
                }
            }
        }
        let Some(((v, _), pi, pj)) = best else {
            return Ok(DiagResult::SingularOrBeyond(budget));
        };
        if sum + v * size > m {
            return Ok(DiagResult::SingularOrBeyond(budget));
        }
        sum += v;
        exponents.push(v as u64);
        block.swap(0, pi);
        for row in block.iter_mut() {
            row.swap(0, pj);
        }
        let mut rows = block.into_iter();
        let top = rows.next().expect("nonempty block");
        let d = &top[0];
        let mut next = Vec::with_capacity(size as usize - 1);
        for mut row in rows {
            let lead = row.remove(0);
            if lead.valuation().known().is_some() {
                let c = lead.right_div(d)?;
                for (x, y) in row.iter_mut().zip(&top[1..]) {
                    *x = x.sub(&c.mul(y)?)?.truncate(m);
                    debug_assert_eq!(x.prec(), m + 1);
                }
            }
            next.push(row);
        }
        block = next;
    }
    Ok(DiagResult::Finite {
        exponents,
        zeta: sum as u64,
    })
}
