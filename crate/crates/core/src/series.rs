//! Truncated expansions in the uniformizer π = s⁻¹.
//!
//! A [`Series`] stores `Σ_d c_d π^d` for exponents in `[offset, prec)`.
//! Coefficients below `offset` are exactly zero; coefficients at or above
//! `prec` are unknown. Scalars always sit to the left of π powers, so
//! multiplying on the right by `π^e` only relabels exponents while
//! multiplying on the left goes through the twist.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldError, FieldSpec, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("series belong to different fields")]
    FieldMismatch,
    #[error("expected a unit (valuation 0), found {0:?}")]
    NotUnit(Valuation),
    #[error("valuation is not determined below the precision horizon {0}")]
    InsufficientPrecision(i64),
    #[error("left factor has a possibly nonzero coefficient at negative exponent {0}")]
    NegativeExponent(i64),
    #[error("divisor valuation {divisor} exceeds dividend valuation {dividend}")]
    NotDivisible { dividend: i64, divisor: i64 },
}

/// Valuation as far as the stored precision can tell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Known(i64),
    /// All stored coefficients vanish; the true valuation is at least this.
    AtLeast(i64),
}

impl Valuation {
    pub fn known(self) -> Option<i64> {
        match self {
            Valuation::Known(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// A lower bound that is valid in both cases.
    pub fn lower_bound(self) -> i64 {
        match self {
            Valuation::Known(v) | Valuation::AtLeast(v) => v,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Series {
    field: Arc<FieldSpec>,
    offset: i64,
    coeffs: Vec<Scalar>,
    prec: i64,
}

pub(crate) fn same_field(a: &Arc<FieldSpec>, b: &Arc<FieldSpec>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Series {
    /// Build from coefficients of `π^offset, π^(offset+1), …`; the horizon is
    /// `offset + coeffs.len()`.
    pub fn new(field: Arc<FieldSpec>, offset: i64, coeffs: Vec<Scalar>) -> Self {
        let prec = offset + coeffs.len() as i64;
        Series {
            field,
            offset,
            coeffs,
            prec,
        }
    }

    /// Zero known up to (excluding) exponent `prec`.
    pub fn zero(field: Arc<FieldSpec>, prec: i64) -> Self {
        Series {
            field,
            offset: prec,
            coeffs: Vec::new(),
            prec,
        }
    }

    /// The constant `c`, known up to `prec` (which must be positive).
    pub fn constant(field: Arc<FieldSpec>, c: Scalar, prec: i64) -> Self {
        assert!(prec > 0, "constant series needs a positive horizon");
        let mut coeffs = vec![c.zero_like(); prec as usize];
        coeffs[0] = c;
        Series::new(field, 0, coeffs)
    }

    /// `Σ_d terms[d] π^d` treated as exact and padded with zeros to `prec`.
    /// Terms at exponents `>= prec` are dropped.
    pub fn from_terms(field: Arc<FieldSpec>, terms: &[Scalar], prec: i64) -> Self {
        let zero = field.zero();
        let len = prec.max(0) as usize;
        let coeffs = (0..len)
            .map(|d| terms.get(d).cloned().unwrap_or_else(|| zero.clone()))
            .collect();
        Series::new(field, 0, coeffs)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn stored(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `π^d`; `None` at or beyond the horizon.
    pub fn coeff(&self, d: i64) -> Option<Scalar> {
        if d >= self.prec {
            None
        } else if d < self.offset {
            Some(self.field.zero())
        } else {
            Some(self.coeffs[(d - self.offset) as usize].clone())
        }
    }

    fn coeff_ref(&self, d: i64) -> Option<&Scalar> {
        if d >= self.offset && d < self.prec {
            Some(&self.coeffs[(d - self.offset) as usize])
        } else {
            None
        }
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(i) => Valuation::Known(self.offset + i as i64),
            None => Valuation::AtLeast(self.prec),
        }
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Drop coefficients at exponents above `m`.
    pub fn truncate(&self, m: i64) -> Series {
        let cap = m + 1;
        if cap >= self.prec {
            return self.clone();
        }
        if cap <= self.offset {
            return Series::zero(self.field.clone(), cap);
        }
        let keep = (cap - self.offset) as usize;
        Series::new(
            self.field.clone(),
            self.offset,
            self.coeffs[..keep].to_vec(),
        )
    }

    /// Reinterpret a series known to be an exact π-polynomial with horizon
    /// `prec`: truncate or pad with zeros.
    pub fn with_exact_prec(&self, prec: i64) -> Series {
        if prec <= self.prec {
            return self.truncate(prec - 1);
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize((prec - self.offset) as usize, self.field.zero());
        Series::new(self.field.clone(), self.offset, coeffs)
    }

    /// `a · π^e`.
    pub fn right_shift(&self, e: i64) -> Series {
        Series {
            field: self.field.clone(),
            offset: self.offset + e,
            coeffs: self.coeffs.clone(),
            prec: self.prec + e,
        }
    }

    /// `π · a` via the triangular recursion `b_k = σ⁻¹(a_{k−1} − δ(b_{k−1}))`
    /// applied to `a π^{−offset}`.
    pub fn left_mul_pi(&self) -> Series {
        let k = &self.field;
        let deriv = k.twist().has_derivation();
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut prev: Option<Scalar> = None;
        for a in &self.coeffs {
            let inner = match (&prev, deriv) {
                (Some(b), true) if !b.is_zero() => a - &k.delta(b),
                _ => a.clone(),
            };
            let b = k.sigma_inv(&inner);
            out.push(b.clone());
            prev = Some(b);
        }
        Series::new(k.clone(), self.offset + 1, out)
    }

    /// `π · a` through the higher derivations,
    /// `b_d = Σ_{k<d} δ_k(a_{d−k−1})`. Quadratic; kept for cross-checking.
    pub fn left_mul_pi_generic(&self) -> Series {
        let k = &self.field;
        let len = self.coeffs.len();
        let mut out = Vec::with_capacity(len);
        for d in 1..=len {
            let mut acc = k.zero();
            for j in 0..d {
                let a = &self.coeffs[d - j - 1];
                if !a.is_zero() {
                    acc = &acc + &k.higher_delta_raw(j, a);
                }
            }
            out.push(acc);
        }
        Series::new(k.clone(), self.offset + 1, out)
    }

    /// `π^e · a` for `e ≥ 0`.
    pub fn left_mul_pi_pow(&self, e: u64) -> Series {
        let mut x = self.clone();
        for _ in 0..e {
            x = x.left_mul_pi();
        }
        x
    }

    fn check_field(&self, o: &Series) -> Result<(), SeriesError> {
        if same_field(&self.field, &o.field) {
            Ok(())
        } else {
            Err(SeriesError::FieldMismatch)
        }
    }

    pub fn add(&self, o: &Series) -> Result<Series, SeriesError> {
        self.combine(o, |x, y| x + y)
    }

    pub fn sub(&self, o: &Series) -> Result<Series, SeriesError> {
        self.combine(o, |x, y| x - y)
    }

    fn combine(
        &self,
        o: &Series,
        f: impl Fn(&Scalar, &Scalar) -> Scalar,
    ) -> Result<Series, SeriesError> {
        self.check_field(o)?;
        let prec = self.prec.min(o.prec);
        let lo = self.offset.min(o.offset).min(prec);
        let zero = self.field.zero();
        let coeffs = (lo..prec)
            .map(|d| {
                let x = self.coeff_ref(d).unwrap_or(&zero);
                let y = o.coeff_ref(d).unwrap_or(&zero);
                f(x, y)
            })
            .collect();
        Ok(Series::new(self.field.clone(), lo, coeffs))
    }

    pub fn neg(&self) -> Series {
        Series {
            field: self.field.clone(),
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            prec: self.prec,
        }
    }

    /// `c · a` with `c ∈ K` on the left.
    pub fn scalar_left_mul(&self, c: &Scalar) -> Result<Series, SeriesError> {
        if !self.field.contains(c) {
            return Err(FieldError::Mismatch(self.field.describe()).into());
        }
        Ok(Series {
            field: self.field.clone(),
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|x| c * x).collect(),
            prec: self.prec,
        })
    }

    /// `a · b = Σ_d a_d (π^d b)`.
    ///
    /// Horizon: with `v⁻(x)` the known valuation of `x` or its horizon when
    /// no nonzero coefficient is stored, the result is exact below
    /// `min(a.prec + v⁻(b), b.prec + v⁻(a))`. Missing terms of `a` start at
    /// `a.prec` and meet a `b` of valuation `≥ v⁻(b)`; every `π^d b` with
    /// `d ≥ v⁻(a)` is known below `b.prec + d`.
    ///
    /// The left factor must vanish at negative exponents, since `π^d` with
    /// `d < 0` cannot be moved across `b` in this model.
    pub fn mul(&self, b: &Series) -> Result<Series, SeriesError> {
        self.check_field(b)?;
        let va = self.valuation().lower_bound();
        let vb = b.valuation().lower_bound();
        if va < 0 {
            return Err(SeriesError::NegativeExponent(va));
        }
        let horizon = (self.prec + vb).min(b.prec + va);
        let k = &self.field;
        let zero = k.zero();
        let lo = (va + vb).min(horizon);
        let mut acc = vec![zero.clone(); (horizon - lo) as usize];
        if va + vb < horizon {
            // only b below horizon − va can reach the result
            let mut pb = b.truncate(horizon - va - 1).left_mul_pi_pow(va as u64);
            for d in va..horizon - vb {
                if let Some(ad) = self.coeff_ref(d).filter(|c| !c.is_zero()) {
                    for (i, c) in pb.coeffs.iter().enumerate() {
                        let e = pb.offset + i as i64;
                        if e >= horizon {
                            break;
                        }
                        if e >= lo && !c.is_zero() {
                            let slot = &mut acc[(e - lo) as usize];
                            *slot = &*slot + &(ad * c);
                        }
                    }
                }
                pb = pb.truncate(horizon - 2).left_mul_pi();
            }
        }
        Ok(Series::new(k.clone(), lo, acc))
    }

    /// Two-sided inverse of a series with valuation 0, to the same horizon.
    pub fn invert_unit(&self) -> Result<Series, SeriesError> {
        let v = self.valuation();
        if v != Valuation::Known(0) {
            return Err(SeriesError::NotUnit(v));
        }
        let one = Series::constant(self.field.clone(), self.field.one(), self.prec);
        Ok(one.solve_right(self))
    }

    /// `a · d⁻¹` for `v(d) ≤ v(a)`.
    pub fn right_div(&self, d: &Series) -> Result<Series, SeriesError> {
        self.check_field(d)?;
        let vd = match d.valuation() {
            Valuation::Known(v) => v,
            Valuation::AtLeast(h) => return Err(SeriesError::InsufficientPrecision(h)),
        };
        if let Valuation::Known(va) = self.valuation() {
            if va < vd {
                return Err(SeriesError::NotDivisible {
                    dividend: va,
                    divisor: vd,
                });
            }
        }
        let num = self.right_shift(-vd);
        let num = if num.offset < 0 {
            // stored zeros below vd; the known part starts at 0
            let start = (-num.offset) as usize;
            if start >= num.coeffs.len() {
                Series::zero(num.field.clone(), num.prec.max(0))
            } else {
                Series::new(num.field.clone(), 0, num.coeffs[start..].to_vec())
            }
        } else {
            num
        };
        Ok(num.solve_right(&d.right_shift(-vd)))
    }

    /// The series `c` with `c · u = self`, where `u` has valuation 0 and
    /// `self` has no negative exponents. Coefficients are found one at a
    /// time from the rows `π^e u`, whose leading term is `σ^{−e}(u_0)`.
    fn solve_right(&self, u: &Series) -> Series {
        let k = &self.field;
        let nu = self.valuation().lower_bound().max(0);
        let horizon = self.prec.min(u.prec + nu);
        if nu >= horizon {
            return Series::zero(k.clone(), horizon);
        }
        let width = (horizon - nu) as usize;
        let mut rows: Vec<Series> = Vec::with_capacity(width);
        let mut cur = u.truncate(horizon - nu - 1).left_mul_pi_pow(nu as u64);
        let mut out: Vec<Scalar> = Vec::with_capacity(width);
        for e in nu..horizon {
            let mut r = self.coeff_ref(e).cloned().unwrap_or_else(|| k.zero());
            for (c, row) in out.iter().zip(&rows) {
                if c.is_zero() {
                    continue;
                }
                if let Some(x) = row.coeff_ref(e).filter(|x| !x.is_zero()) {
                    r = &r - &(c * x);
                }
            }
            let lead = cur.coeff_ref(e).expect("π^e u is known at e");
            let c = if r.is_zero() {
                r
            } else {
                r.try_div(lead)
                    .expect("leading coefficient of a unit is nonzero")
            };
            out.push(c);
            let next = if e + 1 < horizon {
                Some(cur.truncate(horizon - 2).left_mul_pi())
            } else {
                None
            };
            rows.push(cur);
            match next {
                Some(n) => cur = n,
                None => break,
            }
        }
        Series::new(k.clone(), nu, out)
    }

    /// Total size of the stored coefficients, see [`Scalar::weight`].
    pub fn weight(&self) -> u64 {
        self.coeffs.iter().map(Scalar::weight).sum()
    }

    /// Human-readable rendering such as `t*π - π^2 + O(π^4)`.
    pub fn display(&self) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.offset + i as i64;
            let pi = match e {
                0 => String::new(),
                1 => "π".into(),
                _ => format!("π^{e}"),
            };
            let c = self.field.format(c);
            parts.push(match (pi.is_empty(), c.as_str()) {
                (true, _) => c,
                (false, "1") => pi,
                (false, _) => format!("({c})*{pi}"),
            });
        }
        parts.push(format!("O(π^{})", self.prec));
        parts.join(" + ")
    }
}

/// Equal when both horizons agree and every coefficient below it matches.
impl PartialEq for Series {
    fn eq(&self, o: &Series) -> bool {
        if self.prec != o.prec || !same_field(&self.field, &o.field) {
            return false;
        }
        let lo = self.offset.min(o.offset);
        (lo..self.prec).all(|d| match (self.coeff_ref(d), o.coeff_ref(d)) {
            (Some(x), Some(y)) => x == y,
            (Some(x), None) | (None, Some(x)) => x.is_zero(),
            (None, None) => true,
        })
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{BaseField, Twist};

    fn kt(twist: Twist) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::functions(BaseField::Rationals, "t", twist).unwrap())
    }

    fn ser(k: &Arc<FieldSpec>, offset: i64, cs: &[&str]) -> Series {
        Series::new(
            k.clone(),
            offset,
            cs.iter().map(|c| k.parse(c).unwrap()).collect(),
        )
    }

    #[test]
    fn pi_times_t() {
        let k = kt(Twist::Differential);
        let a = ser(&k, 0, &["t", "0", "0"]);
        let b = a.left_mul_pi();
        assert_eq!(b, ser(&k, 1, &["t", "-1", "0"]));
        assert_eq!(b, a.left_mul_pi_generic());
        assert_eq!(b.prec(), 4);

        let k = kt(Twist::shift());
        let a = ser(&k, 0, &["t", "0"]);
        assert_eq!(a.left_mul_pi(), ser(&k, 1, &["t - 1", "0"]));
        let a = ser(&k, 0, &["t^2"]);
        assert_eq!(a.left_mul_pi_generic(), ser(&k, 1, &["(t-1)^2"]));

        let k = kt(Twist::Commutative);
        let a = ser(&k, 0, &["7"]);
        assert_eq!(a.left_mul_pi(), ser(&k, 1, &["7"]));
    }

    #[test]
    fn shifts_and_truncation() {
        let k = kt(Twist::Differential);
        let a = ser(&k, 1, &["t", "-1"]);
        assert_eq!(a.right_shift(-1), ser(&k, 0, &["t", "-1"]));
        let z = Series::zero(k.clone(), 3).right_shift(2);
        assert_eq!(z.valuation(), Valuation::AtLeast(5));

        let b = ser(&k, 0, &["1", "1", "0", "1", "0"]);
        let tb = b.truncate(1);
        assert_eq!(tb, ser(&k, 0, &["1", "1"]));
        assert_eq!(b.truncate(10), b);
        assert_eq!(Series::zero(k.clone(), 9).truncate(2).prec(), 3);
    }

    #[test]
    fn valuations() {
        let k = kt(Twist::Differential);
        assert_eq!(ser(&k, 1, &["t", "-1"]).valuation(), Valuation::Known(1));
        assert_eq!(
            Series::zero(k.clone(), 4).valuation(),
            Valuation::AtLeast(4)
        );
        assert_eq!(ser(&k, 0, &["3"]).valuation(), Valuation::Known(0));
    }

    #[test]
    fn addition_and_scaling() {
        let k = kt(Twist::Commutative);
        let p = ser(&k, 0, &["0", "1", "0"]);
        let s = p.add(&p.neg()).unwrap();
        assert_eq!(s.valuation(), Valuation::AtLeast(3));
        let one_pi = ser(&k, 0, &["1", "1"]);
        assert_eq!(
            one_pi.scalar_left_mul(&k.var().unwrap()).unwrap(),
            ser(&k, 0, &["t", "t"])
        );
        let x = ser(&k, 0, &["1", "1", "1", "1", "1"]);
        let y = ser(&k, 0, &["1", "1", "1"]);
        assert_eq!(x.add(&y).unwrap().prec(), 3);
    }

    #[test]
    fn products() {
        let k = kt(Twist::Differential);
        let pi = ser(&k, 1, &["1", "0", "0"]);
        let t = ser(&k, 0, &["t", "0", "0", "0"]);
        let pt = pi.mul(&t).unwrap();
        assert_eq!(pt.truncate(2), ser(&k, 1, &["t", "-1"]));
        assert_eq!(pt.truncate(3), t.left_mul_pi().truncate(3));
        let tp = t.mul(&pi).unwrap();
        assert_eq!(tp.truncate(3), ser(&k, 1, &["t", "0", "0"]));

        let k = kt(Twist::Commutative);
        let a = ser(&k, 0, &["1", "1", "0", "0"]);
        let b = ser(&k, 0, &["1", "-1", "0", "0"]);
        assert_eq!(a.mul(&b).unwrap(), ser(&k, 0, &["1", "0", "-1", "0"]));
    }

    #[test]
    fn product_horizon() {
        let k = kt(Twist::Commutative);
        // a = π + O(π^3), b = π^2 + O(π^4): known below min(3 + 2, 4 + 1) = 5
        let a = ser(&k, 0, &["0", "1", "0"]);
        let b = ser(&k, 0, &["0", "0", "1", "0"]);
        let c = a.mul(&b).unwrap();
        assert_eq!(c.prec(), 5);
        assert_eq!(c.valuation(), Valuation::Known(3));
        assert!(Series::new(k.clone(), -1, vec![k.one()]).mul(&b).is_err());
    }

    #[test]
    fn inverses() {
        let k = kt(Twist::Commutative);
        let u = ser(&k, 0, &["1", "-1", "0", "0", "0"]);
        assert_eq!(
            u.invert_unit().unwrap(),
            ser(&k, 0, &["1", "1", "1", "1", "1"])
        );
        let one = ser(&k, 0, &["1", "0", "0"]);
        assert_eq!(one.invert_unit().unwrap(), one);

        let k = kt(Twist::Differential);
        let u = ser(&k, 0, &["1", "t", "0", "0", "0", "0"]);
        let w = u.invert_unit().unwrap();
        let one = Series::constant(k.clone(), k.one(), 6);
        assert_eq!(u.mul(&w).unwrap(), one);
        assert_eq!(w.mul(&u).unwrap(), one);
        assert!(ser(&k, 0, &["0", "1"]).invert_unit().is_err());
        assert!(Series::zero(k.clone(), 3).invert_unit().is_err());
    }

    #[test]
    fn right_division() {
        let k = kt(Twist::Differential);
        let a = ser(&k, 0, &["0", "0", "1", "0", "0"]);
        let d = ser(&k, 0, &["0", "1", "0", "0", "0"]);
        assert_eq!(
            a.right_div(&d).unwrap().truncate(2),
            ser(&k, 0, &["0", "1", "0"])
        );
        let q = d.right_div(&d).unwrap();
        assert_eq!(q, Series::constant(k.clone(), k.one(), 4));
        let a = ser(&k, 0, &["0", "t", "0", "0"]);
        let q = a.right_div(&d).unwrap();
        assert_eq!(q, ser(&k, 0, &["t", "0", "0"]));
        assert_eq!(q.mul(&d).unwrap().truncate(3), a.truncate(3));
        assert!(a.right_div(&Series::zero(k.clone(), 4)).is_err());
    }
}
