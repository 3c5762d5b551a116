//! The coefficient field K and its twist (σ, δ).
//!
//! K is one of Q, F_p, Q(t) or F_p(t). The twist fixes how the skew
//! indeterminate s commutes with scalars, `s a = σ(a) s + δ(a)`:
//!
//! | twist          | σ(t)      | δ         |
//! |----------------|-----------|-----------|
//! | `Commutative`  | t         | 0         |
//! | `Differential` | t         | d/dt      |
//! | `Shift`        | t + h     | 0         |
//! | `QShift(q)`    | q t       | 0         |
//!
//! Scalars are plain canonical values; a [`FieldSpec`] supplies the context
//! (zero, one, twist maps, parsing and printing).

mod fp;
mod parse;
mod poly;
mod ratfunc;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use fp::Fp;
pub use parse::ParseError;
pub use poly::{Coef, Poly};
pub use ratfunc::RatFunc;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalar does not belong to the field {0}")]
    Mismatch(String),
    #[error("invalid field description: {0}")]
    InvalidSpec(String),
}

/// Coefficient domain of the base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseField {
    Rationals,
    Prime(u64),
}

/// Commutation rule between s and K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Twist {
    Commutative,
    Differential,
    /// σ(t) = t + step. The standard shift operator has `step = 1`; the
    /// reversed orientation (`step = -1`) appears when a shift matrix is
    /// rewritten in the reciprocal indeterminate.
    Shift {
        step: i64,
    },
    /// σ(t) = q t with q in the base field, q ∉ {0, 1}.
    QShift(Scalar),
}

impl Twist {
    pub fn shift() -> Self {
        Twist::Shift { step: 1 }
    }

    pub fn has_derivation(&self) -> bool {
        matches!(self, Twist::Differential)
    }
}

/// Binary field operation selector for [`FieldSpec::scalar_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Complete description of K together with σ and δ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    base: BaseField,
    variable: Option<String>,
    twist: Twist,
}

impl FieldSpec {
    pub fn new(
        base: BaseField,
        variable: Option<String>,
        twist: Twist,
    ) -> Result<Self, FieldError> {
        if let BaseField::Prime(p) = base {
            if !fp::is_prime(p) || p > u32::MAX as u64 {
                return Err(FieldError::InvalidSpec(format!(
                    "{p} is not a supported prime modulus"
                )));
            }
        }
        if let Some(v) = &variable {
            let ok = !v.is_empty() && v.chars().all(|c| c.is_ascii_alphabetic() || c == '_');
            if !ok {
                return Err(FieldError::InvalidSpec(format!("bad variable name {v:?}")));
            }
        }
        if !matches!(twist, Twist::Commutative) && variable.is_none() {
            return Err(FieldError::InvalidSpec(
                "non-commutative twists need a rational function field".into(),
            ));
        }
        match &twist {
            Twist::Shift { step } => {
                let zero_step = match base {
                    BaseField::Rationals => *step == 0,
                    BaseField::Prime(p) => step.rem_euclid(p as i64) == 0,
                };
                if zero_step {
                    return Err(FieldError::InvalidSpec("shift step must be nonzero".into()));
                }
            }
            Twist::QShift(q) => {
                let base_ok = matches!((&base, q), (BaseField::Rationals, Scalar::Rational(_)))
                    || matches!((&base, q), (BaseField::Prime(p), Scalar::Residue(x)) if x.modulus() == *p);
                if !base_ok {
                    return Err(FieldError::InvalidSpec(
                        "q must lie in the base field".into(),
                    ));
                }
                if q.is_zero() || q.is_one() {
                    return Err(FieldError::InvalidSpec("q must differ from 0 and 1".into()));
                }
            }
            _ => {}
        }
        Ok(FieldSpec {
            base,
            variable,
            twist,
        })
    }

    pub fn rationals() -> Self {
        FieldSpec {
            base: BaseField::Rationals,
            variable: None,
            twist: Twist::Commutative,
        }
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        FieldSpec::new(BaseField::Prime(p), None, Twist::Commutative)
    }

    pub fn functions(base: BaseField, variable: &str, twist: Twist) -> Result<Self, FieldError> {
        FieldSpec::new(base, Some(variable.to_string()), twist)
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn variable(&self) -> Option<&str> {
        self.variable.as_deref()
    }

    pub fn twist(&self) -> &Twist {
        &self.twist
    }

    pub fn is_function_field(&self) -> bool {
        self.variable.is_some()
    }

    /// Same K with the twist replaced.
    pub fn with_twist(&self, twist: Twist) -> Result<Self, FieldError> {
        FieldSpec::new(self.base.clone(), self.variable.clone(), twist)
    }

    /// K with σ replaced by σ⁻¹. Only meaningful when δ = 0.
    pub fn inverse_twist(&self) -> Result<Self, FieldError> {
        let twist = match &self.twist {
            Twist::Commutative => Twist::Commutative,
            Twist::Shift { step } => Twist::Shift { step: -step },
            Twist::QShift(q) => Twist::QShift(q.inv().ok_or(FieldError::DivisionByZero)?),
            Twist::Differential => {
                return Err(FieldError::InvalidSpec(
                    "a twist with nonzero derivation has no reciprocal form".into(),
                ))
            }
        };
        self.with_twist(twist)
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        let q = BigRational::from_integer(BigInt::from(n));
        self.from_base_rational(&q)
            .expect("integers embed in every base")
    }

    /// Embed a rational number; fails over F_p when the denominator vanishes.
    pub fn from_base_rational(&self, q: &BigRational) -> Result<Scalar, FieldError> {
        match (&self.base, self.is_function_field()) {
            (BaseField::Rationals, false) => Ok(Scalar::Rational(q.clone())),
            (BaseField::Rationals, true) => Ok(Scalar::RationalFn(RatFunc::constant(q.clone()))),
            (BaseField::Prime(p), fun) => {
                let r = rational_mod(q, *p)?;
                Ok(if fun {
                    Scalar::ResidueFn(RatFunc::constant(r))
                } else {
                    Scalar::Residue(r)
                })
            }
        }
    }

    /// Embed a base-field constant (Rational or Residue) into K.
    pub fn embed_base(&self, c: &Scalar) -> Result<Scalar, FieldError> {
        match (c, &self.base, self.is_function_field()) {
            (Scalar::Rational(q), BaseField::Rationals, false) => Ok(Scalar::Rational(q.clone())),
            (Scalar::Rational(q), BaseField::Rationals, true) => {
                Ok(Scalar::RationalFn(RatFunc::constant(q.clone())))
            }
            (Scalar::Residue(r), BaseField::Prime(p), false) if r.modulus() == *p => {
                Ok(Scalar::Residue(*r))
            }
            (Scalar::Residue(r), BaseField::Prime(p), true) if r.modulus() == *p => {
                Ok(Scalar::ResidueFn(RatFunc::constant(*r)))
            }
            _ => Err(self.mismatch()),
        }
    }

    /// The generator t of a rational function field.
    pub fn var(&self) -> Result<Scalar, FieldError> {
        if !self.is_function_field() {
            return Err(FieldError::InvalidSpec("field has no variable".into()));
        }
        Ok(match self.base {
            BaseField::Rationals => Scalar::RationalFn(RatFunc::from_poly(
                Poly::monomial(BigRational::one(), 1),
                &BigRational::one(),
            )),
            BaseField::Prime(p) => {
                let one = Fp::new(1, p);
                Scalar::ResidueFn(RatFunc::from_poly(Poly::monomial(one, 1), &one))
            }
        })
    }

    /// Build a rational function from base-field coefficient lists (ascending).
    pub fn rational_function(&self, num: &[Scalar], den: &[Scalar]) -> Result<Scalar, FieldError> {
        let t = self.var()?;
        let horner = |cs: &[Scalar]| -> Result<Scalar, FieldError> {
            let mut acc = self.zero();
            for c in cs.iter().rev() {
                acc = self.scalar_arith(ArithOp::Mul, &acc, &t)?;
                acc = self.scalar_arith(ArithOp::Add, &acc, &self.embed_base(c)?)?;
            }
            Ok(acc)
        };
        let n = horner(num)?;
        let d = horner(den)?;
        self.scalar_arith(ArithOp::Div, &n, &d)
    }

    pub fn contains(&self, a: &Scalar) -> bool {
        match (a, &self.base, self.is_function_field()) {
            (Scalar::Rational(_), BaseField::Rationals, false) => true,
            (Scalar::RationalFn(_), BaseField::Rationals, true) => true,
            (Scalar::Residue(r), BaseField::Prime(p), false) => r.modulus() == *p,
            (Scalar::ResidueFn(f), BaseField::Prime(p), true) => {
                f.den().lc().is_some_and(|c| c.modulus() == *p)
            }
            _ => false,
        }
    }

    fn mismatch(&self) -> FieldError {
        FieldError::Mismatch(self.describe())
    }

    fn check(&self, a: &Scalar) -> Result<(), FieldError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(self.mismatch())
        }
    }

    /// Exact field operation with membership checks.
    pub fn scalar_arith(&self, op: ArithOp, a: &Scalar, b: &Scalar) -> Result<Scalar, FieldError> {
        self.check(a)?;
        self.check(b)?;
        match op {
            ArithOp::Add => a.try_add(b),
            ArithOp::Sub => a.try_sub(b),
            ArithOp::Mul => a.try_mul(b),
            ArithOp::Div => a.try_div(b),
        }
    }

    pub fn apply_sigma(&self, a: &Scalar) -> Result<Scalar, FieldError> {
        self.check(a)?;
        Ok(self.sigma(a))
    }

    pub fn apply_sigma_inv(&self, a: &Scalar) -> Result<Scalar, FieldError> {
        self.check(a)?;
        Ok(self.sigma_inv(a))
    }

    pub fn apply_delta(&self, a: &Scalar) -> Result<Scalar, FieldError> {
        self.check(a)?;
        Ok(self.delta(a))
    }

    /// δ_d = σ⁻¹ (−δ σ⁻¹)^d, the maps in `s⁻¹ a = Σ_d δ_d(a) s^{-(d+1)}`.
    pub fn higher_delta(&self, d: usize, a: &Scalar) -> Result<Scalar, FieldError> {
        self.check(a)?;
        Ok(self.higher_delta_raw(d, a))
    }

    pub(crate) fn higher_delta_raw(&self, d: usize, a: &Scalar) -> Scalar {
        let mut x = a.clone();
        for _ in 0..d {
            if x.is_zero() {
                return x;
            }
            x = -&self.delta(&self.sigma_inv(&x));
        }
        self.sigma_inv(&x)
    }

    pub(crate) fn sigma(&self, a: &Scalar) -> Scalar {
        match &self.twist {
            Twist::Commutative | Twist::Differential => a.clone(),
            Twist::Shift { step } => self.shift_by(a, *step),
            Twist::QShift(q) => self.dilate_by(a, q),
        }
    }

    pub(crate) fn sigma_inv(&self, a: &Scalar) -> Scalar {
        match &self.twist {
            Twist::Commutative | Twist::Differential => a.clone(),
            Twist::Shift { step } => self.shift_by(a, -step),
            Twist::QShift(q) => self.dilate_by(a, &q.inv().expect("q is nonzero")),
        }
    }

    pub(crate) fn delta(&self, a: &Scalar) -> Scalar {
        match (&self.twist, a) {
            (Twist::Differential, Scalar::RationalFn(f)) => Scalar::RationalFn(f.derivative()),
            (Twist::Differential, Scalar::ResidueFn(f)) => Scalar::ResidueFn(f.derivative()),
            _ => a.zero_like(),
        }
    }

    fn shift_by(&self, a: &Scalar, h: i64) -> Scalar {
        match a {
            Scalar::RationalFn(f) => {
                Scalar::RationalFn(f.shift(&BigRational::from_integer(BigInt::from(h))))
            }
            Scalar::ResidueFn(f) => {
                let p = f.den().lc().unwrap().modulus();
                Scalar::ResidueFn(f.shift(&Fp::from_i64(h, p)))
            }
            _ => a.clone(),
        }
    }

    fn dilate_by(&self, a: &Scalar, q: &Scalar) -> Scalar {
        match (a, q) {
            (Scalar::RationalFn(f), Scalar::Rational(q)) => Scalar::RationalFn(f.dilate(q)),
            (Scalar::ResidueFn(f), Scalar::Residue(q)) => Scalar::ResidueFn(f.dilate(q)),
            _ => a.clone(),
        }
    }

    /// Human-readable name such as `GF(5)(t), shift`.
    pub fn describe(&self) -> String {
        let base = match self.base {
            BaseField::Rationals => "Q".to_string(),
            BaseField::Prime(p) => format!("GF({p})"),
        };
        let k = match &self.variable {
            Some(v) => format!("{base}({v})"),
            None => base,
        };
        let tw = match &self.twist {
            Twist::Commutative => "commutative".to_string(),
            Twist::Differential => "differential".to_string(),
            Twist::Shift { step } => format!("shift by {step}"),
            Twist::QShift(q) => format!("q-shift with q = {}", parse::format_base(q)),
        };
        format!("{k}, {tw}")
    }

    /// Canonical text form of a scalar in this field.
    pub fn format(&self, a: &Scalar) -> String {
        parse::format_scalar(a, self.variable.as_deref().unwrap_or("t"))
    }

    /// Parse the scalar grammar: integers, `a/b`, polynomials in the
    /// field variable with `^` powers and optional `*`, parenthesised
    /// quotients.
    pub fn parse(&self, s: &str) -> Result<Scalar, ParseError> {
        parse::parse_scalar(self, s)
    }
}

fn rational_mod(q: &BigRational, p: u64) -> Result<Fp, FieldError> {
    let pb = BigInt::from(p);
    let reduce = |x: &BigInt| -> u64 {
        let r = ((x % &pb) + &pb) % &pb;
        u64::try_from(r).expect("residue fits")
    };
    let n = Fp::new(reduce(q.numer()), p);
    let d = Fp::new(reduce(q.denom()), p);
    d.inv().map(|di| n * di).ok_or(FieldError::DivisionByZero)
}

/// An exact element of K in canonical form.
///
/// Equality is structural and coincides with equality in K because every
/// constructor normalizes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Residue(Fp),
    RationalFn(RatFunc<BigRational>),
    ResidueFn(RatFunc<Fp>),
}

fn mismatch_err() -> FieldError {
    FieldError::Mismatch("operands from different fields".into())
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => Zero::is_zero(q),
            Scalar::Residue(r) => r.value() == 0,
            Scalar::RationalFn(f) => f.is_zero(),
            Scalar::ResidueFn(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => One::is_one(q),
            Scalar::Residue(r) => r.value() == 1,
            Scalar::RationalFn(f) => f.is_one(),
            Scalar::ResidueFn(f) => f.is_one(),
        }
    }

    pub fn zero_like(&self) -> Scalar {
        match self {
            Scalar::Rational(_) => Scalar::Rational(BigRational::zero()),
            Scalar::Residue(r) => Scalar::Residue(Fp::new(0, r.modulus())),
            Scalar::RationalFn(_) => Scalar::RationalFn(RatFunc::zero(&BigRational::one())),
            Scalar::ResidueFn(f) => Scalar::ResidueFn(RatFunc::zero(f.den().lc().unwrap())),
        }
    }

    pub fn one_like(&self) -> Scalar {
        match self {
            Scalar::Rational(_) => Scalar::Rational(BigRational::one()),
            Scalar::Residue(r) => Scalar::Residue(Fp::new(1, r.modulus())),
            Scalar::RationalFn(_) => Scalar::RationalFn(RatFunc::constant(BigRational::one())),
            Scalar::ResidueFn(f) => {
                Scalar::ResidueFn(RatFunc::constant(f.den().lc().unwrap().one_like()))
            }
        }
    }

    /// Size estimate used to prefer small pivots.
    pub fn weight(&self) -> u64 {
        match self {
            Scalar::Rational(q) => q.weight(),
            Scalar::Residue(_) => 1,
            Scalar::RationalFn(f) => f.weight(),
            Scalar::ResidueFn(f) => f.weight(),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) => (!Zero::is_zero(q)).then(|| Scalar::Rational(q.recip())),
            Scalar::Residue(r) => r.inv().map(Scalar::Residue),
            Scalar::RationalFn(f) => f.inv().map(Scalar::RationalFn),
            Scalar::ResidueFn(f) => f.inv().map(Scalar::ResidueFn),
        }
    }

    pub fn try_add(&self, o: &Scalar) -> Result<Scalar, FieldError> {
        Ok(match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue(a), Scalar::Residue(b)) if a.modulus() == b.modulus() => {
                Scalar::Residue(*a + *b)
            }
            (Scalar::RationalFn(a), Scalar::RationalFn(b)) => Scalar::RationalFn(a.add(b)),
            (Scalar::ResidueFn(a), Scalar::ResidueFn(b)) if same_p(a, b) => {
                Scalar::ResidueFn(a.add(b))
            }
            _ => return Err(mismatch_err()),
        })
    }

    pub fn try_sub(&self, o: &Scalar) -> Result<Scalar, FieldError> {
        Ok(match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Residue(a), Scalar::Residue(b)) if a.modulus() == b.modulus() => {
                Scalar::Residue(*a - *b)
            }
            (Scalar::RationalFn(a), Scalar::RationalFn(b)) => Scalar::RationalFn(a.sub(b)),
            (Scalar::ResidueFn(a), Scalar::ResidueFn(b)) if same_p(a, b) => {
                Scalar::ResidueFn(a.sub(b))
            }
            _ => return Err(mismatch_err()),
        })
    }

    pub fn try_mul(&self, o: &Scalar) -> Result<Scalar, FieldError> {
        Ok(match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue(a), Scalar::Residue(b)) if a.modulus() == b.modulus() => {
                Scalar::Residue(*a * *b)
            }
            (Scalar::RationalFn(a), Scalar::RationalFn(b)) => Scalar::RationalFn(a.mul(b)),
            (Scalar::ResidueFn(a), Scalar::ResidueFn(b)) if same_p(a, b) => {
                Scalar::ResidueFn(a.mul(b))
            }
            _ => return Err(mismatch_err()),
        })
    }

    pub fn try_div(&self, o: &Scalar) -> Result<Scalar, FieldError> {
        let inv = o.inv().ok_or(FieldError::DivisionByZero)?;
        self.try_mul(&inv)
    }
}

fn same_p(a: &RatFunc<Fp>, b: &RatFunc<Fp>) -> bool {
    a.den().lc().unwrap().modulus() == b.den().lc().unwrap().modulus()
}

// Operator forms for algorithm code whose operands were validated on entry;
// a field mismatch here is a programming error.
impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.try_add(o).expect("scalar field mismatch")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.try_sub(o).expect("scalar field mismatch")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.try_mul(o).expect("scalar field mismatch")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Residue(r) => Scalar::Residue(-*r),
            Scalar::RationalFn(f) => Scalar::RationalFn(f.neg()),
            Scalar::ResidueFn(f) => Scalar::ResidueFn(f.neg()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::format_scalar(self, "t"))
    }
}
