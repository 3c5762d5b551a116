//! Dense univariate polynomials over the base field, and the coefficient
//! trait shared by the rational and prime-field bases.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::fp::Fp;

/// Arithmetic of a commutative base field (Q or F_p).
///
/// Elements are self-describing: a prime-field element knows its modulus,
/// so fresh constants are derived from an existing element.
pub trait Coef: Clone + PartialEq + Eq + fmt::Debug + Send + Sync + 'static {
    const CHARACTERISTIC_ZERO: bool;

    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn same_ring_int(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse. Callers guarantee `self != 0`.
    fn inv(&self) -> Self;

    /// Canonical gcd: monic over F_p, primitive integer with positive
    /// leading coefficient over Q. `gcd(0, 0) = 0`.
    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self>;

    /// Scale a coprime pair so the denominator is in canonical form.
    fn normalize_den(num: Poly<Self>, den: Poly<Self>) -> (Poly<Self>, Poly<Self>);

    /// Rough size measure used for pivot selection.
    fn weight(&self) -> u64;
}

impl Coef for BigRational {
    const CHARACTERISTIC_ZERO: bool = true;

    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn same_ring_int(&self, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }

    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        let mut x = primitive_int(a);
        let mut y = primitive_int(b);
        if y.is_empty() {
            return int_to_rat(&x);
        }
        if x.is_empty() {
            return int_to_rat(&y);
        }
        if x.len() < y.len() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_empty() {
            let r = pseudo_rem(&x, &y);
            x = y;
            y = primitive_part(r);
        }
        int_to_rat(&primitive_part(x))
    }

    fn normalize_den(num: Poly<Self>, den: Poly<Self>) -> (Poly<Self>, Poly<Self>) {
        // den -> primitive integer polynomial with positive leading coefficient;
        // the same rational factor is applied to the numerator.
        let prim = primitive_int(&den);
        let prim_rat = int_to_rat(&prim);
        // den = c * prim  =>  num/den = (num / c) / prim
        let c = den.lc().expect("nonzero denominator").clone() / prim_rat.lc().unwrap().clone();
        let inv_c = c.recip();
        (num.scale(&inv_c), prim_rat)
    }

    fn weight(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }
}

impl Coef for Fp {
    const CHARACTERISTIC_ZERO: bool = false;

    fn zero_like(&self) -> Self {
        Fp::new(0, self.modulus())
    }
    fn one_like(&self) -> Self {
        Fp::new(1, self.modulus())
    }
    fn same_ring_int(&self, n: i64) -> Self {
        Fp::from_i64(n, self.modulus())
    }
    fn is_zero(&self) -> bool {
        self.value() == 0
    }
    fn is_one(&self) -> bool {
        self.value() == 1
    }
    fn add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn sub(&self, o: &Self) -> Self {
        *self - *o
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn inv(&self) -> Self {
        Fp::inv(self).expect("inverse of zero residue")
    }

    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }

    fn normalize_den(num: Poly<Self>, den: Poly<Self>) -> (Poly<Self>, Poly<Self>) {
        let lc_inv = Coef::inv(den.lc().expect("nonzero denominator"));
        (num.scale(&lc_inv), den.scale(&lc_inv))
    }

    fn weight(&self) -> u64 {
        1
    }
}

/// Dense polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

impl<C: Coef> Poly<C> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: C) -> Self {
        Poly::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: C, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![c.zero_like(); k];
        v.push(c);
        Poly { coeffs: v }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn weight(&self) -> u64 {
        self.coeffs.iter().map(|c| c.weight()).sum::<u64>() + self.coeffs.len() as u64
    }

    pub fn add(&self, o: &Self) -> Self {
        let (long, short) = if self.coeffs.len() >= o.coeffs.len() {
            (self, o)
        } else {
            (o, self)
        };
        let mut v = long.coeffs.clone();
        for (x, y) in v.iter_mut().zip(&short.coeffs) {
            *x = x.add(y);
        }
        Poly::new(v)
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => a.sub(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.neg(),
                (None, None) => unreachable!(),
            });
        }
        Poly::new(v)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if o.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return o.clone();
        }
        let zero = self.coeffs[0].zero_like();
        let mut v = vec![zero; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Poly::new(v)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_one() {
            return self.clone();
        }
        Poly::new(self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.inv()),
        }
    }

    /// Euclidean division over the base field. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dl = d.lc().expect("division by zero polynomial");
        if self.coeffs.len() < d.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let inv = dl.inv();
        let mut r = self.coeffs.clone();
        let dn = d.coeffs.len();
        let qn = r.len() - dn + 1;
        let mut q = vec![dl.zero_like(); qn];
        for k in (0..qn).rev() {
            let c = r[k + dn - 1].mul(&inv);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].sub(&c.mul(dc));
            }
            q[k] = c;
        }
        r.truncate(dn - 1);
        (Poly::new(q), Poly::new(r))
    }

    /// Exact quotient; the remainder is assumed zero.
    pub fn div_exact(&self, d: &Self) -> Self {
        if d.is_one() {
            return self.clone();
        }
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&c.same_ring_int(i as i64)))
                .collect(),
        )
    }

    /// `p(t + h)` by Horner's rule.
    pub fn shift(&self, h: &C) -> Self {
        if h.is_zero() || self.coeffs.len() <= 1 {
            return self.clone();
        }
        let lin = Poly::new(vec![h.clone(), h.one_like()]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// `p(q t)`.
    pub fn dilate(&self, q: &C) -> Self {
        let mut pow = q.one_like();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            v.push(c.mul(&pow));
            pow = pow.mul(q);
        }
        Poly::new(v)
    }
}

fn primitive_int(p: &Poly<BigRational>) -> Vec<BigInt> {
    if p.is_zero() {
        return Vec::new();
    }
    let l = p
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| c.numer() * (&l / c.denom()))
        .collect();
    primitive_part(ints)
}

fn primitive_part(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    if v.is_empty() {
        return v;
    }
    let g = content(&v);
    let g = if v.last().unwrap().is_negative() {
        -g
    } else {
        g
    };
    if !g.is_one() {
        for c in v.iter_mut() {
            *c = &*c / &g;
        }
    }
    v
}

/// gcd of all entries, smallest first so that a unit content is found
/// before touching the large ones.
fn content(v: &[BigInt]) -> BigInt {
    let mut order: Vec<&BigInt> = v.iter().filter(|c| !c.is_zero()).collect();
    order.sort_by_key(|c| c.bits());
    let mut g = BigInt::zero();
    for c in order {
        g = int_gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Euclid with remainders while the operands differ much in size, then the
/// library routine; the binary method alone is slow on unbalanced inputs.
fn int_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut x = a.abs();
    let mut y = b.abs();
    loop {
        if x < y {
            std::mem::swap(&mut x, &mut y);
        }
        if y.is_zero() {
            return x;
        }
        if x.bits() <= y.bits() + 32 {
            return x.gcd(&y);
        }
        x = &x % &y;
    }
}

/// Pseudo-remainder of `a` by `b` over Z.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let bl = b.last().unwrap();
    let bn = b.len();
    while r.len() >= bn {
        let rl = r.last().unwrap().clone();
        let shift = r.len() - bn;
        for c in r.iter_mut() {
            *c *= bl;
        }
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &rl * bc;
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

fn int_to_rat(v: &[BigInt]) -> Poly<BigRational> {
    Poly::new(
        v.iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect(),
    )
}
