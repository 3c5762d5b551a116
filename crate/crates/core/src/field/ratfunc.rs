//! Reduced fractions of polynomials.

use super::poly::{Coef, Poly};

/// `num / den` with `gcd(num, den) = 1` and `den` canonical for its base
/// (monic over F_p, primitive integer with positive leading coefficient
/// over Q). Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc<C> {
    num: Poly<C>,
    den: Poly<C>,
}

impl<C: Coef> RatFunc<C> {
    pub fn zero(sample: &C) -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::constant(sample.one_like()),
        }
    }

    pub fn from_poly(p: Poly<C>, sample: &C) -> Self {
        let one = Poly::constant(sample.one_like());
        // over Q the constant denominator 1 is already canonical
        RatFunc { num: p, den: one }
    }

    pub fn constant(c: C) -> Self {
        let one = Poly::constant(c.one_like());
        RatFunc {
            num: Poly::constant(c),
            den: one,
        }
    }

    /// Reduce an arbitrary fraction. `den` must be nonzero.
    pub fn new(num: Poly<C>, den: Poly<C>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc::zero(den.lc().unwrap());
        }
        if den.degree() == Some(0) {
            return Self::coprime(num, den);
        }
        let g = C::poly_gcd(&num, &den);
        if g.degree() == Some(0) {
            return Self::coprime(num, den);
        }
        Self::coprime(num.div_exact(&g), den.div_exact(&g))
    }

    /// Canonicalize the denominator of an already-coprime pair.
    fn coprime(num: Poly<C>, den: Poly<C>) -> Self {
        if num.is_zero() {
            return RatFunc::zero(den.lc().unwrap());
        }
        let (num, den) = C::normalize_den(num, den);
        RatFunc { num, den }
    }

    pub fn num(&self) -> &Poly<C> {
        &self.num
    }

    pub fn den(&self) -> &Poly<C> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn weight(&self) -> u64 {
        self.num.weight() + self.den.weight()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let n = self.num.add(&o.num);
            if self.den.is_one() {
                return RatFunc {
                    num: n,
                    den: self.den.clone(),
                };
            }
            return RatFunc::new(n, self.den.clone());
        }
        // With g = gcd(d1, d2), d1 = g·a and d2 = g·b, the sum is
        // (n1·b + n2·a) / (g·a·b) and only g can share a factor with the
        // numerator.
        let g = C::poly_gcd(&self.den, &o.den);
        if g.degree() == Some(0) {
            let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            return Self::coprime(n, self.den.mul(&o.den));
        }
        let a = self.den.div_exact(&g);
        let b = o.den.div_exact(&g);
        let n = self.num.mul(&b).add(&o.num.mul(&a));
        let (n, g) = cancel(&n, &g);
        if n.is_zero() {
            return RatFunc::zero(self.den.lc().unwrap());
        }
        Self::coprime(n, g.mul(&a).mul(&b))
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero(self.den.lc().unwrap());
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc {
                num: self.num.mul(&o.num),
                den: self.den.clone(),
            };
        }
        let (an, bd) = cancel(&self.num, &o.den);
        let (bn, ad) = cancel(&o.num, &self.den);
        Self::coprime(an.mul(&bn), ad.mul(&bd))
    }

    /// `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::coprime(self.den.clone(), self.num.clone()))
    }

    /// `f(t + h)`; an automorphism, so the pair stays coprime.
    pub fn shift(&self, h: &C) -> Self {
        Self::coprime(self.num.shift(h), self.den.shift(h))
    }

    /// `f(q t)` for `q != 0`.
    pub fn dilate(&self, q: &C) -> Self {
        Self::coprime(self.num.dilate(q), self.den.dilate(q))
    }

    /// Formal derivative by the quotient rule.
    pub fn derivative(&self) -> Self {
        let dn = self.num.derivative();
        if self.den.degree() == Some(0) {
            return Self::coprime(dn, self.den.clone());
        }
        // With g = gcd(d, d') and h = d/g, (n/d)' = (n'h − n·d'/g) / (d·h).
        // In characteristic zero a common factor of that numerator and d·h
        // must divide h. Over F_p a factor of multiplicity divisible by p
        // survives differentiation, so the full gcd is needed there.
        let dd = self.den.derivative();
        let g = C::poly_gcd(&self.den, &dd);
        let h = self.den.div_exact(&g);
        let n = dn.mul(&h).sub(&self.num.mul(&dd.div_exact(&g)));
        let den = self.den.mul(&h);
        if n.is_zero() {
            return RatFunc::zero(den.lc().unwrap());
        }
        if C::CHARACTERISTIC_ZERO && C::poly_gcd(&n, &h).degree() == Some(0) {
            Self::coprime(n, den)
        } else {
            RatFunc::new(n, den)
        }
    }
}

/// Remove the common factor of `a` and `b`.
fn cancel<C: Coef>(a: &Poly<C>, b: &Poly<C>) -> (Poly<C>, Poly<C>) {
    if b.degree() == Some(0) || a.degree() == Some(0) {
        return (a.clone(), b.clone());
    }
    let g = C::poly_gcd(a, b);
    if g.degree() == Some(0) {
        (a.clone(), b.clone())
    } else {
        (a.div_exact(&g), b.div_exact(&g))
    }
}
