//! Laurent polynomials in one variable over `F_p`, `p = 2^61 - 1`, used for
//! randomized zero tests: a value that is nonzero mod `p` at a point is
//! nonzero over the rationals there.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::rational::Q;
use crate::algebra::SeriesCoeff;
use crate::error::{Error, Result};

pub const P: u64 = (1 << 61) - 1;

/// Element of `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp(u64);

impl Fp {
    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn zero() -> Self {
        Fp(0)
    }

    pub fn one() -> Self {
        Fp(1)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn add(self, o: Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= P { s - P } else { s })
    }

    pub fn sub(self, o: Self) -> Self {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + P - o.0 })
    }

    pub fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }

    pub fn mul(self, o: Self) -> Self {
        let t = self.0 as u128 * o.0 as u128;
        let lo = (t as u64) & P;
        let hi = (t >> 61) as u64;
        Fp::new(lo + hi)
    }

    pub fn pow(self, mut k: u64) -> Self {
        let (mut b, mut r) = (self, Fp::one());
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(b);
            }
            b = b.mul(b);
            k >>= 1;
        }
        r
    }

    pub fn inv(self) -> Option<Self> {
        (!self.is_zero()).then(|| self.pow(P - 2))
    }

    fn from_bigint(v: &BigInt) -> Self {
        let m = v.mod_floor(&BigInt::from(P));
        Fp(m.to_u64().expect("reduced"))
    }

    /// Reduction of a rational whose denominator is prime to `p`.
    pub fn from_q(x: &Q) -> Option<Self> {
        let den = Fp::from_bigint(x.denom());
        den.inv().map(|i| Fp::from_bigint(x.numer()).mul(i))
    }

    pub fn from_i64(v: i64) -> Self {
        if v.is_negative() {
            Fp::new(v.unsigned_abs()).neg()
        } else {
            Fp::new(v as u64)
        }
    }
}

/// `Σ c_k τ^k` with integer exponents and coefficients in `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FpLaurent {
    terms: BTreeMap<i64, Fp>,
}

impl FpLaurent {
    pub fn constant(c: Fp) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(k: i64, c: Fp) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        FpLaurent { terms }
    }

    pub fn coeff(&self, k: i64) -> Fp {
        self.terms.get(&k).copied().unwrap_or(Fp::zero())
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn combine(&self, other: &Self, f: impl Fn(Fp, Fp) -> Fp) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let v = f(terms.get(k).copied().unwrap_or(Fp::zero()), *c);
            if v.is_zero() {
                terms.remove(k);
            } else {
                terms.insert(*k, v);
            }
        }
        FpLaurent { terms }
    }
}

impl SeriesCoeff for FpLaurent {
    fn zero_like(&self) -> Self {
        FpLaurent::default()
    }
    fn one_like(&self) -> Self {
        FpLaurent::constant(Fp::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        self.combine(other, Fp::add)
    }
    fn sub(&self, other: &Self) -> Self {
        self.combine(other, Fp::sub)
    }
    fn mul(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<i64, Fp> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let slot = acc.entry(ka + kb).or_insert(Fp::zero());
                *slot = slot.add(ca.mul(*cb));
            }
        }
        acc.retain(|_, c| !c.is_zero());
        FpLaurent { terms: acc }
    }
    fn scale(&self, c: &Q) -> Self {
        let f = Fp::from_q(c).expect("denominator divisible by the modulus");
        if f.is_zero() {
            return FpLaurent::default();
        }
        FpLaurent { terms: self.terms.iter().map(|(k, v)| (*k, v.mul(f))).collect() }
    }
    fn monomial_pow(&self, a: &Q) -> Result<Self> {
        let (k, c) = self
            .terms
            .iter()
            .next()
            .filter(|_| self.terms.len() == 1)
            .ok_or_else(|| Error::RootChoice("leading coefficient is not a monomial".into()))?;
        let e = Q::from_integer((*k).into()) * a;
        if !e.is_integer() {
            return Err(Error::Lattice("fractional τ-exponent in a modular evaluation".into()));
        }
        let coeff = if a.is_integer() {
            let n = a.to_integer().to_i64().ok_or_else(|| Error::Domain("exponent too large".into()))?;
            if n >= 0 {
                c.pow(n as u64)
            } else {
                c.inv().ok_or_else(|| Error::Domain("inverse of zero".into()))?.pow(n.unsigned_abs())
            }
        } else if *c == Fp::one() {
            Fp::one()
        } else {
            return Err(Error::RootChoice("fractional power of a non-unit coefficient".into()));
        };
        let e = e.to_integer().to_i64().ok_or_else(|| Error::Domain("exponent too large".into()))?;
        Ok(FpLaurent::monomial(e, coeff))
    }
    fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }
}

impl From<&BigInt> for Fp {
    fn from(v: &BigInt) -> Self {
        if v.is_zero() {
            Fp::zero()
        } else {
            Fp::from_bigint(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qf;

    #[test]
    fn field_laws() {
        let a = Fp::new(123456789123456789);
        assert_eq!(a.mul(a.inv().unwrap()), Fp::one());
        assert_eq!(Fp::from_q(&qf(1, 2)).unwrap().mul(Fp::new(2)), Fp::one());
        assert_eq!(Fp::from_i64(-1).add(Fp::one()), Fp::zero());
    }

    #[test]
    fn laurent_product() {
        let a = FpLaurent::monomial(-2, Fp::new(3)).add(&FpLaurent::constant(Fp::one()));
        let b = FpLaurent::monomial(2, Fp::new(5));
        let p = a.mul(&b);
        assert_eq!(p.coeff(0), Fp::new(15));
        assert_eq!(p.coeff(2), Fp::new(5));
    }
}
