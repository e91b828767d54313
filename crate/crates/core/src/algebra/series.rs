//! Truncated power series in an auxiliary variable `t` with coefficients in
//! any ring implementing [`SeriesCoeff`].

use num_traits::{One, Zero};

use super::poly::ExactPoly;
use super::rational::{falling_factorial, factorial, q, Q};
use crate::error::{Error, Result};

/// Coefficient ring for [`TruncSeries`].
pub trait SeriesCoeff: Clone + PartialEq + std::fmt::Debug {
    /// Zero of the same ring as `self`.
    fn zero_like(&self) -> Self;
    /// One of the same ring as `self`.
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Q) -> Self;
    /// `self^A` for a monomial `self` and rational `A`.
    fn monomial_pow(&self, a: &Q) -> Result<Self>;
    /// Whether `self` is a single monomial (a unit admitting rational powers).
    fn is_monomial(&self) -> bool;
}

impl SeriesCoeff for ExactPoly {
    fn zero_like(&self) -> Self {
        self.ring().zero()
    }
    fn one_like(&self) -> Self {
        self.ring().one()
    }
    fn is_zero(&self) -> bool {
        ExactPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Q) -> Self {
        ExactPoly::scale(self, c)
    }
    fn monomial_pow(&self, a: &Q) -> Result<Self> {
        if !self.is_monomial() {
            return Err(Error::RootChoice(format!("leading coefficient {self} is not a monomial")));
        }
        self.pow_q(a)
    }
    fn is_monomial(&self) -> bool {
        self.as_monomial().is_some()
    }
}

/// `Σ_{j < order} coeffs[j] t^j`; every operation discards `t^{≥ order}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<C: SeriesCoeff> {
    order: usize,
    coeffs: Vec<C>,
}

impl<C: SeriesCoeff> TruncSeries<C> {
    /// Series from coefficients; missing ones are zero, extra ones dropped.
    /// `proto` fixes the coefficient ring.
    pub fn new(proto: &C, mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.truncate(order);
        while coeffs.len() < order {
            coeffs.push(proto.zero_like());
        }
        TruncSeries { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// `[·]_{t^j}`; fails for `j ≥ order` since that coefficient is unknown.
    pub fn coeff(&self, j: usize) -> Result<&C> {
        self.coeffs.get(j).ok_or(Error::Truncation { index: j, order: self.order })
    }

    /// Same series at a lower order.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        TruncSeries { order, coeffs: self.coeffs[..order].to_vec() }
    }

    fn check_order(&self, other: &Self) -> usize {
        self.order.min(other.order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.check_order(other);
        TruncSeries { order: n, coeffs: (0..n).map(|j| self.coeffs[j].add(&other.coeffs[j])).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.check_order(other);
        TruncSeries { order: n, coeffs: (0..n).map(|j| self.coeffs[j].sub(&other.coeffs[j])).collect() }
    }

    pub fn scale(&self, c: &Q) -> Self {
        TruncSeries { order: self.order, coeffs: self.coeffs.iter().map(|x| x.scale(c)).collect() }
    }

    /// Multiply every coefficient by a fixed ring element.
    pub fn mul_coeff(&self, c: &C) -> Self {
        TruncSeries { order: self.order, coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect() }
    }

    /// Multiply by `t^s`, keeping the order.
    pub fn shift(&self, s: usize) -> Self {
        let zero = self.coeffs.first().map(|c| c.zero_like());
        let mut coeffs = Vec::with_capacity(self.order);
        for j in 0..self.order {
            if j < s {
                coeffs.push(zero.clone().expect("nonempty series"));
            } else {
                coeffs.push(self.coeffs[j - s].clone());
            }
        }
        TruncSeries { order: self.order, coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.check_order(other);
        let mut coeffs: Vec<C> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeffs[0].zero_like();
            for j in 0..=k {
                let (a, b) = (&self.coeffs[j], &other.coeffs[k - j]);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            coeffs.push(acc);
        }
        TruncSeries { order: n, coeffs }
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut result = self.one_series();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    fn one_series(&self) -> Self {
        let proto = &self.coeffs[0];
        let mut coeffs = vec![proto.zero_like(); self.order];
        if self.order > 0 {
            coeffs[0] = proto.one_like();
        }
        TruncSeries { order: self.order, coeffs }
    }

    /// `(Σ y_j t^j)^A` via the falling-factorial multinomial expansion:
    /// the `t^k` coefficient sums, over all `v` with `Σ j·v_j = k`,
    /// `A(A-1)⋯(A-|v|+1) / Π v_j! · y_0^{A-|v|} Π y_j^{v_j}`.
    pub fn frac_power_multinomial(&self, a: &Q) -> Result<Self> {
        let y0 = self.leading_unit()?;
        let n = self.order;
        let mut coeffs = Vec::with_capacity(n);
        let mut y0_pows: Vec<Option<C>> = vec![None; n];
        for k in 0..n {
            let mut acc = y0.zero_like();
            for part in partitions(k) {
                // part[j-1] = v_j
                let size: u64 = part.iter().sum();
                let mut weight = falling_factorial(a, size);
                if weight.is_zero() {
                    continue;
                }
                let mut term: Option<C> = None;
                let mut vanished = false;
                for (idx, &v) in part.iter().enumerate() {
                    if v == 0 {
                        continue;
                    }
                    let yj = &self.coeffs[idx + 1];
                    if yj.is_zero() {
                        vanished = true;
                        break;
                    }
                    weight /= Q::from_integer(factorial(v));
                    let p = (1..v).fold(yj.clone(), |acc, _| acc.mul(yj));
                    term = Some(match term {
                        None => p,
                        Some(t) => t.mul(&p),
                    });
                }
                if vanished {
                    continue;
                }
                let s = size as usize;
                if y0_pows[s].is_none() {
                    y0_pows[s] = Some(y0.monomial_pow(&(a - q(size as i64)))?);
                }
                let base = y0_pows[s].as_ref().expect("cached");
                let t = match term {
                    None => base.clone(),
                    Some(t) => t.mul(base),
                };
                acc = acc.add(&t.scale(&weight));
            }
            coeffs.push(acc);
        }
        Ok(TruncSeries { order: n, coeffs })
    }

    /// `(Σ y_j t^j)^A` via the power recurrence
    /// `p_k = (1 / (k y_0)) Σ_{j=1}^{k} ((A+1) j - k) y_j p_{k-j}`, `p_0 = y_0^A`.
    /// Agrees with [`Self::frac_power_multinomial`] and costs `O(order²)` products.
    pub fn frac_power(&self, a: &Q) -> Result<Self> {
        let y0 = self.leading_unit()?;
        let n = self.order;
        let inv = y0.monomial_pow(&-Q::one())?;
        let mut p: Vec<C> = Vec::with_capacity(n);
        if n == 0 {
            return Ok(TruncSeries { order: 0, coeffs: p });
        }
        p.push(y0.monomial_pow(a)?);
        let a1 = a + Q::one();
        for k in 1..n {
            let mut acc = y0.zero_like();
            for j in 1..=k {
                let yj = &self.coeffs[j];
                if yj.is_zero() || p[k - j].is_zero() {
                    continue;
                }
                let w = &a1 * q(j as i64) - q(k as i64);
                if w.is_zero() {
                    continue;
                }
                acc = acc.add(&yj.mul(&p[k - j]).scale(&w));
            }
            p.push(acc.mul(&inv).scale(&Q::new(1.into(), (k as i64).into())));
        }
        Ok(TruncSeries { order: n, coeffs: p })
    }

    fn leading_unit(&self) -> Result<&C> {
        let y0 = self
            .coeffs
            .first()
            .ok_or_else(|| Error::Parameter("fractional power of an order-0 series".into()))?;
        if !y0.is_monomial() {
            return Err(Error::RootChoice(format!("constant term {y0:?} is not a monomial")));
        }
        Ok(y0)
    }
}

/// All `v = (v_1, …, v_k)` with `Σ j·v_j = k`.
pub fn partitions(k: usize) -> Vec<Vec<u64>> {
    fn rec(rem: usize, max_part: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max_part.min(rem)).rev() {
            cur[part - 1] += 1;
            rec(rem - part, part, cur, out);
            cur[part - 1] -= 1;
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0u64; k];
    rec(k, k, &mut cur, &mut out);
    out
}
