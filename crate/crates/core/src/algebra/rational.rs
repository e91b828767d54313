//! Small helpers over arbitrary-precision rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

/// Integer as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `n / d` as a rational. Panics on `d == 0`.
pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Exact `k`-th root of a rational, if it exists over the rationals.
pub fn rational_root(c: &Q, k: u32) -> Option<Q> {
    if k == 0 {
        return None;
    }
    if k == 1 || c.is_zero() {
        return Some(c.clone());
    }
    let negative = c.is_negative();
    if negative && k % 2 == 0 {
        return None;
    }
    let num = c.numer().abs();
    let den = c.denom().clone();
    let rn = num.nth_root(k);
    let rd = den.nth_root(k);
    if num_traits::pow(rn.clone(), k as usize) != num || num_traits::pow(rd.clone(), k as usize) != den {
        return None;
    }
    let r = Q::new(rn, rd);
    Some(if negative { -r } else { r })
}

/// `c^e` for a rational exponent `e`, if the result is rational.
pub fn rational_pow(c: &Q, e: &Q) -> Option<Q> {
    let den = e.denom().to_u32()?;
    let num = e.numer().to_i64()?;
    if c.is_zero() {
        return if num > 0 { Some(Q::zero()) } else { None };
    }
    let root = rational_root(c, den)?;
    Some(int_pow(&root, num))
}

/// `c^n` for a signed integer `n`; `c` must be nonzero when `n < 0`.
pub fn int_pow(c: &Q, n: i64) -> Q {
    if n >= 0 {
        num_traits::pow(c.clone(), n as usize)
    } else {
        num_traits::pow(c.recip(), (-n) as usize)
    }
}

/// Falling factorial `A (A-1) ... (A-k+1)`; equals one for `k == 0`.
pub fn falling_factorial(a: &Q, k: u64) -> Q {
    let mut acc = Q::one();
    let mut cur = a.clone();
    for _ in 0..k {
        acc *= &cur;
        cur -= Q::one();
    }
    acc
}

pub fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Floor of a rational as `i64`.
pub fn floor_i64(x: &Q) -> i64 {
    x.floor().to_integer().to_i64().expect("floor out of i64 range")
}

/// Exact conversion of an integral rational to `i64`.
pub fn to_i64_exact(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn lcm_i64(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

/// Positive divisors of `n` in ascending order.
pub fn divisors(n: i64) -> Vec<i64> {
    let n = n.abs();
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Human-readable rational: `3`, `-1/2`.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
