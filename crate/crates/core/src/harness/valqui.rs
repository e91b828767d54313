//! Checker for the Laurent-form presentation `G = C^a`,
//! `F = Σ_{i=0}^{a+b-2} λ_i C^{b-i} + P` with `C ∈ Q[y]((x^{-1}))`.
//!
//! `deg` is the total degree of the retained terms; `P_+` is the
//! `(1,0)`-leading form.

use serde::Serialize;

use crate::algebra::laurent::{describe_coeffs, laurent_root_power, root_exactness_floor};
use crate::algebra::rational::fmt_q;
use crate::algebra::{laurent_root, ExactPoly, LaurentSeriesX, Q};
use crate::error::{Error, Result};

use super::conditions::ConditionResult;

#[derive(Clone, Debug, Serialize)]
pub struct ValquiReport {
    pub a: i64,
    pub b: i64,
    /// Lowest x-exponent kept in `C`, the powers `C^j` and `P`.
    pub floor: i64,
    /// `C` as `(x-exponent, coefficient in y)`, top first.
    pub c: Vec<(i64, String)>,
    pub lambda: Vec<String>,
    /// `P` restricted to x-exponents `≥ floor`, top first.
    pub p: Vec<(i64, String)>,
    /// Total degree of the retained part of `P`.
    pub p_degree: Option<i64>,
    /// `C^a` agrees with `G` at every x-exponent `≥ root_floor`.
    pub root_floor: i64,
    pub root_matches: bool,
    pub lambda0_is_one: bool,
    /// Conditions (1)–(3).
    pub conditions: Vec<ConditionResult>,
    #[serde(skip)]
    pub c_series: LaurentSeriesX,
    #[serde(skip)]
    pub p_series: LaurentSeriesX,
    #[serde(skip)]
    pub lambda_q: Vec<Q>,
}

impl ValquiReport {
    pub fn all_hold(&self) -> bool {
        self.root_matches && self.lambda0_is_one && self.conditions.iter().all(|c| c.holds)
    }
}

fn power(c: &LaurentSeriesX, k: i64) -> LaurentSeriesX {
    let mut acc = c.clone();
    for _ in 1..k {
        acc = acc.mul(c);
    }
    acc
}

fn is_const(p: &ExactPoly, v: i64) -> bool {
    p.is_constant() && p.constant_term() == Q::from_integer(v.into())
}

/// Fit `F` against powers of `C = G^{1/a}` down to x-exponent `order`.
pub fn valqui_check(f: &ExactPoly, g: &ExactPoly, a: i64, b: i64, order: i64) -> Result<ValquiReport> {
    if a < 1 || b < 1 || b % a == 0 || a % b == 0 {
        return Err(Error::Precondition(format!("need a ∤ b and b ∤ a, got (a, b) = ({a}, {b})")));
    }
    let floor = order;
    let c = laurent_root(g, a, floor)?;

    let mut rest = LaurentSeriesX::from_poly(f, floor)?;
    let mut lambda = Vec::new();
    for i in 0..=(a + b - 2) {
        let k = b - i;
        let l = if k >= floor { rest.coeff(k)?.constant_term() } else { Q::from_integer(0.into()) };
        if !num_traits::Zero::is_zero(&l) {
            rest = rest.sub(&laurent_root_power(g, a, k, floor)?.scale(&l));
        }
        lambda.push(l);
    }
    let p = rest;

    let root_floor = root_exactness_floor(a, floor);
    let g_ser = LaurentSeriesX::from_poly(g, root_floor)?;
    let root_matches = power(&c, a).sub(&g_ser).is_zero();

    let c_ok = c.leading_exponent() == Some(1)
        && is_const(&c.coeff(1)?, 1)
        && (floor > 0 || c.coeff(0)?.is_zero());
    let w1 = (!c_ok).then(|| format!("C = {c} is not of the form x + C_-1 x^-1 + ⋯"));

    let p_degree = p.total_degree();
    let c_degree = c.total_degree();
    let w2 = if c_degree != Some(1) {
        Some(format!("deg C = {}", c_degree.map_or("-inf".into(), |d| d.to_string())))
    } else {
        p_degree.filter(|&d| d > 2 - a).map(|d| format!("deg P = {d} > {}", 2 - a))
    };
    let w3 = match (p_degree, p.leading_form()) {
        (Some(d), Some((k, lead))) if d == 2 - a => {
            let y = lead.ring().parse(&lead.ring().vars()[0].clone())?;
            (k != 1 - a || lead != y).then(|| format!("P_+ = x^{k}*({lead}), expected x^{}*y", 1 - a))
        }
        _ => None,
    };
    let conditions = [w1, w2, w3]
        .into_iter()
        .enumerate()
        .map(|(i, w)| ConditionResult { index: i as u8 + 1, holds: w.is_none(), witness: w })
        .collect();
    Ok(ValquiReport {
        a,
        b,
        floor,
        c: describe_coeffs(&c),
        lambda: lambda.iter().map(fmt_q).collect(),
        p: describe_coeffs(&p),
        p_degree,
        root_floor,
        root_matches,
        lambda0_is_one: lambda.first().is_some_and(|l| *l == Q::from_integer(1.into())),
        conditions,
        c_series: c,
        p_series: p,
        lambda_q: lambda,
    })
}
