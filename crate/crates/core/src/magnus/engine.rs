//! The homogenized sum `H = h(α°(Ẽ°) + F̃°)`, its fractional powers
//! `H^{(e-β)/d}` and the combinations `G̃_{B,e-μ}`.
//!
//! The engine is generic in the coefficient ring so the same code runs on
//! the symbolic ring, on evaluation images and on random residues mod `p`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::algebra::{SeriesCoeff, TruncSeries};
use crate::error::{Error, Result};
use crate::tschirnhausen::Tschirnhausen;

use super::params::ParamContext;

/// Graded pieces of `Ẽ°` and `F̃°` (already multiplied by their τ-powers)
/// and the constants standing for `c̃_β`.
#[derive(Clone, Debug)]
pub struct Pieces<C> {
    /// Degree-`j` piece of `Ẽ°`, `j = 0..=v_E` (index `v_E` is `τ^{v_E-u_E}`).
    pub e: Vec<C>,
    /// Degree-`j` piece of `F̃°`, `j = 0..=v_F`.
    pub f: Vec<C>,
    /// `c̃_β` for the indices in use.
    pub c: BTreeMap<i64, C>,
}

/// `H` to `t`-order `𝔪 + 1`.
pub fn homogenized_sum<C: SeriesCoeff>(ctx: &ParamContext, alpha: &Tschirnhausen, p: &Pieces<C>) -> Result<TruncSeries<C>> {
    let deg = (ctx.shape.a * ctx.delta) as usize;
    if alpha.degree() != deg {
        return Err(Error::Parameter(format!("deg α° = {} but δa = {deg}", alpha.degree())));
    }
    if p.e.len() != ctx.v_e as usize + 1 || p.f.len() != ctx.f_len() {
        return Err(Error::Parameter("piece counts do not match v_E and v_F".into()));
    }
    if ctx.v_f >= ctx.d {
        return Err(Error::Parameter(format!("v_F = {} reaches d = {}", ctx.v_f, ctx.d)));
    }
    let order = ctx.mm as usize + 1;
    let proto = &p.e[0];
    let v_e = ctx.v_e as usize;
    let mut he = vec![proto.zero_like(); order];
    for (j, piece) in p.e.iter().enumerate() {
        if v_e - j < order {
            he[v_e - j] = piece.clone();
        }
    }
    let he = TruncSeries::new(proto, he, order);
    let mut power = TruncSeries::new(proto, vec![proto.one_like()], order);
    let mut h = TruncSeries::new(proto, vec![], order);
    for k in 0..=deg {
        let ak = alpha.coeff(k);
        if !num_traits::Zero::is_zero(&ak) {
            h = h.add(&power.scale(&ak).shift((deg - k) * v_e));
        }
        if k < deg {
            power = power.mul(&he);
        }
    }
    let mut fs = vec![proto.zero_like(); order];
    for (j, piece) in p.f.iter().enumerate() {
        let slot = (ctx.d - j as i64) as usize;
        if slot < order {
            fs[slot] = piece.clone();
        }
    }
    Ok(h.add(&TruncSeries::new(proto, fs, order)))
}

/// `(Σ y_j t^j)^A` computed as `y_0^A (1 + g)^A` with `g_j = y_j / y_0`.
/// Every intermediate lives in the span of the `g_j`, which matters when the
/// coefficient ring truncates from below.
pub fn normalized_power<C: SeriesCoeff>(s: &TruncSeries<C>, a: &crate::algebra::Q) -> Result<TruncSeries<C>> {
    let y0 = s.coeff(0)?.clone();
    let inv = y0.monomial_pow(&-crate::algebra::Q::from_integer(1.into()))?;
    let g = s.mul_coeff(&inv);
    Ok(g.frac_power(a)?.mul_coeff(&y0.monomial_pow(a)?))
}

/// `H` together with the cached powers `H^{(e-β)/d}` for `β ∈ {0} ∪ betas`.
pub struct GFamily<C: SeriesCoeff> {
    ctx: ParamContext,
    h: TruncSeries<C>,
    powers: BTreeMap<i64, TruncSeries<C>>,
    c: BTreeMap<i64, C>,
}

impl<C: SeriesCoeff + Send + Sync> GFamily<C> {
    pub fn new(ctx: &ParamContext, alpha: &Tschirnhausen, pieces: &Pieces<C>, betas: &[i64]) -> Result<Self> {
        let h = homogenized_sum(ctx, alpha, pieces)?;
        Self::from_h(ctx, h, pieces.c.clone(), betas)
    }

    pub fn from_h(ctx: &ParamContext, h: TruncSeries<C>, c: BTreeMap<i64, C>, betas: &[i64]) -> Result<Self> {
        for &b in betas {
            if b < 1 || b > ctx.mm || !ctx.is_admissible(b) {
                return Err(Error::Parameter(format!("β = {b} is not an admissible index in [1, {}]", ctx.mm)));
            }
            if !c.contains_key(&b) {
                return Err(Error::Parameter(format!("no value supplied for c_{b}")));
            }
        }
        let mut all: Vec<i64> = vec![0];
        all.extend(betas.iter().copied().filter(|&b| b != 0));
        all.sort_unstable();
        all.dedup();
        let powers: Result<Vec<(i64, TruncSeries<C>)>> = all
            .par_iter()
            .map(|&b| {
                let s = h.truncate((ctx.mm - b + 1) as usize);
                Ok((b, normalized_power(&s, &ctx.exponent(b))?))
            })
            .collect();
        Ok(GFamily { ctx: ctx.clone(), h, powers: powers?.into_iter().collect(), c })
    }

    pub fn h(&self) -> &TruncSeries<C> {
        &self.h
    }

    /// `[H^{(e-β)/d}]_{t^k}`.
    pub fn power_coeff(&self, beta: i64, k: usize) -> Result<&C> {
        self.powers
            .get(&beta)
            .ok_or_else(|| Error::Parameter(format!("H^((e-{beta})/d) was not prepared")))?
            .coeff(k)
    }

    /// `G̃_{B,e-μ} = [H^{e/d}]_{t^μ} + Σ_{β ∈ B ∩ [1, μ]} c̃_β [H^{(e-β)/d}]_{t^{μ-β}}`.
    pub fn g_tilde(&self, b: &[i64], mu: i64) -> Result<C> {
        if mu < 0 || mu > self.ctx.mm {
            return Err(Error::Parameter(format!("μ = {mu} is outside [0, {}]", self.ctx.mm)));
        }
        let mut acc = self.power_coeff(0, mu as usize)?.clone();
        for &beta in b.iter().filter(|&&x| x >= 1 && x <= mu) {
            let c = self
                .c
                .get(&beta)
                .ok_or_else(|| Error::Parameter(format!("no value supplied for c_{beta}")))?;
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&c.mul(self.power_coeff(beta, (mu - beta) as usize)?));
        }
        Ok(acc)
    }
}
