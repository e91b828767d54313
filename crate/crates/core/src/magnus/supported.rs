//! Supported-set checks: `P_k(S(G̃_{B,e-μ,k})) = 0` for `k ≤ 𝔧(μ)` and
//! `S(G̃_{B,e-μ}) = 0` for `μ ∈ [e+1, 𝔪]`.
//!
//! Three evaluations of the same engine are used. `𝔧(μ)` comes from the
//! indeterminates specialized to random residues mod `p` (a nonzero residue
//! certifies a nonzero coefficient). The `P_k` checks run over `[c, L, τ]`
//! with `L`-exponents below `max 𝔧` and τ bounded below, which is exact for
//! the coefficients they read. The zero tail runs over `[c, L]` with `τ`
//! replaced by `S(τ)`. [`SupportOptions::exact`] replaces the first two by
//! the literal symbolic expansion.

use std::collections::BTreeMap;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::rational::Q;
use crate::algebra::{ExactPoly, Ring, Window};
use crate::error::{Error, Result};
use crate::tschirnhausen::Tschirnhausen;

use super::engine::{homogenized_sum, GFamily, Pieces};
use super::modp::{Fp, FpLaurent, P};
use super::params::ParamContext;
use super::quotient::from_coords;
use super::symbolic::{build_symbolic, symbolic_g_family, EvalMap};

#[derive(Clone, Debug)]
pub struct SupportOptions {
    /// Expand symbolically instead of the randomized/windowed routes.
    pub exact: bool,
    pub seed: u64,
    /// Random points used for `𝔧`.
    pub points: usize,
}

impl Default for SupportOptions {
    fn default() -> Self {
        SupportOptions { exact: false, seed: 0x5eed, points: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KCheck {
    pub mu: i64,
    pub k: i64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailCheck {
    pub mu: i64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupportedReport {
    pub supported: bool,
    pub checks: Vec<KCheck>,
    pub zero_tail: Vec<TailCheck>,
    /// `𝔧(μ)` for `μ = 0..=𝔪`.
    pub j: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl SupportedReport {
    pub fn first_failure(&self) -> Option<(i64, Option<i64>)> {
        self.checks
            .iter()
            .find(|c| !c.ok)
            .map(|c| (c.mu, Some(c.k)))
            .or_else(|| self.zero_tail.iter().find(|c| !c.ok).map(|c| (c.mu, None)))
    }
}

fn validate_b(ctx: &ParamContext, b: &[i64]) -> Result<Vec<i64>> {
    let mut v = b.to_vec();
    v.sort_unstable();
    v.dedup();
    for &beta in &v {
        if beta < 1 || beta > ctx.mm || !ctx.is_admissible(beta) {
            return Err(Error::Parameter(format!("β = {beta} is not admissible")));
        }
    }
    Ok(v)
}

/// `G̃_{B,e-μ}` for all `μ` with the indeterminates at a random point mod `p`.
pub fn modp_j(ctx: &ParamContext, alpha: &Tschirnhausen, b: &[i64], seed: u64) -> Result<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || Fp::new(rng.random_range(1..P));
    let tau = |k: i64, c: Fp| FpLaurent::monomial(k, c);
    let mut e: Vec<FpLaurent> = (0..ctx.v_e).map(|j| tau(ctx.e_shift(j), draw())).collect();
    e.push(tau(ctx.v_e - ctx.u_e, Fp::one()));
    let f = (0..=ctx.v_f).map(|j| tau(ctx.f_shift(j), draw())).collect();
    let c = b.iter().map(|&beta| (beta, FpLaurent::constant(draw()))).collect();
    let fam = GFamily::new(ctx, alpha, &Pieces { e, f, c }, b)?;
    (0..=ctx.mm)
        .map(|mu| Ok(fam.g_tilde(b, mu)?.min_exp().map_or(0, |m| (-m).max(0))))
        .collect()
}

/// Pieces of `S(Ẽ°)`, `S(F̃°)` in `[c, L]` (τ already replaced by `S(τ)`).
pub fn rho_pieces(s: &EvalMap, b: &[i64]) -> Pieces<ExactPoly> {
    let ctx = s.ctx();
    let ring = s.coords_ring();
    let tau = s.tau_coords();
    let mut e: Vec<ExactPoly> = s
        .gamma_coords()
        .iter()
        .enumerate()
        .map(|(j, g)| &tau.pow(ctx.e_shift(j as i64) as u64) * g)
        .collect();
    e.push(tau.pow((ctx.v_e - ctx.u_e) as u64));
    let f = s
        .xs_coords()
        .iter()
        .enumerate()
        .map(|(j, x)| &tau.pow(ctx.f_shift(j as i64) as u64) * x)
        .collect();
    let c = b.iter().map(|&beta| (beta, ring.constant(s.c_value(beta)))).collect();
    Pieces { e, f, c }
}

/// `S(G̃_{B,e-μ})` in `[c, L]` for all `μ`.
pub fn rho_family(s: &EvalMap, alpha: &Tschirnhausen, b: &[i64]) -> Result<GFamily<ExactPoly>> {
    GFamily::new(s.ctx(), alpha, &rho_pieces(s, b), b)
}

/// `[c, L, τ]` with `L < k_max` and, when `tau_floor` is set, τ-exponents `≥ -tau_floor`.
fn windowed_ring(s: &EvalMap, k_max: i64, tau_floor: Option<i64>) -> Ring {
    let d = s.lattice();
    let c = s.coords_ring().vars()[0].clone();
    let mut windows = vec![Window { var: 1, min: None, max_exclusive: Some(k_max * d) }];
    if let Some(t) = tau_floor {
        windows.push(Window { var: 2, min: Some(-t * d), max_exclusive: None });
    }
    Ring::new(&[c.as_str(), "L", "tau"], d).with_windows(windows)
}

fn windowed_pieces(s: &EvalMap, ring: &Ring, b: &[i64]) -> Result<Pieces<ExactPoly>> {
    let ctx = s.ctx();
    let d = ring.denom();
    let tau = |k: i64| ring.monomial(&[0, 0, k * d], Q::one());
    let mut e = Vec::with_capacity(ctx.v_e as usize + 1);
    for (j, g) in s.gamma_coords().iter().enumerate() {
        e.push(&tau(ctx.e_shift(j as i64)) * &g.embed(ring, &[0, 1])?);
    }
    e.push(tau(ctx.v_e - ctx.u_e));
    let mut f = Vec::with_capacity(ctx.f_len());
    for (j, x) in s.xs_coords().iter().enumerate() {
        f.push(&tau(ctx.f_shift(j as i64)) * &x.embed(ring, &[0, 1])?);
    }
    let c = b.iter().map(|&beta| (beta, ring.constant(s.c_value(beta)))).collect();
    Ok(Pieces { e, f, c })
}

/// `S(G̃_{B,e-μ})` over `[c, L, τ]`, exact for `L`-exponents below `k_max`
/// and τ-exponents at least `-k_max`.
pub fn windowed_family(s: &EvalMap, alpha: &Tschirnhausen, b: &[i64], k_max: i64) -> Result<GFamily<ExactPoly>> {
    let ctx = s.ctx();
    let loose = windowed_ring(s, k_max, None);
    let pieces = windowed_pieces(s, &loose, b)?;
    let h = homogenized_sum(ctx, alpha, &pieces)?;
    // (1 + H/H_0) only has nonpositive τ-exponents when no H_j exceeds τ^N;
    // then a lower τ cutoff commutes with every product.
    let n = ctx.n_tau * loose.denom();
    let bounded = h.coeffs().iter().all(|c| c.max_exp(2).is_none_or(|m| m <= n));
    let h = if bounded {
        let floor = k_max + ctx.n_tau * (ctx.e.max(ctx.d) + ctx.d - 1) / ctx.d;
        let tight = windowed_ring(s, k_max, Some(floor));
        let coeffs = h.coeffs().iter().map(|c| c.rename(&tight)).collect::<Result<Vec<_>>>()?;
        crate::algebra::TruncSeries::new(&tight.zero(), coeffs, h.order())
    } else {
        h
    };
    let c = pieces.c.into_iter().map(|(k, v)| (k, v.rename(h.coeffs()[0].ring()).expect("same arity"))).collect();
    GFamily::from_h(ctx, h, c, b)
}

/// Decide whether `B` is supported with respect to `S`.
pub fn check_supported(ctx: &ParamContext, alpha: &Tschirnhausen, s: &EvalMap, b: &[i64], opts: &SupportOptions) -> Result<SupportedReport> {
    if s.ctx() != ctx {
        return Err(Error::Precondition("evaluation map was built for different parameters".into()));
    }
    let b = validate_b(ctx, b)?;
    if opts.exact {
        return check_exact(ctx, alpha, s, &b);
    }
    let mut j = vec![0; ctx.mm as usize + 1];
    for p in 0..opts.points.max(1) {
        for (slot, v) in j.iter_mut().zip(modp_j(ctx, alpha, &b, opts.seed.wrapping_add(p as u64))?) {
            *slot = (*slot).max(v);
        }
    }
    let k_max = j.iter().copied().max().unwrap_or(0);
    let mut checks = Vec::new();
    let mut witness = None;
    if k_max > 0 {
        let fam = windowed_family(s, alpha, &b, k_max)?;
        let tau_img = {
            let c = s.tau_coords();
            let ring = fam.h().coeffs()[0].ring().clone();
            c.embed(&ring, &[0, 1])?
        };
        let d = s.lattice();
        for mu in 0..=ctx.mm {
            let g = fam.g_tilde(&b, mu)?;
            let jm = j[mu as usize];
            // Negative τ-support beyond 𝔧(μ) would contradict the residue test.
            if g.terms().any(|(e, _)| e[2] < -jm * d) {
                return Err(Error::Inconsistency(format!(
                    "S(G̃) at μ = {mu} has τ-exponents below -𝔧(μ) = -{jm}; the randomized zero test missed a term"
                )));
            }
            let coeffs: Vec<ExactPoly> = (1..=jm).map(|jj| g.coeff_in_var(2, -jj * d)).collect();
            for k in 1..=jm {
                let mut acc = g.ring().zero();
                for jj in (jm + 1 - k)..=jm {
                    acc = &acc + &(&tau_img.pow((jm - jj) as u64) * &coeffs[(jj - 1) as usize]);
                }
                let residue = acc.filter_terms(|e| e[1] < k * d);
                let ok = residue.is_zero();
                if !ok && witness.is_none() {
                    witness = Some(format!("P_{k}(S(G̃_{{B,e-{mu},{k}}})) = {residue} ≠ 0 mod L^{k}"));
                }
                checks.push(KCheck { mu, k, ok });
            }
        }
    }
    let mut zero_tail = Vec::new();
    if ctx.e < ctx.mm {
        let fam = rho_family(s, alpha, &b)?;
        for mu in (ctx.e + 1)..=ctx.mm {
            let g = fam.g_tilde(&b, mu)?;
            let ok = g.is_zero();
            if !ok && witness.is_none() {
                let shown = from_coords(&(&g * &s.tau_coords().pow(j[mu as usize] as u64)), s.binomial(), &ctx.r2_ring())
                    .map(|p| p.to_string())
                    .unwrap_or_else(|_| g.to_string());
                witness = Some(format!("S(τ^{} G̃_{{B,e-{mu}}}) = {shown} ≠ 0", j[mu as usize]));
            }
            zero_tail.push(TailCheck { mu, ok });
        }
    }
    let supported = checks.iter().all(|c| c.ok) && zero_tail.iter().all(|c| c.ok);
    Ok(SupportedReport { supported, checks, zero_tail, j, witness })
}

/// The literal route: symbolic `G̃`, then `S`, then `P_k`.
fn check_exact(ctx: &ParamContext, alpha: &Tschirnhausen, s: &EvalMap, b: &[i64]) -> Result<SupportedReport> {
    let setup = build_symbolic(ctx, alpha)?;
    let entries = symbolic_g_family(&setup, b)?;
    let mut checks = Vec::new();
    let mut zero_tail = Vec::new();
    let mut witness = None;
    for entry in &entries {
        for (idx, tr) in entry.truncations.iter().enumerate() {
            let k = idx as i64 + 1;
            let red = s.reduce(&setup.ring, tr, k)?;
            if !red.is_zero() && witness.is_none() {
                witness = Some(format!("P_{k}(S(G̃_{{B,e-{},{k}}})) = {red}", entry.mu));
            }
            checks.push(KCheck { mu: entry.mu, k, ok: red.is_zero() });
        }
        if entry.mu > ctx.e {
            let lifted = &setup.ring.tau_pow(entry.j) * &entry.g;
            let img = s.eval(&setup.ring, &lifted)?;
            if !img.is_zero() && witness.is_none() {
                witness = Some(format!("S(τ^{} G̃_{{B,e-{}}}) = {img} ≠ 0", entry.j, entry.mu));
            }
            zero_tail.push(TailCheck { mu: entry.mu, ok: img.is_zero() });
        }
    }
    let supported = checks.iter().all(|c| c.ok) && zero_tail.iter().all(|c| c.ok);
    Ok(SupportedReport { supported, checks, zero_tail, j: entries.iter().map(|e| e.j).collect(), witness })
}

/// `S'` agreeing with `S` except `S'(c̃_β) = 0` for `β ∉ keep`.
pub fn sub_support_map(s: &EvalMap, keep: &[i64]) -> EvalMap {
    s.restricted_to(keep)
}

/// `c_β` values from a solved system, for building `S`.
pub fn constants_from(c: &[Q]) -> BTreeMap<i64, Q> {
    c.iter().enumerate().skip(1).map(|(i, v)| (i as i64, v.clone())).collect()
}
