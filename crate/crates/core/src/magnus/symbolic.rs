//! The symbolic ring `R₁[τ]` of indeterminates, the elements `Ẽ°`, `F̃°`,
//! `H`, and evaluation maps `S : R₁[τ] → R₂`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::rational::{q, Q};
use crate::algebra::{ExactPoly, Ring, TruncSeries};
use crate::error::{Error, Result};
use crate::grading::{w_decompose, Direction};
use crate::tschirnhausen::Tschirnhausen;

use super::engine::{homogenized_sum, GFamily, Pieces};
use super::params::ParamContext;
use super::quotient::{from_coords, reduce_pk, to_coords, Binomial};

/// `Q[τ^{±1/d}, Γ̃_0..Γ̃_{v_E-1}, x̃_0..x̃_{v_F}, c̃_β]` with `β` admissible.
#[derive(Clone, Debug)]
pub struct SymbolicRing {
    ctx: ParamContext,
    ring: Ring,
    betas: Vec<i64>,
}

impl SymbolicRing {
    pub fn new(ctx: &ParamContext) -> Self {
        let betas = ctx.admissible_betas();
        let mut vars = vec!["tau".to_string()];
        vars.extend((0..ctx.v_e).map(|j| format!("Gamma{j}")));
        vars.extend((0..=ctx.v_f).map(|j| format!("xi{j}")));
        vars.extend(betas.iter().map(|b| format!("c{b}")));
        SymbolicRing { ctx: ctx.clone(), ring: Ring::new(&vars, ctx.d), betas }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn ctx(&self) -> &ParamContext {
        &self.ctx
    }

    pub fn tau_index(&self) -> usize {
        0
    }

    pub fn tau_pow(&self, k: i64) -> ExactPoly {
        let mut e = vec![0; self.ring.nvars()];
        e[0] = k * self.ring.denom();
        self.ring.monomial(&e, Q::one())
    }

    pub fn gamma(&self, j: i64) -> ExactPoly {
        self.ring.var(1 + j as usize)
    }

    pub fn xi(&self, j: i64) -> ExactPoly {
        self.ring.var(1 + self.ctx.v_e as usize + j as usize)
    }

    pub fn c(&self, beta: i64) -> Result<ExactPoly> {
        let k = self
            .betas
            .iter()
            .position(|&b| b == beta)
            .ok_or_else(|| Error::Parameter(format!("c̃_{beta} is not an admissible indeterminate")))?;
        Ok(self.ring.var(2 + (self.ctx.v_e + self.ctx.v_f) as usize + k))
    }

    /// Degree of a monomial of `R₁[τ]` under the grading that makes
    /// `τ^{[j-u_E]_+} Γ̃_j` and `τ^{[j-u_F]_+} x̃_j` homogeneous of degree `j`.
    pub fn degree(&self, exps: &[i64]) -> Q {
        let c = &self.ctx;
        let d = q(self.ring.denom());
        let mut acc = Q::from_integer(exps[0].into()) / &d * &c.deg_tau;
        for j in 0..c.v_e {
            let k = Q::from_integer(exps[1 + j as usize].into()) / &d;
            acc += k * c.indeterminate_degree(j, c.e_shift(j));
        }
        for j in 0..=c.v_f {
            let k = Q::from_integer(exps[1 + (c.v_e + j) as usize].into()) / &d;
            acc += k * c.indeterminate_degree(j, c.f_shift(j));
        }
        acc
    }

    /// Graded pieces of `Ẽ°`, `F̃°` and the `c̃_β`.
    pub fn pieces(&self) -> Pieces<ExactPoly> {
        let c = &self.ctx;
        let mut e: Vec<ExactPoly> = (0..c.v_e).map(|j| &self.tau_pow(c.e_shift(j)) * &self.gamma(j)).collect();
        e.push(self.tau_pow(c.v_e - c.u_e));
        let f = (0..=c.v_f).map(|j| &self.tau_pow(c.f_shift(j)) * &self.xi(j)).collect();
        let cs = self.betas.iter().map(|&b| (b, self.c(b).expect("admissible"))).collect();
        Pieces { e, f, c: cs }
    }
}

/// `Ẽ°`, `F̃°` and `H = h(α°(Ẽ°) + F̃°)` to `t`-order `𝔪 + 1`.
#[derive(Clone, Debug)]
pub struct SymbolicSetup {
    pub ring: SymbolicRing,
    pub e_tilde: ExactPoly,
    pub f_tilde: ExactPoly,
    pub h: TruncSeries<ExactPoly>,
}

pub fn build_symbolic(ctx: &ParamContext, alpha: &Tschirnhausen) -> Result<SymbolicSetup> {
    let ring = SymbolicRing::new(ctx);
    let p = ring.pieces();
    let h = homogenized_sum(ctx, alpha, &p)?;
    let sum = |v: &[ExactPoly]| v.iter().fold(ring.ring().zero(), |a, b| &a + b);
    Ok(SymbolicSetup { e_tilde: sum(&p.e), f_tilde: sum(&p.f), h, ring })
}

/// `G̃_{B,e-μ}`, `𝔧(μ)` and the truncations `G̃_{B,e-μ,k}`, `k = 1..=𝔧(μ)`.
#[derive(Clone, Debug)]
pub struct GEntry {
    pub mu: i64,
    pub g: ExactPoly,
    pub j: i64,
    pub truncations: Vec<ExactPoly>,
}

/// `𝔧` of an element of `R₁[τ^{±}]`: the ceiling of minus its least τ-exponent, or 0.
pub fn j_index(g: &ExactPoly, tau: usize) -> i64 {
    let d = g.ring().denom();
    match g.min_exp(tau) {
        Some(m) if m < 0 => (-m + d - 1) / d,
        _ => 0,
    }
}

/// `[g]_{τ^{-j}}` for every integer `j ∈ [1, 𝔧]`; fails when the negative
/// τ-support is off the integer lattice.
pub fn negative_tau_coeffs(g: &ExactPoly, tau: usize) -> Result<Vec<ExactPoly>> {
    let d = g.ring().denom();
    if g.terms().any(|(e, _)| e[tau] < 0 && e[tau] % d != 0) {
        return Err(Error::Lattice("negative τ-exponent off the integer lattice".into()));
    }
    Ok((1..=j_index(g, tau)).map(|j| g.coeff_in_var(tau, -j * d)).collect())
}

/// `Σ_{j=𝔧+1-k}^{𝔧} τ^{𝔧-j} [g]_{τ^{-j}}` for `k = 1..=𝔧`.
fn truncations(g: &ExactPoly, tau_pow: impl Fn(i64) -> ExactPoly) -> Result<Vec<ExactPoly>> {
    let coeffs = negative_tau_coeffs(g, 0)?;
    let jj = coeffs.len() as i64;
    Ok((1..=jj)
        .map(|k| {
            (jj + 1 - k..=jj).fold(g.ring().zero(), |acc, j| &acc + &(&tau_pow(jj - j) * &coeffs[(j - 1) as usize]))
        })
        .collect())
}

/// The symbolic family for one `B`, all `μ ∈ [0, 𝔪]`.
pub fn symbolic_g_family(setup: &SymbolicSetup, b: &[i64]) -> Result<Vec<GEntry>> {
    let ctx = setup.ring.ctx().clone();
    let cs = setup.ring.pieces().c;
    let fam = GFamily::from_h(&ctx, setup.h.clone(), cs, b)?;
    (0..=ctx.mm)
        .map(|mu| {
            let g = fam.g_tilde(b, mu)?;
            let j = j_index(&g, 0);
            let truncations = truncations(&g, |k| setup.ring.tau_pow(k))?;
            Ok(GEntry { mu, g, j, truncations })
        })
        .collect()
}

/// An element of `𝒮^w` restricted to the data it needs: images of the
/// `Γ̃_j` and `x̃_j` in `R₂` and rational values for the `c̃_β`.
#[derive(Clone, Debug)]
pub struct EvalMap {
    ctx: ParamContext,
    which: Binomial,
    gamma: Vec<ExactPoly>,
    xs: Vec<ExactPoly>,
    gamma_coords: Vec<ExactPoly>,
    xs_coords: Vec<ExactPoly>,
    c: BTreeMap<i64, Q>,
}

impl EvalMap {
    /// Lattice denominator of `R₂`.
    pub fn lattice(&self) -> i64 {
        self.ctx.r2_ring().denom()
    }

    pub fn ctx(&self) -> &ParamContext {
        &self.ctx
    }

    pub fn binomial(&self) -> Binomial {
        self.which
    }

    /// `[c, L]` with the `R₂` lattice.
    pub fn coords_ring(&self) -> Ring {
        self.which.coords_ring(self.lattice())
    }

    /// Grading of `[c, L]` matching `w` on `[x, y]`.
    pub fn coords_direction(&self) -> Direction {
        if self.ctx.u == 0 {
            Direction::X
        } else {
            Direction::Total
        }
    }

    /// `S(τ)` in `[c, L]`: `L·c^{n/m}` or `L·c^{m/n}`.
    pub fn tau_coords(&self) -> ExactPoly {
        tau_coords(&self.ctx, &self.coords_ring())
    }

    pub fn gamma(&self) -> &[ExactPoly] {
        &self.gamma
    }

    pub fn xs(&self) -> &[ExactPoly] {
        &self.xs
    }

    /// `Γ_j` written in `[c, L]`.
    pub fn gamma_coords(&self) -> &[ExactPoly] {
        &self.gamma_coords
    }

    pub fn xs_coords(&self) -> &[ExactPoly] {
        &self.xs_coords
    }

    pub fn c(&self) -> &BTreeMap<i64, Q> {
        &self.c
    }

    pub fn c_value(&self, beta: i64) -> Q {
        self.c.get(&beta).cloned().unwrap_or_else(Q::zero)
    }

    /// Build `S` from `E°`, `F°` and constants: `Γ_j = (E°)_j / S(τ)^{[j-u_E]_+}`
    /// and likewise for `x_j`. Fails with a precondition error when some
    /// piece is not divisible by the required power of `S(τ)` or a degree
    /// bound is violated.
    pub fn from_parts(ctx: &ParamContext, e_circ: &ExactPoly, f_circ: &ExactPoly, c: BTreeMap<i64, Q>) -> Result<Self> {
        let which = Binomial::from_u(ctx.u);
        let r2 = ctx.r2_ring();
        let coords = which.coords_ring(r2.denom());
        let dir = if ctx.u == 0 { Direction::X } else { Direction::Total };
        let tau = tau_coords(ctx, &coords);
        let split = |p: &ExactPoly, top: i64, name: &str| -> Result<Vec<ExactPoly>> {
            let pc = to_coords(&p.embed(&r2, &[0, 1])?, which, &coords)?;
            let dec = w_decompose(&pc, dir)?;
            for (deg, piece) in &dec.pieces {
                if !deg.is_integer() || *deg > q(top) || *deg < Q::zero() {
                    return Err(Error::Precondition(format!(
                        "{name} has a w-piece of degree {deg} outside [0, {top}]: {}",
                        from_coords(piece, which, &r2)?
                    )));
                }
            }
            Ok((0..=top).map(|j| dec.piece_int(j)).collect())
        };
        let ep = split(e_circ, ctx.v_e, "E°")?;
        let expected = tau.pow((ctx.v_e - ctx.u_e) as u64);
        if ep[ctx.v_e as usize] != expected {
            return Err(Error::Precondition(format!(
                "w-leading form of E° is {}, not S(τ)^{}",
                from_coords(&ep[ctx.v_e as usize], which, &r2)?,
                ctx.v_e - ctx.u_e
            )));
        }
        let divide = |piece: &ExactPoly, s: i64, name: String| -> Result<ExactPoly> {
            let t = tau.pow(s as u64);
            piece.exact_div(&t)?.ok_or_else(|| {
                Error::Precondition(format!("S ∉ 𝒮^w: {name} is not divisible by S(τ)^{s}"))
            })
        };
        let gamma_coords = (0..ctx.v_e)
            .map(|j| divide(&ep[j as usize], ctx.e_shift(j), format!("(E°)_{j}")))
            .collect::<Result<Vec<_>>>()?;
        let fp = split(f_circ, ctx.v_f, "F°")?;
        let xs_coords = (0..=ctx.v_f)
            .map(|j| divide(&fp[j as usize], ctx.f_shift(j), format!("(F°)_{j}")))
            .collect::<Result<Vec<_>>>()?;
        Self::from_coords_images(ctx, gamma_coords, xs_coords, c)
    }

    /// Build `S` from the images of `Γ̃_j`, `x̃_j` in `R₂`.
    pub fn from_images(ctx: &ParamContext, gamma: Vec<ExactPoly>, xs: Vec<ExactPoly>, c: BTreeMap<i64, Q>) -> Result<Self> {
        let which = Binomial::from_u(ctx.u);
        let r2 = ctx.r2_ring();
        let coords = which.coords_ring(r2.denom());
        let conv = |v: &[ExactPoly]| -> Result<Vec<ExactPoly>> {
            v.iter().map(|p| to_coords(&p.embed(&r2, &[0, 1])?, which, &coords)).collect()
        };
        let (g, x) = (conv(&gamma)?, conv(&xs)?);
        Self::from_coords_images(ctx, g, x, c)
    }

    fn from_coords_images(ctx: &ParamContext, gamma_coords: Vec<ExactPoly>, xs_coords: Vec<ExactPoly>, c: BTreeMap<i64, Q>) -> Result<Self> {
        if gamma_coords.len() != ctx.v_e as usize || xs_coords.len() != ctx.f_len() {
            return Err(Error::Parameter("wrong number of images for Γ̃ or x̃".into()));
        }
        for b in c.keys() {
            if *b < 1 || *b > ctx.mm {
                return Err(Error::Parameter(format!("c̃_{b} is outside [1, {}]", ctx.mm)));
            }
        }
        let which = Binomial::from_u(ctx.u);
        let r2 = ctx.r2_ring();
        let back = |v: &[ExactPoly]| -> Result<Vec<ExactPoly>> { v.iter().map(|p| from_coords(p, which, &r2)).collect() };
        Ok(EvalMap {
            ctx: ctx.clone(),
            which,
            gamma: back(&gamma_coords)?,
            xs: back(&xs_coords)?,
            gamma_coords,
            xs_coords,
            c,
        })
    }

    /// Same images with `c̃_β ↦ 0` for `β ∉ keep`.
    pub fn restricted_to(&self, keep: &[i64]) -> EvalMap {
        let mut out = self.clone();
        out.c.retain(|b, _| keep.contains(b));
        out
    }

    /// `S(E°)` and `S(F°)` reassembled in `R₂`.
    pub fn e_image(&self) -> Result<ExactPoly> {
        let c = &self.ctx;
        let r2 = c.r2_ring();
        let tau = c.tau_image();
        let mut acc = tau.pow((c.v_e - c.u_e) as u64);
        for (j, g) in self.gamma.iter().enumerate() {
            acc = &acc + &(&tau.pow(c.e_shift(j as i64) as u64) * &g.embed(&r2, &[0, 1])?);
        }
        Ok(acc)
    }

    pub fn f_image(&self) -> Result<ExactPoly> {
        let c = &self.ctx;
        let tau = c.tau_image();
        let mut acc = c.r2_ring().zero();
        for (j, x) in self.xs.iter().enumerate() {
            acc = &acc + &(&tau.pow(c.f_shift(j as i64) as u64) * x);
        }
        Ok(acc)
    }

    /// `S(expr)` for `expr ∈ R₁[τ]`. τ must appear with nonnegative integer
    /// exponents: fractional powers of `S(τ)` are not elements of `R₂`.
    pub fn eval(&self, sym: &SymbolicRing, expr: &ExactPoly) -> Result<ExactPoly> {
        if expr.ring() != sym.ring() {
            return Err(Error::Context("expression is not in the symbolic ring".into()));
        }
        let d = sym.ring().denom();
        for (e, _) in expr.terms() {
            if e[0] % d != 0 || e[0] < 0 {
                return Err(Error::Lattice(format!(
                    "τ^({}) has no image in R₂",
                    crate::algebra::rational::fmt_q(&sym.ring().from_lattice(e[0]))
                )));
            }
            if e[1..].iter().any(|x| x % d != 0 || *x < 0) {
                return Err(Error::Lattice("indeterminates must carry nonnegative integer exponents".into()));
            }
        }
        let r2 = self.ctx.r2_ring();
        let mut images = vec![self.ctx.tau_image()];
        images.extend(self.gamma.iter().cloned());
        images.extend(self.xs.iter().cloned());
        images.extend(sym.betas.iter().map(|&b| r2.constant(self.c_value(b))));
        expr.substitute(&images)
    }

    /// `P_k(S(expr))`.
    pub fn reduce(&self, sym: &SymbolicRing, expr: &ExactPoly, k: i64) -> Result<super::quotient::QuotientElem> {
        reduce_pk(&self.eval(sym, expr)?, self.which, k)
    }
}

/// `S(τ)` as a monomial of `[c, L]`.
pub fn tau_coords(ctx: &ParamContext, coords: &Ring) -> ExactPoly {
    let d = coords.denom();
    let c_exp = if ctx.u == 0 { ctx.shape.n * d / ctx.shape.m } else { ctx.shape.m * d / ctx.shape.n };
    coords.monomial(&[c_exp, d], Q::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Shape;

    fn worked() -> ParamContext {
        ParamContext::new(Shape::new(2, 3, 4, 8).unwrap(), 1, 15).unwrap()
    }

    #[test]
    fn tilde_elements_of_worked_instance() {
        let ctx = worked();
        let s = build_symbolic(&ctx, &Tschirnhausen::pure(2)).unwrap();
        let r = s.ring.ring();
        let e = r.parse("tau^4 + tau^3*Gamma5 + tau^2*Gamma4 + tau*Gamma3 + Gamma2 + Gamma1 + Gamma0").unwrap();
        assert_eq!(s.e_tilde, e);
        let f = r.parse("tau^3*xi7 + tau^2*xi6 + tau*xi5 + xi4 + xi3 + xi2 + xi1 + xi0").unwrap();
        assert_eq!(s.f_tilde, f);
        // t⁰ coefficient of H is (τ^{v_E-u_E})².
        assert_eq!(s.h.coeff(0).unwrap(), &s.ring.tau_pow(8));
        for (ex, _) in s.e_tilde.terms() {
            let deg = s.ring.degree(ex);
            assert!(deg <= q(6));
        }
    }

    #[test]
    fn pieces_are_homogeneous() {
        let ctx = worked();
        let sr = SymbolicRing::new(&ctx);
        let p = sr.pieces();
        for (j, piece) in p.e.iter().enumerate() {
            for (ex, _) in piece.terms() {
                assert_eq!(sr.degree(ex), q(j as i64));
            }
        }
        for (j, piece) in p.f.iter().enumerate() {
            for (ex, _) in piece.terms() {
                assert_eq!(sr.degree(ex), q(j as i64));
            }
        }
    }

    #[test]
    fn degree_mismatch_is_a_parameter_error() {
        let ctx = worked();
        assert!(matches!(build_symbolic(&ctx, &Tschirnhausen::pure(3)), Err(Error::Parameter(_))));
    }

    #[test]
    fn eval_on_powers_and_constants() {
        let ctx = ParamContext::new(Shape::new(2, 3, 4, 8).unwrap(), 1, 16).unwrap();
        let sr = SymbolicRing::new(&ctx);
        let r2 = ctx.r2_ring();
        let gamma = (0..ctx.v_e).map(|_| r2.zero()).collect();
        let xs = (0..=ctx.v_f).map(|_| r2.zero()).collect();
        let beta = ctx.admissible_betas()[0];
        let s = EvalMap::from_images(&ctx, gamma, xs, [(beta, q(5))].into()).unwrap();
        let t2 = s.eval(&sr, &sr.tau_pow(2)).unwrap();
        assert_eq!(t2, r2.parse("(x+1)^2*y^4").unwrap());
        assert_eq!(s.eval(&sr, &sr.c(beta).unwrap()).unwrap(), r2.constant(q(5)));
        let half = sr.ring().monomial(&{
            let mut e = vec![0; sr.ring().nvars()];
            e[0] = ctx.d / 2;
            e
        }, Q::one());
        assert!(matches!(s.eval(&sr, &half), Err(Error::Lattice(_))));
    }

    #[test]
    fn eval_map_from_generator_pieces() {
        // E° = (x+1)(x+y)² at (m, n) = (1, 2) scale, u = 1 index of (2,3,2,4).
        let ctx = ParamContext::new(Shape::new(2, 3, 2, 4).unwrap(), 1, 1).unwrap();
        let r = Ring::new(&["x", "y"], 1);
        let e = r.parse("(x+1)*(x+y)^2").unwrap();
        let s = EvalMap::from_parts(&ctx, &e, &r.zero(), BTreeMap::new()).unwrap();
        assert_eq!(s.e_image().unwrap(), e.embed(&ctx.r2_ring(), &[0, 1]).unwrap());
        let bad = r.parse("x^3 + y").unwrap();
        assert!(matches!(EvalMap::from_parts(&ctx, &bad, &r.zero(), BTreeMap::new()), Err(Error::Precondition(_))));
    }
}
