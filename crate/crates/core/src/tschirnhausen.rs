//! Tschirnhausen decompositions: the polynomial `Q` with `Q^a` matching `F`
//! on the upper corner region, its deepest decomposition `Q = α(E)` and the
//! remainder `F° = F - α°(E°)`.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::rational::{divisors, fmt_q, gcd_i64, q, qf, rational_root, Q};
use crate::algebra::{divisible_by_binomial_power, ExactPoly, Exps, Ring, UniPoly};
use crate::error::{Error, Result};
use crate::geometry::{newton0, trapezoid, trapezoid_int, LatticePolygon, Point, Shape};
use crate::grading::{w_decompose, Direction};

/// Monic `α(z) = z^k + e_{k-2} z^{k-2} + ⋯ + e_0` with no `z^{k-1}` term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tschirnhausen(UniPoly);

impl Tschirnhausen {
    pub fn new(coeffs: Vec<Q>) -> Result<Self> {
        let p = UniPoly::new(coeffs);
        let k = p.degree().ok_or_else(|| Error::Parameter("zero is not a Tschirnhausen polynomial".into()))?;
        if k == 0 {
            return Err(Error::Parameter("Tschirnhausen polynomials have degree at least 1".into()));
        }
        if !p.coeff(k).is_one() {
            return Err(Error::Parameter(format!("{p} is not monic")));
        }
        if !p.coeff(k - 1).is_zero() {
            return Err(Error::Parameter(format!("{p} has a nonzero subleading coefficient")));
        }
        Ok(Tschirnhausen(p))
    }

    /// `z^k`.
    pub fn pure(k: usize) -> Self {
        Tschirnhausen(UniPoly::monomial(k, Q::one()))
    }

    pub fn degree(&self) -> usize {
        self.0.degree().expect("nonzero")
    }

    pub fn poly(&self) -> &UniPoly {
        &self.0
    }

    /// Coefficient of `z^k`.
    pub fn coeff(&self, k: usize) -> Q {
        self.0.coeff(k)
    }

    /// `α(E)` by Horner's rule.
    pub fn eval(&self, e: &ExactPoly) -> ExactPoly {
        let ring = e.ring();
        self.0
            .coeffs()
            .iter()
            .rev()
            .fold(ring.zero(), |acc, c| &(&acc * e) + &ring.constant(c.clone()))
    }

    /// `α^a` as a univariate polynomial; again Tschirnhausen.
    pub fn power(&self, a: u32) -> Self {
        Tschirnhausen(self.0.pow(a))
    }

    /// `α + λ z^k` for `k ≤ deg α - 2`.
    pub fn add_term(&self, k: usize, lambda: &Q) -> Self {
        debug_assert!(k + 2 <= self.degree());
        Tschirnhausen(self.0.add(&UniPoly::monomial(k, lambda.clone())))
    }
}

impl fmt::Display for Tschirnhausen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Tschirnhausen {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.coeffs().iter().map(fmt_q).collect();
        v.serialize(s)
    }
}

fn check_xy(f: &ExactPoly) -> Result<()> {
    let r = f.ring();
    if r.nvars() != 2 || r.denom() != 1 {
        return Err(Error::Context("expected a polynomial in two variables on the integer lattice".into()));
    }
    Ok(())
}

/// Lattice points of `T_{m/a, n/a}` ordered by the strictly decreasing key
/// `((m+n)x + (m+n+1)y, x)`; the corner `(m/a, n/a)` comes first.
fn ordered_points(ma: i64, na: i64, m: i64, n: i64) -> Vec<(i64, i64)> {
    let mut pts: Vec<(i64, i64)> = (0..=na).flat_map(|y| (0..=ma + na - y).map(move |x| (x, y))).collect();
    pts.sort_by_key(|&(x, y)| std::cmp::Reverse(((m + n) * x + (m + n + 1) * y, x)));
    pts
}

/// Coefficient of `x^t` in `(Σ c_j x^{p_j})^a`.
fn coeff_of_power(
    terms: &[((i64, i64), Q)],
    a: u32,
    target: (i64, i64),
    memo: &mut HashMap<(u32, (i64, i64)), Q>,
) -> Q {
    if a == 0 {
        return if target == (0, 0) { Q::one() } else { Q::zero() };
    }
    if target.0 < 0 || target.1 < 0 {
        return Q::zero();
    }
    if let Some(v) = memo.get(&(a, target)) {
        return v.clone();
    }
    let mut acc = Q::zero();
    for (p, c) in terms {
        let rest = (target.0 - p.0, target.1 - p.1);
        if rest.0 < 0 || rest.1 < 0 {
            continue;
        }
        let sub = coeff_of_power(terms, a - 1, rest, memo);
        if !sub.is_zero() {
            acc += c * sub;
        }
    }
    memo.insert((a, target), acc.clone());
    acc
}

/// The unique `Q` with `N^0(Q) ⊆ T_{m/a,n/a}`, corner term `1·x^{m/a}y^{n/a}`
/// and `supp(F - Q^a)` disjoint from the upper corner region.
pub fn extract_q(f: &ExactPoly, a: i64, m: i64, n: i64) -> Result<ExactPoly> {
    check_xy(f)?;
    if a < 1 || m % a != 0 || n % a != 0 {
        return Err(Error::Parameter(format!("a = {a} must divide m = {m} and n = {n}")));
    }
    let corner = f.coeff(&[m, n]);
    if !corner.is_one() {
        return Err(Error::Normalization(format!("coefficient of x^{m}*y^{n} is {}, expected 1", fmt_q(&corner))));
    }
    let nf = newton0(f)?;
    if let Some(v) = nf.vertex_outside(&trapezoid_int(m, n)) {
        return Err(Error::Precondition(format!(
            "N^0(F) has vertex ({},{}) outside T_{{{m},{n}}}",
            fmt_q(&v.0),
            fmt_q(&v.1)
        )));
    }
    let (ma, na) = (m / a, n / a);
    let shift = ((a - 1) * ma, (a - 1) * na);
    let pts = ordered_points(ma, na, m, n);
    debug_assert_eq!(pts[0], (ma, na));
    let mut terms: Vec<((i64, i64), Q)> = vec![((ma, na), Q::one())];
    let aq = q(a);
    for &z in &pts[1..] {
        let target = (z.0 + shift.0, z.1 + shift.1);
        let lambda = f.coeff(&[target.0, target.1]);
        let mut memo = HashMap::new();
        let known = coeff_of_power(&terms, a as u32, target, &mut memo);
        let qk = (lambda - known) / &aq;
        if !qk.is_zero() {
            terms.push((z, qk));
        }
    }
    let ring = f.ring();
    Ok(ring.from_terms(terms.into_iter().map(|((x, y), c)| (Exps::from_slice(&[x, y]), c))))
}

/// Points of `supp(f)` inside the closed polygon.
pub fn support_inside(f: &ExactPoly, region: &LatticePolygon) -> Vec<(i64, i64)> {
    let d = f.ring().denom();
    f.terms()
        .map(|(e, _)| (e[0], e[1]))
        .filter(|&(x, y)| region.contains_point(&(qf(x, d), qf(y, d))))
        .map(|(x, y)| (x / d, y / d))
        .collect()
}

/// Result of [`decompose_principal`].
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub e: ExactPoly,
    pub delta: usize,
    pub alpha: Tschirnhausen,
}

/// Homogeneous `δ`-th root of a `(1,1)`-homogeneous polynomial whose
/// grlex-leading coefficient is 1; the root has leading coefficient 1.
fn homogeneous_root(top: &ExactPoly, delta: u32) -> Option<ExactPoly> {
    // top = x^{i0} y^{j0} · p(y/x) with p(0) = 1 after factoring the leading x-power.
    let i_max = top.max_exp(0)?;
    let deg = top.terms().next().map(|(e, _)| e[0] + e[1])?;
    let len = (i_max - top.min_exp(0)?) as usize;
    let coeffs: Vec<Q> = (0..=len).map(|k| top.coeff(&[i_max - k as i64, deg - i_max + k as i64])).collect();
    if !coeffs[0].is_one() || i_max % delta as i64 != 0 || deg % delta as i64 != 0 {
        return None;
    }
    let g = UniPoly::new(coeffs).root(delta)?;
    let (ri, rd) = (i_max / delta as i64, deg / delta as i64);
    let terms = g
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| (Exps::from_slice(&[ri - k as i64, rd - ri + k as i64]), c.clone()));
    Some(top.ring().from_terms(terms.collect::<Vec<_>>()))
}

/// Try `P = α(E)` with `deg α = δ` for `P` whose grlex-leading coefficient is 1.
fn try_depth(p: &ExactPoly, delta: usize) -> Result<Option<(ExactPoly, Tschirnhausen)>> {
    let dec = w_decompose(p, Direction::Total)?;
    let big_d = dec.degree().finite().expect("nonconstant").to_integer();
    let big_d = i64::try_from(big_d).map_err(|_| Error::Domain("degree overflow".into()))?;
    if big_d % delta as i64 != 0 {
        return Ok(None);
    }
    let e_deg = big_d / delta as i64;
    let Some(top) = homogeneous_root(&dec.leading_form(), delta as u32) else {
        return Ok(None);
    };
    let dq = q(delta as i64);
    let lead_pow = top.pow(delta as u64 - 1).scale(&dq);
    let mut e = top;
    for j in 1..=e_deg {
        let target = dec.piece_int(big_d - j);
        let cur = w_decompose(&e.pow(delta as u64), Direction::Total)?.piece_int(big_d - j);
        let diff = &target - &cur;
        let Some(piece) = diff.exact_div(&lead_pow)? else {
            return Ok(None);
        };
        e = &e + &piece;
    }
    // E-adic expansion of the rest: R = Σ_{k ≤ δ-2} λ_k E^k.
    let mut rest = p - &e.pow(delta as u64);
    let mut coeffs = vec![Q::zero(); delta + 1];
    coeffs[delta] = Q::one();
    for k in (0..delta.saturating_sub(1)).rev() {
        if rest.is_zero() {
            break;
        }
        let rdeg = w_decompose(&rest, Direction::Total)?.degree().finite().expect("nonzero");
        let kdeg = q(k as i64 * e_deg);
        if rdeg > kdeg {
            return Ok(None);
        }
        if rdeg < kdeg {
            continue;
        }
        let ek = e.pow(k as u64);
        let (re, rc) = rest.leading_term().expect("nonzero");
        let ec = ek.coeff(re);
        if ec.is_zero() {
            return Ok(None);
        }
        let lambda = rc / ec;
        rest = &rest - &ek.scale(&lambda);
        coeffs[k] = lambda;
    }
    if !rest.is_zero() {
        return Ok(None);
    }
    Ok(Some((e, Tschirnhausen::new(coeffs)?)))
}

/// The deepest decomposition `Q = α(E)` over the rationals. `sign_at`
/// names the exponent whose coefficient in `E` is made positive (the
/// grlex-leading term when `None`).
pub fn decompose_principal_at(qp: &ExactPoly, sign_at: Option<&[i64]>) -> Result<Decomposition> {
    check_xy(qp)?;
    if qp.is_constant() {
        return Err(Error::Domain("a constant has no Tschirnhausen decomposition".into()));
    }
    let dec = w_decompose(qp, Direction::Total)?;
    let top = dec.leading_form();
    let (lead_e, lc) = top.leading_term().map(|(e, c)| (e.clone(), c.clone())).expect("nonzero");
    let last = top.terms().map(|(e, _)| e.clone()).min_by(|a, b| crate::algebra::poly::grlex(a, b)).expect("nonzero");
    let g = [lead_e[0], lead_e[1], last[0], last[1]].into_iter().fold(0, gcd_i64);
    let p = qp.scale(&lc.recip());
    for delta in divisors(g).into_iter().rev() {
        let delta = delta as usize;
        if delta == 1 {
            break;
        }
        let Some((e1, alpha1)) = try_depth(&p, delta)? else {
            continue;
        };
        // Q = lc·α1(E1) = α(c·E1) with c^δ = lc.
        let c = rational_root(&lc, delta as u32).ok_or_else(|| {
            Error::FieldExtension(format!(
                "Q decomposes with depth {delta} only after adjoining a {delta}-th root of {}",
                fmt_q(&lc)
            ))
        })?;
        let mut e = e1.scale(&c);
        let alpha = rescale_alpha(&alpha1, &lc, &c)?;
        let probe = sign_at.map(|s| e.coeff(s)).unwrap_or_else(|| e.leading_term().expect("nonzero").1.clone());
        if probe.is_negative() && delta % 2 == 0 {
            e = e.neg();
        }
        let out = Decomposition { e, delta, alpha };
        if out.alpha.eval(&out.e) != *qp {
            return Err(Error::Inconsistency("decomposition failed to recompose".into()));
        }
        return Ok(out);
    }
    Ok(Decomposition { e: qp.clone(), delta: 1, alpha: Tschirnhausen::pure(1) })
}

/// `lc·α1(E1)` rewritten as `α(c E1)` with `c^δ = lc`: `e_k = lc·e1_k / c^k`.
fn rescale_alpha(alpha1: &Tschirnhausen, lc: &Q, c: &Q) -> Result<Tschirnhausen> {
    let coeffs = alpha1
        .poly()
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, e)| lc * e / crate::algebra::rational::int_pow(c, k as i64))
        .collect();
    Tschirnhausen::new(coeffs)
}

/// The deepest decomposition with the default sign convention.
pub fn decompose_principal(qp: &ExactPoly) -> Result<Decomposition> {
    decompose_principal_at(qp, None)
}

/// Everything produced by [`minimize_remainder`].
#[derive(Clone, Debug)]
pub struct RemainderResult {
    pub shape: Shape,
    pub q: ExactPoly,
    pub e_circ: ExactPoly,
    pub delta: usize,
    pub alpha_q: Tschirnhausen,
    pub alpha_circ: Tschirnhausen,
    pub f_circ: ExactPoly,
    pub v_circ: LatticePolygon,
    /// `F - Q^a`.
    pub residue: ExactPoly,
}

impl RemainderResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "Q": self.q.to_json_value(),
            "Ecirc": self.e_circ.to_json_value(),
            "delta": self.delta,
            "alphaQ": self.alpha_q,
            "alphaCirc": self.alpha_circ,
            "Fcirc": self.f_circ.to_json_value(),
            "Vcirc": self.v_circ,
        })
    }
}

/// Upper corner region `T_{m/a,n/a} + ((a-1)/a)(m,n)`.
pub fn corner_region(shape: &Shape) -> LatticePolygon {
    let (a, m, n) = (shape.a, shape.m, shape.n);
    trapezoid(&qf(m, a), &qf(n, a)).translate(&(qf((a - 1) * m, a), qf((a - 1) * n, a)) as &Point)
}

/// Preconditions shared by the remainder computation: corner coefficient 1
/// and `N^0(F) ⊆ T_{m,n}`. With `strict`, the full shape conditions
/// `N^0(F) = T_{m,n}` and both divisibility families are required too.
pub fn check_remainder_preconditions(f: &ExactPoly, shape: &Shape, strict: bool) -> Result<()> {
    check_xy(f)?;
    let (m, n) = (shape.m, shape.n);
    if !f.coeff(&[m, n]).is_one() {
        return Err(Error::Precondition(format!("coefficient of x^{m}*y^{n} must be 1")));
    }
    let nf = newton0(f)?;
    let t = trapezoid_int(m, n);
    if !nf.is_subset_of(&t) {
        return Err(Error::Precondition(format!("N^0(F) = {nf} is not inside T_{{{m},{n}}}")));
    }
    if strict {
        if nf != t {
            return Err(Error::Precondition(format!("N^0(F) = {nf} differs from T_{{{m},{n}}}")));
        }
        if let Some(i) = crate::grading::condition_a(f, m, n)? {
            return Err(Error::Precondition(format!("F^(0,1)_{} is not divisible by (x+1)^{}", n - i, m - i)));
        }
        if let Some(i) = crate::grading::condition_b(f, m, n)? {
            return Err(Error::Precondition(format!("F^(1,1)_{} is not divisible by (x+y)^{}", m + n - i, n - i)));
        }
    }
    Ok(())
}

/// `F° = F - α°(E°)` with `α°` improved greedily from `α_Q^a`: for each
/// `k ≤ aδ - 2` and each vertex of `N^0(F°)`, try the `λ` cancelling that
/// vertex with `λ E°^k`; accept when `N^0` shrinks and the corner region
/// stays free. Stops when no single such move helps.
pub fn minimize_remainder(f: &ExactPoly, shape: &Shape, strict: bool) -> Result<RemainderResult> {
    check_remainder_preconditions(f, shape, strict)?;
    let (a, m, n) = (shape.a, shape.m, shape.n);
    let qp = extract_q(f, a, m, n)?;
    let corner_q = [m / a, n / a];
    let dec = decompose_principal_at(&qp, Some(&corner_q))?;
    let delta = dec.delta as i64;
    let corner_e = [m / (a * delta), n / (a * delta)];
    let ce = dec.e.coeff(&corner_e);
    if !ce.is_one() {
        return Err(Error::Normalization(format!(
            "generator corner coefficient is {} (a root of unity other than 1 would be needed)",
            fmt_q(&ce)
        )));
    }
    let residue = f - &qp.pow(a as u64);
    let alpha_q = dec.alpha.clone();
    let mut alpha = alpha_q.power(a as u32);
    let region = corner_region(shape);
    let mut f_circ = f - &alpha.eval(&dec.e);
    if !support_inside(&f_circ, &region).is_empty() {
        return Err(Error::Inconsistency("F - Q^a meets the corner region".into()));
    }
    let powers: Vec<ExactPoly> = (0..=alpha.degree()).map(|k| dec.e.pow(k as u64)).collect();
    let mut v_circ = newton0(&f_circ)?;
    'outer: loop {
        for k in (0..=alpha.degree().saturating_sub(2)).rev() {
            for cand in improving_moves(&f_circ, &v_circ, &powers[k], &region)? {
                alpha = alpha.add_term(k, &cand.0);
                f_circ = cand.1;
                v_circ = cand.2;
                continue 'outer;
            }
        }
        break;
    }
    debug_assert_eq!(f, &(&alpha.eval(&dec.e) + &f_circ));
    Ok(RemainderResult {
        shape: *shape,
        q: qp,
        e_circ: dec.e,
        delta: dec.delta,
        alpha_q,
        alpha_circ: alpha,
        f_circ,
        v_circ,
        residue,
    })
}

type Move = (Q, ExactPoly, LatticePolygon);

/// Single-coefficient moves `F° ↦ F° - λ E^k` that strictly shrink `N^0(F°)`.
fn improving_moves(f_circ: &ExactPoly, v: &LatticePolygon, ek: &ExactPoly, region: &LatticePolygon) -> Result<Vec<Move>> {
    let mut out = Vec::new();
    let mut seen: Vec<Q> = Vec::new();
    for (vx, vy) in v.vertices() {
        let (Some(x), Some(y)) = (crate::algebra::rational::to_i64_exact(vx), crate::algebra::rational::to_i64_exact(vy)) else {
            continue;
        };
        let fc = f_circ.coeff(&[x, y]);
        let ec = ek.coeff(&[x, y]);
        if fc.is_zero() || ec.is_zero() {
            continue;
        }
        let lambda = fc / ec;
        if seen.contains(&lambda) {
            continue;
        }
        seen.push(lambda.clone());
        let cand = f_circ - &ek.scale(&lambda);
        let nv = newton0(&cand)?;
        if nv != *v && nv.is_subset_of(v) && support_inside(&cand, region).is_empty() {
            out.push((lambda, cand, nv));
        }
    }
    Ok(out)
}

/// Whether no single-coefficient move improves the result.
pub fn is_locally_minimal(r: &RemainderResult) -> Result<bool> {
    let region = corner_region(&r.shape);
    for k in 0..=r.alpha_circ.degree().saturating_sub(2) {
        let ek = r.e_circ.pow(k as u64);
        if !improving_moves(&r.f_circ, &r.v_circ, &ek, &region)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One checked assertion with a failing monomial when it does not hold.
#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub holds: bool,
    pub witness: Option<String>,
}

fn compare(name: String, got: &ExactPoly, want: &ExactPoly) -> Assertion {
    let diff = got - want;
    let witness = diff.sorted_terms().first().map(|(e, _)| format!("coefficient {} at x^{}*y^{}", fmt_q(&(got.coeff(e))), e[0], e[1]));
    Assertion { name, holds: diff.is_zero(), witness }
}

fn divisibility(name: String, piece: &ExactPoly, l: &ExactPoly, k: i64) -> Result<Assertion> {
    let holds = divisible_by_binomial_power(piece, l, k)?;
    Ok(Assertion { name, holds, witness: (!holds).then(|| piece.to_string()) })
}

/// Leading-piece identities for `Q`, `E°` and the residue bound.
pub fn verify_leading_structure(r: &RemainderResult) -> Result<Vec<Assertion>> {
    let Shape { a, m, n, .. } = r.shape;
    let d = r.delta as i64;
    let ring: &Ring = r.q.ring();
    let x1 = ring.parse("x + 1")?;
    let xy = ring.parse("x + y")?;
    let mut out = Vec::new();

    let q01 = w_decompose(&r.q, Direction::Y)?;
    let q11 = w_decompose(&r.q, Direction::Total)?;
    out.push(compare(format!("Q^(0,1)_{} = (x+1)^{}*y^{}", n / a, m / a, n / a), &q01.piece_int(n / a), &ring.parse(&format!("(x+1)^{}*y^{}", m / a, n / a))?));
    out.push(compare(format!("Q^(1,1)_{} = x^{}*(x+y)^{}", (m + n) / a, m / a, n / a), &q11.piece_int((m + n) / a), &ring.parse(&format!("x^{}*(x+y)^{}", m / a, n / a))?));

    let (me, ne) = (m / (a * d), n / (a * d));
    let e01 = w_decompose(&r.e_circ, Direction::Y)?;
    let e11 = w_decompose(&r.e_circ, Direction::Total)?;
    out.push(compare(format!("E^(0,1)_{ne} = (x+1)^{me}*y^{ne}"), &e01.piece_int(ne), &ring.parse(&format!("(x+1)^{me}*y^{ne}"))?));
    out.push(compare(format!("E^(1,1)_{} = x^{me}*(x+y)^{ne}", me + ne), &e11.piece_int(me + ne), &ring.parse(&format!("x^{me}*(x+y)^{ne}"))?));

    let bound = n - m / a - 1;
    let bad = r.residue.terms().map(|(e, _)| e.clone()).filter(|e| e[1] > bound).max_by_key(|e| e[1]);
    out.push(Assertion {
        name: format!("F - Q^a has (0,1)-degree <= {bound}"),
        holds: bad.is_none(),
        witness: bad.map(|e| format!("x^{}*y^{}", e[0], e[1])),
    });
    for i in 0..=m / a {
        out.push(divisibility(format!("(x+1)^{} | Q^(0,1)_{}", m / a - i, n / a - i), &q01.piece_int(n / a - i), &x1, m / a - i)?);
    }
    for i in 0..=me {
        out.push(divisibility(format!("(x+1)^{} | E^(0,1)_{}", me - i, ne - i), &e01.piece_int(ne - i), &x1, me - i)?);
    }
    for i in 0..=ne {
        out.push(divisibility(format!("(x+y)^{} | E^(1,1)_{}", ne - i, me + ne - i), &e11.piece_int(me + ne - i), &xy, ne - i)?);
    }
    Ok(out)
}
