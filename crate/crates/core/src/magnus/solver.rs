//! Magnus coefficients: the constants `c_β` with
//! `G_{e-μ} = Σ_{β ≤ μ} c_β [h(F)^{(e-β)/d}]_{t^{μ-β}}`.
//!
//! Multiplying through by `ρ^{rμ}` (`ρ^r = F_d`) keeps every term
//! polynomial: with `N_0 = 1` and
//! `N_k(A) = (1/k) Σ_{j=1}^{k} ((A+1)j - k) F_d^{j-1} F_{d-j} N_{k-j}(A)`
//! one has `[h(F)^A]_{t^k} = ρ^{rA} N_k(A) / F_d^k`, so the system reads
//! `G_{e-μ} ρ^{rμ} = Σ_β c_β ρ^{r(A_β + β)} N_{μ-β}(A_β)`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::rational::{divisors, falling_factorial, factorial, fmt_q, gcd_i64, q, qf, rational_root, Q};
use crate::algebra::{ExactPoly, Exps, UniPoly};
use crate::error::{Error, Result};
use crate::grading::{w_decompose, Direction, GradedDecomposition};

/// `ρ` with `ρ^r = F_d`, `r` maximal over the rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousRoot {
    pub rho: ExactPoly,
    pub r: i64,
    /// Set when a larger `r` works after adjoining a root of the leading constant.
    pub note: Option<String>,
}

fn step_coord(w: Direction, e: &[i64]) -> i64 {
    match w {
        Direction::X => e[1],
        _ => e[0],
    }
}

fn step_vec(w: Direction) -> [i64; 2] {
    match w {
        Direction::Y => [1, 0],
        Direction::Total => [1, -1],
        Direction::X => [0, 1],
    }
}

/// Largest rational `r`-th root of a `w`-homogeneous `f`. Even roots are
/// normalized so that the coefficient at `corner` (when given and present),
/// else the grlex-leading coefficient, is positive.
pub fn root_of_homogeneous_at(f: &ExactPoly, w: Direction, corner: Option<&[i64]>) -> Result<HomogeneousRoot> {
    if f.is_zero() {
        return Err(Error::Root("root of the zero polynomial".into()));
    }
    let dec = w_decompose(f, w)?;
    if dec.pieces.len() != 1 {
        return Err(Error::Grading(format!("{f} is not {w}-homogeneous")));
    }
    let ring = f.ring();
    let dd = ring.denom();
    let min = f.terms().map(|(e, _)| step_coord(w, e)).min().expect("nonzero");
    let g = f.terms().fold(0, |acc, (e, _)| gcd_i64(acc, step_coord(w, e) - min));
    let base: Exps = f
        .terms()
        .find(|(e, _)| step_coord(w, e) == min)
        .map(|(e, _)| e.clone())
        .expect("nonzero");
    let sv = step_vec(w);
    let deg = if g == 0 { 0 } else { f.terms().map(|(e, _)| (step_coord(w, e) - min) / g).max().expect("nonzero") };
    let mut coeffs = vec![Q::zero(); deg as usize + 1];
    for (e, c) in f.terms() {
        let k = if g == 0 { 0 } else { (step_coord(w, e) - min) / g };
        coeffs[k as usize] = c.clone();
    }
    let c0 = coeffs[0].clone();
    let p = UniPoly::new(coeffs.iter().map(|c| c / &c0).collect());
    let unit = if f.terms().all(|(e, _)| e.iter().all(|x| x % dd == 0)) { dd } else { 1 };
    let bound = [deg, base[0] / unit, base[1] / unit].iter().fold(0, |a, &b| gcd_i64(a, b));
    let bound = if bound == 0 { 1 } else { bound };
    let mut note = None;
    for r in divisors(bound).into_iter().rev() {
        let Some(root) = p.root(r as u32) else { continue };
        let Some(c0r) = rational_root(&c0, r as u32) else {
            if note.is_none() {
                note = Some(format!(
                    "F_d is an {r}-th power over an extension: the constant {} has no rational {r}-th root",
                    fmt_q(&c0)
                ));
            }
            continue;
        };
        let terms = root.coeffs().iter().enumerate().map(|(k, c)| {
            let k = k as i64;
            let e = Exps::from_slice(&[base[0] / r + k * g * sv[0], base[1] / r + k * g * sv[1]]);
            (e, c * &c0r)
        });
        let mut rho = ring.from_terms(terms.collect::<Vec<_>>());
        if r % 2 == 0 {
            let lead = corner
                .map(|e| rho.coeff(e))
                .filter(|c| !c.is_zero())
                .unwrap_or_else(|| rho.leading_term().map(|(_, c)| c.clone()).expect("nonzero"));
            if lead.is_negative() {
                rho = rho.neg();
            }
        }
        debug_assert_eq!(rho.pow(r as u64), *f);
        return Ok(HomogeneousRoot { rho, r, note });
    }
    unreachable!("r = 1 always succeeds")
}

pub fn root_of_homogeneous(f: &ExactPoly, w: Direction) -> Result<HomogeneousRoot> {
    root_of_homogeneous_at(f, w, None)
}

/// Solution of the triangular system.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MagnusCoefficients {
    #[serde(serialize_with = "ser_qs")]
    pub c: Vec<Q>,
    #[serde(serialize_with = "ser_poly")]
    pub rho: ExactPoly,
    pub r: i64,
    pub d: i64,
    pub e: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn ser_qs<S: serde::Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fmt_q))
}

fn ser_poly<S: serde::Serializer>(p: &ExactPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

impl MagnusCoefficients {
    pub fn last(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn is_admissible(&self, beta: i64) -> bool {
        (self.r * (self.e - beta)) % self.d == 0
    }

    /// Indices with nonzero coefficient.
    pub fn support(&self) -> Vec<i64> {
        self.c.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i as i64).collect()
    }

    /// `c_β` as a map over `β ≥ 1`, zeros included.
    pub fn as_map(&self) -> BTreeMap<i64, Q> {
        self.c.iter().enumerate().skip(1).map(|(i, c)| (i as i64, c.clone())).collect()
    }
}

/// Graded data shared by the solver and the verification route.
struct Graded {
    f: GradedDecomposition,
    g: GradedDecomposition,
    d: i64,
    e: i64,
}

fn graded(f: &ExactPoly, g: &ExactPoly, w: Direction) -> Result<Graded> {
    if f.ring() != g.ring() {
        return Err(Error::Context("F and G live in different rings".into()));
    }
    if g.is_zero() {
        return Err(Error::Domain("G = 0 has no w-degree".into()));
    }
    let fd = w_decompose(f, w)?;
    let gd = w_decompose(g, w)?;
    let int = |x: Q| -> Result<i64> {
        crate::algebra::rational::to_i64_exact(&x).ok_or_else(|| Error::Grading(format!("non-integral degree {}", fmt_q(&x))))
    };
    let d = int(fd.degree().finite().ok_or_else(|| Error::Domain("F = 0".into()))?)?;
    let e = int(gd.degree().finite().expect("nonzero"))?;
    if d <= 0 {
        return Err(Error::Domain(format!("w-deg F = {d} must be positive")));
    }
    for k in fd.pieces.keys().chain(gd.pieces.keys()) {
        int(k.clone())?;
    }
    Ok(Graded { f: fd, g: gd, d, e })
}

/// `N_k(A)` for `k = 0..=kmax`.
fn n_series(gr: &Graded, a: &Q, kmax: usize, fd_pows: &mut Vec<ExactPoly>) -> Vec<ExactPoly> {
    let fd = gr.f.leading_form();
    while fd_pows.len() < kmax + 1 {
        let next = match fd_pows.last() {
            None => fd.ring().one(),
            Some(p) => p * &fd,
        };
        fd_pows.push(next);
    }
    let a1 = a + Q::one();
    let mut n = vec![fd.ring().one()];
    for k in 1..=kmax {
        let mut acc = fd.ring().zero();
        for j in 1..=k {
            let fj = gr.f.piece_int(gr.d - j as i64);
            if fj.is_zero() || n[k - j].is_zero() {
                continue;
            }
            let wgt = &a1 * q(j as i64) - q(k as i64);
            if wgt.is_zero() {
                continue;
            }
            acc = &acc + &(&(&fd_pows[j - 1] * &fj) * &n[k - j]).scale(&wgt);
        }
        n.push(acc.scale(&qf(1, k as i64)));
    }
    n
}

/// Solve for `c_0..c_{d+e-u-v-1}` by triangular elimination.
pub fn solve_magnus(f: &ExactPoly, g: &ExactPoly, w: Direction) -> Result<MagnusCoefficients> {
    solve_magnus_at(f, g, w, None)
}

/// As [`solve_magnus`], normalizing `ρ` at the given exponent.
pub fn solve_magnus_at(f: &ExactPoly, g: &ExactPoly, w: Direction, corner: Option<&[i64]>) -> Result<MagnusCoefficients> {
    let gr = graded(f, g, w)?;
    let root = root_of_homogeneous_at(&gr.f.leading_form(), w, corner)?;
    let (d, e, r) = (gr.d, gr.e, root.r);
    let (u, v) = w.weights();
    let last = d + e - u - v - 1;
    if last < 0 {
        return Err(Error::Domain(format!("empty index range: d + e - u - v - 1 = {last}")));
    }
    let mut rho_pows: Vec<ExactPoly> = vec![f.ring().one()];
    let mut rho_pow = |k: i64| -> ExactPoly {
        while rho_pows.len() <= k as usize {
            let next = rho_pows.last().expect("nonempty") * &root.rho;
            rho_pows.push(next);
        }
        rho_pows[k as usize].clone()
    };
    let admissible = |beta: i64| (r * (e - beta)) % d == 0;
    let mut fd_pows = Vec::new();
    let mut ns: BTreeMap<i64, Vec<ExactPoly>> = BTreeMap::new();
    let mut c: Vec<Q> = Vec::with_capacity(last as usize + 1);
    for mu in 0..=last {
        let mut res = &gr.g.piece_int(e - mu) * &rho_pow(r * mu);
        for (beta, cb) in c.iter().enumerate() {
            let beta = beta as i64;
            if cb.is_zero() {
                continue;
            }
            let a = qf(e - beta, d);
            let nb = ns.entry(beta).or_insert_with(|| n_series(&gr, &a, (last - beta) as usize, &mut fd_pows));
            let pw = r * (e - beta) / d + r * beta;
            res = &res - &(&rho_pow(pw) * &nb[(mu - beta) as usize]).scale(cb);
        }
        if admissible(mu) {
            let target = rho_pow(r * (e - mu) / d + r * mu);
            let ratio = match (res.leading_term(), target.leading_term()) {
                (None, _) => Q::zero(),
                (Some((re, rc)), Some((te, tc))) if re == te => rc / tc,
                _ => return Err(inconsistent(mu, &res)),
            };
            if res != target.scale(&ratio) {
                return Err(inconsistent(mu, &res));
            }
            if mu == 0 && ratio.is_zero() {
                return Err(Error::Inconsistency("c_0 vanishes".into()));
            }
            c.push(ratio);
        } else {
            if !res.is_zero() {
                return Err(inconsistent(mu, &res));
            }
            c.push(Q::zero());
        }
    }
    Ok(MagnusCoefficients { c, rho: root.rho, r, d, e, note: root.note })
}

fn inconsistent(mu: i64, res: &ExactPoly) -> Error {
    Error::Inconsistency(format!("residual at μ = {mu} is not a multiple of the required power of ρ: {res}"))
}

/// Check the identity for every `μ` through the multinomial expansion
/// `[h(F)^A]_{t^k} = Σ_v A^{(|v|)}/Π v_j! · F_d^{A-|v|} Π F_{d-j}^{v_j}`,
/// independent of the recurrence used by the solver. Terms are grouped by
/// `s = |v|`: the inner sum is `[t^k] T^s / s!` with `T = Σ_{j≥1} F_{d-j} t^j`.
/// Returns the first failing `μ`, if any.
pub fn verify_magnus(f: &ExactPoly, g: &ExactPoly, w: Direction, m: &MagnusCoefficients) -> Result<Option<i64>> {
    let gr = graded(f, g, w)?;
    let (d, e, r) = (gr.d, gr.e, m.r);
    if m.rho.pow(r as u64) != gr.f.leading_form() {
        return Ok(Some(0));
    }
    let last = m.last().max(0) as usize;
    let tail: Vec<ExactPoly> = (0..=last).map(|j| if j == 0 { f.ring().zero() } else { gr.f.piece_int(d - j as i64) }).collect();
    // tail_pows[s][k] = [t^k] T^s, truncated at t^last.
    let mut tail_pows: Vec<Vec<ExactPoly>> = vec![(0..=last).map(|k| if k == 0 { f.ring().one() } else { f.ring().zero() }).collect()];
    for s in 1..=last {
        let prev = &tail_pows[s - 1];
        let next: Vec<ExactPoly> = (0..=last)
            .map(|k| {
                let mut acc = f.ring().zero();
                for j in 1..=k {
                    if !tail[j].is_zero() && !prev[k - j].is_zero() {
                        acc = &acc + &(&tail[j] * &prev[k - j]);
                    }
                }
                acc
            })
            .collect();
        tail_pows.push(next);
    }
    let mut rho_pows = vec![f.ring().one()];
    let mut rho_pow = |k: usize| -> ExactPoly {
        while rho_pows.len() <= k {
            let next = rho_pows.last().expect("nonempty") * &m.rho;
            rho_pows.push(next);
        }
        rho_pows[k].clone()
    };
    for mu in 0..=m.last() {
        let lhs = &gr.g.piece_int(e - mu) * &rho_pow((r * mu) as usize);
        let mut rhs = f.ring().zero();
        for beta in 0..=mu {
            let cb = &m.c[beta as usize];
            if cb.is_zero() {
                continue;
            }
            let a = qf(e - beta, d);
            let k = (mu - beta) as usize;
            for size in 0..=k {
                let term = &tail_pows[size][k];
                if term.is_zero() {
                    continue;
                }
                let weight = falling_factorial(&a, size as u64) / Q::from_integer(factorial(size as u64));
                if weight.is_zero() {
                    continue;
                }
                // ρ^{rA + rμ - r|v|} with rA + rμ - r|v| ≥ r(A + β) ≥ 0.
                let pw = r * (e - beta) / d + r * mu - r * size as i64;
                rhs = &rhs + &(term * &rho_pow(pw as usize)).scale(&(weight * cb));
            }
        }
        if lhs != rhs {
            return Ok(Some(mu));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Ring;

    fn r() -> Ring {
        Ring::new(&["x", "y"], 1)
    }

    #[test]
    fn roots() {
        let f = r().parse("(x+1)^4*y^8").unwrap();
        let h = root_of_homogeneous(&f, Direction::Y).unwrap();
        assert_eq!((h.rho, h.r), (r().parse("(x+1)*y^2").unwrap(), 4));
        let h = root_of_homogeneous(&r().parse("x*(x+y)").unwrap(), Direction::Total).unwrap();
        assert_eq!((h.rho, h.r), (r().parse("x*(x+y)").unwrap(), 1));
        let h = root_of_homogeneous(&r().parse("x^2*(x+y)^2").unwrap(), Direction::Total).unwrap();
        assert_eq!((h.rho, h.r), (r().parse("x*(x+y)").unwrap(), 2));
        let h = root_of_homogeneous(&r().parse("2*x^2").unwrap(), Direction::Total).unwrap();
        assert_eq!(h.r, 1);
        assert!(h.note.is_some());
        let h = root_of_homogeneous(&r().parse("-8*y^3").unwrap(), Direction::Y).unwrap();
        assert_eq!((h.rho, h.r), (r().parse("-2*y").unwrap(), 3));
    }

    #[test]
    fn g_equal_f() {
        let f = r().parse("x^2 + x*y + 1").unwrap();
        let m = solve_magnus(&f, &f, Direction::Total).unwrap();
        assert_eq!(m.c, vec![q(1), q(0)]);
    }

    #[test]
    fn square_plus_f() {
        let f = r().parse("x^2 + x*y + 1").unwrap();
        let g = r().parse("(x^2 + x*y + 1)^2 + x^2 + x*y + 1").unwrap();
        let m = solve_magnus(&f, &g, Direction::Total).unwrap();
        assert_eq!(m.c, vec![q(1), q(0), q(1), q(0)]);
        assert_eq!(verify_magnus(&f, &g, Direction::Total, &m).unwrap(), None);
    }

    #[test]
    fn incompatible_pair_is_inconsistent() {
        let f = r().parse("x^2 + x*y + 1").unwrap();
        let g = r().parse("(x^2 + x*y + 1)^2 + x").unwrap();
        assert!(matches!(solve_magnus(&f, &g, Direction::Total), Err(Error::Inconsistency(_))));
    }

    #[test]
    fn fractional_exponents() {
        let f = r().parse("(x^2 + y)^2 + 1").unwrap();
        let g = r().parse("((x^2 + y)^2 + 1)^3 - 2*((x^2 + y)^2 + 1)").unwrap();
        let m = solve_magnus(&f, &g, Direction::Total).unwrap();
        assert_eq!((m.r, m.rho.to_string()), (4, "x".to_string()));
        assert_eq!(verify_magnus(&f, &g, Direction::Total, &m).unwrap(), None);
        assert_eq!(m.c[0], q(1));
        assert_eq!(m.c[8], q(-2));
    }
}
