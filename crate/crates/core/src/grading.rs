//! Weighted gradings by the directions `(0,1)`, `(1,1)`, `(1,0)`, the
//! changes of variables `x ↦ z - 1`, `y ↦ w - x` and their inverses, and
//! homogenization in an auxiliary variable `t`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::division::divisible_by_binomial_power;
use crate::algebra::rational::{fmt_q, q, Q};
use crate::algebra::{ExactPoly, Ring, TruncSeries};
use crate::error::{Error, Result};
use crate::geometry::{newton0, t1, t2, t3, trapezoid_int, LatticePolygon};

/// A value or `-∞`; the degree and length of the zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended<T> {
    NegInf,
    Fin(T),
}

impl<T> Extended<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Extended::NegInf => None,
            Extended::Fin(v) => Some(v),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => write!(f, "-inf"),
            Extended::Fin(v) => write!(f, "{v}"),
        }
    }
}

/// Weight vector `(u, v)`: the monomial `x^i y^j` has degree `u·i + v·j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    /// `(0,1)`
    Y,
    /// `(1,1)`
    Total,
    /// `(1,0)`
    X,
}

impl Direction {
    pub fn weights(self) -> (i64, i64) {
        match self {
            Direction::Y => (0, 1),
            Direction::Total => (1, 1),
            Direction::X => (1, 0),
        }
    }

    pub fn from_weights(u: i64, v: i64) -> Result<Self> {
        match (u, v) {
            (0, 1) => Ok(Direction::Y),
            (1, 1) => Ok(Direction::Total),
            (1, 0) => Ok(Direction::X),
            _ => Err(Error::Grading(format!("({u},{v}) is not one of (0,1), (1,1), (1,0)"))),
        }
    }

    /// Degree in lattice units of an exponent vector of a bivariate ring.
    pub fn lattice_degree(self, e: &[i64]) -> i64 {
        let (u, v) = self.weights();
        u * e[0] + v * e[1]
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (u, v) = self.weights();
        write!(f, "({u},{v})")
    }
}

fn check_bivariate(f: &ExactPoly) -> Result<()> {
    if f.ring().nvars() == 2 {
        Ok(())
    } else {
        Err(Error::Grading(format!("gradings need two variables, got {:?}", f.ring().vars())))
    }
}

/// Homogeneous pieces keyed by their (rational) degree.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedDecomposition {
    pub w: Direction,
    pub pieces: BTreeMap<Q, ExactPoly>,
    ring: Ring,
}

impl GradedDecomposition {
    /// Degree of the leading form, `-∞` for zero.
    pub fn degree(&self) -> Extended<Q> {
        self.pieces.keys().next_back().cloned().map_or(Extended::NegInf, Extended::Fin)
    }

    /// The leading form `f_+` (zero for `f = 0`).
    pub fn leading_form(&self) -> ExactPoly {
        self.pieces.values().next_back().cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Piece of degree `d` (zero when absent).
    pub fn piece(&self, d: &Q) -> ExactPoly {
        self.pieces.get(d).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn piece_int(&self, d: i64) -> ExactPoly {
        self.piece(&q(d))
    }

    /// Sum of the pieces.
    pub fn recompose(&self) -> ExactPoly {
        self.pieces.values().fold(self.ring.zero(), |acc, p| &acc + p)
    }
}

/// Split `f` into `w`-homogeneous pieces.
pub fn w_decompose(f: &ExactPoly, w: Direction) -> Result<GradedDecomposition> {
    check_bivariate(f)?;
    let d = f.ring().denom();
    let mut buckets: BTreeMap<i64, Vec<_>> = BTreeMap::new();
    for (e, c) in f.terms() {
        buckets.entry(w.lattice_degree(e)).or_default().push((e.clone(), c.clone()));
    }
    let pieces = buckets
        .into_iter()
        .map(|(k, ts)| (Q::new(k.into(), d.into()), f.ring().from_terms(ts)))
        .collect();
    Ok(GradedDecomposition { w, pieces, ring: f.ring().clone() })
}

/// `w`-degree of `f`, `-∞` for zero.
pub fn w_degree(f: &ExactPoly, w: Direction) -> Result<Extended<Q>> {
    Ok(w_decompose(f, w)?.degree())
}

/// `len(h)` for a `w`-homogeneous `h`: number of lattice steps between the
/// extreme terms along the grading line; `-∞` for zero.
pub fn len_of(h: &ExactPoly, w: Direction) -> Result<Extended<i64>> {
    let dec = w_decompose(h, w)?;
    if dec.pieces.len() > 1 {
        return Err(Error::Grading(format!("{h} is not {w}-homogeneous")));
    }
    if h.is_zero() {
        return Ok(Extended::NegInf);
    }
    // Steps run along (v, -u): the x-exponent moves unless w = (1,0).
    let var = if w == Direction::X { 1 } else { 0 };
    let span = h.max_exp(var).expect("nonzero") - h.min_exp(var).expect("nonzero");
    let d = h.ring().denom();
    if span % d != 0 {
        return Err(Error::Grading(format!("{h} has terms off the integer grading line")));
    }
    Ok(Extended::Fin(span / d))
}

/// The changes of variables and their inverses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Phi {
    /// `x ↦ z - 1, y ↦ y`
    Zy,
    /// `x ↦ x, y ↦ w - x`
    Xw,
    /// `x ↦ z - 1, y ↦ w + 1 - z`
    Zw,
    /// `z ↦ x + 1, y ↦ y`
    ZyInv,
    /// `x ↦ x, w ↦ x + y`
    XwInv,
    /// `z ↦ x + 1, w ↦ x + y`
    ZwInv,
}

impl Phi {
    pub fn inverse(self) -> Phi {
        match self {
            Phi::Zy => Phi::ZyInv,
            Phi::Xw => Phi::XwInv,
            Phi::Zw => Phi::ZwInv,
            Phi::ZyInv => Phi::Zy,
            Phi::XwInv => Phi::Xw,
            Phi::ZwInv => Phi::Zw,
        }
    }

    /// Variable names of the target ring.
    pub fn target_vars(self) -> [&'static str; 2] {
        match self {
            Phi::Zy => ["z", "y"],
            Phi::Xw => ["x", "w"],
            Phi::Zw => ["z", "w"],
            Phi::ZyInv | Phi::XwInv | Phi::ZwInv => ["x", "y"],
        }
    }

    /// Images of the two source variables, as expressions in the target variables.
    fn images(self) -> [&'static str; 2] {
        match self {
            Phi::Zy => ["z - 1", "y"],
            Phi::Xw => ["x", "w - x"],
            Phi::Zw => ["z - 1", "w + 1 - z"],
            Phi::ZyInv => ["x + 1", "y"],
            Phi::XwInv => ["x", "x + y"],
            Phi::ZwInv => ["x + 1", "x + y"],
        }
    }
}

/// Apply a change of variables. The target ring reuses the lattice of `f`.
pub fn apply_phi(f: &ExactPoly, which: Phi) -> Result<ExactPoly> {
    check_bivariate(f)?;
    let target = Ring::new(&which.target_vars(), f.ring().denom());
    let imgs = which.images();
    let images = [target.parse(imgs[0])?, target.parse(imgs[1])?];
    f.substitute(&images)
}

/// `h(f) = Σ_j f_j t^{deg f - j}` for a degree function given in lattice units
/// of `unit`: the piece of degree `deg f - μ·unit` lands at `t^μ`.
/// Fails when some gap is not a multiple of `unit`.
pub fn homogenize_by<D: Fn(&[i64]) -> i64>(f: &ExactPoly, degree: D, unit: i64) -> Result<TruncSeries<ExactPoly>> {
    if f.is_zero() {
        return Ok(TruncSeries::new(&f.ring().zero(), vec![f.ring().zero()], 1));
    }
    let top = f.terms().map(|(e, _)| degree(e)).max().expect("nonzero");
    let mut buckets: BTreeMap<usize, Vec<_>> = BTreeMap::new();
    for (e, c) in f.terms() {
        let gap = top - degree(e);
        if gap % unit != 0 {
            return Err(Error::Homogenization(format!(
                "term with degree gap {} is not an integer multiple of the t-unit",
                fmt_q(&Q::new(gap.into(), unit.into()))
            )));
        }
        buckets.entry((gap / unit) as usize).or_default().push((e.clone(), c.clone()));
    }
    let order = buckets.keys().next_back().copied().unwrap_or(0) + 1;
    let mut coeffs = vec![f.ring().zero(); order];
    for (k, ts) in buckets {
        coeffs[k] = f.ring().from_terms(ts);
    }
    Ok(TruncSeries::new(&f.ring().zero(), coeffs, order))
}

/// `h(f)` for a direction; pieces must sit at integer gaps below `deg f`.
pub fn homogenize(f: &ExactPoly, w: Direction) -> Result<TruncSeries<ExactPoly>> {
    check_bivariate(f)?;
    homogenize_by(f, |e| w.lattice_degree(e), f.ring().denom())
}

/// Both sides of one trapezoid-shape equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeVerdict {
    /// Containment in `T_{m,n}` together with the divisibility conditions.
    pub divisibility_side: bool,
    /// Containment of the transformed Newton polygon.
    pub polygon_side: bool,
}

impl ShapeVerdict {
    pub fn agree(&self) -> bool {
        self.divisibility_side == self.polygon_side
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ShapeKind {
    /// `(0,1)`-pieces and `x + 1`, against `T¹`.
    A,
    /// `(1,1)`-pieces and `x + y`, against `T²`.
    B,
    /// Both, against `T³`.
    Both,
}

/// `F^{(0,1)}_{n-i}` divisible by `(x+1)^{m-i}` for `0 ≤ i ≤ m`.
pub fn condition_a(f: &ExactPoly, m: i64, n: i64) -> Result<Option<i64>> {
    let dec = w_decompose(f, Direction::Y)?;
    let l = f.ring().parse(&format!("{} + 1", f.ring().vars()[0]))?;
    for i in 0..=m {
        if !divisible_by_binomial_power(&dec.piece_int(n - i), &l, m - i)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// `F^{(1,1)}_{m+n-i}` divisible by `(x+y)^{n-i}` for `0 ≤ i ≤ n`.
pub fn condition_b(f: &ExactPoly, m: i64, n: i64) -> Result<Option<i64>> {
    let dec = w_decompose(f, Direction::Total)?;
    let vars = f.ring().vars();
    let l = f.ring().parse(&format!("{} + {}", vars[0], vars[1]))?;
    for i in 0..=n {
        if !divisible_by_binomial_power(&dec.piece_int(m + n - i), &l, n - i)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Evaluate both sides of the requested equivalence for `F ∈ Q[x,y]`.
pub fn trapezoid_shape_check(f: &ExactPoly, m: i64, n: i64, kind: ShapeKind) -> Result<ShapeVerdict> {
    if m >= n {
        return Err(Error::Parameter(format!("trapezoid shapes need m < n, got m={m}, n={n}")));
    }
    let in_t = newton0(f)?.is_subset_of(&trapezoid_int(m, n));
    let (div, phi, target): (bool, Phi, LatticePolygon) = match kind {
        ShapeKind::A => (in_t && condition_a(f, m, n)?.is_none(), Phi::Zy, t1(m, n)),
        ShapeKind::B => (in_t && condition_b(f, m, n)?.is_none(), Phi::Xw, t2(m, n)),
        ShapeKind::Both => (
            in_t && condition_a(f, m, n)?.is_none() && condition_b(f, m, n)?.is_none(),
            Phi::Zw,
            t3(m, n),
        ),
    };
    let image = apply_phi(f, phi)?;
    let polygon_side = newton0(&image)?.is_subset_of(&target);
    Ok(ShapeVerdict { divisibility_side: div, polygon_side })
}

/// Rational degree from lattice units.
pub fn degree_q(ring: &Ring, lattice: i64) -> Q {
    Q::new(lattice.into(), ring.denom().into())
}

/// Whether every term of `f` has `w`-degree at most `bound`.
pub fn degree_at_most(f: &ExactPoly, w: Direction, bound: &Q) -> bool {
    let d = f.ring().denom();
    f.terms().all(|(e, _)| Q::new(w.lattice_degree(e).into(), d.into()) <= *bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Ring {
        Ring::new(&["x", "y"], 1)
    }

    #[test]
    fn decompositions() {
        let r = xy();
        let f = r.parse("x^2*y + x*y + 1").unwrap();
        let d = w_decompose(&f, Direction::Total).unwrap();
        assert_eq!(d.pieces.len(), 3);
        assert_eq!(d.piece_int(3), r.parse("x^2*y").unwrap());
        assert_eq!(d.piece_int(2), r.parse("x*y").unwrap());
        assert_eq!(d.leading_form(), r.parse("x^2*y").unwrap());
        let d = w_decompose(&f, Direction::Y).unwrap();
        assert_eq!(d.piece_int(1), r.parse("x^2*y + x*y").unwrap());
        assert_eq!(d.piece_int(0), r.one());
        let d = w_decompose(&r.parse("x^3*y^2 + y^5").unwrap(), Direction::X).unwrap();
        assert_eq!(d.degree(), Extended::Fin(q(3)));
        assert_eq!(d.leading_form(), r.parse("x^3*y^2").unwrap());
        assert_eq!(w_degree(&r.zero(), Direction::Y).unwrap(), Extended::NegInf);
    }

    #[test]
    fn lengths() {
        let r = xy();
        assert_eq!(len_of(&r.parse("(x+1)^3*y^2").unwrap(), Direction::Y).unwrap(), Extended::Fin(3));
        assert_eq!(len_of(&r.zero(), Direction::Y).unwrap(), Extended::NegInf);
        assert!(len_of(&r.parse("x + y^2").unwrap(), Direction::Total).is_err());
    }

    #[test]
    fn phi_maps() {
        let r = xy();
        let rzw = Ring::new(&["z", "w"], 1);
        let img = apply_phi(&rzw.parse("z^2*w^4").unwrap(), Phi::ZwInv).unwrap();
        assert_eq!(img, r.parse("(x+1)^2*(x+y)^4").unwrap());
        let rzy = Ring::new(&["z", "y"], 1);
        assert_eq!(apply_phi(&r.parse("x^2").unwrap(), Phi::Zy).unwrap(), rzy.parse("z^2-2*z+1").unwrap());
        let rxw = Ring::new(&["x", "w"], 1);
        assert_eq!(apply_phi(&r.parse("y").unwrap(), Phi::Xw).unwrap(), rxw.parse("w-x").unwrap());
        let f = r.parse("x^3*y").unwrap();
        let back = apply_phi(&apply_phi(&f, Phi::Zw).unwrap(), Phi::ZwInv).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn homogenization() {
        let r = xy();
        let h = homogenize(&r.parse("x^2*y + x").unwrap(), Direction::Total).unwrap();
        assert_eq!(h.coeffs(), &[r.parse("x^2*y").unwrap(), r.zero(), r.parse("x").unwrap()]);
        let g = homogenize(&r.parse("x^2*y").unwrap(), Direction::Total).unwrap();
        assert_eq!(g.order(), 1);
        let rh = Ring::new(&["x", "y"], 2);
        let bad = rh.parse("x + y^(1/2)").unwrap();
        assert!(matches!(homogenize(&bad, Direction::Y), Err(Error::Homogenization(_))));
        // [h(x^2 y + x)]_{t^2} = x
        assert_eq!(h.coeff(2).unwrap(), &r.parse("x").unwrap());
    }

    #[test]
    fn shape_checks() {
        let r = xy();
        let f = r.parse("(x+1)^2*y^4").unwrap();
        let v = trapezoid_shape_check(&f, 2, 4, ShapeKind::A).unwrap();
        assert!(v.divisibility_side && v.polygon_side);
        let g = r.parse("x^2*(x+y)^4").unwrap();
        let v = trapezoid_shape_check(&g, 2, 4, ShapeKind::B).unwrap();
        assert!(v.divisibility_side && v.polygon_side);
        let h = r.parse("x^6").unwrap();
        let v = trapezoid_shape_check(&h, 2, 4, ShapeKind::Both).unwrap();
        assert!(!v.divisibility_side && !v.polygon_side);
        assert!(trapezoid_shape_check(&h, 4, 4, ShapeKind::A).is_err());
    }
}
