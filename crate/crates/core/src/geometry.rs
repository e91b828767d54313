//! Exact convex polygons over the rationals, Newton polygons and the
//! trapezoid families built from `T_{m,n} = {0 ≤ y ≤ n, 0 ≤ x ≤ m + n - y}`.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::algebra::rational::{fmt_q, gcd_i64, q, qf, Q};
use crate::algebra::ExactPoly;
use crate::error::{Error, Result};

/// A point with rational coordinates.
pub type Point = (Q, Q);

pub fn pt(x: i64, y: i64) -> Point {
    (q(x), q(y))
}

fn cross(o: &Point, a: &Point, b: &Point) -> Q {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Convex polygon stored by its extreme points in counterclockwise order,
/// starting at the lexicographically smallest vertex. Zero, one and two
/// vertices encode the empty set, a point and a segment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticePolygon {
    vertices: Vec<Point>,
}

impl LatticePolygon {
    pub fn empty() -> Self {
        LatticePolygon { vertices: Vec::new() }
    }

    /// Convex hull by Andrew's monotone chain; collinear points are dropped.
    pub fn hull<I: IntoIterator<Item = Point>>(points: I) -> Self {
        let mut pts: Vec<Point> = points.into_iter().collect();
        pts.sort();
        pts.dedup();
        if pts.len() <= 2 {
            return LatticePolygon { vertices: pts };
        }
        let mut lower: Vec<Point> = Vec::new();
        for p in &pts {
            while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
                lower.pop();
            }
            lower.push(p.clone());
        }
        let mut upper: Vec<Point> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
                upper.pop();
            }
            upper.push(p.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        // All points collinear: keep the two endpoints.
        if lower.len() == 2 || lower.len() < 3 {
            let a = pts.first().cloned().expect("nonempty");
            let b = pts.last().cloned().expect("nonempty");
            return LatticePolygon { vertices: vec![a, b] };
        }
        LatticePolygon { vertices: lower }
    }

    pub fn from_int_points<I: IntoIterator<Item = (i64, i64)>>(points: I) -> Self {
        Self::hull(points.into_iter().map(|(x, y)| pt(x, y)))
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn has_vertex(&self, p: &Point) -> bool {
        self.vertices.contains(p)
    }

    /// Closed containment of a point.
    pub fn contains_point(&self, p: &Point) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => &self.vertices[0] == p,
            2 => {
                let (a, b) = (&self.vertices[0], &self.vertices[1]);
                cross(a, b, p).is_zero()
                    && p.0 >= a.0.clone().min(b.0.clone())
                    && p.0 <= a.0.clone().max(b.0.clone())
                    && p.1 >= a.1.clone().min(b.1.clone())
                    && p.1 <= a.1.clone().max(b.1.clone())
            }
            n => (0..n).all(|i| !cross(&self.vertices[i], &self.vertices[(i + 1) % n], p).is_negative()),
        }
    }

    pub fn contains_int(&self, x: i64, y: i64) -> bool {
        self.contains_point(&pt(x, y))
    }

    /// `self ⊆ other`; the empty polygon is contained in everything.
    pub fn is_subset_of(&self, other: &LatticePolygon) -> bool {
        self.vertices.iter().all(|v| other.contains_point(v))
    }

    /// First vertex of `self` lying outside `other`.
    pub fn vertex_outside(&self, other: &LatticePolygon) -> Option<Point> {
        self.vertices.iter().find(|v| !other.contains_point(v)).cloned()
    }

    pub fn scale(&self, r: &Q) -> Self {
        if r.is_zero() {
            return if self.is_empty() { Self::empty() } else { Self::hull([pt(0, 0)]) };
        }
        Self::hull(self.vertices.iter().map(|(x, y)| (x * r, y * r)))
    }

    pub fn translate(&self, v: &Point) -> Self {
        Self::hull(self.vertices.iter().map(|(x, y)| (x + &v.0, y + &v.1)))
    }

    /// `q_ratio · self == p_ratio · other`, i.e. `self : other = p : q` with
    /// the origin as the center of similarity.
    pub fn similar_with_ratio(&self, other: &LatticePolygon, p: i64, q_: i64) -> bool {
        self.scale(&q(q_)) == other.scale(&q(p))
    }
}

impl fmt::Display for LatticePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices.iter().map(|(x, y)| format!("({},{})", fmt_q(x), fmt_q(y))).collect();
        write!(f, "[{}]", vs.join(", "))
    }
}

impl Serialize for LatticePolygon {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let vs: Vec<[String; 2]> = self.vertices.iter().map(|(x, y)| [fmt_q(x), fmt_q(y)]).collect();
        vs.serialize(s)
    }
}

/// Integer support points of a polynomial in two variables with
/// nonnegative integer exponents.
pub fn support(f: &ExactPoly) -> Result<Vec<(i64, i64)>> {
    let r = f.ring();
    if r.nvars() != 2 {
        return Err(Error::Domain("support polygons need a bivariate polynomial".into()));
    }
    let d = r.denom();
    let mut pts = Vec::with_capacity(f.len());
    for (e, _) in f.terms() {
        if e[0] < 0 || e[1] < 0 {
            return Err(Error::Domain(format!("{f} has negative exponents")));
        }
        if e[0] % d != 0 || e[1] % d != 0 {
            return Err(Error::Domain(format!("{f} has fractional exponents")));
        }
        pts.push((e[0] / d, e[1] / d));
    }
    Ok(pts)
}

/// `(supp f, N(f), N^0(f))`; `N^0(0)` is empty.
pub fn support_polygons(f: &ExactPoly) -> Result<(Vec<(i64, i64)>, LatticePolygon, LatticePolygon)> {
    let s = support(f)?;
    let n = LatticePolygon::from_int_points(s.iter().copied());
    let n0 = if s.is_empty() {
        LatticePolygon::empty()
    } else {
        LatticePolygon::from_int_points(s.iter().copied().chain([(0, 0)]))
    };
    Ok((s, n, n0))
}

/// `N^0(f)`.
pub fn newton0(f: &ExactPoly) -> Result<LatticePolygon> {
    Ok(support_polygons(f)?.2)
}

/// Number of lattice points on the segment `ab`, minus one.
pub fn segment_len(a: (i64, i64), b: (i64, i64)) -> i64 {
    gcd_i64((b.0 - a.0).abs(), (b.1 - a.1).abs())
}

/// `T_{m,n}` for rational `m, n ≥ 0`.
pub fn trapezoid(m: &Q, n: &Q) -> LatticePolygon {
    let z = Q::zero();
    LatticePolygon::hull([(z.clone(), z.clone()), (m + n, z.clone()), (m.clone(), n.clone()), (z, n.clone())])
}

pub fn trapezoid_int(m: i64, n: i64) -> LatticePolygon {
    trapezoid(&q(m), &q(n))
}

/// Image of `T_{m,n}` under `x ↦ z - 1`: vertices `(0,0),(m+n,0),(m,n),(0,n-m)`.
pub fn t1(m: i64, n: i64) -> LatticePolygon {
    LatticePolygon::from_int_points([(0, 0), (m + n, 0), (m, n), (0, n - m)])
}

/// Image under `y ↦ w - x`: the rectangle `(0,0),(m,0),(m,n),(0,n)`.
pub fn t2(m: i64, n: i64) -> LatticePolygon {
    LatticePolygon::from_int_points([(0, 0), (m, 0), (m, n), (0, n)])
}

/// Image under both maps: `(0,0),(m,0),(m,n),(0,n-m)`.
pub fn t3(m: i64, n: i64) -> LatticePolygon {
    LatticePolygon::from_int_points([(0, 0), (m, 0), (m, n), (0, n - m)])
}

/// Admissible shape parameters: `gcd(a,b) = 1`, `2 ≤ a < b`, `a | m`, `a | n`, `0 < m < n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Shape {
    pub a: i64,
    pub b: i64,
    pub m: i64,
    pub n: i64,
}

impl Shape {
    pub fn new(a: i64, b: i64, m: i64, n: i64) -> Result<Self> {
        let fail = |why: &str| Err(Error::Parameter(format!("(a,b,m,n) = ({a},{b},{m},{n}): {why}")));
        if !(2 <= a && a < b) {
            return fail("need 2 <= a < b");
        }
        if gcd_i64(a, b) != 1 {
            return fail("gcd(a,b) must be 1");
        }
        if m <= 0 || m % a != 0 || n % a != 0 {
            return fail("a must divide both m > 0 and n");
        }
        if m >= n {
            return fail("need m < n");
        }
        Ok(Shape { a, b, m, n })
    }

    /// `1 / (m (n - m))`.
    pub fn epsilon(&self) -> Q {
        qf(1, self.m * (self.n - self.m))
    }

    /// `(a_i, b_i)` for `i ∈ [0, m(n-m)]`.
    pub fn ab_seq(&self, i: i64) -> (i64, i64) {
        ab_pair(self.m, self.n, i)
    }

    /// Common divisors of `m/a` and `n/a`.
    pub fn depths(&self) -> Vec<i64> {
        crate::algebra::rational::divisors(gcd_i64(self.m / self.a, self.n / self.a))
    }
}

/// `a_i = ⌊(i+1)/(n-m)⌋`, `b_i = a_i + ⌊i/m⌋` (the floors of `(i+1)mε` and `i(n-m)ε`).
pub fn ab_pair(m: i64, n: i64, i: i64) -> (i64, i64) {
    let ai = (i + 1).div_euclid(n - m);
    (ai, ai + i.div_euclid(m))
}

/// The polygons attached to a shape.
#[derive(Clone, Debug, Serialize)]
pub struct RegionSet {
    pub t: LatticePolygon,
    pub t1: LatticePolygon,
    pub t2: LatticePolygon,
    pub t3: LatticePolygon,
    /// `T_{m/a, n/a}`.
    pub n_prime: LatticePolygon,
    /// `T_{m/a, n/a} + ((a-1)/a)(m, n)`.
    pub n_second: LatticePolygon,
    /// `(a_i, b_i)` for `i = 0..=m(n-m)`.
    pub ab: Vec<(i64, i64)>,
}

pub fn build_regions(a: i64, b: i64, m: i64, n: i64) -> Result<RegionSet> {
    let s = Shape::new(a, b, m, n)?;
    let n_prime = trapezoid(&qf(m, a), &qf(n, a));
    let shift = (qf((a - 1) * m, a), qf((a - 1) * n, a));
    Ok(RegionSet {
        t: trapezoid_int(m, n),
        t1: t1(m, n),
        t2: t2(m, n),
        t3: t3(m, n),
        n_second: n_prime.translate(&shift),
        n_prime,
        ab: (0..=m * (n - m)).map(|i| s.ab_seq(i)).collect(),
    })
}
