//! The parameter block attached to a shape, a depth `δ` and an index `i`.

use num_traits::One;
use serde::Serialize;

use crate::algebra::rational::{fmt_q, gcd_i64, q, qf, Q};
use crate::algebra::{ExactPoly, Ring};
use crate::error::{Error, Result};
use crate::geometry::Shape;
use crate::grading::Direction;

/// Indices `i ∈ [0, m(n-m)]` with `m | i` or `(n-m) | (i+1)`.
pub fn index_set(shape: &Shape) -> Vec<i64> {
    let (m, n) = (shape.m, shape.n);
    (0..=m * (n - m)).filter(|i| i % m == 0 || (i + 1) % (n - m) == 0).collect()
}

/// All derived quantities for `(a, b, m, n)`, `δ`, `i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamContext {
    pub shape: Shape,
    pub delta: i64,
    pub i: i64,
    pub u: i64,
    /// `gcd(m, n)`.
    pub r: i64,
    pub d: i64,
    pub e: i64,
    /// `d + e - u - 2`, the last index `μ` and `β` range over.
    pub mm: i64,
    pub u_e: i64,
    pub v_e: i64,
    pub u_f: i64,
    pub v_f: i64,
    /// Degree of `τ`: `n/m` or `m/n + 1`.
    #[serde(serialize_with = "ser_q")]
    pub deg_tau: Q,
    /// Exponent `N` with `h(F)_0 = τ^N`: `(v_E - u_E) δ a`.
    pub n_tau: i64,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

impl ParamContext {
    pub fn new(shape: Shape, delta: i64, i: i64) -> Result<Self> {
        let Shape { a, b, m, n } = shape;
        if delta < 1 || (m / a) % delta != 0 || (n / a) % delta != 0 {
            return Err(Error::Parameter(format!("δ = {delta} does not divide both m/a = {} and n/a = {}", m / a, n / a)));
        }
        if i < 0 || i > m * (n - m) {
            return Err(Error::Parameter(format!("i = {i} is outside [0, {}]", m * (n - m))));
        }
        let first = i % m == 0;
        let second = (i + 1) % (n - m) == 0;
        let u = match (first, second) {
            (true, false) => 0,
            (false, true) => 1,
            (true, true) => return Err(Error::Parameter(format!("i = {i} satisfies both index conditions"))),
            (false, false) => return Err(Error::Parameter(format!("i = {i}: neither m | i nor (n-m) | (i+1)"))),
        };
        let (ai, bi) = shape.ab_seq(i);
        let fl_y = i / m; // ⌊i(n-m)ε⌋
        let (u_e, u_f) = if u == 0 { ((n - m) / (delta * a), fl_y) } else { (m / (delta * a), ai) };
        let d = u * m + n;
        let e = b * d / a;
        let mm = d + e - u - 2;
        let v_e = d / (delta * a);
        let ad = a * delta;
        let v_f = if i * a > m * (n - m) * (a - 1) {
            u_f + (u * n - u * m + m) * (a - 1) / a - 1
        } else {
            let lhs = qf(ad * fl_y, n - m);
            let rhs = qf(ad * ai, m);
            if lhs == rhs && lhs.is_integer() {
                u * ai + bi - 1
            } else {
                u * ai + bi
            }
        };
        let deg_tau = if u == 0 { qf(n, m) } else { qf(m, n) + Q::one() };
        Ok(ParamContext {
            shape,
            delta,
            i,
            u,
            r: gcd_i64(m, n),
            d,
            e,
            mm,
            u_e,
            v_e,
            u_f,
            v_f,
            deg_tau,
            n_tau: (v_e - u_e) * ad,
        })
    }

    /// `w = (u, 1)`.
    pub fn direction(&self) -> Direction {
        if self.u == 0 {
            Direction::Y
        } else {
            Direction::Total
        }
    }

    /// `x+1` or `x+y`.
    pub fn l_name(&self) -> &'static str {
        if self.u == 0 {
            "x+1"
        } else {
            "x+y"
        }
    }

    /// `L` in a bivariate ring `[x, y]`.
    pub fn l_poly(&self, ring: &Ring) -> ExactPoly {
        let v = ring.vars();
        let s = if self.u == 0 { format!("{} + 1", v[0]) } else { format!("{} + {}", v[0], v[1]) };
        ring.parse(&s).expect("well-formed binomial")
    }

    /// Target ring of evaluation maps: `Q[x^{±1}, y^{±1/m}]` or `Q[x^{±1/n}, y^{±1}]`.
    pub fn r2_ring(&self) -> Ring {
        Ring::new(&["x", "y"], if self.u == 0 { self.shape.m } else { self.shape.n })
    }

    /// `S(τ)`: `(x+1) y^{n/m}` or `x^{m/n} (x+y)`.
    pub fn tau_image(&self) -> ExactPoly {
        let s = if self.u == 0 {
            format!("(x+1)*y^({}/{})", self.shape.n, self.shape.m)
        } else {
            format!("x^({}/{})*(x+y)", self.shape.m, self.shape.n)
        };
        self.r2_ring().parse(&s).expect("well-formed image")
    }

    /// `[j - u_E]_+`.
    pub fn e_shift(&self, j: i64) -> i64 {
        (j - self.u_e).max(0)
    }

    /// `[j - u_F]_+`.
    pub fn f_shift(&self, j: i64) -> i64 {
        (j - self.u_f).max(0)
    }

    /// Degree of the indeterminate attached to the degree-`j` piece with shift `s`.
    pub fn indeterminate_degree(&self, j: i64, s: i64) -> Q {
        q(j) - q(s) * &self.deg_tau
    }

    /// `β ∈ [1, 𝔪]` with `r(e-β)/d ∈ ℤ`.
    pub fn admissible_betas(&self) -> Vec<i64> {
        (1..=self.mm).filter(|&b| self.is_admissible(b)).collect()
    }

    pub fn is_admissible(&self, beta: i64) -> bool {
        (self.r * (self.e - beta)) % self.d == 0
    }

    /// `(e - β)/d`.
    pub fn exponent(&self, beta: i64) -> Q {
        qf(self.e - beta, self.d)
    }

    /// `N·(e-β)/d`, the τ-exponent of the leading term of `H^{(e-β)/d}`.
    pub fn tau_exponent(&self, beta: i64) -> Result<i64> {
        let v = q(self.n_tau) * self.exponent(beta);
        if !v.is_integer() {
            return Err(Error::Lattice(format!("τ^({}) is off the integer lattice", fmt_q(&v))));
        }
        Ok(crate::algebra::rational::to_i64_exact(&v).expect("integer"))
    }

    /// One-line summary used by `--report`.
    pub fn summary(&self) -> String {
        format!(
            "u={}, d={}, e={}, L={}, u_E={}, v_E={}, u_F={}, v_F={}",
            self.u,
            self.d,
            self.e,
            self.l_name(),
            self.u_e,
            self.v_e,
            self.u_f,
            self.v_f
        )
    }

    /// JSON view with the headline fields first.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "u": self.u,
            "d": self.d,
            "e": self.e,
            "L": self.l_name(),
            "u_E": self.u_e,
            "v_E": self.v_e,
            "u_F": self.u_f,
            "v_F": self.v_f,
            "mm": self.mm,
            "r": self.r,
            "w": [self.u, 1],
            "epsilon": fmt_q(&self.shape.epsilon()),
            "deg_tau": fmt_q(&self.deg_tau),
            "N": self.n_tau,
            "a": self.shape.a, "b": self.shape.b, "m": self.shape.m, "n": self.shape.n,
            "delta": self.delta,
            "i": self.i,
        })
    }

    /// Number of pieces `x̃_0, …, x̃_{v_F}` (zero when `v_F = -1`).
    pub fn f_len(&self) -> usize {
        (self.v_f + 1).max(0) as usize
    }

    /// Whether `i` lies in the upper range `i > m(n-m)(a-1)/a`.
    pub fn upper_range(&self) -> bool {
        let Shape { a, m, n, .. } = self.shape;
        self.i * a > m * (n - m) * (a - 1)
    }
}
