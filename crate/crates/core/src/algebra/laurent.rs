//! Truncated Laurent series in `x^{-1}` with polynomial coefficients in `y`,
//! and their `a`-th roots.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::poly::{ExactPoly, Exps, Ring};
use super::rational::Q;
use super::series::TruncSeries;
use crate::error::{Error, Result};

/// Element of `Q[y]((x^{-1}))` known exactly for x-exponents `≥ floor`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeriesX {
    /// x-exponent ↦ coefficient, a polynomial in `y` over the ring `[y]`.
    coeffs: BTreeMap<i64, ExactPoly>,
    floor: i64,
    y_ring: Ring,
}

impl LaurentSeriesX {
    /// Truncate a polynomial in `(x, y)` (integer lattice) to x-exponents `≥ floor`.
    pub fn from_poly(f: &ExactPoly, floor: i64) -> Result<Self> {
        let r = f.ring();
        if r.nvars() != 2 || r.denom() != 1 {
            return Err(Error::Context("Laurent series need a two-variable integer-lattice ring".into()));
        }
        let y_ring = Ring::new(&[r.vars()[1].as_str()], 1);
        let mut coeffs: BTreeMap<i64, Vec<(Exps, Q)>> = BTreeMap::new();
        for (e, c) in f.terms() {
            if e[0] >= floor {
                coeffs.entry(e[0]).or_default().push((Exps::from_slice(&[e[1]]), c.clone()));
            }
        }
        let coeffs = coeffs.into_iter().map(|(k, v)| (k, y_ring.from_terms(v))).collect();
        Ok(LaurentSeriesX { coeffs, floor, y_ring })
    }

    pub fn floor(&self) -> i64 {
        self.floor
    }

    /// Coefficient of `x^k` (a polynomial in `y`); zero when absent.
    pub fn coeff(&self, k: i64) -> Result<ExactPoly> {
        if k < self.floor {
            return Err(Error::Domain(format!("x^{k} lies below the truncation floor {}", self.floor)));
        }
        Ok(self.coeffs.get(&k).cloned().unwrap_or_else(|| self.y_ring.zero()))
    }

    /// Largest x-exponent with a nonzero coefficient.
    pub fn leading_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `(x, y)`-polynomial with the retained terms.
    pub fn to_poly(&self, ring: &Ring) -> ExactPoly {
        let terms = self.coeffs.iter().flat_map(|(k, p)| {
            p.terms().map(move |(e, c)| (Exps::from_slice(&[*k, e[0]]), c.clone()))
        });
        ring.from_terms(terms.collect::<Vec<_>>())
    }

    /// Total degree `max(i + j)` over retained terms `x^i y^j`.
    pub fn total_degree(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .flat_map(|(k, p)| p.terms().map(move |(e, _)| k + e[0]))
            .max()
    }

    /// `(1,0)`-leading form: the top x-coefficient times its x-power.
    pub fn leading_form(&self) -> Option<(i64, ExactPoly)> {
        self.coeffs.iter().next_back().map(|(k, p)| (*k, p.clone()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let floor = self.floor.max(other.floor);
        let mut coeffs = BTreeMap::new();
        for k in self.coeffs.keys().chain(other.coeffs.keys()) {
            if *k < floor || coeffs.contains_key(k) {
                continue;
            }
            let a = self.coeffs.get(k).cloned().unwrap_or_else(|| self.y_ring.zero());
            let b = other.coeffs.get(k).cloned().unwrap_or_else(|| self.y_ring.zero());
            let d = &a - &b;
            if !d.is_zero() {
                coeffs.insert(*k, d);
            }
        }
        LaurentSeriesX { coeffs, floor, y_ring: self.y_ring.clone() }
    }

    pub fn scale(&self, c: &Q) -> Self {
        let coeffs = if c.is_zero() {
            BTreeMap::new()
        } else {
            self.coeffs.iter().map(|(k, p)| (*k, p.scale(c))).collect()
        };
        LaurentSeriesX { coeffs, floor: self.floor, y_ring: self.y_ring.clone() }
    }

    /// Product, exact down to the largest floor the inputs guarantee.
    pub fn mul(&self, other: &Self) -> Self {
        let la = self.leading_exponent();
        let lb = other.leading_exponent();
        let (Some(la), Some(lb)) = (la, lb) else {
            return LaurentSeriesX {
                coeffs: BTreeMap::new(),
                floor: self.floor.max(other.floor),
                y_ring: self.y_ring.clone(),
            };
        };
        let floor = (self.floor + lb).max(other.floor + la);
        let mut coeffs: BTreeMap<i64, ExactPoly> = BTreeMap::new();
        for (ka, pa) in &self.coeffs {
            for (kb, pb) in &other.coeffs {
                if ka + kb < floor {
                    continue;
                }
                let prod = pa * pb;
                let slot = coeffs.entry(ka + kb).or_insert_with(|| self.y_ring.zero());
                *slot = &*slot + &prod;
            }
        }
        coeffs.retain(|_, p| !p.is_zero());
        LaurentSeriesX { coeffs, floor, y_ring: self.y_ring.clone() }
    }
}

impl fmt::Display for LaurentSeriesX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, p) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let xs = match *k {
                0 => String::new(),
                1 => "x".to_string(),
                k if k > 0 => format!("x^{k}"),
                k => format!("x^({k})"),
            };
            let simple = p.len() == 1 && p.as_monomial().is_some_and(|(e, _)| e[0] == 0);
            match (simple, xs.is_empty()) {
                (_, true) => write!(f, "({p})")?,
                (true, false) if p.constant_term().is_one() => write!(f, "{xs}")?,
                _ => write!(f, "({p})*{xs}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^({}))", self.floor - 1)
    }
}

/// Data of `G = x^a (1 + Σ_{k≥1} g_k(y) x^{-k})` needed to take powers of `G^{1/a}`.
struct RootSetup {
    a: i64,
    y_ring: Ring,
    /// `g_k` for `k = 0, 1, …` (with `g_0 = 1`), up to the largest needed index.
    tail: Vec<ExactPoly>,
}

impl RootSetup {
    fn new(g: &ExactPoly, a: i64) -> Result<Self> {
        if a < 2 {
            return Err(Error::Root(format!("root index {a} must be at least 2")));
        }
        let r = g.ring();
        if r.nvars() != 2 || r.denom() != 1 {
            return Err(Error::Context("laurent_root needs a two-variable integer-lattice ring".into()));
        }
        let lead = g
            .max_exp(0)
            .ok_or_else(|| Error::Root("the zero polynomial has no root".into()))?;
        let top = g.coeff_in_var(0, lead);
        if lead != a || top != r.one() {
            let shown = top.mul_monomial(&[lead, 0], &Q::one());
            return Err(Error::Root(format!(
                "(1,0)-leading form {shown} is not x^{a}; no root of the form x + O(1) exists"
            )));
        }
        let y_ring = Ring::new(&[r.vars()[1].as_str()], 1);
        let depth = (lead - g.min_exp(0).expect("nonzero")) as usize;
        let mut tail = Vec::with_capacity(depth + 1);
        for k in 0..=depth {
            let c = g.coeff_in_var(0, a - k as i64);
            let terms: Vec<(Exps, Q)> =
                c.terms().map(|(e, v)| (Exps::from_slice(&[e[1]]), v.clone())).collect();
            tail.push(y_ring.from_terms(terms));
        }
        Ok(RootSetup { a, y_ring, tail })
    }

    /// `G^{j/a} = x^j (1 + u)^{j/a}`, exact for x-exponents `≥ floor`.
    fn power(&self, j: i64, floor: i64) -> Result<LaurentSeriesX> {
        let order = (j - floor + 1).max(0) as usize;
        if order == 0 {
            return Ok(LaurentSeriesX { coeffs: BTreeMap::new(), floor, y_ring: self.y_ring.clone() });
        }
        let coeffs: Vec<ExactPoly> =
            (0..order).map(|k| self.tail.get(k).cloned().unwrap_or_else(|| self.y_ring.zero())).collect();
        let s = TruncSeries::new(&self.y_ring.zero(), coeffs, order);
        let p = s.frac_power(&Q::new(j.into(), self.a.into()))?;
        let coeffs = p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (j - k as i64, c.clone()))
            .collect();
        Ok(LaurentSeriesX { coeffs, floor, y_ring: self.y_ring.clone() })
    }
}

/// `C = G^{1/a}` normalized as `C = x + C_0 + C_{-1} x^{-1} + ⋯`, kept for
/// x-exponents `≥ floor`. The truncation `C_trunc` satisfies
/// `C_trunc^a ≡ G` at every x-exponent `≥ floor + a - 1`.
pub fn laurent_root(g: &ExactPoly, a: i64, floor: i64) -> Result<LaurentSeriesX> {
    RootSetup::new(g, a)?.power(1, floor)
}

/// `C^j` for `C = G^{1/a}` and any integer `j`, exact for x-exponents `≥ floor`.
pub fn laurent_root_power(g: &ExactPoly, a: i64, j: i64, floor: i64) -> Result<LaurentSeriesX> {
    RootSetup::new(g, a)?.power(j, floor)
}

/// Lowest x-exponent at which `C_trunc^a` is guaranteed to agree with `G`.
pub fn root_exactness_floor(a: i64, floor: i64) -> i64 {
    floor + a - 1
}

/// Human-readable form of a rational root coefficient list, used in reports.
pub fn describe_coeffs(s: &LaurentSeriesX) -> Vec<(i64, String)> {
    s.coeffs.iter().rev().map(|(k, p)| (*k, p.to_string())).collect()
}
