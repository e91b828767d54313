//! Coordinates adapted to `L` and the projections `P_k : R₂ → R₂ / L^k`.
//!
//! With `u = 0` the pair `(y, L = x+1)` replaces `(x, y)`; with `u = 1` the
//! pair `(x, L = x+y)` does. Residues mod `L^k` are then polynomials in `L`
//! of degree `< k` with Laurent coefficients in the remaining variable.

use std::collections::HashMap;
use std::fmt;

use num_traits::One;

use crate::algebra::{ExactPoly, Exps, Ring, Window};
use crate::error::{Error, Result};

/// Which binomial plays the role of `L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Binomial {
    /// `L = x + 1`; the kept variable is `y`.
    XPlusOne,
    /// `L = x + y`; the kept variable is `x`.
    XPlusY,
}

impl Binomial {
    pub fn from_u(u: i64) -> Self {
        if u == 0 {
            Binomial::XPlusOne
        } else {
            Binomial::XPlusY
        }
    }

    /// Index (in `[x, y]`) of the variable that stays.
    fn kept(self) -> usize {
        match self {
            Binomial::XPlusOne => 1,
            Binomial::XPlusY => 0,
        }
    }

    /// Ring `[c, L]` with the lattice `1/denom`, where `c` is the kept variable.
    pub fn coords_ring(self, denom: i64) -> Ring {
        let c = if self.kept() == 1 { "y" } else { "x" };
        Ring::new(&[c, "L"], denom)
    }

    /// `[c, L]` with `L`-exponents below `k`.
    pub fn quotient_ring(self, denom: i64, k: i64) -> Ring {
        self.coords_ring(denom)
            .with_windows(vec![Window { var: 1, min: None, max_exclusive: Some(k * denom) }])
    }
}

/// Rewrite `f ∈ Q[x^{±}, y^{±}]` in `(c, L)`. The eliminated variable must
/// carry integer exponents; negative ones need a window on `L` (they become
/// truncated geometric series).
pub fn to_coords(f: &ExactPoly, which: Binomial, target: &Ring) -> Result<ExactPoly> {
    let src = f.ring();
    if src.nvars() != 2 {
        return Err(Error::Context("expected a polynomial in x, y".into()));
    }
    let (sd, td) = (src.denom(), target.denom());
    let kept = which.kept();
    let elim = 1 - kept;
    let windowed = !target.windows().is_empty();
    let c = target.var(0);
    let l = target.var(1);
    // Image of the eliminated variable and of its inverse.
    let img = match which {
        Binomial::XPlusOne => &l - &target.one(),
        Binomial::XPlusY => &l - &c,
    };
    let mut cache: HashMap<i64, ExactPoly> = HashMap::new();
    let mut acc = target.zero();
    for (e, coeff) in f.terms() {
        if e[elim] % sd != 0 {
            return Err(Error::Lattice(format!("`{}` has a fractional exponent", src.vars()[elim])));
        }
        if (e[kept] * td) % sd != 0 {
            return Err(Error::Lattice(format!("exponent of `{}` is off the target lattice", src.vars()[kept])));
        }
        let k = e[elim] / sd;
        if !cache.contains_key(&k) {
            let p = if k >= 0 {
                img.pow(k as u64)
            } else if windowed {
                inverse_image(which, target)?.pow((-k) as u64)
            } else {
                return Err(Error::Domain(format!(
                    "negative power of `{}` is not a polynomial in L",
                    src.vars()[elim]
                )));
            };
            cache.insert(k, p);
        }
        let mono = target.monomial(&[e[kept] * td / sd, 0], coeff.clone());
        acc = &acc + &(&mono * &cache[&k]);
    }
    Ok(acc)
}

/// Inverse of the eliminated variable modulo the window on `L`.
fn inverse_image(which: Binomial, target: &Ring) -> Result<ExactPoly> {
    let w = target
        .windows()
        .iter()
        .find(|w| w.var == 1)
        .and_then(|w| w.max_exclusive)
        .ok_or_else(|| Error::Domain("inverse needs a window on L".into()))?;
    let d = target.denom();
    let k = (w + d - 1) / d;
    let terms = (0..k).map(|i| {
        let e: Exps = match which {
            // -(1 - L)^{-1}
            Binomial::XPlusOne => Exps::from_slice(&[0, i * d]),
            // -c^{-1} (1 - L/c)^{-1}
            Binomial::XPlusY => Exps::from_slice(&[-(i + 1) * d, i * d]),
        };
        (e, -crate::algebra::Q::one())
    });
    Ok(target.from_terms(terms.collect::<Vec<_>>()))
}

/// Back from `(c, L)` to `[x, y]` with the given lattice; `L` must appear
/// with nonnegative integer exponents.
pub fn from_coords(g: &ExactPoly, which: Binomial, target: &Ring) -> Result<ExactPoly> {
    let src = g.ring();
    let (sd, td) = (src.denom(), target.denom());
    let l = match which {
        Binomial::XPlusOne => target.parse("x + 1")?,
        Binomial::XPlusY => target.parse("x + y")?,
    };
    let kept = which.kept();
    let mut acc = target.zero();
    let mut cache: HashMap<i64, ExactPoly> = HashMap::new();
    for (e, coeff) in g.terms() {
        if e[1] < 0 || e[1] % sd != 0 {
            return Err(Error::Lattice("L must appear with a nonnegative integer exponent".into()));
        }
        if (e[0] * td) % sd != 0 {
            return Err(Error::Lattice("kept variable is off the target lattice".into()));
        }
        let k = e[1] / sd;
        let lk = cache.entry(k).or_insert_with(|| l.pow(k as u64)).clone();
        let mut ex = [0i64; 2];
        ex[kept] = e[0] * td / sd;
        acc = &acc + &(&target.monomial(&ex, coeff.clone()) * &lk);
    }
    Ok(acc)
}

/// Residue of an element of `R₂` modulo `L^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientElem {
    k: i64,
    which: Binomial,
    poly: ExactPoly,
}

impl QuotientElem {
    pub fn k(&self) -> i64 {
        self.k
    }

    /// The representative `Σ_{j<k} coeff_j L^j` in the windowed ring `[c, L]`.
    pub fn poly(&self) -> &ExactPoly {
        &self.poly
    }

    /// `coeff_j` for `j < k`, as polynomials in `[c, L]` free of `L`.
    pub fn coeffs(&self) -> Vec<ExactPoly> {
        let d = self.poly.ring().denom();
        let plain = self.poly.ring().unwindowed();
        (0..self.k)
            .map(|j| self.poly.coeff_in_var(1, j * d).rename(&plain).expect("same arity"))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(QuotientElem { poly: self.poly.checked_mul(&other.poly)?, ..self.clone() })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(QuotientElem { poly: self.poly.checked_add(&other.poly)?, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(QuotientElem { poly: self.poly.checked_sub(&other.poly)?, ..self.clone() })
    }
}

impl fmt::Display for QuotientElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod L^{}", self.poly, self.k)
    }
}

/// `P_k(f)` for `f ∈ R₂`, `L = x+1` or `x+y`.
pub fn reduce_pk(f: &ExactPoly, which: Binomial, k: i64) -> Result<QuotientElem> {
    if k < 1 {
        return Err(Error::Parameter(format!("truncation exponent k = {k} must be at least 1")));
    }
    let ring = which.quotient_ring(f.ring().denom(), k);
    Ok(QuotientElem { k, which, poly: to_coords(f, which, &ring)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> Ring {
        Ring::new(&["x", "y"], 1)
    }

    #[test]
    fn small_residues() {
        let p = reduce_pk(&r().parse("x^2").unwrap(), Binomial::XPlusOne, 2).unwrap();
        assert_eq!(p.poly(), &p.poly().ring().parse("1 - 2*L").unwrap());
        let p = reduce_pk(&r().parse("x + y").unwrap(), Binomial::XPlusY, 1).unwrap();
        assert!(p.is_zero());
        let p = reduce_pk(&r().parse("x^(-1)").unwrap(), Binomial::XPlusOne, 2).unwrap();
        assert_eq!(p.poly(), &p.poly().ring().parse("-1 - L").unwrap());
        // x · x^{-1} ≡ 1.
        let x = reduce_pk(&r().parse("x").unwrap(), Binomial::XPlusOne, 2).unwrap();
        assert_eq!(x.mul(&p).unwrap().poly(), &p.poly().ring().one());
    }

    #[test]
    fn inverse_of_y_mod_x_plus_y() {
        let y = reduce_pk(&r().parse("y").unwrap(), Binomial::XPlusY, 4).unwrap();
        let yi = reduce_pk(&r().parse("y^(-1)").unwrap(), Binomial::XPlusY, 4).unwrap();
        assert_eq!(y.mul(&yi).unwrap().poly(), &y.poly().ring().one());
    }

    #[test]
    fn coordinates_round_trip() {
        let f = r().parse("3*x^2*y - y^3 + x + 7").unwrap();
        for which in [Binomial::XPlusOne, Binomial::XPlusY] {
            let g = to_coords(&f, which, &which.coords_ring(1)).unwrap();
            assert_eq!(from_coords(&g, which, &r()).unwrap(), f);
        }
    }
}
