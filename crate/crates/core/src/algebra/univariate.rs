//! Dense univariate polynomials over the rationals, `p[k]` the coefficient of `z^k`.

use num_traits::{One, Signed, Zero};

use super::rational::{fmt_q, q, rational_root, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly(Vec<Q>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn monomial(k: usize, c: Q) -> Self {
        let mut v = vec![Q::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.0.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly(Vec::new());
        }
        let mut out = vec![Q::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(UniPoly::new(vec![Q::one()]), |acc, _| acc.mul(self))
    }

    /// `r`-th root with positive constant term, when one exists over the
    /// rationals. Requires a nonzero constant term.
    pub fn root(&self, r: u32) -> Option<UniPoly> {
        let deg = self.degree()?;
        if r == 0 || deg % r as usize != 0 {
            return None;
        }
        let p0 = &self.0[0];
        if p0.is_zero() {
            return None;
        }
        let c0 = rational_root(p0, r)?;
        let c0 = if c0.is_negative() && r % 2 == 0 { -c0 } else { c0 };
        let n = deg / r as usize + 1;
        // g = p^{1/r}: g_k = (1/(k p_0)) Σ_{j=1}^{k} ((1/r + 1) j - k) p_j g_{k-j}
        let a1 = Q::new(1.into(), (r as i64).into()) + Q::one();
        let mut g = vec![c0];
        for k in 1..n {
            let mut acc = Q::zero();
            for j in 1..=k {
                let pj = self.coeff(j);
                if pj.is_zero() {
                    continue;
                }
                acc += (&a1 * q(j as i64) - q(k as i64)) * pj * &g[k - j];
            }
            g.push(acc / (q(k as i64) * p0));
        }
        let g = UniPoly::new(g);
        (g.pow(r) == *self).then_some(g)
    }

    /// Compose `self(inner)`.
    pub fn compose(&self, inner: &UniPoly) -> UniPoly {
        self.0.iter().rev().fold(UniPoly::new(Vec::new()), |acc, c| {
            acc.mul(inner).add(&UniPoly::new(vec![c.clone()]))
        })
    }
}

impl std::fmt::Display for UniPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let mono = match k {
                0 => String::new(),
                1 => "z".into(),
                k => format!("z^{k}"),
            };
            match (mono.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{}", fmt_q(&a))?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{}*{mono}", fmt_q(&a))?,
            }
        }
        Ok(())
    }
}
