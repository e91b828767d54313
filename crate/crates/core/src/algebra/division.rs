//! Exact division by powers of a binomial `c1·M1 + c2·M2`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::poly::{ExactPoly, Exps};
use super::rational::Q;
use crate::error::{Error, Result};

/// `g` with `f = l^k · g` when it exists (as a Laurent polynomial), `None`
/// otherwise. `l` must have exactly two terms. Negative `k` multiplies.
pub fn divide_by_binomial_power(f: &ExactPoly, l: &ExactPoly, k: i64) -> Result<Option<ExactPoly>> {
    if l.ring() != f.ring() {
        return Err(Error::Context("divisor and dividend live in different rings".into()));
    }
    let terms: Vec<(&Exps, &Q)> = l.terms().collect();
    if terms.len() != 2 {
        return Err(Error::Domain(format!("{l} is not a binomial")));
    }
    if k <= 0 {
        return Ok(Some(f * &l.pow(k.unsigned_abs())));
    }
    let mut cur = f.clone();
    for _ in 0..k {
        match divide_once(&cur, terms[0], terms[1]) {
            Some(g) => cur = g,
            None => return Ok(None),
        }
    }
    Ok(Some(cur))
}

/// Whether `l^k` divides `f`.
pub fn divisible_by_binomial_power(f: &ExactPoly, l: &ExactPoly, k: i64) -> Result<bool> {
    Ok(divide_by_binomial_power(f, l, k)?.is_some())
}

fn divide_once(f: &ExactPoly, t1: (&Exps, &Q), t2: (&Exps, &Q)) -> Option<ExactPoly> {
    if f.is_zero() {
        return Some(f.clone());
    }
    // Orient so that v = e_hi - e_lo has a positive first nonzero entry.
    let diff: Vec<i64> = t1.0.iter().zip(t2.0.iter()).map(|(a, b)| a - b).collect();
    let p = diff.iter().position(|&x| x != 0).expect("distinct monomials");
    let ((e_hi, c_hi), (e_lo, c_lo)) = if diff[p] > 0 { (t1, t2) } else { (t2, t1) };
    let v: Vec<i64> = e_hi.iter().zip(e_lo.iter()).map(|(a, b)| a - b).collect();
    let vp = v[p];

    // Chains: terms e = base + j·v with base_p ∈ [0, v_p).
    let mut chains: BTreeMap<Exps, BTreeMap<i64, Q>> = BTreeMap::new();
    for (e, c) in f.terms() {
        let j = e[p].div_euclid(vp);
        let base: Exps = e.iter().zip(&v).map(|(a, b)| a - j * b).collect();
        chains.entry(base).or_default().insert(j, c.clone());
    }

    let mut out: Vec<(Exps, Q)> = Vec::new();
    for (base, chain) in chains {
        let jmin = *chain.keys().next().expect("nonempty chain");
        let jmax = *chain.keys().next_back().expect("nonempty chain");
        let deg = (jmax - jmin) as usize;
        if deg == 0 {
            return None;
        }
        let a: Vec<Q> = (0..=deg).map(|i| chain.get(&(jmin + i as i64)).cloned().unwrap_or_else(Q::zero)).collect();
        // (c_hi X + c_lo) · Σ q_i X^i = Σ a_i X^i
        let mut qs = vec![Q::zero(); deg];
        qs[deg - 1] = &a[deg] / c_hi;
        for i in (1..deg).rev() {
            qs[i - 1] = (&a[i] - c_lo * &qs[i]) / c_hi;
        }
        if !(&a[0] - c_lo * &qs[0]).is_zero() {
            return None;
        }
        for (i, qi) in qs.into_iter().enumerate() {
            if qi.is_zero() {
                continue;
            }
            let j = jmin + i as i64;
            let e: Exps = base.iter().zip(&v).zip(e_lo.iter()).map(|((b, vv), lo)| b + j * vv - lo).collect();
            out.push((e, qi));
        }
    }
    Some(f.ring().from_terms(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::Ring;

    fn xy() -> Ring {
        Ring::new(&["x", "y"], 1)
    }

    #[test]
    fn exact_and_failed_divisions() {
        let r = xy();
        let l = r.parse("x+1").unwrap();
        let f = r.parse("(x+1)^3*y^2").unwrap();
        assert_eq!(divide_by_binomial_power(&f, &l, 2).unwrap(), Some(r.parse("(x+1)*y^2").unwrap()));
        let g = r.parse("x^2+y^2").unwrap();
        assert_eq!(divide_by_binomial_power(&g, &r.parse("x+y").unwrap(), 1).unwrap(), None);
        let h = r.parse("(x+1)^2*x^(-1)").unwrap();
        assert_eq!(divide_by_binomial_power(&h, &l, 2).unwrap(), Some(r.parse("x^(-1)").unwrap()));
    }

    #[test]
    fn zero_divides_everything() {
        let r = xy();
        assert_eq!(divide_by_binomial_power(&r.zero(), &r.parse("x+y").unwrap(), 9).unwrap(), Some(r.zero()));
    }

    #[test]
    fn homogeneous_binomial() {
        let r = xy();
        let l = r.parse("x+y").unwrap();
        let f = r.parse("x*(x+y)^4 - 3*y^2*(x+y)^3").unwrap();
        let g = divide_by_binomial_power(&f, &l, 3).unwrap().unwrap();
        assert_eq!(g, r.parse("x*(x+y) - 3*y^2").unwrap());
        assert_eq!(divide_by_binomial_power(&f, &l, 4).unwrap(), None);
    }

    #[test]
    fn fractional_exponents() {
        let r = Ring::new(&["x", "y"], 2);
        let l = r.parse("x+1").unwrap();
        let f = r.parse("(x+1)^2*y^(1/2) + (x+1)*x^(-1)*y^(3/2)").unwrap();
        let g = divide_by_binomial_power(&f, &l, 1).unwrap().unwrap();
        assert_eq!(g, r.parse("(x+1)*y^(1/2) + x^(-1)*y^(3/2)").unwrap());
    }
}
