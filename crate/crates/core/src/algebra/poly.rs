//! Sparse multivariate Laurent polynomials with rational coefficients and
//! rational exponents on a fixed lattice `(1/D)·ℤ`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::rational::{fmt_q, int_pow, q, rational_pow, Q};
use crate::error::{Error, Result};

/// Exponent vector in lattice units (an entry `e` means exponent `e / D`).
pub type Exps = SmallVec<[i64; 4]>;

/// Window of retained exponents for one variable, in lattice units.
/// Products falling outside the window are discarded, which turns the ring
/// into a truncated quotient (for example `R / L^K`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub var: usize,
    pub min: Option<i64>,
    pub max_exclusive: Option<i64>,
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct RingData {
    vars: Vec<String>,
    denom: i64,
    windows: Vec<Window>,
}

/// Ring context: variable names, lattice denominator and optional windows.
#[derive(Clone, Debug)]
pub struct Ring(Arc<RingData>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for Ring {}

impl std::hash::Hash for Ring {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl Ring {
    pub fn new<S: AsRef<str>>(vars: &[S], denom: i64) -> Ring {
        assert!(denom > 0, "lattice denominator must be positive");
        Ring(Arc::new(RingData {
            vars: vars.iter().map(|s| s.as_ref().to_string()).collect(),
            denom,
            windows: Vec::new(),
        }))
    }

    /// Same variables and lattice with exponent windows attached.
    pub fn with_windows(&self, windows: Vec<Window>) -> Ring {
        Ring(Arc::new(RingData {
            vars: self.0.vars.clone(),
            denom: self.0.denom,
            windows,
        }))
    }

    /// Same variables and lattice with no windows.
    pub fn unwindowed(&self) -> Ring {
        if self.0.windows.is_empty() {
            self.clone()
        } else {
            self.with_windows(Vec::new())
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn denom(&self) -> i64 {
        self.0.denom
    }

    pub fn windows(&self) -> &[Window] {
        &self.0.windows
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.0
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Context(format!("unknown variable `{name}`")))
    }

    fn in_window(&self, e: &[i64]) -> bool {
        self.0.windows.iter().all(|w| {
            let x = e[w.var];
            w.min.is_none_or(|m| x >= m) && w.max_exclusive.is_none_or(|m| x < m)
        })
    }

    pub fn zero(&self) -> ExactPoly {
        ExactPoly { ring: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> ExactPoly {
        self.constant(Q::one())
    }

    pub fn constant(&self, c: Q) -> ExactPoly {
        self.monomial(&vec![0; self.nvars()], c)
    }

    /// `c · Π x_i^{e_i / D}` with exponents already in lattice units.
    pub fn monomial(&self, exps: &[i64], c: Q) -> ExactPoly {
        assert_eq!(exps.len(), self.nvars(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() && self.in_window(exps) {
            terms.insert(Exps::from_slice(exps), c);
        }
        ExactPoly { ring: self.clone(), terms }
    }

    /// Monomial with rational exponents; fails when an exponent is off the lattice.
    pub fn monomial_q(&self, exps: &[Q], c: Q) -> Result<ExactPoly> {
        let mut e = Vec::with_capacity(exps.len());
        for x in exps {
            e.push(self.to_lattice(x)?);
        }
        Ok(self.monomial(&e, c))
    }

    /// Rational exponent to lattice units.
    pub fn to_lattice(&self, x: &Q) -> Result<i64> {
        let scaled = x * q(self.denom());
        super::rational::to_i64_exact(&scaled)
            .ok_or_else(|| Error::Lattice(format!("exponent {} is not on the (1/{})-lattice", fmt_q(x), self.denom())))
    }

    /// Lattice units to a rational exponent.
    pub fn from_lattice(&self, e: i64) -> Q {
        Q::new(e.into(), self.denom().into())
    }

    /// The `i`-th variable as a polynomial.
    pub fn var(&self, i: usize) -> ExactPoly {
        let mut e = vec![0; self.nvars()];
        e[i] = self.denom();
        self.monomial(&e, Q::one())
    }

    pub fn var_named(&self, name: &str) -> Result<ExactPoly> {
        Ok(self.var(self.var_index(name)?))
    }

    /// Build from raw terms, dropping zeros and anything outside the windows.
    pub fn from_terms<I: IntoIterator<Item = (Exps, Q)>>(&self, it: I) -> ExactPoly {
        let mut terms: BTreeMap<Exps, Q> = BTreeMap::new();
        for (e, c) in it {
            assert_eq!(e.len(), self.nvars(), "exponent vector length");
            if !self.in_window(&e) {
                continue;
            }
            *terms.entry(e).or_insert_with(Q::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        ExactPoly { ring: self.clone(), terms }
    }

    /// Parse an expression such as `3*x^2*y - 1/2*y^(3/2) + (x+1)^3`.
    pub fn parse(&self, s: &str) -> Result<ExactPoly> {
        super::parse::parse(self, s)
    }
}

/// Sparse Laurent polynomial over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactPoly {
    ring: Ring,
    terms: BTreeMap<Exps, Q>,
}

impl ExactPoly {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Q)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Exps, Q)> {
        self.terms.into_iter()
    }

    /// Coefficient of the monomial with the given lattice exponents.
    pub fn coeff(&self, exps: &[i64]) -> Q {
        self.terms.get(exps).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&vec![0; self.ring.nvars()])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// The single term when the polynomial is a nonzero monomial.
    pub fn as_monomial(&self) -> Option<(&Exps, &Q)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Largest exponent (lattice units) of a variable; `None` for zero.
    pub fn max_exp(&self, var: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn min_exp(&self, var: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[var]).min()
    }

    /// Largest term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Exps, &Q)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0))
    }

    /// Terms sorted by descending graded-lex order (the canonical print order).
    pub fn sorted_terms(&self) -> Vec<(&Exps, &Q)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex(b.0, a.0));
        v
    }

    fn check_ring(&self, other: &ExactPoly) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::Context(format!(
                "{:?}/D={} vs {:?}/D={}",
                self.ring.vars(),
                self.ring.denom(),
                other.ring.vars(),
                other.ring.denom()
            )))
        }
    }

    pub fn checked_add(&self, other: &ExactPoly) -> Result<ExactPoly> {
        self.check_ring(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            match terms.get_mut(e) {
                Some(v) => {
                    *v += c;
                    if v.is_zero() {
                        terms.remove(e);
                    }
                }
                None => {
                    terms.insert(e.clone(), c.clone());
                }
            }
        }
        Ok(ExactPoly { ring: self.ring.clone(), terms })
    }

    pub fn checked_sub(&self, other: &ExactPoly) -> Result<ExactPoly> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &ExactPoly) -> Result<ExactPoly> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.ring.zero());
        }
        if let Some((e, c)) = other.as_monomial() {
            return Ok(self.mul_monomial(e, c));
        }
        if let Some((e, c)) = self.as_monomial() {
            return Ok(other.mul_monomial(e, c));
        }
        let n = self.ring.nvars();
        let mut acc: HashMap<Exps, Q> = HashMap::with_capacity(self.len() * other.len());
        let mut e = Exps::from_elem(0, n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                for k in 0..n {
                    e[k] = ea[k] + eb[k];
                }
                if !self.ring.in_window(&e) {
                    continue;
                }
                let p = ca * cb;
                match acc.get_mut(&e) {
                    Some(v) => *v += p,
                    None => {
                        acc.insert(e.clone(), p);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(ExactPoly { ring: self.ring.clone(), terms })
    }

    /// Multiply by `c · x^e`.
    pub fn mul_monomial(&self, e: &[i64], c: &Q) -> ExactPoly {
        if c.is_zero() {
            return self.ring.zero();
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(ea, ca)| {
                let s: Exps = ea.iter().zip(e).map(|(a, b)| a + b).collect();
                self.ring.in_window(&s).then(|| (s, ca * c))
            })
            .collect();
        ExactPoly { ring: self.ring.clone(), terms }
    }

    pub fn scale(&self, c: &Q) -> ExactPoly {
        if c.is_zero() {
            return self.ring.zero();
        }
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        ExactPoly { ring: self.ring.clone(), terms }
    }

    pub fn neg(&self) -> ExactPoly {
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), -v)).collect();
        ExactPoly { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, k: u64) -> ExactPoly {
        if let Some((e, c)) = self.as_monomial() {
            let e: Vec<i64> = e.iter().map(|x| x * k as i64).collect();
            return self.ring.monomial(&e, num_traits::pow(c.clone(), k as usize));
        }
        let mut result = self.ring.one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Power with a rational exponent. Nonnegative integers work for any
    /// polynomial; everything else needs a monomial with a rational root of
    /// its coefficient.
    pub fn pow_q(&self, e: &Q) -> Result<ExactPoly> {
        if e.is_integer() && !e.is_negative() {
            let k = super::rational::to_i64_exact(e).ok_or_else(|| Error::Domain("exponent too large".into()))?;
            return Ok(self.pow(k as u64));
        }
        let (exps, c) = self
            .as_monomial()
            .ok_or_else(|| Error::Root(format!("({self})^({}) needs a monomial base", fmt_q(e))))?;
        let coeff = rational_pow(c, e)
            .ok_or_else(|| Error::FieldExtension(format!("({})^({}) is not rational", fmt_q(c), fmt_q(e))))?;
        let mut out = Vec::with_capacity(exps.len());
        for &x in exps.iter() {
            let v = self.ring.from_lattice(x) * e;
            out.push(self.ring.to_lattice(&v)?);
        }
        Ok(self.ring.monomial(&out, coeff))
    }

    /// Inverse of a monomial.
    pub fn monomial_inverse(&self) -> Result<ExactPoly> {
        let (e, c) = self
            .as_monomial()
            .ok_or_else(|| Error::Domain(format!("{self} is not a unit")))?;
        let e: Vec<i64> = e.iter().map(|x| -x).collect();
        Ok(self.ring.monomial(&e, c.recip()))
    }

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> ExactPoly {
        let d = self.ring.denom();
        let terms = self.terms.iter().filter_map(|(e, c)| {
            if e[var] == 0 {
                return None;
            }
            let mut ne = e.clone();
            ne[var] -= d;
            Some((ne, c * Q::new(e[var].into(), d.into())))
        });
        self.ring.from_terms(terms)
    }

    /// Keep only the terms satisfying a predicate on exponents.
    pub fn filter_terms<F: Fn(&[i64]) -> bool>(&self, keep: F) -> ExactPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| keep(e))
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        ExactPoly { ring: self.ring.clone(), terms }
    }

    /// Reinterpret in another ring with the same number of variables and
    /// the same denominator (renaming variables or dropping windows).
    pub fn rename(&self, target: &Ring) -> Result<ExactPoly> {
        if target.nvars() != self.ring.nvars() || target.denom() != self.ring.denom() {
            return Err(Error::Context("rename needs matching arity and lattice".into()));
        }
        Ok(target.from_terms(self.terms.iter().map(|(e, c)| (e.clone(), c.clone()))))
    }

    /// Move into a ring with more variables or a finer lattice. `var_map[i]`
    /// is the target index of source variable `i`.
    pub fn embed(&self, target: &Ring, var_map: &[usize]) -> Result<ExactPoly> {
        if var_map.len() != self.ring.nvars() {
            return Err(Error::Context("embed: variable map has wrong length".into()));
        }
        let (sd, td) = (self.ring.denom(), target.denom());
        if td % sd != 0 {
            return Err(Error::Lattice(format!("cannot embed (1/{sd})-lattice into (1/{td})-lattice")));
        }
        let f = td / sd;
        let n = target.nvars();
        Ok(target.from_terms(self.terms.iter().map(|(e, c)| {
            let mut ne = Exps::from_elem(0, n);
            for (i, &x) in e.iter().enumerate() {
                ne[var_map[i]] += x * f;
            }
            (ne, c.clone())
        })))
    }

    /// Ring homomorphism sending variable `i` to `images[i]`. Negative or
    /// fractional exponents require a monomial image.
    pub fn substitute(&self, images: &[ExactPoly]) -> Result<ExactPoly> {
        if images.len() != self.ring.nvars() {
            return Err(Error::Substitution(format!(
                "{} images supplied for {} variables",
                images.len(),
                self.ring.nvars()
            )));
        }
        let target = images
            .first()
            .map(|p| p.ring.clone())
            .ok_or_else(|| Error::Substitution("no variables".into()))?;
        if images.iter().any(|p| p.ring != target) {
            return Err(Error::Context("substitution images live in different rings".into()));
        }
        let d = self.ring.denom();
        let mut cache: HashMap<(usize, i64), ExactPoly> = HashMap::new();
        let mut acc = target.zero();
        for (e, c) in &self.terms {
            let mut term = target.constant(c.clone());
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if !cache.contains_key(&(i, x)) {
                    let p = if x > 0 && x % d == 0 {
                        images[i].pow((x / d) as u64)
                    } else {
                        let ex = Q::new(x.into(), d.into());
                        if images[i].as_monomial().is_none() {
                            return Err(Error::Substitution(format!(
                                "variable `{}` has exponent {} but its image {} is not a unit",
                                self.ring.vars()[i],
                                fmt_q(&ex),
                                images[i]
                            )));
                        }
                        images[i].pow_q(&ex)?
                    };
                    cache.insert((i, x), p);
                }
                term = &term * &cache[&(i, x)];
                if term.is_zero() {
                    break;
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// `h` with `self = g·h` when it exists, `None` otherwise. Laurent
    /// inputs are fine: the quotient is searched above `min(self) - min(g)`.
    pub fn exact_div(&self, g: &ExactPoly) -> Result<Option<ExactPoly>> {
        self.check_ring(g)?;
        if g.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(Some(self.ring.zero()));
        }
        let n = self.ring.nvars();
        let lower: Vec<i64> = (0..n)
            .map(|v| self.min_exp(v).expect("nonzero") - g.min_exp(v).expect("nonzero"))
            .collect();
        let (ge, gc) = g.leading_term().map(|(e, c)| (e.clone(), c.clone())).expect("nonzero");
        let mut rem = self.clone();
        let mut quot: Vec<(Exps, Q)> = Vec::new();
        while let Some((re, rc)) = rem.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
            let qe: Exps = re.iter().zip(ge.iter()).map(|(a, b)| a - b).collect();
            if qe.iter().zip(&lower).any(|(a, b)| a < b) {
                return Ok(None);
            }
            let qc = rc / &gc;
            rem = &rem - &g.mul_monomial(&qe, &qc);
            quot.push((qe, qc));
        }
        Ok(Some(self.ring.from_terms(quot)))
    }

    /// Coefficient of `x_var^{e/D}`: the terms with that exponent, with the
    /// variable removed (its exponent set to zero).
    pub fn coeff_in_var(&self, var: usize, e: i64) -> ExactPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(ex, _)| ex[var] == e)
            .map(|(ex, c)| {
                let mut ne = ex.clone();
                ne[var] = 0;
                (ne, c.clone())
            })
            .collect();
        ExactPoly { ring: self.ring.clone(), terms }
    }

    /// Evaluate one variable at a rational value (integral exponents only).
    pub fn eval_var(&self, var: usize, value: &Q) -> Result<ExactPoly> {
        let d = self.ring.denom();
        let mut terms = Vec::with_capacity(self.len());
        for (e, c) in &self.terms {
            if e[var] % d != 0 {
                return Err(Error::Domain("cannot evaluate at a fractional exponent".into()));
            }
            let k = e[var] / d;
            if k < 0 && value.is_zero() {
                return Err(Error::Domain("negative power of zero".into()));
            }
            let mut ne = e.clone();
            ne[var] = 0;
            terms.push((ne, c * int_pow(value, k)));
        }
        Ok(self.ring.from_terms(terms))
    }

    /// Apply a rational map to coefficients, dropping zeros.
    pub fn map_coeffs<F: Fn(&Q) -> Q>(&self, f: F) -> ExactPoly {
        self.ring.from_terms(self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }
}

/// Graded lexicographic comparison on lattice exponents.
pub fn grlex(a: &[i64], b: &[i64]) -> Ordering {
    let sa: i64 = a.iter().sum();
    let sb: i64 = b.iter().sum();
    sa.cmp(&sb).then_with(|| a.cmp(b))
}

impl<'a> std::ops::Add<&'a ExactPoly> for &'a ExactPoly {
    type Output = ExactPoly;
    fn add(self, rhs: &ExactPoly) -> ExactPoly {
        self.checked_add(rhs).expect("ring mismatch in +")
    }
}

impl<'a> std::ops::Sub<&'a ExactPoly> for &'a ExactPoly {
    type Output = ExactPoly;
    fn sub(self, rhs: &ExactPoly) -> ExactPoly {
        self.checked_sub(rhs).expect("ring mismatch in -")
    }
}

impl<'a> std::ops::Mul<&'a ExactPoly> for &'a ExactPoly {
    type Output = ExactPoly;
    fn mul(self, rhs: &ExactPoly) -> ExactPoly {
        self.checked_mul(rhs).expect("ring mismatch in *")
    }
}

impl std::ops::Neg for &ExactPoly {
    type Output = ExactPoly;
    fn neg(self) -> ExactPoly {
        ExactPoly::neg(self)
    }
}

fn fmt_exp(name: &str, e: i64, d: i64) -> String {
    if e == d {
        return name.to_string();
    }
    let v = Q::new(e.into(), d.into());
    if v.is_integer() && !v.is_negative() {
        format!("{name}^{}", fmt_q(&v))
    } else {
        format!("{name}^({})", fmt_q(&v))
    }
}

impl fmt::Display for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let d = self.ring.denom();
        for (idx, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| fmt_exp(&self.ring.vars()[i], x, d))
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if mono.is_empty() {
                write!(f, "{}", fmt_q(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_q(&abs), mono.join("*"))?;
            }
        }
        Ok(())
    }
}
