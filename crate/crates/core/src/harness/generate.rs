//! Seeded example generation. Random polynomials have coefficients uniform
//! on `{-9..9} \ {0}`, each admissible monomial present with probability
//! `density`, and the corner monomial fixed with coefficient 1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{ExactPoly, Q, Ring};
use crate::error::{Error, Result};
use crate::geometry::Shape;
use crate::grading::{apply_phi, Phi};
use crate::tschirnhausen::Tschirnhausen;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GenKind {
    /// `F = φ_zw⁻¹(f)` with `supp f ⊆ T³_{m,n}` and corner coefficient 1.
    Condition123F,
    /// `(α(E), γ(E))` for a random generator `E` at scale `(m/(δa), n/(δa))`.
    BracketZeroPair,
    /// `φ_zw⁻¹(f)` with every coefficient of `f` random, the corner included.
    RandomT3,
}

impl std::str::FromStr for GenKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "condition123_F" | "condition123" => Ok(GenKind::Condition123F),
            "bracket_zero_pair" | "pair" => Ok(GenKind::BracketZeroPair),
            "random_T3" | "t3" => Ok(GenKind::RandomT3),
            other => Err(Error::Parse(format!(
                "unknown kind `{other}` (expected condition123_F, bracket_zero_pair or random_T3)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenOptions {
    pub delta: i64,
    pub seed: u64,
    pub density: f64,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions { delta: 1, seed: 0, density: 0.5 }
    }
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub kind: GenKind,
    pub f: ExactPoly,
    pub g: Option<ExactPoly>,
    pub e: Option<ExactPoly>,
    pub alpha: Option<Tschirnhausen>,
    pub gamma: Option<Tschirnhausen>,
}

impl Generated {
    pub fn to_json(&self) -> Value {
        let opt = |p: &Option<ExactPoly>| p.as_ref().map(|p| p.to_json_value());
        json!({
            "kind": self.kind,
            "F": self.f.to_json_value(),
            "G": opt(&self.g),
            "E": opt(&self.e),
            "alpha": self.alpha,
            "gamma": self.gamma,
        })
    }
}

fn coefficient(rng: &mut ChaCha8Rng) -> Q {
    let v: i64 = rng.random_range(1..=9);
    Q::from_integer(if rng.random_bool(0.5) { v } else { -v }.into())
}

fn present(rng: &mut ChaCha8Rng, density: f64) -> bool {
    density > 0.0 && rng.random_bool(density.min(1.0))
}

/// Random `f ∈ Q[z, w]` supported in `T³_{m,n}`. The corner `z^m w^n` gets
/// coefficient 1 unless `random_corner`.
pub fn random_t3(m: i64, n: i64, rng: &mut ChaCha8Rng, density: f64, random_corner: bool) -> ExactPoly {
    let ring = Ring::new(&["z", "w"], 1);
    let mut terms = Vec::new();
    for x in 0..=m {
        for y in 0..=(n - m + x) {
            let c = if (x, y) == (m, n) {
                if random_corner { coefficient(rng) } else { Q::from_integer(1.into()) }
            } else if present(rng, density) {
                coefficient(rng)
            } else {
                continue;
            };
            terms.push((crate::algebra::Exps::from_slice(&[x, y]), c));
        }
    }
    ring.from_terms(terms)
}

/// Random Tschirnhausen polynomial of degree `deg`.
pub fn random_tschirnhausen(deg: usize, rng: &mut ChaCha8Rng, density: f64) -> Result<Tschirnhausen> {
    let zero = Q::from_integer(0.into());
    let mut coeffs = vec![zero.clone(); deg + 1];
    coeffs[deg] = Q::from_integer(1.into());
    for c in coeffs.iter_mut().take(deg.saturating_sub(1)) {
        if present(rng, density) {
            *c = coefficient(rng);
        }
    }
    Tschirnhausen::new(coeffs)
}

pub fn generate_examples(shape: &Shape, kind: GenKind, opts: &GenOptions) -> Result<Generated> {
    if !(0.0..=1.0).contains(&opts.density) {
        return Err(Error::Parameter(format!("density {} is outside [0, 1]", opts.density)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (a, m, n) = (shape.a, shape.m, shape.n);
    let plain = |f: ExactPoly| Generated { kind, f, g: None, e: None, alpha: None, gamma: None };
    match kind {
        GenKind::Condition123F => Ok(plain(apply_phi(&random_t3(m, n, &mut rng, opts.density, false), Phi::ZwInv)?)),
        GenKind::RandomT3 => Ok(plain(apply_phi(&random_t3(m, n, &mut rng, opts.density, true), Phi::ZwInv)?)),
        GenKind::BracketZeroPair => {
            let s = a * opts.delta;
            if opts.delta < 1 || m % s != 0 || n % s != 0 {
                return Err(Error::Parameter(format!(
                    "δa = {s} does not divide both m = {m} and n = {n}"
                )));
            }
            let e = apply_phi(&random_t3(m / s, n / s, &mut rng, opts.density, false), Phi::ZwInv)?;
            let alpha = random_tschirnhausen(s as usize, &mut rng, opts.density)?;
            let gamma = random_tschirnhausen((shape.b * opts.delta) as usize, &mut rng, opts.density)?;
            Ok(Generated {
                kind,
                f: alpha.eval(&e),
                g: Some(gamma.eval(&e)),
                e: Some(e),
                alpha: Some(alpha),
                gamma: Some(gamma),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::bracket::jacobian_bracket;
    use crate::harness::conditions::check_conditions;

    #[test]
    fn degenerate_pair_for_smallest_shape() {
        let shape = Shape::new(2, 3, 2, 4).unwrap();
        let g = generate_examples(&shape, GenKind::BracketZeroPair, &GenOptions { density: 0.0, ..Default::default() }).unwrap();
        let r = Ring::new(&["x", "y"], 1);
        let e = r.parse("(x+1)*(x+y)^2").unwrap();
        assert_eq!(g.e.as_ref().unwrap(), &e);
        assert_eq!(g.f, e.pow(2));
        assert_eq!(g.g.as_ref().unwrap(), &e.pow(3));
        let gg = g.g.unwrap();
        assert!(check_conditions(&g.f, &gg, &shape).unwrap().all_hold());
        assert!(jacobian_bracket(&g.f, &gg).unwrap().is_zero());
    }

    #[test]
    fn degenerate_t3_draw() {
        let shape = Shape::new(2, 3, 2, 4).unwrap();
        let g = generate_examples(&shape, GenKind::Condition123F, &GenOptions { density: 0.0, ..Default::default() }).unwrap();
        assert_eq!(g.f, Ring::new(&["x", "y"], 1).parse("(x+1)^2*(x+y)^4").unwrap());
    }

    #[test]
    fn seeded_output_is_reproducible() {
        let shape = Shape::new(2, 3, 4, 8).unwrap();
        for kind in [GenKind::Condition123F, GenKind::BracketZeroPair, GenKind::RandomT3] {
            let opts = GenOptions { seed: 17, ..Default::default() };
            let a = generate_examples(&shape, kind, &opts).unwrap().to_json();
            let b = generate_examples(&shape, kind, &opts).unwrap().to_json();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn non_integral_scale_is_rejected() {
        let shape = Shape::new(2, 3, 2, 4).unwrap();
        let opts = GenOptions { delta: 2, ..Default::default() };
        assert!(matches!(generate_examples(&shape, GenKind::BracketZeroPair, &opts), Err(Error::Parameter(_))));
    }
}
