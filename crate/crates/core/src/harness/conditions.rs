//! The five shape conditions on a pair `(F, G)` for parameters `(a, b, m, n)`.

use serde::Serialize;

use crate::algebra::rational::fmt_q;
use crate::algebra::ExactPoly;
use crate::error::Result;
use crate::geometry::{newton0, trapezoid_int, Point, Shape};
use crate::grading::{condition_a, condition_b};

use super::bracket::jacobian_bracket;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub index: u8,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl ConditionResult {
    fn from_witness(index: u8, witness: Option<String>) -> Self {
        ConditionResult { index, holds: witness.is_none(), witness }
    }
}

/// Verdicts for conditions (1)–(5), in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub conditions: Vec<ConditionResult>,
}

impl ConditionReport {
    pub fn all_hold(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }

    /// Verdict of condition `index` (1-based).
    pub fn holds(&self, index: u8) -> bool {
        self.conditions.iter().any(|c| c.index == index && c.holds)
    }

    pub fn first_failure(&self) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| !c.holds)
    }
}

fn show(p: &Point) -> String {
    format!("({}, {})", fmt_q(&p.0), fmt_q(&p.1))
}

/// `N^0(P) = T_{m,n}` and removing `x^m y^n` strictly shrinks `N^0(P)`.
fn trapezoid_condition(p: &ExactPoly, m: i64, n: i64) -> Result<Option<String>> {
    let np = newton0(p)?;
    let t = trapezoid_int(m, n);
    if let Some(v) = t.vertex_outside(&np) {
        return Ok(Some(format!("missing vertex {} of T_{{{m},{n}}}", show(&v))));
    }
    if let Some(v) = np.vertex_outside(&t) {
        return Ok(Some(format!("vertex {} lies outside T_{{{m},{n}}}", show(&v))));
    }
    let corner = p.ring().monomial(&[m, n], crate::algebra::rational::q(1));
    let reduced = newton0(&p.checked_sub(&corner)?)?;
    if reduced == np {
        return Ok(Some(format!("coefficient of x^{m}*y^{n} is {}, not 1", fmt_q(&p.coeff(&[m, n])))));
    }
    Ok(None)
}

const SHOWN: usize = 160;

fn clip(s: String) -> String {
    if s.chars().count() <= SHOWN {
        s
    } else {
        format!("{}…", s.chars().take(SHOWN).collect::<String>())
    }
}

/// Decide each condition independently.
pub fn check_conditions(f: &ExactPoly, g: &ExactPoly, shape: &Shape) -> Result<ConditionReport> {
    let (a, b, m, n) = (shape.a, shape.b, shape.m, shape.n);
    let c1 = trapezoid_condition(f, m, n)?;
    let c2 = condition_a(f, m, n)?
        .map(|i| format!("F^(0,1)_{} is not divisible by (x+1)^{}", n - i, m - i));
    let c3 = condition_b(f, m, n)?
        .map(|i| format!("F^(1,1)_{} is not divisible by (x+y)^{}", m + n - i, n - i));
    let c4 = trapezoid_condition(g, b * m / a, b * n / a)?.map(|w| format!("G: {w}"));
    let br = jacobian_bracket(f, g)?;
    let c5 = (!br.is_constant()).then(|| clip(format!("[F,G] = {br}")));
    let conditions = [c1, c2, c3, c4, c5]
        .into_iter()
        .enumerate()
        .map(|(i, w)| ConditionResult::from_witness(i as u8 + 1, w))
        .collect();
    Ok(ConditionReport { conditions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Ring;
    use crate::grading::{apply_phi, Phi};

    fn zw(s: &str) -> ExactPoly {
        let f = Ring::new(&["z", "w"], 1).parse(s).unwrap();
        apply_phi(&f, Phi::ZwInv).unwrap()
    }

    #[test]
    fn single_term_image_satisfies_shape_conditions() {
        let shape = Shape::new(2, 3, 2, 4).unwrap();
        let f = zw("z^2*w^4");
        let rep = check_conditions(&f, &f, &shape).unwrap();
        assert!(rep.holds(1) && rep.holds(2) && rep.holds(3));
        // G = F has the wrong size for b ≠ a.
        assert!(!rep.holds(4));
        assert!(rep.holds(5));
    }

    #[test]
    fn bare_corner_monomial_misses_a_vertex() {
        let shape = Shape::new(2, 3, 2, 4).unwrap();
        let r = Ring::new(&["x", "y"], 1);
        let f = r.parse("x^2*y^4").unwrap();
        let rep = check_conditions(&f, &f, &shape).unwrap();
        let w = rep.conditions[0].witness.as_deref().unwrap();
        assert_eq!(w, "missing vertex (6, 0) of T_{2,4}");
        assert_eq!(rep.all_hold(), rep.first_failure().is_none());
    }

    #[test]
    fn corner_coefficient_must_be_one() {
        let shape = Shape::new(2, 3, 2, 4).unwrap();
        let f = zw("2*z^2*w^4");
        let rep = check_conditions(&f, &f, &shape).unwrap();
        assert!(!rep.holds(1));
        assert!(rep.conditions[0].witness.as_deref().unwrap().contains("coefficient"));
    }

    #[test]
    fn nonconstant_bracket_is_reported() {
        let shape = Shape::new(2, 3, 2, 4).unwrap();
        let e = zw("z*w^2");
        let f = e.pow(2);
        let g = &e.pow(3) + &Ring::new(&["x", "y"], 1).parse("x").unwrap();
        let rep = check_conditions(&f, &g, &shape).unwrap();
        assert!(rep.holds(4));
        assert!(!rep.holds(5));
    }
}
