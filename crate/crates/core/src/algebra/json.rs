//! JSON envelope for polynomials:
//! `{"vars": [...], "denom": D, "terms": [[[e1, e2, ...], [num, den]], ...]}`.
//!
//! Exponents are numerators over `denom`. Coefficient parts that fit in an
//! `i64` are written as numbers, larger ones as decimal strings; both forms
//! are accepted on input.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::poly::{ExactPoly, Exps, Ring};
use super::rational::Q;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub denom: i64,
    pub terms: Vec<(Vec<i64>, (Value, Value))>,
}

fn int_to_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(n.to_string()),
    }
}

fn value_to_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Json(format!("coefficient {n} is not an integer"))),
        Value::String(s) => s.parse::<BigInt>().map_err(|_| Error::Json(format!("bad integer string `{s}`"))),
        other => Err(Error::Json(format!("expected integer, found {other}"))),
    }
}

impl From<&ExactPoly> for PolyJson {
    fn from(p: &ExactPoly) -> Self {
        PolyJson {
            vars: p.ring().vars().to_vec(),
            denom: p.ring().denom(),
            terms: p
                .sorted_terms()
                .into_iter()
                .map(|(e, c)| (e.to_vec(), (int_to_value(c.numer()), int_to_value(c.denom()))))
                .collect(),
        }
    }
}

impl PolyJson {
    /// Build the polynomial in a fresh ring described by the envelope.
    pub fn to_poly(&self) -> Result<ExactPoly> {
        if self.denom <= 0 {
            return Err(Error::Json("denom must be positive".into()));
        }
        let ring = Ring::new(&self.vars, self.denom);
        self.to_poly_in(&ring)
    }

    /// Build the polynomial inside an existing ring with matching vars and denom.
    pub fn to_poly_in(&self, ring: &Ring) -> Result<ExactPoly> {
        if ring.vars() != self.vars.as_slice() || ring.denom() != self.denom {
            return Err(Error::Context("JSON polynomial does not match the target ring".into()));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, (n, d)) in &self.terms {
            if e.len() != self.vars.len() {
                return Err(Error::Json("exponent vector length differs from vars".into()));
            }
            let d = value_to_int(d)?;
            if d.is_zero() {
                return Err(Error::Json("zero denominator".into()));
            }
            terms.push((Exps::from_slice(e), Q::new(value_to_int(n)?, d)));
        }
        Ok(ring.from_terms(terms))
    }
}

impl ExactPoly {
    pub fn to_json_value(&self) -> Value {
        serde_json::to_value(PolyJson::from(self)).expect("polynomial JSON is always serializable")
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn from_json(s: &str) -> Result<ExactPoly> {
        let j: PolyJson = serde_json::from_str(s)?;
        j.to_poly()
    }

    pub fn from_json_value(v: &Value) -> Result<ExactPoly> {
        let j: PolyJson = serde_json::from_value(v.clone())?;
        j.to_poly()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_big_coefficients() {
        let r = Ring::new(&["x", "y"], 3);
        let f = r.parse("123456789012345678901234567890/7*x^(2/3)*y - y^(-1) + 5").unwrap();
        let s = f.to_json();
        assert!(s.contains("[\""), "{s}");
        assert_eq!(ExactPoly::from_json(&s).unwrap(), f);
    }

    #[test]
    fn accepts_numbers_or_strings() {
        let s = r#"{"vars":["x"],"denom":1,"terms":[[[2],["3",4]],[[0],[1,1]]]}"#;
        let f = ExactPoly::from_json(s).unwrap();
        assert_eq!(f, Ring::new(&["x"], 1).parse("3/4*x^2+1").unwrap());
    }
}
