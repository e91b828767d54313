//! Divisibility chains on the remainder: for an index `i`, the `(0,1)`-pieces
//! against powers of `x + 1`, the `(1,1)`-pieces against powers of `x + y`,
//! and optionally containment in the trapezoid `T_{a_i, b_i}`.

use serde::Serialize;

use crate::algebra::rational::{fmt_q, q, qf, Q};
use crate::algebra::{divisible_by_binomial_power, ExactPoly};
use crate::error::{Error, Result};
use crate::geometry::{support, trapezoid_int, Shape};
use crate::grading::{w_decompose, w_degree, Direction, Extended};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DcMode {
    /// `(0,1)`-pieces only.
    W01,
    /// `(1,1)`-pieces only.
    W11,
    /// Both divisibility families.
    Dc,
    /// Both families plus `supp ⊆ T_{a_i, b_i}`.
    Dsc,
}

impl std::str::FromStr for DcMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "01" | "(0,1)" | "w01" | "(0,1)-dc" => Ok(DcMode::W01),
            "11" | "(1,1)" | "w11" | "(1,1)-dc" => Ok(DcMode::W11),
            "dc" => Ok(DcMode::Dc),
            "dsc" => Ok(DcMode::Dsc),
            other => Err(Error::Parse(format!("unknown DC mode `{other}` (expected 01, 11, dc or dsc)"))),
        }
    }
}

/// One consequence that should follow from the chain at a minimal remainder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsequenceCheck {
    pub name: &'static str,
    /// Whether its hypotheses hold at this index.
    pub applicable: bool,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DcReport {
    pub i: i64,
    pub mode: DcMode,
    pub holds: bool,
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub consequences: Vec<ConsequenceCheck>,
}

/// First graded piece `P_j` of `f` (in direction `w`) not divisible by
/// `l^{j - threshold}`, as `(j, j - threshold)`.
pub fn piece_divisibility(f: &ExactPoly, w: Direction, threshold: i64) -> Result<Option<(Q, i64)>> {
    let vars = f.ring().vars();
    let l = match w {
        Direction::Y => f.ring().parse(&format!("{} + 1", vars[0]))?,
        Direction::Total => f.ring().parse(&format!("{} + {}", vars[0], vars[1]))?,
        Direction::X => return Err(Error::Parameter("divisibility chains use the (0,1) and (1,1) gradings".into())),
    };
    for (j, piece) in &w_decompose(f, w)?.pieces {
        if !j.is_integer() {
            return Err(Error::Lattice(format!("graded piece of degree {} is off the integer lattice", fmt_q(j))));
        }
        let k = j - q(threshold);
        if k > Q::from_integer(0.into()) {
            let k = k.to_integer().try_into().map_err(|_| Error::Domain("exponent too large".into()))?;
            if !divisible_by_binomial_power(piece, &l, k)? {
                return Ok(Some((j.clone(), k)));
            }
        }
    }
    Ok(None)
}

fn divisibility_witness(f: &ExactPoly, w: Direction, threshold: i64) -> Result<Option<String>> {
    let (label, l) = if w == Direction::Y { ("(0,1)", "x+1") } else { ("(1,1)", "x+y") };
    Ok(piece_divisibility(f, w, threshold)?
        .map(|(j, k)| format!("F°^{label}_{} is not divisible by ({l})^{k}", fmt_q(&j))))
}

fn outside_trapezoid(f: &ExactPoly, a: i64, b: i64) -> Result<Option<(i64, i64)>> {
    let t = trapezoid_int(a, b);
    Ok(support(f)?.into_iter().find(|&(x, y)| !t.contains_int(x, y)))
}

fn deg(f: &ExactPoly, w: Direction) -> Result<Extended<Q>> {
    w_degree(f, w)
}

fn below(d: &Extended<Q>, bound: &Q) -> bool {
    match d {
        Extended::NegInf => true,
        Extended::Fin(v) => v < bound,
    }
}

/// Check the chain at index `i`. With `consequences`, also evaluate the
/// degree limits and the corner-vanishing statement that a minimal
/// remainder satisfying the chain should obey, reporting violations.
pub fn dc_dsc_check(f_circ: &ExactPoly, shape: &Shape, delta: i64, i: i64, mode: DcMode, consequences: bool) -> Result<DcReport> {
    let (a, m, n) = (shape.a, shape.m, shape.n);
    if i < 0 || i > m * (n - m) {
        return Err(Error::Parameter(format!("i = {i} is outside [0, {}]", m * (n - m))));
    }
    let (ai, bi) = shape.ab_seq(i);
    let fl = i.div_euclid(m);
    let w01 = divisibility_witness(f_circ, Direction::Y, fl)?;
    let w11 = divisibility_witness(f_circ, Direction::Total, ai)?;
    let dsc = outside_trapezoid(f_circ, ai, bi)?
        .map(|(x, y)| format!("x^{x}*y^{y} lies outside T_{{{ai},{bi}}}"));
    let picked: Vec<&Option<String>> = match mode {
        DcMode::W01 => vec![&w01],
        DcMode::W11 => vec![&w11],
        DcMode::Dc => vec![&w01, &w11],
        DcMode::Dsc => vec![&w01, &w11, &dsc],
    };
    let witnesses: Vec<String> = picked.into_iter().flatten().cloned().collect();
    let mut report = DcReport { i, mode, holds: witnesses.is_empty(), witnesses, consequences: Vec::new() };
    if !consequences {
        return Ok(report);
    }
    let top = qf(m * (n - m) * (a - 1), a);
    let ii = q(i);
    let d01 = deg(f_circ, Direction::Y)?;
    let d11 = deg(f_circ, Direction::Total)?;

    // (0,1)-degree limit in the upper range of indices.
    let bound = q(fl + m) - qf(m, a);
    let applicable = ii >= top && w01.is_none();
    let holds = !applicable || below(&d01, &bound);
    report.consequences.push(ConsequenceCheck {
        name: "w01_degree_limit",
        applicable,
        holds,
        detail: (!holds).then(|| format!("(0,1)-deg F° = {d01} is not below {}", fmt_q(&bound))),
    });

    // (1,1)-degree limit, given the (0,1)-degree bound n(a-1)/a.
    let bound = q(ai) + qf(n * (a - 1), a);
    let applicable = ii >= &top - q(1) && below(&d01, &qf(n * (a - 1), a)) && w11.is_none();
    let holds = !applicable || below(&d11, &bound);
    report.consequences.push(ConsequenceCheck {
        name: "w11_degree_limit",
        applicable,
        holds,
        detail: (!holds).then(|| format!("(1,1)-deg F° = {d11} is not below {}", fmt_q(&bound))),
    });

    // Corner vanishing when aδ·a_i/m = aδ·⌊i/m⌋/(n-m) is a nonnegative integer.
    let ad = a * delta;
    let lhs = qf(ad * ai, m);
    let rhs = qf(ad * fl, n - m);
    let applicable = ii <= top && lhs == rhs && lhs.is_integer() && w01.is_none() && w11.is_none() && dsc.is_none();
    let corner = if applicable && bi >= 1 { outside_trapezoid(f_circ, ai, bi - 1)? } else { None };
    let corner = if applicable && bi < 1 { support(f_circ)?.first().copied() } else { corner };
    report.consequences.push(ConsequenceCheck {
        name: "corner_vanishing",
        applicable,
        holds: corner.is_none(),
        detail: corner.map(|(x, y)| format!("x^{x}*y^{y} lies outside T_{{{ai},{}}}", bi - 1)),
    });
    Ok(report)
}
