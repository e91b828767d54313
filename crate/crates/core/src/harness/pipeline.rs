//! End-to-end run: shape conditions, remainder, then for every index `i`
//! the Magnus constants, the evaluation map, the supported-set check with
//! the full index set and the `P₁(x_ℓ)` probes.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{ExactPoly, Q};
use crate::error::{Error, Result};
use crate::geometry::Shape;
use crate::magnus::params::{index_set, ParamContext};
use crate::magnus::quotient::{reduce_pk, to_coords, Binomial};
use crate::magnus::solver::{solve_magnus, MagnusCoefficients};
use crate::magnus::supported::{check_supported, constants_from, sub_support_map, SupportOptions, SupportedReport};
use crate::magnus::symbolic::EvalMap;
use crate::tschirnhausen::{minimize_remainder, RemainderResult};

use super::conditions::{check_conditions, ConditionReport};

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    /// Restrict to one index.
    pub i: Option<i64>,
    pub support: SupportOptions,
    /// Also test `B ∖ {β}` for every `β` with `c_β ≠ 0`.
    pub sub_supports: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Truncation {
    pub stage: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P1Probe {
    pub ell: i64,
    /// `x_ℓ` itself is zero.
    pub vacuous: bool,
    pub vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubSupport {
    pub dropped: i64,
    pub supported: bool,
}

/// One `(δ, i)` stage.
#[derive(Clone, Debug, Serialize)]
pub struct IndexRun {
    pub delta: i64,
    pub i: i64,
    pub params: Value,
    pub stages: Vec<Stage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_images: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support: Option<SupportedReport>,
    pub p1: Vec<P1Probe>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sub_supports: Vec<SubSupport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncated: Option<Truncation>,
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub shape: Shape,
    pub f: ExactPoly,
    pub g: ExactPoly,
    pub stages: Vec<Stage>,
    pub conditions: Option<ConditionReport>,
    pub remainder: Option<RemainderResult>,
    /// Keyed by `u`.
    pub magnus: BTreeMap<i64, MagnusCoefficients>,
    pub runs: Vec<IndexRun>,
    pub conclusion: Option<String>,
    pub truncated: Option<Truncation>,
}

impl PipelineRun {
    pub fn to_json(&self) -> Value {
        json!({
            "shape": self.shape,
            "F": self.f.to_json_value(),
            "G": self.g.to_json_value(),
            "stages": self.stages,
            "conditions": self.conditions,
            "remainder": self.remainder.as_ref().map(|r| r.to_json()),
            "magnus": self.magnus.iter().map(|(u, m)| (u.to_string(), json!(m))).collect::<serde_json::Map<_, _>>(),
            "runs": self.runs,
            "conclusion": self.conclusion,
            "truncated": self.truncated,
        })
    }

    /// Readable multi-line summary.
    pub fn report(&self) -> String {
        let s = self.shape;
        let mut out = format!("shape (a,b,m,n) = ({},{},{},{})\n", s.a, s.b, s.m, s.n);
        for st in &self.stages {
            out += &format!("  [{}] {}{}\n", if st.ok { "ok" } else { "FAIL" }, st.name, st.detail.as_ref().map(|d| format!(": {d}")).unwrap_or_default());
        }
        for run in &self.runs {
            let sup = run.support.as_ref().map(|r| if r.supported { "supported" } else { "not supported" }).unwrap_or("-");
            let zero: Vec<String> = run.p1.iter().filter(|p| p.vanishes).map(|p| p.ell.to_string()).collect();
            out += &format!("  δ={} i={}: B {sup}; P1(x_ℓ)=0 for ℓ ∈ {{{}}}", run.delta, run.i, zero.join(","));
            if let Some(t) = &run.truncated {
                out += &format!(" (stopped at {}: {})", t.stage, t.reason);
            }
            out += "\n";
        }
        if let Some(c) = &self.conclusion {
            out += &format!("  {c}\n");
        }
        if let Some(t) = &self.truncated {
            out += &format!("  truncated at {}: {}\n", t.stage, t.reason);
        }
        out
    }
}

/// Internal inconsistencies abort the run; any other failure becomes a truncation.
fn soft<T>(r: Result<T>) -> Result<std::result::Result<T, String>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e @ Error::Inconsistency(_)) => Err(e),
        Err(e) => Ok(Err(e.to_string())),
    }
}

fn stage(name: &str, detail: Option<String>) -> Stage {
    Stage { name: name.into(), ok: true, detail }
}

fn failed(name: &str, reason: &str) -> (Stage, Truncation) {
    (
        Stage { name: name.into(), ok: false, detail: Some(reason.into()) },
        Truncation { stage: name.into(), reason: reason.into() },
    )
}

/// Constants for `(F, G)` in the coordinates `(c, L)` attached to `u`.
pub fn magnus_in_coords(ctx: &ParamContext, f: &ExactPoly, g: &ExactPoly) -> Result<MagnusCoefficients> {
    let which = Binomial::from_u(ctx.u);
    let r2 = ctx.r2_ring();
    let coords = which.coords_ring(r2.denom());
    let lift = |p: &ExactPoly| to_coords(&p.embed(&r2, &[0, 1])?, which, &coords);
    let dir = if ctx.u == 0 { crate::grading::Direction::X } else { crate::grading::Direction::Total };
    let m = solve_magnus(&lift(f)?, &lift(g)?, dir)?;
    if (m.d, m.e) != (ctx.d, ctx.e) {
        return Err(Error::Inconsistency(format!(
            "graded degrees (d, e) = ({}, {}) disagree with the parameters ({}, {})",
            m.d, m.e, ctx.d, ctx.e
        )));
    }
    Ok(m)
}

fn run_index(
    ctx: &ParamContext,
    rem: &RemainderResult,
    magnus: &MagnusCoefficients,
    opts: &PipelineOptions,
) -> Result<IndexRun> {
    let mut run = IndexRun {
        delta: ctx.delta,
        i: ctx.i,
        params: ctx.to_json(),
        stages: vec![stage("build_params", Some(ctx.summary()))],
        x_images: None,
        support: None,
        p1: Vec::new(),
        sub_supports: Vec::new(),
        truncated: None,
    };
    let c: BTreeMap<i64, Q> = constants_from(&magnus.c).into_iter().filter(|(b, _)| *b <= ctx.mm).collect();
    let s = match soft(EvalMap::from_parts(ctx, &rem.e_circ, &rem.f_circ, c))? {
        Ok(s) => s,
        Err(reason) => {
            let (st, t) = failed("evaluation_map", &reason);
            run.stages.push(st);
            run.truncated = Some(t);
            return Ok(run);
        }
    };
    run.stages.push(stage("evaluation_map", None));
    run.x_images = Some(s.xs().iter().map(|p| p.to_string()).collect());
    let full = ctx.admissible_betas();
    let rep = match soft(check_supported(ctx, &rem.alpha_circ, &s, &full, &opts.support))? {
        Ok(r) => r,
        Err(reason) => {
            let (st, t) = failed("check_supported", &reason);
            run.stages.push(st);
            run.truncated = Some(t);
            return Ok(run);
        }
    };
    run.stages.push(stage("check_supported", Some(format!("supported = {}", rep.supported))));
    if opts.sub_supports {
        for beta in full.iter().copied().filter(|b| !s.c_value(*b).is_zero_q()) {
            let kept: Vec<i64> = full.iter().copied().filter(|&x| x != beta).collect();
            let r = check_supported(ctx, &rem.alpha_circ, &sub_support_map(&s, &kept), &kept, &opts.support)?;
            run.sub_supports.push(SubSupport { dropped: beta, supported: r.supported });
        }
    }
    run.support = Some(rep);
    for ell in (0..=ctx.v_f).rev() {
        let x = &s.xs()[ell as usize];
        let vanishes = reduce_pk(x, s.binomial(), 1)?.is_zero();
        run.p1.push(P1Probe { ell, vacuous: x.is_zero(), vanishes });
    }
    run.stages.push(stage("p1_probes", None));
    Ok(run)
}

trait ZeroQ {
    fn is_zero_q(&self) -> bool;
}

impl ZeroQ for Q {
    fn is_zero_q(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

pub fn remainder_pipeline(f: &ExactPoly, g: &ExactPoly, shape: &Shape, opts: &PipelineOptions) -> Result<PipelineRun> {
    let mut run = PipelineRun {
        shape: *shape,
        f: f.clone(),
        g: g.clone(),
        stages: Vec::new(),
        conditions: None,
        remainder: None,
        magnus: BTreeMap::new(),
        runs: Vec::new(),
        conclusion: None,
        truncated: None,
    };
    let truncate = |run: &mut PipelineRun, name: &str, reason: &str| {
        let (st, t) = failed(name, reason);
        run.stages.push(st);
        run.truncated = Some(t);
    };

    let cond = match soft(check_conditions(f, g, shape))? {
        Ok(c) => c,
        Err(reason) => {
            truncate(&mut run, "check_conditions", &reason);
            return Ok(run);
        }
    };
    let first_failure = cond.first_failure().cloned();
    run.conditions = Some(cond);
    if let Some(c) = first_failure {
        let reason = format!("condition ({}) fails: {}", c.index, c.witness.unwrap_or_default());
        truncate(&mut run, "check_conditions", &reason);
        return Ok(run);
    }
    run.stages.push(stage("check_conditions", None));

    let rem = match soft(minimize_remainder(f, shape, true))? {
        Ok(r) => r,
        Err(reason) => {
            truncate(&mut run, "remainder", &reason);
            return Ok(run);
        }
    };
    run.stages.push(stage("extract_q", Some(rem.q.to_string())));
    run.stages.push(stage("decompose_principal", Some(format!("δ = {}, E° = {}", rem.delta, rem.e_circ))));
    run.stages.push(stage("minimize_remainder", Some(format!("F° = {}", rem.f_circ))));
    let delta = rem.delta as i64;
    let f_circ_zero = rem.f_circ.is_zero();
    run.remainder = Some(rem.clone());

    let indices: Vec<i64> = index_set(shape).into_iter().filter(|i| opts.i.is_none_or(|j| j == *i)).collect();
    if let Some(i) = opts.i {
        if indices.is_empty() {
            truncate(&mut run, "build_params", &format!("i = {i} is not in the index set"));
            return Ok(run);
        }
    }
    for i in indices {
        let ctx = match soft(ParamContext::new(*shape, delta, i))? {
            Ok(c) => c,
            Err(reason) => {
                truncate(&mut run, "build_params", &reason);
                return Ok(run);
            }
        };
        if !run.magnus.contains_key(&ctx.u) {
            match soft(magnus_in_coords(&ctx, f, g))? {
                Ok(m) => {
                    run.stages.push(stage("solve_magnus", Some(format!("u = {}", ctx.u))));
                    run.magnus.insert(ctx.u, m);
                }
                Err(reason) => {
                    truncate(&mut run, "solve_magnus", &reason);
                    return Ok(run);
                }
            }
        }
        run.runs.push(run_index(&ctx, &rem, &run.magnus[&ctx.u], opts)?);
    }
    run.conclusion = Some(if f_circ_zero {
        "F° = 0: conclusion (iv) holds trivially; every P1 probe is vacuous".into()
    } else {
        let all = run.runs.iter().all(|r| r.p1.iter().all(|p| p.vanishes));
        format!("F° ≠ 0; P1(x_ℓ) = 0 for every probed ℓ: {all}")
    });
    Ok(run)
}
