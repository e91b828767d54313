//! Command-line surface. Every subcommand writes JSON to stdout, or a
//! readable summary with `--report`.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebra::{ExactPoly, Ring};
use crate::error::{Error, Result};
use crate::geometry::Shape;
use crate::grading::Direction;
use crate::harness::dc::{dc_dsc_check, DcMode};
use crate::harness::generate::{generate_examples, GenKind, GenOptions};
use crate::harness::pipeline::{remainder_pipeline, PipelineOptions};
use crate::harness::valqui::valqui_check;
use crate::magnus::params::ParamContext;
use crate::magnus::solver::solve_magnus;
use crate::magnus::supported::SupportOptions;
use crate::tschirnhausen::{decompose_principal, extract_q, minimize_remainder};

#[derive(Parser, Debug)]
#[command(name = "jchain", version, about = "Exact experiments on polynomial pairs with trapezoidal Newton polygons")]
pub struct Cli {
    /// Print a readable summary instead of JSON.
    #[arg(long, global = true)]
    pub report: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Where the polynomials come from: `--f/--g` expressions in `x, y`, or a
/// JSON object `{"F": …, "G": …}` read from a file or stdin. Each value is
/// an expression string or a polynomial envelope.
#[derive(Args, Debug, Clone, Default)]
pub struct Input {
    /// JSON input file (`-` or absent: stdin, unless --f is given).
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long = "f")]
    pub f: Option<String>,
    #[arg(long = "g")]
    pub g: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Derived parameters for `(a, b, m, n)`, `δ` and `i`.
    Params {
        a: i64,
        b: i64,
        m: i64,
        n: i64,
        #[arg(long, default_value_t = 1)]
        delta: i64,
        #[arg(long)]
        i: i64,
    },
    /// Seeded example polynomials.
    Gen {
        #[arg(long)]
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, num_args = 4, value_names = ["A", "B", "M", "N"])]
        params: Vec<i64>,
        #[arg(long, default_value_t = 1)]
        delta: i64,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
    },
    /// `Q` with `N^0(F - Q^a)` away from the corner region.
    ExtractQ {
        #[arg(long, num_args = 4, value_names = ["A", "B", "M", "N"])]
        params: Vec<i64>,
        #[command(flatten)]
        input: Input,
    },
    /// Principal decomposition `F = α(E)`.
    Decompose {
        #[command(flatten)]
        input: Input,
    },
    /// `E°`, `α°` and the remainder `F°`.
    Remainder {
        #[arg(long, num_args = 4, value_names = ["A", "B", "M", "N"])]
        params: Vec<i64>,
        /// Also require the full shape conditions on `F`.
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Magnus constants of `(F, G)` for a grading direction.
    Magnus {
        /// `y` for (0,1), `total` for (1,1), `x` for (1,0).
        #[arg(long, default_value = "total")]
        direction: String,
        #[command(flatten)]
        input: Input,
    },
    /// Divisibility chains on a remainder `F°`.
    CheckDc {
        #[arg(long, num_args = 4, value_names = ["A", "B", "M", "N"])]
        params: Vec<i64>,
        #[arg(long, default_value_t = 1)]
        delta: i64,
        #[arg(long)]
        i: i64,
        /// `01`, `11`, `dc` or `dsc`.
        #[arg(long, default_value = "dsc")]
        mode: DcMode,
        /// Also evaluate the degree limits and corner vanishing.
        #[arg(long)]
        consequences: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Full remainder pipeline on `(F, G)`.
    Pipeline {
        #[arg(long, num_args = 4, value_names = ["A", "B", "M", "N"])]
        params: Vec<i64>,
        #[arg(long)]
        i: Option<i64>,
        /// Symbolic expansion instead of the randomized zero test.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Test every `B ∖ {β}` with `c_β ≠ 0`.
        #[arg(long)]
        sub_supports: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Fit `F` against powers of `C = G^{1/a}`.
    Valqui {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        /// Lowest x-exponent kept.
        #[arg(long, allow_negative_numbers = true, default_value_t = -6)]
        order: i64,
        #[command(flatten)]
        input: Input,
    },
}

fn shape_of(p: &[i64]) -> Result<Shape> {
    match p {
        [a, b, m, n] => Shape::new(*a, *b, *m, *n),
        _ => Err(Error::Parameter("--params needs four integers a b m n".into())),
    }
}

fn poly_from(v: &Value) -> Result<ExactPoly> {
    match v {
        Value::String(s) => Ring::new(&["x", "y"], 1).parse(s),
        Value::Object(_) => ExactPoly::from_json_value(v),
        other => Err(Error::Json(format!("expected a polynomial, found {other}"))),
    }
}

impl Input {
    fn json(&self) -> Result<Value> {
        let text = match &self.input {
            Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", p.display())))?,
            _ => {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| Error::Parse(format!("cannot read stdin: {e}")))?;
                s
            }
        };
        Ok(serde_json::from_str(&text)?)
    }

    /// `F` and, when `need_g`, `G`.
    fn polys(&self, need_g: bool) -> Result<(ExactPoly, Option<ExactPoly>)> {
        let r = Ring::new(&["x", "y"], 1);
        if let Some(f) = &self.f {
            let g = self.g.as_ref().map(|g| r.parse(g)).transpose()?;
            if need_g && g.is_none() {
                return Err(Error::Parse("--g is required".into()));
            }
            return Ok((r.parse(f)?, g));
        }
        let v = self.json()?;
        let f = match v.get("F") {
            Some(f) => poly_from(f)?,
            None => poly_from(&v)?,
        };
        let g = v.get("G").filter(|g| !g.is_null()).map(poly_from).transpose()?;
        if need_g && g.is_none() {
            return Err(Error::Parse("input has no `G`".into()));
        }
        Ok((f, g))
    }
}

/// Output of one invocation: JSON plus the readable form.
pub struct Output {
    pub json: Value,
    pub report: String,
}

fn out(json: Value, report: String) -> Output {
    Output { json, report }
}

pub fn execute(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Params { a, b, m, n, delta, i } => {
            let ctx = ParamContext::new(Shape::new(*a, *b, *m, *n)?, *delta, *i)?;
            Ok(out(ctx.to_json(), ctx.summary()))
        }
        Command::Gen { kind, seed, params, delta, density } => {
            let shape = shape_of(params)?;
            let g = generate_examples(&shape, *kind, &GenOptions { delta: *delta, seed: *seed, density: *density })?;
            let mut rep = format!("F = {}", g.f);
            if let Some(gg) = &g.g {
                rep += &format!("\nG = {gg}");
            }
            Ok(out(g.to_json(), rep))
        }
        Command::ExtractQ { params, input } => {
            let s = shape_of(params)?;
            let (f, _) = input.polys(false)?;
            let q = extract_q(&f, s.a, s.m, s.n)?;
            Ok(out(json!({ "Q": q.to_json_value() }), format!("Q = {q}")))
        }
        Command::Decompose { input } => {
            let (f, _) = input.polys(false)?;
            let d = decompose_principal(&f)?;
            Ok(out(
                json!({ "E": d.e.to_json_value(), "delta": d.delta, "alpha": d.alpha }),
                format!("E = {}\nδ = {}\nα = {}", d.e, d.delta, serde_json::to_string(&d.alpha)?),
            ))
        }
        Command::Remainder { params, strict, input } => {
            let s = shape_of(params)?;
            let (f, _) = input.polys(false)?;
            let r = minimize_remainder(&f, &s, *strict)?;
            let rep = format!("Q = {}\nE° = {}\nδ = {}\nF° = {}\nN^0(F°) = {}", r.q, r.e_circ, r.delta, r.f_circ, r.v_circ);
            Ok(out(r.to_json(), rep))
        }
        Command::Magnus { direction, input } => {
            let w = match direction.as_str() {
                "y" | "01" => Direction::Y,
                "total" | "11" => Direction::Total,
                "x" | "10" => Direction::X,
                other => return Err(Error::Parse(format!("unknown direction `{other}`"))),
            };
            let (f, g) = input.polys(true)?;
            let m = solve_magnus(&f, g.as_ref().expect("checked"), w)?;
            let nz: Vec<String> = m.support().iter().map(|&b| format!("c_{b} = {}", crate::algebra::rational::fmt_q(&m.c[b as usize]))).collect();
            let rep = format!("ρ = {}, r = {}, d = {}, e = {}\n{}", m.rho, m.r, m.d, m.e, nz.join("\n"));
            Ok(out(json!(m), rep))
        }
        Command::CheckDc { params, delta, i, mode, consequences, input } => {
            let s = shape_of(params)?;
            let (f, _) = input.polys(false)?;
            let rep = dc_dsc_check(&f, &s, *delta, *i, *mode, *consequences)?;
            let text = if rep.holds { "holds".to_string() } else { format!("fails:\n  {}", rep.witnesses.join("\n  ")) };
            Ok(out(json!(rep), text))
        }
        Command::Pipeline { params, i, exact, seed, sub_supports, input } => {
            let s = shape_of(params)?;
            let (f, g) = input.polys(true)?;
            let opts = PipelineOptions {
                i: *i,
                support: SupportOptions { exact: *exact, seed: *seed, ..Default::default() },
                sub_supports: *sub_supports,
            };
            let run = remainder_pipeline(&f, g.as_ref().expect("checked"), &s, &opts)?;
            Ok(out(run.to_json(), run.report()))
        }
        Command::Valqui { a, b, order, input } => {
            let (f, g) = input.polys(true)?;
            let rep = valqui_check(&f, g.as_ref().expect("checked"), *a, *b, *order)?;
            let text = format!(
                "C = {}\nλ = ({})\nP = {}\nconditions: {}",
                rep.c_series,
                rep.lambda.join(", "),
                rep.p_series,
                rep.conditions.iter().map(|c| format!("({}) {}", c.index, c.holds)).collect::<Vec<_>>().join(", ")
            );
            Ok(out(json!(rep), text))
        }
    }
}

/// Parse arguments, run, print; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(o) => {
            let text = if cli.report { o.report } else { serde_json::to_string_pretty(&o.json).expect("serializable") };
            // A closed downstream pipe is not an error of the computation.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
