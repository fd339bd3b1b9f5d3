//! Command-line front end: every subcommand maps onto one library
//! operation and emits deterministic JSON with exact rational strings.

use crate::basefield::{BaseFieldSpec, FieldElem};
use crate::config::WorkbenchConfig;
use crate::diffpoly::{DiffPoly, Jet};
use crate::dvariety::{dpoint_check, jet_extend, section_numerator};
use crate::error::{Error, Result};
use crate::extension::{build_extension_with_bound, ext_derive, verify_diff_solution};
use crate::parse::{parse_diffpoly, parse_series, print_diffpoly, print_field_elem};
use crate::reduction::{
    problem_validate, ritt_reduce, saturation_member_with_bound, select_smooth_factor_with_bound,
    DLProblem, ProblemKind,
};
use crate::series::{
    distinct_solutions, hensel_root, taylor_solve, undet_coeffs_solve, SeriesSolution, TruncSeries,
};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::sync::Arc;

#[derive(Parser, Debug)]
#[command(
    name = "difflarge",
    about = "Exact-arithmetic workbench for ordinary differential algebra",
    disable_help_subcommand = true
)]
struct Cli {
    /// Path to a JSON config file declaring the base field and defaults.
    #[arg(long, global = true)]
    base: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct ProblemArgs {
    /// The constraint polynomial f.
    #[arg(long)]
    f: String,
    /// The avoidance polynomial g.
    #[arg(long)]
    g: String,
    /// Comma-separated witness coordinates (field expressions).
    #[arg(long)]
    witness: String,
    /// Problem flavour: strict or wide.
    #[arg(long, default_value = "strict")]
    kind: String,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse an expression and print its canonical form.
    Parse {
        #[arg(long)]
        f: String,
    },
    /// Order, leader degree, separant and initial of f.
    Leader {
        #[arg(long)]
        f: String,
    },
    /// Reduce g against f, printing the full certificate.
    Reduce {
        #[arg(long)]
        g: String,
        #[arg(long)]
        f: String,
    },
    /// Saturation-ideal membership of g for irreducible f.
    Saturate {
        #[arg(long)]
        g: String,
        #[arg(long)]
        f: String,
        /// Skip the irreducibility check.
        #[arg(long)]
        assume_irreducible: bool,
    },
    /// Select a smooth factor of f at the witness.
    FactorSelect {
        #[arg(long)]
        f: String,
        #[arg(long)]
        witness: String,
        /// Optional semicolon-separated factor list; omitted = factorize.
        #[arg(long)]
        factors: Option<String>,
    },
    /// Section numerator h and separant of f.
    Section {
        #[arg(long)]
        f: String,
    },
    /// Validate a problem instance and check its witness as a D-point.
    Check(ProblemArgs),
    /// Solve as a truncated power series.
    SolveSeries {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        prec: Option<isize>,
        /// taylor (default) or undet.
        #[arg(long, default_value = "taylor")]
        method: String,
    },
    /// Solve symbolically in the extension field.
    SolveExtension {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Skip the irreducibility check.
        #[arg(long)]
        assume_irreducible: bool,
    },
    /// Enumerate distinct series solutions over a bounded witness grid.
    Distinct {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        prec: Option<isize>,
        #[arg(long)]
        search_bound: Option<i64>,
    },
    /// Solve the Hensel root equation 1 + f + sum mu_i f^i = 0.
    Hensel {
        /// Coefficients mu_2, mu_3, ... as series expressions in t.
        #[arg(long = "mu")]
        mus: Vec<String>,
        #[arg(long)]
        prec: Option<isize>,
    },
    /// Run a JSON-lines problem corpus and print a pass/fail table.
    Corpus { path: String },
}

/// Session state: the resolved config and base field.
pub struct Ctx {
    cfg: WorkbenchConfig,
    base: Arc<BaseFieldSpec>,
}

impl Ctx {
    pub fn load(path: Option<&str>) -> Result<Ctx> {
        let cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Validation(format!("cannot read config {}: {}", p, e)))?;
                WorkbenchConfig::from_json(&text)?
            }
            None => WorkbenchConfig::default(),
        };
        let base = cfg.base_spec()?;
        Ok(Ctx { cfg, base })
    }

    fn poly(&self, text: &str) -> Result<DiffPoly> {
        parse_diffpoly(text, &self.base)
    }

    fn witness(&self, text: &str) -> Result<Jet> {
        let coords = text
            .split(',')
            .map(|part| {
                let p = self.poly(part.trim())?;
                p.as_field_elem().ok_or_else(|| {
                    Error::Validation(
                        "witness coordinates must be base field elements".into(),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Jet::new(coords)
    }

    fn problem(&self, a: &ProblemArgs) -> Result<DLProblem> {
        let kind = match a.kind.as_str() {
            "strict" => ProblemKind::Strict,
            "wide" => ProblemKind::Wide,
            other => {
                return Err(Error::Validation(format!(
                    "unknown kind `{}` (expected strict or wide)",
                    other
                )))
            }
        };
        Ok(DLProblem {
            f: self.poly(&a.f)?,
            g: self.poly(&a.g)?,
            witness: self.witness(&a.witness)?,
            kind,
        })
    }

    fn elem_str(&self, e: &FieldElem) -> String {
        print_field_elem(e, &self.base)
    }

    fn jet_json(&self, j: &Jet) -> Value {
        Value::Array(j.coords().iter().map(|c| json!(self.elem_str(c))).collect())
    }

    fn series_json(&self, s: &TruncSeries) -> Value {
        json!({
            "lowest": s.lowest(),
            "coeffs": s.coeffs().iter().map(|c| self.elem_str(c)).collect::<Vec<_>>(),
            "prec": s.prec(),
        })
    }

    fn solution_json(&self, s: &SeriesSolution) -> Value {
        json!({
            "y": self.series_json(&s.y),
            "jet": self.jet_json(&s.jet),
            "residual_prec": s.residual_prec,
        })
    }
}

fn dispatch(cli: &Cli) -> Result<Value> {
    let ctx = Ctx::load(cli.base.as_deref())?;
    match &cli.cmd {
        Cmd::Parse { f } => {
            let p = ctx.poly(f)?;
            Ok(json!({
                "canonical": print_diffpoly(&p),
                "order": p.order(),
            }))
        }
        Cmd::Leader { f } => {
            let p = ctx.poly(f)?;
            let ld = p.leader_data()?;
            Ok(json!({
                "order": ld.order,
                "leader_degree": ld.leader_degree,
                "separant": print_diffpoly(&ld.separant),
                "initial": print_diffpoly(&ld.initial),
            }))
        }
        Cmd::Reduce { g, f } => {
            let g = ctx.poly(g)?;
            let f = ctx.poly(f)?;
            let cert = ritt_reduce(&g, &f)?;
            let verified = cert.verify(&g, &f)?;
            let cof: serde_json::Map<String, Value> = cert
                .cofactors
                .iter()
                .map(|(j, c)| (j.to_string(), json!(print_diffpoly(c))))
                .collect();
            Ok(json!({
                "remainder": print_diffpoly(&cert.remainder),
                "r": cert.r,
                "cofactors": cof,
                "verified": verified,
            }))
        }
        Cmd::Saturate {
            g,
            f,
            assume_irreducible,
        } => {
            let g = ctx.poly(g)?;
            let f = ctx.poly(f)?;
            let member = saturation_member_with_bound(
                &g,
                &f,
                *assume_irreducible,
                ctx.cfg.factor_degree_bound,
            )?;
            Ok(json!({ "member": member }))
        }
        Cmd::FactorSelect {
            f,
            witness,
            factors,
        } => {
            let f = ctx.poly(f)?;
            let c = ctx.witness(witness)?;
            let supplied = factors
                .as_ref()
                .map(|list| {
                    list.split(';')
                        .map(|s| ctx.poly(s.trim()))
                        .collect::<Result<Vec<_>>>()
                })
                .transpose()?;
            let h = select_smooth_factor_with_bound(
                &f,
                &c,
                supplied.as_deref(),
                ctx.cfg.factor_degree_bound,
            )?;
            Ok(json!({ "factor": print_diffpoly(&h) }))
        }
        Cmd::Section { f } => {
            let f = ctx.poly(f)?;
            let s = section_numerator(&f)?;
            Ok(json!({
                "h": print_diffpoly(&s.numerator_h),
                "separant": print_diffpoly(&s.separant),
            }))
        }
        Cmd::Check(args) => {
            let p = ctx.problem(args)?;
            let report = problem_validate(&p);
            let dpoint = match dpoint_check(&p, &p.witness) {
                Ok(r) => json!({
                    "on_locus": r.on_locus,
                    "smooth": r.smooth,
                    "avoids": r.avoids,
                }),
                Err(_) => Value::Null,
            };
            Ok(json!({
                "valid": report.is_valid(),
                "violations": report.violations,
                "dpoint": dpoint,
            }))
        }
        Cmd::SolveSeries {
            problem,
            prec,
            method,
        } => {
            let p = ctx.problem(problem)?;
            let prec = prec.unwrap_or(ctx.cfg.prec);
            let sol = match method.as_str() {
                "taylor" => taylor_solve(&p, prec)?,
                "undet" => undet_coeffs_solve(&p, prec)?,
                other => {
                    return Err(Error::Validation(format!(
                        "unknown method `{}` (expected taylor or undet)",
                        other
                    )))
                }
            };
            Ok(ctx.solution_json(&sol))
        }
        Cmd::SolveExtension {
            problem,
            assume_irreducible,
        } => {
            let p = ctx.problem(problem)?;
            let field = build_extension_with_bound(
                &p.f,
                *assume_irreducible,
                ctx.cfg.factor_degree_bound,
            )?;
            let report = verify_diff_solution(&p, &field)?;
            let da = ext_derive(&field.generator(), &field)?;
            Ok(json!({
                "order": field.order(),
                "degree": field.degree(),
                "f_image_zero": report.f_image_zero,
                "g_image_nonzero": report.g_image_nonzero,
                "transcendence_by_construction": report.transcendence_by_construction,
                "delta_generator": ctx.elem_str(&da.to_ratfunc(&field)),
            }))
        }
        Cmd::Distinct {
            problem,
            count,
            prec,
            search_bound,
        } => {
            let p = ctx.problem(problem)?;
            let prec = prec.unwrap_or(ctx.cfg.prec);
            let bound = search_bound.unwrap_or(ctx.cfg.search_bound);
            let sols = distinct_solutions(&p, *count, prec, bound)?;
            Ok(json!({
                "solutions": sols.iter().map(|s| ctx.solution_json(s)).collect::<Vec<_>>(),
            }))
        }
        Cmd::Hensel { mus, prec } => {
            let prec = prec.unwrap_or(ctx.cfg.prec);
            let mus = mus
                .iter()
                .map(|m| parse_series(m, &ctx.base, prec))
                .collect::<Result<Vec<_>>>()?;
            let root = hensel_root(&mus, prec)?;
            Ok(json!({ "root": ctx.series_json(&root) }))
        }
        Cmd::Corpus { path } => corpus_run(path, &ctx),
    }
}

/// One corpus record; `base` overrides the session base field per record.
#[derive(serde::Deserialize)]
struct CorpusRecord {
    f: String,
    g: String,
    witness: Vec<String>,
    kind: String,
    prec: isize,
    #[serde(default)]
    base: Option<WorkbenchConfig>,
}

fn corpus_record_run(rec: &CorpusRecord, session: &Ctx) -> Result<()> {
    let base = match &rec.base {
        Some(cfg) => cfg.base_spec()?,
        None => session.base.clone(),
    };
    let kind = match rec.kind.as_str() {
        "strict" => ProblemKind::Strict,
        "wide" => ProblemKind::Wide,
        other => return Err(Error::Validation(format!("unknown kind `{}`", other))),
    };
    let f = parse_diffpoly(&rec.f, &base)?;
    let g = parse_diffpoly(&rec.g, &base)?;
    let coords = rec
        .witness
        .iter()
        .map(|w| {
            parse_diffpoly(w, &base)?.as_field_elem().ok_or_else(|| {
                Error::Validation("witness coordinates must be base field elements".into())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let p = DLProblem {
        f: f.clone(),
        g: g.clone(),
        witness: Jet::new(coords)?,
        kind,
    };

    let report = problem_validate(&p);
    if !report.is_valid() {
        return Err(Error::Validation(report.to_string()));
    }
    // extension solution
    let field = build_extension_with_bound(&f, false, session.cfg.factor_degree_bound)?;
    let sol_report = verify_diff_solution(&p, &field)?;
    if !sol_report.is_solution() {
        return Err(Error::Internal("extension solution check failed".into()));
    }
    // series solution and oracle cross-check
    let a = taylor_solve(&p, rec.prec)?;
    let b = undet_coeffs_solve(&p, rec.prec)?;
    if a.y != b.y {
        return Err(Error::Internal("solver oracle disagreement".into()));
    }
    // invariant suite: certificate, section identity, witness D-point
    let cert = ritt_reduce(&g, &f)?;
    if !cert.verify(&g, &f)? {
        return Err(Error::Internal("reduction certificate failed".into()));
    }
    let s = section_numerator(&f)?;
    if crate::dvariety::section_derive(f.as_ratfunc(), &s)?.is_zero() {
        // identity holds
    } else {
        return Err(Error::Internal("section identity failed".into()));
    }
    let dp = dpoint_check(&p, &p.witness)?;
    if !(dp.on_locus && dp.smooth) {
        return Err(Error::Internal("witness is not a smooth D-point".into()));
    }
    // jets agree between the section recurrence and the series solver
    let je = jet_extend(&f, &p.witness, (rec.prec - 1) as usize)?;
    if je.coords() != a.jet.coords() {
        return Err(Error::Internal("jet disagreement".into()));
    }
    Ok(())
}

/// Execute a JSON-lines corpus; malformed records are reported per line and
/// the run continues.
pub fn corpus_run(path: &str, ctx: &Ctx) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read corpus {}: {}", path, e)))?;
    let mut records = Vec::new();
    let mut passed = 0usize;
    let mut failed = 0usize;
    let mut skipped = 0usize;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let status: (String, String) = match serde_json::from_str::<CorpusRecord>(line) {
            Err(e) => ("malformed".into(), e.to_string()),
            Ok(rec) => match corpus_record_run(&rec, ctx) {
                Ok(()) => ("pass".into(), String::new()),
                Err(Error::RequiresIrreducible) => {
                    ("skipped: hypothesis".into(), "RequiresIrreducible".into())
                }
                Err(e) => ("fail".into(), e.to_string()),
            },
        };
        match status.0.as_str() {
            "pass" => passed += 1,
            "skipped: hypothesis" => skipped += 1,
            _ => failed += 1,
        }
        records.push(json!({
            "line": line_no,
            "status": status.0,
            "detail": status.1,
        }));
    }
    Ok(json!({
        "total": passed + failed + skipped,
        "passed": passed,
        "failed": failed,
        "skipped": skipped,
        "records": records,
    }))
}

/// Entry point shared by the binary and the tests: returns the exit code
/// and the JSON document to print. `argv[0]` is the program name.
pub fn run_command<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // help/version requests are not errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (0, e.to_string());
            }
            return (2, json!({ "error": e.to_string() }).to_string());
        }
    };
    match dispatch(&cli) {
        Ok(v) => {
            let code = if v.get("failed").and_then(Value::as_u64).unwrap_or(0) > 0 {
                1
            } else {
                0
            };
            (code, v.to_string())
        }
        Err(e) => (1, json!({ "error": e.to_string() }).to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, Value) {
        let mut argv = vec!["difflarge"];
        argv.extend_from_slice(args);
        let (code, out) = run_command(argv);
        let v = serde_json::from_str(&out).unwrap_or(Value::String(out));
        (code, v)
    }

    #[test]
    fn parse_and_leader() {
        let (code, v) = run(&["parse", "--f", "x'' - x*x'"]);
        assert_eq!(code, 0);
        assert_eq!(v["canonical"], "x'' - x*x'");
        assert_eq!(v["order"], 2);

        let (code, v) = run(&["leader", "--f", "x'^2 - x"]);
        assert_eq!(code, 0);
        assert_eq!(v["order"], 1);
        assert_eq!(v["leader_degree"], 2);
        assert_eq!(v["separant"], "2*x'");
        assert_eq!(v["initial"], "1");
    }

    #[test]
    fn reduce_command() {
        let (code, v) = run(&["reduce", "--g", "x''", "--f", "x'^2 - x"]);
        assert_eq!(code, 0);
        assert_eq!(v["remainder"], "x'");
        assert_eq!(v["r"], 1);
        assert_eq!(v["verified"], true);
        assert_eq!(v["cofactors"]["1"], "1");
    }

    #[test]
    fn check_command() {
        let (code, v) = run(&[
            "check", "--f", "x'^2 - x", "--g", "x", "--witness", "0,0",
        ]);
        assert_eq!(code, 0);
        assert_eq!(v["valid"], false);
        assert!(v["violations"]
            .as_array()
            .unwrap()
            .iter()
            .any(|s| s == "separant-nonzero"));

        let (code, v) = run(&[
            "check", "--f", "x'^2 - x", "--g", "x", "--witness", "1,1",
        ]);
        assert_eq!(code, 0);
        assert_eq!(v["valid"], true);
        assert_eq!(v["dpoint"]["smooth"], true);
    }

    #[test]
    fn solve_series_command() {
        let (code, v) = run(&[
            "solve-series", "--f", "x' - x", "--g", "1", "--witness", "1,1", "--prec", "8",
        ]);
        assert_eq!(code, 0);
        let coeffs = v["y"]["coeffs"].as_array().unwrap();
        assert_eq!(coeffs[0], "1");
        assert_eq!(coeffs[3], "1/6");
        assert_eq!(v["y"]["prec"], 8);
    }

    #[test]
    fn hensel_command() {
        let (code, v) = run(&["hensel", "--mu", "t", "--prec", "6"]);
        assert_eq!(code, 0);
        let coeffs = v["root"]["coeffs"].as_array().unwrap();
        assert_eq!(coeffs[0], "-1");
        assert_eq!(coeffs[4], "-14");
    }

    #[test]
    fn error_shapes() {
        let (code, v) = run(&["leader", "--f", "3"]);
        assert_eq!(code, 1);
        assert!(v["error"].as_str().unwrap().contains("order"));

        let (code, _) = run(&["nonsense"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn determinism() {
        let args = [
            "solve-series", "--f", "x*x' - 1", "--g", "x", "--witness", "1,1", "--prec", "10",
        ];
        let (c1, v1) = run_command(
            std::iter::once("difflarge").chain(args.iter().copied()),
        );
        let (c2, v2) = run_command(
            std::iter::once("difflarge").chain(args.iter().copied()),
        );
        assert_eq!((c1, &v1), (c2, &v2));
    }
}
