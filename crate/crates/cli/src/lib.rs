//! Command-line front end for the `tevelev` library.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use tevelev::closed_forms::{
    alpha_coefficients, deg_t_insertions_closed, tev_p1_cps, vtev_hypersurface_closed,
    vtev_projective_closed,
};
use tevelev::enumerativity::{certify_enumerative, AuditCase, Certificate};
use tevelev::exact::ExactInt;
use tevelev::jacobian::{deg_t, tev_hypersurface_engine, HypParams, InsertionProfile};
use tevelev::quantum::{projective_n, vtev_projective_qh};
use tevelev::schubert::tev_p1_schubert;
use tevelev::sweep::{render_csv, render_jsonl, sweep, SweepRanges};
use tevelev::{acceptance, Error};

#[derive(Debug, Parser)]
#[command(
    name = "tevelev",
    version,
    about = "Exact Tevelev degrees of P^r and low-degree hypersurfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write output to PATH instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads for sweeps.
    #[arg(long, global = true, value_name = "K")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tevelev degree of P^1 (binomial formula and/or Schubert calculus).
    P1 {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value_t = P1Method::Both)]
        method: P1Method,
    },
    /// Tevelev degree of a degree-e hypersurface of dimension r.
    Hyp {
        #[command(flatten)]
        params: HypArgs,
        #[arg(long, value_enum, default_value_t = HypMethod::Both)]
        method: HypMethod,
    },
    /// Degree of T for linear-space insertions of dimensions ell_i.
    Insert {
        #[command(flatten)]
        params: HypArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        ell: Vec<u32>,
        #[arg(long, value_enum, default_value_t = HypMethod::Both)]
        method: HypMethod,
    },
    /// Insertion coefficients alpha_1 .. alpha_{e+r+1}.
    Alpha {
        #[arg(long)]
        e: u32,
        #[arg(long)]
        r: u32,
    },
    /// Virtual Tevelev degree of P^r from quantum cohomology.
    Qh {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        r: u32,
        /// Marked points; defaults to the value matching (g, d, r).
        #[arg(long)]
        n: Option<u32>,
    },
    /// Enumerativity certificate from the stratum audit.
    Certify {
        #[command(flatten)]
        params: HypArgs,
    },
    /// Evaluate every valid tuple in a parameter grid.
    Sweep {
        #[arg(long, value_parser = parse_range)]
        g: Range,
        #[arg(long, value_parser = parse_range)]
        d: Range,
        #[arg(long, value_parser = parse_range)]
        e: Range,
        #[arg(long, value_parser = parse_range)]
        r: Range,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run the acceptance checks and print a pass/fail table.
    Verify,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct HypArgs {
    #[arg(long)]
    pub g: u32,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub e: u32,
    #[arg(long)]
    pub r: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum P1Method {
    Cps,
    Schubert,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HypMethod {
    Closed,
    Engine,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

/// Inclusive integer range, written `lo..hi` or as a single value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Range {
    pub lo: u32,
    pub hi: u32,
}

fn parse_range(s: &str) -> Result<Range, String> {
    let parse = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("`{x}`: {e}"));
    match s.split_once("..") {
        Some((lo, hi)) => Ok(Range {
            lo: parse(lo)?,
            hi: parse(hi.trim_start_matches('='))?,
        }),
        None => {
            let v = parse(s)?;
            Ok(Range { lo: v, hi: v })
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0} acceptance criteria failed")]
    Verification(usize),
}

impl CliError {
    /// 2 for invalid input, 3 for an internal invariant breach, 1 when `verify` fails.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_invariant_breach() => 3,
            CliError::Core(_) | CliError::Io { .. } | CliError::Usage(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}

/// One query result with every method's value as a decimal string.
#[derive(Debug, Clone, Serialize)]
pub struct TevResult {
    pub params: Map<String, Value>,
    pub results: Vec<MethodValue>,
    pub agreement: bool,
    pub flags: Map<String, Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodValue {
    pub method: String,
    pub value: String,
}

impl TevResult {
    fn new(
        params: Map<String, Value>,
        values: Vec<(&str, ExactInt)>,
        flags: Map<String, Value>,
    ) -> Self {
        let agreement = values.windows(2).all(|w| w[0].1 == w[1].1);
        TevResult {
            params,
            results: values
                .into_iter()
                .map(|(m, v)| MethodValue {
                    method: m.to_string(),
                    value: v.to_string(),
                })
                .collect(),
            agreement,
            flags,
        }
    }

    fn render(&self, as_json: bool) -> String {
        if as_json {
            return serde_json::to_string(self).expect("serializable") + "\n";
        }
        let mut out = String::new();
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        writeln!(out, "{}", params.join(" ")).unwrap();
        for r in &self.results {
            writeln!(out, "{:<9} {}", r.method, r.value).unwrap();
        }
        writeln!(out, "agreement {}", self.agreement).unwrap();
        for (k, v) in &self.flags {
            writeln!(out, "{k} {v}").unwrap();
        }
        out
    }
}

fn object(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

pub fn cmd_p1(g: u32, d: u32, method: P1Method) -> Result<TevResult, CliError> {
    let n = 2 * d as i64 - g as i64 + 1;
    let mut values = Vec::new();
    if matches!(method, P1Method::Cps | P1Method::Both) {
        values.push(("cps", tev_p1_cps(g, d)?));
    }
    if matches!(method, P1Method::Schubert | P1Method::Both) {
        values.push(("schubert", tev_p1_schubert(g, d)?));
    }
    let params = object(&[("g", json!(g)), ("d", json!(d)), ("n", json!(n))]);
    Ok(TevResult::new(params, values, Map::new()))
}

fn hyp_flags(virtual_range: bool, bound_ok: bool, certified: bool) -> Map<String, Value> {
    object(&[
        ("virtual_range", json!(virtual_range)),
        ("bound_ok", json!(bound_ok)),
        ("certified", json!(certified)),
    ])
}

fn hyp_params(a: HypArgs, n: u32) -> Map<String, Value> {
    object(&[
        ("g", json!(a.g)),
        ("d", json!(a.d)),
        ("e", json!(a.e)),
        ("r", json!(a.r)),
        ("n", json!(n)),
    ])
}

pub fn cmd_hyp(a: HypArgs, method: HypMethod) -> Result<TevResult, CliError> {
    let closed = vtev_hypersurface_closed(a.g, a.d, a.e, a.r)?;
    let mut values = Vec::new();
    if matches!(method, HypMethod::Closed | HypMethod::Both) {
        values.push(("closed", closed.value.clone()));
    }
    if matches!(method, HypMethod::Engine | HypMethod::Both) {
        let p = HypParams::new(a.g, a.d, a.e, a.r)?;
        values.push(("engine", tev_hypersurface_engine(&p)?));
    }
    let cert = certify_enumerative(a.g, a.d, a.e, a.r)?;
    Ok(TevResult::new(
        hyp_params(a, closed.n),
        values,
        hyp_flags(closed.virtual_range, closed.bound_ok, cert.certified),
    ))
}

pub fn cmd_insert(a: HypArgs, ell: Vec<u32>, method: HypMethod) -> Result<TevResult, CliError> {
    let profile = InsertionProfile::new(ell, a.r)?;
    let p = HypParams::with_insertions(a.g, a.d, a.e, a.r, &profile)?;
    let mut values = Vec::new();
    if matches!(method, HypMethod::Closed | HypMethod::Both) {
        values.push((
            "closed",
            deg_t_insertions_closed(a.g, a.d, a.e, a.r, &profile)?,
        ));
    }
    if matches!(method, HypMethod::Engine | HypMethod::Both) {
        values.push(("engine", deg_t(&p, &profile)?));
    }
    let mut params = hyp_params(a, p.n());
    params.insert("ell".into(), json!(profile.ells()));
    Ok(TevResult::new(params, values, Map::new()))
}

pub fn cmd_qh(g: u32, d: u64, r: u32, n: Option<u32>) -> Result<TevResult, CliError> {
    let matching = projective_n(g, d, r);
    let n = match (n, matching) {
        (Some(n), _) => n,
        (None, Some(n)) => n,
        (None, None) => {
            return Err(Error::InvalidParameters(format!(
                "no integral stable n matches (g={g}, d={d}, r={r}); pass --n"
            ))
            .into())
        }
    };
    let mut values = vec![("qh", vtev_projective_qh(g, d, r, n)?)];
    if matching == Some(n) {
        values.push(("closed", vtev_projective_closed(g, r)?));
    }
    let params = object(&[
        ("g", json!(g)),
        ("d", json!(d)),
        ("r", json!(r)),
        ("n", json!(n)),
    ]);
    Ok(TevResult::new(params, values, Map::new()))
}

fn render_certificate(c: &Certificate, as_json: bool) -> String {
    let witness = c.witness.as_ref().map(|w| {
        json!({
            "b0": w.stratum.b0,
            "b1": w.stratum.b1,
            "b2": w.stratum.b2,
            "case": match w.case { AuditCase::A => "A", AuditCase::B => "B" },
            "delta": w.delta,
            "target_dim": w.target_dim,
            "vdim_stratum": w.vdim_stratum,
            "excess_allowance": w.excess_allowance,
        })
    });
    if as_json {
        let v = json!({
            "params": {"g": c.g, "d": c.d, "e": c.e, "r": c.r, "n": c.n},
            "certified": c.certified,
            "audit_sharper": c.audit_sharper,
            "enough_points": c.enough_points,
            "degree_ok": c.degree_ok,
            "closed_bound": c.closed_bound.as_ref().map(|b| b.to_string()),
            "strata_visited": c.strata_visited,
            "strata_failed": c.strata_failed,
            "witness": witness,
        });
        return v.to_string() + "\n";
    }
    let mut out = String::new();
    writeln!(out, "g={} d={} e={} r={} n={}", c.g, c.d, c.e, c.r, c.n).unwrap();
    writeln!(out, "certified {}", c.certified).unwrap();
    writeln!(out, "audit_sharper {}", c.audit_sharper).unwrap();
    writeln!(out, "n >= max(2g,1) {}", c.enough_points).unwrap();
    writeln!(out, "d >= 2g {}", c.degree_ok).unwrap();
    match &c.closed_bound {
        Some(b) => writeln!(out, "closed bound {b}").unwrap(),
        None => writeln!(out, "closed bound none (r <= (e+1)(e-2))").unwrap(),
    }
    writeln!(
        out,
        "strata {} visited, {} failed",
        c.strata_visited, c.strata_failed
    )
    .unwrap();
    if let Some(w) = &c.witness {
        writeln!(
            out,
            "witness {} case {:?}: vdim {} + allowance {} vs target {}",
            w.stratum,
            w.case,
            w.vdim_stratum,
            w.excess_allowance.unwrap_or(0),
            w.target_dim
        )
        .unwrap();
    }
    out
}

fn cmd_verify() -> (String, usize) {
    let mut out = String::new();
    let outcomes = acceptance::run_all();
    for o in &outcomes {
        writeln!(out, "{}", o.line()).unwrap();
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    writeln!(
        out,
        "{} of {} criteria passed",
        outcomes.len() - failed,
        outcomes.len()
    )
    .unwrap();
    out.push_str("\nP^1 discrepancies (binomial formula vs Schubert calculus, d < g):\n");
    match acceptance::discrepancy_table() {
        Ok(rows) => out.push_str(&acceptance::render_discrepancy_table(&rows)),
        Err(e) => writeln!(out, "error: {e}").unwrap(),
    }
    (out, failed)
}

fn range(r: Range) -> std::ops::RangeInclusive<u32> {
    r.lo..=r.hi
}

/// Runs one invocation and returns the text to emit.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    if let Some(k) = cli.jobs {
        if k == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        // ignore the error if a pool was already installed in this process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global();
    }
    let text = match &cli.command {
        Command::P1 { g, d, method } => cmd_p1(*g, *d, *method)?.render(cli.json),
        Command::Hyp { params, method } => cmd_hyp(*params, *method)?.render(cli.json),
        Command::Insert {
            params,
            ell,
            method,
        } => cmd_insert(*params, ell.clone(), *method)?.render(cli.json),
        Command::Alpha { e, r } => {
            let a = alpha_coefficients(*e, *r)?;
            if cli.json {
                let values: Vec<String> = a.values().iter().map(|v| v.to_string()).collect();
                json!({"e": e, "r": r, "alpha": values}).to_string() + "\n"
            } else {
                let values: Vec<String> = a.values().iter().map(|v| v.to_string()).collect();
                format!("{}\n", values.join(" "))
            }
        }
        Command::Qh { g, d, r, n } => cmd_qh(*g, *d, *r, *n)?.render(cli.json),
        Command::Certify { params } => {
            let c = certify_enumerative(params.g, params.d, params.e, params.r)?;
            render_certificate(&c, cli.json)
        }
        Command::Sweep { g, d, e, r, format } => {
            let ranges = SweepRanges {
                g: range(*g),
                d: range(*d),
                e: range(*e),
                r: range(*r),
            };
            let rows = sweep(&ranges)?;
            match format {
                Format::Csv => render_csv(&rows),
                Format::Jsonl => render_jsonl(&rows),
            }
        }
        Command::Verify => {
            let (text, failed) = cmd_verify();
            emit(cli, &text)?;
            if failed > 0 {
                return Err(CliError::Verification(failed));
            }
            return Ok(String::new());
        }
    };
    emit(cli, &text)?;
    Ok(text)
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
