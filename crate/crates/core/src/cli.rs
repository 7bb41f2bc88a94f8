//! Command-line front end. [`run`] takes the argument list and two output
//! streams and returns the process exit code, so it can be driven in-process.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::families::{apostol_prefactor, reduce_special, special_params, tegh_gf, uateghp_gf, FamilyId, FamilyParams};
use crate::identities::{self, OracleStatus, Status, SwapStatus, TheoremId, VerificationReport, VerifyOptions};
use crate::poly::{MultiPoly, Var, VarSet};
use crate::rational::Rational;
use crate::series::LaurentSeries;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DEVIATION: i32 = 3;

const SCHEMA: &str = "1";

#[derive(Parser, Debug)]
#[command(
    name = "apofamily",
    version,
    about = "Unified Apostol type Gould-Hopper polynomials: tables, generating functions and identity checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print P_n for n = 0..=N.
    Compute(ComputeArgs),
    /// Print the generating-function coefficients [t^j] through the given order.
    Gf(GfArgs),
    /// Check one theorem on seeded random parameters.
    Verify(VerifyArgs),
    /// Check every theorem (or one) and print per-theorem counts.
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long, default_value = "uateghp", value_parser = parse_family)]
    family: FamilyId,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long = "A", alias = "a", default_value = "1", allow_hyphen_values = true, value_parser = parse_rational)]
    a: Rational,
    #[arg(long = "B", alias = "b", default_value = "1/2", allow_hyphen_values = true, value_parser = parse_rational)]
    b: Rational,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    alpha: i64,
    #[arg(long, default_value_t = 2)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// Apostol parameter for the Bernoulli, Euler and Genocchi cases.
    #[arg(long, default_value = "1", allow_hyphen_values = true, value_parser = parse_rational)]
    lambda: Rational,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
struct ComputeArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value_t = 8)]
    n: u32,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct GfArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value_t = 8, allow_hyphen_values = true)]
    order: i64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long, default_value_t = 8)]
    order: u32,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    trials: u32,
    #[arg(long, env = "APOFAMILY_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "1/10^30", value_parser = parse_eps)]
    eps: Rational,
    /// Exit with code 3 when a printed identity deviates.
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_theorem)]
    theorem: TheoremId,
    #[command(flatten)]
    check: CheckArgs,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    #[arg(long, value_parser = parse_theorem, conflicts_with = "all", required_unless_present = "all")]
    theorem: Option<TheoremId>,
    #[arg(long)]
    all: bool,
    #[command(flatten)]
    check: CheckArgs,
}

fn parse_family(s: &str) -> Result<FamilyId, String> {
    s.parse().map_err(|e: crate::families::FamilyError| e.to_string())
}

fn parse_theorem(s: &str) -> Result<TheoremId, String> {
    s.parse().map_err(|e: identities::IdentityError| e.to_string())
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    Rational::from_str(s).map_err(|e| e.to_string())
}

/// Accepts `p/q`, `p/q^e`, `10^-30` and `1e-30`, all converted exactly.
fn parse_eps(s: &str) -> Result<Rational, String> {
    let bad = || format!("invalid eps {s:?}");
    let pow10 = |e: i64| -> Rational {
        let p = Rational::from_int(BigInt::from(10).pow(e.unsigned_abs() as u32));
        if e < 0 {
            p.recip().unwrap()
        } else {
            p
        }
    };
    let t = s.trim();
    let v = if let Some((m, e)) = t.split_once(['e', 'E']) {
        let e: i64 = e.parse().map_err(|_| bad())?;
        let mant = parse_decimal(m).ok_or_else(bad)?;
        mant * pow10(e)
    } else if let Some((base, e)) = t.rsplit_once('^') {
        let e: i64 = e.parse().map_err(|_| bad())?;
        match base.split_once('/') {
            Some((n, d)) => {
                let n = parse_rational(n)?;
                let d = parse_rational(d)?.pow(e).ok_or_else(bad)?;
                n / d
            }
            None => parse_rational(base)?.pow(e).ok_or_else(bad)?,
        }
    } else if t.contains('.') {
        parse_decimal(t).ok_or_else(bad)?
    } else {
        parse_rational(t)?
    };
    if v.is_negative() || v.is_zero() {
        return Err("eps must be positive".into());
    }
    Ok(v)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().ok()?;
    let d = BigInt::from(10).pow(frac.len() as u32);
    Rational::from_bigints(n, d)
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(m: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: m.into() }
    }
    fn internal(m: impl Into<String>) -> Self {
        Failure { code: EXIT_INTERNAL, message: m.into() }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let (result, dest) = match &cli.command {
        Command::Compute(a) => (cmd_compute(a), a.out.output.as_ref()),
        Command::Gf(a) => (cmd_gf(a), a.out.output.as_ref()),
        Command::Verify(a) => (cmd_verify(a), a.check.out.output.as_ref()),
        Command::Suite(a) => (cmd_suite(a), a.check.out.output.as_ref()),
    };
    match result {
        Ok((text, code)) => {
            let written = match dest {
                Some(path) => std::fs::write(path, &text),
                None => out.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: cannot write output: {e}");
                return EXIT_INTERNAL;
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

impl FamilyArgs {
    fn params(&self) -> Result<FamilyParams, Failure> {
        let base = FamilyParams::new(self.k, self.a.clone(), self.b.clone(), self.alpha, self.m, self.r)
            .map_err(|e| Failure::usage(e.to_string()))?;
        let p = special_params(self.family, &self.lambda, &base);
        p.validate().map_err(|e| Failure::usage(e.to_string()))?;
        Ok(p)
    }

    fn describe(&self, p: &FamilyParams) -> Value {
        let mut v = json!({
            "family": self.family.name(),
            "k": p.k,
            "A": p.a,
            "B": p.b,
            "alpha": p.alpha,
            "m": p.m,
            "r": p.r,
        });
        if matches!(self.family, FamilyId::Teghabp | FamilyId::Teghaep | FamilyId::Teghagp) {
            v["lambda"] = json!(self.lambda);
        }
        v
    }
}

/// Rows of `(index, polynomial)` in the chosen format.
fn render_rows(kind: &str, header: Value, key: &str, rows: &[(i64, String)], format: Format) -> String {
    match format {
        Format::Text => rows.iter().map(|(n, p)| format!("{n}: {p}\n")).collect(),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([key, "polynomial"]).unwrap();
            for (n, p) in rows {
                w.write_record([n.to_string().as_str(), p.as_str()]).unwrap();
            }
            String::from_utf8(w.into_inner().unwrap()).unwrap()
        }
        Format::Json => {
            let rows: Vec<Value> = rows.iter().map(|(n, p)| json!({ key: n, "polynomial": p })).collect();
            let doc = json!({ "schema": SCHEMA, "command": kind, "params": header, "rows": rows });
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
    }
}

fn cmd_compute(a: &ComputeArgs) -> Result<(String, i32), Failure> {
    let p = a.family.params()?;
    let rows = (0..=a.n)
        .map(|n| {
            reduce_special(a.family.family, n, &a.family.lambda, &p)
                .map(|poly| (n as i64, poly.to_string()))
                .map_err(|e| Failure::internal(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((render_rows("compute", a.family.describe(&p), "n", &rows, a.out.format), EXIT_OK))
}

fn family_gf(id: FamilyId, p: &FamilyParams, order: i64) -> Result<LaurentSeries, Failure> {
    let internal = |e: &dyn std::fmt::Display| Failure::internal(e.to_string());
    let xyz = VarSet::xyz();
    let restrict = |f: LaurentSeries, keep: &VarSet, y0: bool, z0: bool| -> Result<LaurentSeries, Failure> {
        f.map_coeffs(keep, |c| {
            let mut c = c.clone();
            if y0 {
                c = c.eval_var(Var::Y, &Rational::zero());
            }
            if z0 {
                c = c.eval_var(Var::Z, &Rational::zero());
            }
            c.restrict_to(keep).expect("eliminated variables")
        })
        .map_err(|e| internal(&e))
    };
    match id {
        FamilyId::GouldHopper => {
            let f = tegh_gf(&xyz, p.m, p.r, order).map_err(|e| internal(&e))?;
            restrict(f, &VarSet::new(&[Var::X, Var::Y]).unwrap(), false, true)
        }
        FamilyId::TruncExp => {
            let f = tegh_gf(&xyz, p.m, p.r, order).map_err(|e| internal(&e))?;
            restrict(f, &VarSet::new(&[Var::X, Var::Z]).unwrap(), true, false)
        }
        FamilyId::Tegh3v => tegh_gf(&xyz, p.m, p.r, order).map_err(|e| internal(&e)),
        FamilyId::UnifiedApostolP => {
            let vs = VarSet::x();
            let pre = apostol_prefactor(p, order).map_err(|e| internal(&e))?;
            let x = MultiPoly::var(&vs, Var::X).unwrap();
            let e =
                LaurentSeries::exp_poly_arg(&vs, &[(x, 1)], order - pre.offset().min(0)).map_err(|e| internal(&e))?;
            Ok(pre.mul(&e).map_err(|e| internal(&e))?.truncate(order))
        }
        FamilyId::Uateghp | FamilyId::Teghabp | FamilyId::Teghaep | FamilyId::Teghagp => {
            uateghp_gf(p, order).map_err(|e| internal(&e))
        }
        FamilyId::Tehp3v => uateghp_gf(&FamilyParams { m: 2, r: 2, ..p.clone() }, order).map_err(|e| internal(&e)),
        FamilyId::Hermite2v => {
            let f = uateghp_gf(&FamilyParams { m: 2, r: 2, ..p.clone() }, order).map_err(|e| internal(&e))?;
            let two_x = MultiPoly::var(&xyz, Var::X).unwrap().scale(&Rational::from_int(2));
            f.map_coeffs(&xyz, |c| {
                c.eval_var(Var::Y, &-Rational::one())
                    .eval_var(Var::Z, &Rational::one())
                    .substitute(Var::X, &two_x)
                    .expect("same variables")
            })
            .map_err(|e| internal(&e))
        }
    }
}

fn cmd_gf(a: &GfArgs) -> Result<(String, i32), Failure> {
    let p = a.family.params()?;
    let f = family_gf(a.family.family, &p, a.order)?;
    let rows: Vec<(i64, String)> = (f.offset()..=a.order)
        .map(|j| f.coefficient(j).map(|c| (j, c.to_string())).map_err(|e| Failure::internal(e.to_string())))
        .collect::<Result<_, _>>()?;
    let mut header = a.family.describe(&p);
    header["order"] = json!(a.order);
    Ok((render_rows("gf", header, "j", &rows, a.out.format), EXIT_OK))
}

fn options(c: &CheckArgs) -> VerifyOptions {
    VerifyOptions { order: c.order, eps: c.eps.clone(), ..VerifyOptions::default() }
}

#[derive(Default, Serialize)]
struct Counts {
    trials: u32,
    exact_pass: u32,
    pass_within_eps: u32,
    paper_deviation: u32,
    oracle_pass: u32,
    oracle_fail: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    swap_invariant: Option<u32>,
    errors: u32,
}

impl Counts {
    fn tally(results: &[Result<VerificationReport, identities::IdentityError>]) -> Counts {
        let mut c = Counts { trials: results.len() as u32, ..Counts::default() };
        for r in results {
            match r {
                Err(_) => c.errors += 1,
                Ok(rep) => {
                    match rep.status {
                        Status::ExactPass => c.exact_pass += 1,
                        Status::PassWithinEps => c.pass_within_eps += 1,
                        Status::PaperDeviation => c.paper_deviation += 1,
                    }
                    match rep.oracle_status {
                        OracleStatus::OraclePass => c.oracle_pass += 1,
                        OracleStatus::OracleFail => c.oracle_fail += 1,
                    }
                    if let Some(s) = rep.swap_invariance {
                        *c.swap_invariant.get_or_insert(0) += (s == SwapStatus::Invariant) as u32;
                    }
                }
            }
        }
        c
    }

    fn exit_code(&self, strict: bool) -> i32 {
        if self.errors > 0 || self.oracle_fail > 0 {
            EXIT_INTERNAL
        } else if strict && self.paper_deviation > 0 {
            EXIT_DEVIATION
        } else {
            EXIT_OK
        }
    }
}

fn trial_value(trial: usize, r: &Result<VerificationReport, identities::IdentityError>) -> Value {
    match r {
        Ok(rep) => {
            let mut v = serde_json::to_value(rep).unwrap();
            v.as_object_mut().unwrap().insert("trial".into(), json!(trial));
            v
        }
        Err(e) => json!({ "trial": trial, "error": e.to_string() }),
    }
}

const CSV_HEADER: [&str; 20] = [
    "trial",
    "theorem",
    "k",
    "A",
    "B",
    "alpha",
    "m",
    "r",
    "gamma",
    "s",
    "l",
    "q",
    "c",
    "d",
    "x0",
    "status",
    "oracle_status",
    "closing_variant",
    "swap_invariance",
    "counterexample",
];

fn csv_record(
    trial: usize,
    theorem: TheoremId,
    r: &Result<VerificationReport, identities::IdentityError>,
) -> Vec<String> {
    let opt = |v: Option<String>| v.unwrap_or_default();
    match r {
        Err(e) => {
            let mut row = vec![trial.to_string(), theorem.name().to_string()];
            row.resize(CSV_HEADER.len() - 5, String::new());
            row.extend(["error".into(), String::new(), String::new(), String::new(), e.to_string()]);
            row
        }
        Ok(rep) => {
            let s = &rep.params;
            let f = &s.family;
            vec![
                trial.to_string(),
                theorem.name().to_string(),
                f.k.to_string(),
                f.a.to_string(),
                f.b.to_string(),
                f.alpha.to_string(),
                f.m.to_string(),
                f.r.to_string(),
                opt(s.gamma.map(|v| v.to_string())),
                opt(s.s.map(|v| v.to_string())),
                opt(s.l.map(|v| v.to_string())),
                opt(s.q.map(|v| v.to_string())),
                opt(s.c.map(|v| v.to_string())),
                opt(s.d.map(|v| v.to_string())),
                opt(s.x0.as_ref().map(|v| v.to_string())),
                rep.status.name().to_string(),
                rep.oracle_status.name().to_string(),
                opt(rep.closing_variant.clone()),
                opt(rep.swap_invariance.map(|s| match s {
                    SwapStatus::Invariant => "invariant".to_string(),
                    SwapStatus::NotInvariant => "not-invariant".to_string(),
                })),
                opt(rep.counterexample.as_ref().map(|c| format!("n={}: {}", c.n, c.difference))),
            ]
        }
    }
}

fn text_line(trial: usize, r: &Result<VerificationReport, identities::IdentityError>) -> String {
    match r {
        Err(e) => format!("trial {trial}: error: {e}\n"),
        Ok(rep) => {
            let mut line = format!("trial {trial}: {} {}", rep.status.name(), rep.oracle_status.name());
            if let Some(v) = &rep.closing_variant {
                line += &format!(" [{v}]");
            }
            if let Some(s) = rep.swap_invariance {
                line += if s == SwapStatus::Invariant { " swap-invariant" } else { " swap-not-invariant" };
            }
            if let Some(c) = &rep.counterexample {
                line += &format!(" (first failure at n = {})", c.n);
            }
            line + "\n"
        }
    }
}

fn cmd_verify(a: &VerifyArgs) -> Result<(String, i32), Failure> {
    let c = &a.check;
    let results = identities::verify_trials(a.theorem, c.trials, c.seed, &options(c));
    let counts = Counts::tally(&results);
    let text = match c.out.format {
        Format::Json => {
            let reports: Vec<Value> = results.iter().enumerate().map(|(i, r)| trial_value(i, r)).collect();
            let doc = json!({
                "schema": SCHEMA,
                "command": "verify",
                "theorem": a.theorem.name(),
                "seed": c.seed,
                "order": c.order,
                "trials": c.trials,
                "reports": reports,
                "summary": counts,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER).unwrap();
            for (i, r) in results.iter().enumerate() {
                w.write_record(csv_record(i, a.theorem, r)).unwrap();
            }
            String::from_utf8(w.into_inner().unwrap()).unwrap()
        }
        Format::Text => {
            let mut s = format!("{} seed={} order={}\n", a.theorem.name(), c.seed, c.order);
            for (i, r) in results.iter().enumerate() {
                s += &text_line(i, r);
            }
            s
        }
    };
    Ok((text, counts.exit_code(c.strict)))
}

fn cmd_suite(a: &SuiteArgs) -> Result<(String, i32), Failure> {
    let c = &a.check;
    let theorems: Vec<TheoremId> = match a.theorem {
        Some(t) => vec![t],
        None => TheoremId::ALL.to_vec(),
    };
    let opts = options(c);
    let per: BTreeMap<usize, (TheoremId, Counts)> = theorems
        .iter()
        .enumerate()
        .map(|(i, &t)| (i, (t, Counts::tally(&identities::verify_trials(t, c.trials, c.seed, &opts)))))
        .collect();
    let code = if per.values().any(|(_, k)| k.exit_code(false) == EXIT_INTERNAL) {
        EXIT_INTERNAL
    } else if per.values().any(|(_, k)| k.exit_code(c.strict) == EXIT_DEVIATION) {
        EXIT_DEVIATION
    } else {
        EXIT_OK
    };
    let text = match c.out.format {
        Format::Json => {
            let rows: Vec<Value> = per
                .values()
                .map(|(t, k)| {
                    let mut v = serde_json::to_value(k).unwrap();
                    v.as_object_mut().unwrap().insert("theorem".into(), json!(t.name()));
                    v
                })
                .collect();
            let doc = json!({
                "schema": SCHEMA,
                "command": "suite",
                "seed": c.seed,
                "order": c.order,
                "trials": c.trials,
                "theorems": rows,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "theorem",
                "trials",
                "exact_pass",
                "pass_within_eps",
                "paper_deviation",
                "oracle_pass",
                "oracle_fail",
                "swap_invariant",
                "errors",
            ])
            .unwrap();
            for (t, k) in per.values() {
                w.write_record([
                    t.name().to_string(),
                    k.trials.to_string(),
                    k.exact_pass.to_string(),
                    k.pass_within_eps.to_string(),
                    k.paper_deviation.to_string(),
                    k.oracle_pass.to_string(),
                    k.oracle_fail.to_string(),
                    k.swap_invariant.map(|v| v.to_string()).unwrap_or_default(),
                    k.errors.to_string(),
                ])
                .unwrap();
            }
            String::from_utf8(w.into_inner().unwrap()).unwrap()
        }
        Format::Text => {
            let mut s = format!("suite seed={} order={} trials={}\n", c.seed, c.order, c.trials);
            for (t, k) in per.values() {
                s += &format!(
                    "{:<9} exact {:>3}  eps {:>3}  deviation {:>3}  oracle {:>3}/{:<3}",
                    t.name(),
                    k.exact_pass,
                    k.pass_within_eps,
                    k.paper_deviation,
                    k.oracle_pass,
                    k.trials
                );
                if let Some(sw) = k.swap_invariant {
                    s += &format!("  swap {sw:>3}");
                }
                if k.errors > 0 {
                    s += &format!("  errors {}", k.errors);
                }
                s += "\n";
            }
            s
        }
    };
    Ok((text, code))
}
