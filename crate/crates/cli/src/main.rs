//! Command-line harness: single-identity verification, Selberg-type sums,
//! constant-term checks, batch suites with JSON reports, and exact replay.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use opdet_core::arith::parse_rational;
use opdet_core::detcore::OpKind;
use opdet_core::families::FamilySpec;
use opdet_core::report::IdentityReport;
use opdet_core::suite::{replay, run_suite, CaseStatus, SuiteConfig, SuiteKind};
use opdet_core::symmetry::{verify_symmetry, Corollary, SymmetryCase};
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "opdet", version, about = "Exact verification of determinant identities for classical orthogonal polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify one master-theorem, quadratic-lattice or symmetry identity.
    Verify(VerifyArgs),
    /// Vandermonde-squared sum identities over finite measures.
    Selberg(SelbergArgs),
    /// Constant-term identities of multivariate Laurent expansions.
    Ct(CtArgs),
    /// Run a batch suite over a parameter grid.
    Suite(SuiteArgs),
    /// Re-verify one case from a report's JSON.
    Replay(ReplayArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// main | quadratic | <family>-symmetry (e.g. charlier-symmetry)
    identity: String,
    #[arg(long)]
    family: Option<String>,
    /// ddx | delta | tmu
    #[arg(long)]
    op: Option<String>,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[command(flatten)]
    params: ParamFlags,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Rational-valued parameter flags shared by the symmetry subcommands.
#[derive(Args, Default)]
struct ParamFlags {
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    d: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long = "N")]
    cap_n: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    x: Option<String>,
}

impl ParamFlags {
    fn to_map(&self) -> Result<BTreeMap<String, opdet_core::Rational>> {
        let mut map = BTreeMap::new();
        let mut put = |key: &str, v: &Option<String>| -> Result<()> {
            if let Some(s) = v {
                map.insert(key.to_string(), parse_rational(s).map_err(|e| anyhow!("{e}"))?);
            }
            Ok(())
        };
        put("a", &self.a)?;
        put("b", &self.b)?;
        put("c", &self.c)?;
        put("d", &self.d)?;
        put("alpha", &self.alpha)?;
        put("beta", &self.beta)?;
        put("gamma", &self.gamma)?;
        put("delta", &self.delta)?;
        put("N", &self.cap_n)?;
        put("lambda", &self.lambda)?;
        Ok(map)
    }
}

#[derive(Args)]
struct SelbergArgs {
    /// verify-tise | verify-corollary | verify-corf | heine | racah-sum | jacobi-gamma1
    check: String,
    #[arg(long)]
    family: Option<String>,
    #[arg(long, default_value = "delta")]
    op: String,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value = "0")]
    u: String,
    #[command(flatten)]
    params: ParamFlags,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CtArgs {
    /// Always "verify".
    action: String,
    /// dyson | morris | meixner | charlier | ultra1 | ultra2
    #[arg(long)]
    identity: String,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[command(flatten)]
    params: ParamFlags,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    /// main-theorem | quadratic-theorem | symmetries | selberg | constterm | all
    #[arg(long, default_value = "all")]
    suite: String,
    /// Family filter, repeatable.
    #[arg(long)]
    family: Vec<String>,
    #[arg(long, default_value_t = 3)]
    max_n: usize,
    #[arg(long, default_value_t = 3)]
    max_m: usize,
    /// Number of seeded random parameter points per family, or an explicit
    /// comma-separated registry-string grid via --grid-list.
    #[arg(long, default_value_t = 3)]
    grid: usize,
    #[arg(long)]
    grid_list: Option<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    negative_controls: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a CSV summary next to the JSON report.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ReplayArgs {
    /// Path to a JSON file holding one case (the "case" field of a report
    /// entry, or a bare case object).
    #[arg(long)]
    case: PathBuf,
    #[arg(long)]
    jobs: Option<usize>,
}

fn emit(report: &IdentityReport, out: &Option<PathBuf>) -> Result<bool> {
    let v = report.to_json();
    let text = serde_json::to_string_pretty(&v)?;
    match out {
        Some(path) => std::fs::write(path, &text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(report.holds)
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    let report = match args.identity.as_str() {
        "main" => {
            let family = args.family.as_deref().context("--family is required")?;
            let op = OpKind::parse(args.op.as_deref().context("--op is required")?)
                .map_err(|e| anyhow!("{e}"))?;
            let spec = FamilySpec::parse(family).map_err(|e| anyhow!("{e}"))?;
            opdet_core::detcore::verify_main(&spec, op, args.n, args.m)
                .map_err(|e| anyhow!("{e}"))?
        }
        "quadratic" => {
            let family = args.family.as_deref().context("--family is required")?;
            let spec = FamilySpec::parse(family).map_err(|e| anyhow!("{e}"))?;
            opdet_core::detcore::quad::verify_quadratic(&spec, args.n, args.m)
                .map_err(|e| anyhow!("{e}"))?
        }
        other => {
            let name = other
                .strip_suffix("-symmetry")
                .with_context(|| format!("unknown identity '{other}'"))?;
            let corollary = Corollary::parse(name).map_err(|e| anyhow!("{e}"))?;
            let params = args.params.to_map()?;
            let list: Vec<(&str, opdet_core::Rational)> =
                params.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
            let case = SymmetryCase::new(corollary, &list, args.n, args.m)
                .map_err(|e| anyhow!("{e}"))?;
            match &args.params.x {
                // --x switches to the pointwise smoke mode
                Some(x) => {
                    let xv = parse_rational(x).map_err(|e| anyhow!("{e}"))?;
                    opdet_core::symmetry::verify_symmetry_at(&case, &xv)
                        .map_err(|e| anyhow!("{e}"))?
                }
                None => verify_symmetry(&case).map_err(|e| anyhow!("{e}"))?,
            }
        }
    };
    emit(&report, &args.out)
}

fn cmd_selberg(args: &SelbergArgs) -> Result<bool> {
    let op = OpKind::parse(&args.op).map_err(|e| anyhow!("{e}"))?;
    let u = parse_rational(&args.u).map_err(|e| anyhow!("{e}"))?;
    let need_family = || -> Result<FamilySpec> {
        let f = args.family.as_deref().context("--family is required")?;
        FamilySpec::parse(f).map_err(|e| anyhow!("{e}"))
    };
    let p = |v: &Option<String>, what: &str| -> Result<opdet_core::Rational> {
        let s = v.as_deref().with_context(|| format!("--{what} is required"))?;
        parse_rational(s).map_err(|e| anyhow!("{e}"))
    };
    let report = match args.check.as_str() {
        "verify-tise" => opdet_core::selberg::verify_tise(&need_family()?, op, args.n, args.m, &u)
            .map_err(|e| anyhow!("{e}"))?,
        "verify-corollary" => {
            opdet_core::selberg::verify_tise_corollary(&need_family()?, op, args.n, args.m, &u)
                .map_err(|e| anyhow!("{e}"))?
        }
        "heine" => {
            let spec = need_family()?;
            let meas = spec.measure(None).map_err(|e| anyhow!("{e}"))?;
            let ok = opdet_core::selberg::heine_check(&meas, args.m).map_err(|e| anyhow!("{e}"))?;
            println!("{{\"identity\":\"heine\",\"m\":{},\"holds\":{}}}", args.m, ok);
            return Ok(ok);
        }
        "racah-sum" => {
            let nn: usize = args
                .params
                .cap_n
                .as_deref()
                .context("--N is required")?
                .parse()
                .context("--N must be a positive integer")?;
            opdet_core::selberg::verify_racah_selberg(
                nn,
                &p(&args.params.beta, "beta")?,
                &p(&args.params.gamma, "gamma")?,
                &p(&args.params.delta, "delta")?,
                args.n,
                args.m,
            )
            .map_err(|e| anyhow!("{e}"))?
        }
        "jacobi-gamma1" => opdet_core::selberg::verify_jacobi_selberg_gamma1(
            &p(&args.params.alpha, "alpha")?,
            &p(&args.params.beta, "beta")?,
            args.m,
        )
        .map_err(|e| anyhow!("{e}"))?,
        other => bail!("unknown selberg check '{other}'"),
    };
    emit(&report, &args.out)
}

fn cmd_ct(args: &CtArgs) -> Result<bool> {
    if args.action != "verify" {
        bail!("usage: opdet ct verify --identity ...");
    }
    let p = |v: &Option<String>, what: &str| -> Result<opdet_core::Rational> {
        let s = v.as_deref().with_context(|| format!("--{what} is required"))?;
        parse_rational(s).map_err(|e| anyhow!("{e}"))
    };
    let report = match args.identity.as_str() {
        "dyson" => opdet_core::constterm::verify_dyson_k1(args.n).map_err(|e| anyhow!("{e}"))?,
        "morris" => {
            let x: usize = args
                .params
                .x
                .as_deref()
                .context("--x is required")?
                .parse()
                .context("--x must be a nonnegative integer for morris")?;
            opdet_core::constterm::verify_morris_k1(args.n, args.m, x, &p(&args.params.a, "a")?)
                .map_err(|e| anyhow!("{e}"))?
        }
        "meixner" => opdet_core::constterm::verify_ct_meixner(
            args.n,
            args.m,
            &p(&args.params.x, "x")?,
            &p(&args.params.a, "a")?,
            &p(&args.params.c, "c")?,
        )
        .map_err(|e| anyhow!("{e}"))?,
        "charlier" => opdet_core::constterm::verify_ct_charlier(
            args.n,
            args.m,
            &p(&args.params.x, "x")?,
            &p(&args.params.a, "a")?,
        )
        .map_err(|e| anyhow!("{e}"))?,
        "ultra1" => opdet_core::constterm::verify_ct_ultraspherical_i(
            args.n,
            args.m,
            &p(&args.params.lambda, "lambda")?,
            &p(&args.params.x, "x")?,
        )
        .map_err(|e| anyhow!("{e}"))?,
        "ultra2" => opdet_core::constterm::verify_ct_ultraspherical_ii(
            args.n,
            args.m,
            &p(&args.params.lambda, "lambda")?,
            &p(&args.params.x, "x")?,
        )
        .map_err(|e| anyhow!("{e}"))?,
        other => bail!("unknown ct identity '{other}'"),
    };
    emit(&report, &args.out)
}

fn cmd_suite(args: &SuiteArgs) -> Result<bool> {
    let cfg = SuiteConfig {
        suite: SuiteKind::parse(&args.suite).map_err(|e| anyhow!("{e}"))?,
        families: if args.family.is_empty() { None } else { Some(args.family.clone()) },
        max_n: args.max_n,
        max_m: args.max_m,
        grid_points: args.grid,
        explicit_grid: args
            .grid_list
            .as_ref()
            .map(|s| s.split(';').map(str::to_string).collect()),
        seed: args.seed,
        jobs: args.jobs,
        negative_controls: args.negative_controls,
    };
    let report = run_suite(&cfg);
    let v = report.to_json();
    let text = serde_json::to_string_pretty(&v)?;
    match &args.out {
        Some(path) => std::fs::write(path, &text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    if let Some(csv) = &args.csv {
        std::fs::write(csv, report.to_csv())
            .with_context(|| format!("writing {}", csv.display()))?;
    }
    eprintln!(
        "suite {:?}: {} cases, {} pass, {} fail, {} skipped (guard), {} skipped (params), {} errors, {} ms",
        report.suite,
        report.total(),
        report.pass,
        report.fail,
        report.skipped_guard,
        report.skipped_forbidden,
        report.errors,
        report.wall_ms
    );
    Ok(report.fail == 0 && report.errors == 0)
}

fn cmd_replay(args: &ReplayArgs) -> Result<bool> {
    let text = std::fs::read_to_string(&args.case)
        .with_context(|| format!("reading {}", args.case.display()))?;
    let v: serde_json::Value = serde_json::from_str(&text).context("case file is not JSON")?;
    // accept either a bare case or an outcome object wrapping one
    let case = v.get("case").cloned().unwrap_or(v);
    let outcome = replay(&case).map_err(|e| anyhow!("{e}"))?;
    println!("{}", serde_json::to_string_pretty(&serde_json::json!(outcome))?);
    Ok(outcome.status == CaseStatus::Pass)
}

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Selberg(a) => cmd_selberg(a),
        Command::Ct(a) => cmd_ct(a),
        Command::Suite(a) => cmd_suite(a),
        Command::Replay(a) => cmd_replay(a),
    };
    match outcome {
        Ok(true) => std::process::exit(0),
        Ok(false) => std::process::exit(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}
