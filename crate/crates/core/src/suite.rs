//! Batch verification: deterministic case generation over parameter grids,
//! a work-stealing runner with per-case isolation, JSON reports, and exact
//! replay of any single case.

use crate::arith::{parse_rational, q, ParamError, ParamErrorKind, Rational, Result};
use crate::detcore::{quad::verify_quadratic, verify_main_corrupted, Corruption, OpKind};
use crate::report::IdentityReport;
use crate::symmetry::{verify_symmetry, Corollary, SymmetryCase};
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};

/// One self-contained verification case; the JSON form of this enum is the
/// replay format.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "identity", rename_all = "kebab-case")]
pub enum CaseSpec {
    Main {
        family: String,
        op: OpKind,
        n: usize,
        m: usize,
        #[serde(default)]
        corrupt: Corruption,
    },
    Quadratic {
        family: String,
        n: usize,
        m: usize,
    },
    Symmetry {
        corollary: Corollary,
        params: BTreeMap<String, String>,
        n: usize,
        m: usize,
    },
    SelbergSum {
        family: String,
        op: OpKind,
        n: usize,
        m: usize,
        u: String,
    },
    SelbergCorollary {
        family: String,
        op: OpKind,
        n: usize,
        m: usize,
        u: String,
    },
    Heine {
        family: String,
        m: usize,
    },
    RacahSum {
        #[serde(rename = "N")]
        nn: usize,
        beta: String,
        gamma: String,
        delta: String,
        n: usize,
        m: usize,
    },
    JacobiGamma1 {
        alpha: String,
        beta: String,
        m: usize,
    },
    Dyson {
        n: usize,
    },
    Morris {
        n: usize,
        m: usize,
        x: usize,
        a: String,
    },
    CtMeixner {
        n: usize,
        m: usize,
        x: String,
        a: String,
        c: String,
    },
    CtCharlier {
        n: usize,
        m: usize,
        x: String,
        a: String,
    },
    CtUltraI {
        n: usize,
        m: usize,
        x: String,
        lambda: String,
    },
    CtUltraII {
        n: usize,
        m: usize,
        x: String,
        lambda: String,
    },
}

/// Run one case to an identity report.
pub fn run_case(case: &CaseSpec) -> Result<IdentityReport> {
    use crate::families::FamilySpec;
    match case {
        CaseSpec::Main { family, op, n, m, corrupt } => {
            let spec = FamilySpec::parse(family)?;
            verify_main_corrupted(&spec, *op, *n, *m, *corrupt)
        }
        CaseSpec::Quadratic { family, n, m } => {
            let spec = FamilySpec::parse(family)?;
            verify_quadratic(&spec, *n, *m)
        }
        CaseSpec::Symmetry { corollary, params, n, m } => {
            let case = SymmetryCase::from_strings(*corollary, params, *n, *m)?;
            verify_symmetry(&case)
        }
        CaseSpec::SelbergSum { family, op, n, m, u } => {
            let spec = FamilySpec::parse(family)?;
            crate::selberg::verify_tise(&spec, *op, *n, *m, &parse_rational(u)?)
        }
        CaseSpec::SelbergCorollary { family, op, n, m, u } => {
            let spec = FamilySpec::parse(family)?;
            crate::selberg::verify_tise_corollary(&spec, *op, *n, *m, &parse_rational(u)?)
        }
        CaseSpec::Heine { family, m } => {
            let spec = FamilySpec::parse(family)?;
            let measure = spec.measure(None)?;
            let ok = crate::selberg::heine_check(&measure, *m)?;
            let mut params = BTreeMap::new();
            params.insert("family".into(), family.clone());
            Ok(bool_report("heine", params, 0, *m, ok))
        }
        CaseSpec::RacahSum { nn, beta, gamma, delta, n, m } => crate::selberg::verify_racah_selberg(
            *nn,
            &parse_rational(beta)?,
            &parse_rational(gamma)?,
            &parse_rational(delta)?,
            *n,
            *m,
        ),
        CaseSpec::JacobiGamma1 { alpha, beta, m } => crate::selberg::verify_jacobi_selberg_gamma1(
            &parse_rational(alpha)?,
            &parse_rational(beta)?,
            *m,
        ),
        CaseSpec::Dyson { n } => crate::constterm::verify_dyson_k1(*n),
        CaseSpec::Morris { n, m, x, a } => {
            crate::constterm::verify_morris_k1(*n, *m, *x, &parse_rational(a)?)
        }
        CaseSpec::CtMeixner { n, m, x, a, c } => crate::constterm::verify_ct_meixner(
            *n,
            *m,
            &parse_rational(x)?,
            &parse_rational(a)?,
            &parse_rational(c)?,
        ),
        CaseSpec::CtCharlier { n, m, x, a } => crate::constterm::verify_ct_charlier(
            *n,
            *m,
            &parse_rational(x)?,
            &parse_rational(a)?,
        ),
        CaseSpec::CtUltraI { n, m, x, lambda } => crate::constterm::verify_ct_ultraspherical_i(
            *n,
            *m,
            &parse_rational(lambda)?,
            &parse_rational(x)?,
        ),
        CaseSpec::CtUltraII { n, m, x, lambda } => crate::constterm::verify_ct_ultraspherical_ii(
            *n,
            *m,
            &parse_rational(lambda)?,
            &parse_rational(x)?,
        ),
    }
}

fn bool_report(
    identity: &str,
    params: BTreeMap<String, String>,
    n: usize,
    m: usize,
    ok: bool,
) -> IdentityReport {
    use crate::poly::Poly;
    let lhs = Poly::constant(if ok { Rational::zero() } else { crate::arith::qi(1) });
    IdentityReport {
        identity: identity.into(),
        family: identity.into(),
        params,
        n,
        m,
        holds: ok,
        constants: BTreeMap::new(),
        lhs: lhs.clone(),
        rhs: Poly::zero(),
        residual: lhs,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteKind {
    MainTheorem,
    QuadraticTheorem,
    Symmetries,
    Selberg,
    Constterm,
    All,
}

impl SuiteKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "main-theorem" => Ok(SuiteKind::MainTheorem),
            "quadratic-theorem" => Ok(SuiteKind::QuadraticTheorem),
            "symmetries" => Ok(SuiteKind::Symmetries),
            "selberg" => Ok(SuiteKind::Selberg),
            "constterm" => Ok(SuiteKind::Constterm),
            "all" => Ok(SuiteKind::All),
            other => Err(ParamError::forbidden(format!("unknown suite '{other}'"))),
        }
    }
}

/// Suite configuration; `grid_points` random parameter points are drawn per
/// family from the seeded generator unless an explicit grid is given.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: SuiteKind,
    /// Keep only families whose registry name is listed (None = all).
    pub families: Option<Vec<String>>,
    pub max_n: usize,
    pub max_m: usize,
    pub grid_points: usize,
    /// Explicit parameter grid: registry strings for the theorem suites.
    pub explicit_grid: Option<Vec<String>>,
    pub seed: u64,
    pub jobs: Option<usize>,
    /// Also inject corrupted fixtures that must fail.
    pub negative_controls: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: SuiteKind::All,
            families: None,
            max_n: 3,
            max_m: 3,
            grid_points: 3,
            explicit_grid: None,
            seed: 1,
            jobs: None,
            negative_controls: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseStatus {
    Pass,
    Fail,
    SkippedGuard,
    SkippedForbidden,
    Error,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub case: CaseSpec,
    pub status: CaseStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub suite: SuiteKind,
    pub seed: u64,
    pub pass: usize,
    pub fail: usize,
    pub skipped_guard: usize,
    pub skipped_forbidden: usize,
    pub errors: usize,
    pub wall_ms: u128,
    pub outcomes: Vec<CaseOutcome>,
}

impl RunReport {
    pub fn total(&self) -> usize {
        self.outcomes.len()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serialization")
    }

    /// One line per case for the CSV convenience dump.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("identity,status,detail\n");
        for o in &self.outcomes {
            let identity = o
                .report
                .as_ref()
                .and_then(|r| r.get("identity"))
                .and_then(Value::as_str)
                .map(str::to_string)
                .unwrap_or_else(|| format!("{:?}", o.case));
            let detail = o.error.clone().unwrap_or_default();
            out.push_str(&format!("{identity},{:?},{detail}\n", o.status));
        }
        out
    }
}

/// Seeded random rationals with numerators and denominators bounded by 50,
/// rejection-sampled away from a caller-supplied forbidden predicate.
pub struct RationalSampler {
    rng: StdRng,
}

impl RationalSampler {
    pub fn new(seed: u64) -> Self {
        RationalSampler { rng: StdRng::seed_from_u64(seed) }
    }

    pub fn draw(&mut self) -> Rational {
        loop {
            let num = self.rng.random_range(-50i64..=50);
            let den = self.rng.random_range(1i64..=50);
            let r = q(num, den);
            if !r.is_zero() {
                return r;
            }
        }
    }

    pub fn draw_where(&mut self, ok: impl Fn(&Rational) -> bool) -> Rational {
        loop {
            let r = self.draw();
            if ok(&r) {
                return r;
            }
        }
    }
}

fn family_filter(cfg: &SuiteConfig, name: &str) -> bool {
    match &cfg.families {
        None => true,
        Some(list) => list.iter().any(|f| f == name),
    }
}

/// Deterministic case list for a suite configuration.
pub fn generate_cases(cfg: &SuiteConfig) -> Vec<CaseSpec> {
    let mut cases = vec![];
    let mut sampler = RationalSampler::new(cfg.seed);
    let nonint = |r: &Rational| !r.is_integer();
    let points = cfg.grid_points.max(1);

    if matches!(cfg.suite, SuiteKind::MainTheorem | SuiteKind::All) {
        let mut fams: Vec<(String, OpKind)> = vec![];
        match &cfg.explicit_grid {
            Some(grid) => {
                for g in grid {
                    let name = g.split(':').next().unwrap_or_default();
                    let op = match name {
                        "jacobi" | "laguerre" => OpKind::Ddx,
                        "ultraspherical" => OpKind::Tmu,
                        _ => OpKind::Delta,
                    };
                    fams.push((g.clone(), op));
                }
            }
            None => {
                for _ in 0..points {
                    let a = sampler.draw();
                    let c = sampler.draw_where(|r| !crate::arith::is_nonpositive_int(r));
                    let al = sampler.draw();
                    let be = sampler.draw();
                    let nn = sampler.draw_where(nonint);
                    let lam = sampler.draw_where(|r| r.is_positive());
                    fams.push((format!("jacobi:alpha={al},beta={be}"), OpKind::Ddx));
                    fams.push((format!("laguerre:alpha={al}"), OpKind::Ddx));
                    fams.push((format!("charlier:a={a}"), OpKind::Delta));
                    fams.push((format!("meixner:a={a},c={c}"), OpKind::Delta));
                    fams.push((format!("krawtchouk:a={a},N={nn}"), OpKind::Delta));
                    fams.push((format!("hahn:alpha={al},c={c},N={nn}"), OpKind::Delta));
                    fams.push((format!("ultraspherical:lambda={lam}"), OpKind::Tmu));
                    fams.push((format!("meixner:a={a},c={c}"), OpKind::Tmu));
                }
            }
        }
        for (fam, op) in fams {
            let name = fam.split(':').next().unwrap_or_default().to_string();
            if !family_filter(cfg, &name) {
                continue;
            }
            for n in 1..=cfg.max_n {
                for m in 1..=cfg.max_m {
                    cases.push(CaseSpec::Main { family: fam.clone(), op, n, m, corrupt: Corruption::None });
                }
            }
            if cfg.negative_controls {
                cases.push(CaseSpec::Main {
                    family: fam.clone(),
                    op,
                    n: 2.min(cfg.max_n),
                    m: 2.min(cfg.max_m),
                    corrupt: Corruption::FlipConstantSign,
                });
            }
        }
    }

    if matches!(cfg.suite, SuiteKind::QuadraticTheorem | SuiteKind::All) {
        let mut fams: Vec<String> = vec![];
        match &cfg.explicit_grid {
            Some(grid) if cfg.suite == SuiteKind::QuadraticTheorem => {
                fams.extend(grid.iter().cloned());
            }
            _ => {
                for _ in 0..points {
                    let al = sampler.draw_where(nonint);
                    let c = sampler.draw_where(nonint);
                    let nn = sampler.draw_where(nonint);
                    let be = sampler.draw_where(nonint);
                    let ga = sampler.draw_where(nonint);
                    let de = sampler.draw_where(nonint);
                    fams.push(format!("dualhahn:alpha={al},c={c},N={nn}"));
                    fams.push(format!("racah:alpha={al},beta={be},gamma={ga},delta={de}"));
                    fams.push(format!("wilson:a={al},b={be},c={ga},d={de}"));
                }
            }
        }
        for fam in fams {
            let name = fam.split(':').next().unwrap_or_default().to_string();
            if !family_filter(cfg, &name) {
                continue;
            }
            for n in 1..=cfg.max_n.min(3) {
                for m in 1..=cfg.max_m.min(3) {
                    cases.push(CaseSpec::Quadratic { family: fam.clone(), n, m });
                }
            }
        }
    }

    if matches!(cfg.suite, SuiteKind::Symmetries | SuiteKind::All) {
        for _ in 0..points {
            let a = sampler.draw();
            let c = sampler.draw_where(nonint);
            let al = sampler.draw_where(nonint);
            let nn = sampler.draw_where(nonint);
            let be = sampler.draw_where(nonint);
            let ga = sampler.draw_where(nonint);
            let de = sampler.draw_where(nonint);
            let point: Vec<(Corollary, BTreeMap<String, String>)> = vec![
                (Corollary::Charlier, BTreeMap::from([("a".into(), a.to_string())])),
                (
                    Corollary::Meixner,
                    BTreeMap::from([("a".into(), a.to_string()), ("c".into(), c.to_string())]),
                ),
                (
                    Corollary::Krawtchouk,
                    BTreeMap::from([("a".into(), a.to_string()), ("N".into(), nn.to_string())]),
                ),
                (
                    Corollary::Hahn,
                    BTreeMap::from([
                        ("alpha".into(), al.to_string()),
                        ("c".into(), c.to_string()),
                        ("N".into(), nn.to_string()),
                    ]),
                ),
                (
                    Corollary::DualHahn,
                    BTreeMap::from([
                        ("alpha".into(), al.to_string()),
                        ("c".into(), c.to_string()),
                        ("N".into(), nn.to_string()),
                    ]),
                ),
                (
                    Corollary::Racah,
                    BTreeMap::from([
                        ("alpha".into(), al.to_string()),
                        ("beta".into(), be.to_string()),
                        ("gamma".into(), ga.to_string()),
                        ("delta".into(), de.to_string()),
                    ]),
                ),
                (
                    Corollary::Wilson,
                    BTreeMap::from([
                        ("a".into(), al.to_string()),
                        ("b".into(), be.to_string()),
                        ("c".into(), ga.to_string()),
                        ("d".into(), de.to_string()),
                    ]),
                ),
            ];
            for (corollary, params) in point {
                if !family_filter(cfg, corollary.name()) {
                    continue;
                }
                let cap = match corollary {
                    Corollary::Racah | Corollary::Wilson => 3,
                    _ => 4,
                };
                for n in 0..=cfg.max_n.min(cap) {
                    for m in 1..=cfg.max_m.min(cap) {
                        cases.push(CaseSpec::Symmetry {
                            corollary,
                            params: params.clone(),
                            n,
                            m,
                        });
                    }
                }
            }
        }
    }

    if matches!(cfg.suite, SuiteKind::Selberg | SuiteKind::All) {
        let fams = [
            "krawtchouk:a=1,N=5".to_string(),
            "krawtchouk:a=2/3,N=4".to_string(),
            "hahn:alpha=11,c=3/2,N=4".to_string(),
            "dualhahn:alpha=21/2,c=5/4,N=4".to_string(),
        ];
        for fam in &fams {
            let name = fam.split(':').next().unwrap_or_default().to_string();
            if !family_filter(cfg, &name) {
                continue;
            }
            for op in [OpKind::Ddx, OpKind::Delta] {
                for n in 0..=cfg.max_n.min(3) {
                    for m in 1..=cfg.max_m.min(3) {
                        for u in ["0", "1", "-1"] {
                            cases.push(CaseSpec::SelbergSum {
                                family: fam.clone(),
                                op,
                                n,
                                m,
                                u: u.into(),
                            });
                        }
                    }
                }
                cases.push(CaseSpec::SelbergCorollary {
                    family: fam.clone(),
                    op,
                    n: 2.min(cfg.max_n),
                    m: 2.min(cfg.max_m),
                    u: "0".into(),
                });
            }
            for m in 1..=cfg.max_m.min(4) {
                cases.push(CaseSpec::Heine { family: fam.clone(), m });
            }
        }
        for (nn, beta, gamma, delta) in [
            (2usize, "7", "1", "1"),
            (3, "9", "2", "1"),
            (3, "17/2", "1/3", "2/5"),
        ] {
            for n in 0..=1usize {
                for m in 1..=cfg.max_m.min(2) {
                    cases.push(CaseSpec::RacahSum {
                        nn,
                        beta: beta.into(),
                        gamma: gamma.into(),
                        delta: delta.into(),
                        n,
                        m,
                    });
                }
            }
        }
        for alpha in ["1", "2", "3", "5/2"] {
            for beta in ["1", "2", "3", "5/2"] {
                for m in 1..=cfg.max_m.min(4) {
                    cases.push(CaseSpec::JacobiGamma1 {
                        alpha: alpha.into(),
                        beta: beta.into(),
                        m,
                    });
                }
            }
        }
    }

    if matches!(cfg.suite, SuiteKind::Constterm | SuiteKind::All) {
        for n in 1..=4usize {
            cases.push(CaseSpec::Dyson { n });
        }
        for n in 1..=cfg.max_n.min(3) {
            for x in 0..=4usize {
                for m in 0..=x.min(cfg.max_m) {
                    for a in ["1", "2", "1/2"] {
                        cases.push(CaseSpec::Morris { n, m, x, a: a.into() });
                    }
                }
            }
        }
        for _ in 0..points {
            let a = sampler.draw_where(|r| !r.is_one());
            let c = sampler.draw();
            let lam = sampler.draw_where(|r| !crate::arith::is_nonpositive_int(&(r * q(2, 1))));
            for n in 1..=cfg.max_n.min(3) {
                for m in 1..=cfg.max_m.min(3) {
                    // enough x points to pin the polynomial identity in x
                    let bound = n * m + m * (m - 1) / 2 + 1;
                    for t in 0..=bound {
                        let x = q(t as i64 * 2 - bound as i64, 2);
                        cases.push(CaseSpec::CtMeixner {
                            n,
                            m,
                            x: x.to_string(),
                            a: a.to_string(),
                            c: c.to_string(),
                        });
                        cases.push(CaseSpec::CtCharlier {
                            n,
                            m,
                            x: x.to_string(),
                            a: a.to_string(),
                        });
                        cases.push(CaseSpec::CtUltraI {
                            n,
                            m,
                            x: x.to_string(),
                            lambda: lam.to_string(),
                        });
                        cases.push(CaseSpec::CtUltraII {
                            n,
                            m,
                            x: x.to_string(),
                            lambda: lam.to_string(),
                        });
                    }
                }
            }
        }
    }

    cases
}

fn classify(case: &CaseSpec, result: std::result::Result<Result<IdentityReport>, String>) -> CaseOutcome {
    match result {
        Err(panic_msg) => CaseOutcome {
            case: case.clone(),
            status: CaseStatus::Error,
            report: None,
            error: Some(panic_msg),
        },
        Ok(Err(e)) => {
            let status = match e.kind {
                ParamErrorKind::IndexOutOfRange => CaseStatus::SkippedGuard,
                _ => CaseStatus::SkippedForbidden,
            };
            CaseOutcome { case: case.clone(), status, report: None, error: Some(e.to_string()) }
        }
        Ok(Ok(rep)) => {
            let expected_fail = matches!(
                case,
                CaseSpec::Main { corrupt, .. } if *corrupt != Corruption::None
            );
            let ok = if expected_fail { !rep.holds } else { rep.holds };
            CaseOutcome {
                case: case.clone(),
                status: if ok { CaseStatus::Pass } else { CaseStatus::Fail },
                report: Some(rep.to_json()),
                error: None,
            }
        }
    }
}

fn run_isolated(case: &CaseSpec) -> CaseOutcome {
    let outcome = catch_unwind(AssertUnwindSafe(|| run_case(case)));
    let mapped = outcome.map_err(|p| {
        p.downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into())
    });
    classify(case, mapped)
}

/// Run a whole suite; deterministic for a fixed seed (modulo wall_ms).
pub fn run_suite(cfg: &SuiteConfig) -> RunReport {
    let start = std::time::Instant::now();
    let cases = generate_cases(cfg);
    let jobs = cfg
        .jobs
        .or_else(|| std::env::var("OPDET_JOBS").ok().and_then(|v| v.parse().ok()));
    let outcomes: Vec<CaseOutcome> = match jobs {
        Some(j) if j > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .expect("thread pool");
            pool.install(|| cases.par_iter().map(run_isolated).collect())
        }
        _ => cases.par_iter().map(run_isolated).collect(),
    };
    let count = |s: CaseStatus| outcomes.iter().filter(|o| o.status == s).count();
    RunReport {
        suite: cfg.suite,
        seed: cfg.seed,
        pass: count(CaseStatus::Pass),
        fail: count(CaseStatus::Fail),
        skipped_guard: count(CaseStatus::SkippedGuard),
        skipped_forbidden: count(CaseStatus::SkippedForbidden),
        errors: count(CaseStatus::Error),
        wall_ms: start.elapsed().as_millis(),
        outcomes,
    }
}

/// Re-verify exactly one case from its JSON form.
pub fn replay(case_json: &Value) -> Result<CaseOutcome> {
    let case: CaseSpec = serde_json::from_value(case_json.clone())
        .map_err(|e| ParamError::forbidden(format!("case JSON does not parse: {e}")))?;
    Ok(run_isolated(&case))
}

/// The suite summary as JSON, with case reports inline.
pub fn report_json(report: &RunReport) -> Value {
    json!(report)
}
