//! Command-line front end: every command builds the requested objects, runs
//! the associated checks and emits a JSON certificate.
//!
//! Exit codes: 0 when every verdict passes, 2 for usage or input errors,
//! 3 when a mathematical check fails or the descent does not converge.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Parser, Subcommand};
use orthocartan::cartan::{
    family_orthogonal_cartan, orthogonal_cartan, regular_element, standard_cartan, verify_cartan, verify_orthogonal,
    CartanSub,
};
use orthocartan::coxeter::{
    cartan_in_bracket_image, coxeter_fixed_point_check, coxeter_lift_su, regular_strengthening_report,
    strengthen_to_regular,
};
use orthocartan::descent::{
    descend_to_complement, kostant_projection_check, one_and_half_span, root_space_decomposition, span_report,
    witness_orthogonality, GotoSolver, Strategy,
};
use orthocartan::json::matrix_from_json;
use orthocartan::liealg::{Algebra, AlgebraDescriptor, AlgebraElement, Family};
use orthocartan::numkernel::Tolerances;
use orthocartan::Error;
use serde::Serialize;
use serde_json::{json, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Random draws per check inside `suite`.
pub const SUITE_DRAWS: u64 = 5;

#[derive(Debug, Parser)]
#[command(name = "orthocartan", version, about = "Certificates for orthogonal Cartan subalgebras and bracket factorizations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Standard and orthogonal Cartan subalgebras with their checks.
    Construct,
    /// Coxeter lift in su(m) and the bracket-image chain built on it.
    Coxeter,
    /// Rotate an element into the orthogonal complement of the standard Cartan.
    Descend,
    /// Write an element as [a, b] with a regular.
    Factorize,
    /// Sample the convexity theorem for su(n), n <= 5.
    Kostant,
    /// Every applicable check for each requested size.
    Suite,
}

#[derive(Debug, Clone, clap::Args, Serialize)]
pub struct Options {
    /// su, so or sp.
    #[arg(long, global = true)]
    pub family: Option<Family>,
    /// Size parameter; `suite` accepts a comma-separated list.
    #[arg(long, global = true, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "max-iter", global = true, default_value_t = 10000)]
    pub max_iter: usize,
    #[arg(long, global = true, default_value = "descent")]
    pub strategy: Strategy,
    /// Write the certificate here instead of standard output.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    /// JSON matrix: rows of `[re, im]` pairs or real numbers.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Use a seeded random element instead of `--input`.
    #[arg(long, global = true)]
    pub random: bool,
    #[arg(long, global = true, default_value_t = 200)]
    pub samples: usize,
    /// Worker threads for `suite`.
    #[arg(long, global = true, default_value_t = 1)]
    #[serde(skip)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub residual: f64,
}

impl Verdict {
    /// `residual < bound`.
    pub fn below(residual: f64, bound: f64) -> Self {
        Self {
            pass: residual.is_finite() && residual < bound,
            residual: if residual.is_finite() { residual } else { f64::MAX },
        }
    }

    pub fn flag(pass: bool, residual: f64) -> Self {
        Self {
            pass,
            residual: if residual.is_finite() { residual } else { f64::MAX },
        }
    }
}

pub type Verdicts = BTreeMap<String, Verdict>;

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub command: Command,
    pub config: Options,
    pub timestamp: String,
    pub verdicts: Verdicts,
    pub payload: Value,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        !self.verdicts.is_empty() && self.verdicts.values().all(|v| v.pass)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// Failure classes, mapped to exit codes 2 and 3.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Math { error: Error, payload: Value },
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Math { .. } => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        match error {
            Error::Parameter(m) | Error::Input(m) | Error::Dimension(m) => Failure::Usage(m),
            Error::ParentMismatch { .. } => Failure::Usage(error.to_string()),
            Error::NonConvergence { ref trace } => {
                let payload = json!({ "trace": trace.to_json() });
                Failure::Math { error, payload }
            }
            other => Failure::Math {
                error: other,
                payload: Value::Null,
            },
        }
    }
}

type Outcome = std::result::Result<(Verdicts, Value), Failure>;

pub struct Run {
    pub certificate: Certificate,
    pub exit_code: u8,
}

pub fn run(cli: &Cli) -> Run {
    let result = dispatch(cli);
    let (verdicts, payload, error, code) = match result {
        Ok((verdicts, payload)) => {
            let ok = !verdicts.is_empty() && verdicts.values().all(|v| v.pass);
            (verdicts, payload, None, if ok { 0 } else { 3 })
        }
        Err(f) => {
            let code = f.exit_code();
            let (msg, payload, name) = match f {
                Failure::Usage(m) => (m, Value::Null, "valid_input"),
                Failure::Math { error, payload } => {
                    let name = if matches!(error, Error::NonConvergence { .. }) { "converged" } else { "completed" };
                    (error.to_string(), payload, name)
                }
            };
            let mut v = Verdicts::new();
            v.insert(name.to_string(), Verdict::flag(false, 0.0));
            (v, payload, Some(msg), code)
        }
    };
    Run {
        certificate: Certificate {
            command: cli.command,
            config: cli.opts.clone(),
            timestamp: chrono::Utc::now().to_rfc3339(),
            verdicts,
            payload,
            version: VERSION.to_string(),
            error,
        },
        exit_code: code,
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let o = &cli.opts;
    if !(o.tol > 0.0 && o.tol.is_finite()) {
        return Err(Failure::Usage(format!("--tol must be positive, got {}", o.tol)));
    }
    if o.max_iter == 0 {
        return Err(Failure::Usage("--max-iter must be positive".into()));
    }
    let family = o.family.ok_or_else(|| Failure::Usage("--family is required".into()))?;
    if o.n.is_empty() {
        return Err(Failure::Usage("--n is required".into()));
    }
    if o.strategy == Strategy::Coxeter && family != Family::Su {
        return Err(Failure::Usage("the coxeter strategy requires --family su".into()));
    }
    if cli.command == Command::Suite {
        return suite(o, family);
    }
    if o.n.len() != 1 {
        return Err(Failure::Usage("only `suite` accepts several sizes".into()));
    }
    let alg = algebra(o, family, o.n[0])?;
    match cli.command {
        // construction failures are reported as bad configurations
        Command::Construct => construct(&alg).map_err(|f| match f {
            Failure::Math { error, .. } => Failure::Usage(error.to_string()),
            usage => usage,
        }),
        Command::Coxeter => coxeter(&alg, o.seed),
        Command::Descend => descend(&alg, &element_arg(&alg, o)?),
        Command::Factorize => factorize(&alg, &element_arg(&alg, o)?, o.strategy, o.seed),
        Command::Kostant => kostant(&alg, o),
        Command::Suite => unreachable!("handled above"),
    }
}

pub fn tolerances(o: &Options) -> Tolerances {
    Tolerances::default().with_residual(o.tol).with_max_iter(o.max_iter)
}

fn algebra(o: &Options, family: Family, n: usize) -> std::result::Result<Algebra, Failure> {
    let desc = AlgebraDescriptor::new(family, n)?;
    Ok(Algebra::with_tolerances(desc, tolerances(o))?)
}

fn read_element(alg: &Algebra, path: &PathBuf) -> std::result::Result<AlgebraElement, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{} is not JSON: {e}", path.display())))?;
    let m = matrix_from_json(&value)?;
    let size = alg.matrix_size();
    if m.nrows() != size || m.ncols() != size {
        return Err(Failure::Usage(format!(
            "{} needs a {size}x{size} matrix, got {}x{}",
            alg.descriptor(),
            m.nrows(),
            m.ncols()
        )));
    }
    alg.element(m).map_err(|e| Failure::Usage(e.to_string()))
}

fn element_arg(alg: &Algebra, o: &Options) -> std::result::Result<AlgebraElement, Failure> {
    match (&o.input, o.random) {
        (Some(_), true) => Err(Failure::Usage("--input and --random are exclusive".into())),
        (Some(p), false) => read_element(alg, p),
        (None, true) => Ok(alg.random_element(o.seed)),
        (None, false) => Err(Failure::Usage("give --input <file> or --random".into())),
    }
}

fn cartan_json(alg: &Algebra, c: &CartanSub) -> Value {
    c.to_json(alg)
}

pub fn construct(alg: &Algebra) -> Outcome {
    let tol = alg.tolerances().tol_residual;
    let std_c = standard_cartan(alg)?;
    let partner = family_orthogonal_cartan(alg)?;
    let r1 = verify_cartan(alg, &std_c)?;
    let r2 = verify_cartan(alg, &partner)?;
    let orth = verify_orthogonal(alg, &std_c, &partner)?;
    let mut v = Verdicts::new();
    v.insert("standard.abelian".into(), Verdict::below(r1.abelian_residual, tol));
    v.insert("standard.self_centralizing".into(), Verdict::below(r1.self_centralizing_residual, tol));
    v.insert("standard.dim".into(), Verdict::flag(r1.correct_dim, 0.0));
    v.insert("orthogonal.abelian".into(), Verdict::below(r2.abelian_residual, tol));
    v.insert("orthogonal.self_centralizing".into(), Verdict::below(r2.self_centralizing_residual, tol));
    v.insert("orthogonal.dim".into(), Verdict::flag(r2.correct_dim, 0.0));
    v.insert("orthogonality".into(), Verdict::below(orth, tol));
    let payload = json!({
        "standard": cartan_json(alg, &std_c),
        "orthogonal": cartan_json(alg, &partner),
        "rank": alg.rank(),
    });
    Ok((v, payload))
}

pub fn coxeter(alg: &Algebra, seed: u64) -> Outcome {
    let lift = coxeter_lift_su(alg)?;
    let c = standard_cartan(alg)?;
    let res = lift.residuals()?;
    let exp_worst = res.residuals.values().fold(0.0_f64, |m, &x| m.max(x));
    let fixed = coxeter_fixed_point_check(alg, &lift, &c)?;
    let image = cartan_in_bracket_image(alg, &c, &lift.big_n)?;
    let a = strengthen_to_regular(alg, &lift.big_n, seed)?;
    let strong = regular_strengthening_report(alg, &lift.big_n, &a, &c)?;
    let strong_worst = strong.residuals.values().fold(0.0_f64, |m, &x| m.max(x));
    let mut v = Verdicts::new();
    v.insert("exp_matches".into(), Verdict::flag(res.passed(), exp_worst));
    v.insert("no_fixed_points".into(), Verdict::flag(fixed.passed(), fixed.residuals["abs_det"]));
    v.insert("cartan_in_image".into(), Verdict::flag(image.report.passed(), image.report.residuals["max_residual"]));
    v.insert("regular_strengthening".into(), Verdict::flag(strong.passed(), strong_worst));
    let payload = json!({
        "lift": lift.to_json()?,
        "fixed_point": fixed,
        "strengthening": strong,
    });
    Ok((v, payload))
}

pub fn descend(alg: &Algebra, x: &AlgebraElement) -> Outcome {
    let tol = alg.tolerances().tol_residual;
    let c = standard_cartan(alg)?;
    let roots = root_space_decomposition(alg, &c)?;
    let (g, fin, trace) = descend_to_complement(alg, &roots, x)?;
    let scale = alg.norm(x).max(1.0);
    let mut v = Verdicts::new();
    v.insert("converged".into(), Verdict::below(trace.final_cartan_norm(), tol * scale * (1.0 + 1e-12)));
    v.insert("strict_decrease".into(), Verdict::flag(trace.strictly_decreasing(), trace.max_decrement_residual()));
    v.insert("decrement_matches".into(), Verdict::below(trace.max_decrement_residual(), 1e-9));
    v.insert(
        "group_membership".into(),
        Verdict::below(alg.descriptor().group_membership_residual(&g), tol),
    );
    let payload = json!({
        "trace": trace.to_json(),
        "x_final": orthocartan::json::matrix_to_json(fin.matrix()),
    });
    Ok((v, payload))
}

pub fn factorize(alg: &Algebra, x: &AlgebraElement, strategy: Strategy, seed: u64) -> Outcome {
    let tol = alg.tolerances().tol_residual;
    let solver = GotoSolver::new(alg, strategy, seed)?;
    let w = solver.factorize(alg, x)?;
    let scale = alg.norm(x).max(1.0);
    let mut v = Verdicts::new();
    v.insert("reconstruction".into(), Verdict::below(w.residual / scale, 1e-7));
    v.insert("a_regular".into(), Verdict::flag(w.a_regular, 0.0));
    v.insert("orthogonal_to_cartan".into(), Verdict::below(witness_orthogonality(alg, x, &w)?, tol * scale));
    Ok((v, json!({ "witness": w.to_json() })))
}

fn seeded_cartan_element(alg: &Algebra, seed: u64) -> std::result::Result<AlgebraElement, Failure> {
    let c = standard_cartan(alg)?;
    Ok(orthocartan::cartan::generic_element(alg, &c, seed))
}

pub fn kostant(alg: &Algebra, o: &Options) -> Outcome {
    let x = match &o.input {
        Some(p) => read_element(alg, p)?,
        None => seeded_cartan_element(alg, o.seed)?,
    };
    kostant_for(alg, &x, o.samples, o.seed)
}

fn kostant_for(alg: &Algebra, x: &AlgebraElement, samples: usize, seed: u64) -> Outcome {
    let r = kostant_projection_check(alg, x, samples, seed)?;
    let mut v = Verdicts::new();
    v.insert("all_in_hull".into(), Verdict::flag(r.all_in_hull, r.max_distance));
    v.insert("zero_in_hull".into(), Verdict::flag(r.zero_in_hull, r.zero_distance));
    Ok((v, serde_json::to_value(&r).expect("report serializes")))
}

/// All checks for one `(family, n)`, verdict names prefixed by the algebra.
pub fn suite_one(o: &Options, family: Family, n: usize) -> Outcome {
    let alg = algebra(o, family, n)?;
    let tol = alg.tolerances().tol_residual;
    let mut all = Verdicts::new();
    let mut merge = |section: &str, (v, _): (Verdicts, Value)| {
        for (k, val) in v {
            all.insert(format!("{section}.{k}"), val);
        }
    };
    merge("construct", construct(&alg)?);

    let c = standard_cartan(&alg)?;
    let roots = root_space_decomposition(&alg, &c)?;
    let rel = roots.relations(&alg)?;
    let mut v = Verdicts::new();
    v.insert("relations".into(), Verdict::flag(rel.holds(tol), rel.max_residual()));
    merge("roots", (v, Value::Null));

    let mut worst = 0.0_f64;
    for k in 0..SUITE_DRAWS {
        let a = alg.random_element(o.seed.wrapping_add(k));
        let z = alg.centralizer(&a)?.orthogonal_complement();
        worst = worst.max(z.distance(&alg.ad_image(&a)?)?);
    }
    let mut v = Verdicts::new();
    v.insert("complement_of_centralizer_is_image".into(), Verdict::below(worst, tol));
    merge("bracket_image", (v, Value::Null));

    if family == Family::Su {
        merge("coxeter", coxeter(&alg, o.seed)?);
    }

    let mut descent = Verdicts::new();
    let mut goto = Verdicts::new();
    let strategies: &[Strategy] = if family == Family::Su {
        &[Strategy::Descent, Strategy::Coxeter]
    } else {
        &[Strategy::Descent]
    };
    let solvers = strategies
        .iter()
        .map(|&s| GotoSolver::new(&alg, s, o.seed))
        .collect::<orthocartan::Result<Vec<_>>>()?;
    for k in 0..SUITE_DRAWS {
        let x = alg.random_element(o.seed.wrapping_add(1000 + k));
        fold_worst(&mut descent, descend(&alg, &x)?.0);
        for solver in &solvers {
            let w = solver.factorize(&alg, &x)?;
            let scale = alg.norm(&x).max(1.0);
            let mut v = Verdicts::new();
            let s = solver.strategy;
            v.insert(format!("{s}.reconstruction"), Verdict::below(w.residual / scale, 1e-7));
            v.insert(format!("{s}.a_regular"), Verdict::flag(w.a_regular, 0.0));
            v.insert(
                format!("{s}.orthogonal_to_cartan"),
                Verdict::below(witness_orthogonality(&alg, &x, &w)?, tol * scale),
            );
            fold_worst(&mut goto, v);
        }
    }
    merge("descend", (descent, Value::Null));
    merge("factorize", (goto, Value::Null));

    let mut span = Verdicts::new();
    for k in 0..SUITE_DRAWS {
        let a = alg.random_regular(o.seed.wrapping_add(2000 + k))?;
        let b = one_and_half_span(&alg, &a, o.seed)?;
        let r = span_report(&alg, &a, &b)?;
        let mut v = Verdicts::new();
        for (name, pass) in &r.verdicts {
            let residual = r.residuals.get(name.as_str()).copied().unwrap_or(match name.as_str() {
                "orthogonal" => r.residuals["inner"],
                "centralizers_orthogonal" => r.residuals["centralizer_cross_inner"],
                "spans" => r.residuals["sum_dim_deficit"],
                _ => 0.0,
            });
            v.insert(name.clone(), Verdict::flag(*pass, residual));
        }
        fold_worst(&mut span, v);
    }
    merge("span", (span, Value::Null));

    // orthogonal partner of a conjugated Cartan, beyond the explicit families
    let r = alg.random_regular(o.seed.wrapping_add(3000))?;
    let custom = CartanSub::from_subspace(&alg, alg.centralizer(&r)?, orthocartan::cartan::Provenance::Custom);
    let partner = orthogonal_cartan(&alg, &custom)?;
    let mut v = Verdicts::new();
    v.insert("orthogonality".into(), Verdict::below(verify_orthogonal(&alg, &custom, &partner)?, tol));
    v.insert("partner_is_cartan".into(), Verdict::flag(verify_cartan(&alg, &partner)?.passed(), 0.0));
    merge("arbitrary_cartan", (v, Value::Null));

    if family == Family::Su && n <= 5 {
        let c = standard_cartan(&alg)?;
        let x = regular_element(&alg, &c, o.seed)?;
        merge("kostant", kostant_for(&alg, &x, o.samples, o.seed)?);
    }
    let count = all.len();
    Ok((all, json!({ "checks": count })))
}

/// Keeps, per name, the worst verdict seen so far.
fn fold_worst(acc: &mut Verdicts, new: Verdicts) {
    for (k, v) in new {
        acc.entry(k)
            .and_modify(|cur| {
                cur.pass &= v.pass;
                cur.residual = cur.residual.max(v.residual);
            })
            .or_insert(v);
    }
}

fn suite(o: &Options, family: Family) -> Outcome {
    let sizes = o.n.clone();
    for &n in &sizes {
        AlgebraDescriptor::new(family, n)?;
    }
    let results: Mutex<Vec<Option<Outcome>>> = Mutex::new((0..sizes.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let workers = o.jobs.clamp(1, sizes.len());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= sizes.len() {
                    break;
                }
                let out = suite_one(o, family, sizes[i]);
                results.lock().expect("no poisoned lock")[i] = Some(out);
            });
        }
    });
    let mut verdicts = Verdicts::new();
    let mut per_size = Vec::new();
    for (n, out) in sizes.iter().zip(results.into_inner().expect("no poisoned lock")) {
        let (v, payload) = out.expect("every size ran")?;
        let passed = v.values().all(|x| x.pass);
        for (k, val) in v {
            verdicts.insert(format!("{family}({n}).{k}"), val);
        }
        per_size.push(json!({ "n": n, "passed": passed, "checks": payload["checks"] }));
    }
    Ok((verdicts, json!({ "family": family, "sizes": per_size })))
}
