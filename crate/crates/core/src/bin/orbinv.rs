use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use orbinv::io::{load_input, Input};
use orbinv::orbit::{lipschitz_ratio_scan, OrbitOracle, PairKind};
use orbinv::rational::{
    construct_random_counterexample, eval_g, eval_rational_invariants, hermite_multiplier, HermiteData,
};
use orbinv::transforms::{lipschitz_constant, phi_f_lipschitz_constant, LipschitzModel, Transform};
use orbinv::{to_fourier, Complex64, Error, ExponentTable, GroupSpec, PhiMode, Signal, TransformKind, VERSION};

#[derive(Parser)]
#[command(name = "orbinv", version, about = "Orbit-separating invariants for finite Abelian group actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal invariant monomial exponents of a group.
    Exponents {
        #[command(flatten)]
        group: GroupArgs,
        /// Largest coordinate subset (1, 2 or 3).
        #[arg(long, default_value_t = 3)]
        max_tuple: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Hermite multiplier, V_n, c and the signature of Q.
    Hermite {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Evaluate a transform on a signal (.json) or image (.pgm, .csv).
    Invariants {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        transform: TransformArgs,
        #[command(flatten)]
        run: RunArgs,
        input: PathBuf,
    },
    /// Decide whether two inputs lie in the same orbit.
    Compare {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        transform: TransformArgs,
        #[command(flatten)]
        run: RunArgs,
        a: PathBuf,
        b: PathBuf,
    },
    /// Collision of the unsigned rational map on cyclic shifts of C^N.
    Counterexample {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Empirical Lipschitz ratio scan against the theoretical bound.
    Bench {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        transform: TransformArgs,
        /// Pair sampler: full_support, matched_support, random, near_orbit.
        #[arg(long, default_value = "full_support")]
        kind: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct GroupArgs {
    /// Comma-separated factor orders, e.g. "2,3".
    #[arg(long)]
    orders: Option<String>,
    /// Exponent matrix rows separated by ';', entries by ',', e.g. "1,0;0,1".
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<String>,
    /// Circular shifts of n×m images, e.g. "2x3".
    #[arg(long, conflicts_with_all = ["orders", "matrix"])]
    shift: Option<String>,
}

#[derive(Args)]
struct TransformArgs {
    /// f, theta, phif, phi, rational or g.
    #[arg(long, default_value = "phi")]
    transform: String,
    /// as_written or repaired.
    #[arg(long, default_value = "repaired")]
    mode: String,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Round printed transform values to this many significant digits.
    #[arg(long)]
    digits: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit status derived from the error kind.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionMismatch { .. } | Error::Domain(_) => 3,
            Error::Invariant(_) => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn config_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type CliResult<T> = Result<T, Failure>;

struct Declared {
    group: GroupSpec,
    shift: Option<(usize, usize)>,
}

fn parse_list(s: &str, what: &str) -> CliResult<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| config_error(format!("bad {what} entry {t:?}"))))
        .collect()
}

fn parse_group(args: &GroupArgs) -> CliResult<Declared> {
    if let Some(spec) = &args.shift {
        let (n, m) = spec
            .split_once(['x', 'X'])
            .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
            .ok_or_else(|| config_error(format!("--shift expects NxM, got {spec:?}")))?;
        return Ok(Declared {
            group: GroupSpec::shift(n, m)?,
            shift: Some((n, m)),
        });
    }
    let orders = args
        .orders
        .as_deref()
        .ok_or_else(|| config_error("declare a group with --shift NxM or --orders and --matrix"))?;
    let matrix = args
        .matrix
        .as_deref()
        .ok_or_else(|| config_error("--matrix is required with --orders"))?;
    let orders = parse_list(orders, "order")?
        .into_iter()
        .map(|p| u64::try_from(p).map_err(|_| config_error(format!("order {p} is negative"))))
        .collect::<CliResult<Vec<u64>>>()?;
    let rows = matrix
        .split(';')
        .map(|r| parse_list(r, "matrix"))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Declared {
        group: GroupSpec::new(orders, rows)?,
        shift: None,
    })
}

fn parse_transform(args: &TransformArgs) -> CliResult<(TransformKind, PhiMode)> {
    Ok((args.transform.parse()?, args.mode.parse()?))
}

/// Loads an input as a signal in group coordinates; images go through the
/// Fourier transform and need a shift declaration of matching size.
fn load_signal(path: &Path, declared: &Declared) -> CliResult<Signal> {
    let signal = match load_input(path)? {
        Input::Signal(s) => s,
        Input::Image(img) => match declared.shift {
            Some((n, m)) if (img.rows(), img.cols()) == (n, m) => to_fourier(&img),
            Some((n, m)) => {
                return Err(Failure::from(Error::dims(n * m, img.rows() * img.cols())).with_message(format!(
                    "image is {}x{} but the group acts on {n}x{m} images",
                    img.rows(),
                    img.cols()
                )))
            }
            None => return Err(config_error("image inputs need a --shift NxM group")),
        },
    };
    if signal.len() != declared.group.dim() {
        return Err(Error::dims(declared.group.dim(), signal.len()).into());
    }
    Ok(signal)
}

impl Failure {
    fn with_message(mut self, message: String) -> Self {
        self.message = message;
        self
    }
}

fn round_sig(v: f64, digits: usize) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{:.*e}", digits.saturating_sub(1), v).parse().unwrap_or(v)
}

fn round_values(values: &[Complex64], digits: Option<usize>) -> Vec<Complex64> {
    match digits {
        Some(d) => values.iter().map(|z| Complex64::new(round_sig(z.re, d), round_sig(z.im, d))).collect(),
        None => values.to_vec(),
    }
}

/// Evaluated transform: the JSON payload and a flat vector for comparisons.
struct Evaluation {
    payload: Value,
    values: Vec<Complex64>,
    sign: Option<i8>,
}

struct Evaluator {
    kind: TransformKind,
    transform: Option<Transform>,
    hermite: Option<HermiteData>,
}

impl Evaluator {
    fn new(group: &GroupSpec, kind: TransformKind, mode: PhiMode, seed: u64) -> CliResult<Self> {
        Ok(match kind {
            TransformKind::Rational | TransformKind::G => Evaluator {
                kind,
                transform: None,
                hermite: Some(hermite_multiplier(group)?),
            },
            _ => Evaluator {
                kind,
                transform: Some(Transform::new(kind, ExponentTable::build(group), seed, mode)?),
                hermite: None,
            },
        })
    }

    fn eval(&self, x: &Signal, digits: Option<usize>) -> CliResult<Evaluation> {
        match (self.kind, &self.transform, &self.hermite) {
            (TransformKind::Rational, _, Some(h)) => {
                let r = eval_rational_invariants(h, x)?;
                let values = round_values(&r.values, digits);
                Ok(Evaluation {
                    payload: json!({ "transform": "rational", "dim": values.len(), "domain_ok": r.domain_ok, "values": values }),
                    values,
                    sign: None,
                })
            }
            (TransformKind::G, _, Some(h)) => {
                let g = eval_g(h, x)?;
                let values = round_values(&g.values, digits);
                Ok(Evaluation {
                    payload: json!({ "transform": "g", "dim": values.len(), "sign": g.sign, "values": values }),
                    values,
                    sign: Some(g.sign),
                })
            }
            (_, Some(t), _) => {
                let mut v = t.eval(x)?;
                v.values = round_values(&v.values, digits);
                Ok(Evaluation {
                    payload: serde_json::to_value(&v).map_err(Error::from)?,
                    values: v.values,
                    sign: None,
                })
            }
            _ => unreachable!("evaluator built for its kind"),
        }
    }
}

fn envelope(command: &str, run: &RunArgs, mode: Option<PhiMode>, result: impl Serialize) -> CliResult<Value> {
    Ok(json!({
        "command": command,
        "version": VERSION,
        "seed": run.seed,
        "tolerance": run.tol,
        "mode": mode.map(PhiMode::as_str),
        "result": serde_json::to_value(result).map_err(Error::from)?,
    }))
}

fn emit(value: &Value, out: Option<&Path>) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text).map_err(Error::from)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Writes the report, then fails with exit code 4 when `ok` is false.
fn emit_checked(value: &Value, out: Option<&Path>, ok: bool, what: &str) -> CliResult<()> {
    emit(value, out)?;
    if ok {
        Ok(())
    } else {
        Err(Failure {
            code: 4,
            message: format!("{what} postcondition failed"),
        })
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Exponents { group, max_tuple, run } => {
            let declared = parse_group(&group)?;
            let table = ExponentTable::build_with(&declared.group, max_tuple)?;
            table.check_invariant(&declared.group)?;
            emit(&envelope("exponents", &run, None, &table)?, run.out.as_deref())
        }
        Command::Hermite { group, run } => {
            let declared = parse_group(&group)?;
            let data = hermite_multiplier(&declared.group)?;
            data.check_exact()?;
            data.check_column_invariance()?;
            emit(&envelope("hermite", &run, None, &data)?, run.out.as_deref())
        }
        Command::Invariants {
            group,
            transform,
            run,
            input,
        } => {
            let declared = parse_group(&group)?;
            let (kind, mode) = parse_transform(&transform)?;
            let x = load_signal(&input, &declared)?;
            let evaluator = Evaluator::new(&declared.group, kind, mode, run.seed)?;
            let e = evaluator.eval(&x, run.digits)?;
            emit(&envelope("invariants", &run, Some(mode), e.payload)?, run.out.as_deref())
        }
        Command::Compare {
            group,
            transform,
            run,
            a,
            b,
        } => {
            let declared = parse_group(&group)?;
            let (kind, mode) = parse_transform(&transform)?;
            let xa = load_signal(&a, &declared)?;
            let xb = load_signal(&b, &declared)?;
            let evaluator = Evaluator::new(&declared.group, kind, mode, run.seed)?;
            let (ea, eb) = (evaluator.eval(&xa, None)?, evaluator.eval(&xb, None)?);
            let transform_gap = if ea.values.len() == eb.values.len() {
                ea.values.iter().zip(&eb.values).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt()
            } else {
                f64::INFINITY
            };
            let transform_equal = ea.sign == eb.sign && orbinv::transforms::approx_eq(&ea.values, &eb.values, run.tol);
            let mut result = json!({
                "transform": kind.as_str(),
                "transform_gap": transform_gap,
                "transform_equal": transform_equal,
            });
            match OrbitOracle::new(&declared.group) {
                Ok(oracle) => {
                    // witness g satisfies B ≈ g·A
                    let d = oracle.distance(&xb, &xa)?;
                    result["equivalent"] = json!(d.distance < run.tol);
                    result["distance"] = json!(d.distance);
                    result["witness"] = json!(d.witness);
                    result["oracle"] = json!(true);
                }
                Err(Error::GroupTooLarge { .. }) => {
                    result["equivalent"] = json!(transform_equal);
                    result["oracle"] = json!(false);
                }
                Err(e) => return Err(e.into()),
            }
            emit(&envelope("compare", &run, Some(mode), result)?, run.out.as_deref())
        }
        Command::Counterexample { n, run } => {
            if n < 4 {
                return Err(config_error(format!(
                    "counterexample needs N ≥ 4: for N = {n} the scaling vector c is nonnegative (N = 3 gives c = (0, 1, 1)), so g separates"
                )));
            }
            let data = HermiteData::cyclic_fixture(n)?;
            let ce = construct_random_counterexample(&data, run.seed)?;
            let ok = ce.holds();
            let result = json!({
                "n": n,
                "c": data.c().iter().map(ToString::to_string).collect::<Vec<_>>(),
                "lambda_y": ce.lambda_y,
                "g_gap": ce.g_gap,
                "orbit_distance": ce.orbit_distance,
                "q_scaled": ce.q_scaled,
                "q_x": ce.q_x,
                "y": ce.y,
                "x": ce.x,
                "holds": ok,
            });
            emit_checked(&envelope("counterexample", &run, None, result)?, run.out.as_deref(), ok, "counterexample")
        }
        Command::Bench {
            group,
            transform,
            kind,
            samples,
            run,
        } => {
            let declared = parse_group(&group)?;
            let (tkind, mode) = parse_transform(&transform)?;
            let pair_kind: PairKind = kind.parse()?;
            let table = ExponentTable::build(&declared.group);
            let t = match tkind {
                TransformKind::Phi | TransformKind::PhiF => Transform::new(tkind, table.clone(), run.seed, mode)?,
                other => return Err(config_error(format!("bench supports phi and phif, not {other}"))),
            };
            let bound = match (t.reduction(), declared.shift) {
                (Some(ell), Some((n, m))) => lipschitz_constant(&table, ell, LipschitzModel::ImageShift { n: n as u64, m: m as u64 })?,
                (Some(ell), None) => lipschitz_constant(&table, ell, LipschitzModel::Exact)?,
                (None, _) => phi_f_lipschitz_constant(&table),
            };
            let mut report = lipschitz_ratio_scan(&declared.group, |x| Ok(t.eval(x)?.values), pair_kind, samples, run.seed)?;
            report.bound = Some(bound);
            let ok = report.max_ratio <= bound;
            let result = json!({
                "transform": tkind.as_str(),
                "kind": pair_kind.as_str(),
                "samples": samples,
                "evaluated": report.evaluated,
                "max_ratio": report.max_ratio,
                "bound": bound,
                "within_bound": ok,
            });
            emit_checked(&envelope("bench", &run, Some(mode), result)?, run.out.as_deref(), ok, "Lipschitz bound")
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("orbinv: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
