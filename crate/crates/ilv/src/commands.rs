use std::fs::File;
use std::path::Path;

use interleaving::interleave::{
    distance_bisect, interval_distance_closed_form, rectangle_distance, ActionKind, DistanceResult, Family, RectMode,
};
use interleaving::metricgh::{altered_gh_capped, gh_capped, modified_gh_capped, FiniteMetricSpace, MetricError};
use interleaving::pipeline::{stability_experiment, StabilityConfig};
use interleaving::twocat::{default_instances, emit_2category, parse_2category, two_cat_interleaving};

use crate::literal::ModuleLiteral;
use crate::{CliError, Output, EXIT_FAILURE, EXIT_INFINITE};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Closed form where one exists, bisection otherwise.
    Auto,
    Closed,
    Bisect,
}

#[derive(Clone, Debug)]
pub struct InterleaveArgs {
    pub family: String,
    pub p: f64,
    pub direction: Option<Vec<f64>>,
    pub a: String,
    pub b: String,
    pub tol: f64,
    pub method: Method,
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn json(result: &DistanceResult) -> String {
    serde_json::to_string(result).expect("distance results serialize") + "\n"
}

pub fn interleave(args: &InterleaveArgs) -> Result<Output, CliError> {
    let m = ModuleLiteral::parse(&args.a)?;
    let n = ModuleLiteral::parse(&args.b)?;
    if args.tol <= 0.0 {
        return Err(CliError::Parse("tolerance must be positive".into()));
    }
    let dim = m.dim().or(n.dim()).unwrap_or(1);
    let kind = match args.family.as_str() {
        "flow" => Some(ActionKind::Flow),
        "mult" => Some(ActionKind::Multiplicative),
        _ => None,
    };
    let closed = match (kind, m.as_interval(), n.as_interval(), args.method) {
        (Some(kind), Some(i), Some(j), Method::Auto | Method::Closed) => {
            let value = interval_distance_closed_form(&i, &j, kind).map_err(failed)?;
            Some(DistanceResult::exact(value, &args.family, None))
        }
        (_, _, _, Method::Closed) => {
            return Err(CliError::Parse("closed form needs interval inputs and the flow or mult family".into()))
        }
        _ => None,
    };
    let result = match closed {
        Some(r) => r,
        None => {
            let (r1, r2) = (m.to_rectangle(dim), n.to_rectangle(dim));
            match args.family.as_str() {
                "flow" => distance_bisect(&r1, &r2, &Family::Flow, args.tol),
                "mult" => distance_bisect(&r1, &r2, &Family::Multiplicative, args.tol),
                "direction" => {
                    let v = args
                        .direction
                        .clone()
                        .ok_or_else(|| CliError::Parse("--direction is required for the direction family".into()))?;
                    distance_bisect(&r1, &r2, &Family::Direction { v, p: args.p }, args.tol)
                }
                "shift" => rectangle_distance(&r1, &r2, RectMode::Shift { p: args.p }, args.tol),
                other => return Err(CliError::Parse(format!("unknown family {other:?}"))),
            }
            .map_err(failed)?
        }
    };
    let code = if result.value.is_infinite() && result.cap_hit { EXIT_INFINITE } else { 0 };
    Ok(Output {
        stdout: json(&result),
        code,
        ..Output::default()
    })
}

fn open(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|e| CliError::Io(path.display().to_string(), e))
}

fn load_space(path: &Path) -> Result<FiniteMetricSpace, CliError> {
    FiniteMetricSpace::read_csv(open(path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn gh(x: &Path, y: &Path, cap: u64) -> Result<Output, CliError> {
    let (x, y) = (load_space(x)?, load_space(y)?);
    let cap_err = |e: MetricError| match e {
        MetricError::SizeCap { .. } => CliError::Cap(e.to_string()),
        other => failed(other),
    };
    let g = gh_capped(&x, &y, cap).map_err(cap_err)?;
    let a = altered_gh_capped(&x, &y, cap).map_err(cap_err)?;
    let m = modified_gh_capped(&x, &y, cap).map_err(cap_err)?;
    Ok(Output::ok(format!("gh,altered,modified\n{g},{a},{m}\n")))
}

pub fn stability(config: &StabilityConfig, out: Option<&Path>) -> Result<Output, CliError> {
    if config.trials == 0 || config.grid < 2 || !(config.noise >= 0.0) {
        return Err(CliError::Parse("need trials > 0, grid >= 2 and noise >= 0".into()));
    }
    let report = stability_experiment(config);
    let mut csv = Vec::new();
    report.write_csv(&mut csv).map_err(failed)?;
    let trials = config.trials + usize::from(config.spike.is_some());
    let bad_trials = {
        let mut bad: Vec<usize> = report.rows.iter().filter(|r| r.lhs > r.rhs + 1e-9).map(|r| r.trial).collect();
        bad.dedup();
        bad.len()
    };
    let stderr = format!(
        "{}/{trials} bound satisfied; union-find mismatches {}; sup-norm mismatches {}; max ratio {:.6}\n",
        trials - bad_trials,
        report.oracle_mismatches,
        report.sup_mismatches,
        report.max_ratio
    );
    let stdout = match out {
        Some(path) => {
            std::fs::write(path, &csv).map_err(|e| CliError::Io(path.display().to_string(), e))?;
            String::new()
        }
        None => String::from_utf8(csv).expect("csv is utf-8"),
    };
    let clean = report.violations == 0 && report.oracle_mismatches == 0 && report.sup_mismatches == 0;
    Ok(Output {
        stdout,
        stderr,
        code: if clean { 0 } else { EXIT_FAILURE },
    })
}

pub fn twocat_list() -> Output {
    let names: String = default_instances().into_iter().map(|(name, ..)| name + "\n").collect();
    Output::ok(names)
}

pub fn twocat_emit(instance: &str) -> Result<Output, CliError> {
    let instances = default_instances();
    let found = instance
        .parse::<usize>()
        .ok()
        .and_then(|i| instances.get(i))
        .or_else(|| instances.iter().find(|(name, ..)| name == instance));
    match found {
        Some((_, c, w)) => Ok(Output::ok(emit_2category(c, w))),
        None => Err(CliError::Parse(format!("no instance {instance:?}; see `ilv twocat list`"))),
    }
}

pub fn twocat_distance(file: &Path, a: &str, b: &str) -> Result<Output, CliError> {
    let text = std::fs::read_to_string(file).map_err(|e| CliError::Io(file.display().to_string(), e))?;
    let (c, w) = parse_2category(&text).map_err(|e| CliError::Parse(e.to_string()))?;
    let object = |key: &str| {
        c.objects
            .iter()
            .position(|o| o == key)
            .or_else(|| key.parse::<usize>().ok().filter(|&i| i < c.objects.len()))
            .ok_or_else(|| CliError::Parse(format!("no object {key:?}")))
    };
    let result = two_cat_interleaving(&c, &w, object(a)?, object(b)?);
    Ok(Output::ok(json(&result)))
}
