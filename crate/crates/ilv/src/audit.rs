//! Axiom audits over the shipped instances.

use interleaving::interleave::{interval_distance_closed_form, ActionKind};
use interleaving::metricgh::{altered_gh, enumerate_spaces, gh, modified_gh};
use interleaving::pmod::IntervalModule;
use interleaving::twocat::{audit_lawvere_2_weight, default_instances, two_cat_interleaving, validate_2category, WeightedGroupAction};
use interleaving::weight::{audit_monoidal_weight, audit_pseudometric, Sampling};
use interleaving::{AuditReport, DEFAULT_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{CliError, Output, EXIT_FAILURE};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Pseudometric,
    Weights,
    TwoCat,
    All,
}

impl Suite {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        match text {
            "pseudometric" => Ok(Suite::Pseudometric),
            "weights" => Ok(Suite::Weights),
            "twocat" => Ok(Suite::TwoCat),
            "all" => Ok(Suite::All),
            other => Err(CliError::Parse(format!("unknown suite {other:?}"))),
        }
    }
}

/// `(instance, report)` pairs.
type Findings = Vec<(String, AuditReport)>;

pub fn random_intervals(count: usize, seed: u64) -> Vec<IntervalModule> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a = rng.gen_range(0.1..10.0);
            IntervalModule::new(a, a + rng.gen_range(0.0..10.0)).expect("ordered endpoints")
        })
        .collect()
}

fn pseudometric(tol: f64) -> Findings {
    let mut out = Findings::new();
    let intervals = random_intervals(30, 1);
    for (name, kind) in [("intervals flow", ActionKind::Flow), ("intervals mult", ActionKind::Multiplicative)] {
        let d = |i: &IntervalModule, j: &IntervalModule| interval_distance_closed_form(i, j, kind).expect("positive supports");
        out.push((name.to_string(), audit_pseudometric(d, &intervals, tol, Sampling::default())));
    }
    let spaces = enumerate_spaces(3, &[1.0, 2.0, 3.0]);
    type Gh = fn(&interleaving::metricgh::FiniteMetricSpace, &interleaving::metricgh::FiniteMetricSpace) -> Result<f64, interleaving::metricgh::MetricError>;
    for (name, f) in [("gh", gh as Gh), ("altered gh", altered_gh as Gh), ("modified gh", modified_gh as Gh)] {
        let d = |x: &_, y: &_| interleaving::Weight::of(f(x, y).expect("small spaces"));
        out.push((name.to_string(), audit_pseudometric(d, &spaces, tol, Sampling::default())));
    }
    for (name, c, w) in default_instances() {
        let objects: Vec<usize> = (0..c.objects.len()).collect();
        let d = |a: &usize, b: &usize| two_cat_interleaving(&c, &w, *a, *b).value;
        out.push((name, audit_pseudometric(d, &objects, tol, Sampling::default())));
    }
    out
}

fn weights(tol: f64) -> Findings {
    let mut out = Findings::new();
    for n in [4, 6, 12] {
        let g = WeightedGroupAction::cyclic(n, &[(1, 1.0), (2, 1.5)]).expect("cyclic group");
        let elements: Vec<usize> = (0..n).collect();
        let report = audit_monoidal_weight(|x: &usize| g.weight[*x], &g.identity, &elements, |a, b| g.mul[*a][*b], tol);
        out.push((format!("word metric Z/{n}"), report));
    }
    for (name, c, w) in default_instances() {
        let report = audit_lawvere_2_weight(&w, &c, tol).unwrap_or_else(|e| {
            let mut r = AuditReport::new();
            r.push("MALFORMED", e.to_string(), "", "");
            r
        });
        out.push((name, report));
    }
    out
}

fn two_cat() -> Findings {
    default_instances().into_iter().map(|(name, c, _)| (name, validate_2category(&c))).collect()
}

pub fn run(suite: Suite, instances: &str) -> Result<Output, CliError> {
    if instances != "default" {
        return Err(CliError::Parse(format!("unknown instance set {instances:?}")));
    }
    let tol = DEFAULT_TOL;
    let mut findings = Findings::new();
    let mut tagged = |label: &str, f: Findings| findings.extend(f.into_iter().map(|(n, r)| (format!("{label}\t{n}"), r)));
    if matches!(suite, Suite::Pseudometric | Suite::All) {
        tagged("pseudometric", pseudometric(tol));
    }
    if matches!(suite, Suite::Weights | Suite::All) {
        tagged("weights", weights(tol));
    }
    if matches!(suite, Suite::TwoCat | Suite::All) {
        tagged("twocat", two_cat());
    }
    let mut stdout = String::new();
    let mut violations = 0;
    for (name, report) in &findings {
        violations += report.len();
        for line in report.to_string().lines() {
            stdout.push_str(&format!("{name}\t{line}\n"));
        }
    }
    Ok(Output {
        stdout,
        stderr: format!("{} instances audited, {violations} violations\n", findings.len()),
        code: if violations == 0 { 0 } else { EXIT_FAILURE },
    })
}
