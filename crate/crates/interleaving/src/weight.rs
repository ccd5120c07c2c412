//! Extended nonnegative weights and the axiom audits built on them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Default absolute tolerance for floating-point audits.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum WeightError {
    #[error("weight must be nonnegative, got {0}")]
    Negative(f64),
    #[error("weight must not be NaN")]
    NaN,
}

/// A value in `[0, +inf]`. Addition saturates at `+inf`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Weight(f64);

impl Weight {
    pub const ZERO: Weight = Weight(0.0);
    pub const INFINITY: Weight = Weight(f64::INFINITY);

    pub fn new(value: f64) -> Result<Self, WeightError> {
        if value.is_nan() {
            Err(WeightError::NaN)
        } else if value < 0.0 {
            Err(WeightError::Negative(value))
        } else {
            Ok(Weight(value))
        }
    }

    /// Panics on NaN or negative input; for values known to be valid.
    pub fn of(value: f64) -> Self {
        Self::new(value).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn max(self, other: Weight) -> Weight {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Weight) -> Weight {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn scale(self, factor: f64) -> Weight {
        if self.is_infinite() {
            self
        } else {
            Weight::of(self.0 * factor)
        }
    }

    /// `self <= other + tol`, treating `+inf` on the right as absorbing.
    pub fn le_tol(self, other: Weight, tol: f64) -> bool {
        other.is_infinite() || (self.is_finite() && self.0 <= other.0 + tol)
    }

    pub fn close_to(self, other: Weight, tol: f64) -> bool {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => true,
            (false, false) => (self.0 - other.0).abs() <= tol,
            _ => false,
        }
    }
}

impl Eq for Weight {}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0 + rhs.0)
    }
}

impl std::iter::Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

/// One failed axiom instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: String,
    pub lhs: String,
    pub rhs: String,
}

/// The list of violated axiom instances found by an audit.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AuditReport {
    pub violations: Vec<Violation>,
}

impl AuditReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(
        &mut self,
        axiom: &str,
        witness: impl Into<String>,
        lhs: impl fmt::Display,
        rhs: impl fmt::Display,
    ) {
        self.violations.push(Violation {
            axiom: axiom.to_string(),
            witness: witness.into(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn extend(&mut self, other: AuditReport) {
        self.violations.extend(other.violations);
    }

    pub fn count(&self, axiom: &str) -> usize {
        self.violations.iter().filter(|v| v.axiom == axiom).count()
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{}\t{}\t{}\t{}", v.axiom, v.witness, v.lhs, v.rhs)?;
        }
        Ok(())
    }
}

/// How triples are drawn in [`audit_pseudometric`].
#[derive(Clone, Copy, Debug)]
pub struct Sampling {
    pub exhaustive_limit: usize,
    pub triples: usize,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            exhaustive_limit: 30,
            triples: 10_000,
            seed: 0x5eed,
        }
    }
}

/// Checks `W(e) = 0` and `W(g*f) <= W(g) + W(f)` over all ordered pairs of `elements`.
pub fn audit_monoidal_weight<T, W, M>(
    weight: W,
    identity: &T,
    elements: &[T],
    mul: M,
    tol: f64,
) -> AuditReport
where
    T: fmt::Debug,
    W: Fn(&T) -> Weight,
    M: Fn(&T, &T) -> T,
{
    let mut report = AuditReport::new();
    let we = weight(identity);
    if !we.le_tol(Weight::ZERO, tol) {
        report.push("ZERO_ON_IDENTITY", format!("{identity:?}"), we, 0);
    }
    for g in elements {
        for f in elements {
            let gf = mul(g, f);
            let lhs = weight(&gf);
            let rhs = weight(g) + weight(f);
            if !lhs.le_tol(rhs, tol) {
                report.push("SUBADDITIVE", format!("{g:?}*{f:?}"), lhs, rhs);
            }
        }
    }
    report
}

/// Checks `d(x,x) = 0`, symmetry and the triangle inequality.
pub fn audit_pseudometric<P, D>(d: D, points: &[P], tol: f64, sampling: Sampling) -> AuditReport
where
    P: fmt::Debug,
    D: Fn(&P, &P) -> Weight,
{
    let n = points.len();
    let mut report = AuditReport::new();
    if n == 0 {
        return report;
    }
    // Cache the distance table once; oracles can be expensive.
    let mut table = vec![vec![Weight::ZERO; n]; n];
    let exhaustive = n <= sampling.exhaustive_limit;
    if exhaustive {
        for (i, row) in table.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = d(&points[i], &points[j]);
            }
        }
    }
    let lookup = |i: usize, j: usize| -> Weight {
        if exhaustive {
            table[i][j]
        } else {
            d(&points[i], &points[j])
        }
    };
    let check_pair = |report: &mut AuditReport, i: usize, j: usize| {
        let dij = lookup(i, j);
        let dji = lookup(j, i);
        if !dij.close_to(dji, tol) {
            report.push(
                "SYMMETRY",
                format!("{:?}|{:?}", points[i], points[j]),
                dij,
                dji,
            );
        }
    };
    let check_triple = |report: &mut AuditReport, i: usize, j: usize, k: usize| {
        let lhs = lookup(i, k);
        let rhs = lookup(i, j) + lookup(j, k);
        if !lhs.le_tol(rhs, tol) {
            report.push(
                "TRIANGLE",
                format!("{:?}|{:?}|{:?}", points[i], points[j], points[k]),
                lhs,
                rhs,
            );
        }
    };
    for (i, p) in points.iter().enumerate() {
        let dii = lookup(i, i);
        if !dii.le_tol(Weight::ZERO, tol) {
            report.push("IDENTITY", format!("{p:?}"), dii, 0);
        }
    }
    if exhaustive {
        for i in 0..n {
            for j in (i + 1)..n {
                check_pair(&mut report, i, j);
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    check_triple(&mut report, i, j, k);
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
        for _ in 0..sampling.triples {
            let (i, j, k) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            check_pair(&mut report, i, j);
            check_triple(&mut report, i, j, k);
        }
    }
    report
}
