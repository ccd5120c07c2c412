//! The table of worked-example values, recomputed.

use interleaving::interleave::{distance_bisect, interval_distance_closed_form, rectangle_distance, ActionKind, Family, RectMode};
use interleaving::matching::bottleneck;
use interleaving::metricgh::{altered_gh, enumerate_spaces, gh};
use interleaving::pmod::{Barcode, IntervalModule, RectangleModule};

use crate::{Output, EXIT_FAILURE};

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub id: String,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: f64,
}

impl Row {
    pub fn abs_error(&self) -> f64 {
        if self.expected == self.computed {
            0.0
        } else {
            (self.expected - self.computed).abs()
        }
    }

    pub fn passes(&self) -> bool {
        self.abs_error() <= self.tolerance
    }
}

fn row(id: impl Into<String>, expected: f64, computed: f64, tolerance: f64) -> Row {
    Row {
        id: id.into(),
        expected,
        computed,
        tolerance,
    }
}

pub fn example_rectangles() -> [RectangleModule; 3] {
    let r = |a: [f64; 2], b: [f64; 2]| RectangleModule::new(a.to_vec(), b.to_vec()).expect("ordered corners");
    [r([0.0, 0.0], [2.0, 2.0]), r([1.0, 0.0], [3.0, 2.0]), r([1.0, 1.0], [3.0, 3.0])]
}

pub fn rows() -> Vec<Row> {
    let mut out = Vec::new();
    let interval = |a: f64, b: f64| IntervalModule::new(a, b).expect("ordered endpoints");
    let empty = IntervalModule::empty();
    let flow = interval_distance_closed_form(&interval(0.0, 2.0), &empty, ActionKind::Flow).unwrap();
    out.push(row("flow-interval a=0 b=2", 1.0, flow.value(), 1e-6));
    let e2 = 2f64.exp();
    let mult = distance_bisect(&interval(1.0, e2).to_rectangle(), &RectangleModule::empty(1), &Family::Multiplicative, 1e-9).unwrap();
    out.push(row("mult-interval a=1 b=e^2", 1.0, mult.value.value(), 1e-6));
    for a in [1.0, 10.0, 100.0, 1000.0] {
        let d = bottleneck(&Barcode::new(&[(a, a + 1.0)]).unwrap(), &Barcode::default());
        out.push(row(format!("bottleneck a={a} b=a+1"), 0.5, d.value(), 0.0));
    }
    let [m1, m2, m3] = example_rectangles();
    for (name, other) in [("M1-M2", &m2), ("M1-M3", &m3)] {
        let d = rectangle_distance(&m1, other, RectMode::Flow, 1e-6).unwrap();
        out.push(row(format!("rect {name} flow"), 1.0, d.value.value(), 1e-4));
    }
    for (name, other, expected) in [("M1-M2", &m2, 1.0), ("M1-M3", &m3, 2f64.sqrt())] {
        let d = rectangle_distance(&m1, other, RectMode::Shift { p: 2.0 }, 1e-5).unwrap();
        out.push(row(format!("rect {name} shift p=2"), expected, d.value.value(), 1e-3));
    }
    let spaces = enumerate_spaces(3, &[1.0, 2.0, 3.0]);
    let mut violations = 0;
    for x in &spaces {
        for y in &spaces {
            let (g, a) = (gh(x, y).unwrap(), altered_gh(x, y).unwrap());
            violations += usize::from(!(a <= g && g <= 2.0 * a));
        }
    }
    out.push(row("gh bilipschitz violations (<=3 points)", 0.0, violations as f64, 0.0));
    out
}

pub fn run() -> Output {
    let rows = rows();
    let mut stdout = String::from("id,expected,computed,abs_error,tolerance,status\n");
    for r in &rows {
        stdout.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.id,
            r.expected,
            r.computed,
            r.abs_error(),
            r.tolerance,
            if r.passes() { "ok" } else { "FAIL" }
        ));
    }
    let failures: Vec<&str> = rows.iter().filter(|r| !r.passes()).map(|r| r.id.as_str()).collect();
    let stderr = if failures.is_empty() {
        format!("{} rows reproduced\n", rows.len())
    } else {
        format!("{} of {} rows outside tolerance: {}\n", failures.len(), rows.len(), failures.join("; "))
    };
    Output {
        stdout,
        stderr,
        code: if failures.is_empty() { 0 } else { EXIT_FAILURE },
    }
}
