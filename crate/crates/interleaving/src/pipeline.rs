//! Sublevel-set filtrations of simplicial complexes, persistent homology over
//! F2 in degrees 0 and 1, distances between filter functions and the
//! bottleneck stability experiment.

use std::collections::{HashMap, HashSet};
use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interleave::{bisect_feasibility, DistanceResult};
use crate::matching::bottleneck;
use crate::pmod::Barcode;
use crate::poset::{p_norm, FiniteAction};
use crate::weight::Weight;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("malformed complex: {0}")]
    MalformedComplex(String),
    #[error("cell {cell} enters before its face {face}")]
    NonSublevelClosed { cell: usize, face: usize },
    #[error("homology in degree {0} is not supported")]
    UnsupportedDegree(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("filter functions disagree on the vertex set: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("unsupported action: {0}")]
    UnsupportedAction(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// A simplicial complex on vertices `0..n_vertices`. Cells are sorted vertex
/// lists; every face of a cell is itself a cell.
#[derive(Clone, Debug)]
pub struct FiniteComplex {
    n_vertices: usize,
    cells: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl FiniteComplex {
    /// Checks that `cells` lists every vertex and is closed under faces.
    pub fn new(n_vertices: usize, cells: Vec<Vec<usize>>) -> Result<Self, PipelineError> {
        let mut index = HashMap::new();
        let mut sorted_cells = Vec::with_capacity(cells.len());
        for mut cell in cells {
            cell.sort_unstable();
            if cell.is_empty() || cell.len() > 3 {
                return Err(PipelineError::MalformedComplex(format!("cell {cell:?} must have 1 to 3 vertices")));
            }
            if cell.windows(2).any(|w| w[0] == w[1]) || cell.iter().any(|&v| v >= n_vertices) {
                return Err(PipelineError::MalformedComplex(format!("bad cell {cell:?}")));
            }
            if index.insert(cell.clone(), sorted_cells.len()).is_some() {
                return Err(PipelineError::MalformedComplex(format!("duplicate cell {cell:?}")));
            }
            sorted_cells.push(cell);
        }
        let complex = FiniteComplex {
            n_vertices,
            cells: sorted_cells,
            index,
        };
        for v in 0..n_vertices {
            if !complex.index.contains_key(&vec![v]) {
                return Err(PipelineError::MalformedComplex(format!("vertex {v} missing")));
            }
        }
        for cell in &complex.cells {
            for face in faces(cell) {
                if !complex.index.contains_key(&face) {
                    return Err(PipelineError::MalformedComplex(format!("face {face:?} of {cell:?} missing")));
                }
            }
        }
        Ok(complex)
    }

    /// The complex generated by `maximal` and all their faces, vertices first.
    pub fn closure(n_vertices: usize, maximal: &[Vec<usize>]) -> Result<Self, PipelineError> {
        let mut seen = HashSet::new();
        let mut cells: Vec<Vec<usize>> = (0..n_vertices).map(|v| vec![v]).collect();
        seen.extend(cells.iter().cloned());
        let mut stack: Vec<Vec<usize>> = Vec::new();
        for m in maximal {
            let mut m = m.clone();
            m.sort_unstable();
            stack.push(m);
        }
        let mut higher = Vec::new();
        while let Some(cell) = stack.pop() {
            if cell.iter().any(|&v| v >= n_vertices) {
                return Err(PipelineError::MalformedComplex(format!("cell {cell:?} names a missing vertex")));
            }
            if !seen.insert(cell.clone()) {
                continue;
            }
            stack.extend(faces(&cell));
            higher.push(cell);
        }
        higher.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        cells.extend(higher);
        Self::new(n_vertices, cells)
    }

    /// The Freudenthal triangulation of a `rows x cols` vertex grid: each
    /// square is split along its main diagonal.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let v = |i: usize, j: usize| i * cols + j;
        let mut triangles = Vec::new();
        let mut edges = Vec::new();
        for i in 0..rows {
            for j in 0..cols {
                if j + 1 < cols {
                    edges.push(vec![v(i, j), v(i, j + 1)]);
                }
                if i + 1 < rows {
                    edges.push(vec![v(i, j), v(i + 1, j)]);
                }
                if i + 1 < rows && j + 1 < cols {
                    triangles.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
                    triangles.push(vec![v(i, j), v(i, j + 1), v(i + 1, j + 1)]);
                }
            }
        }
        edges.extend(triangles);
        Self::closure(rows * cols, &edges).expect("grid cells are well formed")
    }

    /// The boundary of an `n`-gon, `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        let edges: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        Self::closure(n, &edges).expect("cycle cells are well formed")
    }

    /// Reads an OFF-like description: a header `n_vertices n_cells`, then one
    /// line per cell `k v1 .. vk`. Faces of listed cells are added.
    pub fn parse(text: &str) -> Result<Self, PipelineError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
            .filter(|(_, l)| !l.is_empty());
        let nums = |line: usize, l: &str| -> Result<Vec<usize>, PipelineError> {
            l.split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| PipelineError::Parse {
                        line,
                        msg: format!("bad integer {t:?}"),
                    })
                })
                .collect()
        };
        let Some((line, header)) = lines.next() else {
            return Err(PipelineError::Parse {
                line: 1,
                msg: "empty input".into(),
            });
        };
        let header = nums(line, header)?;
        if header.len() != 2 {
            return Err(PipelineError::Parse {
                line,
                msg: "header must be `n_vertices n_cells`".into(),
            });
        }
        let mut cells = Vec::new();
        for (line, l) in lines {
            let row = nums(line, l)?;
            if row.is_empty() || row[0] + 1 != row.len() {
                return Err(PipelineError::Parse {
                    line,
                    msg: "cell line must be `k v1 .. vk`".into(),
                });
            }
            cells.push(row[1..].to_vec());
        }
        if cells.len() != header[1] {
            return Err(PipelineError::Parse {
                line,
                msg: format!("header announces {} cells, found {}", header[1], cells.len()),
            });
        }
        Self::closure(header[0], &cells)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, i: usize) -> &[usize] {
        &self.cells[i]
    }

    pub fn dim(&self, i: usize) -> usize {
        self.cells[i].len() - 1
    }

    /// Indices of the codimension-one faces of cell `i`.
    pub fn boundary(&self, i: usize) -> Vec<usize> {
        faces(&self.cells[i]).iter().map(|f| self.index[f]).collect()
    }

    /// Whether every boundary of a boundary vanishes over F2.
    pub fn boundary_squared_is_zero(&self) -> bool {
        (0..self.len()).all(|i| {
            let mut parity: HashMap<usize, bool> = HashMap::new();
            for f in self.boundary(i) {
                for g in self.boundary(f) {
                    *parity.entry(g).or_default() ^= true;
                }
            }
            parity.values().all(|odd| !odd)
        })
    }
}

fn faces(cell: &[usize]) -> Vec<Vec<usize>> {
    if cell.len() < 2 {
        return Vec::new();
    }
    (0..cell.len())
        .map(|skip| cell.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect())
        .collect()
}

/// Cells of a complex with entrance values, in filtration order: by
/// `(value, dimension, cell id)`.
#[derive(Clone, Debug)]
pub struct Filtration {
    pub complex: FiniteComplex,
    pub value: Vec<f64>,
    pub order: Vec<usize>,
}

impl Filtration {
    /// Explicit cell values; each must be at least the values of its faces.
    pub fn from_cell_values(complex: FiniteComplex, value: Vec<f64>) -> Result<Self, PipelineError> {
        if value.len() != complex.len() {
            return Err(PipelineError::LengthMismatch(value.len(), complex.len()));
        }
        for i in 0..complex.len() {
            for f in complex.boundary(i) {
                if value[f] > value[i] {
                    return Err(PipelineError::NonSublevelClosed { cell: i, face: f });
                }
            }
        }
        let mut order: Vec<usize> = (0..complex.len()).collect();
        order.sort_by(|&a, &b| {
            value[a]
                .total_cmp(&value[b])
                .then(complex.dim(a).cmp(&complex.dim(b)))
                .then(a.cmp(&b))
        });
        Ok(Filtration { complex, value, order })
    }

    /// The cells present at parameter `p`.
    pub fn sublevel(&self, p: f64) -> Vec<bool> {
        self.value.iter().map(|&v| v <= p).collect()
    }
}

/// Lower-star filtration: a cell enters at the largest value on its vertices.
pub fn sublevel_filtration(phi: &[f64], complex: &FiniteComplex) -> Result<Filtration, PipelineError> {
    if phi.len() != complex.n_vertices() {
        return Err(PipelineError::LengthMismatch(phi.len(), complex.n_vertices()));
    }
    let value = (0..complex.len())
        .map(|i| complex.cell(i).iter().map(|&v| phi[v]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    Filtration::from_cell_values(complex.clone(), value)
}

/// Sublevel set `{ cells : phi(cell) <= p }` of an `R^n`-valued function, with
/// cell values the componentwise maximum over their vertices.
pub fn vector_sublevel(phi: &[Vec<f64>], complex: &FiniteComplex, p: &[f64]) -> Vec<bool> {
    (0..complex.len())
        .map(|i| {
            complex
                .cell(i)
                .iter()
                .all(|&v| phi[v].iter().zip(p).all(|(x, y)| x <= y))
        })
        .collect()
}

/// Barcode of degree-`degree` homology by the standard column reduction of
/// the boundary matrix over F2. Zero-length bars are dropped.
pub fn persistent_homology(f: &Filtration, degree: usize) -> Result<Barcode, PipelineError> {
    if degree > 1 {
        return Err(PipelineError::UnsupportedDegree(degree));
    }
    let k = &f.complex;
    let n = f.order.len();
    let mut rank = vec![0; n];
    for (pos, &cell) in f.order.iter().enumerate() {
        rank[cell] = pos;
    }
    let mut columns: Vec<Vec<usize>> = f
        .order
        .iter()
        .map(|&cell| {
            let mut col: Vec<usize> = k.boundary(cell).iter().map(|&x| rank[x]).collect();
            col.sort_unstable();
            col
        })
        .collect();
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut paired = vec![false; n];
    let mut pairs = Vec::new();
    for j in 0..n {
        while let Some(&low) = columns[j].last() {
            match owner.get(&low) {
                Some(&i) => {
                    let other = std::mem::take(&mut columns[i]);
                    columns[j] = symmetric_difference(&columns[j], &other);
                    columns[i] = other;
                }
                None => break,
            }
        }
        if let Some(&low) = columns[j].last() {
            owner.insert(low, j);
            paired[low] = true;
            paired[j] = true;
            pairs.push((low, j));
        }
    }
    let at = |pos: usize| f.value[f.order[pos]];
    let dim = |pos: usize| k.dim(f.order[pos]);
    let mut bars = Vec::new();
    for (birth, death) in pairs {
        if dim(birth) == degree && at(birth) < at(death) {
            bars.push((at(birth), at(death)));
        }
    }
    for pos in 0..n {
        if !paired[pos] && dim(pos) == degree {
            bars.push((at(pos), f64::INFINITY));
        }
    }
    Ok(Barcode::new(&bars).expect("filtration values are ordered"))
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Degree-0 barcode by union-find with the elder rule, independent of the
/// matrix reduction.
pub fn degree0_union_find(f: &Filtration) -> Barcode {
    let k = &f.complex;
    let n = k.n_vertices();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut birth = vec![f64::INFINITY; n];
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut bars = Vec::new();
    for &cell in &f.order {
        match k.cell(cell) {
            [v] => birth[*v] = f.value[cell],
            [u, v] => {
                let (ru, rv) = (find(&mut parent, *u), find(&mut parent, *v));
                if ru == rv {
                    continue;
                }
                let (elder, younger) = if birth[ru] <= birth[rv] { (ru, rv) } else { (rv, ru) };
                if birth[younger] < f.value[cell] {
                    bars.push((birth[younger], f.value[cell]));
                }
                parent[younger] = elder;
            }
            _ => {}
        }
    }
    for v in 0..n {
        if find(&mut parent, v) == v {
            bars.push((birth[v], f64::INFINITY));
        }
    }
    Barcode::new(&bars).expect("filtration values are ordered")
}

/// Values of a filter function on the vertices.
#[derive(Clone, Debug, PartialEq)]
pub enum FilterValues {
    Real(Vec<f64>),
    Vector(Vec<Vec<f64>>),
    /// Points of the poset of a [`FiniteAction`].
    Finite(Vec<usize>),
}

impl FilterValues {
    fn len(&self) -> usize {
        match self {
            FilterValues::Real(v) => v.len(),
            FilterValues::Vector(v) => v.len(),
            FilterValues::Finite(v) => v.len(),
        }
    }
}

/// The monoid action on the target poset.
#[derive(Clone, Debug)]
pub enum FunctionAction<'a> {
    /// Translations `x -> x + t`, `t >= 0`, weight `t`.
    Flow,
    /// Scalings `x -> c x`, `c >= 1`, weight `log c`, on nonnegative values.
    Multiplicative,
    /// Translations by `s` in the nonnegative orthant, weight `|s|_p`.
    VectorShift { p: f64 },
    Finite(&'a FiniteAction),
}

/// Least `max{W(g), W(h)}` with `phi <= g psi` and `psi <= h phi` pointwise.
pub fn function_interleaving_distance(
    phi: &FilterValues,
    psi: &FilterValues,
    action: &FunctionAction,
) -> Result<DistanceResult, PipelineError> {
    if phi.len() != psi.len() {
        return Err(PipelineError::LengthMismatch(phi.len(), psi.len()));
    }
    let unsupported = || PipelineError::UnsupportedAction("values do not match the action".into());
    let value = match (action, phi, psi) {
        (FunctionAction::Flow, FilterValues::Real(a), FilterValues::Real(b)) => {
            a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
        }
        (FunctionAction::Multiplicative, FilterValues::Real(a), FilterValues::Real(b)) => {
            let mut worst = 0.0f64;
            for (&x, &y) in a.iter().zip(b) {
                if x < 0.0 || y < 0.0 {
                    return Err(PipelineError::UnsupportedAction(format!("negative value {}", x.min(y))));
                }
                worst = match (x == 0.0, y == 0.0) {
                    (true, true) => worst,
                    (false, false) => worst.max((x.ln() - y.ln()).abs()),
                    _ => f64::INFINITY,
                };
            }
            worst
        }
        (FunctionAction::VectorShift { p }, FilterValues::Vector(a), FilterValues::Vector(b)) => {
            let dim = a.first().map_or(0, Vec::len);
            let mut s = vec![0.0f64; dim];
            let mut t = vec![0.0f64; dim];
            for (x, y) in a.iter().zip(b) {
                for i in 0..dim {
                    s[i] = s[i].max(x[i] - y[i]);
                    t[i] = t[i].max(y[i] - x[i]);
                }
            }
            p_norm(&s, *p).max(p_norm(&t, *p))
        }
        (FunctionAction::Finite(m), FilterValues::Finite(a), FilterValues::Finite(b)) => {
            let below = |g: usize, from: &[usize], to: &[usize]| {
                from.iter().zip(to).all(|(&x, &y)| m.poset.leq(x, m.maps[g][y]))
            };
            let lightest = |from: &[usize], to: &[usize]| {
                (0..m.len())
                    .filter(|&g| below(g, from, to))
                    .map(|g| m.weights[g])
                    .min()
                    .unwrap_or(Weight::INFINITY)
            };
            return Ok(DistanceResult::exact(lightest(a, b).max(lightest(b, a)), "finite", None));
        }
        _ => return Err(unsupported()),
    };
    let family = match action {
        FunctionAction::Flow => "flow",
        FunctionAction::Multiplicative => "mult",
        FunctionAction::VectorShift { .. } => "vector",
        FunctionAction::Finite(_) => "finite",
    };
    Ok(DistanceResult::exact(Weight::of(value), family, None))
}

/// Bisection on the pointwise feasibility of the symmetric pair, for the flow
/// and multiplicative actions. Returns the `(lower, upper)` bracket.
pub fn function_distance_bisect(phi: &[f64], psi: &[f64], action: &FunctionAction, tol: f64) -> (f64, f64) {
    let apply = |w: f64, x: f64| match action {
        FunctionAction::Multiplicative => x * w.exp(),
        _ => x + w,
    };
    let feasible = |w: f64| phi.iter().zip(psi).all(|(&x, &y)| x <= apply(w, y) && y <= apply(w, x));
    let (lo, hi, _) = bisect_feasibility(feasible, 1.0, tol);
    (lo, hi)
}

/// Reads `vertex,value` rows (with a header) into a dense value vector.
pub fn read_function_csv(reader: impl Read) -> Result<Vec<f64>, PipelineError> {
    #[derive(Deserialize)]
    struct Row {
        vertex: usize,
        value: f64,
    }
    let mut rdr = csv::Reader::from_reader(reader);
    let rows: Vec<Row> = rdr.deserialize().collect::<Result<_, _>>()?;
    let n = rows.iter().map(|r| r.vertex + 1).max().unwrap_or(0);
    let mut values = vec![None; n];
    for r in rows {
        values[r.vertex] = Some(r.value);
    }
    values
        .into_iter()
        .enumerate()
        .map(|(v, x)| x.ok_or_else(|| PipelineError::MalformedComplex(format!("no value for vertex {v}"))))
        .collect()
}

#[derive(Clone, Debug)]
pub struct StabilityConfig {
    pub trials: usize,
    pub grid: usize,
    pub noise: f64,
    pub seed: u64,
    pub multiplicative: bool,
    /// Extra trials raising one vertex by this height.
    pub spike: Option<f64>,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        StabilityConfig {
            trials: 200,
            grid: 10,
            noise: 0.1,
            seed: 7,
            multiplicative: false,
            spike: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRow {
    pub trial: usize,
    pub degree: usize,
    /// Bottleneck distance between the barcodes.
    pub lhs: f64,
    /// Function distance.
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Clone, Debug, Default)]
pub struct StabilityReport {
    pub rows: Vec<TrialRow>,
    /// Rows with `lhs > rhs + 1e-9`.
    pub violations: usize,
    /// Trials whose degree-0 barcodes from reduction and union-find differ.
    pub oracle_mismatches: usize,
    /// Trials whose function distance differs from the sup norm.
    pub sup_mismatches: usize,
    pub max_ratio: f64,
}

impl StabilityReport {
    pub fn write_csv(&self, writer: impl Write) -> Result<(), PipelineError> {
        let mut w = csv::Writer::from_writer(writer);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

const STABILITY_SLACK: f64 = 1e-9;

fn same_multiset(a: &Barcode, b: &Barcode) -> bool {
    a.sorted() == b.sorted()
}

fn log_barcode(b: &Barcode) -> Barcode {
    let pairs: Vec<(f64, f64)> = b.bars.iter().map(|bar| (bar.birth.ln(), bar.death.ln())).collect();
    Barcode::new(&pairs).expect("positive values")
}

/// Random functions on a grid complex and their noisy perturbations. Each
/// trial checks the bottleneck bound in degrees 0 and 1, the union-find
/// oracle and the sup-norm identity. Trials run in parallel; the report is
/// ordered by trial.
pub fn stability_experiment(config: &StabilityConfig) -> StabilityReport {
    let complex = FiniteComplex::grid(config.grid, config.grid);
    let n = complex.n_vertices();
    let trial_count = config.trials + usize::from(config.spike.is_some());
    let outcomes: Vec<(Vec<TrialRow>, bool, bool)> = (0..trial_count)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(trial as u64));
            let (phi, psi): (Vec<f64>, Vec<f64>) = if trial == config.trials {
                let height = config.spike.unwrap_or(0.0);
                let phi: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
                let mut psi = phi.clone();
                psi[rng.gen_range(0..n)] += height;
                (phi, psi)
            } else if config.multiplicative {
                let phi: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..2.0)).collect();
                let psi = phi.iter().map(|x| x * rng.gen_range(-config.noise..=config.noise).exp()).collect();
                (phi, psi)
            } else {
                let phi: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
                let psi = phi.iter().map(|x| x + rng.gen_range(-config.noise..=config.noise)).collect();
                (phi, psi)
            };
            let action = if config.multiplicative && trial < config.trials {
                FunctionAction::Multiplicative
            } else {
                FunctionAction::Flow
            };
            let rhs = function_interleaving_distance(&FilterValues::Real(phi.clone()), &FilterValues::Real(psi.clone()), &action)
                .expect("matching values")
                .value
                .value();
            let sup = match action {
                FunctionAction::Multiplicative => phi.iter().zip(&psi).map(|(x, y)| (x.ln() - y.ln()).abs()).fold(0.0, f64::max),
                _ => phi.iter().zip(&psi).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max),
            };
            let fp = sublevel_filtration(&phi, &complex).expect("lower star");
            let fq = sublevel_filtration(&psi, &complex).expect("lower star");
            let mut rows = Vec::new();
            let mut oracle_ok = true;
            for degree in 0..=1 {
                let (bp, bq) = (persistent_homology(&fp, degree).unwrap(), persistent_homology(&fq, degree).unwrap());
                if degree == 0 {
                    oracle_ok = same_multiset(&bp, &degree0_union_find(&fp)) && same_multiset(&bq, &degree0_union_find(&fq));
                }
                let lhs = match action {
                    FunctionAction::Multiplicative => bottleneck(&log_barcode(&bp), &log_barcode(&bq)),
                    _ => bottleneck(&bp, &bq),
                }
                .value();
                rows.push(TrialRow {
                    trial,
                    degree,
                    lhs,
                    rhs,
                    margin: rhs - lhs,
                });
            }
            (rows, oracle_ok, rhs == sup)
        })
        .collect();
    let mut report = StabilityReport::default();
    for (rows, oracle_ok, sup_ok) in outcomes {
        for row in &rows {
            if row.lhs > row.rhs + STABILITY_SLACK {
                report.violations += 1;
            }
            if row.rhs > 0.0 {
                report.max_ratio = report.max_ratio.max(row.lhs / row.rhs);
            }
        }
        report.oracle_mismatches += usize::from(!oracle_ok);
        report.sup_mismatches += usize::from(!sup_ok);
        report.rows.extend(rows);
    }
    report
}
