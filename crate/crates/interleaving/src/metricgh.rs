//! Finite metric spaces and brute-force Gromov-Hausdorff distances.

use std::io::Read;

use thiserror::Error;

use crate::weight::DEFAULT_TOL;

/// Default cap on the number of map pairs `(f, g)` enumerated.
pub const DEFAULT_PAIR_CAP: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("distance matrix is not square (row {row} has {len} entries, expected {n})")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("entry ({0},{1}) is negative or not a number")]
    BadEntry(usize, usize),
    #[error("diagonal entry {0} is nonzero")]
    NonZeroDiagonal(usize),
    #[error("asymmetric at ({0},{1})")]
    Asymmetric(usize, usize),
    #[error("triangle inequality fails at ({0},{1},{2})")]
    Triangle(usize, usize, usize),
    #[error("{pairs} map pairs exceeds the cap of {cap}")]
    SizeCap { pairs: u64, cap: u64 },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("could not parse {0:?} as a number")]
    Number(String),
}

/// A metric on `{0, ..., n-1}` given by its full distance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace {
    dist: Vec<Vec<f64>>,
}

impl FiniteMetricSpace {
    pub fn new(dist: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        let n = dist.len();
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(MetricError::NotSquare { row: i, len: row.len(), n });
            }
            for (j, v) in row.iter().enumerate() {
                if !(*v >= 0.0) || v.is_infinite() {
                    return Err(MetricError::BadEntry(i, j));
                }
            }
        }
        for i in 0..n {
            if dist[i][i] != 0.0 {
                return Err(MetricError::NonZeroDiagonal(i));
            }
            for j in 0..n {
                if (dist[i][j] - dist[j][i]).abs() > DEFAULT_TOL {
                    return Err(MetricError::Asymmetric(i, j));
                }
                for k in 0..n {
                    if dist[i][k] > dist[i][j] + dist[j][k] + DEFAULT_TOL {
                        return Err(MetricError::Triangle(i, j, k));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { dist })
    }

    pub fn point() -> Self {
        FiniteMetricSpace { dist: vec![vec![0.0]] }
    }

    /// Two points at distance `delta`.
    pub fn pair(delta: f64) -> Result<Self, MetricError> {
        Self::new(vec![vec![0.0, delta], vec![delta, 0.0]])
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.dist
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().flatten().copied().fold(0.0, f64::max)
    }

    /// Reads a headerless CSV matrix.
    pub fn read_csv(reader: impl Read) -> Result<Self, MetricError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut dist = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let row = record
                .iter()
                .map(|s| s.parse::<f64>().map_err(|_| MetricError::Number(s.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            dist.push(row);
        }
        Self::new(dist)
    }
}

/// A set map `{0..n} -> {0..m}` as its table of images.
pub type PointMap = Vec<usize>;

/// All maps from an `n`-point set to an `m`-point set, in lexicographic order.
pub fn all_maps(n: usize, m: usize) -> Vec<PointMap> {
    if m == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let total = m.pow(n as u32);
    (0..total)
        .map(|mut k| {
            let mut f = vec![0; n];
            for slot in f.iter_mut().rev() {
                *slot = k % m;
                k /= m;
            }
            f
        })
        .collect()
}

/// Number of map pairs `X -> Y`, `Y -> X`, saturating.
pub fn map_pair_count(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> u64 {
    let pow = |b: usize, e: usize| (b as u64).checked_pow(e as u32).unwrap_or(u64::MAX);
    pow(y.len(), x.len()).saturating_mul(pow(x.len(), y.len()))
}

pub fn distortion(f: &[usize], x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 0..x.len() {
        for b in 0..x.len() {
            worst = worst.max((x.d(a, b) - y.d(f[a], f[b])).abs());
        }
    }
    worst
}

pub fn codistortion(f: &[usize], g: &[usize], x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 0..x.len() {
        for b in 0..y.len() {
            worst = worst.max((x.d(a, g[b]) - y.d(b, f[a])).abs());
        }
    }
    worst
}

/// How far `g f` and `f g` move points.
pub fn altered_codistortion(f: &[usize], g: &[usize], x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
    let on_x = (0..x.len()).map(|a| x.d(a, g[f[a]])).fold(0.0, f64::max);
    let on_y = (0..y.len()).map(|b| y.d(b, f[g[b]])).fold(0.0, f64::max);
    on_x.max(on_y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Variant {
    Classical,
    Altered,
    Modified,
}

fn brute_force(x: &FiniteMetricSpace, y: &FiniteMetricSpace, variant: Variant, cap: u64) -> Result<f64, MetricError> {
    let pairs = map_pair_count(x, y);
    if pairs > cap {
        return Err(MetricError::SizeCap { pairs, cap });
    }
    if x.is_empty() || y.is_empty() {
        // No maps in one direction unless both are empty.
        return Ok(if x.len() == y.len() { 0.0 } else { f64::INFINITY });
    }
    let fs: Vec<(PointMap, f64)> = all_maps(x.len(), y.len())
        .into_iter()
        .map(|f| {
            let d = distortion(&f, x, y);
            (f, d)
        })
        .collect();
    let gs: Vec<(PointMap, f64)> = all_maps(y.len(), x.len())
        .into_iter()
        .map(|g| {
            let d = distortion(&g, y, x);
            (g, d)
        })
        .collect();
    let mut best = f64::INFINITY;
    for (f, df) in &fs {
        if *df >= best {
            continue;
        }
        for (g, dg) in &gs {
            let mut value = df.max(*dg);
            if value >= best {
                continue;
            }
            value = match variant {
                Variant::Classical => value.max(codistortion(f, g, x, y)),
                Variant::Altered => value.max(altered_codistortion(f, g, x, y)),
                Variant::Modified => value,
            };
            best = best.min(value);
        }
    }
    Ok(best)
}

/// `½ min max{dis f, dis g, codis(f,g)}` over all map pairs.
pub fn gh(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<f64, MetricError> {
    gh_capped(x, y, DEFAULT_PAIR_CAP)
}

pub fn gh_capped(x: &FiniteMetricSpace, y: &FiniteMetricSpace, cap: u64) -> Result<f64, MetricError> {
    Ok(0.5 * brute_force(x, y, Variant::Classical, cap)?)
}

/// `½ min max{dis f, dis g, altered codis(f,g)}` over all map pairs.
pub fn altered_gh(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<f64, MetricError> {
    altered_gh_capped(x, y, DEFAULT_PAIR_CAP)
}

pub fn altered_gh_capped(x: &FiniteMetricSpace, y: &FiniteMetricSpace, cap: u64) -> Result<f64, MetricError> {
    Ok(0.5 * brute_force(x, y, Variant::Altered, cap)?)
}

/// `min max{dis f, dis g}` over all map pairs. No factor of ½.
pub fn modified_gh(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<f64, MetricError> {
    modified_gh_capped(x, y, DEFAULT_PAIR_CAP)
}

pub fn modified_gh_capped(x: &FiniteMetricSpace, y: &FiniteMetricSpace, cap: u64) -> Result<f64, MetricError> {
    brute_force(x, y, Variant::Modified, cap)
}

/// Every metric space on up to `max_points` points whose off-diagonal
/// distances are drawn from `values`, one matrix per valid assignment.
pub fn enumerate_spaces(max_points: usize, values: &[f64]) -> Vec<FiniteMetricSpace> {
    let mut out = Vec::new();
    for n in 1..=max_points {
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        for choice in all_maps(slots.len(), values.len()) {
            let mut dist = vec![vec![0.0; n]; n];
            for (&(i, j), &c) in slots.iter().zip(&choice) {
                dist[i][j] = values[c];
                dist[j][i] = values[c];
            }
            if let Ok(space) = FiniteMetricSpace::new(dist) {
                out.push(space);
            }
        }
    }
    out
}

/// A random metric on `n` points: shortest paths over random integer edge
/// lengths in `1..=max_len`, so all entries are integers.
pub fn random_space(n: usize, max_len: u32, rng: &mut impl rand::Rng) -> FiniteMetricSpace {
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(1..=max_len) as f64;
            dist[i][j] = v;
            dist[j][i] = v;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = dist[i][k] + dist[k][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }
    FiniteMetricSpace::new(dist).expect("shortest paths form a metric")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(a: f64, b: f64, c: f64) -> FiniteMetricSpace {
        FiniteMetricSpace::new(vec![vec![0.0, a, b], vec![a, 0.0, c], vec![b, c, 0.0]]).unwrap()
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        assert!(matches!(
            FiniteMetricSpace::new(vec![vec![0.0, 1.0], vec![2.0, 0.0]]),
            Err(MetricError::Asymmetric(0, 1))
        ));
        assert!(matches!(
            FiniteMetricSpace::new(vec![vec![1.0]]),
            Err(MetricError::NonZeroDiagonal(0))
        ));
        assert!(matches!(
            FiniteMetricSpace::new(vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]]),
            Err(MetricError::Triangle(..))
        ));
        assert!(FiniteMetricSpace::new(vec![vec![0.0, -1.0], vec![-1.0, 0.0]]).is_err());
    }

    #[test]
    fn distortion_examples() {
        let two = FiniteMetricSpace::pair(3.0).unwrap();
        assert_eq!(distortion(&[0, 1], &two, &two), 0.0);
        assert_eq!(distortion(&[0, 0], &two, &two), 3.0);
    }

    #[test]
    fn codistortion_point_against_pair() {
        let x = FiniteMetricSpace::point();
        let y = FiniteMetricSpace::pair(2.0).unwrap();
        // f(p) = a, g constant: at y = b, |0 - 2| = 2.
        assert_eq!(codistortion(&[0], &[0, 0], &x, &y), 2.0);
        assert_eq!(altered_codistortion(&[0], &[0, 0], &x, &y), 2.0);
        let two = FiniteMetricSpace::pair(2.0).unwrap();
        assert_eq!(codistortion(&[1, 0], &[1, 0], &two, &two), 0.0);
        assert_eq!(altered_codistortion(&[1, 0], &[1, 0], &two, &two), 0.0);
    }

    #[test]
    fn point_against_pair() {
        let x = FiniteMetricSpace::point();
        let y = FiniteMetricSpace::pair(2.0).unwrap();
        assert_eq!(gh(&x, &y).unwrap(), 1.0);
        assert_eq!(altered_gh(&x, &y).unwrap(), 1.0);
        assert_eq!(modified_gh(&x, &y).unwrap(), 2.0);
    }

    #[test]
    fn self_distances_vanish() {
        let x = tri(1.0, 2.0, 2.0);
        assert_eq!(gh(&x, &x).unwrap(), 0.0);
        assert_eq!(altered_gh(&x, &x).unwrap(), 0.0);
        assert_eq!(modified_gh(&x, &x).unwrap(), 0.0);
    }

    #[test]
    fn bilipschitz_on_triangles() {
        let spaces = [tri(1.0, 1.0, 1.0), tri(1.0, 2.0, 2.0), tri(1.0, 2.0, 3.0), tri(3.0, 3.0, 1.0)];
        for x in &spaces {
            for y in &spaces {
                let (g, a) = (gh(x, y).unwrap(), altered_gh(x, y).unwrap());
                assert!(a <= g && g <= 2.0 * a, "{x:?} {y:?} {g} {a}");
            }
        }
    }

    #[test]
    fn size_cap() {
        let dist = (0..9).map(|i| (0..9).map(|j| f64::from(u8::from(i != j))).collect()).collect();
        let x = FiniteMetricSpace::new(dist).unwrap();
        assert!(matches!(gh(&x, &x), Err(MetricError::SizeCap { .. })));
    }

    #[test]
    fn csv_round_trip() {
        let x = FiniteMetricSpace::read_csv("0,1,2\n1,0,1\n2,1,0\n".as_bytes()).unwrap();
        assert_eq!(x.d(0, 2), 2.0);
        assert!(FiniteMetricSpace::read_csv("0,1\n2,0\n".as_bytes()).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(all_maps(2, 3).len(), 9);
        assert_eq!(all_maps(0, 3), vec![Vec::<usize>::new()]);
        // One 1-point space, three 2-point spaces, and every 3-point triple
        // from {1,2,3} except the three placements of (1,1,3).
        assert_eq!(enumerate_spaces(3, &[1.0, 2.0, 3.0]).len(), 1 + 3 + (27 - 3));
    }
}
