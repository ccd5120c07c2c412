//! Bottleneck distance between barcodes.

use std::collections::VecDeque;

use crate::pmod::Barcode;
use crate::weight::Weight;

/// Maximum bipartite matching by Hopcroft-Karp. `adj[u]` lists the right
/// vertices adjacent to left vertex `u`.
pub struct HopcroftKarp<'a> {
    adj: &'a [Vec<usize>],
    n_right: usize,
}

impl<'a> HopcroftKarp<'a> {
    pub fn new(adj: &'a [Vec<usize>], n_right: usize) -> Self {
        HopcroftKarp { adj, n_right }
    }

    /// Size of a maximum matching.
    pub fn max_matching(&self) -> usize {
        const NIL: usize = usize::MAX;
        let n_left = self.adj.len();
        let mut match_l = vec![NIL; n_left];
        let mut match_r = vec![NIL; self.n_right];
        let mut dist = vec![0usize; n_left];
        let mut size = 0;
        loop {
            // Layer the graph from free left vertices.
            let mut queue = VecDeque::new();
            for u in 0..n_left {
                if match_l[u] == NIL {
                    dist[u] = 0;
                    queue.push_back(u);
                } else {
                    dist[u] = usize::MAX;
                }
            }
            let mut found = false;
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    let w = match_r[v];
                    if w == NIL {
                        found = true;
                    } else if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            if !found {
                return size;
            }
            let mut next_edge = vec![0usize; n_left];
            for u in 0..n_left {
                if match_l[u] == NIL && self.augment(u, &mut match_l, &mut match_r, &mut dist, &mut next_edge) {
                    size += 1;
                }
            }
        }
    }

    fn augment(
        &self,
        u: usize,
        match_l: &mut [usize],
        match_r: &mut [usize],
        dist: &mut [usize],
        next_edge: &mut [usize],
    ) -> bool {
        const NIL: usize = usize::MAX;
        while next_edge[u] < self.adj[u].len() {
            let v = self.adj[u][next_edge[u]];
            next_edge[u] += 1;
            let w = match_r[v];
            let advance = w == NIL || (dist[w] == dist[u] + 1 && self.augment(w, match_l, match_r, dist, next_edge));
            if advance {
                match_l[u] = v;
                match_r[v] = u;
                return true;
            }
        }
        dist[u] = usize::MAX;
        false
    }
}

fn pair_cost(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

fn diagonal_cost(a: (f64, f64)) -> f64 {
    0.5 * (a.1 - a.0)
}

/// Whether the finite bars admit a perfect matching at threshold `t`, each bar
/// either paired with a bar on the other side or sent to the diagonal.
fn feasible(xs: &[(f64, f64)], ys: &[(f64, f64)], t: f64) -> bool {
    let (n, m) = (xs.len(), ys.len());
    // Left: xs then diagonal copies of ys. Right: ys then diagonal copies of xs.
    let mut adj = vec![Vec::new(); n + m];
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            if pair_cost(*x, *y) <= t {
                adj[i].push(j);
            }
        }
        if diagonal_cost(*x) <= t {
            adj[i].push(m + i);
        }
    }
    for (j, y) in ys.iter().enumerate() {
        if diagonal_cost(*y) <= t {
            adj[n + j].push(j);
        }
        adj[n + j].extend((0..n).map(|i| m + i));
    }
    HopcroftKarp::new(&adj, m + n).max_matching() == n + m
}

/// Exact bottleneck distance. Bars dying at `+inf` only match each other,
/// by sorted birth; unequal counts give `+inf`.
pub fn bottleneck(b1: &Barcode, b2: &Barcode) -> Weight {
    let split = |b: &Barcode| -> (Vec<(f64, f64)>, Vec<f64>) {
        let mut finite = Vec::new();
        let mut essential = Vec::new();
        for bar in &b.bars {
            if bar.death.is_infinite() {
                essential.push(bar.birth);
            } else {
                finite.push((bar.birth, bar.death));
            }
        }
        essential.sort_by(f64::total_cmp);
        (finite, essential)
    };
    let (xs, ex) = split(b1);
    let (ys, ey) = split(b2);
    if ex.len() != ey.len() {
        return Weight::INFINITY;
    }
    let essential = ex.iter().zip(&ey).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    let mut candidates: Vec<f64> = vec![0.0];
    for x in &xs {
        candidates.push(diagonal_cost(*x));
        for y in &ys {
            candidates.push(pair_cost(*x, *y));
        }
    }
    candidates.extend(ys.iter().map(|y| diagonal_cost(*y)));
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    // The largest candidate is always feasible: every bar can go to the diagonal.
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&xs, &ys, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Weight::of(candidates[lo].max(essential))
}
