//! Helpers shared by the integration and acceptance tests. Nothing here calls
//! into the library's scoring or aggregation code, so the samplers are
//! independent checks of it.

#![allow(dead_code)]

use peergrade::bundles::BundleGraph;
use rand::seq::SliceRandom;
use rand::Rng;

/// Running mean and variance (Welford).
#[derive(Debug, Default, Clone)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn std_err(&self) -> f64 {
        (self.variance() / self.n as f64).sqrt()
    }
}

/// Points earned at node `x` of bundle `b` when the bundle is ranked by true
/// rank: `k` for the best, `1` for the worst. `rank_at[x]` is the true rank
/// (1 = best) of the element at node `x`.
fn points(graph: &BundleGraph, b: usize, x: usize, rank_at: &[usize]) -> i64 {
    let mine = rank_at[x];
    let better = graph.bundle(b).iter().filter(|&&y| rank_at[y] < mine).count();
    (graph.k() - better) as i64
}

/// Draws `W = score(a_r) - score(a_q)` under perfect grading with `a_r` fixed
/// at node `u`, `a_q` at node `v`, and the other ranks placed uniformly at
/// random on the remaining nodes. `r`, `q` are 1-based true ranks.
pub struct ScoreDiffSampler<'g> {
    graph: &'g BundleGraph,
    u: usize,
    v: usize,
    others: Vec<usize>,
    free_nodes: Vec<usize>,
    rank_at: Vec<usize>,
}

impl<'g> ScoreDiffSampler<'g> {
    pub fn new(graph: &'g BundleGraph, u: usize, v: usize, r: usize, q: usize) -> Self {
        let n = graph.n();
        assert!(u != v && r != q && (1..=n).contains(&r) && (1..=n).contains(&q));
        let others = (1..=n).filter(|&t| t != r && t != q).collect();
        let free_nodes = (0..n).filter(|&x| x != u && x != v).collect();
        let mut rank_at = vec![0; n];
        rank_at[u] = r;
        rank_at[v] = q;
        Self { graph, u, v, others, free_nodes, rank_at }
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> i64 {
        self.others.shuffle(rng);
        for (&x, &t) in self.free_nodes.iter().zip(&self.others) {
            self.rank_at[x] = t;
        }
        let g = self.graph;
        let su: i64 = g.bundles_of(self.u).iter().map(|&b| points(g, b, self.u, &self.rank_at)).sum();
        let sv: i64 = g.bundles_of(self.v).iter().map(|&b| points(g, b, self.v, &self.rank_at)).sum();
        su - sv
    }
}

/// Number of bundles containing both `u` and `v`, by direct scan.
pub fn shared_bundles(graph: &BundleGraph, u: usize, v: usize) -> usize {
    graph.bundles().iter().filter(|b| b.contains(&u) && b.contains(&v)).count()
}

/// `θ_{u,v} = 4·Σ_z (λ_{u,z} + λ_{v,z})²` over `z ∉ {u,v}`, by direct scan.
pub fn theta_brute(graph: &BundleGraph, u: usize, v: usize) -> u64 {
    (0..graph.n())
        .filter(|&z| z != u && z != v)
        .map(|z| {
            let s = (shared_bundles(graph, u, z) + shared_bundles(graph, v, z)) as u64;
            4 * s * s
        })
        .sum()
}
