//! MC4 Markov-chain aggregation.
//!
//! From element `a`, pick `b` uniformly among all `n` elements (including `a`
//! itself). Move to `b` if strictly more partial rankings put `b` above `a`
//! than `a` above `b`; otherwise stay. Elements are ranked by decreasing
//! stationary probability.
//!
//! The chain is usually reducible: under perfect grading the best element is
//! absorbing, and all other mass is transient. Every state keeps a self-loop,
//! so the chain is aperiodic and the iterates `x_t = x_0·P^t` from the uniform
//! start converge; the ordering is read off `x_T` after a bounded number of
//! steps. Transient elements still carry residual mass at that point, and
//! their relative sizes are what order them, so ties are judged relative to
//! the values' magnitude rather than on an absolute scale.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::ranking::{Profile, Ranking};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mc4Params {
    pub max_iterations: usize,
    /// Stop once the L1 change between successive iterates drops below this.
    pub tolerance: f64,
    /// Values `x ≥ y` with `x - y ≤ tie_window · x` are treated as tied.
    pub tie_window: f64,
}

impl Mc4Params {
    /// `max_iterations = n`, tolerance `1e-10`, relative tie window `1e-12`.
    pub fn for_size(n: usize) -> Self {
        Self { max_iterations: n, tolerance: 1e-10, tie_window: 1e-12 }
    }
}

/// Transition structure: `P(a→b) = 1/n` for each `b` in `targets(a)`, and
/// the rest of the mass stays at `a`.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl TransitionMatrix {
    pub fn from_profile(profile: &Profile) -> Self {
        let n = profile.n();
        // wins[(a, b)] - wins[(b, a)], kept for each co-ranked pair.
        let mut margin: std::collections::HashMap<(usize, usize), i64> = std::collections::HashMap::new();
        for r in profile.rankings() {
            let e = r.elements();
            for i in 0..e.len() {
                for j in i + 1..e.len() {
                    let (a, b) = (e[i], e[j]);
                    if a < b {
                        *margin.entry((a, b)).or_default() += 1;
                    } else {
                        *margin.entry((b, a)).or_default() -= 1;
                    }
                }
            }
        }
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (&(a, b), &m) in &margin {
            // m > 0: a above b more often, so b moves to a.
            if m > 0 {
                out[b].push(a);
            } else if m < 0 {
                out[a].push(b);
            }
        }
        Self::from_targets(out)
    }

    /// `targets[a]` lists the elements `a` moves to.
    pub fn from_targets(targets: Vec<Vec<usize>>) -> Self {
        let n = targets.len();
        let mut offsets = vec![0];
        let mut flat = Vec::new();
        for mut t in targets {
            t.sort_unstable();
            t.dedup();
            flat.extend(t);
            offsets.push(flat.len());
        }
        Self { n, offsets, targets: flat }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Elements that `a` moves to with probability `1/n` each.
    pub fn targets(&self, a: usize) -> &[usize] {
        &self.targets[self.offsets[a]..self.offsets[a + 1]]
    }

    /// Row `a` of the dense matrix.
    pub fn row(&self, a: usize) -> Vec<f64> {
        let n = self.n as f64;
        let mut row = vec![0.0; self.n];
        for &b in self.targets(a) {
            row[b] = 1.0 / n;
        }
        row[a] = 1.0 - self.targets(a).len() as f64 / n;
        row
    }

    /// `next = current · P`.
    fn step(&self, current: &[f64], next: &mut [f64]) {
        let inv_n = 1.0 / self.n as f64;
        for a in 0..self.n {
            let t = self.targets(a);
            next[a] = current[a] * (1.0 - t.len() as f64 * inv_n);
        }
        for a in 0..self.n {
            let share = current[a] * inv_n;
            if share != 0.0 {
                for &b in self.targets(a) {
                    next[b] += share;
                }
            }
        }
    }
}

/// Power iteration from the uniform vector.
pub fn mc4_stationary(chain: &TransitionMatrix, params: &Mc4Params) -> Vec<f64> {
    let n = chain.n();
    let mut x = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    for _ in 0..params.max_iterations {
        chain.step(&x, &mut next);
        let change: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if change < params.tolerance {
            break;
        }
    }
    x
}

pub fn mc4<R: Rng + ?Sized>(profile: &Profile, params: &Mc4Params, rng: &mut R) -> Ranking {
    let chain = TransitionMatrix::from_profile(profile);
    let pi = mc4_stationary(&chain, params);
    let mut order: Vec<usize> = (0..profile.n()).collect();
    order.sort_by(|&a, &b| pi[b].total_cmp(&pi[a]).then(a.cmp(&b)));
    // Shuffle each run of values that are within the tie window of their
    // neighbour.
    let mut start = 0;
    for i in 1..=order.len() {
        if i == order.len() || pi[order[i - 1]] - pi[order[i]] > params.tie_window * pi[order[i - 1]] {
            order[start..i].shuffle(rng);
            start = i;
        }
    }
    Ranking::new(order).expect("a permutation of 0..n")
}
