//! Perfect matching of students to bundles.
//!
//! The "may grade" relation is dense ((n-k)-regular), so candidate lists are
//! never materialised: a student's candidates are all bundles except the
//! `k` that contain their own element.

use rand::seq::SliceRandom;
use rand::Rng;

/// `forbidden(s)` lists the bundles student `s` may not grade. Returns
/// `bundle -> student`, or `None` if no perfect matching exists.
pub(crate) fn perfect_matching<R, F>(n: usize, forbidden: F, rng: &mut R) -> Option<Vec<usize>>
where
    R: Rng + ?Sized,
    F: Fn(usize) -> Vec<usize>,
{
    let mut bundle_order: Vec<usize> = (0..n).collect();
    bundle_order.shuffle(rng);
    let mut students: Vec<usize> = (0..n).collect();
    students.shuffle(rng);

    let mut m = Matcher {
        n,
        blocked: (0..n)
            .map(|s| {
                let mut f = forbidden(s);
                f.sort_unstable();
                f
            })
            .collect(),
        offset: (0..n).map(|_| rng.gen_range(0..n.max(1))).collect(),
        bundle_order,
        owner: vec![usize::MAX; n],
        visited: vec![0; n],
        epoch: 0,
    };

    // Greedy pass.
    let mut unmatched = Vec::new();
    for &s in &students {
        let free = m.candidates(s).find(|&v| m.owner[v] == usize::MAX);
        match free {
            Some(v) => m.owner[v] = s,
            None => unmatched.push(s),
        }
    }
    // Augmenting paths for the rest.
    for s in unmatched {
        m.epoch += 1;
        if !m.augment(s) {
            return None;
        }
    }
    Some(m.owner)
}

struct Matcher {
    n: usize,
    blocked: Vec<Vec<usize>>,
    offset: Vec<usize>,
    bundle_order: Vec<usize>,
    owner: Vec<usize>,
    visited: Vec<u32>,
    epoch: u32,
}

impl Matcher {
    fn candidates(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.offset[s];
        let blocked = &self.blocked[s];
        (0..self.n)
            .map(move |i| self.bundle_order[(start + i) % self.n])
            .filter(move |v| blocked.binary_search(v).is_err())
    }

    fn augment(&mut self, s: usize) -> bool {
        let cands: Vec<usize> = self.candidates(s).collect();
        for v in cands {
            if self.visited[v] == self.epoch {
                continue;
            }
            self.visited[v] = self.epoch;
            let prev = self.owner[v];
            if prev == usize::MAX || self.augment(prev) {
                self.owner[v] = s;
                return true;
            }
        }
        false
    }
}
