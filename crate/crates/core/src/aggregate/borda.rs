use rand::seq::SliceRandom;
use rand::Rng;

use crate::ranking::{Profile, Ranking};

/// Borda points per element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreTable {
    score: Vec<u64>,
}

impl ScoreTable {
    pub fn score(&self, element: usize) -> u64 {
        self.score[element]
    }

    pub fn scores(&self) -> &[u64] {
        &self.score
    }

    pub fn total(&self) -> u64 {
        self.score.iter().sum()
    }
}

/// The first of `k` ranked elements gets `k` points, the last gets 1.
pub fn borda_scores(profile: &Profile) -> ScoreTable {
    let mut score = vec![0u64; profile.n()];
    for r in profile.rankings() {
        let k = r.len() as u64;
        for (pos, &e) in r.elements().iter().enumerate() {
            score[e] += k - pos as u64;
        }
    }
    ScoreTable { score }
}

/// Elements by decreasing Borda score, ties broken uniformly at random.
pub fn borda<R: Rng + ?Sized>(profile: &Profile, rng: &mut R) -> Ranking {
    let table = borda_scores(profile);
    let mut order: Vec<usize> = (0..profile.n()).collect();
    order.shuffle(rng);
    // Stable sort keeps the random order inside each tie group.
    order.sort_by(|&a, &b| table.score[b].cmp(&table.score[a]));
    Ranking::new(order).expect("a permutation of 0..n")
}
