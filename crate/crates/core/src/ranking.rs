//! Rankings over the element universe and the pairwise recovery metric.
//!
//! Elements are dense ids `0..n`; student `i` wrote element `i`. Ranks are
//! 1-based with rank 1 the best element.

use crate::error::{Error, Result};

pub type ElementId = usize;

fn check_permutation(order: &[ElementId]) -> Result<()> {
    let n = order.len();
    let mut seen = vec![false; n];
    for &e in order {
        if e >= n {
            return Err(Error::InvalidRanking(format!("element {e} out of range 0..{n}")));
        }
        if std::mem::replace(&mut seen[e], true) {
            return Err(Error::InvalidRanking(format!("element {e} appears twice")));
        }
    }
    Ok(())
}

/// The strict "true" order of all elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    order: Vec<ElementId>,
    rank_of: Vec<usize>,
}

impl GroundTruth {
    /// `order[0]` is the best element.
    pub fn from_order(order: Vec<ElementId>) -> Result<Self> {
        check_permutation(&order)?;
        let mut rank_of = vec![0; order.len()];
        for (i, &e) in order.iter().enumerate() {
            rank_of[e] = i + 1;
        }
        Ok(Self { order, rank_of })
    }

    pub fn identity(n: usize) -> Self {
        Self { order: (0..n).collect(), rank_of: (1..=n).collect() }
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[ElementId] {
        &self.order
    }

    /// 1-based rank of `e`.
    pub fn rank_of(&self, e: ElementId) -> usize {
        self.rank_of[e]
    }

    /// True if `a` is strictly better than `b`.
    pub fn prefers(&self, a: ElementId, b: ElementId) -> bool {
        self.rank_of[a] < self.rank_of[b]
    }
}

/// One grader's strict order over the elements of a bundle, best first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialRanking {
    grader: usize,
    elements: Vec<ElementId>,
}

impl PartialRanking {
    pub fn new(grader: usize, elements: Vec<ElementId>) -> Result<Self> {
        let mut sorted = elements.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidRanking("partial ranking repeats an element".into()));
        }
        if elements.contains(&grader) {
            return Err(Error::InvalidRanking(format!("grader {grader} ranks their own element")));
        }
        Ok(Self { grader, elements })
    }

    pub fn grader(&self) -> usize {
        self.grader
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// The partial rankings of all `n` bundles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    n: usize,
    k: usize,
    rankings: Vec<PartialRanking>,
}

impl Profile {
    /// Checks that there are `n` rankings of a common size `k` and that every
    /// element appears in exactly `k` of them.
    pub fn new(n: usize, rankings: Vec<PartialRanking>) -> Result<Self> {
        if rankings.len() != n {
            return Err(Error::InvalidProfile(format!(
                "expected {n} partial rankings, got {}",
                rankings.len()
            )));
        }
        let k = rankings.first().map_or(0, PartialRanking::len);
        let mut appearances = vec![0usize; n];
        for r in &rankings {
            if r.len() != k {
                return Err(Error::InvalidProfile("partial rankings differ in size".into()));
            }
            for &e in r.elements() {
                if e >= n {
                    return Err(Error::InvalidProfile(format!("element {e} out of range")));
                }
                appearances[e] += 1;
            }
        }
        if let Some(e) = appearances.iter().position(|&c| c != k) {
            return Err(Error::InvalidProfile(format!(
                "element {e} appears in {} rankings, expected {k}",
                appearances[e]
            )));
        }
        Ok(Self { n, k, rankings })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rankings(&self) -> &[PartialRanking] {
        &self.rankings
    }
}

/// A complete strict ranking, best first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    order: Vec<ElementId>,
}

impl Ranking {
    pub fn new(order: Vec<ElementId>) -> Result<Self> {
        check_permutation(&order)?;
        Ok(Self { order })
    }

    pub fn order(&self) -> &[ElementId] {
        &self.order
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn reversed(&self) -> Self {
        Self { order: self.order.iter().rev().copied().collect() }
    }

    pub fn into_order(self) -> Vec<ElementId> {
        self.order
    }
}

/// Counts inversions of `seq` by merge sort.
fn count_inversions(seq: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = seq.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut inv = {
        let (left, right) = seq.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        count_inversions(left, bl) + count_inversions(right, br)
    };
    let (mut i, mut j, mut t) = (0, mid, 0);
    while i < mid && j < n {
        if seq[i] <= seq[j] {
            buf[t] = seq[i];
            i += 1;
        } else {
            buf[t] = seq[j];
            inv += (mid - i) as u64;
            j += 1;
        }
        t += 1;
    }
    buf[t..t + mid - i].copy_from_slice(&seq[i..mid]);
    t += mid - i;
    buf[t..t + n - j].copy_from_slice(&seq[j..n]);
    seq.copy_from_slice(&buf[..n]);
    inv
}

/// Number of unordered pairs on which `output` and `truth` disagree.
pub fn discordant_pairs(output: &Ranking, truth: &GroundTruth) -> Result<u64> {
    if output.n() != truth.n() {
        return Err(Error::MismatchedElements(format!(
            "output ranks {} elements, ground truth {}",
            output.n(),
            truth.n()
        )));
    }
    let mut ranks: Vec<usize> = output.order().iter().map(|&e| truth.rank_of(e)).collect();
    let mut buf = vec![0; ranks.len()];
    Ok(count_inversions(&mut ranks, &mut buf))
}

/// Fraction of the `C(n, 2)` ground-truth pairwise relations that `output`
/// orders the same way.
pub fn recovered_fraction(output: &Ranking, truth: &GroundTruth) -> Result<f64> {
    let n = truth.n();
    if n < 2 {
        return Err(Error::InvalidParameter("recovered fraction needs n >= 2".into()));
    }
    let discordant = discordant_pairs(output, truth)?;
    let pairs = (n as u64) * (n as u64 - 1) / 2;
    Ok(1.0 - discordant as f64 / pairs as f64)
}
