//! Transitively closed strict partial order over `n` elements.
//!
//! Row `x` of `below` is the set of elements known to be worse than `x`; row
//! `x` of `above` the set known to be better. Both stay transitively closed
//! after every insertion, so "does b already reach a" is a single bit test.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct RelationState {
    n: usize,
    words: usize,
    below: Vec<u64>,
    above: Vec<u64>,
    scratch_up: Vec<u64>,
    scratch_down: Vec<u64>,
}

impl RelationState {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self {
            n,
            words,
            below: vec![0; n * words],
            above: vec![0; n * words],
            scratch_up: vec![0; words],
            scratch_down: vec![0; words],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn row(&self, x: usize) -> std::ops::Range<usize> {
        x * self.words..(x + 1) * self.words
    }

    #[inline]
    fn bit(table: &[u64], words: usize, x: usize, y: usize) -> bool {
        table[x * words + y / 64] >> (y % 64) & 1 == 1
    }

    /// `a` is known to be better than `b`.
    #[inline]
    pub fn before(&self, a: usize, b: usize) -> bool {
        Self::bit(&self.below, self.words, a, b)
    }

    #[inline]
    pub fn decided(&self, a: usize, b: usize) -> bool {
        self.before(a, b) || self.before(b, a)
    }

    /// Records `a ≻ b` and everything it implies. Returns `false` (and changes
    /// nothing) if `b ≻ a` is already implied.
    pub fn insert(&mut self, a: usize, b: usize) -> bool {
        if a == b || self.before(b, a) {
            return false;
        }
        if self.before(a, b) {
            return true;
        }
        let w = self.words;
        // up = {a} ∪ above(a), down = {b} ∪ below(b)
        let ra = self.row(a);
        self.scratch_up.copy_from_slice(&self.above[ra]);
        self.scratch_up[a / 64] |= 1u64 << (a % 64);
        let rb = self.row(b);
        self.scratch_down.copy_from_slice(&self.below[rb]);
        self.scratch_down[b / 64] |= 1u64 << (b % 64);

        for (wi, &word) in self.scratch_up.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let x = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                for (dst, &src) in self.below[x * w..(x + 1) * w].iter_mut().zip(&self.scratch_down) {
                    *dst |= src;
                }
            }
        }
        for (wi, &word) in self.scratch_down.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let y = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                for (dst, &src) in self.above[y * w..(y + 1) * w].iter_mut().zip(&self.scratch_up) {
                    *dst |= src;
                }
            }
        }
        true
    }

    /// Number of elements known to be worse than `x`.
    pub fn count_below(&self, x: usize) -> usize {
        self.below[x * self.words..(x + 1) * self.words]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    /// Number of decided unordered pairs.
    pub fn decided_pairs(&self) -> usize {
        (0..self.n).map(|x| self.count_below(x)).sum()
    }

    pub fn is_total(&self) -> bool {
        self.decided_pairs() == self.n * self.n.saturating_sub(1) / 2
    }

    /// The unique order of a total relation, best first.
    pub fn total_order(&self) -> Result<Vec<usize>> {
        let n = self.n;
        let mut slot = vec![usize::MAX; n];
        for x in 0..n {
            if self.before(x, x) {
                return Err(Error::Invariant(format!("element {x} precedes itself")));
            }
            let pos = n - 1 - self.count_below(x);
            if slot[pos] != usize::MAX {
                return Err(Error::Invariant("relation is not a total order".into()));
            }
            slot[pos] = x;
        }
        Ok(slot)
    }

    /// Checks antisymmetry, irreflexivity, transitivity and that `above`
    /// mirrors `below`. Quadratic in `n` words; meant for tests and debug
    /// assertions.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n;
        for a in 0..n {
            if self.before(a, a) {
                return Err(Error::Invariant(format!("cycle through {a}")));
            }
            for b in 0..n {
                let ab = self.before(a, b);
                if ab != Self::bit(&self.above, self.words, b, a) {
                    return Err(Error::Invariant(format!("above/below disagree on ({a},{b})")));
                }
                if ab && self.before(b, a) {
                    return Err(Error::Invariant(format!("({a},{b}) decided both ways")));
                }
                if ab {
                    for c in 0..n {
                        if self.before(b, c) && !self.before(a, c) {
                            return Err(Error::Invariant(format!("not closed on {a}≻{b}≻{c}")));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
