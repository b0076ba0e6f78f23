//! Random serial dictatorship.
//!
//! Serial phase: the partial rankings are visited in random order and every
//! pair they imply (positions (1,2), (1,3), …, (2,3), …) is copied unless it
//! contradicts what was accepted earlier. Completion phase: a uniformly random
//! undecided pair is oriented by a fair coin, repeatedly, until the order is
//! total.
//!
//! [`RelationState`] keeps the accepted pairs transitively closed at every
//! step. Reachability in the closure equals reachability over the raw accepted
//! pairs, so the serial-phase cycle test sees exactly what a DFS over raw
//! pairs would see, and the closure taken after the serial phase is already
//! in place.

use rand::seq::SliceRandom;
use rand::Rng;

use super::closure::RelationState;
use crate::error::{Error, Result};
use crate::ranking::{Profile, Ranking};

pub fn rsd<R: Rng + ?Sized>(profile: &Profile, rng: &mut R) -> Result<Ranking> {
    let n = profile.n();
    let mut state = RelationState::new(n);

    let mut visit: Vec<usize> = (0..profile.rankings().len()).collect();
    visit.shuffle(rng);
    for idx in visit {
        let elems = profile.rankings()[idx].elements();
        for i in 0..elems.len() {
            for j in i + 1..elems.len() {
                state.insert(elems[i], elems[j]);
            }
        }
    }
    #[cfg(debug_assertions)]
    if n <= 64 {
        state.check_invariants()?;
    }

    let mut undecided: Vec<(usize, usize)> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if !state.decided(a, b) {
                undecided.push((a, b));
            }
        }
    }
    while !undecided.is_empty() {
        let i = rng.gen_range(0..undecided.len());
        let (a, b) = undecided.swap_remove(i);
        if state.decided(a, b) {
            continue;
        }
        let ok = if rng.gen::<bool>() { state.insert(a, b) } else { state.insert(b, a) };
        if !ok {
            return Err(Error::Invariant(format!("undecided pair ({a},{b}) was already implied")));
        }
    }
    Ranking::new(state.total_order()?)
}
