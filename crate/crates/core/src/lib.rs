//! Simulation toolkit for ordinal peer grading.
//!
//! Each of `n` students submits one element (an answer or essay) and ranks a bundle of `k`
//! elements written by others. The crate builds the bundle graphs that decide
//! who ranks what, simulates perfect and noisy graders, aggregates the partial
//! rankings with Borda, random serial dictatorship (RSD) and the MC4 Markov
//! chain, and measures how many pairwise relations of the ground truth survive.
//!
//! Module map:
//!
//! | module        | contents                                                   |
//! |---------------|------------------------------------------------------------|
//! | [`ranking`]   | ground truth, partial rankings, profiles, recovered fraction |
//! | [`bundles`]   | bundle graph generators, assignment, λ/θ/η, structure checks |
//! | [`noise`]     | student qualities and the pairwise-flip grader model        |
//! | [`aggregate`] | Borda, RSD, MC4                                            |
//! | [`theory`]    | η bounds, Borda score-difference expectation, recovery bound |
//! | [`harness`]   | experiment configs, presets, trial runner, CSV I/O         |

pub mod aggregate;
pub mod bundles;
pub mod error;
pub mod harness;
mod matching;
pub mod noise;
pub mod ranking;
pub mod seed;
pub mod theory;

pub use error::{Error, Result};
pub use ranking::{recovered_fraction, GroundTruth, PartialRanking, Profile, Ranking};
