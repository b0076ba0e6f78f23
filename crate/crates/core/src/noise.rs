//! Student qualities and the pairwise-flip grader model.
//!
//! A grader of quality `q` orients each pair of their bundle correctly with
//! probability `q` and flips it otherwise, independently. Cyclic outcomes are
//! thrown away and the whole bundle is redrawn. Conditioned on acceptance this
//! is a Mallows distribution, but it is sampled by plain rejection so that
//! the cost blows up exactly where it should (large `k`, low `q`).

use rand::Rng;

use crate::error::{Error, Result};
use crate::ranking::{ElementId, GroundTruth, PartialRanking};

/// Default number of full redraws per bundle before giving up.
pub const DEFAULT_MAX_ATTEMPTS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct QualityProfile {
    qualities: Vec<f64>,
    noise_level: f64,
}

impl QualityProfile {
    pub fn quality(&self, student: usize) -> f64 {
        self.qualities[student]
    }

    pub fn qualities(&self) -> &[f64] {
        &self.qualities
    }

    pub fn noise_level(&self) -> f64 {
        self.noise_level
    }
}

/// Qualities i.i.d. uniform on `[1 - noise_level, 1]`; the ground truth sorts
/// elements by decreasing quality of their author, ties by ascending id.
pub fn sample_qualities<R: Rng + ?Sized>(
    n: usize,
    noise_level: f64,
    rng: &mut R,
) -> Result<(QualityProfile, GroundTruth)> {
    if !(0.0..=1.0).contains(&noise_level) {
        return Err(Error::InvalidParameter(format!("noise level {noise_level} outside [0, 1]")));
    }
    let qualities: Vec<f64> = (0..n)
        .map(|_| 1.0 - noise_level * rng.gen::<f64>())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| qualities[b].total_cmp(&qualities[a]).then(a.cmp(&b)));
    let truth = GroundTruth::from_order(order)?;
    Ok((QualityProfile { qualities, noise_level }, truth))
}

/// An accepted noisy order together with how many draws it took.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoisyOrder {
    pub order: Vec<ElementId>,
    pub attempts: u64,
}

/// Rejection-samples an acyclic tournament on `elements` and returns the
/// order it induces, best first.
///
/// Elements are added in true order; each newcomer is truly worse than all
/// earlier ones. The partial tournament stays acyclic iff the set the newcomer
/// beats is exactly a bottom segment of the current order, so an attempt is
/// abandoned as soon as that fails. Abandoned attempts would have ended cyclic
/// anyway, so the accepted distribution is unchanged.
pub fn sample_noisy_order<R: Rng + ?Sized>(
    elements: &[ElementId],
    truth: &GroundTruth,
    q: f64,
    rng: &mut R,
    max_attempts: u64,
) -> Result<NoisyOrder> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidParameter(format!("quality {q} outside [0, 1]")));
    }
    let k = elements.len();
    let mut by_truth = elements.to_vec();
    by_truth.sort_by_key(|&e| truth.rank_of(e));

    // `order` holds indices into `by_truth`, best first.
    let mut order: Vec<usize> = Vec::with_capacity(k);
    for attempt in 1..=max_attempts {
        order.clear();
        if try_build(k, q, rng, &mut order) {
            return Ok(NoisyOrder {
                order: order.iter().map(|&i| by_truth[i]).collect(),
                attempts: attempt,
            });
        }
    }
    Err(Error::NoiseInfeasible { k, q, attempts: max_attempts })
}

fn try_build<R: Rng + ?Sized>(k: usize, q: f64, rng: &mut R, order: &mut Vec<usize>) -> bool {
    for m in 0..k {
        // Walk the current order best to worst. Flipped coins (newcomer wins)
        // must form a suffix.
        let mut insert_at = m;
        for pos in 0..m {
            let correct = rng.gen::<f64>() < q;
            if correct {
                if insert_at < m {
                    return false;
                }
            } else if insert_at == m {
                insert_at = pos;
            }
        }
        order.insert(insert_at, m);
    }
    true
}

/// One grader's noisy ranking of their bundle.
pub fn noisy_partial_ranking<R: Rng + ?Sized>(
    grader: usize,
    bundle_elements: &[ElementId],
    truth: &GroundTruth,
    q: f64,
    rng: &mut R,
    max_attempts: u64,
) -> Result<PartialRanking> {
    let sample = sample_noisy_order(bundle_elements, truth, q, rng, max_attempts)?;
    PartialRanking::new(grader, sample.order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    use std::collections::HashMap;

    fn discordant(order: &[usize], truth: &GroundTruth) -> usize {
        let mut d = 0;
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                if truth.prefers(order[j], order[i]) {
                    d += 1;
                }
            }
        }
        d
    }

    #[test]
    fn zero_noise_gives_unit_qualities_and_id_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (qp, truth) = sample_qualities(50, 0.0, &mut rng).unwrap();
        assert!(qp.qualities().iter().all(|&q| q == 1.0));
        assert_eq!(truth.order(), (0..50).collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn qualities_stay_in_interval_and_truth_sorted() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (qp, truth) = sample_qualities(2000, 0.3, &mut rng).unwrap();
        assert!(qp.qualities().iter().all(|&q| (0.7..=1.0).contains(&q)));
        for w in truth.order().windows(2) {
            assert!(qp.quality(w[0]) >= qp.quality(w[1]));
        }
        assert!(sample_qualities(3, 1.5, &mut rng).is_err());
    }

    #[test]
    fn mean_quality_at_half_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (qp, _) = sample_qualities(100_000, 0.5, &mut rng).unwrap();
        let mean = qp.qualities().iter().sum::<f64>() / 1e5;
        assert!((mean - 0.75).abs() < 0.005, "mean {mean}");
    }

    #[test]
    fn perfect_grader_never_resamples() {
        let truth = GroundTruth::from_order(vec![4, 2, 0, 3, 1, 5, 7, 6, 9, 8, 11, 10]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 1..=12 {
            let bundle: Vec<usize> = (0..k).rev().collect();
            let s = sample_noisy_order(&bundle, &truth, 1.0, &mut rng, 1).unwrap();
            assert_eq!(s.attempts, 1);
            for w in s.order.windows(2) {
                assert!(truth.prefers(w[0], w[1]));
            }
        }
    }

    #[test]
    fn worst_grader_reverses() {
        let truth = GroundTruth::identity(10);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = sample_noisy_order(&[3, 7, 1, 9, 5], &truth, 0.0, &mut rng, 1).unwrap();
        assert_eq!(s.order, vec![9, 7, 5, 3, 1]);
        assert_eq!(s.attempts, 1);
    }

    #[test]
    fn coin_flip_grader_is_uniform_over_orders() {
        let truth = GroundTruth::identity(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let samples = 60_000;
        let mut counts: HashMap<Vec<usize>, u32> = HashMap::new();
        for _ in 0..samples {
            let s = sample_noisy_order(&[0, 1, 2], &truth, 0.5, &mut rng, 1000).unwrap();
            *counts.entry(s.order).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        let expected = samples as f64 / 6.0;
        let chi2: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        let p = 1.0 - ChiSquared::new(5.0).unwrap().cdf(chi2);
        assert!(p > 0.001, "chi2={chi2}, p={p}");
    }

    #[test]
    fn accepted_orders_follow_mallows_weights() {
        // P(order) ∝ ((1-q)/q)^{discordant pairs}; exact for k = 3.
        let truth = GroundTruth::identity(3);
        let q = 0.7;
        let phi: f64 = (1.0 - q) / q;
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let samples = 120_000;
        let mut by_d = [0u32; 4];
        for _ in 0..samples {
            let s = sample_noisy_order(&[0, 1, 2], &truth, q, &mut rng, 1000).unwrap();
            by_d[discordant(&s.order, &truth)] += 1;
        }
        // orders with 0,1,2,3 inversions: 1,2,2,1
        let w = [1.0, 2.0 * phi, 2.0 * phi * phi, phi.powi(3)];
        let z: f64 = w.iter().sum();
        let mut chi2 = 0.0;
        for d in 0..4 {
            let e = samples as f64 * w[d] / z;
            chi2 += (by_d[d] as f64 - e).powi(2) / e;
        }
        let p = 1.0 - ChiSquared::new(3.0).unwrap().cdf(chi2);
        assert!(p > 0.001, "chi2={chi2}, p={p}");
    }

    #[test]
    fn discordance_decreases_with_quality() {
        let truth = GroundTruth::identity(5);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut last = f64::INFINITY;
        for step in 0..=5 {
            let q = 0.5 + 0.1 * step as f64;
            let total: usize = (0..20_000)
                .map(|_| {
                    let s = sample_noisy_order(&[0, 1, 2, 3, 4], &truth, q, &mut rng, 100_000).unwrap();
                    discordant(&s.order, &truth)
                })
                .sum();
            let mean = total as f64 / 20_000.0;
            assert!(mean <= last + 1e-9, "q={q}: {mean} > {last}");
            last = mean;
        }
        assert_eq!(last, 0.0);
    }

    #[test]
    fn infeasible_cell_is_reported() {
        let truth = GroundTruth::identity(12);
        let bundle: Vec<usize> = (0..12).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let err = sample_noisy_order(&bundle, &truth, 0.5, &mut rng, 10_000).unwrap_err();
        assert!(matches!(err, Error::NoiseInfeasible { k: 12, attempts: 10_000, .. }));
    }

    #[test]
    fn output_is_permutation_of_input() {
        let truth = GroundTruth::from_order((0..20).rev().collect()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let bundle = [13, 2, 8, 19, 0, 5];
            let r = noisy_partial_ranking(4, &bundle, &truth, 0.75, &mut rng, 100_000).unwrap();
            let mut got = r.elements().to_vec();
            got.sort_unstable();
            assert_eq!(got, vec![0, 2, 5, 8, 13, 19]);
        }
    }
}
