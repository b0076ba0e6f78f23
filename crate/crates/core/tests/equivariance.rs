//! Relabelling the elements must relabel every rule's output consistently.

use peergrade::aggregate::{borda_scores, mc4_stationary, rsd, Mc4Params, TransitionMatrix};
use peergrade::bundles::{assign, random_k_regular};
use peergrade::noise::{noisy_partial_ranking, sample_qualities};
use peergrade::{recovered_fraction, GroundTruth, PartialRanking, Profile, Ranking};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn noisy_profile(n: usize, k: usize, noise: f64, seed: u64) -> Profile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_k_regular(n, k, &mut rng).unwrap();
    let a = assign(&g, &mut rng).unwrap();
    let (qual, truth) = sample_qualities(n, noise, &mut rng).unwrap();
    let rankings = (0..n)
        .map(|v| {
            let grader = a.grader_of(v);
            noisy_partial_ranking(grader, &a.bundle_elements(&g, v), &truth, qual.quality(grader), &mut rng, 1_000_000)
                .unwrap()
        })
        .collect();
    Profile::new(n, rankings).unwrap()
}

/// Renames element `e` to `sigma[e]` everywhere, graders included.
fn relabel(p: &Profile, sigma: &[usize]) -> Profile {
    let rankings = p
        .rankings()
        .iter()
        .map(|r| PartialRanking::new(sigma[r.grader()], r.elements().iter().map(|&e| sigma[e]).collect()).unwrap())
        .collect();
    Profile::new(p.n(), rankings).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn borda_scores_follow_labels(seed in 0u64..1000, k in 2usize..6) {
        let n = 30;
        let p = noisy_profile(n, k, 0.4, seed);
        let mut sigma: Vec<usize> = (0..n).collect();
        sigma.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 0x55));
        let q = relabel(&p, &sigma);
        let (a, b) = (borda_scores(&p), borda_scores(&q));
        for e in 0..n {
            prop_assert_eq!(a.score(e), b.score(sigma[e]));
        }
    }

    #[test]
    fn markov_chain_follows_labels(seed in 0u64..1000, k in 2usize..6) {
        let n = 30;
        let p = noisy_profile(n, k, 0.4, seed);
        let mut sigma: Vec<usize> = (0..n).collect();
        sigma.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 0xAA));
        let q = relabel(&p, &sigma);
        let params = Mc4Params::for_size(n);
        let x = mc4_stationary(&TransitionMatrix::from_profile(&p), &params);
        let y = mc4_stationary(&TransitionMatrix::from_profile(&q), &params);
        for e in 0..n {
            prop_assert!((x[e] - y[sigma[e]]).abs() < 1e-12);
        }
    }

    #[test]
    fn metric_is_invariant_under_joint_relabelling(seed in 0u64..1000) {
        let n = 40;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut truth: Vec<usize> = (0..n).collect();
        truth.shuffle(&mut rng);
        let mut out: Vec<usize> = (0..n).collect();
        out.shuffle(&mut rng);
        let mut sigma: Vec<usize> = (0..n).collect();
        sigma.shuffle(&mut rng);
        let f = recovered_fraction(&Ranking::new(out.clone()).unwrap(), &GroundTruth::from_order(truth.clone()).unwrap()).unwrap();
        let out2: Vec<usize> = out.iter().map(|&e| sigma[e]).collect();
        let truth2: Vec<usize> = truth.iter().map(|&e| sigma[e]).collect();
        let g = recovered_fraction(&Ranking::new(out2).unwrap(), &GroundTruth::from_order(truth2).unwrap()).unwrap();
        prop_assert!((f - g).abs() < 1e-15);
    }

    #[test]
    fn rsd_respects_every_bundle_under_perfect_grading(seed in 0u64..1000) {
        // With perfect grading there is nothing to reject, so every accepted
        // pair agrees with the truth and the output respects each bundle.
        let n = 30;
        let p = noisy_profile(n, 4, 0.0, seed);
        let out = rsd(&p, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let mut pos = vec![0; n];
        for (i, &e) in out.order().iter().enumerate() {
            pos[e] = i;
        }
        for r in p.rankings() {
            for w in r.elements().windows(2) {
                prop_assert!(pos[w[0]] < pos[w[1]]);
            }
        }
    }
}
