//! Exact outcome distribution of random serial dictatorship on two disjoint
//! `K_{2,2}` copies under perfect grading, against simulation.
//!
//! Elements are true ranks `0 ≻ 1 ≻ 2 ≻ 3`. Each copy holds two elements and
//! both of its bundles rank them correctly, so the serial phase leaves two
//! chains, and the four cross pairs are settled by the completion phase.

use peergrade::aggregate::rsd;
use peergrade::harness::{run_configs, ExperimentConfig, GraphFamily};
use peergrade::{recovered_fraction, GroundTruth, PartialRanking, Profile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;
use common::Moments;

type Rel = [[bool; 4]; 4];

fn closed(mut r: Rel) -> Rel {
    for m in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                if r[a][m] && r[m][b] {
                    r[a][b] = true;
                }
            }
        }
    }
    r
}

/// Expected recovered fraction when the completion phase draws the remaining
/// pairs in uniformly random order and orients each undecided one by a fair
/// coin.
fn expected(r: Rel, remaining: &[(usize, usize)]) -> f64 {
    if remaining.is_empty() {
        let correct = (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).filter(|&(a, b)| r[a][b]).count();
        return correct as f64 / 6.0;
    }
    let mut total = 0.0;
    for i in 0..remaining.len() {
        let mut rest = remaining.to_vec();
        let (a, b) = rest.remove(i);
        if r[a][b] || r[b][a] {
            total += expected(r, &rest);
        } else {
            let mut ab = r;
            ab[a][b] = true;
            let mut ba = r;
            ba[b][a] = true;
            total += 0.5 * expected(closed(ab), &rest) + 0.5 * expected(closed(ba), &rest);
        }
    }
    total / remaining.len() as f64
}

fn oracle(copy_a: (usize, usize), copy_b: (usize, usize)) -> f64 {
    let mut r = [[false; 4]; 4];
    r[copy_a.0][copy_a.1] = true;
    r[copy_b.0][copy_b.1] = true;
    let r = closed(r);
    let open: Vec<(usize, usize)> =
        (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).filter(|&(a, b)| !r[a][b] && !r[b][a]).collect();
    expected(r, &open)
}

fn profile(copy_a: (usize, usize), copy_b: (usize, usize)) -> Profile {
    let (a, b) = (copy_a, copy_b);
    Profile::new(
        4,
        vec![
            PartialRanking::new(b.0, vec![a.0, a.1]).unwrap(),
            PartialRanking::new(b.1, vec![a.0, a.1]).unwrap(),
            PartialRanking::new(a.0, vec![b.0, b.1]).unwrap(),
            PartialRanking::new(a.1, vec![b.0, b.1]).unwrap(),
        ],
    )
    .unwrap()
}

const SPLITS: [((usize, usize), (usize, usize)); 3] = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))];

#[test]
fn oracle_matches_frozen_values() {
    // Frozen from exact rational arithmetic over the same process.
    let frozen = [2.0 / 3.0, 431.0 / 576.0, 431.0 / 576.0];
    for (split, want) in SPLITS.iter().zip(frozen) {
        let got = oracle(split.0, split.1);
        assert!((got - want).abs() < 1e-12, "{split:?}: {got} vs {want}");
    }
    // The cross pairs alone are a fair coin only when one copy holds both
    // top elements.
    assert!((oracle((0, 1), (2, 3)) * 6.0 - 2.0 - 2.0).abs() < 1e-12);
}

#[test]
fn simulation_matches_oracle_per_split() {
    let truth = GroundTruth::identity(4);
    for (i, &(a, b)) in SPLITS.iter().enumerate() {
        let p = profile(a, b);
        let mut m = Moments::default();
        let mut rng = ChaCha8Rng::seed_from_u64(100 + i as u64);
        for _ in 0..100_000 {
            let out = rsd(&p, &mut rng).unwrap();
            m.push(recovered_fraction(&out, &truth).unwrap());
        }
        let want = oracle(a, b);
        assert!((m.mean() - want).abs() < 4.0 * m.std_err(), "{a:?}|{b:?}: {} vs {want} (se {})", m.mean(), m.std_err());
    }
}

#[test]
fn full_pipeline_matches_placement_average() {
    let cfg = ExperimentConfig {
        experiment: "two_copies".into(),
        graph_family: GraphFamily::Kkk,
        n: 4,
        k: 2,
        noise_level: 0.0,
        rules: vec![peergrade::aggregate::Rule::Rsd],
        trials: 30_000,
        master_seed: 11,
        max_attempts: 10,
    };
    let rows = run_configs(&[cfg], 1).unwrap();
    let mut m = Moments::default();
    for r in &rows {
        m.push(r.recovered_fraction.unwrap());
    }
    let want = 623.0 / 864.0;
    assert!((SPLITS.iter().map(|s| oracle(s.0, s.1)).sum::<f64>() / 3.0 - want).abs() < 1e-12);
    assert!((m.mean() - want).abs() < 4.0 * m.std_err(), "{} vs {want} (se {})", m.mean(), m.std_err());
}
