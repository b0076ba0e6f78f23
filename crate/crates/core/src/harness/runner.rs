use log::{debug, info};
use rayon::prelude::*;

use crate::aggregate::{borda, mc4, rsd, Mc4Params, Rule};
use crate::bundles::{assign_with_permutation, girth6_copies, kkk_copies, random_k_regular, random_permutation, BundleGraph};
use crate::error::{Error, Result};
use crate::noise::{noisy_partial_ranking, sample_qualities};
use crate::ranking::{recovered_fraction, Profile};
use crate::seed::{hash64, stream, Stage};

use super::config::{ExperimentConfig, GraphFamily};
use super::csv_io::{ResultRow, Status};

pub fn trial_seed(master_seed: u64, trial_index: usize) -> u64 {
    hash64(master_seed, trial_index as u64)
}

/// The graph shared by every trial of a deterministic family, or `None` for
/// the random family, which is redrawn per trial.
pub fn build_fixed_graph(config: &ExperimentConfig) -> Result<Option<BundleGraph>> {
    match config.graph_family {
        GraphFamily::Random => Ok(None),
        GraphFamily::Girth6 => girth6_copies(config.n, config.k - 1).map(Some),
        GraphFamily::Kkk => kkk_copies(config.n, config.k).map(Some),
    }
}

fn row(config: &ExperimentConfig, rule: Rule, trial_index: usize, seed: u64, fraction: Option<f64>) -> ResultRow {
    ResultRow {
        experiment: config.experiment.clone(),
        graph_family: config.graph_family,
        n: config.n,
        k: config.k,
        noise_level: config.noise_level,
        rule,
        trial_index,
        trial_seed: seed,
        status: if fraction.is_some() { Status::Ok } else { Status::Infeasible },
        recovered_fraction: fraction,
    }
}

/// One execution of the full pipeline, yielding a row per requested rule.
///
/// `fixed_graph` must be the result of [`build_fixed_graph`] for `config`.
pub fn run_trial(
    config: &ExperimentConfig,
    fixed_graph: Option<&BundleGraph>,
    trial_index: usize,
) -> Result<Vec<ResultRow>> {
    let seed = trial_seed(config.master_seed, trial_index);
    let (n, k) = (config.n, config.k);

    let drawn;
    let graph = match fixed_graph {
        Some(g) => g,
        None => {
            drawn = random_k_regular(n, k, &mut stream(seed, Stage::Graph, 0))?;
            &drawn
        }
    };
    if graph.n() != n || graph.k() != k {
        return Err(Error::Config(format!(
            "graph has n={}, k={} but the config asks for n={n}, k={k}",
            graph.n(),
            graph.k()
        )));
    }

    let pi = random_permutation(n, &mut stream(seed, Stage::Permutation, 0));
    let assignment = assign_with_permutation(graph, pi, &mut stream(seed, Stage::Matching, 0))?;
    let (qualities, truth) = sample_qualities(n, config.noise_level, &mut stream(seed, Stage::Qualities, 0))?;

    let mut rankings = Vec::with_capacity(n);
    for v in 0..n {
        let grader = assignment.grader_of(v);
        let elements = assignment.bundle_elements(graph, v);
        let mut rng = stream(seed, Stage::Noise, v as u64);
        match noisy_partial_ranking(grader, &elements, &truth, qualities.quality(grader), &mut rng, config.max_attempts) {
            Ok(r) => rankings.push(r),
            Err(Error::NoiseInfeasible { k, q, attempts }) => {
                debug!("trial {trial_index}: bundle {v} infeasible (k={k}, q={q:.4}, {attempts} attempts)");
                return Ok(config.rules.iter().map(|&rule| row(config, rule, trial_index, seed, None)).collect());
            }
            Err(e) => return Err(e),
        }
    }
    let profile = Profile::new(n, rankings)?;

    config
        .rules
        .iter()
        .map(|&rule| {
            let output = match rule {
                Rule::Borda => borda(&profile, &mut stream(seed, Stage::Borda, 0)),
                Rule::Rsd => rsd(&profile, &mut stream(seed, Stage::Rsd, 0))?,
                Rule::Mc4 => mc4(&profile, &Mc4Params::for_size(n), &mut stream(seed, Stage::Mc4, 0)),
            };
            let f = recovered_fraction(&output, &truth)?;
            Ok(row(config, rule, trial_index, seed, Some(f)))
        })
        .collect()
}

/// Runs every trial of every config on a pool of `threads` workers (0 means
/// the rayon default). Rows come back ordered by config, then trial, then
/// rule, whatever the scheduling.
pub fn run_configs(configs: &[ExperimentConfig], threads: usize) -> Result<Vec<ResultRow>> {
    for c in configs {
        c.validate()?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        let graphs: Vec<Option<BundleGraph>> =
            configs.par_iter().map(build_fixed_graph).collect::<Result<_>>()?;
        let tasks: Vec<(usize, usize)> = configs
            .iter()
            .enumerate()
            .flat_map(|(ci, c)| (0..c.trials).map(move |t| (ci, t)))
            .collect();
        info!("running {} trials over {} cells", tasks.len(), configs.len());
        let per_task: Vec<Vec<ResultRow>> = tasks
            .par_iter()
            .map(|&(ci, t)| run_trial(&configs[ci], graphs[ci].as_ref(), t))
            .collect::<Result<_>>()?;
        Ok(per_task.into_iter().flatten().collect())
    })
}
