use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use peergrade::bundles::{self, BundleGraph};
use peergrade::harness::{self, ConfigFile, GraphFamily, PresetName};
use peergrade::seed::{stream, Stage};
use peergrade::theory;

#[derive(Parser)]
#[command(name = "peergrade", version, about = "Ordinal peer grading simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a bundle graph and write it as a text dump.
    GenGraph {
        #[arg(long)]
        family: GraphFamily,
        #[arg(long)]
        n: usize,
        /// Bundle size; for girth6 it may be omitted in favour of --p.
        #[arg(long)]
        k: Option<usize>,
        /// Projective-plane order for girth6 (k = p + 1).
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the experiments described by a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Run one of the built-in experiment presets.
    Preset {
        #[arg(long)]
        name: PresetName,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Print the structural quantities and recovery bound of a graph.
    CheckTheory {
        #[arg(long)]
        family: GraphFamily,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print per-cell means of a results file.
    Summarize {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

fn build_graph(family: GraphFamily, n: usize, k: usize, seed: u64) -> Result<BundleGraph> {
    Ok(match family {
        GraphFamily::Random => bundles::random_k_regular(n, k, &mut stream(seed, Stage::Graph, 0))?,
        GraphFamily::Girth6 => {
            if k < 2 {
                bail!("girth6 needs k >= 2");
            }
            bundles::girth6_copies(n, k - 1)?
        }
        GraphFamily::Kkk => bundles::kkk_copies(n, k)?,
    })
}

fn write_csv(path: &PathBuf, rows: &[harness::ResultRow]) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    harness::write_rows(BufWriter::new(file), rows)?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenGraph { family, n, k, p, seed, out } => {
            let k = match (family, k, p) {
                (_, Some(k), None) => k,
                (GraphFamily::Girth6, None, Some(p)) => p + 1,
                (GraphFamily::Girth6, Some(k), Some(p)) if k == p + 1 => k,
                (GraphFamily::Girth6, Some(k), Some(p)) => bail!("--k {k} contradicts --p {p}"),
                (_, _, Some(_)) => bail!("--p only applies to the girth6 family"),
                (_, None, None) => bail!("--k is required"),
            };
            let graph = build_graph(family, n, k, seed)?;
            let file = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            let mut w = BufWriter::new(file);
            graph.write_dump(&mut w)?;
            w.flush()?;
        }
        Command::Run { config, out, threads } => {
            let text = std::fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let configs = ConfigFile::parse(&text)?.into_configs()?;
            let rows = harness::run_configs(&configs, threads)?;
            write_csv(&out, &rows)?;
        }
        Command::Preset { name, seed, out, threads } => {
            let rows = harness::run_configs(&harness::preset(name, seed), threads)?;
            write_csv(&out, &rows)?;
        }
        Command::CheckTheory { family, n, k, seed } => {
            let graph = build_graph(family, n, k, seed)?;
            let report = theory::check_eta_bounds(&graph);
            println!("family            {family}");
            println!("n, k              {}, {}", report.n, report.k);
            println!("order revealing   {}", bundles::is_order_revealing(&graph));
            println!("girth >= 6        {}", report.girth6_bound.is_some());
            println!("eta               {:.6}", report.eta);
            println!("general bound     {:.6}", report.general_bound);
            match report.girth6_bound {
                Some(b) => println!("girth-6 bound     {b:.6}"),
                None => println!("girth-6 bound     n/a"),
            }
            println!("max theta         {} (ceiling {})", report.max_theta, report.theta_ceiling);
            println!("lambda row sums   {}", if report.lambda_sums_ok { "ok" } else { "FAILED" });
            match theory::recovery_bound_raw(k, report.eta) {
                Ok(raw) => println!("borda guarantee   {:.4} (raw {raw:.4})", raw.max(0.0)),
                Err(_) => println!("borda guarantee   undefined for k < 3"),
            }
            if !report.passed() {
                bail!("structural bounds violated");
            }
        }
        Command::Summarize { input } => {
            let file = File::open(&input).with_context(|| format!("opening {}", input.display()))?;
            let rows = harness::read_rows(file)?;
            if rows.is_empty() {
                bail!("{} contains no result rows", input.display());
            }
            print!("{}", harness::render(&harness::summarize(&rows)));
        }
    }
    Ok(())
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
