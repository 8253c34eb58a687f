use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mls::density::{evaluate_field, FieldMetadata, KernelEstimator};
use mls::experiment::{
    format_diagnostics, list_presets, parse_config, preset, run_with, validate_config,
    write_outputs, write_points_csv, write_results_csv, ExperimentConfig, Setting,
};
use mls::geometry::EvaluationGrid;
use mls::samplers::replication_seed;
use mls::setops::level_set;

/// Level-set estimation and r-convex hulls on manifolds: sampling, kernel
/// estimates, set distances and replicated experiments.
#[derive(Parser)]
#[command(name = "mls", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct Common {
    /// JSON experiment config.
    #[arg(long, env = "MLS_CONFIG")]
    config: Option<PathBuf>,
    /// Shipped preset name (see `mls presets`).
    #[arg(long, env = "MLS_PRESET")]
    preset: Option<String>,
    /// Base seed, overriding the config.
    #[arg(long, env = "MLS_SEED")]
    seed: Option<u64>,
    /// Output directory [default: config `output`, else out/<name>].
    #[arg(long, env = "MLS_OUT")]
    out: Option<PathBuf>,
    /// Number of replications, overriding the config.
    #[arg(long, env = "MLS_REPLICATIONS")]
    replications: Option<usize>,
    /// Worker threads [default: all cores].
    #[arg(long, env = "MLS_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one sample and write it with a metadata sidecar.
    Sample(Common),
    /// Evaluate the kernel estimate on the grid.
    Estimate(Common),
    /// Write estimated and true level sets as grid index lists.
    Levelset(Common),
    /// Run a single replication and report its distances.
    Distance(Common),
    /// r-convex hull of the sample points above the level.
    Hull(Common),
    /// Run all replications and write results and plot data.
    Experiment(Common),
    /// List shipped presets, or print one as JSON.
    Presets {
        #[arg(long)]
        show: Option<String>,
    },
    /// Check a config and report every problem.
    Validate(Common),
}

enum Failure {
    Validation(String),
    Runtime(String),
}

impl From<mls::Error> for Failure {
    fn from(e: mls::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn load(common: &Common) -> Result<ExperimentConfig, Failure> {
    let mut config = match (&common.config, &common.preset) {
        (Some(_), Some(_)) => {
            return Err(Failure::Validation(
                "give either --config or --preset, not both".into(),
            ))
        }
        (Some(path), None) => validate_config(path)
            .map_err(|d| Failure::Validation(format_diagnostics(&d)))?,
        (None, Some(name)) => preset(name)
            .ok_or_else(|| Failure::Validation(format!("unknown preset {name:?}")))?,
        (None, None) => {
            return Err(Failure::Validation(
                "one of --config or --preset is required".into(),
            ))
        }
    };
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(r) = common.replications {
        config.replications = r;
    }
    // overrides are validated like the file itself
    let text = serde_json::to_string(&config).map_err(|e| Failure::Runtime(e.to_string()))?;
    let config = parse_config(&text).map_err(|d| Failure::Validation(format_diagnostics(&d)))?;
    for note in config.notes() {
        eprintln!("note: {note}");
    }
    if let Some(n) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    Ok(config)
}

fn out_dir(common: &Common, config: &ExperimentConfig) -> Result<PathBuf, Failure> {
    let dir = common
        .out
        .clone()
        .or_else(|| config.output.clone())
        .unwrap_or_else(|| Path::new("out").join(&config.name));
    std::fs::create_dir_all(&dir)
        .map_err(|e| Failure::Runtime(format!("{}: {e}", dir.display())))?;
    Ok(dir)
}

fn build_grid(config: &ExperimentConfig) -> Result<EvaluationGrid, Failure> {
    Ok(EvaluationGrid::build(&config.manifold, &config.grid)?)
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn cmd_sample(common: &Common) -> Outcome {
    let config = load(common)?;
    let dir = out_dir(common, &config)?;
    let grid = build_grid(&config)?;
    let setting = Setting::new(&config, &grid)?;
    let sample = setting.sample(replication_seed(config.seed, 0))?;
    let csv = dir.join("samples.csv");
    let json = dir.join("samples.json");
    sample.write_csv(&csv)?;
    sample.write_metadata_json(&json)?;
    report(&[csv, json]);
    Ok(())
}

fn cmd_estimate(common: &Common) -> Outcome {
    let config = load(common)?;
    let dir = out_dir(common, &config)?;
    let grid = build_grid(&config)?;
    let setting = Setting::new(&config, &grid)?;
    let seed = replication_seed(config.seed, 0);
    let sample = setting.sample(seed)?;
    let h = setting.bandwidth(sample.points())?;
    let field = evaluate_field(sample.points(), h, &grid, config.estimator)?;
    let paths = [dir.join("grid.csv"), dir.join("field.csv"), dir.join("field.json"), dir.join("truth.csv")];
    grid.write_csv(&paths[0])?;
    field.write_csv(&paths[1])?;
    FieldMetadata {
        estimator: config.estimator.into(),
        h: Some(h.get()),
        n: Some(config.n),
        seed: Some(seed),
        manifold: config.manifold,
        grid_points: grid.len(),
    }
    .write_json(&paths[2])?;
    setting.true_field.write_csv(&paths[3])?;
    println!("h = {}, max estimate = {}, max truth = {}", h.get(), field.max(), setting.true_field.max());
    report(&paths);
    Ok(())
}

fn cmd_levelset(common: &Common) -> Outcome {
    let config = load(common)?;
    let dir = out_dir(common, &config)?;
    let grid = build_grid(&config)?;
    let setting = Setting::new(&config, &grid)?;
    let sample = setting.sample(replication_seed(config.seed, 0))?;
    let h = setting.bandwidth(sample.points())?;
    let field = evaluate_field(sample.points(), h, &grid, config.estimator)?;
    let estimated = level_set(&field, config.level)?;
    let paths = [dir.join("levelset_estimated.csv"), dir.join("levelset_true.csv")];
    estimated.write_indices_csv(&paths[0])?;
    setting.true_set.write_indices_csv(&paths[1])?;
    println!(
        "estimated {} / true {} of {} grid points",
        estimated.count(),
        setting.true_set.count(),
        grid.len()
    );
    report(&paths);
    Ok(())
}

fn cmd_distance(common: &Common) -> Outcome {
    let mut config = load(common)?;
    config.replications = 1;
    let dir = out_dir(common, &config)?;
    let grid = build_grid(&config)?;
    let setting = Setting::new(&config, &grid)?;
    let result = run_with(&setting)?;
    let row = &result.rows[0];
    println!(
        "d_H = {}, d_mu = {}, sup_error = {}, seconds = {:.3}",
        row.d_h, row.d_mu, row.sup_error, row.seconds
    );
    let path = dir.join("results.csv");
    write_results_csv(&result, &path)?;
    report(&[path]);
    Ok(())
}

fn cmd_hull(common: &Common) -> Outcome {
    let config = load(common)?;
    if config.hull_radius.is_none() {
        return Err(Failure::Validation("hull_radius: required by the hull command".into()));
    }
    let dir = out_dir(common, &config)?;
    let grid = build_grid(&config)?;
    let setting = Setting::new(&config, &grid)?;
    let sample = setting.sample(replication_seed(config.seed, 0))?;
    let h = setting.bandwidth(sample.points())?;
    let kde = KernelEstimator::new(sample.points(), h, config.manifold)?;
    let hull = setting.hull(&kde, sample.points())?;
    let paths = [dir.join("hull.csv"), dir.join("hull_indices.csv")];
    write_points_csv(&hull.points(&grid)?.points, config.projection.as_ref(), &paths[0])?;
    hull.write_indices_csv(&paths[1])?;
    println!("hull covers {} of {} grid points", hull.count(), grid.len());
    report(&paths);
    Ok(())
}

fn cmd_experiment(common: &Common) -> Outcome {
    let config = load(common)?;
    let dir = out_dir(common, &config)?;
    let grid = build_grid(&config)?;
    let setting = Setting::new(&config, &grid)?;
    let result = run_with(&setting)?;
    for row in result.rows.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "replication {} failed: {}",
            row.replication,
            row.error.as_deref().unwrap_or("")
        );
    }
    println!(
        "{}: {} replications, {} failed; d_H {:.4} +- {:.4}, d_mu {:.4} +- {:.4}, sup_error {:.4} +- {:.4}",
        config.name,
        result.rows.len(),
        result.failed,
        result.d_h.mean,
        result.d_h.sd,
        result.d_mu.mean,
        result.d_mu.sd,
        result.sup_error.mean,
        result.sup_error.sd
    );
    report(&write_outputs(&result, &dir)?);
    Ok(())
}

fn cmd_presets(show: Option<&str>) -> Outcome {
    match show {
        Some(name) => {
            let config = preset(name)
                .ok_or_else(|| Failure::Validation(format!("unknown preset {name:?}")))?;
            let text = serde_json::to_string_pretty(&config)
                .map_err(|e| Failure::Runtime(e.to_string()))?;
            println!("{text}");
        }
        None => {
            for (name, about) in list_presets() {
                println!("{name:<24} {about}");
            }
        }
    }
    Ok(())
}

fn cmd_validate(common: &Common) -> Outcome {
    let config = load(common)?;
    println!("{}: ok", config.name);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Sample(c) => cmd_sample(c),
        Command::Estimate(c) => cmd_estimate(c),
        Command::Levelset(c) => cmd_levelset(c),
        Command::Distance(c) => cmd_distance(c),
        Command::Hull(c) => cmd_hull(c),
        Command::Experiment(c) => cmd_experiment(c),
        Command::Presets { show } => cmd_presets(show.as_deref()),
        Command::Validate(c) => cmd_validate(c),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("invalid configuration:\n{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
