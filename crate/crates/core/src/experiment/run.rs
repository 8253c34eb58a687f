use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{DistanceConvention, ExperimentConfig};
use crate::density::{default_bandwidth, evaluate_field, Bandwidth, DensityField, KernelEstimator};
use crate::error::{Error, Result};
use crate::geometry::{AmbientPoint, EvaluationGrid};
use crate::samplers::{replication_seed, sample, SamplePointSet};
use crate::setops::{
    boundary_of, distance_in_measure, grid_geodesic, hausdorff_ambient, level_set, r_convex_hull,
    sample_filter, FinitePointSet, GridGeodesic, GridSubset,
};
use crate::truth::TargetDensity;

/// Everything shared by the replications of one experiment.
pub struct Setting<'g> {
    pub config: ExperimentConfig,
    pub grid: &'g EvaluationGrid,
    pub truth: TargetDensity,
    pub true_field: DensityField,
    pub true_set: GridSubset,
    geodesic: Option<Box<dyn GridGeodesic + 'g>>,
}

impl<'g> Setting<'g> {
    pub fn new(config: &ExperimentConfig, grid: &'g EvaluationGrid) -> Result<Self> {
        let problems = config.diagnostics();
        if !problems.is_empty() {
            let text: Vec<String> = problems.iter().map(|d| d.to_string()).collect();
            return Err(Error::Config(text.join("; ")));
        }
        let truth = TargetDensity::new(&config.law, &config.manifold)?;
        let true_field = truth.field(grid)?;
        let true_set = level_set(&true_field, config.level)?;
        let geodesic = match config.hull_radius {
            Some(_) => Some(grid_geodesic(grid, config.graph_neighbors)?),
            None => None,
        };
        Ok(Setting {
            config: config.clone(),
            grid,
            truth,
            true_field,
            true_set,
            geodesic,
        })
    }

    /// Points as measured by the distance convention: projected to the plane
    /// when a projection is configured.
    pub fn measured(&self, points: Vec<AmbientPoint>) -> Result<FinitePointSet> {
        match &self.config.projection {
            Some(p) => Ok(FinitePointSet::from_planar(&p.project_all(&points)?)),
            None => Ok(FinitePointSet::new(points)),
        }
    }

    pub fn sample(&self, seed: u64) -> Result<SamplePointSet> {
        sample(&self.config.law, &self.config.manifold, self.config.n, seed)
    }

    pub fn bandwidth(&self, sample: &[AmbientPoint]) -> Result<Bandwidth> {
        match self.config.bandwidth {
            Some(h) => Bandwidth::new(h),
            None => default_bandwidth(sample, self.config.manifold.intrinsic_dim()),
        }
    }

    /// r-convex hull of the sample points where the estimate exceeds the level.
    pub fn hull(&self, kde: &KernelEstimator, sample: &[AmbientPoint]) -> Result<GridSubset> {
        let (Some(r), Some(metric)) = (self.config.hull_radius, self.geodesic.as_deref()) else {
            return Err(Error::Config("hull_radius is not set".into()));
        };
        let estimator = self.config.estimator;
        let kept = sample_filter(sample, |x| kde.evaluate(x, estimator), self.config.level)?;
        r_convex_hull(&kept, metric, r)
    }

    fn points_of(&self, set: &GridSubset) -> Result<Vec<AmbientPoint>> {
        Ok(set.points(self.grid)?.points)
    }
}

/// Per-replication outcome; failed replications carry `NaN` values and the error.
#[derive(Debug, Clone, Serialize)]
pub struct ReplicationRow {
    pub replication: usize,
    pub seed: u64,
    pub d_h: f64,
    pub d_mu: f64,
    pub sup_error: f64,
    pub seconds: f64,
    pub error: Option<String>,
}

/// Point sets of one replication, for plotting.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub replication: usize,
    pub seed: u64,
    pub samples: Vec<AmbientPoint>,
    pub true_boundary: Vec<AmbientPoint>,
    pub estimated_boundary: Vec<AmbientPoint>,
    pub hull: Option<Vec<AmbientPoint>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub sd: f64,
}

impl Summary {
    /// Mean and sample standard deviation, in input order.
    pub fn of(values: &[f64]) -> Summary {
        let n = values.len();
        if n == 0 {
            return Summary {
                mean: f64::NAN,
                sd: f64::NAN,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let sd = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Summary { mean, sd }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub rows: Vec<ReplicationRow>,
    pub d_h: Summary,
    pub d_mu: Summary,
    pub sup_error: Summary,
    pub failed: usize,
    pub artifacts: Option<Artifacts>,
}

struct Measured {
    d_h: f64,
    d_mu: f64,
    sup_error: f64,
    artifacts: Option<Artifacts>,
}

fn replicate(setting: &Setting<'_>, index: usize, keep: bool) -> Result<Measured> {
    let config = &setting.config;
    let seed = replication_seed(config.seed, index as u64);
    let sample = setting.sample(seed)?;
    let h = setting.bandwidth(sample.points())?;
    let field = evaluate_field(sample.points(), h, setting.grid, config.estimator)?;
    let est_set = level_set(&field, config.level)?;
    let full = GridSubset::full(setting.grid);
    let sup_error = crate::density::sup_error(&field, &setting.true_field, &full)?;

    let needs_kde = config.distance == DistanceConvention::HullVsLevelset
        || (keep && config.hull_radius.is_some());
    let hull = if needs_kde {
        let kde = KernelEstimator::new(sample.points(), h, config.manifold)?;
        Some(setting.hull(&kde, sample.points())?)
    } else {
        None
    };

    let (d_h, d_mu) = match config.distance {
        DistanceConvention::Regions => (
            hausdorff_ambient(
                &setting.measured(setting.points_of(&est_set)?)?,
                &setting.measured(setting.points_of(&setting.true_set)?)?,
            )?,
            distance_in_measure(&est_set, &setting.true_set, setting.grid)?,
        ),
        DistanceConvention::Boundaries => {
            let est_b = boundary_of(&est_set, setting.grid)?;
            let true_b = boundary_of(&setting.true_set, setting.grid)?;
            (
                hausdorff_ambient(
                    &setting.measured(setting.points_of(&est_b)?)?,
                    &setting.measured(setting.points_of(&true_b)?)?,
                )?,
                distance_in_measure(&est_set, &setting.true_set, setting.grid)?,
            )
        }
        DistanceConvention::HullVsLevelset => {
            let hull = hull.as_ref().ok_or(Error::EmptySet)?;
            (
                hausdorff_ambient(
                    &setting.measured(setting.points_of(hull)?)?,
                    &setting.measured(setting.points_of(&setting.true_set)?)?,
                )?,
                distance_in_measure(hull, &setting.true_set, setting.grid)?,
            )
        }
    };

    let artifacts = if keep {
        Some(Artifacts {
            replication: index,
            seed,
            true_boundary: setting.points_of(&boundary_of(&setting.true_set, setting.grid)?)?,
            estimated_boundary: setting.points_of(&boundary_of(&est_set, setting.grid)?)?,
            hull: match &hull {
                Some(hl) => Some(setting.points_of(hl)?),
                None => None,
            },
            samples: sample.into_points(),
        })
    } else {
        None
    };
    Ok(Measured {
        d_h,
        d_mu,
        sup_error,
        artifacts,
    })
}

/// Runs every replication, in parallel over replications, and aggregates.
///
/// Rows are ordered by replication index. Plot artifacts come from the first
/// replication that succeeds. More than half the replications failing fails
/// the run.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let grid = EvaluationGrid::build(&config.manifold, &config.grid)?;
    let setting = Setting::new(config, &grid)?;
    run_with(&setting)
}

pub fn run_with(setting: &Setting<'_>) -> Result<ExperimentResult> {
    let config = &setting.config;
    let outcomes: Vec<(ReplicationRow, Option<Artifacts>)> = (0..config.replications)
        .into_par_iter()
        .map(|i| {
            let start = Instant::now();
            let seed = replication_seed(config.seed, i as u64);
            let outcome = replicate(setting, i, i == 0);
            let seconds = start.elapsed().as_secs_f64();
            match outcome {
                Ok(m) => (
                    ReplicationRow {
                        replication: i,
                        seed,
                        d_h: m.d_h,
                        d_mu: m.d_mu,
                        sup_error: m.sup_error,
                        seconds,
                        error: None,
                    },
                    m.artifacts,
                ),
                Err(e) => (
                    ReplicationRow {
                        replication: i,
                        seed,
                        d_h: f64::NAN,
                        d_mu: f64::NAN,
                        sup_error: f64::NAN,
                        seconds,
                        error: Some(e.to_string()),
                    },
                    None,
                ),
            }
        })
        .collect();

    let mut rows = Vec::with_capacity(outcomes.len());
    let mut artifacts = None;
    for (row, a) in outcomes {
        if a.is_some() {
            artifacts = a;
        }
        rows.push(row);
    }
    let ok: Vec<&ReplicationRow> = rows.iter().filter(|r| r.error.is_none()).collect();
    let failed = rows.len() - ok.len();
    if 2 * failed > rows.len() {
        let first = rows
            .iter()
            .find_map(|r| r.error.clone())
            .unwrap_or_default();
        return Err(Error::RunFailed {
            failed,
            total: rows.len(),
            first,
        });
    }
    if artifacts.is_none() {
        if let Some(first_ok) = ok.first() {
            artifacts = replicate(setting, first_ok.replication, true)?.artifacts;
        }
    }
    let collect = |f: fn(&ReplicationRow) -> f64| ok.iter().map(|r| f(r)).collect::<Vec<f64>>();
    Ok(ExperimentResult {
        config: config.clone(),
        d_h: Summary::of(&collect(|r| r.d_h)),
        d_mu: Summary::of(&collect(|r| r.d_mu)),
        sup_error: Summary::of(&collect(|r| r.sup_error)),
        failed,
        rows,
        artifacts,
    })
}
