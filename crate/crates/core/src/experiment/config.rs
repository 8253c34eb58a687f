use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::density::Estimator;
use crate::geometry::{GridSpec, ManifoldSpec, StereographicProjection, DEFAULT_NEIGHBORS};
use crate::truth::TargetLaw;

pub const DEFAULT_REPLICATIONS: usize = 20;

/// Which sets the Hausdorff distance compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceConvention {
    /// Estimated and true level sets as regions of grid points.
    Regions,
    /// Discrete boundaries of the two level sets.
    Boundaries,
    /// r-convex hull of the filtered sample against the true level set.
    HullVsLevelset,
}

/// One experiment: a law on a manifold, an estimator setting and the
/// replication plan. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub manifold: ManifoldSpec,
    pub law: TargetLaw,
    /// Sample size.
    pub n: usize,
    /// Kernel bandwidth; the default rule is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<f64>,
    /// Level `lambda` of the set `{f >= lambda}`.
    pub level: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hull_radius: Option<f64>,
    pub grid: GridSpec,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default)]
    pub seed: u64,
    pub distance: DistanceConvention,
    /// Boundary points are projected to the plane before measuring distances.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection: Option<StereographicProjection>,
    #[serde(default)]
    pub estimator: Estimator,
    #[serde(default = "default_neighbors")]
    pub graph_neighbors: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

fn default_replications() -> usize {
    DEFAULT_REPLICATIONS
}

fn default_neighbors() -> usize {
    DEFAULT_NEIGHBORS
}

/// A config problem located by its field path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl ExperimentConfig {
    /// Every invariant violation, empty when the config is valid.
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.name.trim().is_empty() {
            out.push(Diagnostic::new("name", "must not be empty"));
        }
        if let Err(e) = self.manifold.validate() {
            out.push(Diagnostic::new("manifold", e.to_string()));
        }
        for line in self.law.diagnostics(&self.manifold, "law") {
            let (path, msg) = line.split_once(": ").unwrap_or(("law", line.as_str()));
            out.push(Diagnostic::new(path, msg));
        }
        if self.n == 0 {
            out.push(Diagnostic::new("n", "sample size must be at least 1"));
        }
        if let Some(h) = self.bandwidth {
            if !(h > 0.0 && h.is_finite()) {
                out.push(Diagnostic::new("bandwidth", format!("must be positive, got {h}")));
            }
        }
        if !(self.level > 0.0 && self.level.is_finite()) {
            out.push(Diagnostic::new("level", format!("must be positive, got {}", self.level)));
        }
        if let Some(r) = self.hull_radius {
            if !(r > 0.0 && r.is_finite()) {
                out.push(Diagnostic::new("hull_radius", format!("must be positive, got {r}")));
            }
        }
        if self.distance == DistanceConvention::HullVsLevelset && self.hull_radius.is_none() {
            out.push(Diagnostic::new(
                "hull_radius",
                "required by the hull_vs_levelset distance",
            ));
        }
        if self.replications == 0 {
            out.push(Diagnostic::new("replications", "must be at least 1"));
        }
        if self.graph_neighbors < 3 {
            out.push(Diagnostic::new("graph_neighbors", "must be at least 3"));
        }
        self.grid_diagnostics(&mut out);
        if let Some(p) = &self.projection {
            if !matches!(self.manifold, ManifoldSpec::Sphere | ManifoldSpec::Hemisphere { .. }) {
                out.push(Diagnostic::new(
                    "projection",
                    "stereographic projection needs a sphere or hemisphere",
                ));
            }
            if p.basis().is_err() {
                out.push(Diagnostic::new("projection.pole", "must be a nonzero vector"));
            }
        }
        out
    }

    fn grid_diagnostics(&self, out: &mut Vec<Diagnostic>) {
        let fits = matches!(
            (&self.manifold, &self.grid),
            (
                ManifoldSpec::Sphere | ManifoldSpec::Hemisphere { .. } | ManifoldSpec::Torus { .. },
                GridSpec::Lattice { .. }
            ) | (ManifoldSpec::Sphere, GridSpec::Fibonacci { .. })
                | (ManifoldSpec::SpdCone, GridSpec::SpdBox { .. })
        );
        if !fits {
            out.push(Diagnostic::new(
                "grid.kind",
                format!("grid does not discretise a {} manifold", self.manifold.name()),
            ));
        }
        match &self.grid {
            GridSpec::Lattice { resolution } => {
                if resolution.iter().any(|r| *r < 8) {
                    out.push(Diagnostic::new("grid.resolution", "need at least 8 per angle"));
                }
            }
            GridSpec::Fibonacci { points } => {
                if *points < 64 {
                    out.push(Diagnostic::new("grid.points", "need at least 64 points"));
                }
            }
            GridSpec::SpdBox { resolution, a, b, c } => {
                if resolution.iter().any(|r| *r < 8) {
                    out.push(Diagnostic::new("grid.resolution", "need at least 8 per axis"));
                }
                for (name, range) in [("a", a), ("b", b), ("c", c)] {
                    if !(range[0] < range[1] && range.iter().all(|v| v.is_finite())) {
                        out.push(Diagnostic::new(
                            format!("grid.{name}"),
                            format!("range {range:?} must be increasing"),
                        ));
                    }
                }
            }
        }
    }

    /// Notes about parameters adjusted before use.
    pub fn notes(&self) -> Vec<String> {
        self.law.normalization_notes("law")
    }
}

/// Parses a JSON config. Syntax and schema errors carry the offending path.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, Vec<Diagnostic>> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "(root)".to_string() } else { path };
        vec![Diagnostic::new(path, e.inner().to_string())]
    })?;
    let problems = config.diagnostics();
    if problems.is_empty() {
        Ok(config)
    } else {
        Err(problems)
    }
}

/// Reads and validates a config file.
pub fn validate_config(path: &Path) -> Result<ExperimentConfig, Vec<Diagnostic>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| vec![Diagnostic::new(path.display().to_string(), e.to_string())])?;
    parse_config(&text)
}
