use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("point is off the manifold (residual {residual:e})")]
    OffManifold { residual: f64 },

    #[error("no closed-form geodesic on {0}; use a geodesic graph")]
    NoClosedForm(&'static str),

    #[error("sample is empty")]
    EmptySample,

    #[error("mask selects no grid points")]
    EmptyMask,

    #[error("point set is empty")]
    EmptySet,

    #[error("empty grid after restriction to the manifold")]
    EmptyGrid,

    #[error("grid mismatch: operands belong to different grids")]
    GridMismatch,

    #[error(
        "geodesic graph is disconnected: {components} components, smallest has {smallest_size} \
         vertices (including vertex {smallest_member})"
    )]
    Disconnected {
        components: usize,
        smallest_size: usize,
        smallest_member: usize,
    },

    #[error("quadrature did not converge: relative change {change:e} at resolution {resolution}")]
    NoConvergence { resolution: usize, change: f64 },

    #[error("rejection sampler acceptance rate {rate:e} is below 1e-6; check the law parameters")]
    LowAcceptance { rate: f64 },

    #[error(
        "hull radius {radius} is below twice the grid spacing {spacing}; \
         the hull degenerates towards the input set"
    )]
    DegenerateHull { radius: f64, spacing: f64 },

    #[error("{0}")]
    Config(String),

    #[error("{failed} of {total} replications failed; first error: {first}")]
    RunFailed {
        failed: usize,
        total: usize,
        first: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
