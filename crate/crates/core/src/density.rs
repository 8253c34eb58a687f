//! Gaussian kernel density estimation on embedded manifolds.
//!
//! The estimator at `x` is
//!
//! ```text
//! f(x) = 1 / (n m0(x) h^d') * sum_i K(|x - X_i| / h),   K(t) = pi^(-d'/2) exp(-t^2)
//! ```
//!
//! where `|.|` is the ambient Euclidean norm, `d'` the intrinsic dimension and
//! `m0(x) = (1 + erf(b_x / h)) / 2` the Gaussian mass on the manifold side of
//! the boundary at geodesic distance `b_x`. Without a boundary `m0 = 1`.

use std::f64::consts::PI;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use crate::error::{Error, Result};
use crate::geometry::{euclidean, AmbientPoint, CellIndex, EvaluationGrid, ManifoldSpec};
use crate::setops::GridSubset;

/// Kernel arguments beyond this are dropped from kernel sums; the dropped
/// terms are below `exp(-64)` relative to a coincident point.
pub const KERNEL_CUTOFF: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Bandwidth(f64);

impl Bandwidth {
    pub fn new(h: f64) -> Result<Self> {
        if h > 0.0 && h.is_finite() {
            Ok(Bandwidth(h))
        } else {
            Err(Error::domain(format!("bandwidth must be positive, got {h}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Bandwidth {
    type Error = Error;
    fn try_from(h: f64) -> Result<Self> {
        Bandwidth::new(h)
    }
}

impl From<Bandwidth> for f64 {
    fn from(h: Bandwidth) -> f64 {
        h.0
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    /// Divides by the boundary mass `m0(x)`.
    #[default]
    Corrected,
    /// Plain kernel average (`m0` replaced by 1).
    Uncorrected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    TrueDensity,
    KdeCorrected,
    KdeUncorrected,
}

impl From<Estimator> for Provenance {
    fn from(e: Estimator) -> Self {
        match e {
            Estimator::Corrected => Provenance::KdeCorrected,
            Estimator::Uncorrected => Provenance::KdeUncorrected,
        }
    }
}

/// Density values over an evaluation grid.
#[derive(Debug, Clone)]
pub struct DensityField {
    grid_id: u64,
    values: Vec<f64>,
    provenance: Provenance,
    bandwidth: Option<Bandwidth>,
}

impl DensityField {
    pub fn new(
        grid: &EvaluationGrid,
        values: Vec<f64>,
        provenance: Provenance,
        bandwidth: Option<Bandwidth>,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::domain(format!("density value {v} is negative or not finite")));
        }
        Ok(DensityField {
            grid_id: grid.id(),
            values,
            provenance,
            bandwidth,
        })
    }

    pub fn truth(grid: &EvaluationGrid, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, values, Provenance::TrueDensity, None)
    }

    pub fn grid_id(&self) -> u64 {
        self.grid_id
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn bandwidth(&self) -> Option<Bandwidth> {
        self.bandwidth
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = i;
            }
        }
        best
    }

    /// Quadrature of the field against the grid's volume weights.
    pub fn mass(&self, grid: &EvaluationGrid) -> Result<f64> {
        if grid.id() != self.grid_id {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(grid.weights())
            .map(|(v, w)| v * w)
            .sum())
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["idx", "value"])?;
        for (i, v) in self.values.iter().enumerate() {
            w.write_record([i.to_string(), v.to_string()])?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }
}

/// Sidecar describing how a density field was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldMetadata {
    pub estimator: Provenance,
    pub h: Option<f64>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub manifold: ManifoldSpec,
    pub grid_points: usize,
}

impl FieldMetadata {
    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
    }
}

/// `K(t) = pi^(-d'/2) exp(-t^2)`.
pub fn gaussian_kernel(t: f64, intrinsic_dim: usize) -> f64 {
    PI.powf(-(intrinsic_dim as f64) / 2.0) * (-t * t).exp()
}

/// Gaussian mass on the manifold side of a boundary at distance `b_x`;
/// exactly 1 when there is no boundary (`b_x = +inf`).
pub fn m0(b_x: f64, h: Bandwidth) -> f64 {
    if b_x == f64::INFINITY {
        return 1.0;
    }
    0.5 * (1.0 + erf(b_x / h.get()))
}

/// Leading boundary-bias coefficient `exp(-b_x^2 / h^2) / (2 sqrt(pi))`.
pub fn bias_coefficient_m1(b_x: f64, h: Bandwidth) -> f64 {
    if b_x == f64::INFINITY {
        return 0.0;
    }
    let t = b_x / h.get();
    (-t * t).exp() / (2.0 * PI.sqrt())
}

fn naive_kernel_sum(x: &AmbientPoint, sample: &[AmbientPoint], h: Bandwidth, dim: usize) -> f64 {
    sample
        .iter()
        .map(|xi| gaussian_kernel(euclidean(x, xi) / h.get(), dim))
        .sum()
}

fn normaliser(n: usize, h: Bandwidth, dim: usize) -> f64 {
    n as f64 * h.get().powi(dim as i32)
}

/// Boundary-corrected estimate at `x`, by direct summation over the sample.
pub fn kde_corrected(
    x: &AmbientPoint,
    sample: &[AmbientPoint],
    h: Bandwidth,
    manifold: &ManifoldSpec,
) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let b_x = manifold.boundary_distance(x)?;
    let dim = manifold.intrinsic_dim();
    Ok(naive_kernel_sum(x, sample, h, dim) / (normaliser(sample.len(), h, dim) * m0(b_x, h)))
}

/// Uncorrected estimate at `x`; equals `m0(x) * kde_corrected(x)`.
pub fn kde_uncorrected(
    x: &AmbientPoint,
    sample: &[AmbientPoint],
    h: Bandwidth,
    manifold: &ManifoldSpec,
) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    manifold.check_on_manifold(x)?;
    let dim = manifold.intrinsic_dim();
    Ok(naive_kernel_sum(x, sample, h, dim) / normaliser(sample.len(), h, dim))
}

/// Kernel estimator with a cell index over the sample; kernel terms beyond
/// [`KERNEL_CUTOFF`] bandwidths are skipped.
#[derive(Debug, Clone)]
pub struct KernelEstimator {
    index: CellIndex,
    h: Bandwidth,
    manifold: ManifoldSpec,
}

impl KernelEstimator {
    pub fn new(sample: &[AmbientPoint], h: Bandwidth, manifold: ManifoldSpec) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::EmptySample);
        }
        Ok(KernelEstimator {
            index: CellIndex::new(sample, KERNEL_CUTOFF * h.get()),
            h,
            manifold,
        })
    }

    pub fn bandwidth(&self) -> Bandwidth {
        self.h
    }

    pub fn sample_size(&self) -> usize {
        self.index.len()
    }

    fn kernel_sum(&self, x: &AmbientPoint) -> f64 {
        let h = self.h.get();
        let inv_h2 = 1.0 / (h * h);
        let mut acc = 0.0;
        self.index.for_each_within(x, KERNEL_CUTOFF * h, |_, d2| {
            acc += (-d2 * inv_h2).exp();
        });
        acc * PI.powf(-(self.manifold.intrinsic_dim() as f64) / 2.0)
    }

    pub fn evaluate(&self, x: &AmbientPoint, estimator: Estimator) -> Result<f64> {
        self.manifold.check_on_manifold(x)?;
        Ok(self.evaluate_unchecked(x, estimator))
    }

    pub(crate) fn evaluate_unchecked(&self, x: &AmbientPoint, estimator: Estimator) -> f64 {
        let dim = self.manifold.intrinsic_dim();
        let raw = self.kernel_sum(x) / normaliser(self.index.len(), self.h, dim);
        match estimator {
            Estimator::Uncorrected => raw,
            Estimator::Corrected => {
                raw / m0(self.manifold.boundary_distance_unchecked(x), self.h)
            }
        }
    }
}

/// Evaluates the chosen estimator at every grid point.
///
/// Each point's kernel sum runs in a fixed order, so the result does not
/// depend on how the work is split across threads.
pub fn evaluate_field(
    sample: &[AmbientPoint],
    h: Bandwidth,
    grid: &EvaluationGrid,
    estimator: Estimator,
) -> Result<DensityField> {
    let kde = KernelEstimator::new(sample, h, *grid.manifold())?;
    let values: Vec<f64> = grid
        .points()
        .par_iter()
        .map(|x| kde.evaluate_unchecked(x, estimator))
        .collect();
    DensityField::new(grid, values, estimator.into(), Some(h))
}

/// `max |estimate - truth|` over the masked grid points.
pub fn sup_error(estimate: &DensityField, truth: &DensityField, mask: &GridSubset) -> Result<f64> {
    if estimate.grid_id != truth.grid_id || mask.grid_id() != truth.grid_id {
        return Err(Error::GridMismatch);
    }
    if mask.count() == 0 {
        return Err(Error::EmptyMask);
    }
    Ok(mask
        .indices()
        .map(|i| (estimate.values[i] - truth.values[i]).abs())
        .fold(0.0, f64::max))
}

/// `n^(-1/(d'+4))` scaled by a quarter of the sample diameter.
pub fn default_bandwidth(sample: &[AmbientPoint], intrinsic_dim: usize) -> Result<Bandwidth> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let diameter = sample
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            sample[i + 1..]
                .iter()
                .map(|y| euclidean(x, y))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    let n = sample.len() as f64;
    let h = n.powf(-1.0 / (intrinsic_dim as f64 + 4.0)) * diameter / 4.0;
    Bandwidth::new(if h > 0.0 { h } else { 1.0 })
}
