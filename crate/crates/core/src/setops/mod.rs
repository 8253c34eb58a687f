//! Level sets, discrete boundaries, set distances and r-convex hulls.

mod hull;

use std::path::Path;

use rayon::prelude::*;

use crate::density::DensityField;
use crate::error::{Error, Result};
use crate::geometry::{AmbientPoint, CellIndex, EvaluationGrid, PointMetric};

pub use hull::{grid_geodesic, r_convex_hull, ClosedFormGeodesic, GraphGeodesic, GridGeodesic};

/// Membership mask over the points of one evaluation grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSubset {
    grid_id: u64,
    mask: Vec<bool>,
}

impl GridSubset {
    pub fn from_mask(grid: &EvaluationGrid, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(GridSubset {
            grid_id: grid.id(),
            mask,
        })
    }

    pub fn from_indices(grid: &EvaluationGrid, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = vec![false; grid.len()];
        for i in indices {
            if i >= grid.len() {
                return Err(Error::domain(format!("index {i} outside a grid of {}", grid.len())));
            }
            mask[i] = true;
        }
        Self::from_mask(grid, mask)
    }

    pub fn full(grid: &EvaluationGrid) -> Self {
        GridSubset {
            grid_id: grid.id(),
            mask: vec![true; grid.len()],
        }
    }

    pub fn empty(grid: &EvaluationGrid) -> Self {
        GridSubset {
            grid_id: grid.id(),
            mask: vec![false; grid.len()],
        }
    }

    pub fn grid_id(&self) -> u64 {
        self.grid_id
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask[i]
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter(|(_, m)| **m).map(|(i, _)| i)
    }

    pub fn is_subset_of(&self, other: &GridSubset) -> bool {
        self.grid_id == other.grid_id
            && self.mask.iter().zip(&other.mask).all(|(a, b)| !*a || *b)
    }

    pub fn complement(&self) -> GridSubset {
        GridSubset {
            grid_id: self.grid_id,
            mask: self.mask.iter().map(|m| !m).collect(),
        }
    }

    /// Grid points selected by the mask.
    pub fn points(&self, grid: &EvaluationGrid) -> Result<FinitePointSet> {
        if grid.id() != self.grid_id {
            return Err(Error::GridMismatch);
        }
        Ok(FinitePointSet::new(self.indices().map(|i| *grid.point(i)).collect()))
    }

    pub fn write_indices_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["idx"])?;
        for i in self.indices() {
            w.write_record([i.to_string()])?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }
}

/// A finite set of ambient points.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FinitePointSet {
    pub points: Vec<AmbientPoint>,
}

impl FinitePointSet {
    pub fn new(points: Vec<AmbientPoint>) -> Self {
        FinitePointSet { points }
    }

    /// Planar points, placed in the `z = 0` plane.
    pub fn from_planar(points: &[[f64; 2]]) -> Self {
        FinitePointSet {
            points: points.iter().map(|p| [p[0], p[1], 0.0]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Closed superlevel set `{x : field(x) >= level}`.
pub fn level_set(field: &DensityField, level: f64) -> Result<GridSubset> {
    if !(level > 0.0 && level.is_finite()) {
        return Err(Error::domain(format!("level must be positive, got {level}")));
    }
    Ok(GridSubset {
        grid_id: field.grid_id(),
        mask: field.values().iter().map(|v| *v >= level).collect(),
    })
}

/// Points of the subset with at least one grid neighbour outside it.
pub fn boundary_of(subset: &GridSubset, grid: &EvaluationGrid) -> Result<GridSubset> {
    if grid.id() != subset.grid_id {
        return Err(Error::GridMismatch);
    }
    let mask = (0..grid.len())
        .map(|i| subset.mask[i] && grid.neighbors(i).iter().any(|&j| !subset.mask[j]))
        .collect();
    Ok(GridSubset {
        grid_id: subset.grid_id,
        mask,
    })
}

/// `mu(A \ B) + mu(B \ A)` under the grid's volume weights.
pub fn distance_in_measure(a: &GridSubset, b: &GridSubset, grid: &EvaluationGrid) -> Result<f64> {
    if a.grid_id != b.grid_id || a.grid_id != grid.id() {
        return Err(Error::GridMismatch);
    }
    Ok(a.mask
        .iter()
        .zip(&b.mask)
        .zip(grid.weights())
        .filter(|((x, y), _)| x != y)
        .map(|(_, w)| w)
        .sum())
}

fn directed(from: &FinitePointSet, to: &FinitePointSet, metric: &dyn PointMetric) -> Result<f64> {
    let mins: Result<Vec<f64>> = from
        .points
        .par_iter()
        .map(|a| {
            let mut best = f64::INFINITY;
            for c in &to.points {
                best = best.min(metric.distance(a, c)?);
            }
            Ok(best)
        })
        .collect();
    Ok(mins?.into_iter().fold(0.0, f64::max))
}

/// Hausdorff distance `max(sup_a rho(a, B), sup_b rho(b, A))` under `metric`.
pub fn hausdorff(a: &FinitePointSet, b: &FinitePointSet, metric: &dyn PointMetric) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(directed(a, b, metric)?.max(directed(b, a, metric)?))
}

fn directed_ambient(from: &FinitePointSet, to: &FinitePointSet) -> f64 {
    let spread = bounding_diagonal(&to.points);
    let cell = (spread / (to.len() as f64).cbrt()).max(1e-9);
    let index = CellIndex::new(&to.points, cell);
    from.points
        .par_iter()
        .map(|a| index.nearest(a).map(|(_, d)| d).unwrap_or(f64::INFINITY))
        .reduce(|| 0.0, f64::max)
}

fn bounding_diagonal(points: &[AmbientPoint]) -> f64 {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in points {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (0..3).map(|k| (hi[k] - lo[k]).powi(2)).sum::<f64>().sqrt()
}

/// Hausdorff distance under the ambient Euclidean metric, using a cell index.
pub fn hausdorff_ambient(a: &FinitePointSet, b: &FinitePointSet) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(directed_ambient(a, b).max(directed_ambient(b, a)))
}

/// Sample points at which `evaluator` is strictly above `level`.
pub fn sample_filter<F>(sample: &[AmbientPoint], evaluator: F, level: f64) -> Result<FinitePointSet>
where
    F: Fn(&AmbientPoint) -> Result<f64> + Sync,
{
    let keep: Result<Vec<bool>> = sample
        .par_iter()
        .map(|x| evaluator(x).map(|v| v > level))
        .collect();
    Ok(FinitePointSet::new(
        sample
            .iter()
            .zip(keep?)
            .filter(|(_, k)| *k)
            .map(|(x, _)| *x)
            .collect(),
    ))
}
