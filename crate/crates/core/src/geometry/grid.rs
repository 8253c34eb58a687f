use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{euclidean, sphere_point, torus_point, AmbientPoint, CellIndex, ManifoldSpec};
use crate::error::{Error, Result};

static NEXT_GRID_ID: AtomicU64 = AtomicU64::new(1);

const MIN_RESOLUTION: usize = 8;
const FIBONACCI_NEIGHBORS: usize = 6;

/// How a manifold is discretised.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GridSpec {
    /// Uniform angle lattice `[n_theta, n_phi]` on the sphere, hemisphere or torus.
    Lattice { resolution: [usize; 2] },
    /// Fibonacci lattice on the sphere with equal weights.
    Fibonacci { points: usize },
    /// Box lattice of cell centres in `(a, b, c)`, restricted to the SPD cone.
    SpdBox {
        resolution: [usize; 3],
        a: [f64; 2],
        b: [f64; 2],
        c: [f64; 2],
    },
}

/// A finite discretisation of a manifold: points, chart coordinates,
/// Riemannian volume weights and a symmetric neighbour relation.
#[derive(Debug)]
pub struct EvaluationGrid {
    id: u64,
    manifold: ManifoldSpec,
    points: Vec<AmbientPoint>,
    intrinsic: Vec<[f64; 3]>,
    weights: Vec<f64>,
    adjacency: Vec<Vec<usize>>,
    spacing: f64,
    index: OnceLock<CellIndex>,
}

impl Clone for EvaluationGrid {
    fn clone(&self) -> Self {
        EvaluationGrid {
            id: self.id,
            manifold: self.manifold,
            points: self.points.clone(),
            intrinsic: self.intrinsic.clone(),
            weights: self.weights.clone(),
            adjacency: self.adjacency.clone(),
            spacing: self.spacing,
            index: OnceLock::new(),
        }
    }
}

impl EvaluationGrid {
    /// Assembles a grid from parts, checking weights and adjacency symmetry.
    pub fn from_parts(
        manifold: ManifoldSpec,
        points: Vec<AmbientPoint>,
        weights: Vec<f64>,
        adjacency: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if weights.len() != points.len() || adjacency.len() != points.len() {
            return Err(Error::domain("points, weights and adjacency differ in length"));
        }
        for p in &points {
            manifold.check_on_manifold(p)?;
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::domain(format!("grid weight {w} is not positive")));
        }
        for (i, nbrs) in adjacency.iter().enumerate() {
            for &j in nbrs {
                if j >= points.len() || j == i || !adjacency[j].contains(&i) {
                    return Err(Error::domain(format!("adjacency is not symmetric at ({i}, {j})")));
                }
            }
        }
        let intrinsic = points
            .iter()
            .map(|p| {
                let u = manifold.intrinsic_coords(p);
                let mut out = [0.0; 3];
                out[..u.len()].copy_from_slice(&u);
                out
            })
            .collect();
        Ok(Self::assemble(manifold, points, intrinsic, weights, adjacency))
    }

    fn assemble(
        manifold: ManifoldSpec,
        points: Vec<AmbientPoint>,
        intrinsic: Vec<[f64; 3]>,
        weights: Vec<f64>,
        mut adjacency: Vec<Vec<usize>>,
    ) -> Self {
        for nbrs in adjacency.iter_mut() {
            nbrs.sort_unstable();
            nbrs.dedup();
        }
        let spacing = points
            .iter()
            .enumerate()
            .filter_map(|(i, p)| {
                adjacency[i]
                    .iter()
                    .map(|&j| euclidean(p, &points[j]))
                    .min_by(f64::total_cmp)
            })
            .fold(0.0, f64::max);
        EvaluationGrid {
            id: NEXT_GRID_ID.fetch_add(1, Ordering::Relaxed),
            manifold,
            points,
            intrinsic,
            weights,
            adjacency,
            spacing,
            index: OnceLock::new(),
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn manifold(&self) -> &ManifoldSpec {
        &self.manifold
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[AmbientPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &AmbientPoint {
        &self.points[i]
    }

    /// Chart coordinates; only the first `intrinsic_dim` entries are meaningful.
    pub fn intrinsic(&self) -> &[[f64; 3]] {
        &self.intrinsic
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    /// Largest nearest-neighbour distance over the grid (ambient units).
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn total_volume(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn index(&self) -> &CellIndex {
        self.index.get_or_init(|| {
            let cell = (self.spacing * 2.0).max(1e-6);
            CellIndex::new(&self.points, cell)
        })
    }

    /// Index of the grid point nearest to `x` and its ambient distance.
    pub fn nearest(&self, x: &AmbientPoint) -> (usize, f64) {
        self.index().nearest(x).expect("grid is nonempty")
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let dim = self.manifold.intrinsic_dim();
        let mut w = csv::Writer::from_path(path)?;
        let mut header = vec!["idx".to_string()];
        header.extend((1..=dim).map(|k| format!("u{k}")));
        header.extend((1..=3).map(|k| format!("x{k}")));
        header.push("weight".into());
        w.write_record(&header)?;
        for i in 0..self.len() {
            let mut rec = vec![i.to_string()];
            rec.extend(self.intrinsic[i][..dim].iter().map(|v| v.to_string()));
            rec.extend(self.points[i].iter().map(|v| v.to_string()));
            rec.push(self.weights[i].to_string());
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    /// Writes every undirected edge once, as `source,target` with `source < target`.
    pub fn write_adjacency_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = std::io::BufWriter::new(file);
        let mut write = || -> std::io::Result<()> {
            writeln!(out, "source,target")?;
            for (i, nbrs) in self.adjacency.iter().enumerate() {
                for &j in nbrs.iter().filter(|&&j| j > i) {
                    writeln!(out, "{i},{j}")?;
                }
            }
            out.flush()
        };
        write().map_err(|e| Error::io(path, e))
    }

    /// Builds the grid described by `grid` on `manifold`.
    pub fn build(manifold: &ManifoldSpec, grid: &GridSpec) -> Result<Self> {
        manifold.validate()?;
        match (*manifold, grid) {
            (ManifoldSpec::Sphere, GridSpec::Lattice { resolution }) => {
                check_resolution(resolution)?;
                Ok(sphere_lattice(*manifold, resolution[0], resolution[1], PI, true))
            }
            (ManifoldSpec::Hemisphere { cap_angle }, GridSpec::Lattice { resolution }) => {
                check_resolution(resolution)?;
                Ok(sphere_lattice(*manifold, resolution[0], resolution[1], cap_angle, false))
            }
            (ManifoldSpec::Sphere, GridSpec::Fibonacci { points }) => {
                if *points < MIN_RESOLUTION * MIN_RESOLUTION {
                    return Err(Error::domain(format!(
                        "Fibonacci grid needs at least {} points",
                        MIN_RESOLUTION * MIN_RESOLUTION
                    )));
                }
                Ok(fibonacci_sphere(*points))
            }
            (
                ManifoldSpec::Torus {
                    major_radius,
                    minor_radius,
                },
                GridSpec::Lattice { resolution },
            ) => {
                check_resolution(resolution)?;
                Ok(torus_lattice(
                    *manifold,
                    major_radius,
                    minor_radius,
                    resolution[0],
                    resolution[1],
                ))
            }
            (
                ManifoldSpec::SpdCone,
                GridSpec::SpdBox {
                    resolution,
                    a,
                    b,
                    c,
                },
            ) => {
                check_resolution(resolution)?;
                spd_box(*resolution, [*a, *b, *c])
            }
            (m, g) => Err(Error::domain(format!(
                "grid {g:?} is not available on the {}",
                m.name()
            ))),
        }
    }
}

/// Builds the grid described by `grid` on `manifold`.
pub fn make_grid(manifold: &ManifoldSpec, grid: &GridSpec) -> Result<EvaluationGrid> {
    EvaluationGrid::build(manifold, grid)
}

fn check_resolution(resolution: &[usize]) -> Result<()> {
    if resolution.iter().any(|&n| n < MIN_RESOLUTION) {
        return Err(Error::domain(format!(
            "resolution {resolution:?} is below {MIN_RESOLUTION} per dimension"
        )));
    }
    Ok(())
}

/// `(theta, phi)` lattice. With `closed` the south pole is a single point;
/// otherwise the last row sits on the rim `phi = max_phi` with half-cell weights.
fn sphere_lattice(
    manifold: ManifoldSpec,
    n_theta: usize,
    n_phi: usize,
    max_phi: f64,
    closed: bool,
) -> EvaluationGrid {
    let d_theta = TAU / n_theta as f64;
    let d_phi = max_phi / n_phi as f64;
    let mut points = vec![[0.0, 0.0, 1.0]];
    let mut intrinsic = vec![[0.0; 3]];
    let mut weights = vec![TAU * (1.0 - (0.5 * d_phi).cos())];
    let last_row = if closed { n_phi - 1 } else { n_phi };
    for j in 1..=last_row {
        let phi = j as f64 * d_phi;
        let band = if !closed && j == n_phi { 0.5 } else { 1.0 };
        for i in 0..n_theta {
            let theta = i as f64 * d_theta;
            points.push(sphere_point(theta, phi));
            intrinsic.push([theta, phi, 0.0]);
            weights.push(phi.sin() * d_theta * d_phi * band);
        }
    }
    let row_start = |j: usize| 1 + (j - 1) * n_theta;
    let mut adjacency = vec![Vec::new(); points.len()];
    let link = |a: usize, b: usize, adj: &mut Vec<Vec<usize>>| {
        adj[a].push(b);
        adj[b].push(a);
    };
    for i in 0..n_theta {
        link(0, row_start(1) + i, &mut adjacency);
    }
    for j in 1..=last_row {
        for i in 0..n_theta {
            let here = row_start(j) + i;
            link(here, row_start(j) + (i + 1) % n_theta, &mut adjacency);
            if j < last_row {
                link(here, row_start(j + 1) + i, &mut adjacency);
            }
        }
    }
    if closed {
        let south = points.len();
        points.push([0.0, 0.0, -1.0]);
        intrinsic.push([0.0, PI, 0.0]);
        weights.push(TAU * (1.0 - (0.5 * d_phi).cos()));
        adjacency.push(Vec::new());
        for i in 0..n_theta {
            link(south, row_start(last_row) + i, &mut adjacency);
        }
    }
    EvaluationGrid::assemble(manifold, points, intrinsic, weights, adjacency)
}

fn fibonacci_sphere(n: usize) -> EvaluationGrid {
    let golden = PI * (1.0 + 5f64.sqrt());
    let mut points = Vec::with_capacity(n);
    let mut intrinsic = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as f64 + 0.5;
        let phi = (1.0 - 2.0 * t / n as f64).acos();
        let theta = (golden * t).rem_euclid(TAU);
        points.push(sphere_point(theta, phi));
        intrinsic.push([theta, phi, 0.0]);
    }
    let weights = vec![4.0 * PI / n as f64; n];
    let index = CellIndex::new(&points, (4.0 * PI / n as f64).sqrt() * 2.0);
    let mut adjacency = vec![Vec::new(); n];
    for i in 0..n {
        for (j, _) in index.k_nearest(&points[i], FIBONACCI_NEIGHBORS + 1) {
            if j != i {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }
    EvaluationGrid::assemble(ManifoldSpec::Sphere, points, intrinsic, weights, adjacency)
}

fn torus_lattice(
    manifold: ManifoldSpec,
    major: f64,
    minor: f64,
    n_theta: usize,
    n_phi: usize,
) -> EvaluationGrid {
    let d_theta = TAU / n_theta as f64;
    let d_phi = TAU / n_phi as f64;
    let at = |i: usize, j: usize| i * n_phi + j;
    let mut points = Vec::with_capacity(n_theta * n_phi);
    let mut intrinsic = Vec::with_capacity(n_theta * n_phi);
    let mut weights = Vec::with_capacity(n_theta * n_phi);
    let mut adjacency = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        for j in 0..n_phi {
            let theta = i as f64 * d_theta;
            let phi = j as f64 * d_phi;
            points.push(torus_point(major, minor, theta, phi));
            intrinsic.push([theta, phi, 0.0]);
            weights.push(minor * (major + minor * phi.cos()) * d_theta * d_phi);
            adjacency.push(vec![
                at((i + 1) % n_theta, j),
                at((i + n_theta - 1) % n_theta, j),
                at(i, (j + 1) % n_phi),
                at(i, (j + n_phi - 1) % n_phi),
            ]);
        }
    }
    EvaluationGrid::assemble(manifold, points, intrinsic, weights, adjacency)
}

fn spd_box(resolution: [usize; 3], bounds: [[f64; 2]; 3]) -> Result<EvaluationGrid> {
    for (k, [lo, hi]) in bounds.iter().enumerate() {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::domain(format!(
                "SPD box axis {k} has invalid bounds [{lo}, {hi}]"
            )));
        }
    }
    let step: Vec<f64> = (0..3)
        .map(|k| (bounds[k][1] - bounds[k][0]) / resolution[k] as f64)
        .collect();
    let cell_volume = step[0] * step[1] * step[2];
    let [na, nb, nc] = resolution;
    let mut slot = vec![usize::MAX; na * nb * nc];
    let flat = |i: usize, j: usize, l: usize| (i * nb + j) * nc + l;
    let mut points = Vec::new();
    for i in 0..na {
        for j in 0..nb {
            for l in 0..nc {
                let x = [
                    bounds[0][0] + (i as f64 + 0.5) * step[0],
                    bounds[1][0] + (j as f64 + 0.5) * step[1],
                    bounds[2][0] + (l as f64 + 0.5) * step[2],
                ];
                if x[0] > 0.0 && x[0] * x[2] - x[1] * x[1] > 0.0 {
                    slot[flat(i, j, l)] = points.len();
                    points.push(x);
                }
            }
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut adjacency = vec![Vec::new(); points.len()];
    for i in 0..na {
        for j in 0..nb {
            for l in 0..nc {
                let here = slot[flat(i, j, l)];
                if here == usize::MAX {
                    continue;
                }
                let forward = [
                    (i + 1 < na).then(|| flat(i + 1, j, l)),
                    (j + 1 < nb).then(|| flat(i, j + 1, l)),
                    (l + 1 < nc).then(|| flat(i, j, l + 1)),
                ];
                for there in forward.into_iter().flatten().map(|f| slot[f]) {
                    if there != usize::MAX {
                        adjacency[here].push(there);
                        adjacency[there].push(here);
                    }
                }
            }
        }
    }
    let intrinsic = points.iter().copied().collect();
    let weights = vec![cell_volume; points.len()];
    Ok(EvaluationGrid::assemble(
        ManifoldSpec::SpdCone,
        points,
        intrinsic,
        weights,
        adjacency,
    ))
}
