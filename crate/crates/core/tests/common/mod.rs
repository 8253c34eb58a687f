//! Oracles shared by the integration tests. Nothing here calls the code
//! under test to compute an expected value.

#![allow(dead_code)]

pub mod props;

use std::f64::consts::TAU;

use mls::geometry::{AmbientPoint, EvaluationGrid};
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub const GL8_NODES: [f64; 8] = [
    -0.9602898564975362,
    -0.7966664774136267,
    -0.525532409916329,
    -0.18343464249564978,
    0.18343464249564978,
    0.525532409916329,
    0.7966664774136267,
    0.9602898564975362,
];
pub const GL8_WEIGHTS: [f64; 8] = [
    0.10122853629037669,
    0.22238103445337434,
    0.31370664587788705,
    0.36268378337836177,
    0.36268378337836177,
    0.31370664587788705,
    0.22238103445337434,
    0.10122853629037669,
];

/// Gauss-Legendre nodes and weights mapped to `[lo, hi]`.
pub fn gl8(lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    GL8_NODES
        .iter()
        .zip(GL8_WEIGHTS)
        .map(move |(x, w)| (mid + half * x, half * w))
}

/// 2-D product rule over `[x0, x1] x [y0, y1]`, split into `split^2` panels.
pub fn integrate_2d(f: &dyn Fn(f64, f64) -> f64, x: [f64; 2], y: [f64; 2], split: usize) -> f64 {
    let dx = (x[1] - x[0]) / split as f64;
    let dy = (y[1] - y[0]) / split as f64;
    let mut total = 0.0;
    for i in 0..split {
        for j in 0..split {
            let xa = x[0] + i as f64 * dx;
            let ya = y[0] + j as f64 * dy;
            for (u, wu) in gl8(xa, xa + dx) {
                for (v, wv) in gl8(ya, ya + dy) {
                    total += wu * wv * f(u, v);
                }
            }
        }
    }
    total
}

/// 3-D product rule over a box, split into `split^3` panels.
pub fn integrate_3d(f: &dyn Fn(f64, f64, f64) -> f64, lo: [f64; 3], hi: [f64; 3], split: usize) -> f64 {
    let d: Vec<f64> = (0..3).map(|k| (hi[k] - lo[k]) / split as f64).collect();
    let mut total = 0.0;
    for i in 0..split {
        for j in 0..split {
            for l in 0..split {
                let a0 = lo[0] + i as f64 * d[0];
                let b0 = lo[1] + j as f64 * d[1];
                let c0 = lo[2] + l as f64 * d[2];
                for (a, wa) in gl8(a0, a0 + d[0]) {
                    for (b, wb) in gl8(b0, b0 + d[1]) {
                        for (c, wc) in gl8(c0, c0 + d[2]) {
                            total += wa * wb * wc * f(a, b, c);
                        }
                    }
                }
            }
        }
    }
    total
}

#[derive(Debug, Clone)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub df: usize,
    pub critical: f64,
}

impl ChiSquareTest {
    pub fn passes(&self) -> bool {
        self.statistic <= self.critical
    }
}

/// Pearson test of bin counts against bin probabilities. Mass outside the
/// listed bins forms one extra bin; bins expecting fewer than 5 counts are
/// pooled.
pub fn chi_square(observed: &[u64], probs: &[f64], n: u64, alpha: f64) -> ChiSquareTest {
    assert_eq!(observed.len(), probs.len());
    let mut bins: Vec<(f64, f64)> = observed
        .iter()
        .zip(probs)
        .map(|(o, p)| (*o as f64, p * n as f64))
        .collect();
    let inside_obs: u64 = observed.iter().sum();
    let inside_p: f64 = probs.iter().sum();
    bins.push(((n - inside_obs) as f64, ((1.0 - inside_p) * n as f64).max(0.0)));

    let mut kept: Vec<(f64, f64)> = Vec::new();
    let mut pooled = (0.0, 0.0);
    for (o, e) in bins {
        if e < 5.0 {
            pooled.0 += o;
            pooled.1 += e;
        } else {
            kept.push((o, e));
        }
    }
    if pooled.1 >= 5.0 {
        kept.push(pooled);
    } else if let Some(smallest) = kept
        .iter_mut()
        .min_by(|a, b| a.1.total_cmp(&b.1))
    {
        smallest.0 += pooled.0;
        smallest.1 += pooled.1;
    }
    let statistic = kept.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let df = kept.len() - 1;
    let critical = ChiSquared::new(df as f64).unwrap().inverse_cdf(1.0 - alpha);
    ChiSquareTest {
        statistic,
        df,
        critical,
    }
}

/// Index of `v` among `bins` equal bins of `[lo, hi)`, if inside.
pub fn bin_of(v: f64, lo: f64, hi: f64, bins: usize) -> Option<usize> {
    if v < lo || v >= hi {
        return None;
    }
    Some((((v - lo) / (hi - lo)) * bins as f64).floor().min(bins as f64 - 1.0) as usize)
}

/// Great-circle distance by the arccos formula.
pub fn arc(x: &AmbientPoint, y: &AmbientPoint) -> f64 {
    (x[0] * y[0] + x[1] * y[1] + x[2] * y[2]).clamp(-1.0, 1.0).acos()
}

/// Affine-invariant distance from the generalised eigenvalues of `(B, A)`,
/// the roots of `det(B - t A) = 0`.
pub fn spd_distance(a: &AmbientPoint, b: &AmbientPoint) -> f64 {
    let det_a = a[0] * a[2] - a[1] * a[1];
    let det_b = b[0] * b[2] - b[1] * b[1];
    let mid = a[0] * b[2] + a[2] * b[0] - 2.0 * a[1] * b[1];
    let disc = (mid * mid - 4.0 * det_a * det_b).max(0.0).sqrt();
    let t1 = (mid + disc) / (2.0 * det_a);
    let t2 = det_b / (det_a * t1);
    (t1.ln().powi(2) + t2.ln().powi(2)).sqrt()
}

/// All-pairs shortest paths through the symmetrised k-NN graph, by sorting
/// every pair and Floyd-Warshall. Ties among neighbours go to the lower index.
pub fn knn_floyd(points: &[AmbientPoint], k: usize) -> Vec<Vec<f64>> {
    let n = points.len();
    let d2 = |i: usize, j: usize| {
        let (p, q) = (&points[i], &points[j]);
        let e = [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
        e[0] * e[0] + e[1] * e[1] + e[2] * e[2]
    };
    let mut dist = vec![vec![f64::INFINITY; n]; n];
    for i in 0..n {
        dist[i][i] = 0.0;
        let mut order: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        order.sort_by(|&x, &y| d2(i, x).total_cmp(&d2(i, y)).then(x.cmp(&y)));
        for &j in order.iter().take(k) {
            let w = d2(i, j).sqrt();
            dist[i][j] = w;
            dist[j][i] = w;
        }
    }
    for m in 0..n {
        for i in 0..n {
            let dim = dist[i][m];
            if dim == f64::INFINITY {
                continue;
            }
            for j in 0..n {
                let via = dim + dist[m][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }
    dist
}

/// The r-convex hull by its definition: a grid point is dropped iff some grid
/// centre at distance `>= r` from every point of `a` is closer than `r` to it.
pub fn brute_force_hull(n: usize, dist: &dyn Fn(usize, usize) -> f64, a: &[usize], r: f64) -> Vec<bool> {
    let mut excluded = vec![false; n];
    for c in 0..n {
        let to_a = a.iter().map(|&i| dist(c, i)).fold(f64::INFINITY, f64::min);
        if to_a >= r {
            for (g, e) in excluded.iter_mut().enumerate() {
                if dist(c, g) < r {
                    *e = true;
                }
            }
        }
    }
    excluded.into_iter().map(|e| !e).collect()
}

/// Total grid volume against a closed form, as a relative error.
pub fn volume_error(grid: &EvaluationGrid, exact: f64) -> f64 {
    (grid.total_volume() - exact).abs() / exact
}

/// Chart of the sphere by height `z` and azimuth `psi`; the area element is
/// `dz dpsi`.
pub fn sphere_from_height(z: f64, psi: f64) -> AmbientPoint {
    let rho = ((1.0 - z) * (1.0 + z)).max(0.0).sqrt();
    [rho * psi.cos(), rho * psi.sin(), z]
}

pub fn azimuth(x: &AmbientPoint) -> f64 {
    x[1].atan2(x[0]).rem_euclid(TAU)
}
