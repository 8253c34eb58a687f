use super::{squared_euclidean, AmbientPoint};

/// Upper bound on the number of cells; the cell edge grows to respect it.
const MAX_CELLS: usize = 1 << 21;

/// Uniform-cell bucketing of points in R^3.
///
/// Queries visit cells in a fixed lexicographic order and points within a cell
/// in ascending index order, so any reduction over query results has a
/// deterministic summation order.
#[derive(Debug, Clone)]
pub struct CellIndex {
    origin: [f64; 3],
    cell: f64,
    dims: [usize; 3],
    starts: Vec<usize>,
    items: Vec<usize>,
    points: Vec<AmbientPoint>,
}

impl CellIndex {
    /// Buckets `points` into cubes with edge at least `cell_size`.
    pub fn new(points: &[AmbientPoint], cell_size: f64) -> Self {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in points {
            for k in 0..3 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        if points.is_empty() {
            lo = [0.0; 3];
            hi = [0.0; 3];
        }
        let extent: Vec<f64> = (0..3).map(|k| (hi[k] - lo[k]).max(0.0)).collect();
        let mut cell = if cell_size.is_finite() && cell_size > 0.0 {
            cell_size
        } else {
            extent.iter().cloned().fold(1.0, f64::max)
        };
        let dims_for = |cell: f64| -> [usize; 3] {
            let mut d = [1usize; 3];
            for k in 0..3 {
                d[k] = ((extent[k] / cell).floor() as usize + 1).max(1);
            }
            d
        };
        let mut dims = dims_for(cell);
        while dims.iter().fold(1usize, |a, &d| a.saturating_mul(d)) > MAX_CELLS.max(points.len()) {
            cell *= 1.5;
            dims = dims_for(cell);
        }

        let ncells: usize = dims.iter().product();
        let cell_of: Vec<usize> = points
            .iter()
            .map(|p| {
                let c = Self::coords_of(&lo, cell, &dims, p);
                (c[0] * dims[1] + c[1]) * dims[2] + c[2]
            })
            .collect();
        let mut counts = vec![0usize; ncells + 1];
        for &c in &cell_of {
            counts[c + 1] += 1;
        }
        for i in 0..ncells {
            counts[i + 1] += counts[i];
        }
        let starts = counts.clone();
        let mut fill = counts;
        let mut items = vec![0usize; points.len()];
        for (i, &c) in cell_of.iter().enumerate() {
            items[fill[c]] = i;
            fill[c] += 1;
        }
        CellIndex {
            origin: lo,
            cell,
            dims,
            starts,
            items,
            points: points.to_vec(),
        }
    }

    fn coords_of(origin: &[f64; 3], cell: f64, dims: &[usize; 3], p: &AmbientPoint) -> [usize; 3] {
        let mut c = [0usize; 3];
        for k in 0..3 {
            let v = ((p[k] - origin[k]) / cell).floor();
            c[k] = if v <= 0.0 {
                0
            } else {
                (v as usize).min(dims[k] - 1)
            };
        }
        c
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

    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    fn cell_range(&self, lo: f64, hi: f64, k: usize) -> Option<(usize, usize)> {
        let a = ((lo - self.origin[k]) / self.cell).floor();
        let b = ((hi - self.origin[k]) / self.cell).floor();
        let max = (self.dims[k] - 1) as f64;
        if b < 0.0 || a > max {
            return None;
        }
        Some((a.max(0.0) as usize, b.min(max) as usize))
    }

    fn visit_cell(&self, c: [usize; 3], mut f: impl FnMut(usize)) {
        let id = (c[0] * self.dims[1] + c[1]) * self.dims[2] + c[2];
        for &i in &self.items[self.starts[id]..self.starts[id + 1]] {
            f(i);
        }
    }

    /// Calls `f(index, squared_distance)` for every point with
    /// `|p - q| <= radius`.
    pub fn for_each_within(&self, q: &AmbientPoint, radius: f64, mut f: impl FnMut(usize, f64)) {
        if self.points.is_empty() {
            return;
        }
        let r2 = radius * radius;
        let mut ranges = [(0usize, 0usize); 3];
        for k in 0..3 {
            match self.cell_range(q[k] - radius, q[k] + radius, k) {
                Some(r) => ranges[k] = r,
                None => return,
            }
        }
        for i in ranges[0].0..=ranges[0].1 {
            for j in ranges[1].0..=ranges[1].1 {
                for l in ranges[2].0..=ranges[2].1 {
                    self.visit_cell([i, j, l], |idx| {
                        let d2 = squared_euclidean(q, &self.points[idx]);
                        if d2 <= r2 {
                            f(idx, d2);
                        }
                    });
                }
            }
        }
    }

    pub fn within(&self, q: &AmbientPoint, radius: f64) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        self.for_each_within(q, radius, |i, d2| out.push((i, d2)));
        out
    }

    /// Nearest point to `q` as `(index, distance)`; ties go to the lowest index.
    pub fn nearest(&self, q: &AmbientPoint) -> Option<(usize, f64)> {
        let found = self.k_nearest(q, 1);
        found.first().map(|&(i, d2)| (i, d2.sqrt()))
    }

    /// The `k` nearest points as `(index, squared_distance)`, sorted by
    /// distance then index.
    pub fn k_nearest(&self, q: &AmbientPoint, k: usize) -> Vec<(usize, f64)> {
        if self.points.is_empty() || k == 0 {
            return Vec::new();
        }
        let k = k.min(self.points.len());
        // distance from q to the index bounding box
        let mut outside = 0.0f64;
        for d in 0..3 {
            let lo = self.origin[d];
            let hi = lo + self.dims[d] as f64 * self.cell;
            let gap = (lo - q[d]).max(q[d] - hi).max(0.0);
            outside += gap * gap;
        }
        let mut radius = outside.sqrt() + self.cell;
        loop {
            let mut found = self.within(q, radius);
            if found.len() >= k {
                found.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
                found.truncate(k);
                return found;
            }
            radius *= 2.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice() -> Vec<AmbientPoint> {
        let mut pts = Vec::new();
        for i in 0..10 {
            for j in 0..10 {
                for k in 0..4 {
                    pts.push([i as f64 * 0.1, j as f64 * 0.1, k as f64 * 0.1]);
                }
            }
        }
        pts
    }

    #[test]
    fn within_matches_brute_force() {
        let pts = lattice();
        let idx = CellIndex::new(&pts, 0.13);
        let q = [0.42, 0.37, 0.11];
        let mut got: Vec<usize> = idx.within(&q, 0.25).into_iter().map(|p| p.0).collect();
        got.sort();
        let want: Vec<usize> = (0..pts.len())
            .filter(|&i| squared_euclidean(&q, &pts[i]) <= 0.0625)
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn nearest_outside_bbox() {
        let pts = lattice();
        let idx = CellIndex::new(&pts, 0.05);
        let (i, d) = idx.nearest(&[5.0, 5.0, 5.0]).unwrap();
        assert_eq!(pts[i], [0.9, 0.9, 0.30000000000000004]);
        assert!((d - squared_euclidean(&[5.0, 5.0, 5.0], &pts[i]).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn k_nearest_sorted_and_complete() {
        let pts = lattice();
        let idx = CellIndex::new(&pts, 0.2);
        let q = [0.0, 0.0, 0.0];
        let got = idx.k_nearest(&q, 5);
        assert_eq!(got[0].0, 0);
        assert_eq!(got.len(), 5);
        assert!(got.windows(2).all(|w| w[0].1 <= w[1].1));
        assert!((got[3].1 - 0.01).abs() < 1e-12);
        assert!((got[4].1 - 0.02).abs() < 1e-12);
    }

    #[test]
    fn tiny_cells_are_capped() {
        let pts = lattice();
        let idx = CellIndex::new(&pts, 1e-9);
        assert!(idx.cell_size() > 1e-9);
        assert_eq!(idx.within(&[0.0, 0.0, 0.0], 0.0).len(), 1);
    }
}
