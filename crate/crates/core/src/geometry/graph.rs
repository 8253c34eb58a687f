use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{euclidean, AmbientPoint, CellIndex, EvaluationGrid};
use crate::error::{Error, Result};

/// Default neighbour count for geodesic graphs.
pub const DEFAULT_NEIGHBORS: usize = 8;

/// Shortest paths through a symmetrised k-nearest-neighbour graph with
/// Euclidean edge lengths.
///
/// Graph distances approximate geodesic distances from above, up to chord
/// shortening on individual edges; the error shrinks as the point set gets
/// denser.
#[derive(Debug, Clone)]
pub struct GeodesicGraph {
    points: Vec<AmbientPoint>,
    edges: Vec<Vec<(usize, f64)>>,
    index: CellIndex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Frontier {
    dist: f64,
    node: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, ties broken by node index
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl GeodesicGraph {
    /// Connects each point to its `k` nearest neighbours (and vice versa).
    pub fn build(points: &[AmbientPoint], k: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        if k == 0 {
            return Err(Error::domain("neighbour count must be at least 1"));
        }
        let n = points.len();
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in points {
            for d in 0..3 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        let extent = (0..3).map(|d| hi[d] - lo[d]).fold(0.0, f64::max);
        let cell = (extent / (n as f64).cbrt()).max(1e-9);
        let index = CellIndex::new(points, cell);

        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            for (j, _) in index.k_nearest(&points[i], k + 1) {
                if j != i {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        let edges = adj
            .into_iter()
            .enumerate()
            .map(|(i, mut nbrs)| {
                nbrs.sort_unstable();
                nbrs.dedup();
                nbrs.into_iter()
                    .map(|j| (j, euclidean(&points[i], &points[j])))
                    .collect()
            })
            .collect();
        let graph = GeodesicGraph {
            points: points.to_vec(),
            edges,
            index,
        };
        graph.check_connected()?;
        Ok(graph)
    }

    pub fn from_grid(grid: &EvaluationGrid, k: usize) -> Result<Self> {
        let needed = (grid.manifold().intrinsic_dim() + 1).min(grid.len().saturating_sub(1));
        if k < needed {
            return Err(Error::domain(format!(
                "neighbour count {k} is below intrinsic dimension + 1 = {needed}"
            )));
        }
        Self::build(grid.points(), k)
    }

    fn check_connected(&self) -> Result<()> {
        let n = self.points.len();
        let mut label = vec![usize::MAX; n];
        let mut sizes = Vec::new();
        let mut first = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            let mut stack = vec![start];
            label[start] = id;
            let mut size = 0;
            while let Some(v) = stack.pop() {
                size += 1;
                for &(w, _) in &self.edges[v] {
                    if label[w] == usize::MAX {
                        label[w] = id;
                        stack.push(w);
                    }
                }
            }
            sizes.push(size);
            first.push(start);
        }
        if sizes.len() > 1 {
            let smallest = (0..sizes.len()).min_by_key(|&c| (sizes[c], first[c])).unwrap();
            return Err(Error::Disconnected {
                components: sizes.len(),
                smallest_size: sizes[smallest],
                smallest_member: first[smallest],
            });
        }
        Ok(())
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

    pub fn edges(&self, i: usize) -> &[(usize, f64)] {
        &self.edges[i]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Dijkstra from several seeded sources `(vertex, initial distance)`,
    /// stopping at `limit`. Unreached vertices get `+inf`.
    pub fn multi_source(&self, sources: &[(usize, f64)], limit: f64) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.points.len()];
        let mut heap = BinaryHeap::new();
        for &(s, d0) in sources {
            if d0 < dist[s] {
                dist[s] = d0;
                heap.push(Frontier { dist: d0, node: s });
            }
        }
        while let Some(Frontier { dist: d, node }) = heap.pop() {
            if d > dist[node] {
                continue;
            }
            for &(w, len) in &self.edges[node] {
                let nd = d + len;
                if nd < dist[w] && nd <= limit {
                    dist[w] = nd;
                    heap.push(Frontier { dist: nd, node: w });
                }
            }
        }
        dist
    }

    /// Shortest-path distances from `source` to every vertex.
    pub fn shortest_paths(&self, source: usize) -> Vec<f64> {
        self.multi_source(&[(source, 0.0)], f64::INFINITY)
    }

    /// Vertices at path distance strictly below `radius` from `source`.
    pub fn ball(&self, source: usize, radius: f64) -> Vec<(usize, f64)> {
        self.multi_source(&[(source, 0.0)], radius)
            .into_iter()
            .enumerate()
            .filter(|&(_, d)| d < radius)
            .collect()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.shortest_paths(i)[j]
    }

    /// All-pairs distances; row `i` is Dijkstra from `i`.
    pub fn all_pairs(&self) -> Vec<Vec<f64>> {
        use rayon::prelude::*;
        (0..self.points.len())
            .into_par_iter()
            .map(|i| self.shortest_paths(i))
            .collect()
    }

    /// Nearest vertex to an arbitrary point and the ambient offset to it.
    pub fn snap(&self, x: &AmbientPoint) -> (usize, f64) {
        self.index.nearest(x).expect("graph is nonempty")
    }

    /// Approximate geodesic distance between arbitrary points: snap both to
    /// their nearest vertices and add the offsets to the path length.
    pub fn point_distance(&self, x: &AmbientPoint, y: &AmbientPoint) -> f64 {
        let (i, dx) = self.snap(x);
        let (j, dy) = self.snap(y);
        if i == j {
            return euclidean(x, y);
        }
        dx + self.distance(i, j) + dy
    }
}
