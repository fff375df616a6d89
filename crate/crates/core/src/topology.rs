//! Communication graphs and the expected randomized-gossip update matrix.
//!
//! Graphs are undirected, simple and immutable once built. Random geometric
//! graphs (RGG) and square grids carry node locations in the unit square,
//! which the location-dependent fields and geographic gossip need.

use std::collections::VecDeque;
use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::seed;

/// Default number of location draws before [`generate_rgg`] gives up.
pub const DEFAULT_REDRAW_LIMIT: usize = 1000;

/// Largest graph for which dense spectra are computed.
pub const MAX_DENSE_NODES: usize = 2000;

const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist2(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// An undirected simple graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    neighbors: Vec<Vec<usize>>,
    locations: Option<Vec<Point>>,
    redraws: usize,
}

impl Graph {
    /// Build a graph from an edge list. Duplicate edges are merged; self-loops
    /// and out-of-range ids are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut neighbors = vec![Vec::new(); n];
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({i}, {j}) out of range for {n} nodes"
                )));
            }
            if i == j {
                return Err(Error::InvalidArgument(format!("self-loop at node {i}")));
            }
            neighbors[i].push(j);
            neighbors[j].push(i);
        }
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph {
            neighbors,
            locations: None,
            redraws: 0,
        })
    }

    /// Attach planar locations, one per node.
    pub fn with_locations(mut self, locations: Vec<Point>) -> Result<Self> {
        if locations.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                actual: locations.len(),
            });
        }
        self.locations = Some(locations);
        Ok(self)
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 nodes");
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        Self::from_edges(n, edges).expect("valid complete graph")
    }

    /// Star with node 0 at the hub.
    pub fn star(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (0, i))).expect("valid star")
    }

    pub fn n(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    /// Position of `j` inside `neighbors(i)`.
    pub fn neighbor_slot(&self, i: usize, j: usize) -> Option<usize> {
        self.neighbors[i].binary_search(&j).ok()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbor_slot(i, j).is_some()
    }

    pub fn locations(&self) -> Option<&[Point]> {
        self.locations.as_deref()
    }

    /// Number of rejected location draws before this graph was accepted.
    pub fn redraws(&self) -> usize {
        self.redraws
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn min_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        max_degree(self)
    }

    pub fn is_connected(&self) -> bool {
        is_connected(self)
    }

    /// Serialize as an edge list:
    ///
    /// ```text
    /// n <count>
    /// i j            (one line per edge, i < j, lexicographic)
    /// loc i x y      (optional, one line per node)
    /// ```
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "n {}", self.n()).unwrap();
        for (i, j) in self.edges() {
            writeln!(out, "{i} {j}").unwrap();
        }
        if let Some(locs) = &self.locations {
            for (i, p) in locs.iter().enumerate() {
                writeln!(out, "loc {i} {:.16e} {:.16e}", p.x, p.y).unwrap();
            }
        }
        out
    }

    /// Parse the format written by [`Graph::to_edge_list`].
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        let mut locs: Vec<Option<Point>> = Vec::new();
        let err = |line: usize, msg: &str| Error::EdgeList {
            line,
            msg: msg.to_string(),
        };
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            match (n, parts.as_slice()) {
                (None, ["n", count]) => {
                    let count: usize = count.parse().map_err(|_| err(line_no, "bad node count"))?;
                    n = Some(count);
                    locs = vec![None; count];
                }
                (None, _) => return Err(err(line_no, "expected header `n <count>`")),
                (Some(count), ["loc", i, x, y]) => {
                    let i: usize = i.parse().map_err(|_| err(line_no, "bad node id"))?;
                    if i >= count {
                        return Err(err(line_no, "node id out of range"));
                    }
                    let x: f64 = x.parse().map_err(|_| err(line_no, "bad x coordinate"))?;
                    let y: f64 = y.parse().map_err(|_| err(line_no, "bad y coordinate"))?;
                    locs[i] = Some(Point::new(x, y));
                }
                (Some(count), [i, j]) => {
                    let i: usize = i.parse().map_err(|_| err(line_no, "bad node id"))?;
                    let j: usize = j.parse().map_err(|_| err(line_no, "bad node id"))?;
                    if i >= count || j >= count || i == j {
                        return Err(err(line_no, "invalid edge"));
                    }
                    edges.push((i, j));
                }
                _ => return Err(err(line_no, "unrecognized line")),
            }
        }
        let n = n.ok_or_else(|| err(0, "missing header"))?;
        let graph = Graph::from_edges(n, edges)?;
        if locs.iter().all(Option::is_none) {
            return Ok(graph);
        }
        let locations = locs
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| err(0, &format!("missing location for node {i}"))))
            .collect::<Result<Vec<_>>>()?;
        graph.with_locations(locations)
    }
}

/// Connectivity radius `r(n) = sqrt(2 ln n / n)`.
pub fn connectivity_radius(n: usize) -> f64 {
    let n = n as f64;
    (2.0 * n.ln() / n).sqrt()
}

/// Random geometric graph on `n` nodes in the unit square, redrawn until connected.
pub fn generate_rgg(n: usize, seed: u64) -> Result<Graph> {
    generate_rgg_with_limit(n, seed, DEFAULT_REDRAW_LIMIT)
}

pub fn generate_rgg_with_limit(n: usize, seed: u64, max_draws: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("RGG needs n >= 2, got {n}")));
    }
    let radius2 = connectivity_radius(n).powi(2);
    for attempt in 0..max_draws {
        let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(seed, &[attempt as u64]));
        let locations: Vec<Point> = (0..n)
            .map(|_| Point::new(rng.random::<f64>(), rng.random::<f64>()))
            .collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if locations[i].dist2(&locations[j]) < radius2 {
                    edges.push((i, j));
                }
            }
        }
        let mut graph = Graph::from_edges(n, edges)?.with_locations(locations)?;
        if graph.is_connected() {
            graph.redraws = attempt;
            return Ok(graph);
        }
    }
    Err(Error::RggRedrawLimit { n, attempts: max_draws })
}

/// `side × side` 4-connected lattice. Node `r * side + c` sits at
/// `(c / (side - 1), r / (side - 1))`.
pub fn generate_grid(side: usize) -> Result<Graph> {
    if side < 2 {
        return Err(Error::InvalidArgument(format!("grid needs side >= 2, got {side}")));
    }
    let id = |r: usize, c: usize| r * side + c;
    let mut edges = Vec::with_capacity(2 * side * (side - 1));
    for r in 0..side {
        for c in 0..side {
            if c + 1 < side {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < side {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    let scale = (side - 1) as f64;
    let locations = (0..side * side)
        .map(|i| Point::new((i % side) as f64 / scale, (i / side) as f64 / scale))
        .collect();
    Graph::from_edges(side * side, edges)?.with_locations(locations)
}

pub fn is_connected(g: &Graph) -> bool {
    let n = g.n();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(i) = queue.pop_front() {
        for &j in g.neighbors(i) {
            if !seen[j] {
                seen[j] = true;
                reached += 1;
                queue.push_back(j);
            }
        }
    }
    reached == n
}

pub fn max_degree(g: &Graph) -> usize {
    (0..g.n()).map(|i| g.degree(i)).max().unwrap_or(0)
}

/// Square matrix of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix(DMatrix<f64>);

impl DenseMatrix {
    pub fn identity(n: usize) -> Self {
        DenseMatrix(DMatrix::identity(n, n))
    }

    pub fn from_row_slice(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                actual: data.len(),
            });
        }
        Ok(DenseMatrix(DMatrix::from_row_slice(n, n, data)))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.0.row(i).sum()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    fn check_symmetric(&self) -> Result<()> {
        let n = self.n();
        for i in 0..n {
            for j in i + 1..n {
                let diff = (self.0[(i, j)] - self.0[(j, i)]).abs();
                if diff > SYMMETRY_TOL {
                    return Err(Error::NotSymmetric { row: i, col: j, diff });
                }
            }
        }
        Ok(())
    }
}

/// Expected update matrix `W̄ = E[W(k)]` of randomized gossip under the natural
/// random walk: the initiator `s` is uniform on the nodes and the partner `t`
/// is uniform on `N_s`.
///
/// One gossip step between `i` and `j` applies `W = I - ½ (e_i - e_j)(e_i - e_j)ᵀ`.
/// The unordered pair `{i, j}` is picked when `s = i, t = j` or `s = j, t = i`,
/// so with probability `p_ij = (1/n)(1/|N_i| + 1/|N_j|)`, and
/// `W̄ = I - ½ Σ_{(i,j)∈E} p_ij (e_i - e_j)(e_i - e_j)ᵀ`.
/// Off-diagonal entries are `p_ij / 2`; each diagonal entry is one minus its
/// row's off-diagonal mass.
pub fn expected_gossip_matrix(g: &Graph) -> Result<DenseMatrix> {
    let n = g.n();
    if n > MAX_DENSE_NODES {
        return Err(Error::InvalidArgument(format!(
            "dense spectra are limited to {MAX_DENSE_NODES} nodes, got {n}"
        )));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let nf = n as f64;
    let mut w = DMatrix::<f64>::zeros(n, n);
    for (i, j) in g.edges() {
        let p = (1.0 / g.degree(i) as f64 + 1.0 / g.degree(j) as f64) / nf;
        w[(i, j)] = 0.5 * p;
        w[(j, i)] = 0.5 * p;
    }
    for i in 0..n {
        let off: f64 = w.row(i).sum();
        w[(i, i)] = 1.0 - off;
    }
    Ok(DenseMatrix(w))
}

/// Second-largest eigenvalue of a symmetric matrix.
pub fn lambda2(m: &DenseMatrix) -> Result<f64> {
    second_eigenpair(m).map(|(value, _)| value)
}

/// Second-largest eigenvalue and a unit eigenvector for it.
pub fn second_eigenpair(m: &DenseMatrix) -> Result<(f64, Vec<f64>)> {
    if m.n() < 2 {
        return Err(Error::InvalidArgument(
            "second eigenvalue needs at least a 2x2 matrix".into(),
        ));
    }
    m.check_symmetric()?;
    let eig = SymmetricEigen::new(m.0.clone());
    let mut order: Vec<usize> = (0..m.n()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let idx = order[1];
    let vector = eig.eigenvectors.column(idx).iter().copied().collect();
    Ok((eig.eigenvalues[idx], vector))
}
