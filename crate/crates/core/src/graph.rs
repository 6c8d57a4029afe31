//! Finite simple undirected graphs with a precomputed hop metric.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::GraphError;

/// Vertex index, `0..n`.
pub type Vertex = usize;

/// Distance sentinel for vertices in different components.
pub const UNREACHABLE: u32 = u32::MAX;

/// Graph families with closed-form constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Family {
    Complete,
    Star,
    Path,
    Cycle,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Complete => "complete",
            Family::Star => "star",
            Family::Path => "path",
            Family::Cycle => "cycle",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "complete" | "K" => Some(Family::Complete),
            "star" | "S" => Some(Family::Star),
            "path" | "P" => Some(Family::Path),
            "cycle" | "C" => Some(Family::Cycle),
            _ => None,
        }
    }

    /// Smallest admissible vertex count.
    pub fn min_vertices(self) -> usize {
        match self {
            Family::Cycle => 3,
            _ => 1,
        }
    }

    pub fn build(self, n: usize) -> Result<Graph, GraphError> {
        match self {
            Family::Complete => Graph::complete(n),
            Family::Star => Graph::star(n),
            Family::Path => Graph::path(n),
            Family::Cycle => Graph::cycle(n),
        }
    }
}

/// A finite simple undirected graph.
///
/// Edges are stored canonically (`i < j`, sorted, deduplicated). The hop
/// distance matrix and, for every vertex, the list of vertices ordered by
/// `(distance, id)` are computed once at construction; the graph is immutable
/// afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adjacency: Vec<Vec<Vertex>>,
    dist: Vec<u32>,
    // by_distance[v] lists the component of v sorted by (dist, id);
    // shell_ends[v][r] is the size of the closed ball B(v, r), r = 0..=ecc(v).
    by_distance: Vec<Vec<Vertex>>,
    shell_ends: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate pairs, in either
    /// orientation, are merged.
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut canonical = Vec::with_capacity(edges.len());
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: i.max(j),
                    n,
                });
            }
            if i == j {
                return Err(GraphError::Loop { vertex: i });
            }
            canonical.push((i.min(j), i.max(j)));
        }
        canonical.sort_unstable();
        canonical.dedup();

        let mut adjacency = vec![Vec::new(); n];
        for &(i, j) in &canonical {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }

        let mut dist = vec![UNREACHABLE; n * n];
        let mut queue = VecDeque::with_capacity(n);
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = 0;
            queue.clear();
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let du = row[u];
                for &w in &adjacency[u] {
                    if row[w] == UNREACHABLE {
                        row[w] = du + 1;
                        queue.push_back(w);
                    }
                }
            }
        }

        let mut by_distance = Vec::with_capacity(n);
        let mut shell_ends = Vec::with_capacity(n);
        for v in 0..n {
            let row = &dist[v * n..(v + 1) * n];
            let mut order: Vec<Vertex> = (0..n).filter(|&m| row[m] != UNREACHABLE).collect();
            order.sort_by_key(|&m| (row[m], m));
            let ecc = row[*order.last().unwrap()] as usize;
            let mut ends = vec![0usize; ecc + 1];
            for &m in &order {
                ends[row[m] as usize] += 1;
            }
            for r in 1..=ecc {
                ends[r] += ends[r - 1];
            }
            by_distance.push(order);
            shell_ends.push(ends);
        }

        Ok(Graph {
            n,
            edges: canonical,
            adjacency,
            dist,
            by_distance,
            shell_ends,
        })
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Result<Self, GraphError> {
        check_min(Family::Complete, n)?;
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Graph::new(n, &edges)
    }

    /// The star graph `S_n` with center at vertex 0.
    pub fn star(n: usize) -> Result<Self, GraphError> {
        check_min(Family::Star, n)?;
        let edges: Vec<_> = (1..n).map(|j| (0, j)).collect();
        Graph::new(n, &edges)
    }

    pub fn path(n: usize) -> Result<Self, GraphError> {
        check_min(Family::Path, n)?;
        let edges: Vec<_> = (1..n).map(|j| (j - 1, j)).collect();
        Graph::new(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        check_min(Family::Cycle, n)?;
        let mut edges: Vec<_> = (1..n).map(|j| (j - 1, j)).collect();
        edges.push((0, n - 1));
        Graph::new(n, &edges)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Canonical edge list: `i < j`, lexicographically sorted, no duplicates.
    #[inline]
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    /// Hop distance, or [`UNREACHABLE`].
    #[inline]
    pub fn dist(&self, u: Vertex, v: Vertex) -> u32 {
        self.dist[u * self.n + v]
    }

    pub fn is_connected(&self) -> bool {
        self.by_distance[0].len() == self.n
    }

    /// Largest finite distance from `v`.
    #[inline]
    pub fn eccentricity(&self, v: Vertex) -> usize {
        self.shell_ends[v].len() - 1
    }

    /// Largest finite distance in the graph; for a disconnected graph this is
    /// the largest diameter over its components.
    pub fn diameter(&self) -> usize {
        (0..self.n).map(|v| self.eccentricity(v)).max().unwrap_or(0)
    }

    /// Vertices of the component of `v`, sorted by `(dist(v, .), id)`.
    #[inline]
    pub fn vertices_by_distance(&self, v: Vertex) -> &[Vertex] {
        &self.by_distance[v]
    }

    /// `|B(v, r)|`; saturates at the component size.
    #[inline]
    pub fn ball_size(&self, v: Vertex, r: usize) -> usize {
        let ends = &self.shell_ends[v];
        ends[r.min(ends.len() - 1)]
    }

    /// The closed ball `B(v, r)`. Members are listed in increasing id order.
    pub fn ball(&self, v: Vertex, r: usize) -> Ball {
        assert!(v < self.n, "vertex {v} out of range for n = {}", self.n);
        let size = self.ball_size(v, r);
        let mut members = self.by_distance[v][..size].to_vec();
        members.sort_unstable();
        Ball {
            center: v,
            radius: r,
            members,
        }
    }

    /// Vertices reachable from `v`, in increasing id order.
    pub fn component(&self, v: Vertex) -> Vec<Vertex> {
        self.ball(v, self.eccentricity(v)).members
    }

    /// Recognizes `K_n` and `S_n` (center 0) from the edge set. `K_1` and
    /// `K_2` are reported as complete.
    pub fn family(&self) -> Option<Family> {
        let n = self.n;
        let m = self.edges.len();
        if m == n * (n - 1) / 2 {
            return Some(Family::Complete);
        }
        if n >= 3 && m == n - 1 && self.adjacency[0].len() == n - 1 {
            return Some(Family::Star);
        }
        None
    }
}

fn check_min(family: Family, n: usize) -> Result<(), GraphError> {
    let min = family.min_vertices();
    if n < min {
        Err(GraphError::TooFewVertices {
            family: family.name(),
            n,
            min,
        })
    } else {
        Ok(())
    }
}

/// A closed ball `{m : d(center, m) <= radius}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub center: Vertex,
    pub radius: usize,
    pub members: Vec<Vertex>,
}

impl Ball {
    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(g.dist(0, 0), 0);
        assert_eq!(g.dist(0, 1), 1);
        assert_eq!(g.dist(1, 0), 1);
    }

    #[test]
    fn empty_graph_is_unreachable() {
        let g = Graph::new(3, &[]).unwrap();
        for u in 0..3 {
            for v in 0..3 {
                let expect = if u == v { 0 } else { UNREACHABLE };
                assert_eq!(g.dist(u, v), expect);
            }
        }
        assert_eq!(g.diameter(), 0);
        assert_eq!(g.ball(1, 5).members, vec![1]);
    }

    #[test]
    fn path_distances() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(g.dist(0, 3), 3);
        assert_eq!(g.diameter(), 3);
        assert_eq!(Graph::path(4).unwrap().diameter(), 3);
    }

    #[test]
    fn duplicates_and_orientation_are_canonicalized() {
        let g = Graph::new(3, &[(2, 1), (1, 2), (0, 2), (2, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 2), (1, 2)]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Graph::new(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
        assert_eq!(
            Graph::new(3, &[(1, 1)]),
            Err(GraphError::Loop { vertex: 1 })
        );
        assert_eq!(Graph::new(0, &[]), Err(GraphError::Empty));
        assert!(matches!(
            Graph::cycle(2),
            Err(GraphError::TooFewVertices { min: 3, .. })
        ));
        assert!(Graph::complete(0).is_err());
    }

    #[test]
    fn families() {
        let k3 = Graph::complete(3).unwrap();
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(k3.dist(u, v), u32::from(u != v));
            }
        }
        assert_eq!(Graph::complete(6).unwrap().edges().len(), 15);

        let s4 = Graph::star(4).unwrap();
        assert_eq!(s4.dist(1, 2), 2);
        for k in 1..4 {
            assert_eq!(s4.dist(0, k), 1);
        }
        assert_eq!(s4.edges().len(), 3);
        assert!(s4.edges().iter().all(|&(i, _)| i == 0));

        assert_eq!(Graph::star(2).unwrap(), Graph::complete(2).unwrap());
        assert_eq!(Graph::cycle(5).unwrap().diameter(), 2);
    }

    #[test]
    fn balls() {
        let k5 = Graph::complete(5).unwrap();
        assert_eq!(k5.ball(0, 0).members, vec![0]);
        assert_eq!(k5.ball(0, 1).members, vec![0, 1, 2, 3, 4]);
        let s5 = Graph::star(5).unwrap();
        let b = s5.ball(2, 1);
        assert_eq!(b.members, vec![0, 2]);
        assert!(b.contains(0) && b.contains(2) && !b.contains(1));
        assert_eq!(s5.ball_size(2, 1), 2);
        assert_eq!(s5.ball_size(2, 7), 5);
    }

    #[test]
    fn diameters() {
        for n in 2..7 {
            assert_eq!(Graph::complete(n).unwrap().diameter(), 1);
        }
        for n in 3..7 {
            assert_eq!(Graph::star(n).unwrap().diameter(), 2);
        }
    }

    #[test]
    fn disconnected_components() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        assert!(!g.is_connected());
        assert_eq!(g.component(0), vec![0, 1, 2]);
        assert_eq!(g.component(4), vec![3, 4]);
        assert_eq!(g.diameter(), 2);
        assert_eq!(g.ball(3, 10).members, vec![3, 4]);
    }

    #[test]
    fn family_detection() {
        assert_eq!(Graph::complete(5).unwrap().family(), Some(Family::Complete));
        assert_eq!(Graph::star(5).unwrap().family(), Some(Family::Star));
        assert_eq!(Graph::star(2).unwrap().family(), Some(Family::Complete));
        assert_eq!(Graph::star(3).unwrap().family(), Some(Family::Star));
        assert_eq!(Graph::path(4).unwrap().family(), None);
        // a star centered elsewhere is not the canonical labelling
        assert_eq!(Graph::new(3, &[(1, 0), (1, 2)]).unwrap().family(), None);
    }
}
