//! Interaction graphs: generators, edge-list I/O, distances and cuts.
//!
//! Vertices are `0..num_vertices`. Edges are stored with the smaller endpoint
//! first and keep their insertion order, so edge indices are stable and can be
//! used by schedules.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

/// Hard ceiling on generated graph sizes.
pub const MAX_VERTICES: usize = 1 << 28;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph too large: {0}")]
    Size(String),
    #[error("edge list line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph is disconnected ({reached} of {total} vertices reachable from 0)")]
    Disconnected { reached: usize, total: usize },
    #[error("invalid cut: {0}")]
    InvalidCut(String),
    #[error("invalid graph: {0}")]
    Invalid(String),
}

/// Immutable undirected simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list, validating every invariant.
    pub fn from_edges(
        num_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        allow_disconnected: bool,
    ) -> Result<Self, GraphError> {
        if num_vertices == 0 {
            return Err(GraphError::Invalid("graph needs at least one vertex".into()));
        }
        if num_vertices > MAX_VERTICES {
            return Err(GraphError::Size(format!(
                "{num_vertices} vertices exceeds the limit of {MAX_VERTICES}"
            )));
        }
        let mut graph = Graph {
            num_vertices,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); num_vertices],
        };
        for (u, v) in edges {
            graph.push_edge(u, v).map_err(GraphError::Invalid)?;
        }
        if !allow_disconnected {
            graph.check_connected()?;
        }
        Ok(graph)
    }

    // Generators call this with edges they know are valid.
    fn from_trusted(num_vertices: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); num_vertices];
        let edges: Vec<_> = edges
            .into_iter()
            .map(|(u, v)| {
                adjacency[u].push(v);
                adjacency[v].push(u);
                (u.min(v), u.max(v))
            })
            .collect();
        Graph {
            num_vertices,
            edges,
            adjacency,
        }
    }

    fn push_edge(&mut self, u: usize, v: usize) -> Result<(), String> {
        let n = self.num_vertices;
        if u >= n || v >= n {
            return Err(format!(
                "vertex index out of range in edge ({u}, {v}); graph has {n} vertices"
            ));
        }
        if u == v {
            return Err(format!("self-loop on vertex {u}"));
        }
        if self.adjacency[u].contains(&v) {
            return Err(format!("duplicate edge ({u}, {v})"));
        }
        self.adjacency[u].push(v);
        self.adjacency[v].push(u);
        self.edges.push((u.min(v), u.max(v)));
        Ok(())
    }

    fn check_connected(&self) -> Result<(), GraphError> {
        let reached = self.bfs_distances(0).iter().filter(|d| **d != usize::MAX).count();
        if reached == self.num_vertices {
            Ok(())
        } else {
            Err(GraphError::Disconnected {
                reached,
                total: self.num_vertices,
            })
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> (usize, usize) {
        self.edges[index]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Whether every vertex has degree at most `d²`, the hypothesis of the
    /// linear light-cone bound for local dimension `d`.
    pub fn degree_bounded_by_local_dim(&self, local_dim: u32) -> bool {
        (self.max_degree() as u64) <= u64::from(local_dim) * u64::from(local_dim)
    }

    pub fn is_connected(&self) -> bool {
        self.check_connected().is_ok()
    }

    /// BFS edge counts from `source`; unreachable vertices get `usize::MAX`.
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.num_vertices];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distance(&self, x: usize, y: usize) -> usize {
        self.bfs_distances(x)[y]
    }

    pub fn diameter(&self) -> usize {
        let (x, y) = self.farthest_pair();
        self.distance(x, y)
    }

    /// A pair at maximal distance; among ties the lexicographically smallest
    /// `(x, y)` with `x <= y`.
    pub fn farthest_pair(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut best_dist = 0;
        for x in 0..self.num_vertices {
            let dist = self.bfs_distances(x);
            for (y, &d) in dist.iter().enumerate().skip(x + 1) {
                if d != usize::MAX && d > best_dist {
                    best_dist = d;
                    best = (x, y);
                }
            }
        }
        best
    }

    /// Number of edges with exactly one endpoint in `cut.side_a`.
    pub fn cut_size(&self, cut: &Cut) -> Result<usize, GraphError> {
        cut.check_for(self)?;
        Ok(self
            .edges
            .iter()
            .filter(|&&(u, v)| cut.contains(u) != cut.contains(v))
            .count())
    }

    /// Indices of the edges crossing `cut`.
    pub fn crossing_edges(&self, cut: &Cut) -> Result<Vec<usize>, GraphError> {
        cut.check_for(self)?;
        Ok(self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| cut.contains(u) != cut.contains(v))
            .map(|(i, _)| i)
            .collect())
    }

    /// Serializes to the `p <n>` / `u v` edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("p {}\n", self.num_vertices);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the edge-list text format. Blank lines and lines starting with
    /// `#` are ignored.
    pub fn from_edge_list(text: &str, allow_disconnected: bool) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let parse_err = |line: usize, message: String| GraphError::Parse { line, message };

        let (header_line, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing `p <num_vertices>` header".into()))?;
        let mut fields = header.split_whitespace();
        let n = match (fields.next(), fields.next(), fields.next()) {
            (Some("p"), Some(n), None) => n
                .parse::<usize>()
                .map_err(|e| parse_err(header_line, format!("bad vertex count `{n}`: {e}")))?,
            _ => {
                return Err(parse_err(
                    header_line,
                    format!("expected `p <num_vertices>`, found `{header}`"),
                ))
            }
        };
        if n == 0 {
            return Err(parse_err(header_line, "vertex count must be positive".into()));
        }
        if n > MAX_VERTICES {
            return Err(GraphError::Size(format!(
                "{n} vertices exceeds the limit of {MAX_VERTICES}"
            )));
        }

        let mut graph = Graph {
            num_vertices: n,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
        };
        for (line, content) in lines {
            let mut fields = content.split_whitespace();
            let (u, v) = match (fields.next(), fields.next(), fields.next()) {
                (Some(u), Some(v), None) => (u, v),
                _ => return Err(parse_err(line, format!("expected `u v`, found `{content}`"))),
            };
            let u = u
                .parse::<usize>()
                .map_err(|e| parse_err(line, format!("bad vertex `{u}`: {e}")))?;
            let v = v
                .parse::<usize>()
                .map_err(|e| parse_err(line, format!("bad vertex `{v}`: {e}")))?;
            graph.push_edge(u, v).map_err(|m| parse_err(line, m))?;
        }
        if !allow_disconnected {
            graph.check_connected()?;
        }
        Ok(graph)
    }
}

/// A bipartition of the vertex set, stored as membership of side A.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    in_a: Vec<bool>,
    size_a: usize,
}

impl Cut {
    pub fn new(num_vertices: usize, side_a: impl IntoIterator<Item = usize>) -> Result<Self, GraphError> {
        let mut in_a = vec![false; num_vertices];
        for v in side_a {
            if v >= num_vertices {
                return Err(GraphError::InvalidCut(format!(
                    "vertex {v} out of range for {num_vertices} vertices"
                )));
            }
            in_a[v] = true;
        }
        let size_a = in_a.iter().filter(|b| **b).count();
        if size_a == 0 || size_a == num_vertices {
            return Err(GraphError::InvalidCut(format!(
                "side A has {size_a} of {num_vertices} vertices; it must be non-empty and proper"
            )));
        }
        Ok(Cut { in_a, size_a })
    }

    /// The subtree hanging off vertex 1 of a heap-ordered `arity`-ary tree.
    pub fn tree_left_subtree(g: &Graph, arity: usize) -> Result<Self, GraphError> {
        let n = g.num_vertices();
        if n < 3 || arity < 2 {
            return Err(GraphError::InvalidCut("tree too small for a left subtree".into()));
        }
        let mut side = Vec::new();
        let mut frontier = vec![1usize];
        while let Some(v) = frontier.pop() {
            side.push(v);
            for c in 1..=arity {
                let child = v * arity + c;
                if child < n {
                    frontier.push(child);
                }
            }
        }
        Cut::new(n, side)
    }

    /// The first clique of a dumbbell built by [`build_dumbbell`].
    pub fn dumbbell_half(g: &Graph) -> Result<Self, GraphError> {
        Cut::new(g.num_vertices(), 0..g.num_vertices() / 2)
    }

    /// Vertices whose first lattice coordinate is below half the first side.
    pub fn lattice_half(dims: &[usize]) -> Result<Self, GraphError> {
        let n: usize = dims.iter().product();
        let stride = n / dims[0];
        Cut::new(n, 0..(dims[0] / 2) * stride)
    }

    pub fn num_vertices(&self) -> usize {
        self.in_a.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.in_a[v]
    }

    pub fn side_a(&self) -> Vec<usize> {
        (0..self.in_a.len()).filter(|&v| self.in_a[v]).collect()
    }

    pub fn side_b(&self) -> Vec<usize> {
        (0..self.in_a.len()).filter(|&v| !self.in_a[v]).collect()
    }

    pub fn size_a(&self) -> usize {
        self.size_a
    }

    pub fn size_b(&self) -> usize {
        self.in_a.len() - self.size_a
    }

    pub fn min_side(&self) -> usize {
        self.size_a.min(self.size_b())
    }

    pub fn complement(&self) -> Cut {
        Cut {
            in_a: self.in_a.iter().map(|b| !b).collect(),
            size_a: self.size_b(),
        }
    }

    fn check_for(&self, g: &Graph) -> Result<(), GraphError> {
        if self.in_a.len() != g.num_vertices() {
            return Err(GraphError::InvalidCut(format!(
                "cut covers {} vertices but graph has {}",
                self.in_a.len(),
                g.num_vertices()
            )));
        }
        Ok(())
    }
}

fn size_error(what: &str) -> GraphError {
    GraphError::Size(format!("{what} overflows the vertex limit of {MAX_VERTICES}"))
}

fn checked_count(count: Option<usize>, what: &str) -> Result<usize, GraphError> {
    match count {
        Some(n) if n <= MAX_VERTICES => Ok(n),
        _ => Err(size_error(what)),
    }
}

/// Perfect binary tree in heap order: root 0, children of `i` are `2i+1`, `2i+2`.
pub fn build_binary_tree(depth: u32) -> Result<Graph, GraphError> {
    build_zary_tree(2, depth)
}

/// Perfect `z`-ary tree in heap order: children of `i` are `z·i+1 ..= z·i+z`.
pub fn build_zary_tree(z: usize, depth: u32) -> Result<Graph, GraphError> {
    if z < 2 {
        return Err(GraphError::Invalid(format!("tree arity must be at least 2, got {z}")));
    }
    // (z^(depth+1) - 1) / (z - 1), accumulated level by level.
    let mut total: Option<usize> = Some(0);
    let mut level: Option<usize> = Some(1);
    for _ in 0..=depth {
        total = total.zip(level).and_then(|(t, l)| t.checked_add(l));
        level = level.and_then(|l| l.checked_mul(z));
        if total.is_none_or(|t| t > MAX_VERTICES) {
            break;
        }
    }
    let n = checked_count(total, &format!("{z}-ary tree of depth {depth}"))?;
    let edges = (1..n).map(|v| ((v - 1) / z, v)).collect();
    Ok(Graph::from_trusted(n, edges))
}

/// Open-boundary hypercubic grid, row-major (last coordinate fastest).
pub fn build_lattice(dims: &[usize]) -> Result<Graph, GraphError> {
    if dims.is_empty() {
        return Err(GraphError::Invalid("lattice needs at least one dimension".into()));
    }
    if let Some(bad) = dims.iter().find(|&&s| s == 0) {
        return Err(GraphError::Invalid(format!(
            "lattice side length {bad} must be at least 1"
        )));
    }
    let n = checked_count(
        dims.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s)),
        &format!("lattice {dims:?}"),
    )?;
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let mut edges = Vec::new();
    for v in 0..n {
        for (k, &side) in dims.iter().enumerate() {
            let coord = (v / strides[k]) % side;
            if coord + 1 < side {
                edges.push((v, v + strides[k]));
            }
        }
    }
    Ok(Graph::from_trusted(n, edges))
}

/// Two copies of `K_m` (vertices `0..m` and `m..2m`) joined by the edge `(m-1, m)`.
pub fn build_dumbbell(m: usize) -> Result<Graph, GraphError> {
    if m < 2 {
        return Err(GraphError::Invalid(format!(
            "dumbbell clique size must be at least 2, got {m}"
        )));
    }
    let n = checked_count(m.checked_mul(2), &format!("dumbbell m={m}"))?;
    let mut edges = Vec::with_capacity(m * (m - 1) + 1);
    for offset in [0, m] {
        for u in 0..m {
            for v in u + 1..m {
                edges.push((offset + u, offset + v));
            }
        }
    }
    edges.push((m - 1, m));
    Ok(Graph::from_trusted(n, edges))
}

pub fn build_complete(n: usize) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(GraphError::Invalid(format!("complete graph needs n >= 2, got {n}")));
    }
    let n = checked_count(Some(n), "complete graph")?;
    checked_count(n.checked_mul(n - 1), "complete graph edge count")?;
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Ok(Graph::from_trusted(n, edges))
}

/// Star with hub 0 and leaves `1..n`.
pub fn build_star(n: usize) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(GraphError::Invalid(format!("star needs n >= 2, got {n}")));
    }
    let n = checked_count(Some(n), "star")?;
    Ok(Graph::from_trusted(n, (1..n).map(|v| (0, v)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binary_tree_counts() {
        let g = build_binary_tree(0).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (1, 0));
        let g = build_binary_tree(4).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges(), g.diameter()), (31, 30, 8));
        assert_eq!(g.max_degree(), 3);
        assert!(g.degree_bounded_by_local_dim(2));
        assert!(g.neighbors(3).contains(&7) && g.neighbors(3).contains(&8));
    }

    #[test]
    fn binary_tree_farthest_pair_depth3() {
        let g = build_binary_tree(3).unwrap();
        let (x, y) = g.farthest_pair();
        assert_eq!(g.distance(x, y), 6);
        // Leaves are 7..15; 7 lies under vertex 1 and y must lie under vertex 2.
        assert_eq!((x, y), (7, 11));
    }

    #[test]
    fn huge_tree_is_a_size_error() {
        assert!(matches!(build_binary_tree(200), Err(GraphError::Size(_))));
        assert!(matches!(build_zary_tree(1000, 40), Err(GraphError::Size(_))));
        assert!(matches!(build_lattice(&[1 << 20, 1 << 20]), Err(GraphError::Size(_))));
    }

    #[test]
    fn zary_trees() {
        for depth in 0..6 {
            assert_eq!(build_zary_tree(2, depth).unwrap(), build_binary_tree(depth).unwrap());
        }
        let g = build_zary_tree(4, 2).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (21, 20));
        let g = build_zary_tree(3, 1).unwrap();
        assert_eq!((g.num_vertices(), g.max_degree()), (4, 3));
        assert!(build_zary_tree(1, 3).is_err());
    }

    #[test]
    fn lattices() {
        let g = build_lattice(&[5]).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges(), g.diameter()), (5, 4, 4));
        let g = build_lattice(&[3, 3]).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (9, 12));
        let g = build_lattice(&[2, 2, 2]).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (8, 12));
        assert!((0..8).all(|v| g.degree(v) == 3));
        assert!(build_lattice(&[]).is_err());
        assert!(build_lattice(&[3, 0]).is_err());
    }

    #[test]
    fn dumbbells() {
        let g = build_dumbbell(2).unwrap();
        assert_eq!(g.num_edges(), 3);
        assert_eq!(g.diameter(), 3);
        assert_eq!(g.max_degree(), 2);

        let g = build_dumbbell(4).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (8, 13));
        assert_eq!(g.cut_size(&Cut::dumbbell_half(&g).unwrap()).unwrap(), 1);
        assert_eq!(g.distance(0, 7), 3);
        assert_eq!(g.diameter(), 3);

        assert_eq!(build_dumbbell(3).unwrap().diameter(), 3);
        assert!(build_dumbbell(1).is_err());
    }

    #[test]
    fn complete_and_star() {
        assert_eq!(build_complete(3).unwrap().num_edges(), 3);
        let k5 = build_complete(5).unwrap();
        assert_eq!((k5.num_edges(), k5.diameter()), (10, 1));
        let s = build_star(5).unwrap();
        assert_eq!((s.num_edges(), s.degree(0)), (4, 4));
        assert!(build_star(1).is_err());
        assert!(build_complete(1).is_err());
    }

    #[test]
    fn cuts() {
        let tree = build_binary_tree(4).unwrap();
        let left = Cut::tree_left_subtree(&tree, 2).unwrap();
        assert_eq!(left.size_a(), 15);
        assert_eq!(tree.cut_size(&left).unwrap(), 1);

        let grid = build_lattice(&[3, 3]).unwrap();
        let column = Cut::new(9, [0, 3, 6]).unwrap();
        assert_eq!(grid.cut_size(&column).unwrap(), 3);

        assert!(matches!(Cut::new(3, []), Err(GraphError::InvalidCut(_))));
        assert!(matches!(Cut::new(3, [0, 1, 2]), Err(GraphError::InvalidCut(_))));
        assert!(matches!(Cut::new(3, [5]), Err(GraphError::InvalidCut(_))));
        assert!(tree.cut_size(&column).is_err());
    }

    #[test]
    fn edge_list_parsing() {
        let g = Graph::from_edge_list("p 2\n0 1", false).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (2, 1));

        let tree = build_binary_tree(2).unwrap();
        assert_eq!(Graph::from_edge_list(&tree.to_edge_list(), false).unwrap(), tree);

        let dup = Graph::from_edge_list("p 3\n0 1\n0 1", false).unwrap_err();
        assert!(matches!(dup, GraphError::Parse { line: 3, .. }), "{dup}");
        assert!(matches!(
            Graph::from_edge_list("p 3\n0 0\n", false),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Graph::from_edge_list("p 3\n0 1\n1 7\n", false),
            Err(GraphError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            Graph::from_edge_list("p 3\n0 1 2\n", false),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Graph::from_edge_list("0 1\n", false),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Graph::from_edge_list("p 4\n0 1\n2 3\n", false),
            Err(GraphError::Disconnected { reached: 2, total: 4 })
        ));
        assert!(Graph::from_edge_list("p 4\n0 1\n2 3\n", true).is_ok());
    }

    fn any_generated() -> impl Strategy<Value = Graph> {
        prop_oneof![
            (0u32..7).prop_map(|d| build_binary_tree(d).unwrap()),
            (2usize..5, 0u32..4).prop_map(|(z, d)| build_zary_tree(z, d).unwrap()),
            proptest::collection::vec(1usize..5, 1..4).prop_map(|dims| build_lattice(&dims).unwrap()),
            (2usize..8).prop_map(|m| build_dumbbell(m).unwrap()),
            (2usize..9).prop_map(|n| build_complete(n).unwrap()),
            (2usize..9).prop_map(|n| build_star(n).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn generators_are_valid_simple_graphs(g in any_generated()) {
            prop_assert!(g.is_connected());
            let n = g.num_vertices();
            let mut seen = std::collections::HashSet::new();
            for &(u, v) in g.edges() {
                prop_assert!(u < v && v < n);
                prop_assert!(seen.insert((u, v)));
                prop_assert!(g.neighbors(u).contains(&v) && g.neighbors(v).contains(&u));
            }
            let degree_sum: usize = (0..n).map(|v| g.degree(v)).sum();
            prop_assert_eq!(degree_sum, 2 * g.num_edges());
            prop_assert_eq!(Graph::from_edge_list(&g.to_edge_list(), false).unwrap(), g);
        }

        #[test]
        fn binary_tree_shape(h in 0u32..9) {
            let g = build_binary_tree(h).unwrap();
            prop_assert_eq!(g.num_vertices(), (1usize << (h + 1)) - 1);
            prop_assert!(g.max_degree() <= 3);
            prop_assert_eq!(g.diameter(), 2 * h as usize);
        }

        #[test]
        fn distance_is_a_metric(g in any_generated(), a in 0usize..1000, b in 0usize..1000, c in 0usize..1000) {
            let n = g.num_vertices();
            let (a, b, c) = (a % n, b % n, c % n);
            prop_assert_eq!(g.distance(a, a), 0);
            prop_assert_eq!(g.distance(a, b), g.distance(b, a));
            prop_assert!(g.distance(a, c) <= g.distance(a, b) + g.distance(b, c));
        }

        #[test]
        fn cut_size_is_symmetric(g in any_generated(), mask in proptest::collection::vec(any::<bool>(), 64)) {
            let n = g.num_vertices();
            prop_assume!(n >= 2);
            let side: Vec<usize> = (0..n).filter(|&v| mask[v % 64] ^ (v == 0)).collect();
            prop_assume!(!side.is_empty() && side.len() < n);
            let cut = Cut::new(n, side).unwrap();
            prop_assert_eq!(g.cut_size(&cut).unwrap(), g.cut_size(&cut.complement()).unwrap());
        }
    }
}
