//! Immutable simple undirected graphs over dense `u32` vertex ids, plus the
//! degree and peeling primitives the rest of the crate is built on.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Graphs with at most this many vertices also keep a bitset adjacency matrix.
pub const DEFAULT_DENSE_THRESHOLD: usize = 512;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: u32, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("vertex set is empty")]
    EmptySet,
    #[error("average degree is undefined on the graph with no vertices")]
    NoVertices,
}

/// A set of vertex ids, kept sorted and duplicate-free.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<u32>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    /// Wraps a vector that is already strictly increasing.
    pub(crate) fn from_sorted(ids: Vec<u32>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        VertexSet(ids)
    }

    pub fn range(n: usize) -> Self {
        VertexSet((0..n as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    /// Position of `v` within the sorted members.
    pub fn index_of(&self, v: u32) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }
}

impl FromIterator<u32> for VertexSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        let mut ids: Vec<u32> = iter.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        VertexSet(ids)
    }
}

impl From<Vec<u32>> for VertexSet {
    fn from(ids: Vec<u32>) -> Self {
        ids.into_iter().collect()
    }
}

impl<const N: usize> From<[u32; N]> for VertexSet {
    fn from(ids: [u32; N]) -> Self {
        ids.into_iter().collect()
    }
}

/// Result of min-degree peeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degeneracy {
    pub d: usize,
    pub ordering: Vec<u32>,
}

/// Simple undirected graph. Neighbor lists are sorted; small graphs also
/// carry a bitset adjacency matrix for constant-time edge queries.
#[derive(Debug, Clone)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    edge_count: usize,
    dense: Option<Vec<FixedBitSet>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self::from_adjacency(vec![Vec::new(); n], DEFAULT_DENSE_THRESHOLD)
    }

    /// Builds a graph from an edge iterator. Duplicate edges collapse, edge
    /// orientation is irrelevant.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self::from_adjacency(adj, DEFAULT_DENSE_THRESHOLD))
    }

    fn from_adjacency(adj: Vec<Vec<u32>>, dense_threshold: usize) -> Self {
        let edge_count = adj.iter().map(Vec::len).sum::<usize>() / 2;
        let n = adj.len();
        let dense = (n <= dense_threshold).then(|| {
            adj.iter()
                .map(|list| {
                    let mut row = FixedBitSet::with_capacity(n);
                    for &v in list {
                        row.insert(v as usize);
                    }
                    row
                })
                .collect()
        });
        Graph {
            adj,
            edge_count,
            dense,
        }
    }

    /// Rebuilds the storage choice for a different bitset threshold.
    pub fn with_dense_threshold(self, threshold: usize) -> Self {
        Self::from_adjacency(self.adj, threshold)
    }

    pub fn has_dense_rows(&self) -> bool {
        self.dense.is_some()
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        match &self.dense {
            Some(rows) => rows[u as usize].contains(v as usize),
            None => self.adj[u as usize].binary_search(&v).is_ok(),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as u32;
            list.iter().filter(move |&&v| v > u).map(move |&v| (u, v))
        })
    }

    fn check_set(&self, x: &VertexSet) -> Result<(), GraphError> {
        match x.as_slice().last() {
            Some(&v) if v as usize >= self.n() => Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            }),
            _ => Ok(()),
        }
    }

    /// Number of neighbors of `v` inside the sorted set `x`.
    pub fn degree_within(&self, v: u32, x: &VertexSet) -> usize {
        sorted_intersection_len(self.neighbors(v), x.as_slice())
    }

    /// Neighbors of `v` that lie in `x`, as a sorted set.
    pub fn neighbors_within(&self, v: u32, x: &VertexSet) -> VertexSet {
        let (a, b) = (self.neighbors(v), x.as_slice());
        let mut out = Vec::with_capacity(a.len().min(b.len()));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        VertexSet::from_sorted(out)
    }

    /// The subgraph induced on `x`. New vertex `i` is the `i`-th smallest
    /// member of `x`; the returned map sends new ids to old ids. Because the
    /// relabelling preserves order, smallest-id tie-breaking is reproduced
    /// exactly inside the subgraph.
    pub fn induced_subgraph(&self, x: &VertexSet) -> Result<(Graph, Vec<u32>), GraphError> {
        self.check_set(x)?;
        let adj = x
            .iter()
            .map(|u| {
                let mut list = Vec::new();
                let (a, b) = (self.neighbors(u), x.as_slice());
                let (mut i, mut j) = (0, 0);
                while i < a.len() && j < b.len() {
                    match a[i].cmp(&b[j]) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            list.push(j as u32);
                            i += 1;
                            j += 1;
                        }
                    }
                }
                list
            })
            .collect();
        Ok((
            Self::from_adjacency(adj, DEFAULT_DENSE_THRESHOLD),
            x.as_slice().to_vec(),
        ))
    }

    /// Vertex of minimum degree in `G[x]`, ties broken by smallest id.
    pub fn min_degree_vertex(&self, x: &VertexSet) -> Result<u32, GraphError> {
        self.check_set(x)?;
        x.iter()
            .map(|v| (self.degree_within(v, x), v))
            .min()
            .map(|(_, v)| v)
            .ok_or(GraphError::EmptySet)
    }

    /// Min-degree peeling of `G[x]`: each entry is the removed vertex and its
    /// degree in what remained just before removal.
    pub fn peel(&self, x: &VertexSet) -> Result<Vec<(u32, usize)>, GraphError> {
        self.check_set(x)?;
        let mut degree = vec![0usize; self.n()];
        let mut alive = vec![false; self.n()];
        let mut queue = BTreeSet::new();
        for v in x.iter() {
            alive[v as usize] = true;
        }
        for v in x.iter() {
            let d = self.degree_within(v, x);
            degree[v as usize] = d;
            queue.insert((d, v));
        }
        let mut out = Vec::with_capacity(x.len());
        while let Some((d, v)) = queue.pop_first() {
            alive[v as usize] = false;
            out.push((v, d));
            for &w in self.neighbors(v) {
                if alive[w as usize] {
                    let dw = degree[w as usize];
                    queue.remove(&(dw, w));
                    degree[w as usize] = dw - 1;
                    queue.insert((dw - 1, w));
                }
            }
        }
        Ok(out)
    }

    pub fn degeneracy(&self) -> Degeneracy {
        let peeled = self
            .peel(&VertexSet::range(self.n()))
            .expect("full vertex range is always valid");
        Degeneracy {
            d: peeled.iter().map(|&(_, d)| d).max().unwrap_or(0),
            ordering: peeled.into_iter().map(|(v, _)| v).collect(),
        }
    }

    /// `2|E| / n` as an exact fraction.
    pub fn average_degree(&self) -> Result<Ratio<u64>, GraphError> {
        if self.n() == 0 {
            return Err(GraphError::NoVertices);
        }
        Ok(Ratio::new(2 * self.edge_count as u64, self.n() as u64))
    }

    /// Parses the native edge-list format: a header `n m`, then `m` lines
    /// `u v`. Lines starting with `#` and blank lines are skipped. `m` must
    /// equal the number of distinct edges.
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut header: Option<(usize, usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields = parse_fields(trimmed, 2, line)?;
            match header {
                None => header = Some((fields[0] as usize, fields[1] as usize, line)),
                Some((n, _, _)) => edges.push(parse_edge(fields[0], fields[1], n, line)?),
            }
        }
        let (n, m, header_line) = header.ok_or(GraphError::Parse {
            line: 0,
            msg: "missing `n m` header".into(),
        })?;
        if n > u32::MAX as usize {
            return Err(GraphError::Parse {
                line: header_line,
                msg: format!("vertex count {n} too large"),
            });
        }
        let g = Graph::from_edges(n, edges)?;
        if g.edge_count() != m {
            return Err(GraphError::Parse {
                line: header_line,
                msg: format!(
                    "header declares {m} edges but {} distinct edges were listed",
                    g.edge_count()
                ),
            });
        }
        Ok(g)
    }

    /// Parses DIMACS `.col` text (`p edge n m`, `e u v` with 1-based ids).
    /// Duplicate edges (common in the benchmark files) are collapsed and the
    /// declared edge count is not enforced.
    pub fn parse_dimacs(text: &str) -> Result<Graph, GraphError> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let mut parts = raw.split_whitespace();
            match parts.next() {
                None | Some("c") => {}
                Some("p") => {
                    let rest: Vec<&str> = parts.collect();
                    if rest.len() != 3 {
                        return Err(GraphError::Parse {
                            line,
                            msg: "expected `p edge <n> <m>`".into(),
                        });
                    }
                    let count = rest[1].parse::<usize>().map_err(|_| GraphError::Parse {
                        line,
                        msg: format!("invalid vertex count `{}`", rest[1]),
                    })?;
                    n = Some(count);
                }
                Some("e") => {
                    let count = n.ok_or(GraphError::Parse {
                        line,
                        msg: "edge line before `p` header".into(),
                    })?;
                    let rest: Vec<&str> = parts.collect();
                    let fields = parse_fields(&rest.join(" "), 2, line)?;
                    if fields[0] == 0 || fields[1] == 0 {
                        return Err(GraphError::Parse {
                            line,
                            msg: "DIMACS vertex ids are 1-based".into(),
                        });
                    }
                    edges.push(parse_edge(fields[0] - 1, fields[1] - 1, count, line)?);
                }
                Some(other) => {
                    return Err(GraphError::Parse {
                        line,
                        msg: format!("unknown DIMACS line type `{other}`"),
                    })
                }
            }
        }
        let n = n.ok_or(GraphError::Parse {
            line: 0,
            msg: "missing `p edge` header".into(),
        })?;
        Graph::from_edges(n, edges)
    }

    /// Canonical edge-list text: header, then edges `u v` with `u < v` in
    /// lexicographic order, newline-terminated.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.n(), self.edge_count()).unwrap();
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }
}

fn parse_fields(line_text: &str, expected: usize, line: usize) -> Result<Vec<u64>, GraphError> {
    let fields: Vec<&str> = line_text.split_whitespace().collect();
    if fields.len() != expected {
        return Err(GraphError::Parse {
            line,
            msg: format!("expected {expected} integers, found `{line_text}`"),
        });
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<u64>().map_err(|_| GraphError::Parse {
                line,
                msg: format!("`{f}` is not a non-negative integer"),
            })
        })
        .collect()
}

fn parse_edge(u: u64, v: u64, n: usize, line: usize) -> Result<(u32, u32), GraphError> {
    for w in [u, v] {
        if w >= n as u64 {
            return Err(GraphError::Parse {
                line,
                msg: format!("vertex {w} out of range for n = {n}"),
            });
        }
    }
    if u == v {
        return Err(GraphError::Parse {
            line,
            msg: format!("self-loop at vertex {u}"),
        });
    }
    Ok((u as u32, v as u32))
}

fn sorted_intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: u32) -> Graph {
        Graph::from_edges(
            n as usize,
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))),
        )
        .unwrap()
    }

    fn cycle(n: u32) -> Graph {
        Graph::from_edges(n as usize, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn path_power(n: u32, k: u32) -> Graph {
        Graph::from_edges(
            n as usize,
            (0..n).flat_map(|u| (u + 1..n.min(u + k + 1)).map(move |v| (u, v))),
        )
        .unwrap()
    }

    #[test]
    fn parses_path() {
        let g = Graph::parse_edge_list("3 2\n0 1\n1 2").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(1, 0) && g.has_edge(1, 2) && !g.has_edge(0, 2));
    }

    #[test]
    fn parses_isolated_vertex() {
        let g = Graph::parse_edge_list("1 0").unwrap();
        assert_eq!((g.n(), g.edge_count()), (1, 0));
    }

    #[test]
    fn duplicate_edges_break_declared_count() {
        let err = Graph::parse_edge_list("3 3\n0 1\n0 1\n1 2").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }), "{err}");
        // with the right count the duplicate is just collapsed
        let g = Graph::parse_edge_list("3 2\n0 1\n0 1\n1 2").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let cases = [
            ("3 1\n# comment\n0 3", 3),
            ("3 1\n1 1", 2),
            ("3 1\n0 x", 2),
            ("3 1\n0 1 2", 2),
        ];
        for (text, line) in cases {
            match Graph::parse_edge_list(text) {
                Err(GraphError::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn dimacs_is_one_based() {
        let g = Graph::parse_dimacs("c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        assert_eq!(g, complete(3));
        assert!(Graph::parse_dimacs("p edge 3 1\ne 0 1\n").is_err());
        assert!(Graph::parse_dimacs("p edge 3 1\ne 1 4\n").is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = cycle(7);
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn induced_subgraph_examples() {
        let (k3, map) = complete(4)
            .induced_subgraph(&VertexSet::from([0, 1, 2]))
            .unwrap();
        assert_eq!(k3, complete(3));
        assert_eq!(map, vec![0, 1, 2]);

        let (empty, map) = cycle(5).induced_subgraph(&VertexSet::new()).unwrap();
        assert_eq!((empty.n(), map.len()), (0, 0));

        let (h, map) = cycle(5)
            .induced_subgraph(&VertexSet::from([0, 1, 3]))
            .unwrap();
        assert_eq!(h, Graph::from_edges(3, [(0, 1)]).unwrap());
        assert_eq!(map, vec![0, 1, 3]);

        assert!(matches!(
            cycle(5).induced_subgraph(&VertexSet::from([2, 5])),
            Err(GraphError::VertexOutOfRange { vertex: 5, n: 5 })
        ));
    }

    #[test]
    fn min_degree_vertex_examples() {
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(star.min_degree_vertex(&VertexSet::range(4)).unwrap(), 1);
        assert_eq!(
            complete(5).min_degree_vertex(&VertexSet::range(5)).unwrap(),
            0
        );
        // P_6^2 degrees: 2 3 4 4 3 2
        let sq = path_power(6, 2);
        let degrees: Vec<usize> = (0..6).map(|v| sq.degree(v)).collect();
        assert_eq!(degrees, vec![2, 3, 4, 4, 3, 2]);
        assert_eq!(sq.min_degree_vertex(&VertexSet::range(6)).unwrap(), 0);
        assert_eq!(
            sq.min_degree_vertex(&VertexSet::new()),
            Err(GraphError::EmptySet)
        );
    }

    #[test]
    fn degeneracy_examples() {
        let tree = Graph::from_edges(5, [(0, 1), (0, 2), (2, 3), (2, 4)]).unwrap();
        assert_eq!(tree.degeneracy().d, 1);
        assert_eq!(complete(5).degeneracy().d, 4);
        let p = path_power(20, 3);
        let deg = p.degeneracy();
        assert_eq!(deg.d, 3);
        assert_eq!(deg.ordering.len(), 20);
        assert_eq!(deg.ordering[0], 0);
    }

    #[test]
    fn average_degree_examples() {
        assert_eq!(
            complete(4).average_degree().unwrap(),
            Ratio::from_integer(3)
        );
        assert_eq!(
            Graph::empty(5).average_degree().unwrap(),
            Ratio::from_integer(0)
        );
        assert_eq!(cycle(5).average_degree().unwrap(), Ratio::from_integer(2));
        assert_eq!(
            Graph::empty(0).average_degree(),
            Err(GraphError::NoVertices)
        );
    }

    #[test]
    fn sparse_storage_agrees_with_dense() {
        let dense = path_power(40, 3);
        let sparse = dense.clone().with_dense_threshold(8);
        assert!(dense.has_dense_rows() && !sparse.has_dense_rows());
        for u in 0..40 {
            for v in 0..40 {
                assert_eq!(dense.has_edge(u, v), sparse.has_edge(u, v));
            }
        }
        assert_eq!(dense.degeneracy(), sparse.degeneracy());
    }
}
