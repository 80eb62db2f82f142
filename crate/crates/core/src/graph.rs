//! Simple undirected graphs, edge-list ingestion and the per-node / per-edge
//! statistics the estimators need.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};

/// Node identifier. Graphs are compact: ids run over `0..node_count`.
pub type NodeId = u32;

/// A simple undirected graph stored as sorted adjacency lists.
///
/// No self-loops, no parallel edges, symmetric adjacency. Immutable once
/// built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    adjacency: Vec<NodeId>,
    edges: Vec<(NodeId, NodeId)>,
}

impl Graph {
    /// Builds a simple graph on `node_count` nodes. Self-loops are dropped and
    /// duplicate or reversed pairs collapse to one edge.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut pairs: Vec<(NodeId, NodeId)> = Vec::new();
        for (u, v) in edges {
            if u as usize >= node_count || v as usize >= node_count {
                return Err(Error::invalid(format!("edge ({u}, {v}) out of range for {node_count} nodes")));
            }
            if u == v {
                continue;
            }
            pairs.push(if u < v { (u, v) } else { (v, u) });
        }
        pairs.sort_unstable();
        pairs.dedup();

        let mut degree = vec![0usize; node_count];
        for &(u, v) in &pairs {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(node_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..node_count].to_vec();
        let mut adjacency = vec![0; offsets[node_count]];
        for &(u, v) in &pairs {
            adjacency[fill[u as usize]] = v;
            fill[u as usize] += 1;
            adjacency[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for i in 0..node_count {
            adjacency[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Ok(Graph { offsets, adjacency, edges: pairs })
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Undirected edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        let i = node as usize;
        &self.adjacency[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        let i = node as usize;
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Number of directed edges, `2E`.
    pub fn directed_edge_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Position of the directed edge `u -> v` in the canonical (lexicographic)
    /// ordering of directed edges.
    pub fn directed_edge_index(&self, u: NodeId, v: NodeId) -> Option<usize> {
        self.neighbors(u).binary_search(&v).ok().map(|pos| self.offsets[u as usize] + pos)
    }

    /// Directed edges `(u, v)` in canonical order.
    pub fn directed_edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count() as NodeId).flat_map(move |u| self.neighbors(u).iter().map(move |&v| (u, v)))
    }

    /// Connected components as node lists, each sorted ascending, ordered by
    /// their smallest node.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            stack.push(start as NodeId);
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &v in self.neighbors(u) {
                    if !seen[v as usize] {
                        seen[v as usize] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() > 0 && self.components().len() == 1
    }

    /// Subgraph induced by `nodes` (ascending), relabelled `0..nodes.len()`
    /// in that order.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Graph {
        let mut new_id = BTreeMap::new();
        for (i, &u) in nodes.iter().enumerate() {
            new_id.insert(u, i as NodeId);
        }
        let edges = self.edges.iter().filter_map(|&(u, v)| match (new_id.get(&u), new_id.get(&v)) {
            (Some(&a), Some(&b)) => Some((a, b)),
            _ => None,
        });
        Graph::from_edges(nodes.len(), edges).expect("induced edges are in range")
    }

    /// Edge list text: one `u v` line per edge, `u < v`, ascending.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(self.edges.len() * 8);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// A graph together with the original label of every compact node id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: Vec<i64>,
}

impl LabeledGraph {
    /// Edges in terms of original labels, each pair ordered and the list sorted.
    pub fn labeled_edges(&self) -> Vec<(i64, i64)> {
        let mut out: Vec<(i64, i64)> = self
            .graph
            .edges()
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (self.labels[u as usize], self.labels[v as usize]);
                if a < b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// Parses a whitespace-separated edge list.
///
/// Lines starting with `%` or `#` are comments; columns past the second are
/// ignored. Labels are compacted to `0..N` in order of first appearance.
pub fn parse_edge_list(text: &str) -> Result<LabeledGraph> {
    let mut ids: BTreeMap<i64, NodeId> = BTreeMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut data_lines = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let mut endpoint = |tok: Option<&str>| -> Result<NodeId> {
            let tok = tok.ok_or_else(|| Error::Parse { line: idx + 1, message: "expected two node labels".into() })?;
            let label: i64 = tok
                .parse()
                .map_err(|_| Error::Parse { line: idx + 1, message: format!("invalid node label `{tok}`") })?;
            Ok(*ids.entry(label).or_insert_with(|| {
                labels.push(label);
                (labels.len() - 1) as NodeId
            }))
        };
        let u = endpoint(tokens.next())?;
        let v = endpoint(tokens.next())?;
        edges.push((u, v));
        data_lines += 1;
    }
    if data_lines == 0 {
        return Err(Error::EmptyInput);
    }
    let graph = Graph::from_edges(labels.len(), edges)?;
    Ok(LabeledGraph { graph, labels })
}

/// Largest connected component and the map from its node ids to the ids in
/// `g`. Equal-sized components resolve to the one holding the smallest id.
pub fn largest_connected_component(g: &Graph) -> Result<(Graph, Vec<NodeId>)> {
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let comps = g.components();
    // components are ordered by smallest member, so the first maximum wins ties
    let mut best = 0;
    for (i, c) in comps.iter().enumerate() {
        if c.len() > comps[best].len() {
            best = i;
        }
    }
    let nodes = comps.into_iter().nth(best).unwrap();
    if nodes.len() == g.node_count() {
        return Ok((g.clone(), nodes));
    }
    let sub = g.induced_subgraph(&nodes);
    Ok((sub, nodes))
}

/// First and second degree moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub mean_degree: f64,
    pub mean_square_degree: f64,
    /// `<d^2> / (4 <d>)`, roughly how much smaller the 8E-dimensional reduced
    /// matrix is than the second-order non-backtracking matrix.
    pub reduction_factor: f64,
    /// Number of length-2 directed paths, `sum_i d_i (d_i - 1)`.
    pub length2_paths: u64,
    /// `2E`.
    pub degree_sum: u64,
}

impl DegreeStats {
    /// Molloy-Reed style estimate `<d> / (<d^2> - <d>)` for uncorrelated
    /// random graphs. Informational only.
    pub fn moment_threshold(&self) -> f64 {
        self.mean_degree / (self.mean_square_degree - self.mean_degree)
    }
}

pub fn degree_stats(g: &Graph) -> Result<DegreeStats> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let (mut s1, mut s2): (u64, u64) = (0, 0);
    for u in 0..n as NodeId {
        let d = g.degree(u) as u64;
        s1 += d;
        s2 += d * d;
    }
    let mean_degree = s1 as f64 / n as f64;
    let mean_square_degree = s2 as f64 / n as f64;
    let reduction_factor = if s1 == 0 { 0.0 } else { s2 as f64 / (4 * s1) as f64 };
    Ok(DegreeStats { mean_degree, mean_square_degree, reduction_factor, length2_paths: s2 - s1, degree_sum: s1 })
}

/// Triangle count of every directed edge, indexed like
/// [`Graph::directed_edge_index`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeTriangleCounts {
    counts: Vec<u32>,
}

impl EdgeTriangleCounts {
    pub fn as_slice(&self) -> &[u32] {
        &self.counts
    }

    pub fn get(&self, g: &Graph, u: NodeId, v: NodeId) -> Option<u32> {
        g.directed_edge_index(u, v).map(|i| self.counts[i])
    }

    /// Sum over undirected edges, i.e. three times the triangle count.
    pub fn undirected_sum(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum::<u64>() / 2
    }
}

pub(crate) fn common_neighbor_count(a: &[NodeId], b: &[NodeId]) -> u32 {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

pub fn triangles_per_edge(g: &Graph) -> EdgeTriangleCounts {
    let counts = g.directed_edges().map(|(u, v)| common_neighbor_count(g.neighbors(u), g.neighbors(v))).collect();
    EdgeTriangleCounts { counts }
}
