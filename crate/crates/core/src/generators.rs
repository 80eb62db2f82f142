//! Synthetic graph models: ring, triangle ring, forest fire, Barabasi-Albert.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::{stream_rng, Rng, Stream};

/// Cycle graph `C_n`.
pub fn ring(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::invalid(format!("ring needs at least 3 nodes, got {n}")));
    }
    let n32 = n as NodeId;
    Graph::from_edges(n, (0..n32).map(|i| (i, (i + 1) % n32)))
}

/// Ring of `k` hub nodes, each carrying a pendant triangle.
///
/// Hub `i` is node `3i`; its triangle partners are `3i + 1` and `3i + 2`.
/// `N = 3k`, `E = 4k`. For `k >= 4` the only short cycles are the triangles,
/// so the second-order non-backtracking radius is exactly 1.
pub fn triangle_ring(k: usize) -> Result<Graph> {
    if k < 3 {
        return Err(Error::invalid(format!("triangle ring needs at least 3 triangles, got {k}")));
    }
    let mut edges = Vec::with_capacity(4 * k);
    for i in 0..k {
        let r = (3 * i) as NodeId;
        edges.push((r, r + 1));
        edges.push((r, r + 2));
        edges.push((r + 1, r + 2));
        edges.push((r, (3 * ((i + 1) % k)) as NodeId));
    }
    Graph::from_edges(3 * k, edges)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForestFireConfig {
    pub node_count: usize,
    /// Burning probability `q`, in `[0, 1)`.
    pub burning_probability: f64,
    pub seed: u64,
}

/// Forest-fire growth process, one node at a time.
///
/// Each new node picks a uniform ambassador and links to it. Then, for the
/// current ambassador, it keeps drawing `a` in `(0, 1]` and while `a <= q`
/// links to a uniform not-yet-visited neighbour. The nodes collected this way
/// become ambassadors in turn, depth-first in the order they were linked. No
/// node is visited twice while placing one new node.
#[derive(Debug, Clone)]
pub struct ForestFire {
    q: f64,
    rng: Rng,
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
    stamp: Vec<u32>,
}

impl ForestFire {
    pub fn new(burning_probability: f64, seed: u64) -> Result<Self> {
        if !(0.0..1.0).contains(&burning_probability) {
            return Err(Error::invalid(format!("burning probability must lie in [0, 1), got {burning_probability}")));
        }
        Ok(ForestFire {
            q: burning_probability,
            rng: stream_rng(seed, Stream::Generation),
            adjacency: vec![Vec::new()],
            edge_count: 0,
            stamp: vec![0],
        })
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    fn link(&mut self, u: NodeId, v: NodeId) {
        self.adjacency[u as usize].push(v);
        self.adjacency[v as usize].push(u);
        self.edge_count += 1;
    }

    /// Adds one node and returns its id.
    pub fn grow(&mut self) -> NodeId {
        let u = self.adjacency.len() as NodeId;
        // stamp value u + 1 marks nodes visited while placing u
        let mark = u + 1;
        let ambassador = self.rng.gen_range(0..u);
        self.adjacency.push(Vec::new());
        self.stamp.push(mark);
        self.stamp[ambassador as usize] = mark;
        self.link(u, ambassador);

        let mut stack = vec![ambassador];
        let mut collected = Vec::new();
        let mut candidates = Vec::new();
        while let Some(v) = stack.pop() {
            collected.clear();
            loop {
                // a = 1 - U lies in (0, 1]
                let a = 1.0 - self.rng.gen::<f64>();
                if a > self.q {
                    break;
                }
                candidates.clear();
                candidates
                    .extend(self.adjacency[v as usize].iter().copied().filter(|&w| self.stamp[w as usize] != mark));
                if candidates.is_empty() {
                    break;
                }
                let w = candidates[self.rng.gen_range(0..candidates.len())];
                self.stamp[w as usize] = mark;
                self.link(u, w);
                collected.push(w);
            }
            stack.extend(collected.iter().rev());
        }
        u
    }

    pub fn grow_to(&mut self, node_count: usize) {
        while self.adjacency.len() < node_count {
            self.grow();
        }
    }

    pub fn snapshot(&self) -> Graph {
        let edges = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| (u as NodeId) < v).map(move |&v| (u as NodeId, v)));
        Graph::from_edges(self.adjacency.len(), edges).expect("forest-fire ids are in range")
    }
}

pub fn forest_fire(cfg: &ForestFireConfig) -> Result<Graph> {
    if cfg.node_count == 0 {
        return Err(Error::invalid("forest fire needs at least one node"));
    }
    let mut ff = ForestFire::new(cfg.burning_probability, cfg.seed)?;
    ff.grow_to(cfg.node_count);
    Ok(ff.snapshot())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaConfig {
    pub node_count: usize,
    pub edges_per_new_node: usize,
    pub seed: u64,
}

/// Barabasi-Albert preferential attachment grown from a clique on `m + 1`
/// nodes. Targets are drawn from the endpoint list, so each existing node is
/// chosen with probability proportional to its degree.
pub fn barabasi_albert(cfg: &BaConfig) -> Result<Graph> {
    let m = cfg.edges_per_new_node;
    let n = cfg.node_count;
    if m == 0 {
        return Err(Error::invalid("edges per new node must be at least 1"));
    }
    if n <= m {
        return Err(Error::invalid(format!("node count {n} must exceed edges per new node {m}")));
    }
    let mut rng = stream_rng(cfg.seed, Stream::Generation);
    let mut edges = Vec::with_capacity(m * (m + 1) / 2 + m * (n - m - 1));
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * edges.capacity());
    for i in 0..=m as NodeId {
        for j in i + 1..=m as NodeId {
            edges.push((i, j));
            endpoints.push(i);
            endpoints.push(j);
        }
    }
    let mut targets: Vec<NodeId> = Vec::with_capacity(m);
    for u in (m + 1) as NodeId..n as NodeId {
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, u));
            endpoints.push(t);
            endpoints.push(u);
        }
    }
    Graph::from_edges(n, edges)
}
