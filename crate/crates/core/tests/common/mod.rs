#![allow(dead_code)]

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use percothresh_core::Graph;

/// `G(n, p)` from a fixed seed.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Arbitrary simple graph on `lo..=hi` nodes.
pub fn graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

/// Sparse-ish random graph: each pair kept with probability `p`.
pub fn sparse_graph(lo: usize, hi: usize, p: f64) -> impl Strategy<Value = Graph> {
    (lo..=hi, any::<u64>()).prop_map(move |(n, seed)| gnp(n, p, seed))
}

/// Length of the longest simple cycle, 0 for forests. Exhaustive DFS.
pub fn longest_cycle(g: &Graph) -> usize {
    let n = g.node_count();
    let mut best = 0;
    let mut on = vec![false; n];
    fn dfs(g: &Graph, start: u32, u: u32, len: usize, on: &mut [bool], best: &mut usize) {
        for &v in g.neighbors(u) {
            if v == start && len >= 3 {
                *best = (*best).max(len);
            }
            // cycles are counted from their smallest node
            if v > start && !on[v as usize] {
                on[v as usize] = true;
                dfs(g, start, v, len + 1, on, best);
                on[v as usize] = false;
            }
        }
    }
    for s in 0..n as u32 {
        on[s as usize] = true;
        dfs(g, s, s, 1, &mut on, &mut best);
        on[s as usize] = false;
    }
    best
}

/// All simple directed paths with `order` steps, by brute force over tuples.
pub fn brute_paths(g: &Graph, order: usize) -> Vec<Vec<u32>> {
    let n = g.node_count() as u32;
    let mut out: Vec<Vec<u32>> = (0..n).map(|v| vec![v]).collect();
    for _ in 0..order {
        let mut next = Vec::new();
        for p in &out {
            for v in 0..n {
                if !p.contains(&v) && g.has_edge(*p.last().unwrap(), v) {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out.sort();
    out
}

pub fn is_bipartite(g: &Graph) -> bool {
    let n = g.node_count();
    let mut side = vec![u8::MAX; n];
    for s in 0..n {
        if side[s] != u8::MAX {
            continue;
        }
        side[s] = 0;
        let mut stack = vec![s as u32];
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if side[v as usize] == u8::MAX {
                    side[v as usize] = 1 - side[u as usize];
                    stack.push(v);
                } else if side[v as usize] == side[u as usize] {
                    return false;
                }
            }
        }
    }
    true
}
