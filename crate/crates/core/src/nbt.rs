//! Order-g non-backtracking matrices, the triangle correction blocks and the
//! reduced `8E x 8E` operator `M`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::graph::{triangles_per_edge, Graph, NodeId};
use crate::paths::{enumerate_paths, DirectedPathSet, DEFAULT_PATH_CAP};
use crate::sparse::{LinearOperator, OperatorKind, SparseOperator};

/// An order-g non-backtracking matrix together with its row/column index set.
#[derive(Debug, Clone, PartialEq)]
pub struct NbtMatrix {
    pub paths: DirectedPathSet,
    pub op: SparseOperator,
}

/// Builds `B^(order)` by path extension with the default path cap.
pub fn build_b(g: &Graph, order: usize) -> Result<NbtMatrix> {
    build_b_with_cap(g, order, DEFAULT_PATH_CAP)
}

pub fn build_b_with_cap(g: &Graph, order: usize, cap: usize) -> Result<NbtMatrix> {
    let paths = enumerate_paths(g, order, cap)?;
    Ok(build_b_from_paths(g, paths))
}

/// Builds `B^(g)` over a precomputed path set.
///
/// Path `i_1..i_{g+1}` links to `i_2..i_{g+1} j` for every neighbour `j` of
/// `i_{g+1}` outside the path.
pub fn build_b_from_paths(g: &Graph, paths: DirectedPathSet) -> NbtMatrix {
    let order = paths.order();
    let mut offsets = Vec::with_capacity(paths.len() + 1);
    offsets.push(0);
    let mut cols = Vec::new();
    let mut target: Vec<NodeId> = Vec::with_capacity(order + 1);
    for p in paths.iter() {
        let last = p[order];
        target.clear();
        target.extend_from_slice(&p[1..]);
        target.push(0);
        for &j in g.neighbors(last) {
            if p.contains(&j) {
                continue;
            }
            target[order] = j;
            let col = paths.index_of(&target).expect("shifted path is itself a path");
            cols.push(col as u32);
        }
        offsets.push(cols.len());
    }
    let op = SparseOperator::from_pattern_rows(offsets, cols, OperatorKind::NonBacktracking { order });
    NbtMatrix { paths, op }
}

/// Builds `B^(order)` as the adjacency of the iterated line graph: start from
/// the graph itself (both arc directions), take the line graph, delete every
/// arc lying on a closed walk of length `k + 1`, repeat up to `order`.
///
/// Never checks node distinctness directly, so it serves as an independent
/// oracle for [`build_b`]. Rows are reindexed to lexicographic tuple order.
pub fn build_via_line_graph(g: &Graph, order: usize) -> NbtMatrix {
    // level-0: nodes are 1-tuples, arcs are the adjacency
    let mut tuples: Vec<Vec<NodeId>> = (0..g.node_count() as NodeId).map(|u| vec![u]).collect();
    let mut arcs: Vec<Vec<usize>> =
        (0..g.node_count() as NodeId).map(|u| g.neighbors(u).iter().map(|&v| v as usize).collect()).collect();

    for k in 1..=order {
        // nodes of the line graph are the arcs of the previous level
        let mut id: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut next_tuples = Vec::new();
        for (a, outs) in arcs.iter().enumerate() {
            for &b in outs {
                id.insert((a, b), next_tuples.len());
                let mut t = tuples[a].clone();
                t.push(*tuples[b].last().unwrap());
                next_tuples.push(t);
            }
        }
        let mut line: Vec<Vec<usize>> = vec![Vec::new(); next_tuples.len()];
        for (a, outs) in arcs.iter().enumerate() {
            for &b in outs {
                let from = id[&(a, b)];
                for &c in &arcs[b] {
                    line[from].push(id[&(b, c)]);
                }
            }
        }
        let pruned: Vec<Vec<usize>> = (0..line.len())
            .map(|u| line[u].iter().copied().filter(|&v| !returns_in_exactly(&line, v, u, k)).collect())
            .collect();
        tuples = next_tuples;
        arcs = pruned;
    }

    let mut order_idx: Vec<usize> = (0..tuples.len()).collect();
    order_idx.sort_by(|&a, &b| tuples[a].cmp(&tuples[b]));
    let mut rank = vec![0usize; tuples.len()];
    for (r, &i) in order_idx.iter().enumerate() {
        rank[i] = r;
    }
    let mut flat = Vec::with_capacity(tuples.len() * (order + 1));
    for &i in &order_idx {
        flat.extend_from_slice(&tuples[i]);
    }
    let triplets = arcs
        .iter()
        .enumerate()
        .flat_map(|(u, outs)| outs.iter().map(move |&v| (u, v)))
        .map(|(u, v)| (rank[u], rank[v], 1.0))
        .collect::<Vec<_>>();
    NbtMatrix {
        paths: DirectedPathSet::from_sorted_flat(order, flat),
        op: SparseOperator::from_triplets(tuples.len(), triplets, OperatorKind::NonBacktracking { order }),
    }
}

/// Whether some walk of exactly `steps` arcs leads from `from` to `to`.
fn returns_in_exactly(adj: &[Vec<usize>], from: usize, to: usize, steps: usize) -> bool {
    let mut frontier = vec![from];
    let mut seen = vec![usize::MAX; adj.len()];
    for s in 0..steps {
        let mut next = Vec::new();
        for &u in &frontier {
            for &v in &adj[u] {
                if seen[v] != s {
                    seen[v] = s;
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    frontier.contains(&to)
}

/// `(dB1)_{i->j, j->l} = 1` iff `l != i` and `i`, `l` are adjacent, i.e. the
/// non-backtracking step closes a triangle.
pub fn build_delta_b1(g: &Graph) -> SparseOperator {
    let mut offsets = vec![0];
    let mut cols = Vec::new();
    for (i, j) in g.directed_edges() {
        for &l in g.neighbors(j) {
            if l != i && g.has_edge(i, l) {
                cols.push(g.directed_edge_index(j, l).unwrap() as u32);
            }
        }
        offsets.push(cols.len());
    }
    SparseOperator::from_pattern_rows(offsets, cols, OperatorKind::DeltaB1)
}

/// `(dB2)_{i->j, k->i} = 1` iff `i`, `j`, `k` form a triangle. The column edge
/// need not start where the row edge ends.
pub fn build_delta_b2(g: &Graph) -> SparseOperator {
    let mut offsets = vec![0];
    let mut cols = Vec::new();
    for (i, j) in g.directed_edges() {
        let (ni, nj) = (g.neighbors(i), g.neighbors(j));
        // ascending k gives ascending column index of k -> i
        for &k in ni {
            if nj.binary_search(&k).is_ok() {
                cols.push(g.directed_edge_index(k, i).unwrap() as u32);
            }
        }
        offsets.push(cols.len());
    }
    SparseOperator::from_pattern_rows(offsets, cols, OperatorKind::DeltaB2)
}

/// Diagonal of per-edge triangle counts.
pub fn build_d_delta(g: &Graph) -> SparseOperator {
    let t = triangles_per_edge(g);
    let d: Vec<f64> = t.as_slice().iter().map(|&c| c as f64).collect();
    SparseOperator::diagonal(&d, OperatorKind::DDelta)
}

/// The reduced operator
///
/// ```text
/// M = | B   -dB2  D-I  B-dB1 |
///     | I    0    0    0     |
///     | 0    I    0    0     |
///     | 0    0    I    0     |
/// ```
///
/// stored as its four top blocks; the identity shifts are applied implicitly.
#[derive(Debug, Clone)]
pub struct MOperator {
    block: usize,
    b: SparseOperator,
    delta_b2: SparseOperator,
    d_minus_i: Vec<f64>,
    b_minus_delta_b1: SparseOperator,
}

impl MOperator {
    pub fn new(g: &Graph) -> Self {
        let b = build_b(g, 1).expect("order-1 paths never exceed the cap").op;
        let db1 = build_delta_b1(g);
        let b_minus_delta_b1 = SparseOperator::from_triplets(
            b.dim(),
            b.entries().chain(db1.entries().map(|(i, j, v)| (i, j, -v))),
            OperatorKind::Generic,
        );
        let d_minus_i = triangles_per_edge(g).as_slice().iter().map(|&c| c as f64 - 1.0).collect();
        MOperator { block: b.dim(), b, delta_b2: build_delta_b2(g), d_minus_i, b_minus_delta_b1 }
    }

    /// Size of one block, `2E`.
    pub fn block_dim(&self) -> usize {
        self.block
    }

    /// Explicit `8E x 8E` matrix.
    pub fn to_sparse(&self) -> SparseOperator {
        let n = self.block;
        let mut t: Vec<(usize, usize, f64)> = Vec::new();
        t.extend(self.b.entries());
        t.extend(self.delta_b2.entries().map(|(i, j, v)| (i, n + j, -v)));
        t.extend(self.d_minus_i.iter().enumerate().map(|(i, &v)| (i, 2 * n + i, v)));
        t.extend(self.b_minus_delta_b1.entries().map(|(i, j, v)| (i, 3 * n + j, v)));
        for i in 0..3 * n {
            t.push((n + i, i, 1.0));
        }
        SparseOperator::from_triplets(4 * n, t, OperatorKind::M)
    }
}

impl LinearOperator for MOperator {
    fn dim(&self) -> usize {
        4 * self.block
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.block;
        let (x1, rest) = x.split_at(n);
        let (x2, rest) = rest.split_at(n);
        let (x3, x4) = rest.split_at(n);
        let (y1, rest) = y.split_at_mut(n);
        rest.copy_from_slice(&x[..3 * n]);

        let mut tmp = vec![0.0; n];
        self.b.apply(x1, y1);
        self.delta_b2.apply(x2, &mut tmp);
        for (a, t) in y1.iter_mut().zip(&tmp) {
            *a -= t;
        }
        self.b_minus_delta_b1.apply(x4, &mut tmp);
        for ((a, t), (d, x)) in y1.iter_mut().zip(&tmp).zip(self.d_minus_i.iter().zip(x3)) {
            *a += t + d * x;
        }
    }
}
