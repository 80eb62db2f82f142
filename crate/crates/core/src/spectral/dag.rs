//! Acyclicity and strongly connected components of an operator's digraph.

use alloc::vec;
use alloc::vec::Vec;

use crate::sparse::{LinearOperator, SparseOperator};

/// True iff the digraph of the stored entries has no directed cycle
/// (self-loops count as cycles). Such an operator is nilpotent.
pub fn dag_check(op: &SparseOperator) -> bool {
    let n = op.dim();
    let mut indegree = vec![0usize; n];
    for (_, j, _) in op.entries() {
        indegree[j] += 1;
    }
    let mut queue: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut removed = 0;
    while let Some(u) = queue.pop() {
        removed += 1;
        for &v in op.row(u).0 {
            let v = v as usize;
            indegree[v] -= 1;
            if indegree[v] == 0 {
                queue.push(v);
            }
        }
    }
    removed == n
}

/// Strongly connected components (iterative Tarjan). Components come out in
/// reverse topological order; members are in discovery order.
pub fn strongly_connected_components(op: &SparseOperator) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = op.dim();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    // (node, next edge position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(top) = call.last_mut() {
            let u = top.0;
            let succ = op.row(u).0;
            if top.1 < succ.len() {
                let v = succ[top.1] as usize;
                top.1 += 1;
                if index[v] == UNSEEN {
                    index[v] = counter;
                    low[v] = counter;
                    counter += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    call.push((v, 0));
                } else if on_stack[v] {
                    low[u] = low[u].min(index[v]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[u]);
            }
            if low[u] == index[u] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp.push(w);
                    if w == u {
                        break;
                    }
                }
                comp.reverse();
                out.push(comp);
            }
        }
    }
    out
}
