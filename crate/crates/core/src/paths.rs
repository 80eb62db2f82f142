//! Directed paths of distinct nodes, the index set of the order-g
//! non-backtracking matrix.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Default refusal threshold for path enumeration.
pub const DEFAULT_PATH_CAP: usize = 10_000_000;

/// All length-`order` directed paths of `order + 1` distinct nodes, stored
/// flat and sorted lexicographically by node tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedPathSet {
    order: usize,
    flat: Vec<NodeId>,
}

impl DirectedPathSet {
    /// Wraps already sorted, flattened tuples of `order + 1` nodes.
    pub fn from_sorted_flat(order: usize, flat: Vec<NodeId>) -> Self {
        debug_assert_eq!(flat.len() % (order + 1), 0);
        DirectedPathSet { order, flat }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Nodes per path, `order + 1`.
    pub fn width(&self) -> usize {
        self.order + 1
    }

    pub fn len(&self) -> usize {
        self.flat.len() / self.width()
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn path(&self, index: usize) -> &[NodeId] {
        let w = self.width();
        &self.flat[index * w..(index + 1) * w]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[NodeId]> + '_ {
        self.flat.chunks_exact(self.width())
    }

    pub fn as_flat(&self) -> &[NodeId] {
        &self.flat
    }

    pub fn index_of(&self, path: &[NodeId]) -> Option<usize> {
        if path.len() != self.width() {
            return None;
        }
        self.search(|p| p.cmp(path)).ok()
    }

    /// Indices of all paths starting with `prefix`.
    pub fn prefix_range(&self, prefix: &[NodeId]) -> Range<usize> {
        let k = prefix.len().min(self.width());
        let prefix = &prefix[..k];
        let lo = self
            .search(|p| match p[..k].cmp(prefix) {
                Ordering::Equal => Ordering::Greater,
                o => o,
            })
            .unwrap_err();
        let hi = self
            .search(|p| match p[..k].cmp(prefix) {
                Ordering::Equal => Ordering::Less,
                o => o,
            })
            .unwrap_err();
        lo..hi
    }

    fn search(&self, mut f: impl FnMut(&[NodeId]) -> Ordering) -> core::result::Result<usize, usize> {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            match f(self.path(mid)) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Ok(mid),
            }
        }
        Err(lo)
    }
}

/// Appends every path of the given order that starts at a node in `starts`,
/// in lexicographic order, to `out`. Fails once `out` would hold more than
/// `cap` paths.
pub fn extend_paths_from(
    g: &Graph,
    order: usize,
    starts: Range<NodeId>,
    cap: usize,
    out: &mut Vec<NodeId>,
) -> Result<()> {
    let width = order + 1;
    let mut stack: Vec<NodeId> = Vec::with_capacity(width);
    // cursor[k] is the next neighbour position to try at depth k
    let mut cursor: Vec<usize> = Vec::with_capacity(width);
    for s in starts {
        stack.push(s);
        cursor.push(0);
        while let Some(&last) = stack.last() {
            if stack.len() == width {
                if out.len() / width >= cap {
                    return Err(Error::PathLimitExceeded { order, cap });
                }
                out.extend_from_slice(&stack);
                stack.pop();
                cursor.pop();
                continue;
            }
            let depth = stack.len() - 1;
            let nbrs = g.neighbors(last);
            let mut next = None;
            while cursor[depth] < nbrs.len() {
                let v = nbrs[cursor[depth]];
                cursor[depth] += 1;
                if !stack.contains(&v) {
                    next = Some(v);
                    break;
                }
            }
            match next {
                Some(v) => {
                    stack.push(v);
                    cursor.push(0);
                }
                None => {
                    stack.pop();
                    cursor.pop();
                }
            }
        }
    }
    Ok(())
}

/// Enumerates all length-`order` directed paths of distinct nodes.
///
/// Order 0 gives the node set and order 1 the `2E` directed edges.
pub fn enumerate_paths(g: &Graph, order: usize, cap: usize) -> Result<DirectedPathSet> {
    let mut flat = Vec::new();
    extend_paths_from(g, order, 0..g.node_count() as NodeId, cap, &mut flat)?;
    Ok(DirectedPathSet::from_sorted_flat(order, flat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::ring;
    use alloc::vec;

    fn k3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn k3_order2_is_all_orderings() {
        let p = enumerate_paths(&k3(), 2, DEFAULT_PATH_CAP).unwrap();
        assert_eq!(p.len(), 6);
        let all: Vec<&[u32]> = p.iter().collect();
        let want: Vec<&[u32]> = vec![&[0, 1, 2], &[0, 2, 1], &[1, 0, 2], &[1, 2, 0], &[2, 0, 1], &[2, 1, 0]];
        assert_eq!(all, want);
    }

    #[test]
    fn order1_is_directed_edges() {
        let g = ring(7).unwrap();
        let p = enumerate_paths(&g, 1, DEFAULT_PATH_CAP).unwrap();
        assert_eq!(p.len(), 2 * g.edge_count());
        for (k, (u, v)) in g.directed_edges().enumerate() {
            assert_eq!(p.path(k), &[u, v]);
        }
    }

    #[test]
    fn ring5_order3_has_10() {
        let p = enumerate_paths(&ring(5).unwrap(), 3, DEFAULT_PATH_CAP).unwrap();
        assert_eq!(p.len(), 10);
    }

    #[test]
    fn order_past_node_count_is_empty() {
        let p = enumerate_paths(&k3(), 3, DEFAULT_PATH_CAP).unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn index_and_prefix_lookup() {
        let p = enumerate_paths(&k3(), 2, DEFAULT_PATH_CAP).unwrap();
        assert_eq!(p.index_of(&[1, 2, 0]), Some(3));
        assert_eq!(p.index_of(&[1, 1, 0]), None);
        assert_eq!(p.prefix_range(&[1]), 2..4);
        assert_eq!(p.prefix_range(&[2, 1]), 5..6);
        assert_eq!(p.prefix_range(&[]), 0..6);
    }

    #[test]
    fn cap_is_enforced() {
        match enumerate_paths(&k3(), 2, 5) {
            Err(Error::PathLimitExceeded { order: 2, cap: 5 }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
