//! One Newman-Ziff run: edges added in random order, top two cluster sizes
//! recorded after every addition.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::RngCore;

use crate::graph::{Graph, NodeId};
use crate::rng::run_rng;

/// Largest and second-largest cluster sizes after `m = 0..=E` edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunProfile {
    pub largest: Vec<u32>,
    pub second: Vec<u32>,
}

struct Clusters {
    parent: Vec<u32>,
    size: Vec<u32>,
    /// cluster size -> number of clusters of that size
    census: BTreeMap<u32, u32>,
}

impl Clusters {
    fn new(n: usize) -> Self {
        let mut census = BTreeMap::new();
        if n > 0 {
            census.insert(1, n as u32);
        }
        Clusters { parent: (0..n as u32).collect(), size: alloc::vec![1; n], census }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn take(&mut self, s: u32) {
        let c = self.census.get_mut(&s).expect("size present in census");
        *c -= 1;
        if *c == 0 {
            self.census.remove(&s);
        }
    }

    fn union(&mut self, a: NodeId, b: NodeId) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            core::mem::swap(&mut ra, &mut rb);
        }
        let (sa, sb) = (self.size[ra as usize], self.size[rb as usize]);
        self.take(sa);
        self.take(sb);
        self.parent[rb as usize] = ra;
        self.size[ra as usize] = sa + sb;
        *self.census.entry(sa + sb).or_insert(0) += 1;
    }

    fn top_two(&self) -> (u32, u32) {
        let mut it = self.census.iter().rev();
        match it.next() {
            None => (0, 0),
            Some((&s, &c)) if c >= 2 => (s, s),
            Some((&s, _)) => (s, it.next().map_or(0, |(&t, _)| t)),
        }
    }
}

/// Runs one realisation using the generator of run `run` under `seed`.
pub fn newman_ziff_run(g: &Graph, seed: u64, run: u64) -> RunProfile {
    newman_ziff_run_with(g, &mut run_rng(seed, run))
}

pub fn newman_ziff_run_with<R: RngCore + ?Sized>(g: &Graph, rng: &mut R) -> RunProfile {
    let mut order: Vec<(NodeId, NodeId)> = g.edges().to_vec();
    order.shuffle(rng);
    let mut clusters = Clusters::new(g.node_count());
    let mut largest = Vec::with_capacity(order.len() + 1);
    let mut second = Vec::with_capacity(order.len() + 1);
    let (a, b) = clusters.top_two();
    largest.push(a);
    second.push(b);
    for (u, v) in order {
        clusters.union(u, v);
        let (a, b) = clusters.top_two();
        largest.push(a);
        second.push(b);
    }
    RunProfile { largest, second }
}
