//! Perfect-matching (Kekulé structure) counts.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::graph::Graph;

/// Breadth-first order from a minimum-degree vertex of each component, which
/// keeps the frontier of the recursion narrow on lattice-like graphs.
fn bfs_order(g: &Graph) -> Vec<usize> {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&v| (g.degree(v), v));
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &u in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    order
}

struct Counter {
    adjacency: Vec<Vec<usize>>,
    memo: HashMap<Vec<u64>, BigUint>,
}

impl Counter {
    fn count(&mut self, remaining: &mut Vec<u64>) -> BigUint {
        let Some(word) = remaining.iter().position(|&w| w != 0) else {
            return BigUint::one();
        };
        if let Some(hit) = self.memo.get(remaining.as_slice()) {
            return hit.clone();
        }
        let v = word * 64 + remaining[word].trailing_zeros() as usize;
        let key = remaining.clone();
        remaining[v / 64] &= !(1 << (v % 64));
        let mut total = BigUint::zero();
        for k in 0..self.adjacency[v].len() {
            let u = self.adjacency[v][k];
            if remaining[u / 64] & (1 << (u % 64)) != 0 {
                remaining[u / 64] &= !(1 << (u % 64));
                total += self.count(remaining);
                remaining[u / 64] |= 1 << (u % 64);
            }
        }
        remaining[v / 64] |= 1 << (v % 64);
        self.memo.insert(key, total.clone());
        total
    }
}

/// Exact number of perfect matchings, by matching the first unmatched vertex
/// in every possible way, memoized on the set of unmatched vertices.
pub fn count_perfect_matchings(g: &Graph) -> BigUint {
    let n = g.order();
    if n % 2 == 1 {
        return BigUint::zero();
    }
    let order = bfs_order(g);
    let mut rank = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let adjacency = order
        .iter()
        .map(|&v| g.neighbors(v).iter().map(|&u| rank[u]).collect())
        .collect();
    let mut remaining = vec![0u64; n.div_ceil(64)];
    for v in 0..n {
        remaining[v / 64] |= 1 << (v % 64);
    }
    let mut counter = Counter {
        adjacency,
        memo: HashMap::new(),
    };
    counter.count(&mut remaining)
}

pub fn is_kekulean(g: &Graph) -> bool {
    !count_perfect_matchings(g).is_zero()
}
