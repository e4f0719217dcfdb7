use std::collections::BTreeSet;

use super::TreeDecomposition;
use crate::graph::{Graph, Vertex};

/// Decomposition from an elimination order: vertex `v` gets the bag
/// `{v} ∪ N⁺(v)` in the filled graph and hangs below the first-eliminated
/// vertex of `N⁺(v)`. Roots of a forest are chained together.
pub fn elimination_decomposition(g: &Graph, order: &[Vertex]) -> TreeDecomposition {
    let n = g.n();
    assert_eq!(order.len(), n, "order must list every vertex once");
    if n == 0 {
        return TreeDecomposition::single(Vec::new());
    }
    let mut rank = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let mut adj: Vec<BTreeSet<Vertex>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut parent = vec![None; n];
    for &v in order {
        let later: Vec<Vertex> = adj[v].iter().copied().filter(|&u| rank[u] > rank[v]).collect();
        for (i, &a) in later.iter().enumerate() {
            for &b in &later[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        parent[rank[v]] = later.iter().map(|&u| rank[u]).min();
        let mut bag = later;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
    }
    // Node j holds the bag of the j-th last eliminated vertex, so the root
    // (bag 0) is the last vertex eliminated.
    let flip = |i: usize| n - 1 - i;
    let mut edges = Vec::with_capacity(n);
    let mut prev_root: Option<usize> = None;
    for i in (0..n).rev() {
        match parent[i] {
            Some(p) => edges.push((flip(p), flip(i))),
            None => {
                if let Some(r) = prev_root {
                    edges.push((flip(r), flip(i)));
                }
                prev_root = Some(i);
            }
        }
    }
    bags.reverse();
    TreeDecomposition::from_bags_and_edges(bags, &edges).expect("elimination tree is a tree")
}

/// Greedy minimum-degree elimination order (ties by smallest id).
pub fn min_degree_order(g: &Graph) -> Vec<Vertex> {
    let n = g.n();
    let mut adj: Vec<BTreeSet<Vertex>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut queue: BTreeSet<(usize, Vertex)> = (0..n).map(|v| (adj[v].len(), v)).collect();
    let mut order = Vec::with_capacity(n);
    while let Some((_, v)) = queue.pop_first() {
        order.push(v);
        let nb: Vec<Vertex> = std::mem::take(&mut adj[v]).into_iter().collect();
        for &u in &nb {
            queue.remove(&(adj[u].len(), u));
            adj[u].remove(&v);
        }
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &u in &nb {
            queue.insert((adj[u].len(), u));
        }
    }
    order
}

/// Decomposition from the greedy minimum-degree order.
pub fn greedy_decomposition(g: &Graph) -> TreeDecomposition {
    elimination_decomposition(g, &min_degree_order(g))
}
