use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twsplit::decomposition::{elimination_decomposition, make_grouped, NodeId, TreeDecomposition};
use twsplit::graph::{Graph, Vertex};
use twsplit::oracle::brute_partition_table;
use twsplit::partition::{init_table, DpTable, Mode};

fn random_connected(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !edges.contains(&(i, j)) && rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn random_grouped(rng: &mut ChaCha8Rng, g: &Graph) -> TreeDecomposition {
    let mut order: Vec<Vertex> = (0..g.n()).collect();
    order.shuffle(rng);
    make_grouped(&elimination_decomposition(g, &order)).unwrap()
}

fn build(g: &Graph, t: &TreeDecomposition, mode: Mode) -> HashMap<NodeId, DpTable> {
    let mut tables = HashMap::new();
    for x in t.postorder() {
        let mut a = init_table(g, t.bag(x), mode);
        for c in t.children(x) {
            a.add_child(t.kind(x), &tables[c]).unwrap();
        }
        tables.insert(x, a);
    }
    tables
}

fn subtree_vertices(t: &TreeDecomposition, x: NodeId) -> Vec<Vertex> {
    let mut vs = Vec::new();
    let mut stack = vec![x];
    while let Some(y) = stack.pop() {
        vs.extend_from_slice(t.bag(y));
        stack.extend_from_slice(t.children(y));
    }
    vs.sort_unstable();
    vs.dedup();
    vs
}

#[test]
fn tables_match_brute_force_sizes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..60 {
        let n = rng.gen_range(2..=8);
        let g = random_connected(&mut rng, n, 0.3);
        let t = random_grouped(&mut rng, &g);
        let mode = if round % 2 == 0 { Mode::Four } else { Mode::Three };
        let tables = build(&g, &t, mode);
        for x in t.node_ids() {
            let vs = subtree_vertices(&t, x);
            let brute = brute_partition_table(&g, &vs, t.bag(x), mode).unwrap();
            assert_eq!(tables[&x].entries(), brute.as_slice(), "node {x} of round {round}");
        }
    }
}

#[test]
fn subtracting_every_child_restores_init() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..30 {
        let n = rng.gen_range(3..=9);
        let g = random_connected(&mut rng, n, 0.25);
        let t = random_grouped(&mut rng, &g);
        let tables = build(&g, &t, Mode::Four);
        for x in t.node_ids() {
            let mut a = tables[&x].clone();
            for c in t.children(x) {
                a.subtract_child(t.kind(x), &tables[c]).unwrap();
            }
            assert_eq!(a, init_table(&g, t.bag(x), Mode::Four));
        }
    }
}

#[test]
fn update_matches_rebuild() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..60 {
        let n = rng.gen_range(4..=9);
        let g = random_connected(&mut rng, n, 0.1);
        let t = random_grouped(&mut rng, &g);
        let tables = build(&g, &t, Mode::Four);
        // Swap one leaf table for one built with an extra edge inside its bag.
        let leaves: Vec<NodeId> = t
            .node_ids()
            .filter(|&x| t.children(x).is_empty() && t.parent(x).is_some())
            .collect();
        let Some(&leaf) = leaves.choose(&mut rng) else { continue };
        let p = t.parent(leaf).unwrap();
        let mut parent = tables[&p].clone();
        let bag = t.bag(leaf);
        let missing = (0..bag.len())
            .flat_map(|i| (i + 1..bag.len()).map(move |j| (i, j)))
            .map(|(i, j)| (bag[i], bag[j]))
            .find(|&(u, v)| !g.has_edge(u, v));
        let Some(extra) = missing else { continue };
        let mut edges = g.edges();
        edges.push(extra);
        let g2 = Graph::from_edges(n, &edges).unwrap();
        let new_leaf = init_table(&g2, bag, Mode::Four);
        assert_ne!(new_leaf, tables[&leaf]);
        parent.update_child(t.kind(p), &tables[&leaf], &new_leaf).unwrap();
        let mut rebuilt = init_table(&g, t.bag(p), Mode::Four);
        for c in t.children(p) {
            let tc = if *c == leaf { &new_leaf } else { &tables[c] };
            rebuilt.add_child(t.kind(p), tc).unwrap();
        }
        assert_eq!(parent, rebuilt);
    }
}
