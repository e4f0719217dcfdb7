use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twsplit::decomposition::{
    elimination_decomposition, make_grouped, validate_grouped, validate_td, TreeDecomposition,
};
use twsplit::graph::{Graph, Vertex};
use twsplit::oracle::{brute_partition_table, exists_split_bruteforce};
use twsplit::partition::{root_is_good, BagPartition, Mode, PartitionIndex, BOTTOM};
use twsplit::split::Engine;

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

fn random_td(rng: &mut ChaCha8Rng, g: &Graph) -> TreeDecomposition {
    let mut order: Vec<Vertex> = (0..g.n()).collect();
    order.shuffle(rng);
    make_grouped(&elimination_decomposition(g, &order)).unwrap()
}

/// Smallest size of a good root partition, by brute force over all labelings.
fn min_good_size(g: &Graph, bag: &[Vertex], k: usize, mode: Mode) -> Option<u32> {
    let all: Vec<Vertex> = (0..g.n()).collect();
    let table = brute_partition_table(g, &all, bag, mode).unwrap();
    table
        .iter()
        .enumerate()
        .filter(|(_, &s)| s != BOTTOM)
        .filter(|(i, &s)| {
            let p = BagPartition::decode(bag.to_vec(), PartitionIndex(*i), mode).unwrap();
            root_is_good(mode, &p.part_sizes(mode), s as usize, bag.len(), k)
        })
        .map(|(_, &s)| s)
        .min()
}

#[test]
fn find_split_agrees_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut found = 0;
    let mut none = 0;
    for round in 0..150 {
        let n = rng.gen_range(4..=10);
        let p = rng.gen_range(0.05..0.5);
        let g = random_connected(&mut rng, n, p);
        let t = if round % 3 == 0 {
            TreeDecomposition::single((0..n).collect())
        } else {
            random_td(&mut rng, &g)
        };
        let mode = if round % 2 == 0 { Mode::Four } else { Mode::Three };
        let k = rng.gen_range(1..=3);
        let bag = t.bag(t.root()).to_vec();
        let expect = min_good_size(&g, &bag, k, mode);
        let brute = exists_split_bruteforce(&g, &t, k, mode).unwrap();
        assert_eq!(brute.is_some(), expect.is_some());

        let width = t.max_bag_size();
        let mut e = Engine::new(&g, t, k, mode);
        e.enable_audit();
        let asg = e.find_split().unwrap();
        assert_eq!(asg.as_ref().map(|a| a.separator.len() as u32), expect, "round {round}");
        let Some(asg) = asg else {
            none += 1;
            continue;
        };
        found += 1;
        let labels = asg.global_labels(e.tree());
        let all_labels = BagPartition::new((0..n).collect(), labels).unwrap();
        assert!(all_labels.is_legal(&g), "round {round}: labeling has a crossing edge");

        e.apply_split(&asg).unwrap();
        let t = e.tree();
        assert!(validate_td(&g, t).is_valid(), "round {round}: {:?}", validate_td(&g, t));
        assert!(
            validate_grouped(t).is_valid(),
            "round {round}: {:?}",
            validate_grouped(t)
        );
        assert_eq!(t.bag(t.root()), asg.separator.as_slice());
        assert!(t.max_bag_size() <= width);
        assert_eq!(e.verify_tables(), Ok(()));
        assert!(e.audit_log().unwrap().violations.is_empty());
    }
    assert!(found > 20 && none > 5, "found {found}, none {none}");
}
