use super::*;
use crate::decomposition::make_grouped;
use crate::oracle::exists_split_bruteforce;
use crate::partition::Label;

fn path(n: usize) -> Graph {
    let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &e).unwrap()
}

fn complete(n: usize) -> Graph {
    let mut e = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            e.push((i, j));
        }
    }
    Graph::from_edges(n, &e).unwrap()
}

fn clean(e: &Engine) {
    assert!(
        validate_td(e.graph(), e.tree()).is_valid(),
        "{:?}",
        validate_td(e.graph(), e.tree())
    );
    assert!(
        validate_grouped(e.tree()).is_valid(),
        "{:?}",
        validate_grouped(e.tree())
    );
    assert_eq!(e.verify_tables(), Ok(()));
}

fn chain_td(bags: Vec<Vec<Vertex>>) -> TreeDecomposition {
    let edges: Vec<_> = (1..bags.len()).map(|i| (i - 1, i)).collect();
    make_grouped(&TreeDecomposition::from_bags_and_edges(bags, &edges).unwrap()).unwrap()
}

fn leaf_main(t: &TreeDecomposition) -> NodeId {
    t.main_ids().find(|&x| t.children(x).is_empty()).unwrap()
}

#[test]
fn rotate_single_edge_keeps_alpha() {
    let g = path(3);
    let mut e = Engine::new(&g, chain_td(vec![vec![0, 1], vec![1, 2]]), 1, Mode::Four);
    let y = leaf_main(e.tree());
    let alpha = e.alpha_raw();
    e.rotate(y).unwrap();
    assert_eq!(e.tree().root(), y);
    assert_eq!(e.tree().shape(), "M[1, 2](I[1](M[0, 1]))");
    assert_eq!(e.alpha_raw(), alpha);
    clean(&e);
}

#[test]
fn rotate_inserts_chain_for_two_new_vertices() {
    // r{0,1,2,3} above y{2,3,4}: B_r \ B_y = {0,1}, one chain node of size 3.
    let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (0, 3), (2, 4), (3, 4)]).unwrap();
    let t = chain_td(vec![vec![0, 1, 2, 3], vec![2, 3, 4]]);
    let mut e = Engine::new(&g, t, 3, Mode::Four);
    let y = leaf_main(e.tree());
    let alpha = e.alpha_raw();
    e.rotate(y).unwrap();
    assert_eq!(
        e.tree().shape(),
        "M[2, 3, 4](I[2, 3](M[0, 2, 3](I[0, 2, 3](M[0, 1, 2, 3]))))"
    );
    assert_eq!(e.alpha_raw(), alpha);
    clean(&e);
}

#[test]
fn rotate_merges_subset_root() {
    let g = path(3);
    // Root {1} with children {0,1} and {1,2}.
    let t = make_grouped(
        &TreeDecomposition::from_bags_and_edges(vec![vec![1], vec![0, 1], vec![1, 2]], &[(0, 1), (0, 2)]).unwrap(),
    )
    .unwrap();
    let mut e = Engine::new(&g, t, 1, Mode::Four);
    let before = e.tree().len();
    let y = e.tree().main_ids().find(|&x| e.tree().bag(x) == [0, 1]).unwrap();
    e.rotate(y).unwrap();
    assert!(e.tree().len() < before);
    assert_eq!(e.tree().shape(), "M[0, 1](I[1](M[1, 2]))");
    clean(&e);
}

#[test]
fn move_deepest_of_chain() {
    let g = path(5);
    let t = chain_td(vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4]]);
    let mut e = Engine::new(&g, t, 1, Mode::Four);
    e.enable_audit();
    let x = leaf_main(e.tree());
    e.move_to_root(x).unwrap();
    assert_eq!(e.tree().root(), x);
    assert_eq!(e.tree().width(), 1);
    clean(&e);
    let log = e.audit_log().unwrap();
    assert!(log.violations.is_empty(), "{:?}", log.violations);
    assert_eq!(log.alpha_violations, 0);
    e.move_to_root(x).unwrap();
    assert_eq!(e.tree().root(), x);
}

#[test]
fn merge_childless_grandchild() {
    let g = path(3);
    let mut t = TreeDecomposition::single(vec![1, 2]);
    let r = t.root();
    let z = t.add_node(vec![1], NodeKind::Intersection, Some(r));
    let y = t.add_node(vec![1], NodeKind::Main, Some(z));
    let z2 = t.add_node(vec![1], NodeKind::Intersection, Some(y));
    t.add_node(vec![0, 1], NodeKind::Main, Some(z2));
    let mut e = Engine::new(&g, t, 1, Mode::Four);
    let root_table = e.table(r).unwrap().clone();
    let fused = e.merge(r, y).unwrap();
    assert_eq!(fused, 0);
    assert_eq!(e.tree().shape(), "M[1, 2](I[1](M[0, 1]))");
    assert_eq!(e.table(r).unwrap(), &root_table);
    clean(&e);
}

#[test]
fn merge_fuses_equal_intersections() {
    let g = Graph::from_edges(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
    let t = {
        let mut t = TreeDecomposition::single(vec![1, 2]);
        let r = t.root();
        let zx = t.add_node(vec![1], NodeKind::Intersection, Some(r));
        t.add_node(vec![0, 1], NodeKind::Main, Some(zx));
        let y = t.add_node(vec![1], NodeKind::Main, Some(zx));
        let zy = t.add_node(vec![1], NodeKind::Intersection, Some(y));
        t.add_node(vec![1, 3], NodeKind::Main, Some(zy));
        t
    };
    let mut e = Engine::new(&g, t, 1, Mode::Four);
    let r = e.tree().root();
    let y = e.tree().main_ids().find(|&x| e.tree().bag(x) == [1]).unwrap();
    let before = e.tree().len();
    let root_table = e.table(r).unwrap().clone();
    let fused = e.merge(r, y).unwrap();
    assert_eq!(fused, 1);
    assert_eq!(e.tree().len(), before - 2);
    assert_eq!(e.tree().shape(), "M[1, 2](I[1](M[0, 1]M[1, 3]))");
    assert_eq!(e.table(r).unwrap(), &root_table);
    clean(&e);
}

#[test]
fn split_path_of_five() {
    let g = path(5);
    let t = TreeDecomposition::single((0..5).collect());
    let mut e = Engine::new(&g, t, 1, Mode::Four);
    e.enable_audit();
    let asg = e.find_split().unwrap().unwrap();
    assert_eq!(asg.separator, vec![2]);
    let labels = asg.global_labels(e.tree());
    assert_eq!(labels[2], Label::X);
    assert_ne!(labels[0], labels[4]);
    assert_eq!(labels[0], labels[1]);
    assert_eq!(labels[3], labels[4]);
    assert!(is_editable(&[0, 1, 2, 3, 4], &labels));
    assert!(!is_editable(&[2], &labels));
    e.apply_split(&asg).unwrap();
    assert_eq!(e.tree().bag(e.tree().root()), [2]);
    assert!(e.tree().width() <= 2);
    clean(&e);
    assert!(e.audit_log().unwrap().violations.is_empty());
}

#[test]
fn no_split_for_k4() {
    let g = complete(4);
    let mut e = Engine::new(&g, TreeDecomposition::single(vec![0, 1, 2, 3]), 1, Mode::Four);
    assert!(e.find_split().unwrap().is_none());
    let brute = exists_split_bruteforce(&g, e.tree(), 1, Mode::Four).unwrap();
    assert!(brute.is_none());
}

#[test]
fn round_on_path_reaches_small_width() {
    let g = path(9);
    let mut e = Engine::new(&g, TreeDecomposition::single((0..9).collect()), 1, Mode::Four);
    e.enable_audit();
    for w in (4..=8).rev() {
        if e.tree().max_bag_size() < w + 1 {
            continue;
        }
        let (outcome, stats) = e.run_round(w).unwrap();
        assert_eq!(outcome, RoundOutcome::Done);
        assert!(stats.accounting_holds(), "{stats:?}");
        assert!(stats.all_post_visited);
        clean(&e);
    }
    assert!(e.tree().width() <= 3);
    assert!(e.audit_log().unwrap().violations.is_empty());
}
