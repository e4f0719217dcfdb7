use twsplit::decomposition::validate_td;
use twsplit::driver::{two_approx, ModePolicy, Outcome, RunConfig};
use twsplit::oracle::{coarsen_decomposition, generate, Family, GeneratorSpec};
use twsplit::partition::Mode;

fn run(k: usize, n: usize, seed: u64, mode: ModePolicy) {
    let gen = generate(&GeneratorSpec::new(Family::PartialKTree, n, k, seed)).unwrap();
    let t = coarsen_decomposition(gen.witness.as_ref().unwrap(), 4 * k + 4, seed);
    let mut cfg = RunConfig::new(k);
    cfg.audit = true;
    cfg.mode = mode;
    let (o, rep) = two_approx(&gen.graph, &t, &cfg).unwrap();
    let Outcome::Decomposition(out) = o else {
        panic!("k={k} n={n} seed={seed}: reported tw > k on a partial k-tree")
    };
    assert!(validate_td(&gen.graph, &out).is_valid());
    assert!(out.width() <= 2 * k + 1, "width {}", out.width());
    assert!(rep.audit.violations.is_empty(), "{:?}", rep.audit.violations);
    assert_eq!(rep.audit.alpha_violations, 0);
    for r in &rep.rounds {
        assert!(r.beta_accounting && r.all_post_visited, "{r:?}");
    }
}

#[test]
fn partial_k_trees_reach_width_2k_plus_1() {
    for k in 1..=2 {
        for &n in &[12, 30, 60] {
            for seed in 0..6 {
                run(k, n, seed * 31 + k as u64, ModePolicy::Auto);
            }
        }
    }
}

#[test]
fn four_part_mode_throughout() {
    for seed in 0..10 {
        run(1, 40, seed, ModePolicy::Forced(Mode::Four));
    }
}
