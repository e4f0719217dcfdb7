use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use twsplit::cli::bench_row;
use twsplit::decomposition::NodeKind;
use twsplit::driver::RunConfig;
use twsplit::graph::Graph;
use twsplit::oracle::Family;
use twsplit::partition::{init_table_with, Exec, Mode};

/// A path-like graph with chords, dense enough to leave ⊥ entries.
fn sample_graph(n: usize) -> Graph {
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
    edges.extend((3..n).step_by(2).map(|v| (v - 3, v)));
    Graph::from_edges(n, &edges).unwrap()
}

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn init(c: &mut Criterion) {
    let mut group = c.benchmark_group("init_table");
    for (mode, len) in [(Mode::Four, 9), (Mode::Three, 12)] {
        let g = sample_graph(len);
        let bag: Vec<usize> = (0..len).collect();
        for (name, exec) in EXECS {
            let id = BenchmarkId::new(name, format!("{mode:?}/{len}"));
            group.bench_function(id, |b| b.iter(|| init_table_with(&g, black_box(&bag), mode, exec)));
        }
    }
    group.finish();
}

fn add_child(c: &mut Criterion) {
    let mut group = c.benchmark_group("add_child");
    for (mode, len) in [(Mode::Four, 9), (Mode::Three, 12)] {
        let g = sample_graph(len + 1);
        let bag: Vec<usize> = (0..len).collect();
        let child_bag: Vec<usize> = (0..=len).collect();
        let child = init_table_with(&g, &child_bag, mode, Exec::Sequential);
        let base = init_table_with(&g, &bag, mode, Exec::Sequential);
        for (name, exec) in EXECS {
            let id = BenchmarkId::new(name, format!("{mode:?}/{len}"));
            group.bench_function(id, |b| {
                b.iter_batched(
                    || base.clone(),
                    |mut t| {
                        t.add_child_with(NodeKind::Intersection, &child, exec).unwrap();
                        t
                    },
                    criterion::BatchSize::LargeInput,
                )
            });
        }
    }
    group.finish();
}

fn two_approx(c: &mut Criterion) {
    let mut group = c.benchmark_group("two_approx");
    group.sample_size(10);
    let cfg = RunConfig::new(2);
    for n in [1000, 4000] {
        group.bench_function(BenchmarkId::new("partial-2-tree", n), |b| {
            b.iter(|| bench_row(Family::PartialKTree, n, 7, 2 * cfg.k + 2, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, init, add_child, two_approx);
criterion_main!(benches);
