//! Brute-force ground truth for tests: exact treewidth, exact partition
//! sizes, split existence, and instance generators.

mod generate;

pub use generate::{coarsen_decomposition, generate, Family, Generated, GeneratorSpec};

use thiserror::Error;

use crate::decomposition::TreeDecomposition;
use crate::graph::{Graph, Vertex};
use crate::partition::{root_is_good, BagPartition, Label, Mode, PartitionIndex, BOTTOM};

pub const MAX_EXACT_N: usize = 20;
pub const MAX_PARTITION_VS: usize = 15;
pub const MAX_SPLIT_N: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for brute force: {size} > {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("bag is not contained in the vertex set")]
    BagNotInSet,
    #[error("invalid generator spec: {0}")]
    BadSpec(String),
}

fn cap(size: usize, cap: usize) -> Result<(), OracleError> {
    if size > cap {
        Err(OracleError::TooLarge { size, cap })
    } else {
        Ok(())
    }
}

/// Exact treewidth by dynamic programming over vertex subsets:
/// `TW(S) = min_{v in S} max(TW(S - v), Q(S - v, v))`, where `Q(S, v)` counts
/// the vertices outside `S + v` reachable from `v` through `S`.
pub fn exact_treewidth(g: &Graph) -> Result<usize, OracleError> {
    let n = g.n();
    cap(n, MAX_EXACT_N)?;
    if n == 0 {
        return Ok(0);
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let q = |s: u32, v: usize| -> u32 {
        let mut comp = 1u32 << v;
        let mut frontier = comp;
        let mut nbrs = 0u32;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let u = f.trailing_zeros() as usize;
                f &= f - 1;
                nbrs |= adj[u];
                next |= adj[u] & s & !comp;
            }
            comp |= next;
            frontier = next;
        }
        (nbrs & !s & !(1u32 << v)).count_ones()
    };
    let full = (1u64 << n) as usize;
    let mut tw = vec![u8::MAX; full];
    tw[0] = 0;
    for s in 1..full {
        let s = s as u32;
        let mut best = u32::MAX;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s & !(1 << v);
            let prev = tw[rest as usize] as u32;
            if prev >= best {
                continue;
            }
            best = best.min(prev.max(q(rest, v)));
        }
        tw[s as usize] = best as u8;
    }
    Ok(tw[full - 1] as usize)
}

/// Treewidth as the best elimination order found by trying every permutation.
/// Only for cross-checking [`exact_treewidth`] on tiny graphs.
pub fn treewidth_by_permutations(g: &Graph) -> Result<usize, OracleError> {
    let n = g.n();
    cap(n, 9)?;
    fn rec(adj: &mut Vec<Vec<bool>>, alive: &mut Vec<bool>, left: usize, cur: usize, best: &mut usize) {
        if cur >= *best {
            return;
        }
        if left == 0 {
            *best = cur;
            return;
        }
        let n = adj.len();
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            let nb: Vec<usize> = (0..n).filter(|&u| alive[u] && u != v && adj[v][u]).collect();
            let saved = adj.clone();
            for &a in &nb {
                for &b in &nb {
                    if a != b {
                        adj[a][b] = true;
                    }
                }
            }
            alive[v] = false;
            rec(adj, alive, left - 1, cur.max(nb.len()), best);
            alive[v] = true;
            *adj = saved;
        }
    }
    let mut adj = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let mut best = n.saturating_sub(1);
    rec(&mut adj, &mut vec![true; n], n, 0, &mut best);
    Ok(best)
}

/// Enumerates every legal labeling of `vs` whose restriction to the bag is
/// allowed by `fixed`, calling `visit(labels)` with labels indexed like `vs`.
fn enumerate_legal(g: &Graph, vs: &[Vertex], mode: Mode, fixed: &[Option<usize>], visit: &mut dyn FnMut(&[usize])) {
    let pos = |v: Vertex| vs.binary_search(&v).ok();
    // Earlier neighbors of each vertex inside vs, by position.
    let back: Vec<Vec<usize>> = vs
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            g.neighbors(v)
                .iter()
                .filter_map(|&u| pos(u))
                .filter(|&j| j < i)
                .collect()
        })
        .collect();
    let x = mode.x_digit();
    let base = mode.base();
    let mut labels = vec![0usize; vs.len()];
    fn rec(
        i: usize,
        labels: &mut [usize],
        back: &[Vec<usize>],
        fixed: &[Option<usize>],
        base: usize,
        x: usize,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if i == labels.len() {
            visit(labels);
            return;
        }
        for d in 0..base {
            if fixed[i].is_some_and(|f| f != d) {
                continue;
            }
            if d != x && back[i].iter().any(|&j| labels[j] != x && labels[j] != d) {
                continue;
            }
            labels[i] = d;
            rec(i + 1, labels, back, fixed, base, x, visit);
        }
    }
    rec(0, &mut labels, &back, fixed, base, x, visit);
}

/// Minimum `|X|` over legal labelings of `vs` (edges induced in `vs`) that
/// agree with `p` on its bag, or `None` when there is none.
pub fn brute_partition_size(
    g: &Graph,
    vs: &[Vertex],
    p: &BagPartition,
    mode: Mode,
) -> Result<Option<u32>, OracleError> {
    cap(vs.len(), MAX_PARTITION_VS)?;
    let mut fixed = vec![None; vs.len()];
    for (&v, &l) in p.bag.iter().zip(&p.labels) {
        let i = vs.binary_search(&v).map_err(|_| OracleError::BagNotInSet)?;
        fixed[i] = Some(l.digit(mode).map_err(|_| OracleError::BagNotInSet)?);
    }
    let x = mode.x_digit();
    let mut best = BOTTOM;
    enumerate_legal(g, vs, mode, &fixed, &mut |labels| {
        let s = labels.iter().filter(|&&d| d == x).count() as u32;
        best = best.min(s);
    });
    Ok((best != BOTTOM).then_some(best))
}

/// Every entry of the table of a node with bag `bag` and subtree vertex set
/// `vs`, computed by one enumeration of the legal labelings of `vs`.
pub fn brute_partition_table(g: &Graph, vs: &[Vertex], bag: &[Vertex], mode: Mode) -> Result<Vec<u32>, OracleError> {
    cap(vs.len(), MAX_PARTITION_VS)?;
    let bag_pos = bag
        .iter()
        .map(|v| vs.binary_search(v).map_err(|_| OracleError::BagNotInSet))
        .collect::<Result<Vec<_>, _>>()?;
    let base = mode.base();
    let x = mode.x_digit();
    let mut table = vec![BOTTOM; mode.table_len(bag.len())];
    let fixed = vec![None; vs.len()];
    enumerate_legal(g, vs, mode, &fixed, &mut |labels| {
        let idx = bag_pos.iter().rev().fold(0, |acc, &i| acc * base + labels[i]);
        let s = labels.iter().filter(|&&d| d == x).count() as u32;
        table[idx] = table[idx].min(s);
    });
    Ok(table)
}

/// A global labeling whose restriction to the root bag is a good root partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitWitness {
    pub root: BagPartition,
    pub size: u32,
    /// Label of every vertex `0..n`.
    pub labels: Vec<Label>,
}

/// Searches all legal labelings of `V` for one inducing a good root partition
/// of `t`. Returns the good root partition with the smallest index together
/// with a minimum-size labeling extending it.
pub fn exists_split_bruteforce(
    g: &Graph,
    t: &TreeDecomposition,
    k: usize,
    mode: Mode,
) -> Result<Option<SplitWitness>, OracleError> {
    cap(g.n(), MAX_SPLIT_N)?;
    let all: Vec<Vertex> = (0..g.n()).collect();
    let bag = t.bag(t.root()).to_vec();
    let table = brute_partition_table(g, &all, &bag, mode)?;
    let found = table.iter().enumerate().find_map(|(i, &s)| {
        if s == BOTTOM {
            return None;
        }
        let p = BagPartition::decode(bag.clone(), PartitionIndex(i), mode).expect("index in range");
        root_is_good(mode, &p.part_sizes(mode), s as usize, bag.len(), k).then_some((p, s))
    });
    let Some((root, size)) = found else {
        return Ok(None);
    };
    let mut fixed = vec![None; g.n()];
    for (&v, &l) in root.bag.iter().zip(&root.labels) {
        fixed[v] = Some(l.digit(mode).expect("decoded label"));
    }
    let x = mode.x_digit() as u32;
    let mut labels = None;
    enumerate_legal(g, &all, mode, &fixed, &mut |ls| {
        if labels.is_none() && ls.iter().filter(|&&d| d as u32 == x).count() as u32 == size {
            labels = Some(ls.iter().map(|&d| Label::from_digit(d, mode)).collect());
        }
    });
    Ok(Some(SplitWitness {
        root,
        size,
        labels: labels.expect("minimum is attained"),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn grid(r: usize, c: usize) -> Graph {
        let mut e = Vec::new();
        for i in 0..r {
            for j in 0..c {
                let v = i * c + j;
                if j + 1 < c {
                    e.push((v, v + 1));
                }
                if i + 1 < r {
                    e.push((v, v + c));
                }
            }
        }
        Graph::from_edges(r * c, &e).unwrap()
    }

    #[test]
    fn treewidth_examples() {
        assert_eq!(exact_treewidth(&path(6)).unwrap(), 1);
        assert_eq!(exact_treewidth(&complete(5)).unwrap(), 4);
        assert_eq!(exact_treewidth(&grid(3, 3)).unwrap(), 3);
        assert_eq!(treewidth_by_permutations(&grid(3, 3)).unwrap(), 3);
        assert_eq!(exact_treewidth(&Graph::new(1)).unwrap(), 0);
        assert_eq!(exact_treewidth(&Graph::new(0)).unwrap(), 0);
        assert!(exact_treewidth(&Graph::new(21)).is_err());
    }

    #[test]
    fn cycle_has_treewidth_two() {
        let mut e: Vec<_> = (1..5).map(|i| (i - 1, i)).collect();
        e.push((4, 0));
        let c5 = Graph::from_edges(5, &e).unwrap();
        assert_eq!(exact_treewidth(&c5).unwrap(), 2);
    }

    #[test]
    fn subset_dp_matches_permutations_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = rng.gen_range(1..=7);
            let mut e = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(0.45) {
                        e.push((i, j));
                    }
                }
            }
            let g = Graph::from_edges(n, &e).unwrap();
            assert_eq!(exact_treewidth(&g).unwrap(), treewidth_by_permutations(&g).unwrap());
        }
    }

    #[test]
    fn partition_size_examples() {
        let g = path(3);
        let p = BagPartition::new(vec![0, 2], vec![Label::W1, Label::W2]).unwrap();
        assert_eq!(brute_partition_size(&g, &[0, 1, 2], &p, Mode::Four).unwrap(), Some(1));
        let full = BagPartition::new(vec![0, 1, 2], vec![Label::W1, Label::X, Label::W2]).unwrap();
        assert_eq!(
            brute_partition_size(&g, &[0, 1, 2], &full, Mode::Four).unwrap(),
            Some(1)
        );
        let bad = BagPartition::new(vec![0, 1], vec![Label::W1, Label::W2]).unwrap();
        assert_eq!(brute_partition_size(&g, &[0, 1, 2], &bad, Mode::Four).unwrap(), None);
        let stray = BagPartition::new(vec![5], vec![Label::X]).unwrap();
        assert_eq!(
            brute_partition_size(&g, &[0, 1, 2], &stray, Mode::Four),
            Err(OracleError::BagNotInSet)
        );
    }

    #[test]
    fn partition_table_agrees_with_single_queries() {
        let g = grid(2, 3);
        let vs: Vec<Vertex> = (0..6).collect();
        let bag = vec![1, 4];
        for mode in [Mode::Three, Mode::Four] {
            let table = brute_partition_table(&g, &vs, &bag, mode).unwrap();
            for (i, &e) in table.iter().enumerate() {
                let p = BagPartition::decode(bag.clone(), PartitionIndex(i), mode).unwrap();
                let s = brute_partition_size(&g, &vs, &p, mode).unwrap();
                assert_eq!(s.unwrap_or(BOTTOM), e);
            }
        }
    }

    #[test]
    fn split_existence_examples() {
        let p5 = path(5);
        let t = TreeDecomposition::single((0..5).collect());
        let w = exists_split_bruteforce(&p5, &t, 1, Mode::Four).unwrap().unwrap();
        assert!(w.size <= 2);
        let k4 = complete(4);
        let t = TreeDecomposition::single((0..4).collect());
        assert_eq!(exists_split_bruteforce(&k4, &t, 1, Mode::Four).unwrap(), None);
    }
}
