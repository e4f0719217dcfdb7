use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::bag;
use crate::decomposition::TreeDecomposition;
use crate::graph::{Graph, Vertex};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    PartialKTree,
    Grid,
    Path,
    Cycle,
    Complete,
    Tree,
}

impl std::str::FromStr for Family {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "partial-k-tree" => Family::PartialKTree,
            "grid" => Family::Grid,
            "path" => Family::Path,
            "cycle" => Family::Cycle,
            "complete" => Family::Complete,
            "tree" => Family::Tree,
            _ => return Err(OracleError::BadSpec(format!("unknown family `{s}`"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    /// k-tree parameter, or the number of rows for grids.
    pub k: usize,
    /// Probability of keeping each optional edge of a partial k-tree.
    pub keep: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize, k: usize, seed: u64) -> Self {
        GeneratorSpec {
            family,
            n,
            k,
            keep: 0.7,
            seed,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: Graph,
    /// Decomposition of width at most `k` (partial k-trees only).
    pub witness: Option<TreeDecomposition>,
}

/// Deterministic instance for `spec`. Partial k-trees are always connected:
/// every vertex keeps at least one edge to the clique it was attached to.
pub fn generate(spec: &GeneratorSpec) -> Result<Generated, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let plain = |edges: Vec<(Vertex, Vertex)>| -> Result<Generated, OracleError> {
        let graph = Graph::from_edges(n, &edges).map_err(|e| OracleError::BadSpec(e.to_string()))?;
        Ok(Generated { graph, witness: None })
    };
    match spec.family {
        Family::Path => plain((1..n).map(|i| (i - 1, i)).collect()),
        Family::Cycle => {
            if n < 3 {
                return Err(OracleError::BadSpec("cycle needs n >= 3".into()));
            }
            let mut e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
            e.push((n - 1, 0));
            plain(e)
        }
        Family::Complete => {
            let mut e = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    e.push((i, j));
                }
            }
            plain(e)
        }
        Family::Tree => plain((1..n).map(|i| (rng.gen_range(0..i), i)).collect()),
        Family::Grid => {
            let rows = spec.k.max(1);
            if !n.is_multiple_of(rows) {
                return Err(OracleError::BadSpec("grid needs k dividing n".into()));
            }
            let cols = n / rows;
            let mut e = Vec::new();
            for i in 0..rows {
                for j in 0..cols {
                    let v = i * cols + j;
                    if j + 1 < cols {
                        e.push((v, v + 1));
                    }
                    if i + 1 < rows {
                        e.push((v, v + cols));
                    }
                }
            }
            plain(e)
        }
        Family::PartialKTree => partial_k_tree(n, spec.k, spec.keep, &mut rng),
    }
}

fn partial_k_tree(n: usize, k: usize, keep: f64, rng: &mut ChaCha8Rng) -> Result<Generated, OracleError> {
    if n < k + 1 {
        return Err(OracleError::BadSpec(format!("partial {k}-tree needs n >= {}", k + 1)));
    }
    let mut edges = Vec::new();
    // The seed clique keeps a spanning path.
    for i in 0..=k {
        for j in i + 1..=k {
            if j == i + 1 || rng.gen_bool(keep) {
                edges.push((i, j));
            }
        }
    }
    let mut bags: Vec<Vec<Vertex>> = vec![(0..=k).collect()];
    let mut tree = Vec::new();
    for v in k + 1..n {
        let host = rng.gen_range(0..bags.len());
        let mut clique = bags[host].clone();
        if clique.len() > k {
            clique.remove(rng.gen_range(0..clique.len()));
        }
        let anchor = rng.gen_range(0..clique.len().max(1));
        for (i, &u) in clique.iter().enumerate() {
            if i == anchor || rng.gen_bool(keep) {
                edges.push((u, v));
            }
        }
        clique.push(v);
        bags.push(clique);
        tree.push((host, bags.len() - 1));
    }
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(rng);
    let edges: Vec<_> = edges.into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
    let bags: Vec<Vec<Vertex>> = bags
        .into_iter()
        .map(|b| {
            let mut b: Vec<_> = b.into_iter().map(|v| perm[v]).collect();
            b.sort_unstable();
            b
        })
        .collect();
    let graph = Graph::from_edges(n, &edges).map_err(|e| OracleError::BadSpec(e.to_string()))?;
    let witness =
        TreeDecomposition::from_bags_and_edges(bags, &tree).map_err(|e| OracleError::BadSpec(e.to_string()))?;
    Ok(Generated {
        graph,
        witness: Some(witness),
    })
}

/// Contracts random tree edges of `t` whenever the merged bag has at most
/// `target` vertices. The result decomposes the same graph with bags of size
/// at most `max(target, max bag of t)`.
pub fn coarsen_decomposition(t: &TreeDecomposition, target: usize, seed: u64) -> TreeDecomposition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids: Vec<_> = t.node_ids().collect();
    let mut index = vec![usize::MAX; t.capacity()];
    for (i, id) in ids.iter().enumerate() {
        index[id.0] = i;
    }
    let mut bags: Vec<Vec<Vertex>> = ids.iter().map(|&id| t.bag(id).to_vec()).collect();
    let mut edges: Vec<(usize, usize)> = ids
        .iter()
        .filter_map(|&id| t.parent(id).map(|p| (index[p.0], index[id.0])))
        .collect();
    edges.shuffle(&mut rng);
    let mut uf: Vec<usize> = (0..ids.len()).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    for &(a, b) in &edges {
        let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
        let merged = bag::union(&bags[ra], &bags[rb]);
        if merged.len() <= target {
            uf[rb] = ra;
            bags[ra] = merged;
            bags[rb].clear();
        }
    }
    let mut slot = vec![usize::MAX; ids.len()];
    let mut out_bags = Vec::new();
    for i in 0..ids.len() {
        if find(&mut uf, i) == i {
            slot[i] = out_bags.len();
            out_bags.push(std::mem::take(&mut bags[i]));
        }
    }
    let mut out_edges = Vec::new();
    for &(a, b) in &edges {
        let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
        if ra != rb {
            out_edges.push((slot[ra], slot[rb]));
        }
    }
    TreeDecomposition::from_bags_and_edges(out_bags, &out_edges).expect("contraction of a tree is a tree")
}
