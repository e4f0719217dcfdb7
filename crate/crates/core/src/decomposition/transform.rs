use super::{DecompError, NodeId, NodeKind, TreeDecomposition};
use crate::bag;
use crate::graph::Vertex;

/// Binary trie over the positions of a Main node's bag, used to find the
/// intersection child with a given bag in `O(|bag|)` steps. Layer `i`
/// branches on whether the `i`-th bag vertex is included.
#[derive(Debug)]
pub struct IntersectionTrie<'a> {
    bag: &'a [Vertex],
    nodes: Vec<[u32; 2]>,
    leaves: Vec<Option<NodeId>>,
}

const NONE: u32 = u32::MAX;

impl<'a> IntersectionTrie<'a> {
    pub fn new(bag: &'a [Vertex]) -> Self {
        IntersectionTrie {
            bag,
            nodes: vec![[NONE; 2]],
            leaves: vec![None],
        }
    }

    fn walk(&mut self, subset: &[Vertex], create: bool) -> Option<usize> {
        let mut cur = 0usize;
        let mut j = 0;
        for &v in self.bag {
            let bit = usize::from(j < subset.len() && subset[j] == v);
            if bit == 1 {
                j += 1;
            }
            let next = self.nodes[cur][bit];
            cur = if next == NONE {
                if !create {
                    return None;
                }
                self.nodes.push([NONE; 2]);
                self.leaves.push(None);
                let id = self.nodes.len() - 1;
                self.nodes[cur][bit] = id as u32;
                id
            } else {
                next as usize
            };
        }
        debug_assert_eq!(j, subset.len(), "subset not contained in bag");
        Some(cur)
    }

    pub fn get(&mut self, subset: &[Vertex]) -> Option<NodeId> {
        self.walk(subset, false).and_then(|leaf| self.leaves[leaf])
    }

    /// Returns the node stored for `subset`, inserting `make()` if absent.
    pub fn get_or_insert_with(&mut self, subset: &[Vertex], make: impl FnOnce() -> NodeId) -> NodeId {
        let leaf = self.walk(subset, true).expect("create");
        *self.leaves[leaf].get_or_insert_with(make)
    }
}

fn check_basic(t: &TreeDecomposition) -> Result<(), DecompError> {
    // Connectivity of each vertex's bags can be checked without the graph.
    let n = t
        .node_ids()
        .flat_map(|id| t.bag(id).iter().copied())
        .max()
        .map_or(0, |m| m + 1);
    let mut tops = vec![0usize; n];
    for id in t.node_ids() {
        let pbag = t.parent(id).map(|p| t.bag(p));
        for &v in t.bag(id) {
            if pbag.is_none_or(|pb| !bag::contains(pb, v)) {
                tops[v] += 1;
            }
        }
    }
    if let Some(v) = tops.iter().position(|&c| c > 1) {
        return Err(DecompError::Invalid(format!(
            "bags containing vertex {} are disconnected",
            v + 1
        )));
    }
    Ok(())
}

/// Undirected adjacency of the decomposition tree, used for re-rooting.
fn tree_neighbors(t: &TreeDecomposition, x: NodeId) -> impl Iterator<Item = NodeId> + '_ {
    t.parent(x).into_iter().chain(t.children(x).iter().copied())
}

/// Converts `t` into a unique-home decomposition of the same graph and width:
/// every non-root node is home to exactly one vertex, the root to at least one.
/// Subset children are absorbed into their parent; children introducing
/// several vertices get a chain of forget nodes above them. All output nodes
/// are Main.
pub fn make_unique_home(t: &TreeDecomposition) -> Result<TreeDecomposition, DecompError> {
    check_basic(t)?;
    // Root at a node with a non-empty bag when the given root's bag is empty.
    let start = if t.bag(t.root()).is_empty() {
        match t.node_ids().find(|&id| !t.bag(id).is_empty()) {
            Some(id) => id,
            None => return Ok(TreeDecomposition::single(Vec::new())),
        }
    } else {
        t.root()
    };
    let mut out = TreeDecomposition::single(t.bag(start).to_vec());
    // (original node, where it came from, output parent)
    let mut stack: Vec<(NodeId, Option<NodeId>, NodeId)> = Vec::new();
    let push_neighbors = |stack: &mut Vec<_>, x: NodeId, from: Option<NodeId>, np: NodeId| {
        let nbrs: Vec<NodeId> = tree_neighbors(t, x).filter(|&y| Some(y) != from).collect();
        for y in nbrs.into_iter().rev() {
            stack.push((y, Some(x), np));
        }
    };
    push_neighbors(&mut stack, start, None, out.root());
    while let Some((y, from, np)) = stack.pop() {
        let ybag = t.bag(y);
        let pbag = out.bag(np).to_vec();
        if bag::is_subset(ybag, &pbag) {
            push_neighbors(&mut stack, y, from, np);
            continue;
        }
        let diff = bag::difference(ybag, &pbag);
        let mut acc = bag::intersection(ybag, &pbag);
        let mut cur = np;
        for &v in &diff[..diff.len() - 1] {
            acc = bag::union(&acc, &[v]);
            cur = out.add_node(acc.clone(), NodeKind::Main, Some(cur));
        }
        let ny = out.add_node(ybag.to_vec(), NodeKind::Main, Some(cur));
        push_neighbors(&mut stack, y, from, ny);
    }
    Ok(out)
}

/// Converts `t` into a grouped decomposition (alternating Main/Intersection
/// nodes) of the same graph and width. Children of each Main node are grouped
/// under one Intersection node per distinct bag intersection, found through a
/// per-parent [`IntersectionTrie`]. Fails when some intersection is empty,
/// which only happens for disconnected graphs.
pub fn make_grouped(t: &TreeDecomposition) -> Result<TreeDecomposition, DecompError> {
    let uh = make_unique_home(t)?;
    let mut out = TreeDecomposition::single(uh.bag(uh.root()).to_vec());
    let mut queue = vec![(uh.root(), out.root())];
    while let Some((x, nx)) = queue.pop() {
        let xbag = uh.bag(x).to_vec();
        let mut trie = IntersectionTrie::new(&xbag);
        for &y in uh.children(x) {
            let ybag = uh.bag(y);
            let inter = bag::intersection(ybag, &xbag);
            if inter.is_empty() {
                return Err(DecompError::Disconnected(x, y));
            }
            let z = trie.get_or_insert_with(&inter, || out.add_node(inter.clone(), NodeKind::Intersection, Some(nx)));
            let ny = out.add_node(ybag.to_vec(), NodeKind::Main, Some(z));
            queue.push((y, ny));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{validate_grouped, validate_td};
    use crate::graph::Graph;

    fn chain(bags: Vec<Vec<Vertex>>) -> TreeDecomposition {
        let edges: Vec<_> = (1..bags.len()).map(|i| (i - 1, i)).collect();
        TreeDecomposition::from_bags_and_edges(bags, &edges).unwrap()
    }

    #[test]
    fn subset_child_is_absorbed() {
        let mut t = TreeDecomposition::single(vec![0, 1]);
        let r = t.root();
        let c = t.add_node(vec![0], NodeKind::Main, Some(r));
        t.add_node(vec![0, 2], NodeKind::Main, Some(c));
        let u = make_unique_home(&t).unwrap();
        assert_eq!(u.shape(), "M[0, 1](M[0, 2])");
    }

    #[test]
    fn forget_chain_inserted() {
        let t = chain(vec![vec![0], vec![0, 1, 2]]);
        let u = make_unique_home(&t).unwrap();
        assert_eq!(u.shape(), "M[0](M[0, 1](M[0, 1, 2]))");
    }

    #[test]
    fn unique_home_input_unchanged() {
        let t = chain(vec![vec![0, 1], vec![1, 2], vec![2, 3]]);
        assert_eq!(make_unique_home(&t).unwrap().shape(), t.shape());
    }

    #[test]
    fn empty_root_is_rerooted() {
        let t = chain(vec![vec![], vec![0, 1]]);
        let u = make_unique_home(&t).unwrap();
        assert_eq!(u.shape(), "M[0, 1]");
    }

    #[test]
    fn grouped_chain() {
        let t = chain(vec![vec![0, 1], vec![1, 2]]);
        let gt = make_grouped(&t).unwrap();
        assert_eq!(gt.shape(), "M[0, 1](I[1](M[1, 2]))");
        assert!(validate_grouped(&gt).is_valid());
    }

    #[test]
    fn grouped_shares_intersection() {
        let t = TreeDecomposition::from_bags_and_edges(
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4]],
            &[(0, 1), (0, 2)],
        )
        .unwrap();
        let gt = make_grouped(&t).unwrap();
        assert_eq!(gt.shape(), "M[0, 1, 2](I[0, 1](M[0, 1, 3]M[0, 1, 4]))");
        assert!(validate_grouped(&gt).is_valid());
    }

    #[test]
    fn single_node_grouped_unchanged() {
        let t = TreeDecomposition::single(vec![0, 1]);
        assert_eq!(make_grouped(&t).unwrap().shape(), "M[0, 1]");
    }

    #[test]
    fn disconnected_rejected() {
        let t = chain(vec![vec![0], vec![1]]);
        assert!(matches!(make_grouped(&t), Err(DecompError::Disconnected(..))));
    }

    #[test]
    fn trie_lookup() {
        let bag = vec![1, 4, 6, 9];
        let mut trie = IntersectionTrie::new(&bag);
        assert_eq!(trie.get(&[4, 9]), None);
        assert_eq!(trie.get_or_insert_with(&[4, 9], || NodeId(7)), NodeId(7));
        assert_eq!(trie.get_or_insert_with(&[4, 9], || NodeId(8)), NodeId(7));
        assert_eq!(trie.get(&[4]), None);
        assert_eq!(trie.get_or_insert_with(&[], || NodeId(1)), NodeId(1));
    }

    #[test]
    fn transforms_keep_validity_and_width() {
        // Star-ish decomposition of a caterpillar with redundant bags.
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (1, 4), (2, 5)]).unwrap();
        let t = TreeDecomposition::from_bags_and_edges(
            vec![vec![1, 2], vec![0, 1], vec![2, 3, 5], vec![1, 4], vec![2], vec![1]],
            &[(0, 1), (0, 2), (0, 3), (2, 4), (1, 5)],
        )
        .unwrap();
        assert!(validate_td(&g, &t).is_valid());
        let u = make_unique_home(&t).unwrap();
        assert!(validate_td(&g, &u).is_valid());
        assert_eq!(u.width(), t.width());
        assert!(u.len() <= g.n());
        let gt = make_grouped(&t).unwrap();
        assert!(validate_td(&g, &gt).is_valid());
        assert!(validate_grouped(&gt).is_valid());
        assert_eq!(gt.width(), t.width());
    }
}
