//! Rooted tree decompositions with Main/Intersection node kinds.
//!
//! Nodes live in an arena addressed by [`NodeId`]. Deleted nodes are
//! tombstoned and their ids are never handed out again, so ids that appear in
//! validation witnesses and telemetry stay meaningful for a whole run.

mod elimination;
mod pace;
mod transform;
mod validate;

pub use elimination::{elimination_decomposition, greedy_decomposition, min_degree_order};
pub use pace::{parse_td, write_td};
pub use transform::{make_grouped, make_unique_home, IntersectionTrie};
pub use validate::{validate_grouped, validate_td, ValidationReport, Violation};

use std::fmt;

use thiserror::Error;

use crate::graph::Vertex;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Main,
    Intersection,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub bag: Vec<Vertex>,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub kind: NodeKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompError {
    #[error("decomposition is not a valid tree decomposition: {0}")]
    Invalid(String),
    #[error("intersection of bags {0} and {1} is empty; the graph is disconnected")]
    Disconnected(NodeId, NodeId),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Debug)]
pub struct TreeDecomposition {
    nodes: Vec<Option<Node>>,
    root: NodeId,
    live: usize,
}

impl TreeDecomposition {
    /// A one-node decomposition whose root is a Main node with `bag`.
    pub fn single(bag: Vec<Vertex>) -> Self {
        let mut t = TreeDecomposition {
            nodes: Vec::new(),
            root: NodeId(0),
            live: 0,
        };
        t.add_node(bag, NodeKind::Main, None);
        t
    }

    /// Builds a decomposition from bags and undirected tree edges, rooted at
    /// bag 0. All nodes are Main.
    pub fn from_bags_and_edges(bags: Vec<Vec<Vertex>>, edges: &[(usize, usize)]) -> Result<Self, DecompError> {
        if bags.is_empty() {
            return Err(DecompError::Invalid("no bags".into()));
        }
        let nb = bags.len();
        if edges.len() + 1 != nb {
            return Err(DecompError::Invalid(format!(
                "{nb} bags need {} tree edges, found {}",
                nb - 1,
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); nb];
        for &(a, b) in edges {
            if a >= nb || b >= nb || a == b {
                return Err(DecompError::Invalid(format!("bad tree edge {a}-{b}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![usize::MAX; nb];
        let mut order = Vec::with_capacity(nb);
        let mut seen = vec![false; nb];
        seen[0] = true;
        order.push(0);
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = u;
                    order.push(v);
                }
            }
        }
        if order.len() != nb {
            return Err(DecompError::Invalid("decomposition tree is disconnected".into()));
        }
        let mut t = TreeDecomposition {
            nodes: Vec::with_capacity(nb),
            root: NodeId(0),
            live: 0,
        };
        for mut bag in bags {
            bag.sort_unstable();
            bag.dedup();
            t.nodes.push(Some(Node {
                bag,
                parent: None,
                children: Vec::new(),
                kind: NodeKind::Main,
            }));
            t.live += 1;
        }
        for &v in order.iter().skip(1) {
            t.attach(NodeId(v), NodeId(parent[v]));
        }
        Ok(t)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn set_root(&mut self, id: NodeId) {
        debug_assert!(self.node(id).parent.is_none());
        self.root = id;
    }

    /// Adds a node; when `parent` is given it is appended to that node's children.
    pub fn add_node(&mut self, bag: Vec<Vertex>, kind: NodeKind, parent: Option<NodeId>) -> NodeId {
        debug_assert!(bag.windows(2).all(|w| w[0] < w[1]), "bag must be sorted");
        let id = NodeId(self.nodes.len());
        self.nodes.push(Some(Node {
            bag,
            parent: None,
            children: Vec::new(),
            kind,
        }));
        self.live += 1;
        if let Some(p) = parent {
            self.attach(id, p);
        }
        id
    }

    pub fn is_alive(&self, id: NodeId) -> bool {
        self.nodes.get(id.0).is_some_and(Option::is_some)
    }

    pub fn node(&self, id: NodeId) -> &Node {
        self.nodes[id.0].as_ref().expect("access to deleted node")
    }

    pub fn node_mut(&mut self, id: NodeId) -> &mut Node {
        self.nodes[id.0].as_mut().expect("access to deleted node")
    }

    pub fn bag(&self, id: NodeId) -> &[Vertex] {
        &self.node(id).bag
    }

    pub fn kind(&self, id: NodeId) -> NodeKind {
        self.node(id).kind
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.node(id).parent
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.node(id).children
    }

    /// Main grandparent of a Main node, if any.
    pub fn grandparent(&self, id: NodeId) -> Option<NodeId> {
        self.parent(id).and_then(|p| self.parent(p))
    }

    /// Upper bound (exclusive) on node ids handed out so far.
    pub fn capacity(&self) -> usize {
        self.nodes.len()
    }

    /// Number of live nodes.
    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.is_some())
            .map(|(i, _)| NodeId(i))
    }

    pub fn main_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.node_ids().filter(|&id| self.kind(id) == NodeKind::Main)
    }

    pub fn max_bag_size(&self) -> usize {
        self.node_ids().map(|id| self.bag(id).len()).max().unwrap_or(0)
    }

    /// Maximum bag size minus one (0 for decompositions with only empty bags).
    pub fn width(&self) -> usize {
        self.max_bag_size().saturating_sub(1)
    }

    /// Makes `child` (which must have no parent) the last child of `parent`.
    pub fn attach(&mut self, child: NodeId, parent: NodeId) {
        debug_assert!(self.node(child).parent.is_none());
        self.node_mut(child).parent = Some(parent);
        self.node_mut(parent).children.push(child);
    }

    /// Unlinks `child` from its parent, if it has one.
    pub fn detach(&mut self, child: NodeId) {
        if let Some(p) = self.node_mut(child).parent.take() {
            let list = &mut self.node_mut(p).children;
            let pos = list
                .iter()
                .position(|&c| c == child)
                .expect("parent/child links out of sync");
            list.remove(pos);
        }
    }

    /// Tombstones a node that has already been detached and emptied of children.
    pub fn remove_node(&mut self, id: NodeId) {
        let node = self.nodes[id.0].take().expect("double delete");
        debug_assert!(node.parent.is_none() && node.children.is_empty());
        self.live -= 1;
    }

    /// Re-parents every child of `from` under `to`.
    pub fn move_children(&mut self, from: NodeId, to: NodeId) {
        let kids = std::mem::take(&mut self.node_mut(from).children);
        for c in kids {
            self.node_mut(c).parent = Some(to);
            self.node_mut(to).children.push(c);
        }
    }

    /// Live nodes in preorder from the root.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.live);
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            out.push(x);
            stack.extend(self.children(x).iter().rev().copied());
        }
        out
    }

    /// Live nodes with every child listed before its parent.
    pub fn postorder(&self) -> Vec<NodeId> {
        let mut out = self.preorder();
        out.reverse();
        out
    }

    /// The home node of every vertex `0..n` (`None` for vertices in no bag).
    pub fn homes(&self, n: usize) -> Vec<Option<NodeId>> {
        let mut home = vec![None; n];
        for id in self.node_ids() {
            let pbag = self.parent(id).map(|p| self.bag(p));
            for &v in self.bag(id) {
                if v < n && pbag.is_none_or(|pb| !crate::bag::contains(pb, v)) {
                    home[v] = Some(id);
                }
            }
        }
        home
    }

    /// Copy with dense ids in preorder, kinds and shape preserved.
    pub fn compacted(&self) -> TreeDecomposition {
        let order = self.preorder();
        let mut remap = vec![usize::MAX; self.capacity()];
        for (i, id) in order.iter().enumerate() {
            remap[id.0] = i;
        }
        let nodes = order
            .iter()
            .map(|&id| {
                let n = self.node(id);
                Some(Node {
                    bag: n.bag.clone(),
                    parent: n.parent.map(|p| NodeId(remap[p.0])),
                    children: n.children.iter().map(|c| NodeId(remap[c.0])).collect(),
                    kind: n.kind,
                })
            })
            .collect();
        TreeDecomposition {
            nodes,
            root: NodeId(0),
            live: order.len(),
        }
    }

    /// Canonical nested rendering (bags, kinds, child order) for structural comparison.
    pub fn shape(&self) -> String {
        fn rec(t: &TreeDecomposition, x: NodeId, out: &mut String) {
            let tag = match t.kind(x) {
                NodeKind::Main => 'M',
                NodeKind::Intersection => 'I',
            };
            out.push(tag);
            out.push_str(&format!("{:?}", t.bag(x)));
            if !t.children(x).is_empty() {
                out.push('(');
                for &c in t.children(x) {
                    rec(t, c, out);
                }
                out.push(')');
            }
        }
        let mut s = String::new();
        rec(self, self.root, &mut s);
        s
    }

    /// Attaches the root of `other` below `at` (an arbitrary tree edge), used
    /// to join per-component decompositions.
    pub fn graft(&mut self, other: &TreeDecomposition, at: NodeId) {
        let mut map = vec![NodeId(usize::MAX); other.capacity()];
        for x in other.preorder() {
            let n = other.node(x);
            let parent = match n.parent {
                Some(p) => map[p.0],
                None => at,
            };
            map[x.0] = self.add_node(n.bag.clone(), n.kind, Some(parent));
        }
    }

    /// Applies `f` to every vertex of every bag; `f` must be increasing so
    /// bags stay sorted.
    pub fn relabel(&mut self, f: impl Fn(Vertex) -> Vertex) {
        for node in self.nodes.iter_mut().flatten() {
            for v in node.bag.iter_mut() {
                *v = f(*v);
            }
        }
    }
}
