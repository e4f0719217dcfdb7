use std::collections::HashSet;
use std::fmt;

use super::{NodeId, NodeKind, TreeDecomposition};
use crate::bag;
use crate::graph::{Graph, Vertex};

/// A violated condition with its witness. Vertices are shown 1-indexed in
/// `Display` output to match the PACE files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    BrokenLink(NodeId),
    Unreachable(NodeId),
    UnsortedBag(NodeId),
    VertexOutOfRange { node: NodeId, vertex: Vertex },
    UncoveredEdge(Vertex, Vertex),
    UncoveredVertex(Vertex),
    Disconnected { vertex: Vertex, a: NodeId, b: NodeId },
    RootNotMain,
    EmptyRootBag,
    LeafNotMain(NodeId),
    KindsNotAlternating(NodeId),
    NotUniqueHome { node: NodeId, homes: usize },
    EmptyGrandparentBag(NodeId),
    IntersectionMismatch(NodeId),
    IntersectionNotSubset(NodeId),
    DuplicateSiblingBags(NodeId, NodeId),
    TooManyChildren(NodeId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            BrokenLink(x) => write!(f, "parent/child links of node {x} are inconsistent"),
            Unreachable(x) => write!(f, "node {x} is not reachable from the root"),
            UnsortedBag(x) => write!(f, "bag of node {x} is not a sorted set"),
            VertexOutOfRange { node, vertex } => {
                write!(f, "node {node} contains vertex {} outside the graph", vertex + 1)
            }
            UncoveredEdge(u, v) => write!(f, "edge {} {} is not covered by any bag", u + 1, v + 1),
            UncoveredVertex(v) => write!(f, "vertex {} appears in no bag", v + 1),
            Disconnected { vertex, a, b } => write!(
                f,
                "bags containing vertex {} are disconnected (nodes {a} and {b})",
                vertex + 1
            ),
            RootNotMain => write!(f, "root is not a Main node"),
            EmptyRootBag => write!(f, "root bag is empty"),
            LeafNotMain(x) => write!(f, "leaf {x} is not a Main node"),
            KindsNotAlternating(x) => write!(f, "node {x} has a parent of the same kind"),
            NotUniqueHome { node, homes } => {
                write!(f, "Main node {node} is home to {homes} vertices, expected 1")
            }
            EmptyGrandparentBag(x) => write!(f, "grandparent of node {x} has an empty bag"),
            IntersectionMismatch(x) => write!(
                f,
                "intersection above node {x} differs from its bag intersected with its grandparent"
            ),
            IntersectionNotSubset(x) => {
                write!(f, "intersection node {x} is not a subset of its parent")
            }
            DuplicateSiblingBags(a, b) => {
                write!(f, "sibling intersection nodes {a} and {b} have equal bags")
            }
            TooManyChildren(x) => write!(f, "node {x} has more than 2^|bag|-1 children"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

fn check_links(t: &TreeDecomposition, report: &mut ValidationReport) -> bool {
    let mut ok = true;
    for id in t.node_ids() {
        let node = t.node(id);
        if !node.bag.windows(2).all(|w| w[0] < w[1]) {
            report.violations.push(Violation::UnsortedBag(id));
        }
        if let Some(p) = node.parent {
            if !t.is_alive(p) || !t.children(p).contains(&id) {
                report.violations.push(Violation::BrokenLink(id));
                ok = false;
            }
        } else if id != t.root() {
            report.violations.push(Violation::Unreachable(id));
            ok = false;
        }
        for &c in &node.children {
            if !t.is_alive(c) || t.parent(c) != Some(id) {
                report.violations.push(Violation::BrokenLink(id));
                ok = false;
            }
        }
    }
    if !ok {
        return false;
    }
    // Every node must be reachable from the root exactly once.
    let mut seen = vec![false; t.capacity()];
    let mut stack = vec![t.root()];
    let mut count = 0;
    while let Some(x) = stack.pop() {
        if seen[x.0] {
            report.violations.push(Violation::BrokenLink(x));
            return false;
        }
        seen[x.0] = true;
        count += 1;
        stack.extend(t.children(x).iter().copied());
    }
    if count != t.len() {
        for id in t.node_ids().filter(|id| !seen[id.0]) {
            report.violations.push(Violation::Unreachable(id));
        }
        return false;
    }
    true
}

/// Checks edge coverage, vertex coverage and per-vertex connectivity of `t`
/// against `g`, plus link consistency of the rooted tree.
pub fn validate_td(g: &Graph, t: &TreeDecomposition) -> ValidationReport {
    let mut report = ValidationReport::default();
    if !check_links(t, &mut report) {
        return report;
    }
    let n = g.n();
    let mut occurrences = vec![0usize; n];
    let mut tops: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut covered: HashSet<(Vertex, Vertex)> = HashSet::with_capacity(g.m());
    for id in t.node_ids() {
        let bag = t.bag(id);
        let pbag = t.parent(id).map(|p| t.bag(p));
        for (i, &u) in bag.iter().enumerate() {
            if u >= n {
                report
                    .violations
                    .push(Violation::VertexOutOfRange { node: id, vertex: u });
                continue;
            }
            occurrences[u] += 1;
            if pbag.is_none_or(|pb| !bag::contains(pb, u)) {
                tops[u].push(id);
            }
            for &v in &bag[i + 1..] {
                if v < n && g.has_edge(u, v) {
                    covered.insert((u, v));
                }
            }
        }
    }
    if covered.len() != g.m() {
        for e in g.edges() {
            if !covered.contains(&e) {
                report.violations.push(Violation::UncoveredEdge(e.0, e.1));
            }
        }
    }
    for v in 0..n {
        if occurrences[v] == 0 {
            report.violations.push(Violation::UncoveredVertex(v));
        } else if tops[v].len() > 1 {
            report.violations.push(Violation::Disconnected {
                vertex: v,
                a: tops[v][0],
                b: tops[v][1],
            });
        }
    }
    report
}

/// Checks the grouped normal form: kinds, alternation, unique homes of Main
/// grandchildren, intersection bags, distinct sibling intersections, and the
/// `2^|B_x| - 1` bound on children.
pub fn validate_grouped(t: &TreeDecomposition) -> ValidationReport {
    let mut report = ValidationReport::default();
    if !check_links(t, &mut report) {
        return report;
    }
    let root = t.root();
    if t.kind(root) != NodeKind::Main {
        report.violations.push(Violation::RootNotMain);
    }
    if t.bag(root).is_empty() {
        report.violations.push(Violation::EmptyRootBag);
    }
    for id in t.node_ids() {
        let node = t.node(id);
        if node.children.is_empty() && node.kind != NodeKind::Main {
            report.violations.push(Violation::LeafNotMain(id));
        }
        if let Some(p) = node.parent {
            if t.kind(p) == node.kind {
                report.violations.push(Violation::KindsNotAlternating(id));
                continue;
            }
        }
        match node.kind {
            NodeKind::Main => {
                let bits = node.bag.len();
                if bits < 63 && node.children.len() as u64 > (1u64 << bits) - 1 {
                    report.violations.push(Violation::TooManyChildren(id));
                }
                if let (Some(p), Some(gp)) = (node.parent, t.grandparent(id)) {
                    let gbag = t.bag(gp);
                    let homes = bag::difference_len(&node.bag, gbag);
                    if homes != 1 {
                        report.violations.push(Violation::NotUniqueHome { node: id, homes });
                    }
                    if gbag.is_empty() {
                        report.violations.push(Violation::EmptyGrandparentBag(id));
                    }
                    if t.bag(p) != bag::intersection(&node.bag, gbag).as_slice() {
                        report.violations.push(Violation::IntersectionMismatch(id));
                    }
                }
            }
            NodeKind::Intersection => {
                if let Some(p) = node.parent {
                    if !bag::is_subset(&node.bag, t.bag(p)) {
                        report.violations.push(Violation::IntersectionNotSubset(id));
                    }
                }
            }
        }
        if node.kind == NodeKind::Main {
            let mut kids: Vec<NodeId> = node
                .children
                .iter()
                .copied()
                .filter(|&c| t.kind(c) == NodeKind::Intersection)
                .collect();
            kids.sort_by(|a, b| t.bag(*a).cmp(t.bag(*b)));
            for w in kids.windows(2) {
                if t.bag(w[0]) == t.bag(w[1]) {
                    report.violations.push(Violation::DuplicateSiblingBags(w[0], w[1]));
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn single_bag_k3_is_valid() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let t = TreeDecomposition::single(vec![0, 1, 2]);
        assert!(validate_td(&g, &t).is_valid());
        assert_eq!(t.width(), 2);
    }

    #[test]
    fn path_decomposition_is_valid() {
        let t = TreeDecomposition::from_bags_and_edges(vec![vec![0, 1], vec![1, 2]], &[(0, 1)]).unwrap();
        assert!(validate_td(&p3(), &t).is_valid());
        assert_eq!(t.width(), 1);
    }

    #[test]
    fn reports_uncovered_edge() {
        let t = TreeDecomposition::from_bags_and_edges(vec![vec![0, 1], vec![2]], &[(0, 1)]).unwrap();
        let r = validate_td(&p3(), &t);
        assert_eq!(r.violations, vec![Violation::UncoveredEdge(1, 2)]);
        assert_eq!(r.first().unwrap().to_string(), "edge 2 3 is not covered by any bag");
    }

    #[test]
    fn reports_uncovered_vertex_and_disconnection() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2)]).unwrap();
        let t =
            TreeDecomposition::from_bags_and_edges(vec![vec![0, 1], vec![1, 2], vec![0]], &[(0, 1), (1, 2)]).unwrap();
        let r = validate_td(&g, &t);
        assert!(r.violations.contains(&Violation::UncoveredVertex(3)));
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Disconnected { vertex: 0, .. })));
    }

    #[test]
    fn duplicate_intersection_siblings_flagged() {
        let mut t = TreeDecomposition::single(vec![0, 1, 2]);
        let r = t.root();
        let a = t.add_node(vec![0], NodeKind::Intersection, Some(r));
        let b = t.add_node(vec![0], NodeKind::Intersection, Some(r));
        t.add_node(vec![0, 3], NodeKind::Main, Some(a));
        t.add_node(vec![0, 4], NodeKind::Main, Some(b));
        let rep = validate_grouped(&t);
        assert_eq!(rep.violations, vec![Violation::DuplicateSiblingBags(a, b)]);
    }

    #[test]
    fn main_under_main_flagged() {
        let mut t = TreeDecomposition::single(vec![0, 1]);
        let r = t.root();
        let c = t.add_node(vec![1, 2], NodeKind::Main, Some(r));
        let rep = validate_grouped(&t);
        assert!(rep.violations.contains(&Violation::KindsNotAlternating(c)));
    }
}
