use std::collections::{HashMap, HashSet};

use super::select::components_of;
use super::{Engine, EngineError, SplitAssignment};
use crate::bag;
use crate::decomposition::{NodeId, NodeKind};
use crate::graph::Vertex;
use crate::partition::Label;

impl Engine<'_> {
    /// Replaces every editable node `x` by copies `x_i`, `i ∈ a(x)`, with bag
    /// `(B_x ∩ C_i) ∪ (S ∩ V_x)`, below a new root with bag `S`. Copies that
    /// would not be home to any vertex are merged into the copy above them.
    /// Non-editable subtrees move unchanged below the copy of their
    /// component. Returns the new Main nodes.
    pub fn apply_split(&mut self, asg: &SplitAssignment) -> Result<Vec<NodeId>, EngineError> {
        let r = self.t.root();
        if asg.root != r || asg.editable.len() > self.t.capacity() || !asg.is_editable(r) {
            return Err(EngineError::Stale(asg.root));
        }
        let width = self.audit_width();
        let label = |v: Vertex| asg.labels[v].expect("vertex of an editable bag");

        // Editable nodes top-down and the separator vertices below each
        // editable Main node.
        let mut order = Vec::new();
        let mut max_bag = 0;
        let mut stack = vec![r];
        while let Some(x) = stack.pop() {
            if !self.t.is_alive(x) || !asg.is_editable(x) {
                continue;
            }
            order.push(x);
            max_bag = max_bag.max(self.t.bag(x).len());
            stack.extend(self.t.children(x).iter().copied());
        }
        let mut below: HashMap<NodeId, Vec<Vertex>> = HashMap::new();
        for &x in order.iter().rev() {
            if self.t.kind(x) != NodeKind::Main {
                continue;
            }
            let mut sv: Vec<Vertex> = self
                .t
                .bag(x)
                .iter()
                .copied()
                .filter(|&v| label(v) == Label::X)
                .collect();
            for &y in self.t.children(x) {
                if !asg.is_editable(y) {
                    continue;
                }
                for &c in self.t.children(y) {
                    let Some(csv) = below.get(&c) else {
                        return Err(EngineError::Invariant(format!(
                            "Main node {c} below editable {y} is not editable"
                        )));
                    };
                    sv = bag::union(&sv, csv);
                }
            }
            below.insert(x, sv);
        }

        let sep = asg.separator.clone();
        let mut fresh: HashSet<NodeId> = HashSet::new();
        let mut new_mains = Vec::new();
        let new_root = self.new_node(sep.clone(), NodeKind::Main, None);
        let top = self.new_node(sep.clone(), NodeKind::Intersection, Some(new_root));
        fresh.extend([new_root, top]);
        new_mains.push(new_root);

        let mut copies: HashMap<(NodeId, usize), NodeId> = HashMap::new();
        for &x in &order {
            if self.t.kind(x) != NodeKind::Main {
                continue;
            }
            let xbag = self.t.bag(x).to_vec();
            for i in components_of(asg.a[x.0]) {
                let own: Vec<Vertex> = xbag
                    .iter()
                    .copied()
                    .filter(|&v| label(v) == Label::component(i))
                    .collect();
                let bag_i = bag::union(&own, &below[&x]);
                if bag_i.len() > max_bag {
                    return Err(EngineError::Invariant(format!(
                        "copy of {x} has {} vertices, above the maximum {max_bag}",
                        bag_i.len()
                    )));
                }
                let copy = if x == r {
                    // Forget chain from S up to the root copy.
                    let mut above = top;
                    let mut acc = sep.clone();
                    for &u in &own[..own.len() - 1] {
                        acc = bag::union(&acc, &[u]);
                        let m = self.new_node(acc.clone(), NodeKind::Main, Some(above));
                        above = self.new_node(acc.clone(), NodeKind::Intersection, Some(m));
                        fresh.extend([m, above]);
                        new_mains.push(m);
                    }
                    let c = self.new_node(bag_i, NodeKind::Main, Some(above));
                    fresh.insert(c);
                    new_mains.push(c);
                    c
                } else {
                    let p = self.t.grandparent(x).expect("non-root Main");
                    let target = copies[&(p, i)];
                    let tbag = self.t.bag(target);
                    let extra = bag::difference_len(&bag_i, tbag);
                    if extra == 0 {
                        self.counters.merges += 1;
                        target
                    } else if extra == 1 {
                        let ib = bag::intersection(&bag_i, tbag);
                        let iy = match self.intersection_child(target, &ib) {
                            Some(iy) => iy,
                            None => {
                                let iy = self.new_node(ib, NodeKind::Intersection, Some(target));
                                fresh.insert(iy);
                                iy
                            }
                        };
                        let c = self.new_node(bag_i, NodeKind::Main, Some(iy));
                        fresh.extend([iy, c]);
                        new_mains.push(c);
                        c
                    } else {
                        return Err(EngineError::Invariant(format!(
                            "copy of {x} introduces {extra} vertices"
                        )));
                    }
                };
                copies.insert((x, i), copy);
            }
            // Non-editable Intersection children follow their component.
            for y in self.t.children(x).to_vec() {
                if asg.is_editable(y) {
                    continue;
                }
                let i = components_of(asg.a[y.0]).next().expect("boundary node has a component");
                let target = copies[&(x, i)];
                self.t.detach(y);
                match self.intersection_child(target, self.t.bag(y)) {
                    Some(twin) if fresh.contains(&twin) => {
                        self.t.move_children(y, twin);
                        self.delete_node(y);
                    }
                    Some(twin) => {
                        let yt = self.take_table(y);
                        let mut tt = self.take_table(twin);
                        tt.fuse(&yt)?;
                        self.set_table(twin, tt);
                        self.counters.dp_recomputes += 1;
                        self.counters.fused_tables += 1;
                        self.t.move_children(y, twin);
                        self.delete_node(y);
                    }
                    None => self.t.attach(y, target),
                }
            }
        }

        // Drop the original editable nodes, children first.
        for &x in order.iter().rev() {
            if !self.t.children(x).is_empty() {
                return Err(EngineError::Invariant(format!("editable node {x} kept children")));
            }
            self.delete_node(x);
        }
        self.t.set_root(new_root);

        // Recompute new tables bottom-up. Every node needing a new table has
        // a parent that needs one too, so a walk through fresh nodes finds all.
        let mut post = Vec::new();
        let mut stack = vec![(new_root, false)];
        while let Some((x, done)) = stack.pop() {
            if done {
                post.push(x);
                continue;
            }
            stack.push((x, true));
            for &c in self.t.children(x) {
                if fresh.contains(&c) {
                    stack.push((c, false));
                }
            }
        }
        for x in post {
            self.recompute(x);
        }
        self.counters.splits += 1;
        self.audit_structure("split", width);
        Ok(new_mains)
    }
}
