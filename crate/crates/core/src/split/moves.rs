use super::{Engine, EngineError};
use crate::bag;
use crate::decomposition::{NodeId, NodeKind};

impl Engine<'_> {
    /// Makes the Main grandchild `y` of the root the new root. The old root
    /// is merged into `y` when its bag is a subset of `B_y`; otherwise it is
    /// hung below `y` through a chain of Main nodes that add the vertices of
    /// `B_r \ B_y` one at a time in ascending order.
    pub fn rotate(&mut self, y: NodeId) -> Result<(), EngineError> {
        let r = self.t.root();
        let z = self.t.parent(y).ok_or(EngineError::NotGrandchild(y))?;
        if self.t.parent(z) != Some(r) || self.t.kind(y) != NodeKind::Main {
            return Err(EngineError::NotGrandchild(y));
        }
        let width = self.audit_width();
        self.counters.rotations += 1;

        // Cut y (with its subtree) off the old root.
        let old_z = self.table(z).ok_or(EngineError::Stale(z))?.clone();
        self.subtract_from(z, y);
        self.t.detach(y);
        if self.t.children(z).is_empty() {
            self.tables[z.0] = Some(old_z);
            self.subtract_from(r, z);
            self.delete_node(z);
        } else {
            self.update_into(r, &old_z, z);
        }
        self.t.set_root(y);

        let rbag = self.t.bag(r).to_vec();
        let ybag = self.t.bag(y).to_vec();
        if bag::is_subset(&rbag, &ybag) {
            self.absorb_children(y, r);
            self.delete_node(r);
        } else {
            let inter = bag::intersection(&rbag, &ybag);
            let extra = bag::difference(&rbag, &ybag);
            let existing = self.intersection_child(y, &inter);
            let zy = match existing {
                Some(zy) => zy,
                None => self.new_node(inter.clone(), NodeKind::Intersection, Some(y)),
            };
            // Chain I+{u1}, I+{u1,u2}, ... between zy and r, each Main node
            // followed by an equal-bag Intersection node.
            let mut above = zy;
            let mut acc = inter;
            let mut chain = Vec::new();
            for &u in &extra[..extra.len() - 1] {
                acc = bag::union(&acc, &[u]);
                let m = self.new_node(acc.clone(), NodeKind::Main, Some(above));
                let i = self.new_node(acc.clone(), NodeKind::Intersection, Some(m));
                chain.push(m);
                chain.push(i);
                above = i;
            }
            self.t.attach(r, above);
            for &x in chain.iter().rev() {
                self.recompute(x);
            }
            match existing {
                Some(zy) => {
                    let old = self.table(zy).ok_or(EngineError::Stale(zy))?.clone();
                    let top = *chain.first().unwrap_or(&r);
                    self.add_into(zy, top);
                    self.update_into(y, &old, zy);
                }
                None => {
                    self.recompute(zy);
                    self.add_into(y, zy);
                }
            }
        }
        self.audit_structure("rotate", width);
        Ok(())
    }

    /// Moves every Intersection child of the deleted-to-be Main node `from`
    /// under Main node `to`, fusing it into an equal-bag child of `to` when
    /// one exists. Keeps the table of `to` in sync. Returns the fusion count.
    fn absorb_children(&mut self, to: NodeId, from: NodeId) -> u64 {
        let kids = self.t.children(from).to_vec();
        let mut fused = 0;
        for c in kids {
            self.t.detach(c);
            match self.intersection_child(to, self.t.bag(c)) {
                Some(twin) => {
                    let old = self.table(twin).expect("twin table").clone();
                    let ct = self.take_table(c);
                    let mut ft = old.clone();
                    ft.fuse(&ct).expect("equal bags");
                    self.counters.dp_recomputes += 1;
                    self.counters.fused_tables += 1;
                    fused += 1;
                    self.t.move_children(c, twin);
                    self.set_table(twin, ft);
                    self.delete_node(c);
                    self.update_into(to, &old, twin);
                }
                None => {
                    self.t.attach(c, to);
                    self.add_into(to, c);
                }
            }
        }
        fused
    }

    /// Rotates along the root path until `x` is the root.
    pub fn move_to_root(&mut self, x: NodeId) -> Result<(), EngineError> {
        if self.t.kind(x) != NodeKind::Main {
            return Err(EngineError::NotGrandchild(x));
        }
        let width = self.audit_width();
        let alpha = self.audit.is_some().then(|| self.alpha_raw());
        while self.t.root() != x {
            // The Main node two levels below the root on the path to x.
            let mut y = x;
            while self.t.grandparent(y) != Some(self.t.root()) {
                y = self.t.grandparent(y).ok_or(EngineError::NotGrandchild(x))?;
            }
            self.rotate(y)?;
        }
        self.counters.moves += 1;
        if let Some(before) = alpha {
            let after = self.alpha_raw();
            let log = self.audit.as_mut().expect("audit on");
            log.alpha_checks += 1;
            if before != after {
                log.alpha_violations += 1;
                log.violations
                    .push(format!("alpha changed by move: {before} -> {after}"));
            }
        }
        self.audit_structure("move", width);
        Ok(())
    }

    /// Merges the Main grandchild `y` of `x` into `x`, where `B_y ⊆ B_x`:
    /// Intersection children of `y` are fused into equal-bag children of `x`
    /// or re-parented under `x`, and `y` (and its parent when it becomes
    /// childless) is deleted. The table of `x` is unchanged in value.
    pub fn merge(&mut self, x: NodeId, y: NodeId) -> Result<u64, EngineError> {
        let z = self.t.parent(y).ok_or(EngineError::BadMerge(y))?;
        if self.t.parent(z) != Some(x) || !bag::is_subset(self.t.bag(y), self.t.bag(x)) {
            return Err(EngineError::BadMerge(y));
        }
        let width = self.audit_width();
        self.counters.merges += 1;
        let old_z = self.table(z).ok_or(EngineError::Stale(z))?.clone();
        self.subtract_from(z, y);
        self.t.detach(y);
        if self.t.children(z).is_empty() {
            self.tables[z.0] = Some(old_z);
            self.subtract_from(x, z);
            self.delete_node(z);
        } else {
            self.update_into(x, &old_z, z);
        }
        let fused = self.absorb_children(x, y);
        self.delete_node(y);
        self.audit_structure("merge", width);
        Ok(fused)
    }
}
