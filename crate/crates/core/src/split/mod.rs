//! Split selection, the tree rewrites of a round (move, rotate, merge, split),
//! and the DFS bookkeeping that drives them.

mod apply;
mod dfs;
mod moves;
mod select;

pub use dfs::{RoundOutcome, RoundStats, Status};
pub use select::{is_editable, SplitAssignment};

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::bag;
use crate::decomposition::{validate_grouped, validate_td, NodeId, NodeKind, TreeDecomposition};
use crate::graph::{Graph, Vertex};
use crate::partition::{init_table, DpTable, Mode, PartitionError};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("table of node {0} is missing or stale")]
    Stale(NodeId),
    #[error("node {0} is not a Main grandchild of the root")]
    NotGrandchild(NodeId),
    #[error("merge precondition violated at node {0}")]
    BadMerge(NodeId),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// Operation counters; all monotone over the engine's lifetime.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    /// Tables computed or changed by an incremental operation.
    pub dp_recomputes: u64,
    /// Tables computed by full rebuilds at round start.
    pub table_builds: u64,
    pub rotations: u64,
    pub moves: u64,
    pub merges: u64,
    pub fused_tables: u64,
    pub splits: u64,
    pub dfs_steps: u64,
    /// Intersection nodes whose bag was entirely separator during selection.
    pub all_separator_intersections: u64,
    pub max_table_len: usize,
}

/// Results of the optional structural audit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AuditLog {
    pub checks: u64,
    pub violations: Vec<String>,
    pub alpha_checks: u64,
    pub alpha_violations: u64,
}

/// A grouped decomposition with a DP table at every node.
pub struct Engine<'g> {
    g: &'g Graph,
    t: TreeDecomposition,
    k: usize,
    mode: Mode,
    tables: Vec<Option<DpTable>>,
    status: Vec<Status>,
    unvisited: BTreeSet<NodeId>,
    previsited: BTreeSet<NodeId>,
    /// Status mass of created and deleted Main nodes, for the DFS accounting.
    beta_added: u64,
    beta_removed: u64,
    audit: Option<AuditLog>,
    pub counters: Counters,
}

impl<'g> Engine<'g> {
    /// Wraps a grouped decomposition of `g`; tables are built for `mode`.
    pub fn new(g: &'g Graph, t: TreeDecomposition, k: usize, mode: Mode) -> Self {
        let mut e = Engine {
            g,
            t,
            k,
            mode,
            tables: Vec::new(),
            status: Vec::new(),
            unvisited: BTreeSet::new(),
            previsited: BTreeSet::new(),
            beta_added: 0,
            beta_removed: 0,
            audit: None,
            counters: Counters::default(),
        };
        e.reset_status();
        e.build_tables();
        e
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    pub fn tree(&self) -> &TreeDecomposition {
        &self.t
    }

    pub fn into_tree(self) -> TreeDecomposition {
        self.t
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn enable_audit(&mut self) {
        self.audit.get_or_insert_with(AuditLog::default);
    }

    pub fn audit_log(&self) -> Option<&AuditLog> {
        self.audit.as_ref()
    }

    pub fn table(&self, x: NodeId) -> Option<&DpTable> {
        self.tables.get(x.0).and_then(Option::as_ref)
    }

    /// Switches the partition mode and rebuilds every table.
    pub fn set_mode(&mut self, mode: Mode) {
        self.mode = mode;
        self.build_tables();
    }

    /// Recomputes every table bottom-up from scratch.
    pub fn build_tables(&mut self) {
        self.tables = vec![None; self.t.capacity()];
        for x in self.t.postorder() {
            let a = self.compute_table(x);
            self.tables[x.0] = Some(a);
            self.counters.table_builds += 1;
        }
    }

    /// `init` plus every child, from the children's stored tables.
    fn compute_table(&mut self, x: NodeId) -> DpTable {
        let mut a = init_table(self.g, self.t.bag(x), self.mode);
        self.counters.max_table_len = self.counters.max_table_len.max(a.len());
        let kind = self.t.kind(x);
        for &c in self.t.children(x) {
            let child = self.tables[c.0].as_ref().expect("child table built first");
            a.add_child(kind, child).expect("grouped bag relation");
        }
        a
    }

    fn recompute(&mut self, x: NodeId) {
        let a = self.compute_table(x);
        self.set_table(x, a);
        self.counters.dp_recomputes += 1;
    }

    fn set_table(&mut self, x: NodeId, a: DpTable) {
        if self.tables.len() <= x.0 {
            self.tables.resize(x.0 + 1, None);
        }
        self.tables[x.0] = Some(a);
    }

    fn take_table(&mut self, x: NodeId) -> DpTable {
        self.tables[x.0].take().expect("table present")
    }

    /// Runs `f` on the table of `parent` with the table of `child`.
    fn with_pair<R>(
        &mut self,
        parent: NodeId,
        child: NodeId,
        f: impl FnOnce(NodeKind, &mut DpTable, &DpTable) -> R,
    ) -> R {
        let kind = self.t.kind(parent);
        let mut a = self.take_table(parent);
        let r = f(kind, &mut a, self.tables[child.0].as_ref().expect("child table"));
        self.tables[parent.0] = Some(a);
        self.counters.dp_recomputes += 1;
        r
    }

    fn add_into(&mut self, parent: NodeId, child: NodeId) {
        self.with_pair(parent, child, |kind, a, c| a.add_child(kind, c))
            .expect("grouped bag relation");
    }

    fn subtract_from(&mut self, parent: NodeId, child: NodeId) {
        self.with_pair(parent, child, |kind, a, c| a.subtract_child(kind, c))
            .expect("grouped bag relation");
    }

    fn update_into(&mut self, parent: NodeId, old: &DpTable, child: NodeId) {
        self.with_pair(parent, child, |kind, a, c| a.update_child(kind, old, c))
            .expect("grouped bag relation");
    }

    /// Creates a node; Main nodes start unvisited.
    fn new_node(&mut self, bag: Vec<Vertex>, kind: NodeKind, parent: Option<NodeId>) -> NodeId {
        let x = self.t.add_node(bag, kind, parent);
        if self.status.len() <= x.0 {
            self.status.resize(x.0 + 1, Status::Post);
        }
        if kind == NodeKind::Main {
            self.status[x.0] = Status::Unvisited;
            self.unvisited.insert(x);
            self.beta_added += Status::Unvisited as u64;
        }
        x
    }

    /// Detaches and deletes a childless node together with its table.
    fn delete_node(&mut self, x: NodeId) {
        self.t.detach(x);
        self.t.remove_node(x);
        if let Some(slot) = self.tables.get_mut(x.0) {
            *slot = None;
        }
        if self.status.len() > x.0 {
            let s = self.status[x.0];
            self.unvisited.remove(&x);
            self.previsited.remove(&x);
            self.beta_removed += s as u64;
            self.status[x.0] = Status::Post;
        }
    }

    /// Intersection child of Main node `x` with exactly `bag`.
    fn intersection_child(&self, x: NodeId, bag: &[Vertex]) -> Option<NodeId> {
        self.t.children(x).iter().copied().find(|&c| self.t.bag(c) == bag)
    }

    /// Unscaled α: `Σ |B_x| · |B_x \ B_gp(x)|` over non-root Main nodes plus
    /// `|B_r|(|B_r|+1)/2` for the root.
    pub fn alpha_raw(&self) -> u64 {
        let mut sum = 0u64;
        for x in self.t.main_ids() {
            let b = self.t.bag(x).len() as u64;
            sum += match self.t.grandparent(x) {
                Some(gp) => b * bag::difference_len(self.t.bag(x), self.t.bag(gp)) as u64,
                None => b * (b + 1) / 2,
            };
        }
        sum
    }

    /// Checks both validators and that the width stays at most `max_width`.
    /// Current width when auditing, for the no-increase check.
    fn audit_width(&self) -> usize {
        if self.audit.is_some() {
            self.t.width()
        } else {
            0
        }
    }

    fn audit_structure(&mut self, what: &str, max_width: usize) {
        let Some(log) = self.audit.as_mut() else { return };
        log.checks += 1;
        let td = validate_td(self.g, &self.t);
        let gr = validate_grouped(&self.t);
        for v in td.violations.iter().chain(&gr.violations) {
            log.violations.push(format!("after {what}: {v}"));
        }
        if self.t.width() > max_width {
            log.violations
                .push(format!("after {what}: width {} exceeds {max_width}", self.t.width()));
        }
    }

    /// Rebuilds every table from scratch and reports the first node whose
    /// stored table differs.
    pub fn verify_tables(&self) -> Result<(), NodeId> {
        let mut fresh: Vec<Option<DpTable>> = vec![None; self.t.capacity()];
        for x in self.t.postorder() {
            let mut a = init_table(self.g, self.t.bag(x), self.mode);
            for &c in self.t.children(x) {
                a.add_child(self.t.kind(x), fresh[c.0].as_ref().expect("postorder"))
                    .expect("grouped");
            }
            if self.table(x) != Some(&a) {
                return Err(x);
            }
            fresh[x.0] = Some(a);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
