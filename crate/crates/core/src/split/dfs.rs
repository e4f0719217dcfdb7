use serde::Serialize;

use super::{Engine, EngineError};
use crate::decomposition::{NodeId, NodeKind};

/// DFS status of a Main node; the value is its weight in β.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[repr(u8)]
pub enum Status {
    Post = 0,
    Pre = 1,
    Unvisited = 2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RoundOutcome {
    /// Every bag of size `w+1` was split.
    Done,
    /// No good root partition at a bag of size `w+1`.
    NoSplit { node: NodeId, bag_len: usize },
}

/// Per-round statistics, checked against the DFS accounting identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RoundStats {
    pub beta_start: u64,
    pub beta_end: u64,
    pub beta_added: u64,
    pub beta_removed: u64,
    pub steps: u64,
    pub rotations: u64,
    pub splits: u64,
    pub all_post_visited: bool,
}

impl RoundStats {
    /// `β_start + added − removed − β_end` equals the number of steps.
    pub fn accounting_holds(&self) -> bool {
        self.beta_start + self.beta_added == self.beta_end + self.beta_removed + self.steps
    }
}

impl Engine<'_> {
    pub fn status(&self, x: NodeId) -> Status {
        self.status.get(x.0).copied().unwrap_or(Status::Post)
    }

    /// Marks every Main node unvisited and clears the β bookkeeping.
    pub fn reset_status(&mut self) {
        self.status = vec![Status::Post; self.t.capacity()];
        self.unvisited.clear();
        self.previsited.clear();
        for x in self.t.main_ids().collect::<Vec<_>>() {
            self.status[x.0] = Status::Unvisited;
            self.unvisited.insert(x);
        }
        self.beta_added = 0;
        self.beta_removed = 0;
    }

    /// Unscaled β: sum of statuses over live Main nodes.
    pub fn beta_raw(&self) -> u64 {
        self.t.main_ids().map(|x| self.status(x) as u64).sum()
    }

    fn set_status(&mut self, x: NodeId, s: Status) {
        let old = self.status[x.0];
        debug_assert!(s < old, "statuses only decrease");
        match old {
            Status::Unvisited => self.unvisited.remove(&x),
            Status::Pre => self.previsited.remove(&x),
            Status::Post => false,
        };
        if s == Status::Pre {
            self.previsited.insert(x);
        }
        self.status[x.0] = s;
        self.counters.dfs_steps += 1;
    }

    /// Main neighbours of a Main node: its grandparent and grandchildren.
    fn main_neighbours(&self, x: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.t.grandparent(x).into_iter().chain(
            self.t
                .children(x)
                .iter()
                .flat_map(|&i| self.t.children(i).iter().copied()),
        )
    }

    /// Where the DFS continues after a split: the smallest pre-visited node
    /// adjacent to one of `new_mains`, else the smallest unvisited node.
    pub fn dfs_resume_point(&self, new_mains: &[NodeId]) -> Option<NodeId> {
        new_mains
            .iter()
            .filter(|&&m| self.t.is_alive(m) && self.status(m) == Status::Unvisited)
            .flat_map(|&m| self.main_neighbours(m))
            .filter(|&x| self.status(x) == Status::Pre)
            .min()
            .or_else(|| self.previsited.iter().next().copied())
            .or_else(|| self.unvisited.iter().next().copied())
    }

    /// One round for bags of size `w+1`: a DFS over Main nodes that moves
    /// each maximum-size node to the root when it is first visited and
    /// splits it.
    pub fn run_round(&mut self, w: usize) -> Result<(RoundOutcome, RoundStats), EngineError> {
        self.reset_status();
        let mut stats = RoundStats {
            beta_start: self.beta_raw(),
            ..RoundStats::default()
        };
        let steps0 = self.counters.dfs_steps;
        let rot0 = self.counters.rotations;
        let splits0 = self.counters.splits;
        let mut stack: Vec<NodeId> = Vec::new();
        let outcome = loop {
            let top = match stack.last() {
                Some(&x) => x,
                None => match self.previsited.iter().next().or(self.unvisited.iter().next()) {
                    Some(&x) => {
                        if self.status(x) == Status::Unvisited {
                            self.set_status(x, Status::Pre);
                        }
                        stack.push(x);
                        if let Some(o) = self.visit(x, w, &mut stack)? {
                            break o;
                        }
                        continue;
                    }
                    None => break RoundOutcome::Done,
                },
            };
            let next = self
                .main_neighbours(top)
                .filter(|&y| self.status(y) == Status::Unvisited)
                .min();
            match next {
                Some(y) => {
                    self.set_status(y, Status::Pre);
                    stack.push(y);
                    if let Some(o) = self.visit(y, w, &mut stack)? {
                        break o;
                    }
                }
                None => {
                    stack.pop();
                    if self.status(top) == Status::Pre {
                        self.set_status(top, Status::Post);
                    }
                }
            }
        };
        stats.beta_end = self.beta_raw();
        stats.beta_added = self.beta_added;
        stats.beta_removed = self.beta_removed;
        stats.steps = self.counters.dfs_steps - steps0;
        stats.rotations = self.counters.rotations - rot0;
        stats.splits = self.counters.splits - splits0;
        stats.all_post_visited = self.t.main_ids().all(|x| self.status(x) == Status::Post);
        if outcome == RoundOutcome::Done && self.t.max_bag_size() > w {
            return Err(EngineError::Invariant(format!(
                "round {w} ended with a bag of size {}",
                self.t.max_bag_size()
            )));
        }
        Ok((outcome, stats))
    }

    /// Handles a freshly pre-visited node: splits it when its bag is maximum,
    /// then continues from the resume point.
    fn visit(&mut self, mut x: NodeId, w: usize, stack: &mut Vec<NodeId>) -> Result<Option<RoundOutcome>, EngineError> {
        loop {
            let bag_len = self.t.bag(x).len();
            if bag_len != w + 1 {
                return Ok(None);
            }
            debug_assert_eq!(self.t.kind(x), NodeKind::Main);
            self.move_to_root(x)?;
            let Some(asg) = self.find_split()? else {
                return Ok(Some(RoundOutcome::NoSplit { node: x, bag_len }));
            };
            let new_mains = self.apply_split(&asg)?;
            stack.retain(|&y| self.t.is_alive(y) && self.status(y) == Status::Pre);
            match self.dfs_resume_point(&new_mains) {
                Some(p) if self.status(p) == Status::Unvisited => {
                    self.set_status(p, Status::Pre);
                    stack.push(p);
                    x = p;
                }
                Some(p) => {
                    stack.retain(|&y| y != p);
                    stack.push(p);
                    return Ok(None);
                }
                None => return Ok(None),
            }
        }
    }
}
