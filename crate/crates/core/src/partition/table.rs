use super::{BagPartition, Mode, PartitionError, PartitionIndex};
use crate::bag;
use crate::decomposition::NodeKind;
use crate::graph::{Graph, Vertex};

/// Entry for an illegal partition. Larger than any size and absorbing under
/// the combine operations.
pub const BOTTOM: u32 = u32::MAX;

/// Tables at least this long are processed in parallel chunks when the
/// `parallel` feature is on.
const PAR_THRESHOLD: usize = 1 << 15;
#[cfg(feature = "parallel")]
const CHUNK: usize = 1 << 12;

/// Execution policy for the table kernels.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Rayon chunks; identical to `Sequential` without the `parallel` feature.
    Parallel,
}

impl Exec {
    pub fn auto(len: usize) -> Exec {
        if cfg!(feature = "parallel") && len >= PAR_THRESHOLD {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Runs `kernel(start_index, chunk)` over `entries` under `exec`.
fn run_chunks<F>(entries: &mut [u32], exec: Exec, kernel: F)
where
    F: Fn(usize, &mut [u32]) + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            entries
                .par_chunks_mut(CHUNK)
                .enumerate()
                .for_each(|(i, chunk)| kernel(i * CHUNK, chunk));
        }
        _ => kernel(0, entries),
    }
}

/// Mixed-radix counter over a table's digits that keeps a weighted offset and
/// a count of `X` digits at tracked positions up to date in amortized O(1).
struct Walker<'a> {
    base: usize,
    digits: Vec<usize>,
    weight: &'a [usize],
    tracked: &'a [bool],
    offset: usize,
    xcount: u32,
}

impl<'a> Walker<'a> {
    fn new(base: usize, weight: &'a [usize], tracked: &'a [bool], start: usize) -> Self {
        let mut digits = vec![0; weight.len()];
        let mut rest = start;
        let mut offset = 0;
        let mut xcount = 0;
        for (q, d) in digits.iter_mut().enumerate() {
            *d = rest % base;
            rest /= base;
            offset += *d * weight[q];
            if tracked[q] && *d == base - 1 {
                xcount += 1;
            }
        }
        Walker {
            base,
            digits,
            weight,
            tracked,
            offset,
            xcount,
        }
    }

    #[inline]
    fn step(&mut self) {
        let top = self.base - 1;
        for q in 0..self.digits.len() {
            if self.digits[q] < top {
                self.digits[q] += 1;
                self.offset += self.weight[q];
                if self.tracked[q] && self.digits[q] == top {
                    self.xcount += 1;
                }
                return;
            }
            self.offset -= top * self.weight[q];
            if self.tracked[q] {
                self.xcount -= 1;
            }
            self.digits[q] = 0;
        }
    }
}

/// Dense table `A_x` over every partition of a node's bag. Entry `i` is the
/// minimum number of separator vertices in the node's subtree over legal
/// partitions compatible with the partition encoded by `i`, or [`BOTTOM`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpTable {
    mode: Mode,
    bag: Vec<Vertex>,
    entries: Vec<u32>,
}

/// Table of a node with no children: `|X|` for legal partitions, `⊥` otherwise.
pub fn init_table(g: &Graph, bag: &[Vertex], mode: Mode) -> DpTable {
    init_table_with(g, bag, mode, Exec::auto(mode.table_len(bag.len())))
}

pub fn init_table_with(g: &Graph, bag: &[Vertex], mode: Mode, exec: Exec) -> DpTable {
    let base = mode.base();
    let b = bag.len();
    let mut edges = Vec::new();
    for i in 0..b {
        for j in i + 1..b {
            if g.has_edge(bag[i], bag[j]) {
                edges.push((i, j));
            }
        }
    }
    let weight = vec![0usize; b];
    let tracked = vec![true; b];
    let mut entries = vec![0u32; mode.table_len(b)];
    let top = base - 1;
    run_chunks(&mut entries, exec, |start, chunk| {
        let mut w = Walker::new(base, &weight, &tracked, start);
        for e in chunk.iter_mut() {
            let d = &w.digits;
            let illegal = edges.iter().any(|&(i, j)| d[i] != top && d[j] != top && d[i] != d[j]);
            *e = if illegal { BOTTOM } else { w.xcount };
            w.step();
        }
    });
    DpTable {
        mode,
        bag: bag.to_vec(),
        entries,
    }
}

impl DpTable {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn bag(&self) -> &[Vertex] {
        &self.bag
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, idx: PartitionIndex) -> u32 {
        self.entries[idx.0]
    }

    /// Size of `p`, or `None` for `⊥`.
    pub fn size_of(&self, p: &BagPartition) -> Result<Option<u32>, PartitionError> {
        if p.bag != self.bag {
            return Err(PartitionError::BagRelation {
                parent: self.bag.clone(),
                child: p.bag.clone(),
            });
        }
        let e = self.entries[p.encode(self.mode)?.0];
        Ok((e != BOTTOM).then_some(e))
    }

    /// Incorporates `child` into this table. `parent_kind` selects the case:
    /// an Intersection parent takes a Main child whose bag adds at most one
    /// vertex; a Main parent takes an Intersection child whose bag is a subset.
    pub fn add_child(&mut self, parent_kind: NodeKind, child: &DpTable) -> Result<(), PartitionError> {
        let exec = Exec::auto(self.len());
        self.combine(parent_kind, child, Sign::Add, exec)
    }

    pub fn add_child_with(&mut self, parent_kind: NodeKind, child: &DpTable, exec: Exec) -> Result<(), PartitionError> {
        self.combine(parent_kind, child, Sign::Add, exec)
    }

    /// Exact inverse of [`DpTable::add_child`] for the same child table.
    pub fn subtract_child(&mut self, parent_kind: NodeKind, child: &DpTable) -> Result<(), PartitionError> {
        let exec = Exec::auto(self.len());
        self.combine(parent_kind, child, Sign::Sub, exec)
    }

    /// Replaces the contribution of a child whose table changed from `old` to `new`.
    pub fn update_child(&mut self, parent_kind: NodeKind, old: &DpTable, new: &DpTable) -> Result<(), PartitionError> {
        self.subtract_child(parent_kind, old)?;
        self.add_child(parent_kind, new)
    }

    /// Fuses an equal-bag table describing a disjoint subtree:
    /// `a + b - |X|`, used when two intersection nodes are merged.
    pub fn fuse(&mut self, other: &DpTable) -> Result<(), PartitionError> {
        if other.bag != self.bag {
            return Err(PartitionError::BagRelation {
                parent: self.bag.clone(),
                child: other.bag.clone(),
            });
        }
        if other.mode != self.mode {
            return Err(PartitionError::ModeMismatch);
        }
        let base = self.mode.base();
        let weight = vec![0usize; self.bag.len()];
        let tracked = vec![true; self.bag.len()];
        let src = &other.entries;
        let exec = Exec::auto(self.len());
        run_chunks(&mut self.entries, exec, |start, chunk| {
            let mut w = Walker::new(base, &weight, &tracked, start);
            for (off, e) in chunk.iter_mut().enumerate() {
                let o = src[start + off];
                if *e != BOTTOM {
                    *e = if o == BOTTOM { BOTTOM } else { *e + o - w.xcount };
                }
                w.step();
            }
        });
        Ok(())
    }

    fn combine(
        &mut self,
        parent_kind: NodeKind,
        child: &DpTable,
        sign: Sign,
        exec: Exec,
    ) -> Result<(), PartitionError> {
        if child.mode != self.mode {
            return Err(PartitionError::ModeMismatch);
        }
        let relation_err = || PartitionError::BagRelation {
            parent: self.bag.clone(),
            child: child.bag.clone(),
        };
        let base = self.mode.base();
        let b = self.bag.len();
        match parent_kind {
            NodeKind::Intersection if child.bag == self.bag => {
                // A Main child without a home vertex: entries line up one to one.
                let weight = vec![0usize; b];
                let tracked = vec![true; b];
                let src = &child.entries;
                run_chunks(&mut self.entries, exec, |start, chunk| {
                    let mut w = Walker::new(base, &weight, &tracked, start);
                    for (off, e) in chunk.iter_mut().enumerate() {
                        if *e != BOTTOM {
                            *e = apply(*e, src[start + off], w.xcount, sign);
                        }
                        w.step();
                    }
                });
            }
            NodeKind::Intersection => {
                if child.bag.len() != b + 1 || !bag::is_subset(&self.bag, &child.bag) {
                    return Err(relation_err());
                }
                let extra = bag::difference(&child.bag, &self.bag)[0];
                let p = bag::position(&child.bag, extra).expect("extra vertex");
                let stride = base.pow(p as u32);
                let weight: Vec<usize> = (0..b)
                    .map(|q| {
                        if q < p {
                            base.pow(q as u32)
                        } else {
                            base.pow(q as u32 + 1)
                        }
                    })
                    .collect();
                let tracked = vec![true; b];
                let src = &child.entries;
                run_chunks(&mut self.entries, exec, |start, chunk| {
                    let mut w = Walker::new(base, &weight, &tracked, start);
                    for e in chunk.iter_mut() {
                        if *e != BOTTOM {
                            let best = (0..base).map(|d| src[w.offset + d * stride]).min().unwrap_or(BOTTOM);
                            *e = apply(*e, best, w.xcount, sign);
                        }
                        w.step();
                    }
                });
            }
            NodeKind::Main => {
                if !bag::is_subset(&child.bag, &self.bag) {
                    return Err(relation_err());
                }
                let mut weight = vec![0usize; b];
                let mut tracked = vec![false; b];
                for (j, &v) in child.bag.iter().enumerate() {
                    let q = bag::position(&self.bag, v).expect("subset");
                    weight[q] = base.pow(j as u32);
                    tracked[q] = true;
                }
                let src = &child.entries;
                run_chunks(&mut self.entries, exec, |start, chunk| {
                    let mut w = Walker::new(base, &weight, &tracked, start);
                    for e in chunk.iter_mut() {
                        if *e != BOTTOM {
                            *e = apply(*e, src[w.offset], w.xcount, sign);
                        }
                        w.step();
                    }
                });
            }
        }
        Ok(())
    }
}

#[derive(Copy, Clone)]
enum Sign {
    Add,
    Sub,
}

/// `parent ± child ∓ shared_x`, with `⊥` absorbing.
#[inline]
fn apply(parent: u32, child: u32, shared_x: u32, sign: Sign) -> u32 {
    if child == BOTTOM {
        return BOTTOM;
    }
    match sign {
        Sign::Add => parent + child - shared_x,
        Sign::Sub => parent + shared_x - child,
    }
}
