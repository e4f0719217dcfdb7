use super::{Engine, EngineError};
use crate::bag;
use crate::decomposition::{NodeId, NodeKind, TreeDecomposition};
use crate::graph::Vertex;
use crate::partition::{root_is_good, Label, Mode, BOTTOM};

/// A split `(C1, C2, C3, S)` of the vertex set together with the component
/// sets `a(x)`, restricted to the editable region and its boundary.
#[derive(Clone, Debug)]
pub struct SplitAssignment {
    pub mode: Mode,
    /// Root at selection time.
    pub root: NodeId,
    /// Labels of the vertices in editable bags; `None` elsewhere.
    pub labels: Vec<Option<Label>>,
    /// `a(x)` as a bit set over component indices, for every node visited
    /// by the selection (editable nodes and non-editable boundary nodes).
    pub a: Vec<u8>,
    pub editable: Vec<bool>,
    /// The separator `S`, ascending.
    pub separator: Vec<Vertex>,
    pub root_index: usize,
}

pub(crate) fn components_of(mask: u8) -> impl Iterator<Item = usize> {
    (0..3).filter(move |i| mask & (1 << i) != 0)
}

impl SplitAssignment {
    pub fn is_editable(&self, x: NodeId) -> bool {
        self.editable.get(x.0).copied().unwrap_or(false)
    }

    /// `a(x)` as ascending component indices (empty for unvisited nodes).
    pub fn a_of(&self, x: NodeId) -> Vec<usize> {
        components_of(self.a.get(x.0).copied().unwrap_or(0)).collect()
    }

    /// Labels of all vertices: unlabeled vertices below a non-editable node
    /// take that node's single component.
    pub fn global_labels(&self, t: &TreeDecomposition) -> Vec<Label> {
        let mut out: Vec<Option<Label>> = self.labels.clone();
        let mut stack = vec![(t.root(), None::<Label>)];
        while let Some((x, inherited)) = stack.pop() {
            let fill = if self.is_editable(x) {
                None
            } else {
                inherited.or_else(|| components_of(self.a[x.0]).next().map(Label::component))
            };
            if let Some(l) = fill {
                for &v in t.bag(x) {
                    out[v].get_or_insert(l);
                }
            }
            for &c in t.children(x) {
                stack.push((c, fill));
            }
        }
        out.into_iter()
            .map(|l| l.expect("every vertex lies in some bag"))
            .collect()
    }
}

/// True iff at least two component parts of the induced partition of `bag`
/// are non-empty.
pub fn is_editable(bag: &[Vertex], labels: &[Label]) -> bool {
    let mut seen = [false; 3];
    for &v in bag {
        if labels[v].is_component() {
            seen[component_index(labels[v])] = true;
        }
    }
    seen.iter().filter(|&&s| s).count() >= 2
}

fn component_index(l: Label) -> usize {
    match l {
        Label::W1 => 0,
        Label::W2 => 1,
        Label::W3 => 2,
        Label::X => unreachable!("separator label"),
    }
}

fn digits_of(idx: usize, len: usize, base: usize) -> Vec<usize> {
    let mut rest = idx;
    (0..len)
        .map(|_| {
            let d = rest % base;
            rest /= base;
            d
        })
        .collect()
}

fn index_of(digits: &[usize], base: usize) -> usize {
    digits.iter().rev().fold(0, |acc, &d| acc * base + d)
}

fn mask_of(digits: &[usize], x: usize) -> u8 {
    digits.iter().filter(|&&d| d != x).fold(0u8, |m, &d| m | 1 << d)
}

impl Engine<'_> {
    /// Chooses a split for the current root, or `None` when no good root
    /// partition exists (then `tw > k`). Among good root partitions the one
    /// of minimum size is taken, then the most balanced, then the smallest
    /// index. Below the root each new vertex takes the cheapest label among
    /// `a(parent)` and `X`, preferring `X` and then the smallest component.
    pub fn find_split(&mut self) -> Result<Option<SplitAssignment>, EngineError> {
        let mode = self.mode;
        let base = mode.base();
        let x_digit = mode.x_digit();
        let r = self.t.root();
        let rbag = self.t.bag(r).to_vec();
        let table = self.table(r).ok_or(EngineError::Stale(r))?;
        if table.bag() != rbag.as_slice() {
            return Err(EngineError::Stale(r));
        }
        // Key: (size, largest component part, index).
        let mut best: Option<(u32, usize, usize)> = None;
        let mut parts = vec![0usize; mode.components()];
        for (idx, &s) in table.entries().iter().enumerate() {
            if s == BOTTOM || s as usize > self.k + 1 || best.is_some_and(|(bs, _, _)| s > bs) {
                continue;
            }
            parts.iter_mut().for_each(|p| *p = 0);
            let mut rest = idx;
            for _ in 0..rbag.len() {
                let d = rest % base;
                rest /= base;
                if d != x_digit {
                    parts[d] += 1;
                }
            }
            let widest = parts.iter().copied().max().unwrap_or(0);
            if best.is_some_and(|(bs, bw, _)| (s, widest) >= (bs, bw)) {
                continue;
            }
            if root_is_good(mode, &parts, s as usize, rbag.len(), self.k) {
                best = Some((s, widest, idx));
            }
        }
        let Some((size, _, root_index)) = best else {
            return Ok(None);
        };

        let cap = self.t.capacity();
        let mut asg = SplitAssignment {
            mode,
            root: r,
            labels: vec![None; self.g.n()],
            a: vec![0; cap],
            editable: vec![false; cap],
            separator: Vec::new(),
            root_index,
        };
        let root_digits = digits_of(root_index, rbag.len(), base);
        for (&v, &d) in rbag.iter().zip(&root_digits) {
            asg.labels[v] = Some(Label::from_digit(d, mode));
        }
        asg.a[r.0] = mask_of(&root_digits, x_digit);
        asg.editable[r.0] = true;

        let mut stack = vec![(r, root_digits)];
        while let Some((x, xd)) = stack.pop() {
            let xbag = self.t.bag(x).to_vec();
            let ax = asg.a[x.0];
            for &y in self.t.children(x) {
                let ybag = self.t.bag(y);
                let yd: Vec<usize> = ybag
                    .iter()
                    .map(|&v| xd[bag::position(&xbag, v).expect("subset bag")])
                    .collect();
                let ay = mask_of(&yd, x_digit);
                if ay & !ax != 0 {
                    return Err(EngineError::Invariant(format!("a({y}) not contained in a({x})")));
                }
                if ay.count_ones() < 2 {
                    asg.a[y.0] = if ay != 0 {
                        ay
                    } else {
                        self.counters.all_separator_intersections += 1;
                        1 << components_of(ax).next().expect("non-empty a")
                    };
                    continue;
                }
                asg.a[y.0] = ay;
                asg.editable[y.0] = true;
                for &c in self.t.children(y) {
                    if self.t.kind(c) != NodeKind::Main {
                        return Err(EngineError::Invariant(format!("{c} under {y} is not Main")));
                    }
                    let cbag = self.t.bag(c);
                    let v = bag::difference(cbag, ybag);
                    if v.len() != 1 {
                        return Err(EngineError::Invariant(format!("{c} is not a unique home")));
                    }
                    let p = bag::position(cbag, v[0]).expect("home vertex");
                    let mut cd = Vec::with_capacity(cbag.len());
                    cd.extend_from_slice(&yd[..p]);
                    cd.push(x_digit);
                    cd.extend_from_slice(&yd[p..]);
                    let ct = self.table(c).ok_or(EngineError::Stale(c))?;
                    let mut choice: Option<(u32, usize)> = None;
                    for d in std::iter::once(x_digit).chain(components_of(ay)) {
                        cd[p] = d;
                        let e = ct.entries()[index_of(&cd, base)];
                        if e != BOTTOM && choice.is_none_or(|(be, _)| e < be) {
                            choice = Some((e, d));
                        }
                    }
                    let (_, d) = choice.ok_or_else(|| EngineError::Invariant(format!("no legal extension at {c}")))?;
                    cd[p] = d;
                    asg.labels[v[0]] = Some(Label::from_digit(d, mode));
                    asg.a[c.0] = mask_of(&cd, x_digit);
                    asg.editable[c.0] = true;
                    stack.push((c, cd));
                }
            }
        }
        asg.separator = asg
            .labels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == Some(Label::X))
            .map(|(v, _)| v)
            .collect();
        if asg.separator.len() != size as usize {
            return Err(EngineError::Invariant(format!(
                "separator has {} vertices, table promised {size}",
                asg.separator.len()
            )));
        }
        Ok(Some(asg))
    }
}
