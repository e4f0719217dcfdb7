//! Bag partitions into `(W1, W2, W3, X)` (or `(W1, W2, X)` in three-part
//! mode), their dense integer encoding, and the per-node DP tables.

mod table;

pub use table::{init_table, init_table_with, DpTable, Exec, BOTTOM};

use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("label W3 is not available in three-part mode")]
    W3InThreeMode,
    #[error("partition has {labels} labels for a bag of {bag} vertices")]
    LengthMismatch { labels: usize, bag: usize },
    #[error("index {0} out of range for this bag")]
    IndexOutOfRange(usize),
    #[error("child bag {child:?} is not related to parent bag {parent:?} as required")]
    BagRelation { parent: Vec<Vertex>, child: Vec<Vertex> },
    #[error("tables use different partition modes")]
    ModeMismatch,
}

/// Number of parts a partition may use. Four-part mode labels vertices
/// `W1, W2, W3, X`; three-part mode drops `W3`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Mode {
    Three,
    Four,
}

impl Mode {
    pub fn base(self) -> usize {
        match self {
            Mode::Three => 3,
            Mode::Four => 4,
        }
    }

    /// Digit used for the separator label `X`.
    pub fn x_digit(self) -> usize {
        self.base() - 1
    }

    /// Number of component labels `W_i`.
    pub fn components(self) -> usize {
        self.base() - 1
    }

    pub fn table_len(self, bag_len: usize) -> usize {
        self.base().pow(bag_len as u32)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    W1,
    W2,
    W3,
    X,
}

impl Label {
    /// Component label `W_{i+1}` for `i` in `0..3`.
    pub fn component(i: usize) -> Label {
        [Label::W1, Label::W2, Label::W3][i]
    }

    pub fn is_component(self) -> bool {
        self != Label::X
    }

    pub fn digit(self, mode: Mode) -> Result<usize, PartitionError> {
        Ok(match (self, mode) {
            (Label::W1, _) => 0,
            (Label::W2, _) => 1,
            (Label::W3, Mode::Four) => 2,
            (Label::W3, Mode::Three) => return Err(PartitionError::W3InThreeMode),
            (Label::X, m) => m.x_digit(),
        })
    }

    pub fn from_digit(d: usize, mode: Mode) -> Label {
        if d == mode.x_digit() {
            Label::X
        } else {
            Label::component(d)
        }
    }
}

/// A labeling of a sorted bag. Parts may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BagPartition {
    pub bag: Vec<Vertex>,
    pub labels: Vec<Label>,
}

/// Dense position of a [`BagPartition`] in a table: digit `j` (least
/// significant first) is the label of the `j`-th bag vertex.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionIndex(pub usize);

impl BagPartition {
    pub fn new(bag: Vec<Vertex>, labels: Vec<Label>) -> Result<Self, PartitionError> {
        if bag.len() != labels.len() {
            return Err(PartitionError::LengthMismatch {
                labels: labels.len(),
                bag: bag.len(),
            });
        }
        Ok(BagPartition { bag, labels })
    }

    pub fn label_of(&self, v: Vertex) -> Option<Label> {
        crate::bag::position(&self.bag, v).map(|i| self.labels[i])
    }

    pub fn separator_len(&self) -> usize {
        self.labels.iter().filter(|&&l| l == Label::X).count()
    }

    /// Vertices carrying `label`, ascending.
    pub fn part(&self, label: Label) -> Vec<Vertex> {
        self.bag
            .iter()
            .zip(&self.labels)
            .filter(|(_, &l)| l == label)
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn encode(&self, mode: Mode) -> Result<PartitionIndex, PartitionError> {
        let base = mode.base();
        let mut idx = 0usize;
        for l in self.labels.iter().rev() {
            idx = idx * base + l.digit(mode)?;
        }
        Ok(PartitionIndex(idx))
    }

    pub fn decode(bag: Vec<Vertex>, index: PartitionIndex, mode: Mode) -> Result<Self, PartitionError> {
        let base = mode.base();
        if index.0 >= mode.table_len(bag.len()) {
            return Err(PartitionError::IndexOutOfRange(index.0));
        }
        let mut rest = index.0;
        let labels = (0..bag.len())
            .map(|_| {
                let d = rest % base;
                rest /= base;
                Label::from_digit(d, mode)
            })
            .collect();
        Ok(BagPartition { bag, labels })
    }

    /// True iff no edge of `g` inside the bag joins two different `W` parts.
    pub fn is_legal(&self, g: &Graph) -> bool {
        for (i, &u) in self.bag.iter().enumerate() {
            let lu = self.labels[i];
            if !lu.is_component() {
                continue;
            }
            for (j, &v) in self.bag.iter().enumerate().skip(i + 1) {
                let lv = self.labels[j];
                if lv.is_component() && lv != lu && g.has_edge(u, v) {
                    return false;
                }
            }
        }
        true
    }
}

/// Root clause of a good partition. `parts` holds `|W_i|` per component
/// label and `size` the partition's size over the whole vertex set.
/// Four-part mode needs `|W_i| + size < |B_r|`; three-part mode needs
/// `3|W_i| <= 2|B_r|`. Both need `size <= k+1` and some vertex of `B_r`
/// outside `X`.
pub fn root_is_good(mode: Mode, parts: &[usize], size: usize, bag_len: usize, k: usize) -> bool {
    if size > k + 1 || parts.iter().all(|&w| w == 0) {
        return false;
    }
    match mode {
        Mode::Four => parts.iter().all(|&w| w + size < bag_len),
        Mode::Three => parts.iter().all(|&w| 3 * w <= 2 * bag_len),
    }
}

impl BagPartition {
    /// `|W_i|` for each component label of `mode`.
    pub fn part_sizes(&self, mode: Mode) -> Vec<usize> {
        let mut out = vec![0; mode.components()];
        for &l in &self.labels {
            if l.is_component() {
                out[l.digit(mode).expect("label valid for mode")] += 1;
            }
        }
        out
    }
}
