//! Tree decompositions of width at most `2k+1` for graphs of treewidth at
//! most `k`, by repeatedly splitting large bags of a grouped decomposition.

pub mod bag;
pub mod cli;
pub mod decomposition;
pub mod driver;
pub mod graph;
pub mod oracle;
pub mod partition;
pub mod split;
