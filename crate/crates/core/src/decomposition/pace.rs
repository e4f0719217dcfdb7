use std::collections::HashMap;
use std::fmt::Write as _;

use super::{DecompError, NodeId, TreeDecomposition};
use crate::graph::Vertex;

/// Writes PACE `.td`: `s td <N> <maxbag> <n>`, one `b` line per bag, then the
/// tree edges. Bags are numbered 1..N in preorder; node kinds are not stored.
pub fn write_td(t: &TreeDecomposition, n: usize) -> String {
    let order = t.preorder();
    let mut index: HashMap<NodeId, usize> = HashMap::with_capacity(order.len());
    for (i, &id) in order.iter().enumerate() {
        index.insert(id, i + 1);
    }
    let mut out = String::new();
    let _ = writeln!(out, "s td {} {} {}", order.len(), t.max_bag_size(), n);
    for (i, &id) in order.iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for &v in t.bag(id) {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    for &id in &order {
        if let Some(p) = t.parent(id) {
            let _ = writeln!(out, "{} {}", index[&p], index[&id]);
        }
    }
    out
}

/// Parses PACE `.td`, rooting the result at bag 1. Returns the decomposition
/// and the declared vertex count.
pub fn parse_td(text: &str) -> Result<(TreeDecomposition, usize), DecompError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<Vertex>>> = Vec::new();
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let err = |msg: &str| DecompError::Parse {
            line,
            msg: msg.to_string(),
        };
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| err("bad number"));
        match header {
            None => {
                if fields.len() != 5 || fields[0] != "s" || fields[1] != "td" {
                    return Err(err("expected header `s td <N> <maxbag> <n>`"));
                }
                let nb = num(fields[2])?;
                header = Some((nb, num(fields[3])?, num(fields[4])?));
                bags = vec![None; nb];
            }
            Some((nb, maxbag, n)) => {
                if fields[0] == "b" {
                    if fields.len() < 2 {
                        return Err(err("bag line without index"));
                    }
                    let i = num(fields[1])?;
                    if i == 0 || i > nb {
                        return Err(err("bag index out of range"));
                    }
                    if bags[i - 1].is_some() {
                        return Err(err("duplicate bag"));
                    }
                    let mut bag = Vec::with_capacity(fields.len() - 2);
                    for f in &fields[2..] {
                        let v = num(f)?;
                        if v == 0 || v > n {
                            return Err(err("vertex id out of range"));
                        }
                        bag.push(v - 1);
                    }
                    bag.sort_unstable();
                    bag.dedup();
                    if bag.len() > maxbag {
                        return Err(err("bag larger than declared maximum"));
                    }
                    bags[i - 1] = Some(bag);
                } else {
                    if fields.len() != 2 {
                        return Err(err("expected tree edge `<i> <j>`"));
                    }
                    let (a, b) = (num(fields[0])?, num(fields[1])?);
                    if a == 0 || b == 0 || a > nb || b > nb {
                        return Err(err("tree edge endpoint out of range"));
                    }
                    edges.push((a - 1, b - 1));
                }
            }
        }
    }
    let (_, _, n) = header.ok_or(DecompError::Parse {
        line: 0,
        msg: "missing header".into(),
    })?;
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| {
            b.ok_or_else(|| DecompError::Parse {
                line: 0,
                msg: format!("bag {} missing", i + 1),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((TreeDecomposition::from_bags_and_edges(bags, &edges)?, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "s td 3 2 4\nb 1 1 2\nb 2 2 3\nb 3 3 4\n1 2\n2 3\n";
        let (t, n) = parse_td(text).unwrap();
        assert_eq!(n, 4);
        assert_eq!(t.width(), 1);
        assert_eq!(write_td(&t, n), text);
    }

    #[test]
    fn comments_and_errors() {
        assert!(parse_td("c x\ns td 1 1 1\nb 1 1\n").is_ok());
        assert!(parse_td("s td 1 1 1\nb 1 2\n").is_err());
        assert!(parse_td("s td 2 1 2\nb 1 1\nb 2 2\n").is_err());
        assert!(parse_td("s td 2 1 2\nb 1 1\n1 2\n").is_err());
    }
}
