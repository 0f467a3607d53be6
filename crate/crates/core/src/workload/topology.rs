use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{NodeId, NodeSpec, NodeType};

/// Node counts of the 100-server heterogeneous testbed, by type.
pub const TABLE2_COUNTS: [(NodeType, usize); 4] = [
    (NodeType::M510, 40),
    (NodeType::Xl170, 25),
    (NodeType::C6525, 18),
    (NodeType::C6620, 17),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopologyPreset {
    /// The 100-node testbed mix.
    Table2,
    /// `n` nodes in the testbed's 40:25:18:17 ratio.
    Scaled(usize),
    /// `n` identical nodes.
    Uniform(usize, NodeType),
}

impl fmt::Display for TopologyPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyPreset::Table2 => f.write_str("table2-100"),
            TopologyPreset::Scaled(n) => write!(f, "scaled:{n}"),
            TopologyPreset::Uniform(n, t) => write!(f, "uniform:{n}:{t}"),
        }
    }
}

impl FromStr for TopologyPreset {
    type Err = Error;

    /// Accepts `table2-100`, `scaled:N` / `scaled(N)` and
    /// `uniform:N:TYPE` / `uniform(N,TYPE)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPreset(s.to_string());
        let s_trim = s.trim();
        if s_trim == "table2-100" || s_trim == "table2" {
            return Ok(TopologyPreset::Table2);
        }
        let (head, args) = if let Some(open) = s_trim.find('(') {
            let inner = s_trim[open + 1..].strip_suffix(')').ok_or_else(bad)?;
            (&s_trim[..open], inner.split(',').collect::<Vec<_>>())
        } else {
            let mut parts = s_trim.split(':');
            let head = parts.next().ok_or_else(bad)?;
            (head, parts.collect())
        };
        let count = |a: &str| a.trim().parse::<usize>().map_err(|_| bad());
        match (head, args.as_slice()) {
            ("scaled", [n]) => Ok(TopologyPreset::Scaled(count(n)?)),
            ("uniform", [n, t]) => Ok(TopologyPreset::Uniform(
                count(n)?,
                t.trim().parse().map_err(|_| bad())?,
            )),
            _ => Err(bad()),
        }
    }
}

/// Splits `n` over the testbed ratio by largest remainder; remainder ties go
/// to the type listed first.
pub fn scaled_counts(n: usize) -> [(NodeType, usize); 4] {
    let total: usize = TABLE2_COUNTS.iter().map(|(_, c)| c).sum();
    let mut out = TABLE2_COUNTS.map(|(t, c)| (t, n * c / total));
    let assigned: usize = out.iter().map(|(_, c)| c).sum();
    let mut order: Vec<usize> = (0..out.len()).collect();
    // Remainders compared exactly as numerators over `total`.
    order.sort_by_key(|&i| std::cmp::Reverse((n * TABLE2_COUNTS[i].1) % total));
    for &i in order.iter().take(n - assigned) {
        out[i].1 += 1;
    }
    out
}

/// Nodes in type order, with ids dense from zero.
pub fn build_topology(preset: &TopologyPreset) -> Result<Vec<NodeSpec>> {
    let counts: Vec<(NodeType, usize)> = match *preset {
        TopologyPreset::Table2 => TABLE2_COUNTS.to_vec(),
        TopologyPreset::Scaled(n) => {
            if n == 0 {
                return Err(Error::InvalidPreset(preset.to_string()));
            }
            scaled_counts(n).to_vec()
        }
        TopologyPreset::Uniform(n, t) => {
            if n == 0 {
                return Err(Error::InvalidPreset(preset.to_string()));
            }
            vec![(t, n)]
        }
    };
    let nodes = counts
        .into_iter()
        .flat_map(|(t, c)| std::iter::repeat_n(t, c))
        .enumerate()
        .map(|(i, t)| NodeSpec::of_type(NodeId(i as u32), t))
        .collect();
    Ok(nodes)
}
