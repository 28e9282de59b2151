use std::fmt::Write as _;

use super::{GraphError, Result};

/// Bipartite graph with left (asset) vertices `0..n` and right (CDO)
/// vertices `0..m`, stored as sorted left adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    m: usize,
    adjacency: Vec<Vec<u32>>,
    d: Option<usize>,
    r: Option<usize>,
}

/// `t[i]` = number of right vertices with exactly `i` neighbors in a left set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeighborCounts {
    pub t: Vec<u64>,
}

impl NeighborCounts {
    /// `sum_i t[i]`, the number of right vertices.
    pub fn total(&self) -> u64 {
        self.t.iter().sum()
    }

    /// `sum_i i * t[i]`, the number of edges leaving the set.
    pub fn incidences(&self) -> u64 {
        self.t.iter().enumerate().map(|(i, &c)| i as u64 * c).sum()
    }

    /// Count for multiplicity `i`, zero past the end.
    pub fn get(&self, i: usize) -> u64 {
        self.t.get(i).copied().unwrap_or(0)
    }
}

pub const GRAPH_MAGIC: &str = "GUVCDO v1";

impl BipartiteGraph {
    /// Builds a graph from left adjacency lists, sorting each list.
    pub fn new(m: usize, mut adjacency: Vec<Vec<u32>>) -> Result<Self> {
        for (left, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            for w in list.windows(2) {
                if w[0] == w[1] {
                    return Err(GraphError::DuplicateEdge { left, right: w[0] as usize });
                }
            }
            if let Some(&last) = list.last() {
                if last as usize >= m {
                    return Err(GraphError::NeighborOutOfRange { left, right: last as usize, m });
                }
            }
        }
        let mut g = BipartiteGraph { m, adjacency, d: None, r: None };
        g.refresh_regularity();
        Ok(g)
    }

    fn refresh_regularity(&mut self) {
        self.d = common(self.adjacency.iter().map(Vec::len));
        self.r = common(self.right_degrees().into_iter());
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Common left degree, if left-regular.
    pub fn left_degree(&self) -> Option<usize> {
        self.d
    }

    /// Common right degree, if right-regular.
    pub fn right_degree(&self) -> Option<usize> {
        self.r
    }

    pub fn neighbors(&self, left: usize) -> &[u32] {
        &self.adjacency[left]
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adjacency
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.m];
        for list in &self.adjacency {
            for &v in list {
                deg[v as usize] += 1;
            }
        }
        deg
    }

    pub fn max_right_degree(&self) -> usize {
        self.right_degrees().into_iter().max().unwrap_or(0)
    }

    pub fn is_biregular(&self, d: usize, r: usize) -> bool {
        self.d == Some(d) && self.r == Some(r)
    }

    /// Right vertices grouped by incident left vertex, each list ascending.
    pub fn right_adjacency(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.m];
        for (u, list) in self.adjacency.iter().enumerate() {
            for &v in list {
                out[v as usize].push(u as u32);
            }
        }
        out
    }

    /// Multiplicity histogram of the lemon set `lemons` over right vertices.
    pub fn neighbor_counts(&self, lemons: &[usize]) -> Result<NeighborCounts> {
        let mut hits = vec![0u32; self.m];
        let mut seen = vec![false; self.n()];
        for &u in lemons {
            if u >= self.n() {
                return Err(GraphError::LeftOutOfRange { left: u, n: self.n() });
            }
            if std::mem::replace(&mut seen[u], true) {
                return Err(GraphError::RepeatedLeft(u));
            }
            for &v in &self.adjacency[u] {
                hits[v as usize] += 1;
            }
        }
        let width = self.r.unwrap_or_else(|| self.max_right_degree()) + 1;
        let mut t = vec![0u64; width];
        for h in hits {
            t[h as usize] += 1;
        }
        Ok(NeighborCounts { t })
    }

    /// Keeps left vertices `0..n`, the first `d` neighbors of each, and pads
    /// with isolated right vertices up to `m`.
    ///
    /// An expander with guarantee `(k, d_old - delta)` becomes a
    /// `(k, d - delta)` expander.
    pub fn trim_pad(&self, n: usize, m: usize, d: usize) -> Result<BipartiteGraph> {
        if n > self.n() || m < self.m {
            return Err(GraphError::Precondition(format!(
                "trim_pad needs n <= {} and m >= {} (got n={n}, m={m})",
                self.n(),
                self.m
            )));
        }
        let adjacency = self.adjacency[..n]
            .iter()
            .enumerate()
            .map(|(u, list)| {
                if list.len() < d {
                    Err(GraphError::Precondition(format!(
                        "left vertex {u} has degree {} < {d}",
                        list.len()
                    )))
                } else {
                    Ok(list[..d].to_vec())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let mut g = BipartiteGraph { m, adjacency, d: None, r: None };
        g.refresh_regularity();
        Ok(g)
    }

    /// Canonical text form: magic line, `n m d r`, then one line per left vertex.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 + self.edge_count() * 4);
        out.push_str(GRAPH_MAGIC);
        out.push('\n');
        let _ = writeln!(
            out,
            "{} {} {} {}",
            self.n(),
            self.m,
            self.d.unwrap_or(0),
            self.r.unwrap_or(0)
        );
        for list in &self.adjacency {
            let mut first = true;
            for v in list {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{v}");
            }
            out.push('\n');
        }
        out
    }

    /// Parses the canonical text form, rejecting anything [`to_text`] would
    /// not produce.
    ///
    /// [`to_text`]: BipartiteGraph::to_text
    pub fn parse(text: &str) -> Result<BipartiteGraph> {
        let mut lines = text.lines().enumerate();
        let err = |line: usize, msg: String| GraphError::Parse { line: line + 1, message: msg };
        match lines.next() {
            Some((_, l)) if l == GRAPH_MAGIC => {}
            Some((i, l)) => return Err(err(i, format!("expected `{GRAPH_MAGIC}`, found `{l}`"))),
            None => return Err(err(0, "empty graph file".into())),
        }
        let (hi, header) = lines.next().ok_or_else(|| err(1, "missing header line".into()))?;
        let fields = header
            .split(' ')
            .map(|tok| tok.parse::<usize>().map_err(|e| err(hi, format!("bad header field `{tok}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let [n, m, d, r] = fields[..] else {
            return Err(err(hi, format!("header needs 4 fields, found {}", fields.len())));
        };
        let mut adjacency = Vec::with_capacity(n);
        for _ in 0..n {
            let (i, line) = lines
                .next()
                .ok_or_else(|| err(hi + 1 + adjacency.len(), "missing adjacency line".into()))?;
            let mut list = Vec::new();
            if !line.is_empty() {
                for (col, tok) in line.split(' ').enumerate() {
                    let v: u32 = tok
                        .parse()
                        .map_err(|e| err(i, format!("token {} `{tok}`: {e}", col + 1)))?;
                    if v as usize >= m {
                        return Err(err(i, format!("neighbor {v} out of range for m={m}")));
                    }
                    if list.last().is_some_and(|&p| p >= v) {
                        return Err(err(i, format!("neighbors not strictly ascending at `{tok}`")));
                    }
                    list.push(v);
                }
            }
            adjacency.push(list);
        }
        if let Some((i, extra)) = lines.next() {
            return Err(err(i, format!("trailing content `{extra}`")));
        }
        let g = BipartiteGraph::new(m, adjacency)?;
        if g.d.unwrap_or(0) != d || g.r.unwrap_or(0) != r {
            return Err(err(
                hi,
                format!(
                    "declared degrees d={d} r={r} disagree with adjacency (d={}, r={})",
                    g.d.unwrap_or(0),
                    g.r.unwrap_or(0)
                ),
            ));
        }
        Ok(g)
    }
}

fn common(mut it: impl Iterator<Item = usize>) -> Option<usize> {
    let first = it.next()?;
    it.all(|x| x == first).then_some(first)
}
