use rayon::prelude::*;

use super::graph::BipartiteGraph;
use super::{GraphError, Result};
use crate::subsets::{binomial, walk_rooted, SubsetVisitor};

/// Enumeration budget for [`verify_expansion`]: `C(n, k) * k`.
pub const VERIFY_GUARD: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// Count `|Γ(S)|`.
    Neighbor,
    /// Count `|Γ_1(S)|`, right vertices with exactly one neighbor in `S`.
    Unique,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub mode: VerifyMode,
    pub k_max: usize,
    pub gamma: i64,
    pub passed: bool,
    /// Lexicographically smallest subset attaining the worst ratio.
    pub worst_subset: Vec<usize>,
    /// `|Γ(S)|` or `|Γ_1(S)|` of the worst subset.
    pub worst_count: usize,
    pub worst_ratio: f64,
    pub subsets_checked: u64,
}

#[derive(Debug, Clone)]
struct Worst {
    subset: Vec<usize>,
    count: usize,
}

impl Worst {
    /// `count/|S|` strictly below the other's ratio.
    fn beats(&self, other: &Worst) -> bool {
        self.count * other.subset.len() < other.count * self.subset.len()
    }
}

struct Scan<'g> {
    graph: &'g BipartiteGraph,
    mode: VerifyMode,
    hits: Vec<u32>,
    covered: usize,
    unique: usize,
    worst: Option<Worst>,
    checked: u64,
}

impl SubsetVisitor for Scan<'_> {
    fn push(&mut self, u: usize) {
        for &v in self.graph.neighbors(u) {
            let h = &mut self.hits[v as usize];
            match *h {
                0 => {
                    self.covered += 1;
                    self.unique += 1;
                }
                1 => self.unique -= 1,
                _ => {}
            }
            *h += 1;
        }
    }

    fn pop(&mut self, u: usize) {
        for &v in self.graph.neighbors(u) {
            let h = &mut self.hits[v as usize];
            *h -= 1;
            match *h {
                0 => {
                    self.covered -= 1;
                    self.unique -= 1;
                }
                1 => self.unique += 1,
                _ => {}
            }
        }
    }

    fn visit(&mut self, subset: &[usize]) {
        self.checked += 1;
        let count = match self.mode {
            VerifyMode::Neighbor => self.covered,
            VerifyMode::Unique => self.unique,
        };
        let cand = Worst { subset: subset.to_vec(), count };
        if self.worst.as_ref().is_none_or(|w| cand.beats(w)) {
            self.worst = Some(cand);
        }
    }
}

/// Exhaustively checks `|Γ(S)| >= gamma |S|` (or `|Γ_1(S)|`) for every
/// nonempty left set with `|S| <= k_max`.
///
/// Work is split by smallest element and merged in that order, so the
/// reported witness does not depend on the thread count.
pub fn verify_expansion(g: &BipartiteGraph, k_max: usize, gamma: i64, mode: VerifyMode) -> Result<VerificationReport> {
    let n = g.n();
    let k = k_max.min(n);
    let work = binomial(n as u64, k as u64).saturating_mul(k as u64);
    if work > VERIFY_GUARD {
        return Err(GraphError::Guard(format!("C({n},{k})*{k} = {work} exceeds {VERIFY_GUARD}")));
    }
    let partials: Vec<(Option<Worst>, u64)> = (0..n)
        .into_par_iter()
        .map(|root| {
            let mut scan = Scan {
                graph: g,
                mode,
                hits: vec![0; g.m()],
                covered: 0,
                unique: 0,
                worst: None,
                checked: 0,
            };
            walk_rooted(n, root, 1, k, &mut scan);
            (scan.worst, scan.checked)
        })
        .collect();

    let mut worst: Option<Worst> = None;
    let mut checked = 0;
    for (w, c) in partials {
        checked += c;
        if let Some(w) = w {
            if worst.as_ref().is_none_or(|cur| w.beats(cur)) {
                worst = Some(w);
            }
        }
    }
    let (subset, count) = worst.map(|w| (w.subset, w.count)).unwrap_or_default();
    let passed = subset.is_empty() || count as i64 >= gamma.saturating_mul(subset.len() as i64);
    let worst_ratio = if subset.is_empty() { f64::INFINITY } else { count as f64 / subset.len() as f64 };
    Ok(VerificationReport {
        mode,
        k_max: k,
        gamma,
        passed,
        worst_subset: subset,
        worst_count: count,
        worst_ratio,
        subsets_checked: checked,
    })
}
