use std::cmp::Ordering;
use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{AdversaryError, Result};
use crate::cdo_model::{ModelError, ValueProfile};
use crate::expander::BipartiteGraph;
use crate::subsets::{binomial, walk_rooted, SubsetVisitor};
use crate::Scalar;

/// Default placement budget for exhaustive and random search.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Distinct lemon histograms kept for the L1 pair search. Below the cap the
/// L1 gap over examined placements is exact.
pub const DISTINCT_CAP: usize = 2048;

const RANDOM_CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Greedy,
    Random,
}

/// Extremes of family tranche totals over the examined placements.
///
/// Ties between placements are broken toward the lexicographically smaller
/// index list, so results do not depend on evaluation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct AttackResult<T> {
    pub ell: usize,
    pub mode: SearchMode,
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub tranche_points: Vec<T>,
    pub min_totals: Vec<T>,
    pub max_totals: Vec<T>,
    pub l_min: Vec<Vec<usize>>,
    pub l_max: Vec<Vec<usize>>,
    /// Extremizers of the sum over all tranches.
    pub l_min_aggregate: Vec<usize>,
    pub l_max_aggregate: Vec<usize>,
    pub gap_per_tranche: Vec<T>,
    pub gap_l1: T,
    pub l1_pair: (Vec<usize>, Vec<usize>),
    /// `gap_l1` is the true maximum over the examined placements.
    pub l1_exact: bool,
    pub eps_per_tranche: Vec<T>,
    pub eps_l1: T,
    /// Expected totals for a uniformly random placement of `ell` lemons.
    pub baseline_totals: Vec<T>,
    /// `max |tv(L) - baseline|` per tranche over examined placements.
    pub baseline_gap_per_tranche: Vec<T>,
    pub placements_examined: u64,
    pub exhaustive: bool,
}

#[derive(Debug, Clone)]
struct Best<T> {
    value: T,
    placement: Vec<usize>,
}

fn lower<T: Scalar>(value: T, placement: &[usize], cur: &Best<T>) -> bool {
    match value.partial_cmp(&cur.value) {
        Some(Ordering::Less) => true,
        Some(Ordering::Equal) => placement < cur.placement.as_slice(),
        _ => false,
    }
}

fn higher<T: Scalar>(value: T, placement: &[usize], cur: &Best<T>) -> bool {
    match value.partial_cmp(&cur.value) {
        Some(Ordering::Greater) => true,
        Some(Ordering::Equal) => placement < cur.placement.as_slice(),
        _ => false,
    }
}

/// Order-independent reduction over evaluated placements.
#[derive(Debug, Clone)]
struct Tally<T> {
    min: Vec<Option<Best<T>>>,
    max: Vec<Option<Best<T>>>,
    agg_min: Option<Best<T>>,
    agg_max: Option<Best<T>>,
    distinct: BTreeMap<Vec<u64>, Vec<usize>>,
    overflow: bool,
    examined: u64,
}

impl<T: Scalar> Tally<T> {
    fn new(s: usize) -> Self {
        Tally {
            min: vec![None; s],
            max: vec![None; s],
            agg_min: None,
            agg_max: None,
            distinct: BTreeMap::new(),
            overflow: false,
            examined: 0,
        }
    }

    fn offer_one(slot: &mut Option<Best<T>>, value: T, placement: &[usize], better: fn(T, &[usize], &Best<T>) -> bool) {
        if slot.as_ref().is_none_or(|cur| better(value, placement, cur)) {
            *slot = Some(Best { value, placement: placement.to_vec() });
        }
    }

    fn note_histogram(&mut self, t: &[u64], placement: &[usize]) {
        let full = self.distinct.len() >= DISTINCT_CAP;
        match self.distinct.get_mut(t) {
            Some(p) => {
                if placement < p.as_slice() {
                    *p = placement.to_vec();
                }
            }
            None if !full => {
                self.distinct.insert(t.to_vec(), placement.to_vec());
            }
            None => self.overflow = true,
        }
    }

    fn offer(&mut self, placement: &[usize], t: &[u64], totals: &[T]) {
        self.examined += 1;
        for (i, &v) in totals.iter().enumerate() {
            Self::offer_one(&mut self.min[i], v, placement, lower);
            Self::offer_one(&mut self.max[i], v, placement, higher);
        }
        let agg: T = totals.iter().copied().sum();
        Self::offer_one(&mut self.agg_min, agg, placement, lower);
        Self::offer_one(&mut self.agg_max, agg, placement, higher);
        self.note_histogram(t, placement);
    }

    fn merge(mut self, other: Tally<T>) -> Tally<T> {
        self.examined += other.examined;
        self.overflow |= other.overflow;
        for (slot, b) in self.min.iter_mut().zip(other.min) {
            if let Some(b) = b {
                Self::offer_one(slot, b.value, &b.placement, lower);
            }
        }
        for (slot, b) in self.max.iter_mut().zip(other.max) {
            if let Some(b) = b {
                Self::offer_one(slot, b.value, &b.placement, higher);
            }
        }
        if let Some(b) = other.agg_min {
            Self::offer_one(&mut self.agg_min, b.value, &b.placement, lower);
        }
        if let Some(b) = other.agg_max {
            Self::offer_one(&mut self.agg_max, b.value, &b.placement, higher);
        }
        for (t, p) in other.distinct {
            self.note_histogram(&t, &p);
        }
        self
    }
}

struct Enumerator<'a, T> {
    graph: &'a BipartiteGraph,
    profile: &'a ValueProfile<T>,
    hits: Vec<u32>,
    t: Vec<u64>,
    tally: Tally<T>,
}

impl<T: Scalar> SubsetVisitor for Enumerator<'_, T> {
    fn push(&mut self, u: usize) {
        for &v in self.graph.neighbors(u) {
            let h = &mut self.hits[v as usize];
            self.t[*h as usize] -= 1;
            *h += 1;
            self.t[*h as usize] += 1;
        }
    }

    fn pop(&mut self, u: usize) {
        for &v in self.graph.neighbors(u) {
            let h = &mut self.hits[v as usize];
            self.t[*h as usize] -= 1;
            *h -= 1;
            self.t[*h as usize] += 1;
        }
    }

    fn visit(&mut self, subset: &[usize]) {
        let totals = self.profile.totals_from_counts(&self.t);
        self.tally.offer(subset, &self.t, &totals);
    }
}

fn evaluate<T: Scalar>(graph: &BipartiteGraph, profile: &ValueProfile<T>, placement: &[usize], tally: &mut Tally<T>) -> Result<()> {
    let counts = graph.neighbor_counts(placement)?;
    let totals = profile.totals_from_counts(&counts.t);
    tally.offer(placement, &counts.t, &totals);
    Ok(())
}

fn exhaustive<T: Scalar>(graph: &BipartiteGraph, profile: &ValueProfile<T>, ell: usize, budget: u64) -> Result<Tally<T>> {
    let n = graph.n();
    let placements = binomial(n as u64, ell as u64);
    if placements > budget {
        return Err(AdversaryError::Budget { n, ell, placements, budget });
    }
    let s = profile.tranche_count();
    if ell == 0 {
        let mut tally = Tally::new(s);
        evaluate(graph, profile, &[], &mut tally)?;
        return Ok(tally);
    }
    let r = profile.r;
    let partials: Vec<Tally<T>> = (0..n)
        .into_par_iter()
        .map(|root| {
            let mut t = vec![0u64; r + 1];
            t[0] = graph.m() as u64;
            let mut e = Enumerator { graph, profile, hits: vec![0; graph.m()], t, tally: Tally::new(s) };
            walk_rooted(n, root, ell, ell, &mut e);
            e.tally
        })
        .collect();
    Ok(partials.into_iter().fold(Tally::new(s), Tally::merge))
}

/// Grows a placement one asset at a time by the number of CDOs that newly
/// reach two lemons: largest gain when `dense`, smallest otherwise. Ties go
/// to the lowest index.
fn greedy_placement(graph: &BipartiteGraph, ell: usize, dense: bool) -> Vec<usize> {
    let mut hits = vec![0u32; graph.m()];
    let mut taken = vec![false; graph.n()];
    let mut out = Vec::with_capacity(ell);
    for _ in 0..ell {
        let mut best: Option<(usize, usize)> = None;
        for u in (0..graph.n()).filter(|&u| !taken[u]) {
            let gain = graph.neighbors(u).iter().filter(|&&v| hits[v as usize] == 1).count();
            let better = match best {
                None => true,
                Some((_, g)) => if dense { gain > g } else { gain < g },
            };
            if better {
                best = Some((u, gain));
            }
        }
        let (u, _) = best.expect("ell <= n");
        taken[u] = true;
        for &v in graph.neighbors(u) {
            hits[v as usize] += 1;
        }
        out.push(u);
    }
    out.sort_unstable();
    out
}

fn random<T: Scalar>(graph: &BipartiteGraph, profile: &ValueProfile<T>, ell: usize, budget: u64, seed: u64) -> Result<Tally<T>> {
    let s = profile.tranche_count();
    let chunks = budget.div_ceil(RANDOM_CHUNK);
    let partials: Vec<Result<Tally<T>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = RANDOM_CHUNK.min(budget - c * RANDOM_CHUNK);
            let mut tally = Tally::new(s);
            for _ in 0..count {
                let mut p = rand::seq::index::sample(&mut rng, graph.n(), ell).into_vec();
                p.sort_unstable();
                evaluate(graph, profile, &p, &mut tally)?;
            }
            Ok(tally)
        })
        .collect();
    let mut tally = Tally::new(s);
    for p in partials {
        tally = tally.merge(p?);
    }
    Ok(tally)
}

fn ln_choose(n: usize, k: usize) -> f64 {
    (1..=k).map(|j| ((n - k + j) as f64 / j as f64).ln()).sum()
}

/// `m * E[valu(r - i)]` with `i` hypergeometric: the lemon count of one CDO
/// under a uniformly random placement.
fn baseline<T: Scalar>(n: usize, m: usize, ell: usize, profile: &ValueProfile<T>) -> Vec<T> {
    let r = profile.r;
    let mut out = vec![T::zero(); profile.tranche_count()];
    let total = ln_choose(n, ell);
    for i in 0..=r.min(ell) {
        if ell - i > n - r {
            continue;
        }
        let p = (ln_choose(r, i) + ln_choose(n - r, ell - i) - total).exp();
        let w = T::lit(p) * T::from_count(m as u64);
        for (o, &v) in out.iter_mut().zip(&profile.values[r - i]) {
            *o = *o + w * v;
        }
    }
    out
}

/// `(gap, pair, exact)` from [`l1_search`].
type L1Outcome<T> = (T, (Vec<usize>, Vec<usize>), bool);

fn l1<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| (x - y).abs()).sum()
}

/// Largest L1 distance between tranche-total vectors of two examined
/// placements. Exact over the distinct histograms when none were dropped;
/// otherwise every per-tranche extremizer is paired with every kept
/// histogram, which gives a lower bound.
fn l1_search<T: Scalar>(
    graph: &BipartiteGraph,
    profile: &ValueProfile<T>,
    tally: &Tally<T>,
) -> Result<L1Outcome<T>> {
    let entries: Vec<(&Vec<usize>, Vec<T>)> =
        tally.distinct.iter().map(|(t, p)| (p, profile.totals_from_counts(t))).collect();
    let mut best = (T::zero(), (Vec::new(), Vec::new()));
    let mut consider = |a: &[usize], ta: &[T], b: &[usize], tb: &[T]| {
        let d = l1(ta, tb);
        let pair = if a <= b { (a.to_vec(), b.to_vec()) } else { (b.to_vec(), a.to_vec()) };
        if d > best.0 || (d == best.0 && (best.1 .0.is_empty() || pair < best.1)) {
            best = (d, pair);
        }
    };
    if !tally.overflow {
        for (i, (pa, ta)) in entries.iter().enumerate() {
            for (pb, tb) in &entries[i..] {
                consider(pa, ta, pb, tb);
            }
        }
        return Ok((best.0, best.1, true));
    }
    let mut anchors: Vec<Vec<usize>> = tally
        .min
        .iter()
        .chain(&tally.max)
        .chain([&tally.agg_min, &tally.agg_max])
        .flatten()
        .map(|b| b.placement.clone())
        .collect();
    anchors.sort();
    anchors.dedup();
    let anchor_totals: Vec<Vec<T>> = anchors
        .iter()
        .map(|p| Ok(profile.totals_from_counts(&graph.neighbor_counts(p)?.t)))
        .collect::<Result<_>>()?;
    for (pa, ta) in anchors.iter().zip(&anchor_totals) {
        for (pb, tb) in &entries {
            consider(pa, ta, pb, tb);
        }
        for (pb, tb) in anchors.iter().zip(&anchor_totals) {
            consider(pa, ta, pb, tb);
        }
    }
    Ok((best.0, best.1, false))
}

/// Searches lemon placements of size `ell` for the extremes of every
/// tranche total.
///
/// * `Exhaustive` enumerates all `C(n, ell)` placements (error if that
///   exceeds `budget`).
/// * `Greedy` evaluates a dense placement, built to put many CDOs at two or
///   more lemons, and a spread placement built to avoid that.
/// * `Random` evaluates `budget` uniform placements drawn from `seed`.
///
/// Results are identical for any rayon thread count.
pub fn search_worst<T: Scalar>(
    graph: &BipartiteGraph,
    profile: &ValueProfile<T>,
    ell: usize,
    mode: SearchMode,
    budget: u64,
    seed: u64,
) -> Result<AttackResult<T>> {
    let (n, m) = (graph.n(), graph.m());
    if graph.right_degree() != Some(profile.r) {
        return Err(ModelError::RegularityMismatch { expected: profile.r, found: graph.right_degree() }.into());
    }
    if ell > n {
        return Err(AdversaryError::TooManyLemons { ell, n });
    }
    let tally = match mode {
        SearchMode::Exhaustive => exhaustive(graph, profile, ell, budget)?,
        SearchMode::Greedy => {
            let mut tally = Tally::new(profile.tranche_count());
            evaluate(graph, profile, &greedy_placement(graph, ell, true), &mut tally)?;
            evaluate(graph, profile, &greedy_placement(graph, ell, false), &mut tally)?;
            tally
        }
        SearchMode::Random => {
            if budget == 0 {
                return Err(AdversaryError::Mismatch("random search needs a positive budget".into()));
            }
            random(graph, profile, ell, budget, seed)?
        }
    };
    let (gap_l1, l1_pair, l1_exact) = l1_search(graph, profile, &tally)?;

    let unwrap = |v: &[Option<Best<T>>]| -> Vec<Best<T>> { v.iter().map(|b| b.clone().expect("examined")).collect() };
    let min = unwrap(&tally.min);
    let max = unwrap(&tally.max);
    let tranches = &profile.tranches;
    let mf = T::from_count(m as u64);
    let gap_per_tranche: Vec<T> = min.iter().zip(&max).map(|(a, b)| b.value - a.value).collect();
    let eps_per_tranche = gap_per_tranche.iter().enumerate().map(|(i, &g)| g / (mf * tranches.width(i))).collect();
    let baseline_totals = baseline(n, m, ell, profile);
    let baseline_gap_per_tranche = baseline_totals
        .iter()
        .zip(min.iter().zip(&max))
        .map(|(&b, (lo, hi))| (b - lo.value).max(hi.value - b).max(T::zero()))
        .collect();
    Ok(AttackResult {
        ell,
        mode,
        n,
        m,
        r: profile.r,
        tranche_points: tranches.points().to_vec(),
        min_totals: min.iter().map(|b| b.value).collect(),
        max_totals: max.iter().map(|b| b.value).collect(),
        l_min: min.into_iter().map(|b| b.placement).collect(),
        l_max: max.into_iter().map(|b| b.placement).collect(),
        l_min_aggregate: tally.agg_min.clone().expect("examined").placement,
        l_max_aggregate: tally.agg_max.clone().expect("examined").placement,
        gap_per_tranche,
        gap_l1,
        l1_pair,
        l1_exact,
        eps_per_tranche,
        eps_l1: gap_l1 / (mf * T::from_count(profile.r as u64)),
        baseline_totals,
        baseline_gap_per_tranche,
        placements_examined: tally.examined,
        exhaustive: mode == SearchMode::Exhaustive,
    })
}
