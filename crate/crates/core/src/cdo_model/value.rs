use std::cmp::Ordering;

use serde::Serialize;

use super::{AssetModel, DiscreteDist, ModelError, Result, TrancheSpec};
use crate::expander::BipartiteGraph;
use crate::Scalar;

/// Cap on atoms produced by a single convolution step.
pub const ATOM_GUARD: usize = 1_000_000;

/// `values[g][i]`: expected payoff of tranche `i` of one CDO over `r` assets
/// of which `g` are good.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueProfile<T> {
    pub r: usize,
    pub tranches: TrancheSpec<T>,
    pub values: Vec<Vec<T>>,
    pub mu: T,
    pub lambda: T,
    pub delta: T,
    pub dominated: bool,
}

/// Per-tranche totals over every CDO of a family for one lemon placement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrancheValueVector<T> {
    pub totals: Vec<T>,
}

/// Distribution of a sum of asset payoffs, atoms ascending and merged.
#[derive(Debug, Clone)]
struct Atoms<T> {
    vals: Vec<T>,
    probs: Vec<T>,
}

impl<T: Scalar> Atoms<T> {
    fn unit() -> Self {
        Atoms { vals: vec![T::zero()], probs: vec![T::one()] }
    }

    fn from_dist(d: &DiscreteDist<T>) -> Self {
        Atoms { vals: d.support().to_vec(), probs: d.probs().to_vec() }
    }

    fn convolve(&self, other: &Atoms<T>) -> Result<Atoms<T>> {
        let size = self.vals.len() * other.vals.len();
        if size > ATOM_GUARD {
            return Err(ModelError::AtomGuard { atoms: size });
        }
        let mut pairs: Vec<(T, T)> = Vec::with_capacity(size);
        for (&x, &p) in self.vals.iter().zip(&self.probs) {
            for (&y, &q) in other.vals.iter().zip(&other.probs) {
                pairs.push((x + y, p * q));
            }
        }
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
        let mut out = Atoms { vals: Vec::with_capacity(size), probs: Vec::with_capacity(size) };
        for (v, p) in pairs {
            if out.vals.last() == Some(&v) {
                let last = out.probs.last_mut().unwrap();
                *last = *last + p;
            } else {
                out.vals.push(v);
                out.probs.push(p);
            }
        }
        Ok(out)
    }

    /// `[A^{*0}, A^{*1}, ..., A^{*k}]`.
    fn powers(base: &Atoms<T>, k: usize) -> Result<Vec<Atoms<T>>> {
        let mut out = vec![Atoms::unit()];
        for i in 0..k {
            let next = out[i].convolve(base)?;
            out.push(next);
        }
        Ok(out)
    }
}

/// Exact expected tranche payoffs for every good-asset count `g` in `0..=r`.
///
/// Per scenario the portfolio payoff is the exact convolution of `g` good
/// and `r - g` lemon draws; scenario results are weight-averaged.
pub fn value_profile<T: Scalar>(model: &AssetModel<T>, tranches: &TrancheSpec<T>, r: usize) -> Result<ValueProfile<T>> {
    tranches.check_size(r)?;
    let s = tranches.count();
    let mut values = vec![vec![T::zero(); s]; r + 1];
    let mut payoff = Vec::with_capacity(s);
    for scenario in model.scenarios() {
        let good = Atoms::powers(&Atoms::from_dist(&scenario.good), r)?;
        let lemon = Atoms::powers(&Atoms::from_dist(&scenario.lemon), r)?;
        for (g, row) in values.iter_mut().enumerate() {
            let portfolio = good[g].convolve(&lemon[r - g])?;
            for (&x, &p) in portfolio.vals.iter().zip(&portfolio.probs) {
                tranches.payoff_into(x, &mut payoff);
                for (acc, &y) in row.iter_mut().zip(&payoff) {
                    *acc = *acc + scenario.weight * p * y;
                }
            }
        }
    }
    Ok(ValueProfile {
        r,
        tranches: tranches.clone(),
        values,
        mu: model.mu,
        lambda: model.lambda,
        delta: model.delta,
        dominated: model.dominated,
    })
}

impl<T: Scalar> ValueProfile<T> {
    pub fn tranche_count(&self) -> usize {
        self.tranches.count()
    }

    /// `valu(g)` for tranche `i`.
    pub fn value(&self, g: usize, tranche: usize) -> T {
        self.values[g][tranche]
    }

    /// Totals `sum_i t[i] * valu(r - i)` from a lemon-multiplicity histogram.
    pub fn totals_from_counts(&self, t: &[u64]) -> Vec<T> {
        let mut totals = vec![T::zero(); self.tranche_count()];
        for (i, &c) in t.iter().enumerate().filter(|(_, &c)| c > 0) {
            let c = T::from_count(c);
            for (acc, &v) in totals.iter_mut().zip(&self.values[self.r - i]) {
                *acc = *acc + c * v;
            }
        }
        totals
    }
}

/// Family-wide tranche totals when the assets in `lemons` are lemons.
pub fn tv_vector<T: Scalar>(
    graph: &BipartiteGraph,
    profile: &ValueProfile<T>,
    lemons: &[usize],
) -> Result<TrancheValueVector<T>> {
    if graph.right_degree() != Some(profile.r) {
        return Err(ModelError::RegularityMismatch { expected: profile.r, found: graph.right_degree() });
    }
    let counts = graph.neighbor_counts(lemons)?;
    Ok(TrancheValueVector { totals: profile.totals_from_counts(&counts.t) })
}
