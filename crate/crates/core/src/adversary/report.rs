use serde::{Deserialize, Serialize};

use super::bounds::{theoretical_bounds, valuediff_bound, Applicability, BoundInputs, BoundReport};
use super::search::{AttackResult, SearchMode};
use super::{AdversaryError, Result};
use crate::cdo_model::ValueProfile;
use crate::expander::BipartiteGraph;
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Empirical<T> {
    pub mode: SearchMode,
    pub ell: usize,
    pub placements_examined: u64,
    pub exhaustive: bool,
    pub min_totals: Vec<T>,
    pub max_totals: Vec<T>,
    pub gap_per_tranche: Vec<T>,
    pub eps_per_tranche: Vec<T>,
    pub gap_l1: T,
    pub eps_l1: T,
    pub l1_exact: bool,
    pub baseline_totals: Vec<T>,
    pub baseline_gap_per_tranche: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    pub l_min: Vec<Vec<usize>>,
    pub l_max: Vec<Vec<usize>>,
    pub l_min_aggregate: Vec<usize>,
    pub l_max_aggregate: Vec<usize>,
    pub l1_pair: (Vec<usize>, Vec<usize>),
}

/// Attack result joined with every applicable bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CombinedReport<T> {
    pub bounds: BoundReport<T>,
    pub empirical: Empirical<T>,
    pub applicability: Applicability,
    pub witness_placements: Witnesses,
    /// One line per applicable bound exceeded by an empirical gap.
    pub violations: Vec<String>,
}

fn slack<T: Scalar>(bound: T) -> T {
    let rel = T::lit(1e-9).max(T::epsilon() * T::lit(1e4));
    rel * (T::one() + bound.abs())
}

pub fn build_report<T: Scalar>(
    attack: &AttackResult<T>,
    inputs: &BoundInputs<T>,
    graph: &BipartiteGraph,
    profile: &ValueProfile<T>,
) -> Result<CombinedReport<T>> {
    if attack.ell != inputs.ell || attack.m != inputs.m || attack.r != inputs.r || attack.r != profile.r {
        return Err(AdversaryError::Mismatch(format!(
            "attack (ell={}, m={}, r={}) vs bounds (ell={}, m={}, r={}) vs profile r={}",
            attack.ell, attack.m, attack.r, inputs.ell, inputs.m, inputs.r, profile.r
        )));
    }
    if attack.tranche_points != inputs.tranches.points() || attack.tranche_points != profile.tranches.points() {
        return Err(AdversaryError::Mismatch("attack, bounds and profile use different tranches".into()));
    }
    if attack.n != graph.n() || attack.m != graph.m() {
        return Err(AdversaryError::Mismatch(format!(
            "attack on {}x{} graph, given {}x{}",
            attack.n,
            attack.m,
            graph.n(),
            graph.m()
        )));
    }
    let mut bounds = theoretical_bounds(inputs);
    let valuediff = attack
        .l_min
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let counts = graph.neighbor_counts(l)?;
            Ok(valuediff_bound(&counts, profile, inputs.delta_cert, inputs.ell, i)?.value)
        })
        .collect::<Result<Vec<T>>>()?;
    bounds.valuediff = Some(valuediff.clone());
    let app = bounds.applicability;

    let mut violations = Vec::new();
    let mut check = |name: &str, tranche: Option<usize>, gap: T, bound: T| {
        if gap > bound + slack(bound) {
            let at = tranche.map_or("l1".to_string(), |i| format!("tranche {i}"));
            violations.push(format!("{name} bound violated at {at}: gap {gap} > {bound}"));
        }
    };
    for (i, &gap) in attack.gap_per_tranche.iter().enumerate() {
        if app.trivial {
            check("trivial", Some(i), gap, bounds.trivial_tranche);
        }
        if app.unique {
            check("valuediff", Some(i), gap, valuediff[i]);
            check("unique", Some(i), gap, bounds.unique_tranche);
        }
        if app.explicit {
            check("explicit", Some(i), gap, bounds.explicit_tranche);
        }
        if app.general {
            check("general", Some(i), gap, bounds.general_tranche);
        }
    }
    if app.unique {
        check("unique_l1", None, attack.gap_l1, bounds.unique_l1);
    }
    if app.explicit {
        check("explicit_l1", None, attack.gap_l1, bounds.explicit_l1);
    }

    Ok(CombinedReport {
        applicability: app,
        bounds,
        empirical: Empirical {
            mode: attack.mode,
            ell: attack.ell,
            placements_examined: attack.placements_examined,
            exhaustive: attack.exhaustive,
            min_totals: attack.min_totals.clone(),
            max_totals: attack.max_totals.clone(),
            gap_per_tranche: attack.gap_per_tranche.clone(),
            eps_per_tranche: attack.eps_per_tranche.clone(),
            gap_l1: attack.gap_l1,
            eps_l1: attack.eps_l1,
            l1_exact: attack.l1_exact,
            baseline_totals: attack.baseline_totals.clone(),
            baseline_gap_per_tranche: attack.baseline_gap_per_tranche.clone(),
        },
        witness_placements: Witnesses {
            l_min: attack.l_min.clone(),
            l_max: attack.l_max.clone(),
            l_min_aggregate: attack.l_min_aggregate.clone(),
            l_max_aggregate: attack.l_max_aggregate.clone(),
            l1_pair: attack.l1_pair.clone(),
        },
        violations,
    })
}

impl<T: Scalar> CombinedReport<T> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// One row per tranche: bounds next to the empirical gap.
    pub fn to_csv(&self, tranche_points: &[T]) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "tranche", "a", "b", "gap", "eps", "baseline_gap", "trivial", "unique", "explicit", "general", "valuediff",
        ])
        .expect("in-memory write");
        let b = &self.bounds;
        let e = &self.empirical;
        for i in 0..e.gap_per_tranche.len() {
            let vd = b.valuediff.as_ref().map_or(String::new(), |v| v[i].to_string());
            w.write_record([
                i.to_string(),
                tranche_points[i].to_string(),
                tranche_points[i + 1].to_string(),
                e.gap_per_tranche[i].to_string(),
                e.eps_per_tranche[i].to_string(),
                e.baseline_gap_per_tranche[i].to_string(),
                b.trivial_tranche.to_string(),
                b.unique_tranche.to_string(),
                b.explicit_tranche.to_string(),
                b.general_tranche.to_string(),
                vd,
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}
