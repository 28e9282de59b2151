use serde::{Deserialize, Serialize};

use super::{AdversaryError, Result};
use crate::cdo_model::{TrancheSpec, TrancheValueVector, ValueProfile};
use crate::expander::NeighborCounts;
use crate::Scalar;

/// Parameters of a CDO family and model that the error bounds depend on.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundInputs<T> {
    pub d: usize,
    pub r: usize,
    pub m: usize,
    pub ell: usize,
    /// Expansion deficiency from the certificate: `(k_max, d - delta)` expansion.
    pub delta_cert: u64,
    /// Real-valued deficiency `2 (2d)^alpha log_d n log_d m` of the explicit family.
    pub delta_explicit: T,
    pub k_max: usize,
    pub mu: T,
    pub delta: T,
    pub dominated: bool,
    pub tranches: TrancheSpec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Applicability {
    /// Dominated model; any biregular family.
    pub trivial: bool,
    /// Dominated model, `ell <= k_max`, `d - 2 delta >= 0`.
    pub unique: bool,
    pub explicit: bool,
    /// `ell <= k_max`, `d - 2 delta >= 0`, `mu >= lambda`; dominance not required.
    pub general: bool,
    pub ell_within_k_max: bool,
    pub certificate_vacuous: bool,
    pub dominated: bool,
}

/// Absolute bounds on placement gaps and their normalized forms (capped at 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BoundReport<T> {
    pub ell: usize,
    pub delta_cert: u64,
    pub delta_explicit: T,
    pub trivial_tranche: T,
    pub unique_tranche: T,
    pub unique_l1: T,
    pub explicit_tranche: T,
    pub explicit_l1: T,
    pub general_tranche: T,
    pub eps_trivial: Vec<T>,
    pub eps_unique: Vec<T>,
    pub eps_unique_l1: T,
    pub eps_explicit: Vec<T>,
    pub eps_explicit_l1: T,
    pub eps_general: Vec<T>,
    /// Per-tranche data-dependent bound at that tranche's minimizing placement.
    pub valuediff: Option<Vec<T>>,
    pub applicability: Applicability,
}

pub fn theoretical_bounds<T: Scalar>(inp: &BoundInputs<T>) -> BoundReport<T> {
    let c = |v: usize| T::from_count(v as u64);
    let ell = c(inp.ell);
    let big = T::from_count(inp.delta_cert);
    let delta = inp.delta.max(T::zero());
    let mu = inp.mu.max(T::zero());
    let dexp = inp.delta_explicit.max(T::zero());

    let trivial_tranche = c(inp.d) * ell * delta;
    let unique_tranche = T::lit(2.0) * big * ell * delta;
    let unique_l1 = T::lit(3.0) * big * ell * delta;
    let explicit_tranche = T::lit(4.0) * dexp * ell * delta;
    let explicit_l1 = T::lit(6.0) * dexp * ell * delta;
    let general_tranche = T::lit(2.0) * big * ell * mu;

    let m = c(inp.m);
    let widths: Vec<T> = (0..inp.tranches.count()).map(|i| inp.tranches.width(i)).collect();
    let per = |b: T| -> Vec<T> { widths.iter().map(|&w| (b / (m * w)).min(T::one())).collect() };
    let whole = |b: T| (b / (m * c(inp.r))).min(T::one());

    let within = inp.ell <= inp.k_max;
    let vacuous = (inp.d as u64) < 2 * inp.delta_cert;
    let expander_ok = within && !vacuous;
    BoundReport {
        ell: inp.ell,
        delta_cert: inp.delta_cert,
        delta_explicit: inp.delta_explicit,
        trivial_tranche,
        unique_tranche,
        unique_l1,
        explicit_tranche,
        explicit_l1,
        general_tranche,
        eps_trivial: per(trivial_tranche),
        eps_unique: per(unique_tranche),
        eps_unique_l1: whole(unique_l1),
        eps_explicit: per(explicit_tranche),
        eps_explicit_l1: whole(explicit_l1),
        eps_general: per(general_tranche),
        valuediff: None,
        applicability: Applicability {
            trivial: inp.dominated,
            unique: inp.dominated && expander_ok,
            explicit: inp.dominated && expander_ok,
            general: expander_ok && inp.delta >= T::zero(),
            ell_within_k_max: within,
            certificate_vacuous: vacuous,
            dominated: inp.dominated,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueDiff<T> {
    pub value: T,
    /// The bound is only established for dominated models.
    pub dominated: bool,
}

/// `Δℓ(valu(r) - valu(r-1)) + Σ_{i>=2} t_i (valu(r) - valu(r-i))` for one tranche.
pub fn valuediff_bound<T: Scalar>(
    counts: &NeighborCounts,
    profile: &ValueProfile<T>,
    delta_cert: u64,
    ell: usize,
    tranche: usize,
) -> Result<ValueDiff<T>> {
    if tranche >= profile.tranche_count() {
        return Err(AdversaryError::Mismatch(format!(
            "tranche {tranche} out of range 0..{}",
            profile.tranche_count()
        )));
    }
    let r = profile.r;
    let v = |g: usize| profile.value(g, tranche);
    let mut value = T::zero();
    if ell > 0 && r >= 1 {
        value = T::from_count(delta_cert * ell as u64) * (v(r) - v(r - 1));
    }
    for i in 2..=r {
        let t = counts.get(i);
        if t > 0 {
            value = value + T::from_count(t) * (v(r) - v(r - i));
        }
    }
    Ok(ValueDiff { value, dominated: profile.dominated })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct EmpiricalErrors<T> {
    pub eps: Vec<T>,
    pub eps_l1: T,
}

/// Normalized differences between two tranche-total vectors.
pub fn empirical_errors<T: Scalar>(
    a: &TrancheValueVector<T>,
    b: &TrancheValueVector<T>,
    tranches: &TrancheSpec<T>,
    m: usize,
    r: usize,
) -> Result<EmpiricalErrors<T>> {
    let s = tranches.count();
    if a.totals.len() != s || b.totals.len() != s {
        return Err(AdversaryError::Mismatch(format!(
            "vectors of length {} and {} for {s} tranches",
            a.totals.len(),
            b.totals.len()
        )));
    }
    let mf = T::from_count(m as u64);
    let diffs: Vec<T> = a.totals.iter().zip(&b.totals).map(|(&x, &y)| (x - y).abs()).collect();
    let eps = diffs.iter().enumerate().map(|(i, &d)| d / (mf * tranches.width(i))).collect();
    let eps_l1 = diffs.iter().copied().sum::<T>() / (mf * T::from_count(r as u64));
    Ok(EmpiricalErrors { eps, eps_l1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdo_model::{value_profile, AssetModel, DiscreteDist};
    use proptest::prelude::*;

    fn inputs(ell: usize, dominated: bool) -> BoundInputs<f64> {
        BoundInputs {
            d: 4,
            r: 4,
            m: 16,
            ell,
            delta_cert: 1,
            delta_explicit: 2.5,
            k_max: 2,
            mu: 0.5,
            delta: 0.5,
            dominated,
            tranches: TrancheSpec::unit(4),
        }
    }

    #[test]
    fn hand_substituted_values() {
        let b = theoretical_bounds(&inputs(2, true));
        assert_eq!(b.trivial_tranche, 4.0);
        assert_eq!(b.eps_trivial, vec![0.25; 4]);
        assert_eq!(b.unique_tranche, 2.0);
        assert_eq!(b.eps_unique, vec![0.125; 4]);
        assert_eq!(b.unique_l1, 3.0);
        assert_eq!(b.eps_unique_l1, 3.0 / 64.0);
        assert_eq!(b.explicit_tranche, 4.0 * 2.5 * 2.0 * 0.5);
        assert_eq!(b.explicit_l1, 6.0 * 2.5 * 2.0 * 0.5);
        assert!(b.applicability.unique && b.applicability.trivial && b.applicability.general);
    }

    #[test]
    fn no_lemons_no_gap() {
        let b = theoretical_bounds(&inputs(0, true));
        for v in [b.trivial_tranche, b.unique_tranche, b.unique_l1, b.explicit_tranche, b.explicit_l1, b.general_tranche] {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn general_assets() {
        let b = theoretical_bounds(&inputs(2, false));
        assert_eq!(b.general_tranche, 2.0);
        assert_eq!(b.eps_general, vec![0.125; 4]);
        assert!(b.applicability.general);
        assert!(!b.applicability.unique && !b.applicability.trivial && !b.applicability.explicit);
    }

    #[test]
    fn general_bound_needs_mu_above_lambda() {
        let mut i = inputs(2, false);
        i.delta = -0.1;
        assert!(!theoretical_bounds(&i).applicability.general);
    }

    #[test]
    fn applicability_flags() {
        let b = theoretical_bounds(&inputs(3, true));
        assert!(!b.applicability.unique && !b.applicability.general && b.applicability.trivial);
        let mut i = inputs(1, true);
        i.delta_cert = 3;
        let b = theoretical_bounds(&i);
        assert!(b.applicability.certificate_vacuous && !b.applicability.unique);
        assert_eq!(b.eps_trivial, vec![4.0 * 0.5 / 16.0; 4]);
        i.ell = 100;
        assert_eq!(theoretical_bounds(&i).eps_trivial, vec![1.0; 4]);
    }

    fn toy_profile() -> ValueProfile<f64> {
        let m = AssetModel::single(DiscreteDist::bernoulli(0.5).unwrap(), DiscreteDist::point(0.0).unwrap()).unwrap();
        value_profile(&m, &TrancheSpec::new(vec![0.0, 1.0, 2.0]).unwrap(), 2).unwrap()
    }

    #[test]
    fn valuediff_examples() {
        let p = toy_profile();
        let t = NeighborCounts { t: vec![0, 0, 1] };
        let v = valuediff_bound(&t, &p, 1, 2, 0).unwrap();
        assert_eq!(v.value, 1.25);
        assert!(v.dominated);
        // isolated lemons: only the first term
        let t = NeighborCounts { t: vec![4, 4, 0] };
        assert_eq!(valuediff_bound(&t, &p, 1, 2, 0).unwrap().value, 2.0 * 0.25);
        let t = NeighborCounts { t: vec![8, 0, 0] };
        assert_eq!(valuediff_bound(&t, &p, 1, 0, 0).unwrap().value, 0.0);
        assert!(valuediff_bound(&t, &p, 1, 0, 2).is_err());
    }

    #[test]
    fn empirical_examples() {
        let t = TrancheSpec::new(vec![0.0, 1.0, 2.0]).unwrap();
        let a = TrancheValueVector { totals: vec![1.5, 0.5] };
        let b = TrancheValueVector { totals: vec![1.0, 0.0] };
        let e = empirical_errors(&a, &b, &t, 2, 2).unwrap();
        assert_eq!(e.eps, vec![0.25, 0.25]);
        assert_eq!(e.eps_l1, 0.25);
        let z = empirical_errors(&a, &a, &t, 2, 2).unwrap();
        assert_eq!(z.eps, vec![0.0, 0.0]);
        assert_eq!(z.eps_l1, 0.0);
        let short = TrancheValueVector { totals: vec![1.0] };
        assert!(empirical_errors(&a, &short, &t, 2, 2).is_err());
    }

    proptest! {
        #[test]
        fn shifts_leave_errors_unchanged(
            a in prop::collection::vec(0.0f64..4.0, 3),
            b in prop::collection::vec(0.0f64..4.0, 3),
            shift in prop::collection::vec(-2.0f64..2.0, 3),
        ) {
            let t = TrancheSpec::new(vec![0.0, 1.0, 2.5, 3.0]).unwrap();
            let e0 = empirical_errors(&TrancheValueVector { totals: a.clone() }, &TrancheValueVector { totals: b.clone() }, &t, 5, 3).unwrap();
            let sa = a.iter().zip(&shift).map(|(x, s)| x + s).collect();
            let sb = b.iter().zip(&shift).map(|(x, s)| x + s).collect();
            let e1 = empirical_errors(&TrancheValueVector { totals: sa }, &TrancheValueVector { totals: sb }, &t, 5, 3).unwrap();
            for (x, y) in e0.eps.iter().zip(&e1.eps) {
                prop_assert!((x - y).abs() < 1e-12);
            }
            prop_assert!((e0.eps_l1 - e1.eps_l1).abs() < 1e-12);
        }

        #[test]
        fn bounds_nonnegative_and_capped(
            d in 1usize..8, delta_cert in 0u64..6, ell in 0usize..10,
            mu in 0.0f64..1.0, lam in 0.0f64..1.0,
        ) {
            let i = BoundInputs {
                d, r: d, m: 12, ell, delta_cert, delta_explicit: 3.0, k_max: 4,
                mu, delta: mu - lam, dominated: mu >= lam, tranches: TrancheSpec::unit(d),
            };
            let b = theoretical_bounds(&i);
            for v in [b.trivial_tranche, b.unique_tranche, b.unique_l1, b.explicit_tranche, b.explicit_l1, b.general_tranche] {
                prop_assert!(v >= 0.0);
            }
            for e in b.eps_trivial.iter().chain(&b.eps_unique).chain(&b.eps_explicit).chain(&b.eps_general) {
                prop_assert!((0.0..=1.0).contains(e));
            }
            prop_assert!(b.unique_tranche <= b.unique_l1);
        }
    }
}
