use serde::Serialize;

use super::{ModelError, Result};
use crate::Scalar;

/// Finite distribution of a single asset payoff on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteDist<T> {
    support: Vec<T>,
    probs: Vec<T>,
}

impl<T: Scalar> DiscreteDist<T> {
    pub fn new(support: Vec<T>, probs: Vec<T>) -> Result<Self> {
        if support.is_empty() {
            return Err(ModelError::EmptySupport);
        }
        if support.len() != probs.len() {
            return Err(ModelError::LengthMismatch { support: support.len(), probs: probs.len() });
        }
        for (i, &x) in support.iter().enumerate() {
            if !(x >= T::zero() && x <= T::one()) {
                return Err(ModelError::PayoffOutOfRange { index: i, value: x.to_f64().unwrap_or(f64::NAN) });
            }
            if i > 0 && support[i - 1] >= x {
                return Err(ModelError::NotAscending { index: i });
            }
        }
        for (i, &p) in probs.iter().enumerate() {
            if !(p >= T::zero()) || !p.is_finite() {
                return Err(ModelError::NegativeProb { index: i, value: p.to_f64().unwrap_or(f64::NAN) });
            }
        }
        let total: T = probs.iter().copied().sum();
        if (total - T::one()).abs() > T::mass_tolerance() {
            return Err(ModelError::ProbSum { sum: total.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(DiscreteDist { support, probs })
    }

    pub fn point(x: T) -> Result<Self> {
        Self::new(vec![x], vec![T::one()])
    }

    /// Payoff 1 with probability `p`, else 0.
    pub fn bernoulli(p: T) -> Result<Self> {
        Self::new(vec![T::zero(), T::one()], vec![T::one() - p, p])
    }

    pub fn support(&self) -> &[T] {
        &self.support
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn mean(&self) -> T {
        self.support.iter().zip(&self.probs).map(|(&x, &p)| x * p).sum()
    }

    /// `Pr[X >= a]`.
    pub fn tail(&self, a: T) -> T {
        self.support
            .iter()
            .zip(&self.probs)
            .filter(|(&x, _)| x >= a)
            .map(|(_, &p)| p)
            .sum()
    }

    /// Inverse-CDF draw from a uniform `u` in `[0, 1)`.
    pub fn quantile(&self, u: T) -> T {
        let mut acc = T::zero();
        for (&x, &p) in self.support.iter().zip(&self.probs) {
            acc = acc + p;
            if u < acc {
                return x;
            }
        }
        *self.support.last().unwrap()
    }
}

/// One fixing of the global state: its prior weight and the good and lemon
/// payoff distributions conditioned on it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario<T> {
    pub weight: T,
    pub good: DiscreteDist<T>,
    pub lemon: DiscreteDist<T>,
}

/// Outcome of [`validate_model`].
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport<T> {
    pub mu: T,
    pub lambda: T,
    pub delta: T,
    pub dominated: bool,
    /// First `(scenario, threshold)` where `Pr[good >= a] < Pr[lemon >= a]`.
    pub violation: Option<(usize, T)>,
}

/// Mixture over scenarios; conditioned on a scenario all assets are independent.
#[derive(Debug, Clone, PartialEq)]
pub struct AssetModel<T> {
    scenarios: Vec<Scenario<T>>,
    pub mu: T,
    pub lambda: T,
    pub delta: T,
    pub dominated: bool,
}

/// Computes `mu`, `lambda`, `delta` and checks first-order stochastic
/// dominance of good over lemon at every support point of every scenario.
pub fn validate_model<T: Scalar>(scenarios: &[Scenario<T>]) -> Result<DominanceReport<T>> {
    if scenarios.is_empty() {
        return Err(ModelError::NoScenarios);
    }
    let mut total = T::zero();
    for (i, s) in scenarios.iter().enumerate() {
        if !(s.weight >= T::zero()) || !s.weight.is_finite() {
            return Err(ModelError::BadWeight { index: i, value: s.weight.to_f64().unwrap_or(f64::NAN) });
        }
        total = total + s.weight;
    }
    if (total - T::one()).abs() > T::mass_tolerance() {
        return Err(ModelError::WeightSum { sum: total.to_f64().unwrap_or(f64::NAN) });
    }
    let mu: T = scenarios.iter().map(|s| s.weight * s.good.mean()).sum();
    let lambda: T = scenarios.iter().map(|s| s.weight * s.lemon.mean()).sum();

    let tol = T::mass_tolerance();
    let violation = scenarios.iter().enumerate().find_map(|(z, s)| {
        let mut thresholds: Vec<T> = s.good.support().iter().chain(s.lemon.support()).copied().collect();
        thresholds.sort_by(|a, b| a.partial_cmp(b).unwrap());
        thresholds.dedup();
        thresholds
            .into_iter()
            .find(|&a| s.good.tail(a) + tol < s.lemon.tail(a))
            .map(|a| (z, a))
    });
    Ok(DominanceReport { mu, lambda, delta: mu - lambda, dominated: violation.is_none(), violation })
}

impl<T: Scalar> AssetModel<T> {
    pub fn new(scenarios: Vec<Scenario<T>>) -> Result<Self> {
        let rep = validate_model(&scenarios)?;
        Ok(AssetModel { scenarios, mu: rep.mu, lambda: rep.lambda, delta: rep.delta, dominated: rep.dominated })
    }

    /// Single-scenario model.
    pub fn single(good: DiscreteDist<T>, lemon: DiscreteDist<T>) -> Result<Self> {
        Self::new(vec![Scenario { weight: T::one(), good, lemon }])
    }

    pub fn scenarios(&self) -> &[Scenario<T>] {
        &self.scenarios
    }

    pub fn report(&self) -> DominanceReport<T> {
        validate_model(&self.scenarios).expect("validated at construction")
    }
}
