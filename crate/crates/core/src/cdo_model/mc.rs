use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AssetModel, ModelError, Result, TrancheSpec};
use crate::Scalar;

/// Monte Carlo tranche values with per-tranche standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate<T> {
    pub means: Vec<T>,
    pub std_errors: Vec<T>,
    pub trials: u64,
}

/// Estimates `valu(g)` per tranche by direct simulation: draw a scenario by
/// weight, then `g` good and `r - g` lemon payoffs, and average the tranche
/// payoffs. The stream is a ChaCha8 generator seeded with `seed`.
pub fn mc_value<T: Scalar>(
    model: &AssetModel<T>,
    tranches: &TrancheSpec<T>,
    r: usize,
    g: usize,
    seed: u64,
    trials: u64,
) -> Result<McEstimate<T>> {
    tranches.check_size(r)?;
    if g > r {
        return Err(ModelError::GoodCount { g, r });
    }
    if trials == 0 {
        return Err(ModelError::Trials);
    }
    let s = tranches.count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mean = vec![T::zero(); s];
    let mut m2 = vec![T::zero(); s];
    let mut payoff = Vec::with_capacity(s);
    let scenarios = model.scenarios();
    for k in 1..=trials {
        let u = T::lit(rng.random::<f64>());
        let mut acc = T::zero();
        let scenario = scenarios
            .iter()
            .find(|sc| {
                acc = acc + sc.weight;
                u < acc
            })
            .unwrap_or_else(|| scenarios.last().unwrap());
        let mut x = T::zero();
        for j in 0..r {
            let dist = if j < g { &scenario.good } else { &scenario.lemon };
            x = x + dist.quantile(T::lit(rng.random::<f64>()));
        }
        tranches.payoff_into(x.min(tranches.size()), &mut payoff);
        // Welford update
        let kt = T::from_count(k);
        for ((mu, m2), &y) in mean.iter_mut().zip(m2.iter_mut()).zip(&payoff) {
            let d = y - *mu;
            *mu = *mu + d / kt;
            *m2 = *m2 + d * (y - *mu);
        }
    }
    let std_errors = m2
        .iter()
        .map(|&v| {
            if trials < 2 {
                T::zero()
            } else {
                let var = v / T::from_count(trials - 1);
                (var / T::from_count(trials)).sqrt()
            }
        })
        .collect();
    Ok(McEstimate { means: mean, std_errors, trials })
}
