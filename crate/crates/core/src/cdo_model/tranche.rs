use serde::Serialize;

use super::{ModelError, Result};
use crate::Scalar;

/// Attachment points `0 = a_0 < a_1 < ... < a_s`; tranche `i` is `[a_{i-1}, a_i]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrancheSpec<T> {
    points: Vec<T>,
}

impl<T: Scalar> TrancheSpec<T> {
    pub fn new(points: Vec<T>) -> Result<Self> {
        if points.len() < 2 {
            return Err(ModelError::Tranche("need at least two attachment points".into()));
        }
        if points[0] != T::zero() {
            return Err(ModelError::Tranche(format!("first attachment point must be 0, got {}", points[0])));
        }
        if let Some(i) = (1..points.len()).find(|&i| !(points[i] > points[i - 1]) || !points[i].is_finite()) {
            return Err(ModelError::Tranche(format!("attachment point {} ({}) is not above its predecessor", i, points[i])));
        }
        Ok(TrancheSpec { points })
    }

    /// Evenly spaced unit-width tranches `0, 1, ..., r`.
    pub fn unit(r: usize) -> Self {
        Self::new((0..=r).map(|i| T::from_count(i as u64)).collect()).expect("ascending")
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    /// Number of tranches `s`.
    pub fn count(&self) -> usize {
        self.points.len() - 1
    }

    /// Top attachment point, which must equal the CDO size.
    pub fn size(&self) -> T {
        *self.points.last().unwrap()
    }

    pub fn width(&self, i: usize) -> T {
        self.points[i + 1] - self.points[i]
    }

    pub(crate) fn check_size(&self, r: usize) -> Result<()> {
        if self.size() != T::from_count(r as u64) {
            return Err(ModelError::Tranche(format!("last attachment point {} must equal CDO size {r}", self.size())));
        }
        Ok(())
    }

    /// Per-tranche payoff `min(x, a_i) - min(x, a_{i-1})` for `0 <= x <= a_s`.
    pub fn payoff(&self, x: T) -> Result<Vec<T>> {
        if !(x >= T::zero() && x <= self.size()) {
            return Err(ModelError::PayoffDomain { x: x.to_f64().unwrap_or(f64::NAN) });
        }
        let mut out = Vec::with_capacity(self.count());
        self.payoff_into(x, &mut out);
        Ok(out)
    }

    #[inline]
    pub(crate) fn payoff_into(&self, x: T, out: &mut Vec<T>) {
        out.clear();
        out.extend(self.points.windows(2).map(|w| x.min(w[1]) - x.min(w[0])));
    }
}
