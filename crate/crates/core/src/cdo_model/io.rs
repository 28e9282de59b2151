use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AssetModel, DiscreteDist, ModelError, Result, Scenario, TrancheSpec};
use crate::Scalar;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound = "T: Scalar")]
struct RawDist<T> {
    support: Vec<T>,
    probs: Vec<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound = "T: Scalar")]
struct RawScenario<T> {
    weight: T,
    good: RawDist<T>,
    lemon: RawDist<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound = "T: Scalar")]
struct RawModel<T> {
    scenarios: Vec<RawScenario<T>>,
}

fn at(path: impl Into<String>, e: impl ToString) -> ModelError {
    ModelError::Parse { path: path.into(), message: e.to_string() }
}

/// Parses a model from JSON:
/// `{"scenarios": [{"weight": w, "good": {"support": [..], "probs": [..]}, "lemon": {..}}]}`.
///
/// Syntax errors carry serde's line and column; validation errors carry the
/// offending path, e.g. `scenarios[1].lemon`.
pub fn parse_model<T: Scalar>(text: &str) -> Result<AssetModel<T>> {
    let raw: RawModel<T> = serde_json::from_str(text).map_err(|e| at("model", e))?;
    let mut scenarios = Vec::with_capacity(raw.scenarios.len());
    for (i, s) in raw.scenarios.into_iter().enumerate() {
        let good = DiscreteDist::new(s.good.support, s.good.probs).map_err(|e| at(format!("scenarios[{i}].good"), e))?;
        let lemon =
            DiscreteDist::new(s.lemon.support, s.lemon.probs).map_err(|e| at(format!("scenarios[{i}].lemon"), e))?;
        scenarios.push(Scenario { weight: s.weight, good, lemon });
    }
    AssetModel::new(scenarios).map_err(|e| at("scenarios", e))
}

pub fn model_to_json<T: Scalar>(model: &AssetModel<T>) -> String {
    let raw = RawModel {
        scenarios: model
            .scenarios()
            .iter()
            .map(|s| RawScenario {
                weight: s.weight,
                good: RawDist { support: s.good.support().to_vec(), probs: s.good.probs().to_vec() },
                lemon: RawDist { support: s.lemon.support().to_vec(), probs: s.lemon.probs().to_vec() },
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&raw).expect("plain data serializes");
    out.push('\n');
    out
}

/// Parses a single line of space-separated attachment points `0 a_1 ... a_s`.
pub fn parse_tranches<T: Scalar>(text: &str) -> Result<TrancheSpec<T>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (lineno, line) = lines.next().ok_or_else(|| at("tranches", "empty file"))?;
    if let Some((extra, _)) = lines.next() {
        return Err(at(format!("tranches line {}", extra + 1), "expected a single line of attachment points"));
    }
    let mut points = Vec::new();
    let mut col = 0;
    for tok in line.split(' ') {
        if !tok.is_empty() {
            let v: f64 = tok
                .parse()
                .map_err(|_| at(format!("tranches line {} column {}", lineno + 1, col + 1), format!("bad number {tok:?}")))?;
            points.push(T::from_f64(v).ok_or_else(|| at("tranches", format!("{v} not representable")))?);
        }
        col += tok.len() + 1;
    }
    TrancheSpec::new(points).map_err(|e| at("tranches", e))
}

pub fn tranches_to_text<T: Scalar>(t: &TrancheSpec<T>) -> String {
    let mut s = t.points().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
    s.push('\n');
    s
}

pub fn read_model<T: Scalar>(path: &Path) -> Result<AssetModel<T>> {
    let text = fs::read_to_string(path).map_err(|e| at(path.display().to_string(), e))?;
    parse_model(&text).map_err(|e| match e {
        ModelError::Parse { path: p, message } => at(format!("{}: {p}", path.display()), message),
        other => other,
    })
}

pub fn read_tranches<T: Scalar>(path: &Path) -> Result<TrancheSpec<T>> {
    let text = fs::read_to_string(path).map_err(|e| at(path.display().to_string(), e))?;
    parse_tranches(&text).map_err(|e| match e {
        ModelError::Parse { path: p, message } => at(format!("{}: {p}", path.display()), message),
        other => other,
    })
}
