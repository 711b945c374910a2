use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{contract, Result};

/// Values within this distance of `[0, 1]` are clamped; anything further out is rejected.
pub const INGEST_TOL: f64 = 1e-12;

/// Where a survival curve came from.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct SeriesMeta {
    pub model: String,
    pub coupling: f64,
    pub params: BTreeMap<String, f64>,
}

impl SeriesMeta {
    pub fn new(model: impl Into<String>, coupling: f64) -> Self {
        Self {
            model: model.into(),
            coupling,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }
}

/// A sampled survival probability curve `s(t)` with `s(0) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivalSeries {
    times: Vec<f64>,
    values: Vec<f64>,
    meta: SeriesMeta,
}

impl SurvivalSeries {
    pub fn new(times: Vec<f64>, mut values: Vec<f64>, meta: SeriesMeta) -> Result<Self> {
        if times.is_empty() || times.len() != values.len() {
            return contract(format!(
                "series needs equal, non-zero lengths (times {}, values {})",
                times.len(),
                values.len()
            ));
        }
        if times[0] != 0.0 {
            return contract(format!("series must start at t = 0, got {}", times[0]));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) || times.iter().any(|t| !t.is_finite()) {
            return contract("series times must be finite and strictly ascending");
        }
        for (t, v) in times.iter().zip(values.iter_mut()) {
            if !(-INGEST_TOL..=1.0 + INGEST_TOL).contains(v) {
                return contract(format!("survival value {v} at t = {t} lies outside [0, 1]"));
            }
            *v = v.clamp(0.0, 1.0);
        }
        if (values[0] - 1.0).abs() > INGEST_TOL {
            return contract(format!("series must start at s(0) = 1, got {}", values[0]));
        }
        values[0] = 1.0;
        Ok(Self { times, values, meta })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn meta(&self) -> &SeriesMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> (f64, f64) {
        (*self.times.last().unwrap(), *self.values.last().unwrap())
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.iter().copied().zip(self.values.iter().copied())
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Keep every `factor`-th sample (always including `t = 0`).
    pub fn subsample(&self, factor: usize) -> Result<Self> {
        if factor == 0 {
            return contract("subsample factor must be positive");
        }
        let times = self.times.iter().copied().step_by(factor).collect();
        let values = self.values.iter().copied().step_by(factor).collect();
        Self::new(times, values, self.meta.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamps_rounding_noise() {
        let s = SurvivalSeries::new(
            vec![0.0, 1.0, 2.0],
            vec![1.0 + 5e-13, 0.5, -5e-13],
            SeriesMeta::default(),
        )
        .unwrap();
        assert_eq!(s.values(), &[1.0, 0.5, 0.0]);
    }

    #[test]
    fn rejects_bad_series() {
        let m = SeriesMeta::default;
        assert!(SurvivalSeries::new(vec![], vec![], m()).is_err());
        assert!(SurvivalSeries::new(vec![0.0, 1.0], vec![1.0], m()).is_err());
        assert!(SurvivalSeries::new(vec![0.1, 1.0], vec![1.0, 0.5], m()).is_err());
        assert!(SurvivalSeries::new(vec![0.0, 0.0], vec![1.0, 0.5], m()).is_err());
        assert!(SurvivalSeries::new(vec![0.0, 1.0], vec![1.0, 1.1], m()).is_err());
        assert!(SurvivalSeries::new(vec![0.0, 1.0], vec![0.9, 0.5], m()).is_err());
    }
}
