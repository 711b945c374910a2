use serde::Serialize;

use super::SurvivalSeries;
use crate::error::{contract, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub max_abs: f64,
    pub at_time: f64,
    pub rms: f64,
}

/// Pointwise comparison of two curves sampled on the same time grid.
///
/// Grids must match exactly; nothing is interpolated.
pub fn compare_survival(a: &SurvivalSeries, b: &SurvivalSeries) -> Result<ComparisonReport> {
    if a.times() != b.times() {
        return contract(format!(
            "time grids differ ({} vs {} samples); comparisons require identical grids",
            a.len(),
            b.len()
        ));
    }
    let mut max_abs = 0.0;
    let mut at_time = 0.0;
    let mut sum_sq = 0.0;
    for ((t, x), y) in a.iter().zip(b.values()) {
        let diff = (x - y).abs();
        sum_sq += diff * diff;
        // strict comparison keeps the earliest time on ties, independent of argument order
        if diff > max_abs {
            max_abs = diff;
            at_time = t;
        }
    }
    Ok(ComparisonReport {
        max_abs,
        at_time,
        rms: (sum_sq / a.len() as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::SeriesMeta;

    fn s(values: &[f64]) -> SurvivalSeries {
        let times = (0..values.len()).map(|k| k as f64).collect();
        SurvivalSeries::new(times, values.to_vec(), SeriesMeta::default()).unwrap()
    }

    #[test]
    fn identical_series() {
        let a = s(&[1.0, 0.8, 0.5]);
        let r = compare_survival(&a, &a).unwrap();
        assert_eq!(r.max_abs, 0.0);
        assert_eq!(r.rms, 0.0);
    }

    #[test]
    fn locates_the_largest_gap() {
        let r = compare_survival(&s(&[1.0, 0.8, 0.5]), &s(&[1.0, 0.7, 0.45])).unwrap();
        assert!((r.max_abs - 0.1).abs() < 1e-15);
        assert_eq!(r.at_time, 1.0);
    }

    #[test]
    fn grid_mismatch() {
        assert!(compare_survival(&s(&[1.0, 0.8]), &s(&[1.0, 0.8, 0.5])).is_err());
    }
}
