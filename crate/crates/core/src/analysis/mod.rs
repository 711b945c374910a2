//! Survival-curve analysis: short-time onset fits, exponential decay-rate
//! fits and exact pointwise comparison of curves.

mod compare;
mod fit;
mod series;

pub use compare::{compare_survival, ComparisonReport};
pub use fit::{
    fit_exponential, fit_short_time, FitQuality, FitReport, DEFICIT_FLOOR,
    EXPONENTIAL_RESIDUAL_TOL, QUADRATIC_EXPONENT_TOL, SURVIVAL_FLOOR,
};
pub use series::{SeriesMeta, SurvivalSeries, INGEST_TOL};
