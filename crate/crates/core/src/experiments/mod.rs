//! Drivers that compare computed sums with explicit bounds and exact
//! identities.

pub mod bounds;
pub mod control;
pub mod mordell;
pub mod sweep;
pub mod variance;

pub use bounds::{hooley_cor_bound, mainres_bound, Bound};
pub use control::{square_phase_control, ControlResult};
pub use mordell::{mordell_experiment, MordellResult};
pub use sweep::{cor_catalog, cor_catalog_sweep, sweep_short_sums, BoundSpec, CenterSpec, SpecSummary, SumReport, SumRow};
pub use variance::{covariance_experiment, variance_experiment, CovarianceResult, VarianceResult};
