//! Local quantum Fisher information (LQFI) and local quantum uncertainty (LQU)
//! for two-qubit X states, with closed forms for the thermal state of the
//! Heisenberg XYZ model with Dzyaloshinsky–Moriya and KSEA couplings in
//! inhomogeneous fields.
//!
//! Everything is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); `f64` aliases are provided at the crate root.
//!
//! ```
//! use qxcorr_core::{thermal_correlations, XStateParams};
//!
//! let p = XStateParams::new(-1.0, 0.5, 1.0, -0.4, 0.7, 1e-3).unwrap();
//! let (lqfi, lqu) = thermal_correlations(&p).unwrap();
//! assert!((lqfi.value - 0.735294).abs() < 1e-4);
//! assert!(lqu.value <= lqfi.value);
//! ```

// Dense index loops read better for 3×3/4×4 matrix code; negated comparisons
// are used on purpose so that NaN fails validation.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod correlations;
pub mod error;
pub mod limits;
pub mod linalg;
pub mod oracle;
pub mod scalar;
pub mod xalgebra;
pub mod xmodel;

pub use analysis::{
    bell_diagonal_boundary, find_transitions, reflect_across_boundary, sweep, BellDiagonalReport, BoundaryRegion,
    SweepVariable,
};
pub use correlations::{
    lqfi_thermal, lqfi_x, lqu_thermal, lqu_x, m_eigenvalues, thermal_correlations, w_eigenvalues, ActiveBranch,
    Measure,
};
pub use error::{Error, Result};
pub use limits::{high_t_series, zero_t_limit, Branch};
pub use oracle::{minimize_over_observables, oracle_m_matrix, oracle_measure, oracle_w_matrix, random_xstate};
pub use scalar::Real;
pub use xalgebra::{spectrum, Axis};
pub use xmodel::dephase;

pub type HamiltonianParams = xmodel::HamiltonianParams<f64>;
pub type XStateParams = xmodel::XStateParams<f64>;
pub type XMatrix = xmodel::XMatrix<f64>;
pub type DerivedRadii = xmodel::DerivedRadii<f64>;
pub type XSpectrum = xalgebra::XSpectrum<f64>;
pub type MEigenvalues = correlations::MEigenvalues<f64>;
pub type WEigenvalues = correlations::WEigenvalues<f64>;
pub type BranchPair = correlations::BranchPair<f64>;
pub type SeriesValue = limits::SeriesValue<f64>;
pub type ZeroTemperatureLimit = limits::ZeroTemperatureLimit<f64>;
pub type GenericDensityMatrix = oracle::GenericDensityMatrix<f64>;
pub type LocalObservable = oracle::LocalObservable<f64>;
pub type ObservableMinimum = oracle::ObservableMinimum<f64>;
pub type SweepSpec = analysis::SweepSpec<f64>;
pub type SweepRow = analysis::SweepRow<f64>;
pub type TransitionPoint = analysis::TransitionPoint<f64>;
