//! Steering detection for qudit–qubit states with mutually unbiased
//! measurements (MUMs) and general symmetric informationally complete
//! measurements (general SICs).
//!
//! ```
//! use mumsteer_core::{detect, munro_mems, CriterionId, MeasurementConfig, MU_MAX};
//!
//! let rho = munro_mems(0.69).unwrap();
//! let v = detect(&rho, CriterionId::Cor1H, MU_MAX, &MeasurementConfig::default()).unwrap();
//! assert!(v.detected);
//! ```

pub mod bases;
pub mod criteria;
pub mod error;
pub mod linalg;
pub mod measurements;
pub mod oracle;
pub mod report;
pub mod scan;
pub mod shotsim;
pub mod states;

pub use bases::{gellmann_basis, OperatorBasis};
pub use criteria::{
    detect, detect_corollary1, h_correlation, j_gsic, j_mum, threshold_gsic, threshold_mum,
    Criterion, CriterionId, Direction, MeasurementConfig, Orientation, SteeringVerdict, MU_MAX,
};
pub use error::{Error, Result};
pub use linalg::{DensityMatrix, Matrix, Subsystem, C64};
pub use measurements::{build_gsic, build_mums, GsicSet, MumSet, TChoice};
pub use oracle::{is_npt, OracleReport};
pub use scan::{
    find_boundary, run_sweep, Axis, BoundaryQuery, BoundaryResult, SweepRow, SweepSpec,
};
pub use shotsim::{estimate_j, verdict_with_confidence, Confidence, ShotConfig, ShotEstimate};
pub use states::{max_steerable_mixed, munro_mems, tau_state, werner_derivative, Family};
