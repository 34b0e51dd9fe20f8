//! Lorentz harmonic maps into H^2: Cauchy data, frames, the loop-group
//! construction and an independent characteristic-grid solver.

pub mod abc;
pub mod curve;
pub mod dalembert;
pub mod frame;
pub mod oracle;

pub use abc::{abc_at, abc_from_data, gauge_shift, AbcCoefficients, AbcPoint, PotentialCoeffs};
pub use curve::{CauchyData1D, CurveSample, CurveSource, FnCurve, Provenance, TabulatedCurve};
pub use dalembert::{dalembert_solve, dalembert_solve_with, DalembertOptions, FactorPath, HarmonicSolution};
pub use frame::{adapted_frame, adapted_frame_at, frame_at_point, maurer_cartan_split};
pub use oracle::{characteristic_oracle, harmonicity_residual};
pub use crate::lie::integrate_potential;
