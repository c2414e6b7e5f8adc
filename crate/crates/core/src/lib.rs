//! Numerics for the triple-zero solution of the first Painlevé equation.
//!
//! The crate computes the transcendent in each of its three real
//! normalisations and checks the inequalities it is known to satisfy:
//! finite-time blow-up bounds in the `s'' = 6 s^2 + 6 t` form and the
//! oscillation about `sqrt(t)` in the `s'' = 6 t - 6 s^2` form.

pub mod blowup;
pub mod brent;
pub mod error;
pub mod format;
pub mod harness;
pub mod integrator;
pub mod oscillation;
pub mod quadrature;
pub mod series;

pub use error::{Error, Result};
pub use integrator::{integrate, IntegratorConfig, State, Termination, Trajectory};
pub use series::{convert_form, taylor_coefficients, EquationForm, Point, SeriesExpansion};
pub use harness::{verify, CheckStatus, VerificationReport, VerifyConfig};
