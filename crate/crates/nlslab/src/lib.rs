//! Numerical laboratory for stable blow-up in the L2-critical nonlinear
//! Schrödinger equation `i u_t + Δu + |u|^{4/d} u = 0` in dimensions 1-12.
//!
//! The crate follows the pipeline of K. Yang, S. Roudenko and Y. Zhao,
//! "Blow-up dynamics and spectral property in the L2-critical nonlinear
//! Schrödinger equation in high dimensions":
//! Chebyshev collocation grids ([`grid`]), ground-state
//! profiles and their linearization potentials ([`ground_state`]), dynamic
//! rescaling of radial collapse ([`rescale`]), blow-up rate fitting against
//! correction-factor catalogues ([`fitting`]), the adiabatic reduced system
//! ([`reduced`]), and the spectral-property verification for the
//! linearized operators ([`spectral`]).

pub mod fitting;
pub mod golden;
pub mod grid;
pub mod ground_state;
pub mod reduced;
pub mod report;
pub mod rescale;
pub mod spectral;

pub mod book;
