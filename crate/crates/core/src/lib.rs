//! Coherent dynamics of laser-driven multilevel ladders.
//!
//! A ladder of levels `0..=N` coupled by neighbouring dipole transitions obeys,
//! in the rotating-wave approximation and dimensionless units,
//!
//! ```text
//! da_n/dt = i [ f_{n+1} e^{-i eps_{n+1} t} a_{n+1} + f_n e^{+i eps_n t} a_{n-1} ],   a_n(0) = delta_{n,0}
//! ```
//!
//! When `f_n` and `eps_n` coincide with the three-term recurrence of an
//! orthonormal polynomial sequence, the amplitudes are Fourier transforms of
//! `sigma(x) p_0 p_n(x)`. This crate provides:
//!
//! * [`polynomials`]: Hermite, Charlier and Kravchuk sequences in orthonormal
//!   recurrence form, Gauss quadrature, orthonormality diagnostics.
//! * [`systems`]: the ladder model and its construction from a family.
//! * [`closed_form`]: exact amplitudes and populations (Poisson, binomial,
//!   two-level) and the Poisson limit of the Kravchuk oscillator.
//! * [`spectral`]: the general Fourier-sum/integral solution.
//! * [`oracle`]: adaptive Runge-Kutta integration of the equations above,
//!   sharing no code with the polynomial machinery.
//! * [`observables`]: norm, mean quanta, distribution fits, period detection.

pub mod closed_form;
pub mod error;
pub mod observables;
pub mod oracle;
pub mod polynomials;
pub mod special;
pub mod spectral;
pub mod systems;
pub mod trajectory;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use polynomials::PolynomialFamily;
pub use systems::{KravchukParameters, MultilevelSystem};
pub use trajectory::{AmplitudeTrajectory, DistributionKind, PopulationDistribution, Provenance};
