//! Analytic decoherence of a single damped bosonic mode.
//!
//! A field mode prepared in a Fock-diagonal state and coupled to a thermal
//! reservoir relaxes to the reservoir's thermal state. Everything about that
//! relaxation is computable in closed form: the photon-number distribution at
//! any time, the s-ordered quasiprobability densities with their negativity
//! thresholds, and three distance-type non-Gaussianity measures evaluated
//! along the trajectory.
//!
//! Module layout:
//!
//! - [`specfun`] — terminating hypergeometric sums, Laguerre/Legendre
//!   recurrences, and the summation identities the closed forms rest on.
//! - [`states`] — Fock-diagonal states (thermal, photon-added thermal) with
//!   tail-mass-audited truncation.
//! - [`measures`] — Hilbert-Schmidt, relative-entropy, and fidelity-based
//!   non-Gaussianity degrees for Fock-diagonal states.
//! - [`dynamics`] — damping under the quantum optical master equation:
//!   analytic solutions, threshold times, regime labels, entropy traces, and
//!   an independent RK4 oracle.
//! - [`quasiprob`] — s-ordered quasiprobability densities of damped states,
//!   negativity detection, and normalization checks.
//! - [`verify`] — self-check suites pitting every closed form against its
//!   brute-force oracle.
//!
//! All quantities are dimensionless except times, which carry units of
//! `1/gamma`; the numerics depend on the product `gamma * t` only.

pub mod dynamics;
pub mod measures;
pub mod quasiprob;
pub mod specfun;
pub mod states;
pub mod verify;

mod textfmt;

pub use textfmt::sig12;
