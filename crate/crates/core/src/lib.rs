//! Desk-scale engine for a symmetrization-free three-party quantum digital
//! signature protocol with non-orthogonal (SARG04-style) encoding and
//! three-intensity decoy states.
//!
//! The crate is split along the protocol's natural seams:
//!
//! * [`domain`] — polarization states, encoding sets, key symbols, protocol
//!   parameters, channel description, and observed count tables.
//! * [`channel`] — transmittance and exact per-pulse outcome distributions for
//!   a threshold-detector receiver, plus analytic expected counts.
//! * [`protocol`] — seeded Monte Carlo execution of key generation, sifting,
//!   post-matching, key translation, estimation and messaging.
//! * [`bounds`] — finite-size concentration toolbox (variant Chernoff bounds
//!   and a sampling-without-replacement tail).
//! * [`security`] — decoy-state estimation of single-photon-pair quantities
//!   and the forging / repudiation / robustness failure probabilities.
//! * [`optimize`] — minimum-pulse-count search, parameter optimization and
//!   distance sweeps for both the post-matched protocol and the
//!   coincidence-detection baseline.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the CLI
//! live in the companion `qds-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod channel;
pub mod domain;
pub(crate) mod math;
pub mod optimize;
pub mod protocol;
pub mod security;
