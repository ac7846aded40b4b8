//! Quantum input-output modeling of a single-port microwave network.
//!
//! A lumped LC resonator is capacitively coupled to a semi-infinite
//! transmission line. This crate builds that model end to end:
//!
//! - [`quantize_lc`]: classical normal modes and ladder operators of the LC
//!   oscillator, with exact c-number commutator algebra ([`operator`]).
//! - [`tline`]: discrete bosonic modes of the lossless line, traveling
//!   voltage/current/flux waves, and the continuum normalization.
//! - [`rosetta`]: conversions between voltage phasors, Pozar a/b waves, and
//!   bosonic mode amplitudes.
//! - [`openqsys`]: the Markov coupling strength κ, detuning Δ, and the
//!   single-port state-space model A = −(iΔ + κ²/2), B = −κ, C = κ, D = 1.
//! - [`response`]: the all-pass transfer function
//!   H(s) = (s − κ²/2 + iΔ)/(s + κ²/2 + iΔ), frequency sweeps, exact
//!   mean-path simulation, and seeded Euler-Maruyama trajectory ensembles.
//!
//! All quantities are SI; ħ is the CODATA value [`HBAR`] (operations that
//! build operators accept an explicit ħ so tests can work at ħ = 1).
//!
//! # Example
//!
//! ```
//! use num_complex::Complex64;
//! use qionss::openqsys::{build_state_space, markov_kappa, CouplingParams, ModelParams};
//! use qionss::response::{eval_tf, steady_state, transfer_function};
//!
//! // 5 GHz resonator, 1 fF coupler, 50-ohm line, driven at resonance
//! let omega_r = 2.0 * std::f64::consts::PI * 5e9;
//! let coupling = CouplingParams::new(1e-15, 50.0, 1e-12, omega_r, None)?;
//! let kappa = markov_kappa(&coupling); // ≈ 44.31 s^(−1/2)
//!
//! let ssm = build_state_space(&ModelParams::new(kappa, 0.0)?);
//! let tf = transfer_function(&ssm)?;
//!
//! // the lossless port reflects everything, flipping phase at resonance
//! let h0 = eval_tf(&tf, Complex64::new(0.0, 0.0))?;
//! assert!((h0.re + 1.0).abs() < 1e-12 && h0.im.abs() < 1e-12);
//!
//! let (_a_ss, b_out) = steady_state(&ssm, Complex64::new(1.0, 0.0))?;
//! assert!((b_out.re + 1.0).abs() < 1e-12);
//! # Ok::<(), qionss::Error>(())
//! ```

pub mod error;
pub mod openqsys;
pub mod operator;
pub mod quantize_lc;
pub mod response;
pub mod rosetta;
pub mod tline;

pub use error::{Error, Result};

/// Reduced Planck constant, CODATA 2018: 1.054571817e-34 J·s.
pub const HBAR: f64 = 1.054571817e-34;
