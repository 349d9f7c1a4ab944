//! Steady-state cooling of a mechanical oscillator's flexural mode by
//! out-coupling magnetically trapped Rb-87 condensate atoms.
//!
//! The crate follows the cooling chain from atomic structure to phonon
//! number:
//!
//! * [`hyperfine`]: Rb-87 Zeeman levels, Landé factors, Larmor frequency.
//! * [`coupling`]: tip gradient, zero-point and thermal amplitudes, g₀, g_N,
//!   Rabi frequency and interaction time.
//! * [`bec_trap`]: chemical potential, Thomas-Fermi radii, ζ(δ) and Γ(δ).
//! * [`cooling_model`]: closed-form steady-state phonon number and the
//!   derived optimum, threshold temperature and (Q, ω) rescaling.
//! * [`lindblad_oracle`]: exact truncated-Fock master-equation solver used to
//!   check the closed form.
//! * [`cli`]: the `flexcool` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bec_trap;
pub mod cli;
pub mod cooling_model;
pub mod coupling;
pub mod error;
pub mod hyperfine;
pub mod lindblad_oracle;

pub use error::{Error, Result};
