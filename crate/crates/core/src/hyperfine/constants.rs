//! SI physical constants (CODATA 2018) and Rb-87 ground-state data.

use std::f64::consts::PI;

/// Planck constant, J·s.
pub const H: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = H / (2.0 * PI);
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Bohr magneton, J/T.
pub const MU_B: f64 = 9.274_010_078_3e-24;
/// Vacuum permeability, T·m/A.
pub const MU_0: f64 = 1.256_637_062_12e-6;

/// Rb-87 atomic mass, kg.
pub const M_RB87: f64 = 1.443_16e-25;
/// Zero-field ground-state hyperfine splitting, Hz.
pub const A_HF: f64 = 6.835e9;
/// Electron-spin Landé factor of the 5²S₁/₂ ground state.
pub const G_J: f64 = 2.002_319;
/// Nuclear spin.
pub const I_NUC: f64 = 1.5;
/// Electronic angular momentum.
pub const J_ELEC: f64 = 0.5;
/// Hyperfine crossover field A_hf·h/(g_J·μ_B), T.
///
/// With g_J = 2 this is the familiar A_hf·h/(2μ_B) ≈ 0.244 T.
pub const B_HF: f64 = A_HF * H / (G_J * MU_B);
/// s-wave scattering length (≈100 Bohr radii), m.
pub const A_SCATTER: f64 = 5.29e-9;
