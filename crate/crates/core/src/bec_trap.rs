//! Harmonic-trap condensate: chemical potential, Thomas-Fermi radii, the
//! resonance shell and the out-coupling rate Γ(δ) = ζ(δ) Ω_R².

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::hyperfine::constants::{A_SCATTER, HBAR, M_RB87};

/// Anchor of the calibrated chemical potential: μ_c/ħ = 2π × 2880 Hz at
/// N = 5e6 and trap frequencies 2π × (250, 250, 19) Hz.
pub const CALIBRATION_MU_OVER_HBAR: f64 = 2.0 * PI * 2880.0;
const CALIBRATION_N: f64 = 5e6;
const CALIBRATION_TRAP_HZ: [f64; 3] = [250.0, 250.0, 19.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapParams {
    /// Trap angular frequencies, rad/s.
    pub omega_x: f64,
    pub omega_y: f64,
    pub omega_z: f64,
    pub atom_number: u64,
}

impl TrapParams {
    pub fn new(omega_x: f64, omega_y: f64, omega_z: f64, atom_number: u64) -> Result<Self> {
        if atom_number == 0 {
            return Err(Error::NoAtoms);
        }
        Ok(Self {
            omega_x: require_positive("trap_fx", omega_x)?,
            omega_y: require_positive("trap_fy", omega_y)?,
            omega_z: require_positive("trap_fz", omega_z)?,
            atom_number,
        })
    }

    /// The N = 5e6, 2π × (250, 250, 19) Hz reference trap.
    pub fn reference() -> Self {
        let [fx, fy, fz] = CALIBRATION_TRAP_HZ;
        Self {
            omega_x: 2.0 * PI * fx,
            omega_y: 2.0 * PI * fy,
            omega_z: 2.0 * PI * fz,
            atom_number: CALIBRATION_N as u64,
        }
    }

    fn frequency_product(&self) -> f64 {
        self.omega_x * self.omega_y * self.omega_z
    }

    pub fn geometric_mean_frequency(&self) -> f64 {
        self.frequency_product().cbrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChemicalPotentialMode {
    /// `(N ω_x ω_y ω_z)^{2/5}` scaling pinned to the reference point.
    #[default]
    Calibrated,
    /// Standard Thomas-Fermi result with the Rb-87 scattering length.
    ThomasFermi,
}

impl fmt::Display for ChemicalPotentialMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Calibrated => "calibrated",
            Self::ThomasFermi => "thomas_fermi",
        })
    }
}

impl FromStr for ChemicalPotentialMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "calibrated" => Ok(Self::Calibrated),
            "thomas_fermi" => Ok(Self::ThomasFermi),
            other => Err(format!(
                "unknown mu_c_mode `{other}` (expected calibrated or thomas_fermi)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CondensateModel {
    /// μ_c, J.
    pub mu_c: f64,
    pub mode: ChemicalPotentialMode,
    /// (R_x, R_y, R_z), m.
    pub tf_radii: [f64; 3],
}

impl CondensateModel {
    pub fn new(trap: &TrapParams, mode: ChemicalPotentialMode) -> Self {
        let mu_c = chemical_potential(trap, mode);
        Self {
            mu_c,
            mode,
            tf_radii: tf_radii(trap, mu_c),
        }
    }
}

/// Chemical potential in joules.
pub fn chemical_potential(trap: &TrapParams, mode: ChemicalPotentialMode) -> f64 {
    let n = trap.atom_number as f64;
    match mode {
        ChemicalPotentialMode::Calibrated => {
            let reference = TrapParams::reference();
            let scale = (n * trap.frequency_product())
                / (CALIBRATION_N * reference.frequency_product());
            HBAR * CALIBRATION_MU_OVER_HBAR * scale.powf(0.4)
        }
        ChemicalPotentialMode::ThomasFermi => {
            let omega_bar = trap.geometric_mean_frequency();
            let a_ho = (HBAR / (M_RB87 * omega_bar)).sqrt();
            0.5 * HBAR * omega_bar * (15.0 * n * A_SCATTER / a_ho).powf(0.4)
        }
    }
}

/// Thomas-Fermi radii `R_i = sqrt(2 μ_c / (m ω_i²))`.
pub fn tf_radii(trap: &TrapParams, mu_c: f64) -> [f64; 3] {
    [trap.omega_x, trap.omega_y, trap.omega_z]
        .map(|w| (2.0 * mu_c / (M_RB87 * w * w)).sqrt())
}

/// ħδ/μ_c.
pub fn detuning_ratio(delta: f64, mu_c: f64) -> f64 {
    HBAR * delta / mu_c
}

/// Semi-axes `r_i = R_i sqrt(ħδ/μ_c)` of the resonant ellipsoid.
pub fn resonance_shell(delta: f64, mu_c: f64, radii: [f64; 3]) -> Result<[f64; 3]> {
    let x = detuning_ratio(delta, mu_c);
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DetuningOutsideCondensate { x });
    }
    let s = x.sqrt();
    Ok(radii.map(|r| r * s))
}

/// Whether δ falls inside `[0, μ_c/ħ]`, where the out-coupling channel exists.
pub fn in_resonance_window(delta: f64, mu_c: f64) -> bool {
    (0.0..=1.0).contains(&detuning_ratio(delta, mu_c))
}

fn zeta_unchecked(x: f64, mu_c: f64) -> f64 {
    let s = x.sqrt();
    15.0 * PI * HBAR / (8.0 * mu_c) * (s - s * s * s)
}

/// Spectral weight ζ(δ) in seconds; zero outside the condensate window.
pub fn zeta(delta: f64, mu_c: f64) -> f64 {
    let x = detuning_ratio(delta, mu_c);
    if (0.0..=1.0).contains(&x) {
        zeta_unchecked(x, mu_c)
    } else {
        0.0
    }
}

/// As [`zeta`] but requires `0 < ħδ/μ_c < 1`.
pub fn zeta_strict(delta: f64, mu_c: f64) -> Result<f64> {
    let x = detuning_ratio(delta, mu_c);
    if x > 0.0 && x < 1.0 {
        Ok(zeta_unchecked(x, mu_c))
    } else {
        Err(Error::DetuningOutsideCondensate { x })
    }
}

/// Γ(δ) = ζ(δ) Ω_R², s⁻¹.
pub fn transition_rate(delta: f64, mu_c: f64, rabi: f64) -> f64 {
    zeta(delta, mu_c) * rabi * rabi
}
