//! Magneto-mechanical coupling chain: tip gradient, oscillator amplitudes,
//! single-atom and collective couplings, Rabi drive and interaction time.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::cooling_model::{thermal_phonon_number, HybridParams};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::hyperfine::constants::{HBAR, K_B, MU_0, MU_B};
use crate::hyperfine::StaticField;

const SQRT_8: f64 = 2.0 * SQRT_2;

/// Point-dipole magnet on the oscillator tip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagneticTip {
    /// |μ_m|, A·m².
    pub moment: f64,
    /// Trap centre to tip along y, m.
    pub distance_d0: f64,
}

impl MagneticTip {
    pub fn new(moment: f64, distance_d0: f64) -> Result<Self> {
        Ok(Self {
            moment: require_positive("tip_moment_A_m2", moment)?,
            distance_d0: require_positive("tip_distance_m", distance_d0)?,
        })
    }
}

/// The flexural mode being cooled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    /// ω_m, rad/s.
    pub omega_m: f64,
    pub quality_q: f64,
    /// Effective mass, kg.
    pub m_eff: f64,
    /// Bath temperature before cooling, K.
    pub temperature: f64,
    /// φ_m; carried for completeness, unused by steady-state results.
    pub phase_phi_m: f64,
    /// Driven amplitude β, m; only enters the β ≪ d₀ check.
    pub amplitude_beta: Option<f64>,
}

impl OscillatorParams {
    pub fn new(omega_m: f64, quality_q: f64, m_eff: f64, temperature: f64) -> Result<Self> {
        Ok(Self {
            omega_m: require_positive("omega_m", omega_m)?,
            quality_q: require_positive("quality_Q", quality_q)?,
            m_eff: require_positive("m_eff_kg", m_eff)?,
            temperature: require_non_negative("temperature_K", temperature)?,
            phase_phi_m: 0.0,
            amplitude_beta: None,
        })
    }

    pub fn with_amplitude(mut self, beta: f64) -> Result<Self> {
        self.amplitude_beta = Some(require_non_negative("beta_m", beta)?);
        Ok(self)
    }
}

/// Every intermediate quantity between the tip and the interaction time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingChain {
    /// G_m, T/m.
    pub gradient: f64,
    /// Zero-point amplitude, m.
    pub a_qm: f64,
    /// Thermal amplitude driving the Rabi oscillation, m.
    pub amplitude: f64,
    /// Single-atom coupling, rad/s.
    pub g0: f64,
    /// Collective coupling g0·√N, rad/s.
    pub g_n: f64,
    /// Ω_R, rad/s.
    pub rabi: f64,
    /// Half a Rabi period, s.
    pub tau: f64,
}

impl CouplingChain {
    pub fn new(gradient: f64, osc: &OscillatorParams, atom_number: u64) -> Result<Self> {
        let a_qm = zero_point_amplitude(osc);
        let amplitude = thermal_amplitude(osc);
        let g0 = single_atom_coupling(gradient, a_qm);
        let rabi = rabi_frequency(gradient, amplitude);
        Ok(Self {
            gradient,
            a_qm,
            amplitude,
            g0,
            g_n: collective_coupling(g0, atom_number)?,
            rabi,
            tau: interaction_time(rabi)?,
        })
    }
}

/// G_m = 3 μ₀ |μ_m| / (4π d₀⁴).
pub fn dipole_gradient(tip: &MagneticTip) -> f64 {
    3.0 * MU_0 * tip.moment / (4.0 * PI * tip.distance_d0.powi(4))
}

/// a_qm = sqrt(ħ / (2 m_eff ω_m)).
pub fn zero_point_amplitude(osc: &OscillatorParams) -> f64 {
    (HBAR / (2.0 * osc.m_eff * osc.omega_m)).sqrt()
}

/// g₀ = μ_B G a / (√8 ħ), rad/s.
pub fn single_atom_coupling(gradient: f64, a_qm: f64) -> f64 {
    MU_B * gradient * a_qm / (SQRT_8 * HBAR)
}

/// Inverse of [`single_atom_coupling`] for a fixed zero-point amplitude.
pub fn gradient_for_coupling(g0: f64, a_qm: f64) -> f64 {
    g0 * SQRT_8 * HBAR / (MU_B * a_qm)
}

/// g_N = g₀ √N.
pub fn collective_coupling(g0: f64, atom_number: u64) -> Result<f64> {
    if atom_number == 0 {
        return Err(Error::NoAtoms);
    }
    Ok(g0 * (atom_number as f64).sqrt())
}

/// Thermal amplitude `2 a_qm sqrt(n_th)`, floored at `a_qm` as n_th → 0.
pub fn thermal_amplitude(osc: &OscillatorParams) -> f64 {
    let a_qm = zero_point_amplitude(osc);
    let n_th = thermal_phonon_number(osc.omega_m, osc.temperature);
    (2.0 * a_qm * n_th.sqrt()).max(a_qm)
}

/// Classical rms displacement `sqrt(k_B T / (m ω²))`, for comparison only.
pub fn thermal_rms_amplitude(osc: &OscillatorParams) -> f64 {
    (K_B * osc.temperature / (osc.m_eff * osc.omega_m * osc.omega_m)).sqrt()
}

/// Ω_R = μ_B G amplitude / (√8 ħ).
pub fn rabi_frequency(gradient: f64, amplitude: f64) -> f64 {
    MU_B * gradient * amplitude / (SQRT_8 * HBAR)
}

/// τ = π / Ω_R.
pub fn interaction_time(rabi: f64) -> Result<f64> {
    if rabi > 0.0 && rabi.is_finite() {
        Ok(PI / rabi)
    } else {
        Err(Error::ZeroRabi)
    }
}

/// One regime-of-validity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityCheck {
    pub name: String,
    /// `None` when the check does not apply (e.g. no tip geometry given).
    pub ratio: Option<f64>,
    pub threshold: f64,
    pub pass: bool,
}

impl ValidityCheck {
    fn below(name: &str, ratio: Option<f64>, threshold: f64) -> Self {
        Self {
            name: name.to_owned(),
            ratio,
            threshold,
            pass: ratio.is_none_or(|r| r < threshold),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    /// g₀τ/2 < 1 (small rotation per atom).
    pub coupling_angle: ValidityCheck,
    /// β/d₀ < 0.01 (linear field about the trap centre).
    pub amplitude_over_distance: ValidityCheck,
    /// B/B_hf < 0.1 (weak-field Larmor formula).
    pub weak_field: ValidityCheck,
}

impl ValidityReport {
    pub fn evaluate(
        g0: f64,
        tau: f64,
        beta: Option<f64>,
        distance_d0: Option<f64>,
        field: StaticField,
    ) -> Self {
        let beta_ratio = match (beta, distance_d0) {
            (Some(b), Some(d)) => Some(b / d),
            _ => None,
        };
        Self {
            coupling_angle: ValidityCheck::below("g0_tau_over_2", Some(0.5 * g0 * tau), 1.0),
            amplitude_over_distance: ValidityCheck::below("beta_over_d0", beta_ratio, 0.01),
            weak_field: ValidityCheck::below("b_over_b_hf", Some(field.reduced()), 0.1),
        }
    }

    pub fn checks(&self) -> [&ValidityCheck; 3] {
        [&self.coupling_angle, &self.amplitude_over_distance, &self.weak_field]
    }

    pub fn all_pass(&self) -> bool {
        self.checks().iter().all(|c| c.pass)
    }
}

/// Regime checks for a full parameter set. β defaults to the thermal amplitude.
pub fn validity_report(params: &HybridParams) -> Result<ValidityReport> {
    let chain = params.coupling_chain()?;
    let beta = params.osc.amplitude_beta.or(Some(chain.amplitude));
    let d0 = params.tip().map(|t| t.distance_d0);
    Ok(ValidityReport::evaluate(
        chain.g0,
        chain.tau,
        beta,
        d0,
        params.bias_field()?,
    ))
}
