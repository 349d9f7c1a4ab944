//! Closed-form steady state of the cooled mode.
//!
//! The mean phonon number after cooling is `n_th / (1 + C)` with the cooling
//! factor
//!
//! ```text
//! C = (π μ_B / 8ħ)² N ζ(δ) (G_m a_qm)² Q/ω_m  =  g_N² τ² Γ / (8κ)
//! ```
//!
//! The two forms are algebraically identical because Ω_R cancels between
//! Γ = ζ Ω_R² and τ = π/Ω_R. Both are computed so they can be checked
//! against each other.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bec_trap::{detuning_ratio, transition_rate, zeta_strict, TrapParams};
use crate::coupling::{
    dipole_gradient, gradient_for_coupling, validity_report, zero_point_amplitude,
    CouplingChain, MagneticTip, OscillatorParams, ValidityReport,
};
use crate::error::{require_positive, Error, Result};
use crate::hyperfine::constants::{H, HBAR, K_B, MU_B};
use crate::hyperfine::{field_for_larmor, StaticField};

/// Where the single-atom coupling comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingSource {
    /// Derive G_m from a point-dipole tip.
    Tip(MagneticTip),
    /// Fixed field gradient G_m, T/m.
    Gradient(f64),
    /// Fixed g₀ in rad/s at the oscillator's own a_qm.
    SingleAtom(f64),
}

/// Complete input to the steady-state solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HybridParams {
    pub osc: OscillatorParams,
    pub coupling: CouplingSource,
    pub trap: TrapParams,
    /// Chemical potential, J.
    pub mu_c: f64,
    /// δ = ω_m − ω_L, rad/s.
    pub detuning_delta: f64,
    /// Overrides the resonance-implied bias field in validity checks.
    pub bias_field: Option<StaticField>,
}

impl HybridParams {
    pub fn gradient(&self) -> f64 {
        match self.coupling {
            CouplingSource::Tip(tip) => dipole_gradient(&tip),
            CouplingSource::Gradient(g) => g,
            CouplingSource::SingleAtom(g0) => gradient_for_coupling(g0, zero_point_amplitude(&self.osc)),
        }
    }

    pub fn tip(&self) -> Option<&MagneticTip> {
        match &self.coupling {
            CouplingSource::Tip(tip) => Some(tip),
            _ => None,
        }
    }

    pub fn coupling_chain(&self) -> Result<CouplingChain> {
        CouplingChain::new(self.gradient(), &self.osc, self.trap.atom_number)
    }

    /// ħδ/μ_c.
    pub fn detuning_ratio(&self) -> f64 {
        detuning_ratio(self.detuning_delta, self.mu_c)
    }

    /// ω_L = ω_m − δ, rad/s.
    pub fn implied_larmor(&self) -> f64 {
        self.osc.omega_m - self.detuning_delta
    }

    /// Bias field putting ω_L at ω_m − δ.
    pub fn implied_bias_field(&self) -> Result<StaticField> {
        let omega_l = self.implied_larmor();
        if omega_l <= 0.0 {
            return Err(Error::NonPositiveLarmor { omega_l });
        }
        field_for_larmor(omega_l)
    }

    /// The override if present, otherwise the resonance-implied field.
    pub fn bias_field(&self) -> Result<StaticField> {
        match self.bias_field {
            Some(b) => Ok(b),
            None => self.implied_bias_field(),
        }
    }

    /// Copy with a new bath temperature.
    pub fn with_temperature(&self, temperature: f64) -> Self {
        let mut p = *self;
        p.osc.temperature = temperature;
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadyStateResult {
    pub n_th: f64,
    pub n_steady: f64,
    /// C in `n_steady = n_th / (1 + C)`, from the direct formula.
    pub cooling_factor: f64,
    /// C from g_N² τ² Γ / (8κ).
    pub cooling_factor_chain: f64,
    pub kappa: f64,
    pub g0: f64,
    pub g_n: f64,
    pub rabi: f64,
    pub tau: f64,
    pub gamma: f64,
    pub zeta: f64,
    pub detuning_ratio: f64,
    pub a_qm: f64,
    pub thermal_amplitude: f64,
    pub gradient: f64,
    pub implied_bias_field_t: f64,
    pub validity: ValidityReport,
}

/// Bose occupancy `1/(exp(ħω/k_B T) − 1)`; zero at T = 0.
pub fn thermal_phonon_number(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / (HBAR * omega / (K_B * temperature)).exp_m1()
}

/// κ = ω/Q.
pub fn decay_rate(omega: f64, quality_q: f64) -> f64 {
    omega / quality_q
}

/// `n_th / (1 + g² τ² Γ / (8κ))`; pass g₀ for one atom or g_N for the ensemble.
pub fn steady_phonon_basic(n_th: f64, g: f64, tau: f64, gamma: f64, kappa: f64) -> Result<f64> {
    if !(kappa > 0.0) {
        return Err(Error::ZeroDecayRate);
    }
    Ok(n_th / (1.0 + g * g * tau * tau * gamma / (8.0 * kappa)))
}

/// Cooling factor from the closed form in N, ζ, G_m a_qm and Q/ω.
pub fn cooling_factor_direct(params: &HybridParams) -> Result<f64> {
    let zeta = zeta_strict(params.detuning_delta, params.mu_c)?;
    let a_qm = zero_point_amplitude(&params.osc);
    let ga = params.gradient() * a_qm;
    let prefactor = PI * MU_B / (8.0 * HBAR);
    Ok(prefactor * prefactor
        * params.trap.atom_number as f64
        * zeta
        * ga
        * ga
        * params.osc.quality_q
        / params.osc.omega_m)
}

/// Cooling factor assembled from g_N, τ, Γ and κ.
pub fn cooling_factor_chain(params: &HybridParams) -> Result<f64> {
    zeta_strict(params.detuning_delta, params.mu_c)?;
    let chain = params.coupling_chain()?;
    let gamma = transition_rate(params.detuning_delta, params.mu_c, chain.rabi);
    let kappa = decay_rate(params.osc.omega_m, params.osc.quality_q);
    Ok(chain.g_n * chain.g_n * chain.tau * chain.tau * gamma / (8.0 * kappa))
}

/// Full steady-state evaluation with every intermediate quantity.
pub fn steady_phonon_full(params: &HybridParams) -> Result<SteadyStateResult> {
    let zeta = zeta_strict(params.detuning_delta, params.mu_c)?;
    let field = params.implied_bias_field()?;
    let chain = params.coupling_chain()?;
    let n_th = thermal_phonon_number(params.osc.omega_m, params.osc.temperature);
    let kappa = decay_rate(params.osc.omega_m, params.osc.quality_q);
    let gamma = transition_rate(params.detuning_delta, params.mu_c, chain.rabi);
    let cooling_factor = cooling_factor_direct(params)?;
    let cooling_factor_chain = chain.g_n * chain.g_n * chain.tau * chain.tau * gamma / (8.0 * kappa);
    Ok(SteadyStateResult {
        n_th,
        n_steady: n_th / (1.0 + cooling_factor),
        cooling_factor,
        cooling_factor_chain,
        kappa,
        g0: chain.g0,
        g_n: chain.g_n,
        rabi: chain.rabi,
        tau: chain.tau,
        gamma,
        zeta,
        detuning_ratio: params.detuning_ratio(),
        a_qm: chain.a_qm,
        thermal_amplitude: chain.amplitude,
        gradient: chain.gradient,
        implied_bias_field_t: field.tesla(),
        validity: validity_report(params)?,
    })
}

/// δ* = μ_c / (3ħ), where ζ and hence the cooling factor peak.
pub fn optimal_detuning(mu_c: f64) -> f64 {
    mu_c / (3.0 * HBAR)
}

/// Golden-section search for the x = ħδ/μ_c minimising ⟨n⟩ₛ on `[x_lo, x_hi]`.
///
/// Returns `(x, n_steady)`. Both ends must lie strictly inside (0, 1).
pub fn minimize_detuning(params: &HybridParams, x_lo: f64, x_hi: f64) -> Result<(f64, f64)> {
    if !(x_lo > 0.0 && x_lo < x_hi && x_hi < 1.0) {
        return Err(Error::InvalidParameter {
            name: "detuning_x",
            value: x_lo,
            reason: "need 0 < x_lo < x_hi < 1",
        });
    }
    let n_at = |x: f64| -> Result<f64> {
        let mut p = *params;
        p.detuning_delta = x * params.mu_c / HBAR;
        let cooling = cooling_factor_direct(&p)?;
        Ok(thermal_phonon_number(p.osc.omega_m, p.osc.temperature) / (1.0 + cooling))
    };
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let (mut a, mut b) = (x_lo, x_hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (n_at(c)?, n_at(d)?);
    for _ in 0..200 {
        if b - a <= 1e-12 {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = n_at(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = n_at(d)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, n_at(x)?))
}

/// Highest bath temperature for which the steady state has ⟨n⟩ < 1.
///
/// The temperature in `params` is ignored. Solved by bisection; the cooling
/// factor does not depend on T, so ⟨n⟩(T) is monotone and the root unique.
pub fn ground_state_threshold_temperature(params: &HybridParams) -> Result<f64> {
    let cooling = cooling_factor_direct(params)?;
    if !(cooling > 0.0) {
        return Err(Error::NoCoolingChannel);
    }
    let omega = params.osc.omega_m;
    let excess = |t: f64| thermal_phonon_number(omega, t) / (1.0 + cooling) - 1.0;

    let mut lo = 0.0;
    let mut hi = HBAR * omega / K_B;
    while excess(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QfCriterion {
    /// Q·f, Hz.
    pub product: f64,
    /// k_B T / h, Hz.
    pub bound: f64,
    pub pass: bool,
}

/// Quantum-coherence figure of merit `Q·f > k_B T / h` (strict).
pub fn qf_quantum_criterion(omega: f64, quality_q: f64, temperature: f64) -> QfCriterion {
    let product = quality_q * omega / (2.0 * PI);
    let bound = K_B * temperature / H;
    QfCriterion {
        product,
        bound,
        pass: product > bound,
    }
}

/// Moves the oscillator to a new (ω, Q) keeping m_eff, G_m, N, μ_c and δ fixed.
///
/// a_qm and hence g₀ follow ω; κ and n_th are recomputed by the solvers.
pub fn rescale_oscillator(params: &HybridParams, omega_new: f64, q_new: f64) -> Result<HybridParams> {
    require_positive("omega_m", omega_new)?;
    require_positive("quality_Q", q_new)?;
    let coupling = match params.coupling {
        CouplingSource::SingleAtom(_) => CouplingSource::Gradient(params.gradient()),
        other => other,
    };
    let mut out = *params;
    out.coupling = coupling;
    out.osc.omega_m = omega_new;
    out.osc.quality_q = q_new;
    Ok(out)
}

/// The reference parameter set: 1 MHz, Q = 1e5, 1e-16 kg, 50 mK,
/// g₀ = 8 rad/s, N = 5e6, calibrated μ_c, ħδ/μ_c = 1/3.
pub fn baseline_params() -> HybridParams {
    let osc = OscillatorParams {
        omega_m: 2.0 * PI * 1e6,
        quality_q: 1e5,
        m_eff: 1e-16,
        temperature: 0.05,
        phase_phi_m: 0.0,
        amplitude_beta: None,
    };
    let trap = TrapParams::reference();
    let mu_c = HBAR * crate::bec_trap::CALIBRATION_MU_OVER_HBAR;
    HybridParams {
        osc,
        coupling: CouplingSource::SingleAtom(8.0),
        trap,
        mu_c,
        detuning_delta: optimal_detuning(mu_c),
        bias_field: None,
    }
}
