//! Rb-87 ground-state hyperfine levels in a static bias field.
//!
//! Energies follow the two-manifold Breit-Rabi form
//! `E = (-1)^F (A_hf h / 2) sqrt(1 + mF b + b²)` with `b = B / B_hf`, the zero
//! of energy sitting midway between the zero-field F = 1 and F = 2 levels.
//! All angular frequencies are rad/s.

pub mod constants;

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, Error, Result};
use constants::{A_HF, B_HF, G_J, H, HBAR, I_NUC, J_ELEC, MU_B};

/// Landé factor of the hyperfine manifold `F` (nuclear g-factor neglected).
pub fn lande_gf(f: i32) -> Result<f64> {
    if !(f == 1 || f == 2) {
        return Err(Error::InvalidState { f, m_f: 0 });
    }
    let f = f as f64;
    let jj = J_ELEC * (J_ELEC + 1.0);
    let ii = I_NUC * (I_NUC + 1.0);
    Ok(G_J * (f * (f + 1.0) + jj - ii) / (2.0 * f * (f + 1.0)))
}

/// `|g_F|` of the F = 1 manifold, which sets the |1,-1> ↔ |1,0> splitting.
pub fn lower_manifold_gf_abs() -> f64 {
    // F = 1 is always valid.
    lande_gf(1).map(f64::abs).unwrap_or(G_J / 4.0)
}

/// A ground-state hyperfine sublevel `|F, mF>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HyperfineState {
    f: i32,
    m_f: i32,
}

impl HyperfineState {
    /// The trapped "liquid" state |1,-1>.
    pub const LIQUID: HyperfineState = HyperfineState { f: 1, m_f: -1 };
    /// The untrapped "vapor" state |1,0>.
    pub const VAPOR: HyperfineState = HyperfineState { f: 1, m_f: 0 };

    pub fn new(f: i32, m_f: i32) -> Result<Self> {
        if (f == 1 || f == 2) && m_f.abs() <= f {
            Ok(Self { f, m_f })
        } else {
            Err(Error::InvalidState { f, m_f })
        }
    }

    pub fn f(&self) -> i32 {
        self.f
    }

    pub fn m_f(&self) -> i32 {
        self.m_f
    }

    /// Low-field seekers held by a pure magnetic trap: |2,2>, |2,1>, |2,0>, |1,-1>.
    pub fn is_trappable(&self) -> bool {
        matches!((self.f, self.m_f), (2, 2) | (2, 1) | (2, 0) | (1, -1))
    }

    /// All eight sublevels, F = 2 first, mF descending.
    pub fn all() -> [HyperfineState; 8] {
        [(2, 2), (2, 1), (2, 0), (2, -1), (2, -2), (1, 1), (1, 0), (1, -1)]
            .map(|(f, m_f)| HyperfineState { f, m_f })
    }

    /// Short label like `2_m1` for |2,-1>.
    pub fn label(&self) -> String {
        if self.m_f < 0 {
            format!("{}_m{}", self.f, -self.m_f)
        } else {
            format!("{}_{}", self.f, self.m_f)
        }
    }
}

/// Magnitude of the static bias field along z, in tesla.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct StaticField(f64);

impl StaticField {
    pub fn new(tesla: f64) -> Result<Self> {
        require_non_negative("bias_field_T", tesla).map(Self)
    }

    pub fn tesla(&self) -> f64 {
        self.0
    }

    /// `B / B_hf`.
    pub fn reduced(&self) -> f64 {
        self.0 / B_HF
    }

    /// Weak-field regime, taken as `B < 0.1 B_hf`.
    pub fn is_weak(&self) -> bool {
        self.reduced() < 0.1
    }
}

/// Zeeman-shifted energy of `state` in joules.
pub fn zeeman_energy(state: HyperfineState, field: StaticField) -> Result<f64> {
    let b = field.reduced();
    let radicand = 1.0 + state.m_f as f64 * b + b * b;
    if radicand < 0.0 {
        return Err(Error::NegativeRadicand(radicand));
    }
    let sign = if state.f % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * 0.5 * A_HF * H * radicand.sqrt())
}

/// First-order Larmor frequency `μ_B |g_F| B / ħ` of the liquid↔vapor transition.
pub fn larmor_frequency(field: StaticField) -> f64 {
    MU_B * lower_manifold_gf_abs() * field.tesla() / HBAR
}

/// Bias field that puts the first-order Larmor frequency at `omega_l`.
pub fn field_for_larmor(omega_l: f64) -> Result<StaticField> {
    require_non_negative("omega_L", omega_l)?;
    StaticField::new(HBAR * omega_l / (MU_B * lower_manifold_gf_abs()))
}

/// `(E_|1,-1> - E_|1,0>) / ħ` from the full level formula.
pub fn exact_transition_frequency(field: StaticField) -> f64 {
    let b = field.reduced();
    // sqrt(1 + b²) - sqrt(1 - b + b²), rationalised to avoid cancellation at small b.
    let upper = (1.0 + b * b).sqrt();
    let lower = (1.0 - b + b * b).sqrt();
    0.5 * A_HF * H * b / (upper + lower) / HBAR
}
