//! Flat `key = value` run configuration.
//!
//! Missing keys take the baseline values (1 MHz silicon cantilever, Q = 1e5,
//! 1e-16 kg, 50 mK, g₀ = 8 rad/s, 5e6 atoms in a 2π × (250, 250, 19) Hz trap,
//! ħδ/μ_c = 1/3). Unknown or repeated keys are rejected.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bec_trap::{chemical_potential, ChemicalPotentialMode, TrapParams};
use crate::cooling_model::{CouplingSource, HybridParams};
use crate::coupling::{MagneticTip, OscillatorParams};
use crate::error::Result;
use crate::hyperfine::constants::HBAR;
use crate::hyperfine::StaticField;

/// Fully resolved configuration. Field names are the config-file keys.
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub f_m_hz: f64,
    pub quality_Q: f64,
    pub m_eff_kg: f64,
    pub temperature_K: f64,
    /// Single-atom coupling in rad/s; `None` when a tip is configured.
    pub g0_rad_s: Option<f64>,
    pub tip_moment_A_m2: Option<f64>,
    pub tip_distance_m: Option<f64>,
    pub atom_number: u64,
    pub trap_fx_hz: f64,
    pub trap_fy_hz: f64,
    pub trap_fz_hz: f64,
    pub mu_c_mode: ChemicalPotentialMode,
    /// ħδ/μ_c.
    pub detuning_x: f64,
    /// `None` means auto-sized.
    pub n_max: Option<usize>,
    pub dt_s: Option<f64>,
    pub bias_field_T: Option<f64>,
    pub beta_m: Option<f64>,
    pub oracle_gamma_per_s: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            f_m_hz: 1e6,
            quality_Q: 1e5,
            m_eff_kg: 1e-16,
            temperature_K: 0.05,
            g0_rad_s: Some(8.0),
            tip_moment_A_m2: None,
            tip_distance_m: None,
            atom_number: 5_000_000,
            trap_fx_hz: 250.0,
            trap_fy_hz: 250.0,
            trap_fz_hz: 19.0,
            mu_c_mode: ChemicalPotentialMode::Calibrated,
            detuning_x: 1.0 / 3.0,
            n_max: None,
            dt_s: None,
            bias_field_T: None,
            beta_m: None,
            oracle_gamma_per_s: None,
        }
    }
}

fn parse_f64(key: &str, value: &str) -> std::result::Result<f64, String> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("`{key}`: expected a finite number, got `{value}`"))
}

fn parse_count(key: &str, value: &str) -> std::result::Result<u64, String> {
    let v = parse_f64(key, value)?;
    if v < 0.0 || v.fract() != 0.0 || v > u64::MAX as f64 {
        return Err(format!("`{key}`: expected a non-negative integer, got `{value}`"));
    }
    Ok(v as u64)
}

impl RunConfig {
    /// Parses the flat text format; `#` starts a comment.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut cfg = RunConfig::default();
        let mut seen: Vec<String> = Vec::new();
        let mut coupling_keys = (false, false);

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
            let key = key.trim();
            let value = value.trim();
            if seen.iter().any(|k| k == key) {
                return Err(format!("line {}: duplicate key `{key}`", lineno + 1));
            }
            seen.push(key.to_owned());

            match key {
                "f_m_hz" => cfg.f_m_hz = parse_f64(key, value)?,
                "quality_Q" => cfg.quality_Q = parse_f64(key, value)?,
                "m_eff_kg" => cfg.m_eff_kg = parse_f64(key, value)?,
                "temperature_K" => cfg.temperature_K = parse_f64(key, value)?,
                "g0_rad_s" => {
                    cfg.g0_rad_s = Some(parse_f64(key, value)?);
                    coupling_keys.0 = true;
                }
                "tip_moment_A_m2" => {
                    cfg.tip_moment_A_m2 = Some(parse_f64(key, value)?);
                    coupling_keys.1 = true;
                }
                "tip_distance_m" => {
                    cfg.tip_distance_m = Some(parse_f64(key, value)?);
                    coupling_keys.1 = true;
                }
                "atom_number" => cfg.atom_number = parse_count(key, value)?,
                "trap_fx_hz" => cfg.trap_fx_hz = parse_f64(key, value)?,
                "trap_fy_hz" => cfg.trap_fy_hz = parse_f64(key, value)?,
                "trap_fz_hz" => cfg.trap_fz_hz = parse_f64(key, value)?,
                "mu_c_mode" => cfg.mu_c_mode = value.parse()?,
                "detuning_x" => cfg.detuning_x = parse_f64(key, value)?,
                "n_max" => {
                    cfg.n_max = if value == "auto" {
                        None
                    } else {
                        Some(parse_count(key, value)? as usize)
                    }
                }
                "dt_s" => cfg.dt_s = Some(parse_f64(key, value)?),
                "bias_field_T" => cfg.bias_field_T = Some(parse_f64(key, value)?),
                "beta_m" => cfg.beta_m = Some(parse_f64(key, value)?),
                "oracle_gamma_per_s" => cfg.oracle_gamma_per_s = Some(parse_f64(key, value)?),
                other => return Err(format!("line {}: unknown key `{other}`", lineno + 1)),
            }
        }

        match coupling_keys {
            (true, true) => return Err("give either g0_rad_s or a tip, not both".into()),
            (false, true) => {
                if cfg.tip_moment_A_m2.is_none() || cfg.tip_distance_m.is_none() {
                    return Err("tip needs both tip_moment_A_m2 and tip_distance_m".into());
                }
                cfg.g0_rad_s = None;
            }
            _ => {}
        }
        Ok(cfg)
    }

    /// Single-line JSON of the resolved values, in declaration order.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serialises")
    }

    pub fn to_params(&self) -> Result<HybridParams> {
        let mut osc = OscillatorParams::new(
            2.0 * PI * self.f_m_hz,
            self.quality_Q,
            self.m_eff_kg,
            self.temperature_K,
        )?;
        if let Some(beta) = self.beta_m {
            osc = osc.with_amplitude(beta)?;
        }
        let trap = TrapParams::new(
            2.0 * PI * self.trap_fx_hz,
            2.0 * PI * self.trap_fy_hz,
            2.0 * PI * self.trap_fz_hz,
            self.atom_number,
        )?;
        let mu_c = chemical_potential(&trap, self.mu_c_mode);
        let coupling = match (self.tip_moment_A_m2, self.tip_distance_m, self.g0_rad_s) {
            (Some(moment), Some(d0), _) => CouplingSource::Tip(MagneticTip::new(moment, d0)?),
            (_, _, Some(g0)) => CouplingSource::SingleAtom(crate::error::require_non_negative("g0_rad_s", g0)?),
            _ => CouplingSource::SingleAtom(8.0),
        };
        let bias_field = self.bias_field_T.map(StaticField::new).transpose()?;
        Ok(HybridParams {
            osc,
            coupling,
            trap,
            mu_c,
            detuning_delta: self.detuning_x * mu_c / HBAR,
            bias_field,
        })
    }
}
