//! Truncated-Fock master-equation oracle for the cooled mode.
//!
//! Each out-coupled atom applies the resonant Jaynes-Cummings map for a time
//! τ and is then traced out; atoms arrive at rate Γ and the mode is coupled
//! to a thermal bath at rate κ. Starting from a diagonal density operator
//! both processes stay diagonal, so the dynamics reduce to a birth-death
//! chain on the populations p_n:
//!
//! ```text
//! dp_n/dt = Γ [s_{n+1} p_{n+1} − s_n p_n]
//!         + κ(n_th+1) [(n+1) p_{n+1} − n p_n]
//!         + κ n_th [n p_{n−1} − (n+1) p_n]
//! ```
//!
//! with `s_n = sin²(g √n τ / 2)` the probability that one atom removes a
//! phonon from |n>. [`full_matrix`] keeps the off-diagonal elements and
//! serves as a cross-check.

pub mod full_matrix;

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, Error, Result};

/// Largest tail population p_{n_max} accepted as a valid truncation.
pub const TAIL_TOLERANCE: f64 = 1e-6;
/// Stability bound on dt times the largest rate.
pub const MAX_STEP_PRODUCT: f64 = 0.1;
/// Upper bound on RK4 steps in one evolution call.
pub const MAX_STEPS: usize = 20_000_000;

/// Diagonal of the oscillator density operator in the Fock basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationVector {
    populations: Vec<f64>,
}

impl PopulationVector {
    /// Validates normalisation (1e-9) and clamps roundoff negatives (≥ −1e-12) to zero.
    pub fn new(mut populations: Vec<f64>) -> Result<Self> {
        if populations.is_empty() {
            return Err(Error::InvalidParameter {
                name: "populations",
                value: 0.0,
                reason: "need at least one Fock level",
            });
        }
        for p in populations.iter_mut() {
            if !p.is_finite() || *p < -1e-12 {
                return Err(Error::InvalidParameter {
                    name: "populations",
                    value: *p,
                    reason: "populations must be non-negative",
                });
            }
            *p = p.max(0.0);
        }
        let total: f64 = populations.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter {
                name: "populations",
                value: total,
                reason: "populations must sum to one",
            });
        }
        Ok(Self { populations })
    }

    /// Normalises arbitrary non-negative weights.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidParameter {
                name: "populations",
                value: total,
                reason: "weights must have positive sum",
            });
        }
        Self::new(weights.into_iter().map(|w| w / total).collect())
    }

    pub fn vacuum(n_max: usize) -> Self {
        Self::fock(0, n_max)
    }

    /// |k><k| truncated at `n_max` (k is clamped to n_max).
    pub fn fock(k: usize, n_max: usize) -> Self {
        let mut populations = vec![0.0; n_max + 1];
        populations[k.min(n_max)] = 1.0;
        Self { populations }
    }

    /// Bose-Einstein distribution with mean `n_th`, truncated and renormalised.
    pub fn thermal(n_th: f64, n_max: usize) -> Self {
        if n_th <= 0.0 {
            return Self::vacuum(n_max);
        }
        let ratio = n_th / (n_th + 1.0);
        let mut populations = Vec::with_capacity(n_max + 1);
        let mut p = 1.0 / (n_th + 1.0);
        for _ in 0..=n_max {
            populations.push(p);
            p *= ratio;
        }
        let total: f64 = populations.iter().sum();
        populations.iter_mut().for_each(|p| *p /= total);
        Self { populations }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.populations
    }

    pub fn n_max(&self) -> usize {
        self.populations.len() - 1
    }

    pub fn trace(&self) -> f64 {
        self.populations.iter().sum()
    }

    pub fn tail_mass(&self) -> f64 {
        *self.populations.last().unwrap_or(&0.0)
    }
}

/// ⟨n⟩ = Σ n p_n.
pub fn mean_phonon(p: &PopulationVector) -> f64 {
    p.populations
        .iter()
        .enumerate()
        .map(|(n, pn)| n as f64 * pn)
        .sum()
}

/// Per-atom phonon-removal probability as a function of n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PumpModel {
    /// `sin²(g √n τ / 2)` from the resonant JC map.
    Exact,
    /// `coefficient · g² τ² · n`; 1/4 is the small-angle limit of the exact map.
    Linearized { coefficient: f64 },
}

impl PumpModel {
    /// The `g²τ²n/8` form behind the closed-form steady state.
    pub const EIGHTH: PumpModel = PumpModel::Linearized { coefficient: 0.125 };
    pub const QUARTER: PumpModel = PumpModel::Linearized { coefficient: 0.25 };

    fn removal(&self, n: usize, g: f64, tau: f64) -> f64 {
        match *self {
            PumpModel::Exact => rotation_weight(n, g, tau),
            PumpModel::Linearized { coefficient } => coefficient * g * g * tau * tau * n as f64,
        }
    }
}

/// sin²(φ_n) with φ_n = g √n τ / 2.
fn rotation_weight(n: usize, g: f64, tau: f64) -> f64 {
    let phi = 0.5 * g * (n as f64).sqrt() * tau;
    phi.sin().powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Coupling used in the JC map (g₀ or g_N), rad/s.
    pub g: f64,
    /// Interaction time per atom, s.
    pub tau: f64,
    /// Atom arrival rate Γ, s⁻¹.
    pub gamma: f64,
    /// Mechanical energy decay rate κ, s⁻¹.
    pub kappa: f64,
    pub n_th: f64,
    /// Truncation; `None` sizes it as max(10 n_th + 50, 200).
    pub n_max: Option<usize>,
    /// Explicit step; `None` picks half the stability limit.
    pub dt: Option<f64>,
    pub pump: PumpModel,
}

impl OracleConfig {
    pub fn new(g: f64, tau: f64, gamma: f64, kappa: f64, n_th: f64) -> Result<Self> {
        Ok(Self {
            g: require_non_negative("g", g)?,
            tau: require_non_negative("tau", tau)?,
            gamma: require_non_negative("gamma", gamma)?,
            kappa: require_non_negative("kappa", kappa)?,
            n_th: require_non_negative("n_th", n_th)?,
            n_max: None,
            dt: None,
            pump: PumpModel::Exact,
        })
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = Some(n_max);
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = Some(dt);
        self
    }

    pub fn with_pump(mut self, pump: PumpModel) -> Self {
        self.pump = pump;
        self
    }

    pub fn resolved_n_max(&self) -> usize {
        self.n_max
            .unwrap_or_else(|| ((10.0 * self.n_th + 50.0).ceil() as usize).max(200))
    }

    /// Largest single rate entering the stability condition.
    pub fn max_rate(&self, n_max: usize) -> f64 {
        let peak_removal = (1..=n_max)
            .map(|n| self.pump.removal(n, self.g, self.tau))
            .fold(1.0_f64, f64::max);
        self.gamma * peak_removal + self.kappa * (self.n_th + 1.0) * n_max as f64
    }

    fn rates(&self, n_max: usize) -> ChainRates {
        let down = (0..=n_max)
            .map(|n| {
                self.gamma * self.pump.removal(n, self.g, self.tau)
                    + self.kappa * (self.n_th + 1.0) * n as f64
            })
            .collect();
        let up = (0..=n_max)
            .map(|n| {
                if n < n_max {
                    self.kappa * self.n_th * (n + 1) as f64
                } else {
                    0.0
                }
            })
            .collect();
        ChainRates { down, up }
    }
}

/// Birth-death rates: `down[n]` for n → n−1, `up[n]` for n → n+1.
#[derive(Debug, Clone)]
struct ChainRates {
    down: Vec<f64>,
    up: Vec<f64>,
}

impl ChainRates {
    fn apply(&self, p: &[f64], out: &mut [f64]) {
        let last = p.len() - 1;
        for n in 0..=last {
            let mut d = -(self.down[n] + self.up[n]) * p[n];
            if n < last {
                d += self.down[n + 1] * p[n + 1];
            }
            if n > 0 {
                d += self.up[n - 1] * p[n - 1];
            }
            out[n] = d;
        }
    }
}

/// One atom interacting for τ and then traced out:
/// `p'_n = cos²(φ_n) p_n + sin²(φ_{n+1}) p_{n+1}`.
pub fn jc_kraus_map(p: &PopulationVector, g: f64, tau: f64) -> PopulationVector {
    let src = &p.populations;
    let last = src.len() - 1;
    let populations = (0..=last)
        .map(|n| {
            let stay = (1.0 - rotation_weight(n, g, tau)) * src[n];
            let arrive = if n < last {
                rotation_weight(n + 1, g, tau) * src[n + 1]
            } else {
                0.0
            };
            stay + arrive
        })
        .collect();
    PopulationVector { populations }
}

/// One classic RK4 step of the population rate equations.
pub fn rk4_step(p: &PopulationVector, cfg: &OracleConfig, dt: f64) -> PopulationVector {
    let rates = cfg.rates(p.n_max());
    rk4_with(&rates, &p.populations, dt)
}

fn rk4_with(rates: &ChainRates, p: &[f64], dt: f64) -> PopulationVector {
    let len = p.len();
    let mut k1 = vec![0.0; len];
    let mut k2 = vec![0.0; len];
    let mut k3 = vec![0.0; len];
    let mut k4 = vec![0.0; len];
    let mut tmp = vec![0.0; len];

    rates.apply(p, &mut k1);
    for i in 0..len {
        tmp[i] = p[i] + 0.5 * dt * k1[i];
    }
    rates.apply(&tmp, &mut k2);
    for i in 0..len {
        tmp[i] = p[i] + 0.5 * dt * k2[i];
    }
    rates.apply(&tmp, &mut k3);
    for i in 0..len {
        tmp[i] = p[i] + dt * k3[i];
    }
    rates.apply(&tmp, &mut k4);
    let populations = (0..len)
        .map(|i| p[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    PopulationVector { populations }
}

/// Integrates the rate equations from `p0` to `t_final`.
///
/// The truncation is that of `p0`. Fails if the tail population ever
/// reaches [`TAIL_TOLERANCE`] or the step violates the stability bound.
pub fn evolve_populations(
    p0: &PopulationVector,
    cfg: &OracleConfig,
    t_final: f64,
) -> Result<PopulationVector> {
    evolve_populations_observed(p0, cfg, t_final, |_, _| {})
}

/// As [`evolve_populations`], calling `observer(t, p)` after every step.
pub fn evolve_populations_observed(
    p0: &PopulationVector,
    cfg: &OracleConfig,
    t_final: f64,
    mut observer: impl FnMut(f64, &PopulationVector),
) -> Result<PopulationVector> {
    require_non_negative("t_final", t_final)?;
    let n_max = p0.n_max();
    let max_rate = cfg.max_rate(n_max);
    let dt_limit = match cfg.dt {
        Some(dt) => {
            let product = dt * max_rate;
            if !(dt > 0.0) || product >= MAX_STEP_PRODUCT {
                return Err(Error::UnstableStep { dt, product });
            }
            dt
        }
        None if max_rate > 0.0 => 0.5 * MAX_STEP_PRODUCT / max_rate,
        None => t_final.max(f64::MIN_POSITIVE),
    };
    let steps = (t_final / dt_limit).ceil().max(1.0);
    if steps > MAX_STEPS as f64 {
        return Err(Error::TooManySteps { steps, limit: MAX_STEPS });
    }
    let steps = steps as usize;
    let dt = t_final / steps as f64;

    let rates = cfg.rates(n_max);
    let mut p = p0.clone();
    for i in 1..=steps {
        p = rk4_with(&rates, &p.populations, dt);
        let tail = p.tail_mass();
        if tail >= TAIL_TOLERANCE {
            return Err(Error::Truncation { tail, n_max });
        }
        observer(i as f64 * dt, &p);
    }
    for x in p.populations.iter_mut() {
        if *x < 0.0 && *x >= -1e-12 {
            *x = 0.0;
        }
    }
    Ok(p)
}

/// Stationary populations by direct elimination of the tridiagonal generator.
///
/// p_0 is pinned to one, the redundant n = 0 balance row is dropped and the
/// remaining rows are solved with the Thomas algorithm before normalising.
pub fn steady_populations(cfg: &OracleConfig) -> Result<PopulationVector> {
    if !(cfg.gamma + cfg.kappa > 0.0) {
        return Err(Error::SingularGenerator);
    }
    let n_max = cfg.resolved_n_max();
    if n_max == 0 {
        return Ok(PopulationVector::vacuum(0));
    }
    let rates = cfg.rates(n_max);

    // Row n (1..=n_max): up[n-1] p[n-1] - (down[n] + up[n]) p[n] + down[n+1] p[n+1] = 0.
    let size = n_max;
    let mut diag = vec![0.0; size];
    let mut upper = vec![0.0; size];
    let mut rhs = vec![0.0; size];
    let mut lower = vec![0.0; size];
    for row in 0..size {
        let n = row + 1;
        lower[row] = rates.up[n - 1];
        diag[row] = -(rates.down[n] + rates.up[n]);
        upper[row] = if n < n_max { rates.down[n + 1] } else { 0.0 };
    }
    rhs[0] = -rates.up[0];

    for row in 1..size {
        let pivot = diag[row - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::SingularGenerator);
        }
        let factor = lower[row] / pivot;
        diag[row] -= factor * upper[row - 1];
        rhs[row] -= factor * rhs[row - 1];
    }
    let mut solution = vec![0.0; size];
    for row in (0..size).rev() {
        if diag[row] == 0.0 || !diag[row].is_finite() {
            return Err(Error::SingularGenerator);
        }
        let carry = if row + 1 < size { upper[row] * solution[row + 1] } else { 0.0 };
        solution[row] = (rhs[row] - carry) / diag[row];
    }

    let mut weights = Vec::with_capacity(n_max + 1);
    weights.push(1.0);
    weights.extend(solution.into_iter().map(|x| x.max(0.0)));
    let p = PopulationVector::from_weights(weights)?;
    let tail = p.tail_mass();
    if tail >= TAIL_TOLERANCE {
        return Err(Error::Truncation { tail, n_max });
    }
    Ok(p)
}

/// Phonon removal per atom, exact versus the `g²τ²⟨n⟩/8` estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproximationResidual {
    /// Tr{a†a [1 − M(τ)] ρ} = Σ p_n sin²(φ_n).
    pub exact: f64,
    /// g² τ² ⟨n⟩ / 8.
    pub linear_estimate: f64,
    /// exact / linear_estimate; infinite if only the estimate vanishes, NaN if both do.
    pub ratio: f64,
}

pub fn approximation_residual(p: &PopulationVector, g: f64, tau: f64) -> ApproximationResidual {
    let exact: f64 = p
        .populations
        .iter()
        .enumerate()
        .map(|(n, pn)| pn * rotation_weight(n, g, tau))
        .sum();
    let linear_estimate = 0.125 * g * g * tau * tau * mean_phonon(p);
    let ratio = if linear_estimate == 0.0 {
        if exact == 0.0 {
            f64::NAN
        } else {
            f64::INFINITY
        }
    } else {
        exact / linear_estimate
    };
    ApproximationResidual {
        exact,
        linear_estimate,
        ratio,
    }
}
