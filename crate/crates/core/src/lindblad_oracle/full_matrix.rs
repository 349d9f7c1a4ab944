//! Full density-matrix model, for validating the population solver at small
//! truncation.
//!
//! The JC propagator is built by diagonalising the oscillator ⊗ pseudo-spin
//! interaction Hamiltonian, the atom is traced out explicitly and the thermal
//! dissipator is written in Lindblad form. Nothing here assumes the dynamics
//! stay diagonal.

use nalgebra::{Complex, DMatrix, DVector};

use super::OracleConfig;
use crate::error::{Error, Result};

type C64 = Complex<f64>;

pub struct FullMatrixModel {
    dim: usize,
    kraus: [DMatrix<C64>; 2],
    lowering: DMatrix<C64>,
    gamma: f64,
    kappa: f64,
    n_th: f64,
}

impl FullMatrixModel {
    /// Builds the model at `n_max` (dimension n_max + 1). The pump model in
    /// `cfg` is ignored; this is always the exact JC map.
    pub fn new(cfg: &OracleConfig, n_max: usize) -> Self {
        let dim = n_max + 1;
        let mut a = DMatrix::<f64>::zeros(dim, dim);
        for n in 1..dim {
            a[(n - 1, n)] = (n as f64).sqrt();
        }

        // Joint index 2n + s, s = 0 liquid, s = 1 vapor.
        // H_I/ħ = (g/2)(a σ₊ + a† σ₋), σ₊ = |1><0|.
        let joint = 2 * dim;
        let mut h = DMatrix::<f64>::zeros(joint, joint);
        for n in 1..dim {
            let elem = 0.5 * cfg.g * a[(n - 1, n)];
            // |n-1, 1> <n, 0|
            h[(2 * (n - 1) + 1, 2 * n)] = elem;
            h[(2 * n, 2 * (n - 1) + 1)] = elem;
        }
        let eig = h.symmetric_eigen();
        let phases = DVector::from_iterator(
            joint,
            eig.eigenvalues
                .iter()
                .map(|lambda| C64::from_polar(1.0, -lambda * cfg.tau)),
        );
        let v = eig.eigenvectors.map(|x| C64::new(x, 0.0));
        let u = &v * DMatrix::from_diagonal(&phases) * v.adjoint();

        let kraus = [0usize, 1].map(|s| {
            DMatrix::from_fn(dim, dim, |m, n| u[(2 * m + s, 2 * n)])
        });

        Self {
            dim,
            kraus,
            lowering: a.map(|x| C64::new(x, 0.0)),
            gamma: cfg.gamma,
            kappa: cfg.kappa,
            n_th: cfg.n_th,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// M(τ)ρ = Σ_s K_s ρ K_s†.
    pub fn kraus_map(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        self.kraus
            .iter()
            .map(|k| k * rho * k.adjoint())
            .fold(DMatrix::zeros(self.dim, self.dim), |acc, x| acc + x)
    }

    fn dissipator(&self, c: &DMatrix<C64>, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let cd = c.adjoint();
        let cdc = &cd * c;
        c * rho * &cd - (&cdc * rho + rho * &cdc) * C64::new(0.5, 0.0)
    }

    /// Γ[M(τ) − 1]ρ + κ(n_th+1) D[a]ρ + κ n_th D[a†]ρ.
    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let a = &self.lowering;
        let ad = a.adjoint();
        (self.kraus_map(rho) - rho) * C64::new(self.gamma, 0.0)
            + self.dissipator(a, rho) * C64::new(self.kappa * (self.n_th + 1.0), 0.0)
            + self.dissipator(&ad, rho) * C64::new(self.kappa * self.n_th, 0.0)
    }

    /// Superoperator acting on column-stacked ρ: vec(AρB) = (Bᵀ ⊗ A) vec(ρ).
    pub fn superoperator(&self) -> DMatrix<C64> {
        let d = self.dim;
        let eye = DMatrix::<C64>::identity(d, d);
        let lift = |left: &DMatrix<C64>, right: &DMatrix<C64>| right.transpose().kronecker(left);

        let mut l = DMatrix::<C64>::zeros(d * d, d * d);
        for k in &self.kraus {
            l += lift(k, &k.adjoint()) * C64::new(self.gamma, 0.0);
        }
        l -= DMatrix::<C64>::identity(d * d, d * d) * C64::new(self.gamma, 0.0);

        let a = &self.lowering;
        let ad = a.adjoint();
        for (c, rate) in [
            (a.clone(), self.kappa * (self.n_th + 1.0)),
            (ad.clone(), self.kappa * self.n_th),
        ] {
            if rate == 0.0 {
                continue;
            }
            let cd = c.adjoint();
            let cdc = &cd * &c;
            let term = lift(&c, &cd)
                - (lift(&cdc, &eye) + lift(&eye, &cdc)) * C64::new(0.5, 0.0);
            l += term * C64::new(rate, 0.0);
        }
        l
    }

    /// Stationary density matrix: null vector of the superoperator with Tr ρ = 1.
    pub fn steady_state(&self) -> Result<DMatrix<C64>> {
        let d = self.dim;
        let mut l = self.superoperator();
        let mut rhs = DVector::<C64>::zeros(d * d);
        for col in 0..d * d {
            l[(0, col)] = C64::new(0.0, 0.0);
        }
        for n in 0..d {
            l[(0, n * d + n)] = C64::new(1.0, 0.0);
        }
        rhs[0] = C64::new(1.0, 0.0);
        let x = l
            .lu()
            .solve(&rhs)
            .ok_or(Error::LinearSolve("superoperator is singular"))?;
        Ok(DMatrix::from_column_slice(d, d, x.as_slice()))
    }
}

/// Real parts of the diagonal.
pub fn diagonal(rho: &DMatrix<C64>) -> Vec<f64> {
    (0..rho.nrows()).map(|n| rho[(n, n)].re).collect()
}

/// Largest |ρ_mn| with m ≠ n.
pub fn max_coherence(rho: &DMatrix<C64>) -> f64 {
    let mut max = 0.0_f64;
    for m in 0..rho.nrows() {
        for n in 0..rho.ncols() {
            if m != n {
                max = max.max(rho[(m, n)].norm());
            }
        }
    }
    max
}

/// Diagonal density matrix from populations.
pub fn from_populations(p: &[f64]) -> DMatrix<C64> {
    DMatrix::from_diagonal(&DVector::from_iterator(
        p.len(),
        p.iter().map(|x| C64::new(*x, 0.0)),
    ))
}
