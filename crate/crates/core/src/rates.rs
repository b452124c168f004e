//! Configuration-dependent barrier rates.
//!
//! Qubit `i` in state `s = ±1` contributes the branch rate
//! Γᵢ^(s) = Γᵢ₀ + s·ΔΓᵢ. The qubits assigned to one barrier act in series, so
//! the barrier rate is the harmonic combination Γ⁻¹ = Σᵢ (Γᵢ^(sᵢ))⁻¹.

use crate::error::{Error, Result};
use crate::model::{ModelParams, QubitConfig};

/// The four rates entering the sector equations for one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierRates {
    pub gamma_l: f64,
    pub gamma_r: f64,
    /// Left rate at μ + U (island already occupied).
    pub gamma_l_primed: f64,
    /// Right rate at μ + U.
    pub gamma_r_primed: f64,
}

pub fn qubit_branch_rate(i: usize, spin: i8, p: &ModelParams) -> Result<f64> {
    if i >= p.n_qubits {
        return Err(Error::QubitIndex { index: i, n_qubits: p.n_qubits });
    }
    let rate = p.gamma0[i] + f64::from(spin) * p.delta_gamma[i];
    if rate <= 0.0 {
        return Err(Error::NonPositiveRate { qubit: i, spin, rate });
    }
    Ok(rate)
}

fn series(z: QubitConfig, qubits: &[usize], p: &ModelParams) -> Result<f64> {
    if qubits.is_empty() {
        return Err(Error::Barrier("empty barrier".into()));
    }
    let mut inv = 0.0;
    for &i in qubits {
        inv += qubit_branch_rate(i, z.spin(i), p)?.recip();
    }
    Ok(inv.recip())
}

pub fn barrier_rates(z: QubitConfig, p: &ModelParams) -> Result<BarrierRates> {
    if z.n_qubits() != p.n_qubits {
        return Err(Error::Dimension { expected: p.n_qubits, got: z.n_qubits() });
    }
    let gamma_l = series(z, &p.left_barrier, p)?;
    let gamma_r = series(z, &p.right_barrier, p)?;
    Ok(BarrierRates {
        gamma_l,
        gamma_r,
        gamma_l_primed: gamma_l * p.primed_scale,
        gamma_r_primed: gamma_r * p.primed_scale,
    })
}

/// Barrier rates for every configuration, indexed by [`QubitConfig::index`].
#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    rates: Vec<BarrierRates>,
}

impl RateTable {
    pub fn new(p: &ModelParams) -> Result<Self> {
        p.validate()?;
        let rates = QubitConfig::all(p.n_qubits).map(|z| barrier_rates(z, p)).collect::<Result<Vec<_>>>()?;
        Ok(Self { rates })
    }

    pub fn get(&self, z: usize) -> &BarrierRates {
        &self.rates[z]
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }
}
