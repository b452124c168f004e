//! Collective dephasing through the single coupling operator Σᵢ σᵢz.
//!
//! With no coherent driving the channel is diagonal in the configuration
//! basis: ρ_{z1z2}(t) = ρ_{z1z2}(0) · exp(−Γ_d t (S_{z1} − S_{z2})² / 2),
//! with S_z the total σz of `z`. Any state supported on a single S_z sector
//! is untouched, which is what makes it decoherence-free.

use crate::error::{Error, Result};
use crate::model::QubitConfig;
use crate::{DensityMatrix, C64};

pub fn collective_dephasing(rho: &DensityMatrix, gamma_d: f64, t: f64) -> Result<DensityMatrix> {
    if gamma_d.is_nan() || gamma_d < 0.0 {
        return Err(Error::NegativeRate(gamma_d));
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::Grid(format!("time {t} must be non-negative")));
    }
    let d = rho.nrows();
    if !d.is_power_of_two() || rho.ncols() != d || d < 2 {
        return Err(Error::Dimension { expected: d.next_power_of_two(), got: rho.ncols() });
    }
    let n = d.trailing_zeros() as usize;
    let s: Vec<i32> = QubitConfig::all(n).map(|z| z.total_spin()).collect();
    let mut out = rho.clone();
    for ((z1, z2), v) in out.indexed_iter_mut() {
        let ds = f64::from(s[z1] - s[z2]);
        *v *= C64::from((-gamma_d * t * ds * ds / 2.0).exp());
    }
    Ok(out)
}
