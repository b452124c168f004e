//! Qubit reduction, rotating frame and fidelity.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::sector::SectorDm;
use crate::{DensityMatrix, C64};

const TRACE_TOL: f64 = 1e-8;
const IMAG_TOL: f64 = 1e-10;

/// Qubit density matrix: the sum of all detector sectors.
pub fn reduce_qubits(rho: &SectorDm) -> DensityMatrix {
    let d = rho.qubit_dim();
    let mut out = Array2::zeros((d, d));
    for k in 0..rho.layout().n_sectors() {
        out += &rho.sector(k);
    }
    out
}

/// Rotating-frame frequencies Ω′ᵢ = √(Ωᵢ² + εᵢ²/4).
pub fn frame_frequencies(p: &ModelParams) -> Vec<f64> {
    p.omega.iter().zip(&p.epsilon).map(|(o, e)| (o * o + e * e / 4.0).sqrt()).collect()
}

/// ρ′ = R ρ R† with R(t) = ⊗ᵢ exp(iΩ′ᵢ t σₓ), using the frame frequencies of `p`.
pub fn rotating_frame(rho: &DensityMatrix, p: &ModelParams, t: f64) -> Result<DensityMatrix> {
    rotating_frame_with(rho, &frame_frequencies(p), t)
}

/// ρ′ = R ρ R† with R(t) = ⊗ᵢ [cos(ωᵢt) + i sin(ωᵢt) σₓ].
pub fn rotating_frame_with(rho: &DensityMatrix, freqs: &[f64], t: f64) -> Result<DensityMatrix> {
    let d = 1usize << freqs.len();
    if rho.dim() != (d, d) {
        return Err(Error::Dimension { expected: d, got: rho.nrows() });
    }
    let mut out = rho.clone();
    for (q, &w) in freqs.iter().enumerate() {
        let (s, c) = (w * t).sin_cos();
        let is = C64::new(0.0, s);
        let m = 1usize << q;
        // rows: R acts from the left
        for r in (0..d).filter(|r| r & m == 0) {
            for col in 0..d {
                let (x, y) = (out[[r, col]], out[[r | m, col]]);
                out[[r, col]] = x * c + y * is;
                out[[r | m, col]] = x * is + y * c;
            }
        }
        // columns: R† = cos − i sin σₓ acts from the right
        for row in 0..d {
            for k in (0..d).filter(|k| k & m == 0) {
                let (x, y) = (out[[row, k]], out[[row, k | m]]);
                out[[row, k]] = x * c - y * is;
                out[[row, k | m]] = y * c - x * is;
            }
        }
    }
    Ok(out)
}

/// F = Re Tr[ρ₀ ρ′].
pub fn fidelity(rho0: &DensityMatrix, rho_rot: &DensityMatrix) -> Result<f64> {
    if rho0.dim() != rho_rot.dim() {
        return Err(Error::Dimension { expected: rho0.nrows(), got: rho_rot.nrows() });
    }
    let (t0, t1) = (trace(rho0), trace(rho_rot));
    if (t0.re - 1.0).abs() > TRACE_TOL || (t1.re - 1.0).abs() > TRACE_TOL {
        return Err(Error::TraceMismatch(t0.re, t1.re));
    }
    let f: C64 = rho0.indexed_iter().map(|((i, j), a)| a * rho_rot[[j, i]]).sum();
    if f.im.abs() > IMAG_TOL {
        return Err(Error::ComplexFidelity(f.im));
    }
    Ok(f.re)
}

pub fn trace(rho: &DensityMatrix) -> C64 {
    rho.diag().sum()
}

/// Re Tr[ρ²].
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.indexed_iter().map(|((i, j), a)| a * rho[[j, i]]).sum::<C64>().re
}

pub fn hermiticity_defect(rho: &DensityMatrix) -> f64 {
    rho.indexed_iter().map(|((i, j), v)| (v - rho[[j, i]].conj()).norm()).fold(0.0, f64::max)
}
