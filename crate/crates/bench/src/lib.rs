//! Shared fixtures for the benchmarks.

use qdf_core::{make_bell, make_df4, to_density, BellState, Df4State, Generator, LogicalZero, ModelParams, SectorDm};
use qdf_core::{SectorLayout, C64};

/// Figure defaults: Ω=2, ζ=0.2.
pub fn params(n_qubits: usize) -> ModelParams {
    ModelParams::uniform(n_qubits, 2.0, 0.2).expect("valid parameters")
}

pub fn generator(n_qubits: usize, layout: SectorLayout) -> Generator {
    let p = params(n_qubits);
    match layout {
        SectorLayout::Full => Generator::assemble(&p),
        SectorLayout::SpinReduced => Generator::assemble_reduced(&p),
    }
    .expect("assembles")
}

/// Ψ2 for four qubits, |c⟩ for two.
pub fn initial_state(n_qubits: usize, layout: SectorLayout) -> SectorDm {
    let psi = match n_qubits {
        4 => make_df4(Df4State::Psi2, LogicalZero::Down),
        2 => make_bell(BellState::C),
        n => panic!("no fixture state for {n} qubits"),
    };
    to_density(&psi, layout).expect("matching qubit count")
}

/// Deterministic dense vector for kernel timings.
pub fn test_vector(dim: usize) -> Vec<C64> {
    (0..dim).map(|i| C64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())).collect()
}
