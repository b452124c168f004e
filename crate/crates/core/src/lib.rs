//! Sector-resolved density-matrix simulation of charge qubits measured by a
//! quantum point contact (QPC) detector with an internal island.
//!
//! The detector is two tunnel barriers in series. Each qubit modulates the
//! tunneling rate of one barrier depending on its σz value, and the island
//! between the barriers holds zero, one (spin up/down) or two electrons. The
//! joint qubit–detector density matrix is resolved by island occupation into
//! the sectors `a`, `b↑`, `b↓` and `c`, each a `2^N × 2^N` matrix over qubit
//! configurations.
//!
//! Module map:
//!
//! * [`model`]: qubit configurations, model parameters and non-uniformity scenarios.
//! * [`states`]: four-qubit decoherence-free states and two-qubit Bell states.
//! * [`rates`]: configuration-dependent barrier tunneling rates.
//! * [`sector`]: the flat sector-resolved density matrix.
//! * [`liouvillian`]: sparse generator assembly, spin reduction and checks.
//! * [`integrator`]: fixed-step RK4 and the dense matrix-exponential reference.
//! * [`analysis`]: qubit reduction, rotating frame and fidelity.
//! * [`baseline`]: the analytic collective-dephasing channel.

pub mod analysis;
pub mod baseline;
mod error;
pub mod expm;
pub mod integrator;
mod kernel;
pub mod liouvillian;
pub mod model;
pub mod rates;
pub mod sector;
pub mod states;

pub use analysis::{fidelity, frame_frequencies, reduce_qubits, rotating_frame};
pub use baseline::collective_dephasing;
pub use error::{Error, Result};
pub use integrator::{evolve_expm, evolve_rk4, evolve_rk4_with, Rk4Options, Trajectory};
pub use liouvillian::Generator;
pub use model::{apply_scenario, config_energy, flip, ModelParams, QubitConfig, Scenario, ScenarioKind};
pub use rates::{barrier_rates, qubit_branch_rate, BarrierRates, RateTable};
pub use sector::{Sector, SectorDm, SectorLayout};
pub use states::{make_bell, make_df4, to_density, BellState, Df4State, LogicalZero, NamedState, QubitState};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense qubit density matrix over the configuration basis.
pub type DensityMatrix = ndarray::Array2<C64>;
