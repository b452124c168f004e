//! Physical parameters, configuration indexing and non-uniformity scenarios.
//!
//! Qubit indices are zero-based in the Rust API. Energies and rates are in
//! units of the bare tunneling rate Γ₀ (so Γ₀ itself is `1.0`).

use std::fmt;

use crate::error::{Error, Result};

/// Γ₀, the rate and energy unit.
pub const GAMMA0_UNIT: f64 = 1.0;

/// Largest supported register; sector dimension grows as `4^N`.
pub const MAX_QUBITS: usize = 8;

/// A classical joint σz configuration of `N` qubits.
///
/// Qubit `i` is bit `i` of the index, with σz = −1 (↓) stored as `0` and
/// σz = +1 (↑) as `1`. Qubit 0 therefore varies fastest.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitConfig {
    n_qubits: u8,
    bits: u32,
}

impl QubitConfig {
    pub fn from_index(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        if index >= 1 << n_qubits {
            return Err(Error::Parameter { field: "index", reason: format!("{index} >= 2^{n_qubits}") });
        }
        Ok(Self { n_qubits: n_qubits as u8, bits: index as u32 })
    }

    pub fn from_spins(spins: &[i8]) -> Result<Self> {
        check_qubit_count(spins.len())?;
        let mut bits = 0u32;
        for (i, &s) in spins.iter().enumerate() {
            match s {
                1 => bits |= 1 << i,
                -1 => {}
                _ => return Err(Error::Parameter { field: "spins", reason: format!("spin {s} is not ±1") }),
            }
        }
        Ok(Self { n_qubits: spins.len() as u8, bits })
    }

    /// All `2^N` configurations in index order.
    pub fn all(n_qubits: usize) -> impl Iterator<Item = QubitConfig> {
        let n = n_qubits as u8;
        (0..1u32 << n_qubits).map(move |bits| QubitConfig { n_qubits: n, bits })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits as usize
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    /// σz eigenvalue of qubit `i`.
    pub fn spin(&self, i: usize) -> i8 {
        if self.bits >> i & 1 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn spins(&self) -> Vec<i8> {
        (0..self.n_qubits()).map(|i| self.spin(i)).collect()
    }

    /// Total σz, Σᵢ sᵢ.
    pub fn total_spin(&self) -> i32 {
        let up = self.bits.count_ones() as i32;
        2 * up - self.n_qubits as i32
    }

    /// Label in the `A…D` pair notation: `|↓↓⟩=A`, `|↓↑⟩=B`, `|↑↓⟩=C`,
    /// `|↑↑⟩=D`, one letter per consecutive qubit pair (1,2), (3,4), ….
    /// Odd trailing qubits are written as `↓`/`↑`.
    pub fn label(&self) -> String {
        let n = self.n_qubits();
        let mut out = String::new();
        let mut i = 0;
        while i + 1 < n {
            let code = (self.spin(i) > 0) as u8 * 2 + (self.spin(i + 1) > 0) as u8;
            out.push((b'A' + code) as char);
            i += 2;
        }
        if i < n {
            out.push(if self.spin(i) > 0 { '↑' } else { '↓' });
        }
        out
    }
}

impl fmt::Debug for QubitConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QubitConfig({})", self.label())
    }
}

impl fmt::Display for QubitConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::QubitCount(n));
    }
    Ok(())
}

/// Single-qubit spin flip `g_j`.
pub fn flip(z: QubitConfig, j: usize) -> Result<QubitConfig> {
    if j >= z.n_qubits() {
        return Err(Error::QubitIndex { index: j, n_qubits: z.n_qubits() });
    }
    Ok(QubitConfig { n_qubits: z.n_qubits, bits: z.bits ^ (1 << j) })
}

/// Model parameters for `N` qubits and the two-barrier detector.
///
/// Fields are public for convenient construction; every consumer validates
/// through [`ModelParams::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub n_qubits: usize,
    /// Inter-dot tunnel coupling Ωᵢ.
    pub omega: Vec<f64>,
    /// Gate bias εᵢ.
    pub epsilon: Vec<f64>,
    /// Nearest-neighbour coupling J_{i,i+1}, length `N − 1`.
    pub j_coupling: Vec<f64>,
    /// Mean tunneling rate Γᵢ₀ contributed by qubit `i`.
    pub gamma0: Vec<f64>,
    /// Modulation ΔΓᵢ; Γᵢ^(±) = Γᵢ₀ ± ΔΓᵢ.
    pub delta_gamma: Vec<f64>,
    /// Γ' / Γ for rates evaluated at μ + U.
    pub primed_scale: f64,
    /// Qubits modulating the left barrier.
    pub left_barrier: Vec<usize>,
    /// Qubits modulating the right barrier.
    pub right_barrier: Vec<usize>,
}

impl ModelParams {
    /// Uniform qubits with tunnel coupling `omega`, measurement strength
    /// `zeta` (Γᵢ = Γ₀(1 ± ζ)), zero bias and coupling, Γ' = Γ, and the
    /// default barrier split.
    pub fn uniform(n_qubits: usize, omega: f64, zeta: f64) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let (left, right) = default_barriers(n_qubits)?;
        let p = Self {
            n_qubits,
            omega: vec![omega; n_qubits],
            epsilon: vec![0.0; n_qubits],
            j_coupling: vec![0.0; n_qubits - 1],
            gamma0: vec![GAMMA0_UNIT; n_qubits],
            delta_gamma: vec![zeta * GAMMA0_UNIT; n_qubits],
            primed_scale: 1.0,
            left_barrier: left,
            right_barrier: right,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits;
        check_qubit_count(n)?;
        let lengths: [(&'static str, usize, usize); 5] = [
            ("omega", self.omega.len(), n),
            ("epsilon", self.epsilon.len(), n),
            ("j_coupling", self.j_coupling.len(), n - 1),
            ("gamma0", self.gamma0.len(), n),
            ("delta_gamma", self.delta_gamma.len(), n),
        ];
        for (field, got, expected) in lengths {
            if got != expected {
                return Err(Error::Length { field, got, expected });
            }
        }
        for (field, values) in [
            ("omega", &self.omega),
            ("epsilon", &self.epsilon),
            ("j_coupling", &self.j_coupling),
            ("gamma0", &self.gamma0),
            ("delta_gamma", &self.delta_gamma),
        ] {
            if let Some(v) = values.iter().find(|v| !v.is_finite()) {
                return Err(Error::Parameter { field, reason: format!("non-finite value {v}") });
            }
        }
        if !(self.primed_scale.is_finite() && self.primed_scale > 0.0) {
            return Err(Error::Parameter {
                field: "primed_scale",
                reason: format!("{} is not a positive number", self.primed_scale),
            });
        }
        for i in 0..n {
            for spin in [-1i8, 1] {
                let rate = self.gamma0[i] + f64::from(spin) * self.delta_gamma[i];
                if rate <= 0.0 {
                    return Err(Error::NonPositiveRate { qubit: i, spin, rate });
                }
            }
        }
        self.validate_barriers()
    }

    fn validate_barriers(&self) -> Result<()> {
        if self.left_barrier.is_empty() || self.right_barrier.is_empty() {
            return Err(Error::Barrier("both barriers need at least one qubit".into()));
        }
        let mut seen = vec![false; self.n_qubits];
        for &q in self.left_barrier.iter().chain(&self.right_barrier) {
            if q >= self.n_qubits {
                return Err(Error::QubitIndex { index: q, n_qubits: self.n_qubits });
            }
            if seen[q] {
                return Err(Error::Barrier(format!("qubit {q} assigned twice")));
            }
            seen[q] = true;
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(Error::Barrier(format!("qubit {q} not assigned to a barrier")));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }
}

/// Default barrier split: the first `⌈N/2⌉` qubits on the left barrier, the
/// rest on the right. For two qubits this puts one qubit on each barrier.
pub fn default_barriers(n_qubits: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    if n_qubits < 2 {
        return Err(Error::Barrier("two barriers need at least two qubits".into()));
    }
    let split = n_qubits.div_ceil(2);
    Ok(((0..split).collect(), (split..n_qubits).collect()))
}

/// Diagonal energy of configuration `z` under the qubit Hamiltonian,
/// J_z = Σᵢ εᵢ sᵢ + Σᵢ J_{i,i+1} sᵢ s_{i+1}.
pub fn config_energy(z: QubitConfig, p: &ModelParams) -> f64 {
    let n = z.n_qubits();
    debug_assert_eq!(n, p.n_qubits);
    let s = |i: usize| f64::from(z.spin(i));
    let bias: f64 = (0..n).map(|i| p.epsilon[i] * s(i)).sum();
    let coupling: f64 = (0..n.saturating_sub(1)).map(|i| p.j_coupling[i] * s(i) * s(i + 1)).sum();
    bias + coupling
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioKind {
    Uniform,
    /// Third qubit only.
    CaseI,
    /// Second and third qubits.
    CaseII,
    /// Fourth qubit only.
    CaseIII,
    /// Explicit zero-based qubit set.
    Custom(Vec<usize>),
}

/// A non-uniformity recipe: affected qubits get Ω → (1−η)Ω, ε → ηΓ₀ and
/// Γ^(±) → (1−η)Γ^(±).
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub eta: f64,
}

impl Scenario {
    pub fn new(kind: ScenarioKind, eta: f64) -> Self {
        Self { kind, eta }
    }

    pub fn uniform() -> Self {
        Self::new(ScenarioKind::Uniform, 0.0)
    }

    /// Zero-based affected qubits.
    pub fn affected(&self) -> Vec<usize> {
        let mut qubits = match &self.kind {
            ScenarioKind::Uniform => vec![],
            ScenarioKind::CaseI => vec![2],
            ScenarioKind::CaseII => vec![1, 2],
            ScenarioKind::CaseIII => vec![3],
            ScenarioKind::Custom(q) => q.clone(),
        };
        qubits.sort_unstable();
        qubits.dedup();
        qubits
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ScenarioKind::Uniform => "uniform",
            ScenarioKind::CaseI => "case_i",
            ScenarioKind::CaseII => "case_ii",
            ScenarioKind::CaseIII => "case_iii",
            ScenarioKind::Custom(_) => "custom",
        }
    }
}

/// Applies a non-uniformity scenario to `base`. The bias of an affected
/// qubit is replaced by ηΓ₀; Γᵢ₀ and ΔΓᵢ are scaled together so ζᵢ is kept.
pub fn apply_scenario(base: &ModelParams, s: &Scenario) -> Result<ModelParams> {
    base.validate()?;
    if !(0.0..1.0).contains(&s.eta) {
        return Err(Error::Eta(s.eta));
    }
    let affected = s.affected();
    if let Some(&q) = affected.iter().find(|&&q| q >= base.n_qubits) {
        return Err(Error::QubitIndex { index: q, n_qubits: base.n_qubits });
    }
    let mut p = base.clone();
    if s.eta == 0.0 {
        return Ok(p);
    }
    let keep = 1.0 - s.eta;
    for k in affected {
        p.omega[k] *= keep;
        p.epsilon[k] = s.eta * GAMMA0_UNIT;
        p.gamma0[k] *= keep;
        p.delta_gamma[k] *= keep;
    }
    p.validate()?;
    Ok(p)
}
