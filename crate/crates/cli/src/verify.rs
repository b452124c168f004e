//! Self-checks run by `qdf verify`.

use std::fmt;

use qdf_core::{
    collective_dephasing, evolve_expm, evolve_rk4, fidelity, make_bell, make_df4, reduce_qubits, rotating_frame,
    to_density, BellState, Df4State, Generator, LogicalZero, ModelParams, QubitState, Rk4Options, SectorDm,
    SectorLayout, C64,
};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// `measured <= limit`
    AtMost,
    /// `measured >= limit`
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub limit: f64,
    pub bound: Bound,
}

impl Check {
    pub fn at_most(name: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self { name: name.into(), measured, limit, bound: Bound::AtMost }
    }

    pub fn at_least(name: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self { name: name.into(), measured, limit, bound: Bound::AtLeast }
    }

    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost => self.measured <= self.limit,
            Bound::AtLeast => self.measured >= self.limit,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (tag, op) =
            (if self.passed() { "PASS" } else { "FAIL" }, if self.bound == Bound::AtMost { "<=" } else { ">=" });
        write!(f, "[{tag}] {}: {:.3e} (required {op} {:.3e})", self.name, self.measured, self.limit)
    }
}

fn skewed_params(n: usize, zeta: f64) -> ModelParams {
    let mut p = ModelParams::uniform(n, 2.0, zeta).expect("valid parameters");
    p.epsilon = (0..n).map(|i| 0.3 - 0.2 * i as f64).collect();
    p.j_coupling = (0..n - 1).map(|i| 0.1 * (i + 1) as f64).collect();
    p.primed_scale = 0.9;
    p
}

fn max_diff(a: &SectorDm, b: &SectorDm) -> f64 {
    (a.flat() - b.flat()).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn fidelity_series(
    p: &ModelParams,
    psi: &QubitState,
    layout: SectorLayout,
    opts: &Rk4Options,
) -> Result<Vec<f64>, CliError> {
    let g = match layout {
        SectorLayout::Full => Generator::assemble(p)?,
        SectorLayout::SpinReduced => Generator::assemble_reduced(p)?,
    };
    let rho = to_density(psi, layout)?;
    let q0 = reduce_qubits(&rho);
    let traj = evolve_rk4(&g, &rho, opts)?;
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(t, s)| Ok(fidelity(&q0, &rotating_frame(&reduce_qubits(s), p, *t)?)?))
        .collect()
}

fn pseudo_random(dim: usize) -> Vec<C64> {
    (0..dim).map(|i| C64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())).collect()
}

/// Runs every check; fails only on simulation errors, not on failed checks.
pub fn run_verify() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();

    for n in [2, 4] {
        let full = Generator::assemble(&skewed_params(n, 0.6))?;
        let reduced = full.reduce_spin_symmetric();
        let (d_full, d_red) = (4 << (2 * n), 3 << (2 * n));
        checks.push(Check::at_most(
            format!("N={n} full dimension is {d_full}"),
            (full.dim() as f64 - d_full as f64).abs(),
            0.0,
        ));
        checks.push(Check::at_most(
            format!("N={n} reduced dimension is {d_red}"),
            (reduced.dim() as f64 - d_red as f64).abs(),
            0.0,
        ));
        for (label, g) in [("full", &full), ("reduced", &reduced)] {
            checks.push(Check::at_most(format!("N={n} {label} trace preservation"), g.trace_defect(), 1e-12));
            checks.push(Check::at_most(format!("N={n} {label} conjugation symmetry"), g.conjugation_defect(), 1e-12));
            let v = pseudo_random(g.dim());
            let (mut fast, mut slow) = (vec![C64::default(); v.len()], vec![C64::default(); v.len()]);
            g.apply(&v, &mut fast)?;
            g.with_sparse_kernel().apply(&v, &mut slow)?;
            let diff = fast.iter().zip(&slow).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            checks.push(Check::at_most(format!("N={n} {label} kernel matches entry list"), diff, 1e-12));
        }
        // entry 0 sits in the population row (a, 0, 0) seen by the trace
        let faulty = reduced.with_perturbed_entry(0, C64::new(1e-3, 0.0));
        checks.push(Check::at_least(
            format!("N={n} perturbed entry breaks trace preservation"),
            faulty.trace_defect(),
            5e-4,
        ));
        let faulty = reduced.with_perturbed_entry(reduced.nnz() / 3, C64::new(1e-3, 0.0));
        checks.push(Check::at_least(
            format!("N={n} perturbed entry breaks conjugation symmetry"),
            faulty.conjugation_defect(),
            5e-4,
        ));
    }

    // reduced and full dynamics
    let p = ModelParams::uniform(4, 2.0, 0.6)?;
    let psi = make_df4(Df4State::Psi2, LogicalZero::Down);
    let opts = Rk4Options::new(5.0, 1e-3, 0.5);
    let a = fidelity_series(&p, &psi, SectorLayout::Full, &opts)?;
    let b = fidelity_series(&p, &psi, SectorLayout::SpinReduced, &opts)?;
    let diff = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    checks.push(Check::at_most("N=4 reduced vs full fidelity, t<=5", diff, 1e-10));

    // RK4 against the dense exponential
    let p = ModelParams::uniform(2, 2.0, 0.2)?;
    let g = Generator::assemble_reduced(&p)?;
    let rho = to_density(&make_bell(BellState::D), SectorLayout::SpinReduced)?;
    let traj = evolve_rk4(&g, &rho, &Rk4Options::new(50.0, 1e-3, 0.5))?;
    let exact = evolve_expm(&g, &rho, 50.0)?;
    let last = traj.last().expect("non-empty trajectory").1;
    checks.push(Check::at_most("N=2 RK4 vs expm at t=50", max_diff(last, &exact), 1e-8));
    let drift = traj.states.iter().map(|s| (s.total_trace() - C64::from(1.0)).norm()).fold(0.0, f64::max);
    let herm = traj.states.iter().map(SectorDm::hermiticity_defect).fold(0.0, f64::max);
    checks.push(Check::at_most("N=2 trace drift over t<=50", drift, 1e-9));
    checks.push(Check::at_most("N=2 hermiticity defect over t<=50", herm, 1e-9));

    // decoupled detector
    let p = ModelParams::uniform(2, 2.0, 0.0)?;
    let f =
        fidelity_series(&p, &make_bell(BellState::C), SectorLayout::SpinReduced, &Rk4Options::new(50.0, 1e-3, 0.5))?;
    let worst = f.iter().map(|f| (f - 1.0).abs()).fold(0.0, f64::max);
    checks.push(Check::at_most("decoupled detector keeps F=1", worst, 1e-8));

    // collective dephasing
    let df = [
        ("psi1", make_df4(Df4State::Psi1, LogicalZero::Down)),
        ("psi2", make_df4(Df4State::Psi2, LogicalZero::Down)),
        ("psi3", make_df4(Df4State::Psi3, LogicalZero::Down)),
        ("bell-c", make_bell(BellState::C)),
        ("bell-d", make_bell(BellState::D)),
    ];
    let times = [0.0, 0.5, 3.0, 50.0];
    for (name, psi) in df {
        // F(t) must equal F(0) bit for bit; F(0) = Tr ρ₀² is 1 up to rounding
        let rho = reduce_qubits(&to_density(&psi, SectorLayout::SpinReduced)?);
        let f0 = fidelity(&rho, &rho)?;
        let mut worst: f64 = 0.0;
        for t in times {
            worst = worst.max((fidelity(&rho, &collective_dephasing(&rho, 1.0, t)?)? - f0).abs());
        }
        checks.push(Check::at_most(format!("{name} is decoherence-free"), worst, 0.0));
        checks.push(Check::at_most(format!("{name} initial purity"), (f0 - 1.0).abs(), 1e-15));
    }
    let rho = reduce_qubits(&to_density(&make_bell(BellState::B), SectorLayout::SpinReduced)?);
    let mut worst: f64 = 0.0;
    for t in times {
        let f = fidelity(&rho, &collective_dephasing(&rho, 1.0, t)?)?;
        worst = worst.max((f - 0.5 * (1.0 + (-8.0 * t).exp())).abs());
    }
    checks.push(Check::at_most("bell-b decays in closed form", worst, 1e-10));

    Ok(checks)
}
