//! Single runs, figure sweeps and the collective-dephasing baseline.

use std::str::FromStr;

use qdf_core::analysis::rotating_frame_with;
use qdf_core::{
    collective_dephasing, evolve_rk4_with, fidelity, reduce_qubits, to_density, Generator, LogicalZero, NamedState,
    SectorLayout, C64,
};
use rayon::prelude::*;

use crate::config::{ResolvedRun, RunConfig, ScenarioName};
use crate::csv::{plot_script, Table};
use crate::error::CliError;

/// Environment variable capping the number of worker threads in sweeps.
pub const THREADS_ENV: &str = "QDF_THREADS";

/// Non-uniformity grid of the η sweeps.
pub const ETA_GRID: [f64; 6] = [0.0, 0.01, 0.02, 0.03, 0.04, 0.05];

/// Output and diagnostics of one trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    /// `t, F, trace_err, pop_<sector>...`
    pub table: Table,
    pub final_fidelity: f64,
    pub max_trace_error: f64,
    pub max_hermiticity_defect: f64,
    /// Smallest diagonal entry over all sectors and samples.
    pub min_diagonal: f64,
    /// Smallest and largest sector population seen.
    pub population_range: (f64, f64),
}

pub fn assemble(run: &ResolvedRun) -> Result<Generator, CliError> {
    Ok(match run.layout {
        SectorLayout::Full => Generator::assemble(&run.params)?,
        SectorLayout::SpinReduced => Generator::assemble_reduced(&run.params)?,
    })
}

pub fn run_single(run: &ResolvedRun) -> Result<RunReport, CliError> {
    let g = assemble(run)?;
    let rho0 = to_density(&run.state, run.layout)?;
    let q0 = reduce_qubits(&rho0);

    let mut header = vec!["t".to_string(), "F".into(), "trace_err".into()];
    header.extend(run.layout.sectors().iter().map(|s| format!("pop_{}", s.name())));
    let mut report = RunReport {
        table: Table::new(header),
        final_fidelity: f64::NAN,
        max_trace_error: 0.0,
        max_hermiticity_defect: 0.0,
        min_diagonal: f64::INFINITY,
        population_range: (f64::INFINITY, f64::NEG_INFINITY),
    };
    let mut failure = None;
    evolve_rk4_with(&g, &rho0, &run.options, |t, rho| {
        if failure.is_some() {
            return;
        }
        let rotated = match rotating_frame_with(&reduce_qubits(rho), &run.frame, t) {
            Ok(r) => r,
            Err(e) => return failure = Some(e),
        };
        let f = match fidelity(&q0, &rotated) {
            Ok(f) => f,
            Err(e) => return failure = Some(e),
        };
        let trace_err = (rho.total_trace() - C64::from(1.0)).norm();
        let pops: Vec<f64> = rho.sector_traces().iter().map(|c| c.re).collect();

        report.final_fidelity = f;
        report.max_trace_error = report.max_trace_error.max(trace_err);
        report.max_hermiticity_defect = report.max_hermiticity_defect.max(rho.hermiticity_defect());
        report.min_diagonal = report.min_diagonal.min(rho.min_diagonal());
        for &p in &pops {
            report.population_range.0 = report.population_range.0.min(p);
            report.population_range.1 = report.population_range.1.max(p);
        }
        let mut row = vec![t, f, trace_err];
        row.extend(pops);
        report.table.push(row);
    })?;
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(report),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureKind {
    /// Four states at weak and strong measurement.
    Fig2,
    /// Three DF states in three non-uniformity cases, η=0.01, ζ=0.6.
    Fig3a,
    /// As fig3a with η=0.05, ζ=0.2.
    Fig3b,
    /// Final fidelity against η, second case.
    Fig4a,
    /// Final fidelity against η, third case.
    Fig4b,
}

impl FigureKind {
    pub fn name(self) -> &'static str {
        match self {
            FigureKind::Fig2 => "fig2",
            FigureKind::Fig3a => "fig3a",
            FigureKind::Fig3b => "fig3b",
            FigureKind::Fig4a => "fig4a",
            FigureKind::Fig4b => "fig4b",
        }
    }
}

impl FromStr for FigureKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        <Self as clap::ValueEnum>::from_str(s, true)
            .map_err(|_| CliError::Config { path: "figure".into(), message: format!("unknown figure `{s}`") })
    }
}

/// One named curve of a figure.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub config: RunConfig,
}

const DF_STATES: [&str; 3] = ["psi1", "psi2", "psi3"];
const CASES: [ScenarioName; 3] = [ScenarioName::CaseI, ScenarioName::CaseIi, ScenarioName::CaseIii];

/// The runs behind a time-series figure, in column order.
pub fn time_series(fig: FigureKind, base: &RunConfig) -> Vec<Series> {
    let with = |state: &str, zeta: f64, eta: f64, scenario: ScenarioName| RunConfig {
        n_qubits: None,
        state: state.into(),
        zeta,
        eta,
        scenario,
        ..base.clone()
    };
    match fig {
        FigureKind::Fig2 => ["psi2", "psi3", "bell-b", "bell-c"]
            .into_iter()
            .flat_map(|s| {
                [0.2, 0.6]
                    .map(|z| Series { name: format!("{s}_zeta{z}"), config: with(s, z, 0.0, ScenarioName::Uniform) })
            })
            .collect(),
        FigureKind::Fig3a | FigureKind::Fig3b => {
            let (eta, zeta) = if fig == FigureKind::Fig3a { (0.01, 0.6) } else { (0.05, 0.2) };
            DF_STATES
                .into_iter()
                .flat_map(|s| {
                    CASES.map(|c| Series { name: format!("{s}_{}", c.as_str()), config: with(s, zeta, eta, c) })
                })
                .collect()
        }
        FigureKind::Fig4a | FigureKind::Fig4b => vec![],
    }
}

/// The η-sweep behind fig4a/fig4b: for each η, one run per DF state.
pub fn eta_sweep(fig: FigureKind, base: &RunConfig) -> Vec<(f64, Vec<Series>)> {
    let scenario = match fig {
        FigureKind::Fig4a => ScenarioName::CaseIi,
        FigureKind::Fig4b => ScenarioName::CaseIii,
        _ => return vec![],
    };
    ETA_GRID
        .iter()
        .map(|&eta| {
            let runs = DF_STATES
                .iter()
                .map(|s| Series {
                    name: s.to_string(),
                    config: RunConfig {
                        n_qubits: None,
                        state: s.to_string(),
                        eta,
                        scenario,
                        sample_interval: base.t_end.max(base.dt),
                        ..base.clone()
                    },
                })
                .collect();
            (eta, runs)
        })
        .collect()
}

/// Reads [`THREADS_ENV`]; `None` when unset.
pub fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => {
                Err(CliError::Config { path: THREADS_ENV.into(), message: format!("`{v}` is not a positive integer") })
            }
        },
    }
}

/// Runs every series, in parallel when allowed; results keep input order.
pub fn run_many(series: &[Series], threads: Option<usize>) -> Result<Vec<RunReport>, CliError> {
    let resolved = series.iter().map(|s| s.config.resolve()).collect::<Result<Vec<_>, _>>()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| std::io::Error::other(e.to_string()))?;
    pool.install(|| resolved.par_iter().map(run_single).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureOutput {
    pub name: &'static str,
    pub table: Table,
    pub script: String,
}

pub fn run_figure(fig: FigureKind, base: &RunConfig, threads: Option<usize>) -> Result<FigureOutput, CliError> {
    let table = match fig {
        FigureKind::Fig2 | FigureKind::Fig3a | FigureKind::Fig3b => {
            let series = time_series(fig, base);
            let reports = run_many(&series, threads)?;
            merge_by_time(&series, &reports)?
        }
        FigureKind::Fig4a | FigureKind::Fig4b => {
            let sweep = eta_sweep(fig, base);
            let flat: Vec<Series> = sweep.iter().flat_map(|(_, s)| s.iter().cloned()).collect();
            let reports = run_many(&flat, threads)?;
            let mut header = vec!["eta".to_string()];
            header.extend(sweep[0].1.iter().map(|s| s.name.clone()));
            let mut table = Table::new(header);
            for (row, (eta, runs)) in sweep.iter().enumerate() {
                let mut values = vec![*eta];
                let start = row * runs.len();
                values.extend(reports[start..start + runs.len()].iter().map(|r| r.final_fidelity));
                table.push(values);
            }
            table
        }
    };
    let name = fig.name();
    let script = plot_script(&format!("{name}.csv"), &table, "F");
    Ok(FigureOutput { name, table, script })
}

/// Joins the `F` columns of runs that share one sampling grid.
fn merge_by_time(series: &[Series], reports: &[RunReport]) -> Result<Table, CliError> {
    let times = reports[0].table.column("t").expect("time column");
    let mut header = vec!["t".to_string()];
    header.extend(series.iter().map(|s| s.name.clone()));
    let mut table = Table::new(header);
    let columns: Vec<Vec<f64>> = reports.iter().map(|r| r.table.column("F").expect("F column")).collect();
    for (s, r) in series.iter().zip(reports) {
        if r.table.column("t").as_ref() != Some(&times) {
            return Err(CliError::Config {
                path: "sample_interval".into(),
                message: format!("series `{}` uses a different time grid", s.name),
            });
        }
    }
    for (i, t) in times.iter().enumerate() {
        let mut row = vec![*t];
        row.extend(columns.iter().map(|c| c[i]));
        table.push(row);
    }
    Ok(table)
}

/// `t, F` under pure collective dephasing of the named state.
pub fn run_baseline(state: &str, gamma_d: f64, t_end: f64, sample_interval: f64) -> Result<Table, CliError> {
    let bad = |path: &str, message: String| CliError::Config { path: path.into(), message };
    if !(gamma_d.is_finite() && gamma_d >= 0.0) {
        return Err(bad("gamma_d", format!("{gamma_d} is not a non-negative rate")));
    }
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(bad("t_end", format!("{t_end} is negative")));
    }
    if !(sample_interval.is_finite() && sample_interval > 0.0) {
        return Err(bad("sample_interval", format!("{sample_interval} is not positive")));
    }
    let named = NamedState::from_str(state).map_err(|e| bad("state", e.to_string()))?;
    let n =
        named.required_qubits().ok_or_else(|| bad("state", format!("cannot infer the qubit count of `{state}`")))?;
    let psi = named.build(n, LogicalZero::Down).map_err(|e| bad("state", e.to_string()))?;
    let rho0 = reduce_qubits(&to_density(&psi, SectorLayout::SpinReduced)?);

    let mut table = Table::new(vec!["t".into(), "F".into()]);
    let samples = (t_end / sample_interval + 1e-9).floor() as usize;
    for k in 0..=samples {
        let t = (k as f64 * sample_interval).min(t_end);
        let rho = collective_dephasing(&rho0, gamma_d, t)?;
        table.push(vec![t, fidelity(&rho0, &rho)?]);
    }
    if table.rows.last().is_some_and(|r| t_end - r[0] > 1e-9 * t_end.max(1.0)) {
        let rho = collective_dephasing(&rho0, gamma_d, t_end)?;
        table.push(vec![t_end, fidelity(&rho0, &rho)?]);
    }
    Ok(table)
}
