//! JSON run configuration and its resolution into simulation inputs.
//!
//! Qubit indices in the file (`affected`, `left_barrier`, `right_barrier`)
//! are 1-based; the core library uses 0-based indices.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use qdf_core::{
    apply_scenario, frame_frequencies, integrator::DEFAULT_DT, model::default_barriers, LogicalZero, ModelParams,
    NamedState, QubitState, Rk4Options, Scenario, ScenarioKind, SectorLayout,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioName {
    Uniform,
    CaseI,
    CaseIi,
    CaseIii,
    Custom,
}

impl ScenarioName {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioName::Uniform => "uniform",
            ScenarioName::CaseI => "case_i",
            ScenarioName::CaseIi => "case_ii",
            ScenarioName::CaseIii => "case_iii",
            ScenarioName::Custom => "custom",
        }
    }
}

/// Which frequencies the rotating frame uses in non-uniform runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// Per-qubit frequencies after the scenario is applied.
    #[default]
    Modified,
    /// Frequencies of the uniform parameters before the scenario.
    Baseline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Zero {
    #[default]
    Down,
    Up,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Sectors {
    /// Three sectors, the two one-electron sectors summed.
    #[default]
    Reduced,
    /// All four sectors.
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Inferred from the state when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_qubits: Option<usize>,
    pub state: String,
    pub omega: f64,
    /// Per-qubit bias; zeros when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Vec<f64>>,
    /// Nearest-neighbour couplings; zeros when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<f64>>,
    pub zeta: f64,
    pub eta: f64,
    pub scenario: ScenarioName,
    /// Affected qubits for `custom`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub affected: Option<Vec<usize>>,
    pub primed_scale: f64,
    pub t_end: f64,
    pub dt: f64,
    pub sample_interval: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub left_barrier: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub right_barrier: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub frame: Frame,
    pub logical_zero: Zero,
    pub sectors: Sectors,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_qubits: None,
            state: "psi2".into(),
            omega: 2.0,
            epsilon: None,
            j: None,
            zeta: 0.2,
            eta: 0.0,
            scenario: ScenarioName::Uniform,
            affected: None,
            primed_scale: 1.0,
            t_end: 50.0,
            dt: DEFAULT_DT,
            sample_interval: 0.5,
            left_barrier: None,
            right_barrier: None,
            output: None,
            frame: Frame::Modified,
            logical_zero: Zero::Down,
            sectors: Sectors::Reduced,
        }
    }
}

/// Everything a single run needs, validated.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub params: ModelParams,
    pub frame: Vec<f64>,
    pub state: QubitState,
    pub layout: SectorLayout,
    pub options: Rk4Options,
}

fn bad(path: &str, message: impl Into<String>) -> CliError {
    CliError::Config { path: path.into(), message: message.into() }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            bad(if path == "." { "<root>" } else { &path }, e.into_inner().to_string())
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| bad("<file>", format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn resolve(&self) -> Result<ResolvedRun, CliError> {
        let named = NamedState::from_str(&self.state).map_err(|e| bad("state", e.to_string()))?;
        let n = match (self.n_qubits, named.required_qubits()) {
            (Some(n), Some(req)) if n != req => {
                return Err(bad("n_qubits", format!("state `{}` needs {req} qubits, got {n}", self.state)));
            }
            (Some(n), _) => n,
            (None, Some(req)) => req,
            (None, None) => return Err(bad("state", "cannot infer the qubit count; set n_qubits")),
        };
        let zero = match self.logical_zero {
            Zero::Down => LogicalZero::Down,
            Zero::Up => LogicalZero::Up,
        };
        let state = named.build(n, zero).map_err(|e| bad("state", e.to_string()))?;

        if !self.omega.is_finite() {
            return Err(bad("omega", "must be finite"));
        }
        if !(self.zeta.is_finite() && (0.0..1.0).contains(&self.zeta)) {
            return Err(bad("zeta", format!("{} outside [0, 1)", self.zeta)));
        }
        let mut base = ModelParams::uniform(n, self.omega, self.zeta).map_err(|e| bad("n_qubits", e.to_string()))?;
        if let Some(eps) = &self.epsilon {
            if eps.len() != n {
                return Err(bad("epsilon", format!("expected {n} values, got {}", eps.len())));
            }
            base.epsilon = eps.clone();
        }
        if let Some(j) = &self.j {
            if j.len() != n - 1 {
                return Err(bad("j", format!("expected {} values, got {}", n - 1, j.len())));
            }
            base.j_coupling = j.clone();
        }
        base.primed_scale = self.primed_scale;
        self.resolve_barriers(&mut base)?;
        base.validate().map_err(|e| {
            let path = match &e {
                qdf_core::Error::Length { field, .. } | qdf_core::Error::Parameter { field, .. } => match *field {
                    "j_coupling" => "j",
                    f => f,
                },
                qdf_core::Error::Barrier(_) | qdf_core::Error::QubitIndex { .. } => "left_barrier",
                _ => "<params>",
            };
            bad(path, e.to_string())
        })?;

        let kind = match (self.scenario, &self.affected) {
            (ScenarioName::Custom, Some(q)) => {
                let zero_based = q
                    .iter()
                    .map(|&i| one_based(i, n).ok_or_else(|| bad("affected", format!("qubit {i} not in 1..={n}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                ScenarioKind::Custom(zero_based)
            }
            (ScenarioName::Custom, None) => return Err(bad("affected", "required for the custom scenario")),
            (_, Some(_)) => return Err(bad("affected", "only allowed with the custom scenario")),
            (ScenarioName::Uniform, None) => ScenarioKind::Uniform,
            (ScenarioName::CaseI, None) => ScenarioKind::CaseI,
            (ScenarioName::CaseIi, None) => ScenarioKind::CaseII,
            (ScenarioName::CaseIii, None) => ScenarioKind::CaseIII,
        };
        let scenario = Scenario::new(kind, self.eta);
        let params = apply_scenario(&base, &scenario).map_err(|e| match e {
            qdf_core::Error::QubitIndex { .. } => {
                bad("scenario", format!("`{}` on {n} qubits: {e}", self.scenario.as_str()))
            }
            _ => bad("eta", e.to_string()),
        })?;
        let frame = match self.frame {
            Frame::Modified => frame_frequencies(&params),
            Frame::Baseline => frame_frequencies(&base),
        };

        let options = Rk4Options::new(self.t_end, self.dt, self.sample_interval);
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(bad("dt", format!("{} is not positive", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(bad("t_end", format!("{} is negative", self.t_end)));
        }
        if !(self.sample_interval.is_finite() && self.sample_interval > 0.0) {
            return Err(bad("sample_interval", format!("{} is not positive", self.sample_interval)));
        }
        if Rk4Options::new(self.t_end, self.dt, self.t_end.max(self.dt)).validate().is_err() {
            return Err(bad("t_end", "must be a multiple of dt"));
        }
        options.validate().map_err(|e| bad("sample_interval", e.to_string()))?;

        let layout = match self.sectors {
            Sectors::Reduced => SectorLayout::SpinReduced,
            Sectors::Full => SectorLayout::Full,
        };
        Ok(ResolvedRun { params, frame, state, layout, options })
    }

    fn resolve_barriers(&self, p: &mut ModelParams) -> Result<(), CliError> {
        let n = p.n_qubits;
        let convert = |path: &str, list: &[usize]| -> Result<Vec<usize>, CliError> {
            list.iter()
                .map(|&i| one_based(i, n).ok_or_else(|| bad(path, format!("qubit {i} not in 1..={n}"))))
                .collect()
        };
        let complement = |side: &[usize]| (0..n).filter(|q| !side.contains(q)).collect::<Vec<_>>();
        let (left, right) = match (&self.left_barrier, &self.right_barrier) {
            (None, None) => default_barriers(n).map_err(|e| bad("n_qubits", e.to_string()))?,
            (Some(l), None) => {
                let l = convert("left_barrier", l)?;
                let r = complement(&l);
                (l, r)
            }
            (None, Some(r)) => {
                let r = convert("right_barrier", r)?;
                (complement(&r), r)
            }
            (Some(l), Some(r)) => (convert("left_barrier", l)?, convert("right_barrier", r)?),
        };
        p.left_barrier = left;
        p.right_barrier = right;
        Ok(())
    }
}

fn one_based(i: usize, n: usize) -> Option<usize> {
    (1..=n).contains(&i).then(|| i - 1)
}
