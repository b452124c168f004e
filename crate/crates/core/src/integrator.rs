//! Time evolution under a time-independent generator.
//!
//! [`evolve_rk4`] is the production path: classical fixed-step fourth-order
//! Runge–Kutta. [`evolve_expm`] computes `exp(L t) ρ₀` densely and serves as
//! the reference. The spectrum of `L` is O(Γ₀), so the default step
//! `dt = 1e−3 Γ₀⁻¹` is far inside the explicit stability region; rates much
//! larger than 10³Γ₀ would need an implicit method.

use crate::error::{Error, Result};
use crate::expm::{expm, MAX_DENSE_DIM};
use crate::liouvillian::Generator;
use crate::sector::SectorDm;
use crate::C64;

/// Default step in units of Γ₀⁻¹.
pub const DEFAULT_DT: f64 = 1e-3;

const GRID_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rk4Options {
    pub t_end: f64,
    pub dt: f64,
    /// Spacing of recorded samples; must be a multiple of `dt`.
    pub sample_interval: f64,
}

impl Rk4Options {
    pub fn new(t_end: f64, dt: f64, sample_interval: f64) -> Self {
        Self { t_end, dt, sample_interval }
    }

    /// Checks that the grid is usable without integrating anything.
    pub fn validate(&self) -> Result<()> {
        self.grid().map(|_| ())
    }

    /// `(total steps, steps per sample)`.
    fn grid(&self) -> Result<(usize, usize)> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Grid(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::Grid(format!("t_end = {} must be non-negative", self.t_end)));
        }
        if !(self.sample_interval.is_finite() && self.sample_interval > 0.0) {
            return Err(Error::Grid(format!("sample interval {} must be positive", self.sample_interval)));
        }
        let steps_of = |span: f64, what: &str| -> Result<usize> {
            let steps = (span / self.dt).round();
            if (steps * self.dt - span).abs() > GRID_TOL * span.max(1.0) {
                return Err(Error::Grid(format!("{what} {span} is not a multiple of dt = {}", self.dt)));
            }
            Ok(steps as usize)
        };
        let total = steps_of(self.t_end, "t_end")?;
        let per_sample = steps_of(self.sample_interval, "sample interval")?.max(1);
        Ok((total, per_sample))
    }
}

/// Sampled trajectory; `times[k]` belongs to `states[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SectorDm>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, &SectorDm)> {
        self.times.last().copied().zip(self.states.last())
    }
}

/// Integrates with RK4 and records every sample.
pub fn evolve_rk4(g: &Generator, rho0: &SectorDm, opts: &Rk4Options) -> Result<Trajectory> {
    let mut traj = Trajectory { times: vec![], states: vec![] };
    evolve_rk4_with(g, rho0, opts, |t, rho| {
        traj.times.push(t);
        traj.states.push(rho.clone());
    })?;
    Ok(traj)
}

/// Integrates with RK4, calling `visit(t, ρ(t))` at `t = 0`, every
/// `sample_interval`, and at `t_end`.
pub fn evolve_rk4_with<F>(g: &Generator, rho0: &SectorDm, opts: &Rk4Options, mut visit: F) -> Result<()>
where
    F: FnMut(f64, &SectorDm),
{
    g.check_state(rho0)?;
    let (total, per_sample) = opts.grid()?;
    let h = opts.dt;
    let dim = g.dim();

    let mut rho = rho0.clone();
    visit(0.0, &rho);
    if total == 0 {
        return Ok(());
    }

    let zero = C64::new(0.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![zero; dim], vec![zero; dim], vec![zero; dim], vec![zero; dim], vec![zero; dim]);
    let (half, sixth) = (0.5 * h, h / 6.0);

    for step in 1..=total {
        let v = rho.flat_mut().as_slice_mut().expect("contiguous");
        g.apply_unchecked(v, &mut k1);
        axpy(&mut tmp, v, half, &k1);
        g.apply_unchecked(&tmp, &mut k2);
        axpy(&mut tmp, v, half, &k2);
        g.apply_unchecked(&tmp, &mut k3);
        axpy(&mut tmp, v, h, &k3);
        g.apply_unchecked(&tmp, &mut k4);

        let mut finite = true;
        for i in 0..dim {
            let inc = k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i];
            let x = v[i] + inc * sixth;
            finite &= x.re.is_finite() & x.im.is_finite();
            v[i] = x;
        }
        if !finite {
            let max_abs = v.iter().map(|x| x.norm()).filter(|x| !x.is_nan()).fold(0.0, f64::max);
            return Err(Error::NonFinite { step, max_abs });
        }
        if step % per_sample == 0 || step == total {
            visit(step as f64 * h, &rho);
        }
    }
    Ok(())
}

#[inline]
fn axpy(out: &mut [C64], x: &[C64], a: f64, y: &[C64]) {
    for ((o, x), y) in out.iter_mut().zip(x).zip(y) {
        *o = x + y * a;
    }
}

/// `exp(L t) ρ₀` from the dense matrix exponential.
pub fn evolve_expm(g: &Generator, rho0: &SectorDm, t: f64) -> Result<SectorDm> {
    g.check_state(rho0)?;
    if g.dim() > MAX_DENSE_DIM {
        return Err(Error::TooLargeForDense(g.dim()));
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let propagator = expm(&g.to_dense().mapv(|v| v * t));
    let flat = propagator.dot(rho0.flat());
    Ok(SectorDm::from_flat(rho0.n_qubits(), rho0.layout(), flat).expect("same dimension"))
}
