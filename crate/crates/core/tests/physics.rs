//! End-to-end physics checks against independent references.

use approx::assert_abs_diff_eq;
use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use qdf_core::{
    evolve_expm, evolve_rk4, fidelity, make_bell, make_df4, rates::RateTable, reduce_qubits, rotating_frame,
    to_density, BellState, Df4State, Generator, LogicalZero, ModelParams, QubitState, Rk4Options, SectorDm,
    SectorLayout, C64,
};

fn fidelity_at(p: &ModelParams, psi: &QubitState, rho: &SectorDm, t: f64) -> f64 {
    let rho0 = reduce_qubits(&to_density(psi, rho.layout()).unwrap());
    fidelity(&rho0, &rotating_frame(&reduce_qubits(rho), p, t).unwrap()).unwrap()
}

fn final_fidelity(p: &ModelParams, psi: &QubitState, t_end: f64, dt: f64) -> f64 {
    let g = Generator::assemble_reduced(p).unwrap();
    let rho = to_density(psi, SectorLayout::SpinReduced).unwrap();
    let traj = evolve_rk4(&g, &rho, &Rk4Options::new(t_end, dt, t_end)).unwrap();
    let (t, last) = traj.last().unwrap();
    fidelity_at(p, psi, last, t)
}

fn max_diff(a: &SectorDm, b: &SectorDm) -> f64 {
    (a.flat() - b.flat()).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

// Reference values from a separate dense implementation of the same
// equations (scipy expm), not from this crate.
#[test]
fn golden_final_fidelities() {
    let p4 = ModelParams::uniform(4, 2.0, 0.2).unwrap();
    let f = final_fidelity(&p4, &make_df4(Df4State::Psi2, LogicalZero::Down), 50.0, 1e-3);
    assert_abs_diff_eq!(f, 0.7344452368976999, epsilon = 1e-9);

    let p2 = ModelParams::uniform(2, 2.0, 0.2).unwrap();
    let f = final_fidelity(&p2, &make_bell(BellState::C), 50.0, 1e-3);
    assert_abs_diff_eq!(f, 0.4651219059053688, epsilon = 1e-9);
}

#[test]
fn psi1_is_untouched_by_uniform_island() {
    // Both singlets sit inside one barrier each, so every configuration in
    // the support of Ψ1 sees the same rates.
    let p = ModelParams::uniform(4, 2.0, 0.2).unwrap();
    let f = final_fidelity(&p, &make_df4(Df4State::Psi1, LogicalZero::Down), 50.0, 1e-3);
    assert_abs_diff_eq!(f, 1.0, epsilon = 1e-9);
}

#[test]
fn decoupled_detector_is_unitary() {
    let cases = [
        (ModelParams::uniform(2, 2.0, 0.0).unwrap(), make_bell(BellState::B)),
        (ModelParams::uniform(4, 2.0, 0.0).unwrap(), make_df4(Df4State::Psi3, LogicalZero::Down)),
    ];
    for (p, psi) in cases {
        let g = Generator::assemble_reduced(&p).unwrap();
        let rho = to_density(&psi, SectorLayout::SpinReduced).unwrap();
        let traj = evolve_rk4(&g, &rho, &Rk4Options::new(20.0, 1e-3, 2.0)).unwrap();
        for (t, state) in traj.times.iter().zip(&traj.states) {
            let q = reduce_qubits(state);
            let purity: C64 = q.dot(&q).diag().sum();
            assert_abs_diff_eq!(purity.re, 1.0, epsilon = 1e-8);
            assert_abs_diff_eq!(fidelity_at(&p, &psi, state, *t), 1.0, epsilon = 1e-8);
        }
    }
}

/// With no drive each diagonal configuration `z` is an independent
/// birth–death chain a ⇄ b ⇄ c over the summed one-electron sector.
fn chain_matrix(p: &ModelParams, z: usize) -> Matrix3<f64> {
    let r = *RateTable::new(p).unwrap().get(z);
    let (gl, gr, glp, grp) = (r.gamma_l, r.gamma_r, r.gamma_l_primed, r.gamma_r_primed);
    Matrix3::new(-2.0 * gl, gr, 0.0, 2.0 * gl, -(glp + gr), 2.0 * grp, 0.0, glp, -2.0 * grp)
}

/// `exp(M t) x` for a tridiagonal `M` with positive off-diagonals, via the
/// diagonal similarity that makes it symmetric.
fn chain_solution(m: &Matrix3<f64>, x: Vector3<f64>, t: f64) -> Vector3<f64> {
    let d1 = (m[(1, 0)] / m[(0, 1)]).sqrt();
    let d2 = d1 * (m[(2, 1)] / m[(1, 2)]).sqrt();
    let d = Vector3::new(1.0, d1, d2);
    let s = Matrix3::from_fn(|i, j| m[(i, j)] * d[j] / d[i]);
    let s = (s + s.transpose()) * 0.5;
    let eig = SymmetricEigen::new(s);
    let exp_diag = Matrix3::from_diagonal(&eig.eigenvalues.map(|l| (l * t).exp()));
    let exp_s = eig.eigenvectors * exp_diag * eig.eigenvectors.transpose();
    let y = exp_s * x.component_div(&d);
    y.component_mul(&d)
}

#[test]
fn undriven_populations_follow_rate_chain() {
    let mut p = ModelParams::uniform(4, 0.0, 0.6).unwrap();
    p.primed_scale = 0.7;
    let g = Generator::assemble_reduced(&p).unwrap();
    let psi = make_df4(Df4State::Psi2, LogicalZero::Down);
    let rho = to_density(&psi, SectorLayout::SpinReduced).unwrap();
    let traj = evolve_rk4(&g, &rho, &Rk4Options::new(6.0, 1e-3, 1.5)).unwrap();
    for (t, state) in traj.times.iter().zip(&traj.states) {
        for z in 0..16 {
            let x0 = Vector3::new(psi.amplitudes()[z].norm_sqr(), 0.0, 0.0);
            let want = chain_solution(&chain_matrix(&p, z), x0, *t);
            for k in 0..3 {
                let got = state.sector(k)[[z, z]];
                assert_abs_diff_eq!(got.re, want[k], epsilon = 1e-11);
                assert_abs_diff_eq!(got.im, 0.0, epsilon = 1e-14);
            }
        }
    }
}

#[test]
fn step_halving_converges() {
    let p = ModelParams::uniform(4, 2.0, 0.6).unwrap();
    let psi = make_df4(Df4State::Psi3, LogicalZero::Down);
    let coarse = final_fidelity(&p, &psi, 50.0, 1e-3);
    let fine = final_fidelity(&p, &psi, 50.0, 5e-4);
    assert!((coarse - fine).abs() < 1e-9, "{coarse} vs {fine}");
}

#[test]
fn two_qubit_rk4_matches_expm() {
    for zeta in [0.2, 0.6] {
        let p = ModelParams::uniform(2, 2.0, zeta).unwrap();
        let g = Generator::assemble_reduced(&p).unwrap();
        let rho = to_density(&make_bell(BellState::D), SectorLayout::SpinReduced).unwrap();
        let traj = evolve_rk4(&g, &rho, &Rk4Options::new(50.0, 1e-3, 50.0)).unwrap();
        let exact = evolve_expm(&g, &rho, 50.0).unwrap();
        assert!(max_diff(traj.last().unwrap().1, &exact) < 1e-8);
    }
}

#[test]
fn reduced_and_full_trajectories_agree() {
    let p = ModelParams::uniform(4, 2.0, 0.6).unwrap();
    let psi = make_df4(Df4State::Psi2, LogicalZero::Down);
    let full = Generator::assemble(&p).unwrap();
    let reduced = Generator::assemble_reduced(&p).unwrap();
    assert_eq!((full.dim(), reduced.dim()), (1024, 768));
    let opts = Rk4Options::new(5.0, 1e-3, 0.5);
    let a = evolve_rk4(&full, &to_density(&psi, SectorLayout::Full).unwrap(), &opts).unwrap();
    let b = evolve_rk4(&reduced, &to_density(&psi, SectorLayout::SpinReduced).unwrap(), &opts).unwrap();
    for ((t, x), y) in a.times.iter().zip(&a.states).zip(&b.states) {
        // the two one-electron sectors stay equal and project onto `b`
        assert!(max_diff(&x.spin_reduced(), y) < 1e-12);
        let (fx, fy) = (fidelity_at(&p, &psi, x, *t), fidelity_at(&p, &psi, y, *t));
        assert_abs_diff_eq!(fx, fy, epsilon = 1e-10);
    }
}

#[test]
fn evolution_preserves_trace_hermiticity_positivity() {
    let p = ModelParams::uniform(2, 2.0, 0.6).unwrap();
    let g = Generator::assemble_reduced(&p).unwrap();
    for b in [BellState::A, BellState::B, BellState::C, BellState::D] {
        let rho = to_density(&make_bell(b), SectorLayout::SpinReduced).unwrap();
        let traj = evolve_rk4(&g, &rho, &Rk4Options::new(50.0, 1e-3, 0.5)).unwrap();
        for s in &traj.states {
            assert!((s.total_trace() - C64::from(1.0)).norm() < 1e-9);
            assert!(s.hermiticity_defect() < 1e-9);
            assert!(s.min_diagonal() > -1e-9);
            for tr in s.sector_traces() {
                assert!((-1e-9..=1.0 + 1e-9).contains(&tr.re));
            }
        }
    }
}
