use std::f64::consts::FRAC_1_SQRT_2;

use ndarray::Array1;
use qdf_core::model::QubitConfig;
use qdf_core::states::*;
use qdf_core::{Error, SectorLayout, C64};

const TOL: f64 = 1e-15;

fn amp(s: &QubitState, bits: &str) -> C64 {
    s.amplitudes()[logical_index(bits, LogicalZero::Down)]
}

/// Independent 16-dim construction from explicit tensor products.
fn kron(a: &[f64], b: &[f64]) -> Vec<f64> {
    // `a` holds the lower-numbered qubits (fastest index).
    let mut out = vec![0.0; a.len() * b.len()];
    for (j, y) in b.iter().enumerate() {
        for (i, x) in a.iter().enumerate() {
            out[j * a.len() + i] = x * y;
        }
    }
    out
}

#[test]
fn psi1_amplitudes() {
    let psi1 = make_df4(Df4State::Psi1, LogicalZero::Down);
    assert!((amp(&psi1, "0101") - C64::from(0.5)).norm() < TOL);
    assert!((amp(&psi1, "0110") - C64::from(-0.5)).norm() < TOL);
    assert!((amp(&psi1, "1001") - C64::from(-0.5)).norm() < TOL);
    assert!((amp(&psi1, "1010") - C64::from(0.5)).norm() < TOL);
    // singlet on qubits (1,2): |01⟩ − |10⟩ with qubit 1 as the fastest bit
    let s = [0.0, -FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0];
    let oracle = kron(&s, &s);
    for (k, v) in oracle.iter().enumerate() {
        assert!((psi1.amplitudes()[k] - C64::from(*v)).norm() < 1e-15);
    }
}

#[test]
fn psi2_amplitudes_and_overlaps() {
    let psi1 = make_df4(Df4State::Psi1, LogicalZero::Down);
    let psi2 = make_df4(Df4State::Psi2, LogicalZero::Down);
    assert!((amp(&psi2, "0011").re - 1.0 / 3f64.sqrt()).abs() < TOL);
    assert!((amp(&psi2, "1100").re - 1.0 / 3f64.sqrt()).abs() < TOL);
    assert!(psi1.inner(&psi2).norm() < TOL);
    assert!((psi2.inner(&psi2).re - 1.0).abs() < 1e-14);
}

#[test]
fn psi3_is_relabeled_psi1() {
    let psi1 = make_df4(Df4State::Psi1, LogicalZero::Down);
    let psi3 = make_df4(Df4State::Psi3, LogicalZero::Down);
    // singlets on (1,4) and (3,2): nonzero only where q1≠q4 and q2≠q3
    for z in QubitConfig::all(4) {
        let s = z.spins();
        let expected_nonzero = s[0] != s[3] && s[1] != s[2];
        assert_eq!(psi3.amplitudes()[z.index()].norm() > 0.0, expected_nonzero, "{z}");
    }
    // ⟨0011|Ψ3⟩: q1=0,q4=1 → +; (q3,q2)=(1,0) → −  ⇒ −1/2
    assert!((amp(&psi3, "0011") - C64::from(-0.5)).norm() < TOL);
    let overlap = psi1.inner(&psi3);
    assert!((overlap - C64::from(0.5)).norm() < TOL);
    assert_eq!(
        overlap,
        make_df4(Df4State::Psi1, LogicalZero::Down).inner(&make_df4(Df4State::Psi3, LogicalZero::Down))
    );
}

#[test]
fn df_states_have_zero_total_spin() {
    for which in [Df4State::Psi1, Df4State::Psi2, Df4State::Psi3] {
        for zero in [LogicalZero::Down, LogicalZero::Up] {
            let s = make_df4(which, zero);
            for z in QubitConfig::all(4) {
                let applied = f64::from(z.total_spin()) * s.amplitudes()[z.index()];
                assert_eq!(applied, C64::from(0.0));
            }
        }
    }
}

#[test]
fn bell_states() {
    let h = FRAC_1_SQRT_2;
    let by_label = |s: &QubitState| {
        // (A, B, C, D) = indices (0, 2, 1, 3)
        [0, 2, 1, 3].map(|i| s.amplitudes()[i].re)
    };
    assert_eq!(by_label(&make_bell(BellState::B)), [h, 0.0, 0.0, -h]);
    assert_eq!(by_label(&make_bell(BellState::C)), [0.0, h, h, 0.0]);
    assert_eq!(by_label(&make_bell(BellState::D)), [0.0, h, -h, 0.0]);
    let all = [BellState::A, BellState::B, BellState::C, BellState::D].map(make_bell);
    for (i, x) in all.iter().enumerate() {
        for (j, y) in all.iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((x.inner(y) - C64::from(expected)).norm() < 1e-15);
        }
    }
}

#[test]
fn singlet_density() {
    let dm = to_density(&make_bell(BellState::D), SectorLayout::Full).unwrap();
    let a = dm.sector(0);
    // B = index 2, C = index 1
    assert!((a[[2, 2]].re - 0.5).abs() < TOL);
    assert!((a[[1, 1]].re - 0.5).abs() < TOL);
    assert!((a[[1, 2]].re + 0.5).abs() < TOL);
    assert!((a[[2, 1]].re + 0.5).abs() < TOL);
    assert_eq!(a[[0, 0]], C64::from(0.0));
    assert!((dm.total_trace().re - 1.0).abs() < TOL);
    for k in 1..4 {
        assert!(dm.sector(k).iter().all(|v| *v == C64::from(0.0)));
    }
    assert!(dm.hermiticity_defect() < TOL);
}

#[test]
fn density_is_rank_one() {
    let s = make_df4(Df4State::Psi2, LogicalZero::Down);
    let dm = to_density(&s, SectorLayout::SpinReduced).unwrap();
    let a = dm.sector(0).to_owned();
    let a2 = a.dot(&a);
    for (x, y) in a.iter().zip(a2.iter()) {
        assert!((x - y).norm() < 1e-15);
    }
}

#[test]
fn unnormalized_rejected() {
    let amps = Array1::from(vec![C64::from(1.0), C64::from(1.0), C64::from(0.0), C64::from(0.0)]);
    assert!(matches!(QubitState::new(2, amps.clone()), Err(Error::NotNormalized(_))));
    let s = QubitState::normalized(2, amps).unwrap();
    assert!((s.inner(&s).re - 1.0).abs() < 1e-15);
}

#[test]
fn logical_zero_swap() {
    let down = make_df4(Df4State::Psi2, LogicalZero::Down);
    let up = make_df4(Df4State::Psi2, LogicalZero::Up);
    for idx in 0..16 {
        assert_eq!(down.amplitudes()[idx], up.amplitudes()[idx ^ 0xF]);
    }
}

#[test]
fn named_state_parsing() {
    for name in NamedState::NAMES {
        let s: NamedState = name.parse().unwrap();
        assert_eq!(s.to_string(), name);
    }
    let custom: NamedState = "custom:1, 0, 0, -1e-1+2i".parse().unwrap();
    assert_eq!(custom, NamedState::Custom(vec![C64::from(1.0), C64::from(0.0), C64::from(0.0), C64::new(-0.1, 2.0)]));
    let custom: NamedState = "custom:-i, 2.5j, 1e-3-2e+1i".parse().unwrap();
    assert_eq!(custom, NamedState::Custom(vec![C64::new(0.0, -1.0), C64::new(0.0, 2.5), C64::new(1e-3, -20.0)]));
    assert!("psi9".parse::<NamedState>().is_err());
    assert!("custom:1,x".parse::<NamedState>().is_err());
    let bell: NamedState = "bell-c".parse().unwrap();
    assert_eq!(bell.build(4, LogicalZero::Down), Err(Error::StateQubits { expected: 2, got: 4 }));
    let odd: NamedState = "custom:1,0,0".parse().unwrap();
    assert!(odd.build(2, LogicalZero::Down).is_err());
}
