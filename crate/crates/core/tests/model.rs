use proptest::prelude::*;
use qdf_core::model::*;
use qdf_core::Error;

#[test]
fn config_index_roundtrip() {
    for z in QubitConfig::all(4) {
        assert_eq!(QubitConfig::from_spins(&z.spins()).unwrap(), z);
        assert_eq!(QubitConfig::from_index(4, z.index()).unwrap(), z);
    }
    assert!(QubitConfig::from_index(2, 4).is_err());
    assert!(QubitConfig::from_spins(&[1, 0]).is_err());
}

#[test]
fn two_qubit_labels() {
    let labels: Vec<_> =
        [[-1, -1], [-1, 1], [1, -1], [1, 1]].iter().map(|s| QubitConfig::from_spins(s).unwrap().label()).collect();
    assert_eq!(labels, ["A", "B", "C", "D"]);
}

#[test]
fn flip_examples() {
    let a = QubitConfig::from_spins(&[-1, -1]).unwrap();
    assert_eq!(flip(a, 0).unwrap().label(), "C");
    assert_eq!(flip(a, 1).unwrap().label(), "B");
    let aa = QubitConfig::from_spins(&[-1, -1, -1, -1]).unwrap();
    // qubit 3 (one-based) lives in the second pair.
    assert_eq!(flip(aa, 2).unwrap().label(), "AC");
    assert_eq!(flip(aa, 4), Err(Error::QubitIndex { index: 4, n_qubits: 4 }));
}

#[test]
fn flips_reach_every_config() {
    let start = QubitConfig::from_index(4, 0).unwrap();
    let mut seen = std::collections::HashSet::from([start]);
    let mut frontier = vec![start];
    while let Some(z) = frontier.pop() {
        for j in 0..4 {
            let w = flip(z, j).unwrap();
            if seen.insert(w) {
                frontier.push(w);
            }
        }
    }
    assert_eq!(seen.len(), 16);
}

#[test]
fn energy_examples() {
    let mut p = ModelParams::uniform(2, 2.0, 0.2).unwrap();
    for z in QubitConfig::all(2) {
        assert_eq!(config_energy(z, &p), 0.0);
    }
    p.epsilon = vec![1.0, 2.0];
    p.j_coupling = vec![0.5];
    let z = QubitConfig::from_spins(&[1, -1]).unwrap();
    assert_eq!(config_energy(z, &p), -1.5);
}

#[test]
fn energy_matches_hamiltonian_diagonal() {
    // Build the full 16×16 H_qb from Pauli products and read the diagonal.
    let mut p = ModelParams::uniform(4, 2.0, 0.2).unwrap();
    p.epsilon = vec![0.3, -0.7, 0.11, 0.5];
    p.j_coupling = vec![0.25, -0.4, 0.9];
    let dim = 16;
    let mut h = vec![vec![0.0f64; dim]; dim];
    let sz = |b: usize, i: usize| if b >> i & 1 == 1 { 1.0 } else { -1.0 };
    for b in 0..dim {
        for i in 0..4 {
            h[b ^ (1 << i)][b] += p.omega[i];
            h[b][b] += p.epsilon[i] * sz(b, i);
        }
        for i in 0..3 {
            h[b][b] += p.j_coupling[i] * sz(b, i) * sz(b, i + 1);
        }
    }
    for z in QubitConfig::all(4) {
        assert!((config_energy(z, &p) - h[z.index()][z.index()]).abs() < 1e-14);
    }

    let j = 0.37;
    let mut p = ModelParams::uniform(4, 2.0, 0.2).unwrap();
    p.j_coupling = vec![j; 3];
    let all_down = QubitConfig::from_index(4, 0).unwrap();
    assert!((config_energy(all_down, &p) - 3.0 * j).abs() < 1e-15);
}

#[test]
fn scenario_case_i() {
    let base = ModelParams::uniform(4, 2.0, 0.2).unwrap();
    let p = apply_scenario(&base, &Scenario::new(ScenarioKind::CaseI, 0.05)).unwrap();
    assert!((p.omega[2] - 1.9).abs() < 1e-15);
    assert_eq!(p.epsilon[2], 0.05);
    assert!((p.gamma0[2] + p.delta_gamma[2] - 0.95 * 1.2).abs() < 1e-15);
    assert!((p.gamma0[2] - p.delta_gamma[2] - 0.95 * 0.8).abs() < 1e-15);
    for k in [0, 1, 3] {
        assert_eq!(p.omega[k], base.omega[k]);
        assert_eq!(p.gamma0[k], base.gamma0[k]);
    }
}

#[test]
fn scenario_case_ii_leaves_others_bitwise() {
    let base = ModelParams::uniform(4, 2.0, 0.2).unwrap();
    let p = apply_scenario(&base, &Scenario::new(ScenarioKind::CaseII, 0.05)).unwrap();
    for k in [0, 3] {
        assert_eq!(p.omega[k].to_bits(), base.omega[k].to_bits());
        assert_eq!(p.epsilon[k].to_bits(), base.epsilon[k].to_bits());
        assert_eq!(p.gamma0[k].to_bits(), base.gamma0[k].to_bits());
        assert_eq!(p.delta_gamma[k].to_bits(), base.delta_gamma[k].to_bits());
    }
    for k in [1, 2] {
        assert!((p.omega[k] - 1.9).abs() < 1e-15);
        assert_eq!(p.epsilon[k], 0.05);
    }
}

#[test]
fn scenario_errors() {
    let base = ModelParams::uniform(4, 2.0, 0.2).unwrap();
    assert_eq!(apply_scenario(&base, &Scenario::new(ScenarioKind::CaseI, 1.0)), Err(Error::Eta(1.0)));
    assert_eq!(apply_scenario(&base, &Scenario::new(ScenarioKind::CaseI, -0.1)), Err(Error::Eta(-0.1)));
    assert!(matches!(
        apply_scenario(&base, &Scenario::new(ScenarioKind::Custom(vec![7]), 0.1)),
        Err(Error::QubitIndex { index: 7, .. })
    ));
    let two = ModelParams::uniform(2, 2.0, 0.2).unwrap();
    assert!(apply_scenario(&two, &Scenario::new(ScenarioKind::CaseIII, 0.1)).is_err());
}

#[test]
fn params_validation() {
    assert!(matches!(ModelParams::uniform(4, 2.0, 1.0), Err(Error::NonPositiveRate { .. })));
    let mut p = ModelParams::uniform(4, 2.0, 0.2).unwrap();
    p.right_barrier = vec![];
    assert!(matches!(p.validate(), Err(Error::Barrier(_))));
    let mut p = ModelParams::uniform(4, 2.0, 0.2).unwrap();
    p.left_barrier = vec![0, 1, 2];
    assert!(matches!(p.validate(), Err(Error::Barrier(_))));
    let mut p = ModelParams::uniform(4, 2.0, 0.2).unwrap();
    p.j_coupling = vec![0.0; 4];
    assert!(matches!(p.validate(), Err(Error::Length { field: "j_coupling", .. })));
    assert_eq!(default_barriers(4).unwrap(), (vec![0, 1], vec![2, 3]));
    assert_eq!(default_barriers(2).unwrap(), (vec![0], vec![1]));
}

fn arb_params() -> impl Strategy<Value = ModelParams> {
    (
        prop::collection::vec(0.0..3.0f64, 4),
        prop::collection::vec(-1.0..1.0f64, 4),
        prop::collection::vec(-1.0..1.0f64, 3),
        prop::collection::vec(0.0..0.9f64, 4),
    )
        .prop_map(|(omega, epsilon, j, zeta)| {
            let mut p = ModelParams::uniform(4, 1.0, 0.0).unwrap();
            p.omega = omega;
            p.epsilon = epsilon;
            p.j_coupling = j;
            p.delta_gamma = zeta;
            p
        })
}

proptest! {
    #[test]
    fn flip_is_involution(idx in 0usize..16, j in 0usize..4) {
        let z = QubitConfig::from_index(4, idx).unwrap();
        prop_assert_eq!(flip(flip(z, j).unwrap(), j).unwrap(), z);
        prop_assert_ne!(flip(z, j).unwrap(), z);
    }

    #[test]
    fn global_flip_negates_bias_terms(p in arb_params(), idx in 0usize..16) {
        let z = QubitConfig::from_index(4, idx).unwrap();
        let zf = QubitConfig::from_index(4, idx ^ 0xF).unwrap();
        let mut unbiased = p.clone();
        unbiased.epsilon = vec![0.0; 4];
        let bias: f64 = (0..4).map(|i| p.epsilon[i] * f64::from(z.spin(i))).sum();
        prop_assert!((config_energy(zf, &p) - (config_energy(z, &p) - 2.0 * bias)).abs() < 1e-12);
        prop_assert!((config_energy(zf, &unbiased) - config_energy(z, &unbiased)).abs() < 1e-12);
    }

    #[test]
    fn zero_eta_is_identity(p in arb_params(), case in 0usize..4) {
        let kind = [ScenarioKind::Uniform, ScenarioKind::CaseI, ScenarioKind::CaseII, ScenarioKind::CaseIII][case].clone();
        prop_assert_eq!(apply_scenario(&p, &Scenario::new(kind, 0.0)).unwrap(), p);
    }

    #[test]
    fn uniform_scenario_is_identity(p in arb_params(), eta in 0.0..0.99f64) {
        prop_assert_eq!(apply_scenario(&p, &Scenario::new(ScenarioKind::Uniform, eta)).unwrap(), p);
    }
}
