mod common;

use common::{minus, p0, p1, plus, rng, swap_dilation};
use qmaps::channels::{channel_from_dilation, fresh_environment_dilation, standard_channel};
use qmaps::linalg::{c, herm_eig, ComplexMatrix};
use qmaps::maps::state_basis;
use qmaps::random;
use qmaps::tomography::{
    ancilla_assisted, ncp_demo, operation_basis, reconstruct_map, reconstruct_process_tensor,
    simulate_sequence, simulate_state_tomography, OperationBasis, PreparationProtocol,
};
use qmaps::{
    build_process_tensor, check_cp, check_tp, is_markov, non_markovianity, Dilation, Distance,
    OperationSequence, StandardChannel,
};

fn single_step(channel_u: ComplexMatrix, tau: &ComplexMatrix, rho: &ComplexMatrix) -> Dilation {
    Dilation::product(rho, tau, vec![channel_u]).unwrap()
}

#[test]
fn operation_basis_duals() {
    let basis = operation_basis(2).unwrap();
    assert_eq!(basis.len(), 16);
    for (i, e) in basis.elements().iter().enumerate() {
        assert!(herm_eig(e.bform()).unwrap().min_eigenvalue() > -1e-12);
        for (j, dual) in basis.duals().iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((dual.hs_inner(e.bform()) - c(expected, 0.0)).norm() < 1e-10);
        }
    }
    // Project onto Π₀ and reprepare Π₀.
    let e = basis.element(2, 2);
    assert!(e.apply(&p0()).unwrap().max_abs_diff(&p0()) < 1e-12);
    assert!(e.apply(&p1()).unwrap().frobenius_norm() < 1e-12);
}

#[test]
fn identity_operations_under_trivial_dynamics_return_the_initial_state() {
    let mut r = rng(31);
    let rho = random::state(2, &mut r);
    let dil = Dilation::product(&rho, &p0(), vec![ComplexMatrix::identity(4); 2]).unwrap();
    let rec = simulate_sequence(&dil, &OperationSequence::identity(2, 2)).unwrap();
    assert!(rec.output_state.max_abs_diff(&rho) < 1e-12);
    assert!((rec.success_probability - 1.0).abs() < 1e-12);
}

#[test]
fn uncorrelated_channel_tomography_recovers_the_channel() {
    let mut r = rng(32);
    let basis = state_basis(2).unwrap();
    for _ in 0..5 {
        let tau = random::state(2, &mut r);
        let u = random::unitary(4, &mut r);
        let dil = single_step(u.clone(), &tau, &random::state(2, &mut r));
        let map =
            reconstruct_map(&simulate_state_tomography(&dil, &basis).unwrap(), &basis).unwrap();
        assert!(check_cp(&map).holds && check_tp(&map).holds);
        let truth = channel_from_dilation(&tau, &u).unwrap();
        assert!(
            map.to_bform()
                .matrix()
                .max_abs_diff(truth.to_bform().matrix())
                < 1e-9
        );
    }
}

#[test]
fn amplitude_damping_is_recovered() {
    let truth = standard_channel(&StandardChannel::AmplitudeDamping { gamma: 0.3 }).unwrap();
    let dil = qmaps::stinespring_dilate(&truth).unwrap();
    let basis = state_basis(2).unwrap();
    let map = reconstruct_map(&simulate_state_tomography(&dil, &basis).unwrap(), &basis).unwrap();
    assert!(
        map.to_bform()
            .matrix()
            .max_abs_diff(truth.to_bform().matrix())
            < 1e-10
    );
}

#[test]
fn ancilla_assisted_tomography() {
    let mut r = rng(33);
    let id = single_step(ComplexMatrix::identity(4), &p0(), &p0());
    let expected = qmaps::QuantumMap::identity(2).to_bform();
    assert!(
        ancilla_assisted(&id)
            .unwrap()
            .matrix()
            .max_abs_diff(expected.matrix())
            < 1e-12
    );

    let depol = standard_channel(&StandardChannel::Depolarizing { d: 2, p: 1.0 }).unwrap();
    let dil = qmaps::stinespring_dilate(&depol).unwrap();
    let half = ComplexMatrix::identity(4).scale_real(0.5);
    assert!(ancilla_assisted(&dil).unwrap().matrix().max_abs_diff(&half) < 1e-10);

    for _ in 0..5 {
        let tau = random::state(3, &mut r);
        let u = random::unitary(6, &mut r);
        let dil = single_step(u.clone(), &tau, &random::state(2, &mut r));
        let truth = channel_from_dilation(&tau, &u).unwrap().to_bform();
        assert!(
            ancilla_assisted(&dil)
                .unwrap()
                .matrix()
                .max_abs_diff(truth.matrix())
                < 1e-10
        );
    }

    let correlated = random::dilation(2, 2, 1, false, &mut r);
    assert!(ancilla_assisted(&correlated).is_err());
}

#[test]
fn process_tensor_tomography_matches_direct_construction() {
    let mut r = rng(34);
    let basis = operation_basis(2).unwrap();
    for k in [1, 2] {
        let dil = random::dilation(2, 2, k, false, &mut r);
        let rebuilt = reconstruct_process_tensor(&dil, &basis).unwrap();
        let direct = build_process_tensor(&dil).unwrap();
        assert!(rebuilt.choi().max_abs_diff(direct.choi()) < 1e-8, "k={k}");
    }
}

#[test]
fn trivial_dynamics_tomography_is_the_identity_superchannel() {
    let dil = single_step(ComplexMatrix::identity(4), &p0(), &plus());
    let rebuilt = reconstruct_process_tensor(&dil, &operation_basis(2).unwrap()).unwrap();
    let sc = qmaps::build_superchannel(&dil).unwrap();
    assert!(rebuilt.choi().max_abs_diff(sc.choi()) < 1e-9);
}

#[test]
fn process_tensor_tomography_is_basis_independent() {
    let mut r = rng(35);
    let dil = random::dilation(2, 2, 2, false, &mut r);
    let a = reconstruct_process_tensor(&dil, &operation_basis(2).unwrap()).unwrap();
    let u = random::unitary(2, &mut r);
    let rotated: Vec<ComplexMatrix> = state_basis(2)
        .unwrap()
        .iter()
        .map(|s| u.sandwich(s))
        .collect();
    let b =
        reconstruct_process_tensor(&dil, &OperationBasis::from_states(&rotated).unwrap()).unwrap();
    assert!(a.choi().max_abs_diff(b.choi()) < 1e-8);
}

#[test]
fn tomography_of_markovian_and_swap_processes() {
    let basis = operation_basis(2).unwrap();
    let mut r = rng(36);
    let us = [random::unitary(4, &mut r), random::unitary(4, &mut r)];
    let dil = fresh_environment_dilation(&random::state(2, &mut r), &random::state(2, &mut r), &us)
        .unwrap();
    assert!(is_markov(&reconstruct_process_tensor(&dil, &basis).unwrap(), 1e-8).unwrap());

    let swap = swap_dilation();
    let rebuilt = reconstruct_process_tensor(&swap, &basis).unwrap();
    let direct = build_process_tensor(&swap).unwrap();
    let a = non_markovianity(&rebuilt, Distance::Trace).unwrap();
    let b = non_markovianity(&direct, Distance::Trace).unwrap();
    assert!((a - b).abs() < 1e-7);
}

#[test]
fn resource_bound_applies_to_tomography() {
    let mut r = rng(37);
    let dil = random::dilation(2, 2, 4, false, &mut r);
    assert!(matches!(
        reconstruct_process_tensor(&dil, &operation_basis(2).unwrap()),
        Err(qmaps::Error::ResourceBound(_))
    ));
}

#[test]
fn correlated_preparations_give_a_non_cp_map() {
    let report = ncp_demo(c(1.0, 0.0), c(1.0, 0.0), PreparationProtocol::Projection).unwrap();
    let outputs: Vec<ComplexMatrix> = report
        .records
        .iter()
        .map(|r| r.normalized_output().unwrap())
        .collect();
    for (out, expected) in outputs.iter().zip([p0(), p0(), plus(), minus()]) {
        assert!(out.max_abs_diff(&expected) < 1e-10);
    }
    let predicted = &report.linear_extension.predicted_minus;
    let expected = &p0().scale_real(2.0) - &plus();
    assert!(predicted.max_abs_diff(&expected) < 1e-10);
    let golden = (1.0 - 5f64.sqrt()) / 2.0;
    assert!((report.linear_extension.predicted_minus_min_eigenvalue - golden).abs() < 1e-9);
    assert!(!report.verdicts.cp);
    assert!(report.verdicts.min_eig < -1e-9);
    assert!(report.verdicts.superchannel_cp);
    assert!(report.superchannel.choi_min_eigenvalue >= -1e-9);
    assert!(report.verdicts.superchannel_preserves_minus);

    let env = &report.conditional_environment;
    assert!(env.given_0.max_abs_diff(&p0()) < 1e-12);
    assert!(env.given_1.max_abs_diff(&p1()) < 1e-12);
    assert!(env.given_0.hs_inner(&env.given_1).norm() < 1e-12);
}

#[test]
fn project_rotate_preparations_are_trace_preserving() {
    let report = ncp_demo(c(1.0, 0.0), c(1.0, 0.0), PreparationProtocol::ProjectRotate).unwrap();
    for rec in &report.records {
        assert!((rec.success_probability - 1.0).abs() < 1e-12);
    }
    assert!(report.verdicts.superchannel_cp);
}

#[test]
fn ncp_report_json_has_the_expected_sections() {
    let s = 2f64.sqrt();
    let report = ncp_demo(
        c(s * 0.6, 0.0),
        c(s * 0.8, 0.0),
        PreparationProtocol::Projection,
    )
    .unwrap();
    let value = serde_json::to_value(&report).unwrap();
    for key in ["scenario", "records", "reconstruction", "verdicts"] {
        assert!(value.get(key).is_some(), "{key}");
    }
    assert_eq!(value["reconstruction"]["repr"], "tomographic");
    assert!(value["verdicts"]["cp"].is_boolean());
    assert!(value["verdicts"]["min_eig"].is_number());
}
