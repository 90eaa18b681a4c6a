mod common;

use proptest::prelude::*;
use qmaps::linalg::{c, reshuffle, ComplexMatrix, C64};
use qmaps::maps::{check_basis, gell_mann_basis, paulis, state_basis, MapEnvelope};
use qmaps::random;
use qmaps::{
    check_cp, check_hp, check_tp, dual_basis, kraus_rank, same_map, OperatorSumRep, QuantumMap,
    RepresentationKind,
};

fn transpose_map(d: usize) -> QuantumMap {
    // B form of ρ ↦ ρᵀ is the swap operator.
    QuantumMap::from_bform(qmaps::channels::gates::swap(d), d, d).unwrap()
}

fn representations(map: &QuantumMap) -> Vec<QuantumMap> {
    let basis = state_basis(map.d_in()).unwrap();
    RepresentationKind::ALL
        .iter()
        .map(|&k| map.convert(k, Some(&basis)).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn apply_paths_agree(seed in any::<u64>(), d_in in 2usize..4, d_out in 2usize..4) {
        let mut r = common::rng(seed);
        let map = random::cptp(d_in, d_out, &mut r);
        let rho = random::state(d_in, &mut r);
        let reference = map.apply(&rho).unwrap();
        for other in representations(&map) {
            prop_assert!(other.apply(&rho).unwrap().max_abs_diff(&reference) < 1e-10);
        }
    }

    #[test]
    fn cp_implies_hp(seed in any::<u64>(), d in 2usize..4) {
        let mut r = common::rng(seed);
        let left: Vec<ComplexMatrix> = (0..2).map(|_| random::ginibre(d, d, &mut r)).collect();
        let right: Vec<ComplexMatrix> = (0..2).map(|_| random::ginibre(d, d, &mut r)).collect();
        for map in [random::cptp(d, d, &mut r), QuantumMap::from_operator_sum(left, right).unwrap()] {
            if check_cp(&map).holds {
                prop_assert!(check_hp(&map).holds);
            }
        }
    }

    #[test]
    fn canonical_kraus_operators_are_orthogonal(seed in any::<u64>(), d in 2usize..4) {
        let mut r = common::rng(seed);
        let map = random::cptp(d, d, &mut r);
        let canon = QuantumMap::from(map.to_bform()).to_operator_sum();
        let ops = canon.kraus_ops().unwrap();
        for (a, ka) in ops.iter().enumerate() {
            for (b, kb) in ops.iter().enumerate() {
                if a != b {
                    prop_assert!(kb.hs_inner(ka).norm() < 1e-9);
                }
            }
        }
        prop_assert!(same_map(&canon, &map.to_operator_sum()).unwrap());
    }

    #[test]
    fn duality_is_an_involution(seed in any::<u64>(), d in 2usize..4) {
        let mut r = common::rng(seed);
        let basis: Vec<ComplexMatrix> = (0..d * d).map(|_| random::ginibre(d, d, &mut r)).collect();
        let duals = dual_basis(&basis).unwrap();
        let back = dual_basis(&duals).unwrap();
        for (x, y) in basis.iter().zip(&back) {
            prop_assert!(x.max_abs_diff(y) < 1e-9 * (1.0 + x.frobenius_norm()));
        }
    }

    #[test]
    fn tp_bform_has_trace_d_in(seed in any::<u64>(), d_in in 2usize..4, d_out in 2usize..4) {
        let mut r = common::rng(seed);
        let b = random::cptp(d_in, d_out, &mut r).to_bform();
        prop_assert!((b.matrix().trace().re - d_in as f64).abs() < 1e-9);
    }
}

#[test]
fn conversion_cycles_preserve_action() {
    let mut r = common::rng(51);
    for d in [2, 3] {
        let basis = state_basis(d).unwrap();
        for _ in 0..50 {
            let map = random::cptp(d, d, &mut r);
            let tomo = QuantumMap::from(map.to_tomographic(&basis).unwrap());
            let b = QuantumMap::from(tomo.to_bform());
            let os = QuantumMap::from(b.to_operator_sum());
            let a = QuantumMap::from(os.to_aform());
            let b2 = QuantumMap::from(a.to_bform());
            let tomo2 = QuantumMap::from(b2.to_tomographic(&basis).unwrap());
            assert!(
                reshuffle(a.to_aform().matrix(), d, d)
                    .unwrap()
                    .max_abs_diff(b2.to_bform().matrix())
                    < 1e-12
            );
            for _ in 0..10 {
                let rho = random::state(d, &mut r);
                let expected = map.apply(&rho).unwrap();
                for m in [&tomo, &b, &os, &a, &b2, &tomo2] {
                    assert!(m.apply(&rho).unwrap().max_abs_diff(&expected) < 1e-9);
                }
            }
        }
    }
}

#[test]
fn rectangular_maps_convert() {
    let mut r = common::rng(52);
    let map = random::cptp(2, 3, &mut r);
    let rho = random::state(2, &mut r);
    let expected = map.apply(&rho).unwrap();
    for m in representations(&map) {
        assert_eq!((m.d_in(), m.d_out()), (2, 3));
        assert!(m.apply(&rho).unwrap().max_abs_diff(&expected) < 1e-10);
        assert!(check_tp(&m).holds && check_cp(&m).holds);
    }
}

#[test]
fn verdicts_agree_across_representations() {
    let mut r = common::rng(53);
    let mut maps: Vec<QuantumMap> = (0..20)
        .map(|i| random::cptp(2 + i % 2, 2 + i % 2, &mut r))
        .collect();
    maps.push(transpose_map(2));
    maps.push(transpose_map(3));
    maps.push(QuantumMap::from_kraus(vec![ComplexMatrix::diag_real(&[1.0, 0.5])]).unwrap());
    let i2 = ComplexMatrix::identity(2);
    maps.push(
        QuantumMap::from_operator_sum(vec![i2.clone()], vec![i2.scale(c(0.0, 1.0))]).unwrap(),
    );
    for map in &maps {
        let reps = representations(map);
        let tp: Vec<bool> = reps.iter().map(|m| check_tp(m).holds).collect();
        let hp: Vec<bool> = reps.iter().map(|m| check_hp(m).holds).collect();
        let cp: Vec<bool> = reps.iter().map(|m| check_cp(m).holds).collect();
        assert!(tp.iter().all(|&v| v == tp[0]), "{tp:?}");
        assert!(hp.iter().all(|&v| v == hp[0]), "{hp:?}");
        assert!(cp.iter().all(|&v| v == cp[0]), "{cp:?}");
    }
    let n = maps.len();
    assert!(!check_cp(&maps[n - 4]).holds && check_tp(&maps[n - 4]).holds);
    assert!(!check_tp(&maps[n - 2]).holds && check_cp(&maps[n - 2]).holds);
    assert!(!check_hp(&maps[n - 1]).holds);
    assert!((check_cp(&maps[n - 4]).min_eigenvalue + 1.0).abs() < 1e-12);
}

#[test]
fn kraus_set_equivalence() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let k0 = ComplexMatrix::diag_real(&[1.0, 0.6]);
    let k1 = ComplexMatrix::from_real_rows(&[&[0.0, 0.8], &[0.0, 0.0]]);
    let a = OperatorSumRep::kraus(vec![k0.clone(), k1.clone()]).unwrap();
    let b =
        OperatorSumRep::kraus(vec![(&k0 + &k1).scale_real(s), (&k0 - &k1).scale_real(s)]).unwrap();
    assert!(same_map(&a, &b).unwrap());
    let id = OperatorSumRep::kraus(vec![ComplexMatrix::identity(2)]).unwrap();
    let x = OperatorSumRep::kraus(vec![paulis()[1].clone()]).unwrap();
    assert!(!same_map(&id, &x).unwrap());
}

#[test]
fn kraus_rank_counts_independent_operators() {
    let depol =
        qmaps::standard_channel(&qmaps::StandardChannel::Depolarizing { d: 2, p: 0.5 }).unwrap();
    assert_eq!(kraus_rank(&depol).unwrap(), 4);
    assert_eq!(kraus_rank(&QuantumMap::identity(3)).unwrap(), 1);
    assert!(kraus_rank(&transpose_map(2)).is_err());
}

#[test]
fn unit_trace_bases_have_duals_summing_to_the_identity() {
    for d in [2, 3] {
        let duals = dual_basis(&state_basis(d).unwrap()).unwrap();
        let mut sum = ComplexMatrix::zeros(d, d);
        for dual in &duals {
            sum += &dual.adjoint();
        }
        assert!(sum.max_abs_diff(&ComplexMatrix::identity(d)) < 1e-10);
    }
}

#[test]
fn gell_mann_basis_is_orthogonal() {
    for d in [2, 3, 4] {
        let basis = gell_mann_basis(d);
        assert_eq!(check_basis(&basis).unwrap(), d);
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let expected: C64 = if i == j { c(2.0, 0.0) } else { c(0.0, 0.0) };
                assert!((a.hs_inner(b) - expected).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn envelope_round_trip_for_every_representation() {
    let mut r = common::rng(54);
    let map = random::cptp(2, 2, &mut r);
    for m in representations(&map) {
        let text = serde_json::to_string(&m).unwrap();
        let env: MapEnvelope = serde_json::from_str(&text).unwrap();
        assert_eq!(env.repr, m.kind().as_str());
        let back: QuantumMap = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }
}
