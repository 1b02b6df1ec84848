mod common;

use common::oracles;
use nalgebra::DMatrix;
use nonloc_core::bipartition::Side;
use nonloc_core::tensor::flat_index;
use nonloc_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn state_strategy() -> impl Strategy<Value = StateVector> {
    prop::collection::vec(2usize..=3, 2..=4).prop_flat_map(|dims| {
        let len: usize = dims.iter().product();
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len).prop_filter_map("nonzero", move |amps| {
            let amps = amps.into_iter().map(|(r, i)| C64::new(r, i)).collect();
            StateVector::new(&dims, amps, "p").ok()
        })
    })
}

fn block_strategy(state: StateVector) -> impl Strategy<Value = (StateVector, Bipartition)> {
    let n = state.n_parties();
    (1u32..(1 << n) - 1).prop_map(move |mask| {
        let block: Vec<usize> = (0..n).filter(|p| mask >> p & 1 == 1).collect();
        (state.clone(), Bipartition::from_block(n, &block).unwrap())
    })
}

proptest! {
    #[test]
    fn regroup_round_trip_is_exact((state, bip) in state_strategy().prop_flat_map(block_strategy)) {
        let m = regroup(&state, &bip).unwrap();
        let back = unregroup(&m, state.dims(), &bip).unwrap();
        prop_assert_eq!(back.as_slice(), state.amplitudes());
    }

    #[test]
    fn schmidt_is_normalized_and_phase_invariant(
        (state, bip) in state_strategy().prop_flat_map(block_strategy),
        theta in 0.0f64..std::f64::consts::TAU,
    ) {
        let tol = Tolerances::default();
        let s = schmidt(&regroup(&state, &bip).unwrap(), &tol).unwrap();
        let total: f64 = s.singular_values.iter().map(|v| v * v).sum();
        prop_assert!((total - 1.0).abs() <= 1e-10);
        prop_assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
        let rotated = schmidt(&regroup(&state.with_global_phase(theta), &bip).unwrap(), &tol).unwrap();
        for (a, b) in s.singular_values.iter().zip(&rotated.singular_values) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn support_dims_agree_on_both_sides((state, bip) in state_strategy().prop_flat_map(block_strategy)) {
        let tol = Tolerances::default();
        let a = reduced_support(&state, &bip, Side::A, &tol).unwrap();
        let b = reduced_support(&state, &bip, Side::B, &tol).unwrap();
        let s = schmidt(&regroup(&state, &bip).unwrap(), &tol).unwrap();
        prop_assert_eq!(a.dim(), b.dim());
        prop_assert_eq!(a.dim(), s.rank);
        prop_assert!(a.orthonormality_error() <= 1e-10);
        prop_assert!(b.orthonormality_error() <= 1e-10);
    }

    #[test]
    fn gram_is_hermitian(states in prop::collection::vec(state_strategy(), 1..5)) {
        let dims = states[0].dims().to_vec();
        let same: Vec<StateVector> = states.into_iter().filter(|s| s.dims() == dims.as_slice()).collect();
        let g = gram(&same).unwrap();
        prop_assert!((&g - g.adjoint()).iter().all(|x| x.norm() <= 1e-12));
        for i in 0..g.nrows() {
            prop_assert!((g[(i, i)].re - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn schmidt_matches_density_eigen_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let tol = Tolerances::default();
    for _ in 0..200 {
        let parties = rng.random_range(3..=4);
        let dims = common::random_dims(&mut rng, parties, 3);
        let state = common::random_state(&mut rng, &dims);
        let mask = rng.random_range(1..(1u32 << parties) - 1);
        let block: Vec<usize> = (0..parties).filter(|p| mask >> p & 1 == 1).collect();
        let bip = Bipartition::from_block(parties, &block).unwrap();
        let got = schmidt(&regroup(&state, &bip).unwrap(), &tol).unwrap();
        let want = oracles::schmidt_via_density(state.amplitudes(), &dims, bip.block_a(), bip.block_b());
        assert_eq!(got.singular_values.len(), want.len());
        for (g, w) in got.singular_values.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-8, "dims {dims:?} cut {bip}: {g} vs {w}");
        }
    }
}

#[test]
fn kpartite_first_state_regrouped_by_index_arithmetic() {
    let set = mes_set_kpartite(4, 3).unwrap();
    let bip = Bipartition::from_block(4, &[0]).unwrap();
    let m = regroup(&set.states()[0], &bip).unwrap();
    assert_eq!(m.shape(), (3, 27));
    let r = 1.0 / 3f64.sqrt();
    for l in 0..3 {
        // column of |lll⟩ over parties 1,2,3 with dims 3: l·9 + l·3 + l
        let col = l * 9 + l * 3 + l;
        assert_eq!(col, l * 13);
        assert!((m[(l, col)].re - r).abs() < 1e-15);
    }
    assert_eq!(m.iter().filter(|x| x.norm() > 0.0).count(), 3);
}

#[test]
fn mes_3x3x3_state4_schmidt_and_support() {
    let set = mes_set_3x3x3();
    let psi4 = &set.states()[3];
    let bip = Bipartition::from_block(3, &[0]).unwrap();
    let tol = Tolerances::default();

    // explicit 3×9 matrix: row a, column b·3 + c
    let r = 1.0 / 3f64.sqrt();
    let mut explicit = DMatrix::<C64>::zeros(3, 9);
    for (a, b, c) in [(1, 0, 0), (2, 1, 1), (0, 2, 2)] {
        explicit[(a, b * 3 + c)] = C64::new(r, 0.0);
    }
    let m = regroup(psi4, &bip).unwrap();
    assert!((&m - &explicit).iter().all(|x| x.norm() < 1e-15));

    let oracle = oracles::schmidt_via_density(psi4.amplitudes(), psi4.dims(), &[0], &[1, 2]);
    let got = schmidt(&m, &tol).unwrap();
    assert_eq!(got.rank, 3);
    for (g, w) in got.singular_values.iter().zip(&oracle) {
        assert!((g - r).abs() < 1e-12 && (w - r).abs() < 1e-12);
    }
    assert!(got.max_deviation_from_flat < 1e-12);

    let sup_b = reduced_support(psi4, &bip, Side::B, &tol).unwrap();
    let cols: Vec<usize> = [[0, 0], [1, 1], [2, 2]].iter().map(|l| flat_index(&[3, 3], l).unwrap()).collect();
    assert_eq!(sup_b, Subspace::coordinate(9, &cols));
}

#[test]
fn ghz_schmidt_is_flat_rank_two() {
    let ghz = superpose(&[Term::ket([0, 0, 0]), Term::ket([1, 1, 1])], &[2, 2, 2]).unwrap();
    let bip = Bipartition::from_block(3, &[0]).unwrap();
    let s = schmidt(&regroup(&ghz, &bip).unwrap(), &Tolerances::default()).unwrap();
    assert_eq!(s.rank, 2);
    assert!(s.max_deviation_from_flat < 1e-15);
    let sup = reduced_support(&ghz, &Bipartition::from_block(3, &[0, 1]).unwrap(), Side::A, &Tolerances::default()).unwrap();
    assert_eq!(sup, Subspace::coordinate(4, &[0, 3]));
}

#[test]
fn phase_states_orthogonal_by_root_of_unity_sum() {
    let set = mes_set_3x3x3();
    let ip = inner_product(&set.states()[0], &set.states()[1]).unwrap();
    assert!(ip.norm() < 1e-15);
    let ghz = ghz_subset_3qubit();
    assert_eq!(inner_product(&ghz.states()[0], &ghz.states()[2]).unwrap(), C64::new(0.0, 0.0));
}
