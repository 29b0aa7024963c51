use densecap::capacity::{
    dense_average_state, dense_capacity, mutual_information, normal_capacity, optimize_prior,
    Direction, PriorOptions,
};
use densecap::encodings::{
    canonical_qubit_set, gellmann_basis, verify_orthogonality, weyl_set, EncodingEnsemble,
};
use densecap::entanglement::{convex_roof, decomposition_cost, Decomposition, RoofOptions};
use densecap::linalg::{self, CMatrix, CVector};
use densecap::protosim::{run_quantum_dense, Decoder, MeasurementBasis, PauliAxis};
use densecap::qstate::{
    from_bloch, partial_trace, to_bloch, von_neumann_entropy, BipartiteState, BlochVector,
    DensityMatrix, Subsystem,
};
use densecap::sampling::{
    random_bipartite, random_bipartite_any_rank, random_density_matrix, random_frame,
    random_unitary, rng_for,
};
use proptest::prelude::*;
use rand::Rng;

fn dims_strategy() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=4, 2usize..=4)
}

fn entropy(m: &CMatrix) -> f64 {
    linalg::spectral_entropy(&linalg::hermitian_eigenvalues(m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn entropy_is_additive(seed in any::<u64>(), da in 2usize..=4, db in 2usize..=4) {
        let mut rng = rng_for(seed, 0);
        let rank = rng.random_range(1..=da);
        let rho = random_density_matrix(&mut rng, da, rank);
        let rank = rng.random_range(1..=db);
        let xi = random_density_matrix(&mut rng, db, rank);
        let joint = von_neumann_entropy(&rho.tensor(&xi));
        prop_assert!((joint - von_neumann_entropy(&rho) - von_neumann_entropy(&xi)).abs() < 1e-10);
    }

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>(), d in 2usize..=8) {
        let mut rng = rng_for(seed, 0);
        let rank = rng.random_range(1..=d);
        let rho = random_density_matrix(&mut rng, d, rank);
        let u = random_unitary(&mut rng, d);
        let rotated = rho.conjugate(&u).unwrap();
        prop_assert!((von_neumann_entropy(&rotated) - von_neumann_entropy(&rho)).abs() < 1e-10);
    }

    #[test]
    fn partial_trace_of_product(seed in any::<u64>(), (da, db) in dims_strategy()) {
        let mut rng = rng_for(seed, 0);
        let a = random_density_matrix(&mut rng, da, da);
        let b = random_density_matrix(&mut rng, db, db);
        let joint = a.tensor(&b);
        let ra = partial_trace(&joint, (da, db), Subsystem::A).unwrap();
        let rb = partial_trace(&joint, (da, db), Subsystem::B).unwrap();
        prop_assert!(linalg::max_abs_entry(&(ra.matrix() - a.matrix())) < 1e-12);
        prop_assert!(linalg::max_abs_entry(&(rb.matrix() - b.matrix())) < 1e-12);
    }

    #[test]
    fn bloch_round_trip(x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0) {
        let norm = (x * x + y * y + z * z).sqrt();
        let scale = if norm > 1.0 { 1.0 / norm } else { 1.0 };
        let v = BlochVector::new(x * scale, y * scale, z * scale).unwrap();
        let back = to_bloch(&from_bloch(v).unwrap()).unwrap();
        for (p, q) in v.to_array().iter().zip(back.to_array()) {
            prop_assert!((p - q).abs() < 1e-14);
        }
    }

    #[test]
    fn frame_twirl_is_maximally_mixed(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 0);
        let rank = rng.random_range(1..=2);
        let rho = random_density_matrix(&mut rng, 2, rank);
        let e = canonical_qubit_set(&random_frame(&mut rng));
        let avg = e.twirl(rho.matrix()).unwrap();
        prop_assert!(linalg::frobenius(&(avg - linalg::identity(2).scale(0.5))) < 1e-12);
        for sigma in linalg::paulis() {
            prop_assert!(linalg::frobenius(&e.twirl(&sigma).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn weyl_twirl_is_maximally_mixed(seed in any::<u64>(), d in 2usize..=5) {
        let mut rng = rng_for(seed, 0);
        let rank = rng.random_range(1..=d);
        let rho = random_density_matrix(&mut rng, d, rank);
        let e = weyl_set(d).unwrap();
        let avg = e.twirl(rho.matrix()).unwrap();
        prop_assert!(linalg::frobenius(&(avg - linalg::identity(d).scale(1.0 / d as f64))) < 1e-10);
    }

    #[test]
    fn difference_identity_and_asymmetry(seed in any::<u64>(), dims in dims_strategy()) {
        let mut rng = rng_for(seed, 0);
        let s = random_bipartite_any_rank(&mut rng, dims);
        let mi = mutual_information(&s);
        for dir in [Direction::AtoB, Direction::BtoA] {
            let dense = dense_capacity(&s, dir);
            let normal = normal_capacity(s.reduced(dir.sender()));
            prop_assert!((dense - normal - mi).abs() < 1e-9);
            prop_assert!(dense >= normal - 1e-12);
            let ceiling = ((dims.0 * dims.1) as f64).log2() - von_neumann_entropy(s.joint());
            prop_assert!(dense <= ceiling + 1e-12);
        }
        let sa = von_neumann_entropy(s.reduced_a());
        let sb = von_neumann_entropy(s.reduced_b());
        let asym = dense_capacity(&s, Direction::AtoB) - dense_capacity(&s, Direction::BtoA);
        // log2(d_A / d_B) vanishes for equal dimensions
        let dim_term = (dims.0 as f64 / dims.1 as f64).log2();
        prop_assert!((asym - (dim_term + sb - sa)).abs() < 1e-9);
    }

    #[test]
    fn dense_witness(seed in any::<u64>(), dims in dims_strategy()) {
        let mut rng = rng_for(seed, 0);
        let rank = rng.random_range(1..=2);
        let s = random_bipartite(&mut rng, dims, rank);
        let dense = dense_capacity(&s, Direction::AtoB);
        if dense > (dims.0 as f64).log2() {
            prop_assert!(von_neumann_entropy(s.reduced_b()) > von_neumann_entropy(s.joint()));
        }
    }

    #[test]
    fn averaged_dense_state_factorizes(seed in any::<u64>(), dims in dims_strategy()) {
        let mut rng = rng_for(seed, 0);
        let s = random_bipartite_any_rank(&mut rng, dims);
        let e = weyl_set(dims.0).unwrap();
        let avg = dense_average_state(&s, &e, Direction::AtoB).unwrap();
        let expected = DensityMatrix::maximally_mixed(dims.0).unwrap().tensor(s.reduced_b());
        prop_assert!(linalg::frobenius(&(avg.matrix() - expected.matrix())) < 1e-10);
    }

    #[test]
    fn correlation_tensor_reconstructs_state(seed in any::<u64>(), dims in dims_strategy()) {
        let mut rng = rng_for(seed, 0);
        let s = random_bipartite_any_rank(&mut rng, dims);
        prop_assert!(linalg::max_abs_entry(&(s.reconstruct() - s.joint().matrix())) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gellmann_elements_average_out(d in 2usize..=5) {
        let e = weyl_set(d).unwrap();
        for lambda in gellmann_basis(d).unwrap().lambdas() {
            prop_assert!(linalg::frobenius(&e.twirl(lambda).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn local_unitaries_cannot_fill_the_joint_space(seed in any::<u64>()) {
        // 16 lifted qubit unitaries span at most a 4-dimensional operator space.
        let mut rng = rng_for(seed, 0);
        let lifted: Vec<CMatrix> = (0..16)
            .map(|_| linalg::kron(&random_unitary(&mut rng, 2), &linalg::identity(2)))
            .collect();
        let e = EncodingEnsemble::uniform(lifted).unwrap();
        let report = verify_orthogonality(&e);
        prop_assert!(!report.orthonormal);
        let rank = report.gram.clone().svd(false, false).singular_values.iter().filter(|s| **s > 1e-9).count();
        prop_assert!(rank <= 4);

        // Parseval against the Pauli basis: no qubit unitary is orthogonal to all four.
        let u = random_unitary(&mut rng, 2);
        let basis = [linalg::identity(2), linalg::paulis()[0].clone(), linalg::paulis()[1].clone(), linalg::paulis()[2].clone()];
        let overlap: f64 = basis.iter().map(|p| linalg::trace(&(p.adjoint() * &u)).norm_sqr() / 2.0).sum();
        prop_assert!((overlap - 2.0).abs() < 1e-12);
    }

    #[test]
    fn prior_optimizer_is_monotone_and_bounded(seed in any::<u64>(), n in 2usize..=4, d in 2usize..=3) {
        let mut rng = rng_for(seed, 0);
        let states: Vec<DensityMatrix> = (0..n).map(|_| random_density_matrix(&mut rng, d, d)).collect();
        let report = optimize_prior(&states, &PriorOptions::default()).unwrap();
        for w in report.history.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-12);
        }
        prop_assert!(report.chi <= (d as f64).log2() + 1e-12);
        prop_assert!(report.gap >= -1e-12);
    }

    #[test]
    fn empirical_rate_stays_below_holevo(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 0);
        let s = random_bipartite_any_rank(&mut rng, (2, 2));
        let e = canonical_qubit_set(&random_frame(&mut rng));
        let trials = 4000;
        let bound = 3.0 / (trials as f64).sqrt();
        let trace = run_quantum_dense(&s, &e, &Decoder::Bell, trials, seed).unwrap();
        let lifted = e.lift((2, 2), Subsystem::A).unwrap();
        let chi = densecap::capacity::holevo_chi(&lifted, s.joint()).unwrap();
        prop_assert!(trace.empirical_mi <= chi + bound);

        let single = Decoder::SingleParticle(MeasurementBasis::pauli(PauliAxis::Z));
        let trace = run_quantum_dense(&s, &e, &single, trials, seed).unwrap();
        let chi = densecap::capacity::holevo_chi(&e, s.reduced_a()).unwrap();
        prop_assert!(trace.empirical_mi <= chi + bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn roof_never_exceeds_eigendecomposition(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 0);
        let rank = rng.random_range(1..=4);
        let s = random_bipartite(&mut rng, (2, 2), rank);
        let (vals, vecs) = linalg::hermitian_eigen(s.joint().matrix());
        let kept: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > 1e-10).collect();
        let total: f64 = kept.iter().map(|&i| vals[i]).sum();
        let weights = kept.iter().map(|&i| vals[i] / total).collect();
        let vectors: Vec<CVector> = kept.iter().map(|&i| vecs.column(i).into_owned()).collect();
        let eigen_cost = decomposition_cost(&Decomposition::new((2, 2), weights, vectors).unwrap()).unwrap();
        let options = RoofOptions { restarts: 4, seed, ..RoofOptions::default() };
        let report = convex_roof(&s, &options).unwrap();
        prop_assert!(report.value <= eigen_cost + 1e-9);
        prop_assert!(report.value >= -1e-12);
        let rebuilt = report.decomposition.reconstruct();
        prop_assert!(linalg::max_abs_entry(&(rebuilt - s.joint().matrix())) < 1e-9);
    }

    #[test]
    fn roof_of_pure_state_is_twice_marginal_entropy(seed in any::<u64>(), dims in dims_strategy()) {
        let mut rng = rng_for(seed, 0);
        let psi = densecap::sampling::random_pure(&mut rng, dims.0 * dims.1);
        let s = BipartiteState::pure(&psi, dims).unwrap();
        let options = RoofOptions { restarts: 2, seed, ..RoofOptions::default() };
        let report = convex_roof(&s, &options).unwrap();
        let expected = 2.0 * entropy(s.reduced_a().matrix());
        prop_assert!((report.value - expected).abs() < 1e-9);
    }
}
