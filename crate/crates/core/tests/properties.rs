//! Property tests for the model invariants: tensor symmetry and positivity,
//! generator structure, purity/trace preservation, teleportation
//! consistency, and noise additivity.

use proptest::prelude::*;
use squill_core::linalg::{cx, hermiticity_defect, max_abs};
use squill_core::*;

fn sym4(entries: [f64; 10]) -> CMat {
    // fill the upper triangle of a 4×4 and mirror
    let mut m = CMat::zeros(4, 4);
    let mut it = entries.iter();
    for i in 0..4 {
        for j in i..4 {
            let v = cx(*it.next().unwrap(), 0.0);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

fn arb_channels() -> impl Strategy<Value = Vec<FluctuationChannel>> {
    proptest::collection::vec(
        (proptest::array::uniform10(-1.0f64..1.0), 0.0f64..0.5),
        1..4,
    )
    .prop_map(|specs| {
        specs
            .into_iter()
            .enumerate()
            .map(|(k, (entries, strength))| {
                FluctuationChannel::new(sym4(entries), strength, format!("ch{k}")).unwrap()
            })
            .collect()
    })
}

fn arb_hermitian4() -> impl Strategy<Value = CMat> {
    (
        proptest::array::uniform16(-1.0f64..1.0),
        proptest::array::uniform16(-1.0f64..1.0),
    )
        .prop_map(|(re, im)| {
            let raw = CMat::from_fn(4, 4, |i, j| cx(re[i * 4 + j], im[i * 4 + j]));
            (&raw + raw.adjoint()).scale(0.5)
        })
}

fn arb_qubit_state() -> impl Strategy<Value = PureQubitState> {
    proptest::array::uniform4(-1.0f64..1.0)
        .prop_filter("non-zero amplitude", |v| {
            v.iter().map(|x| x * x).sum::<f64>() > 1e-3
        })
        .prop_map(|v| PureQubitState::normalized(cx(v[0], v[1]), cx(v[2], v[3])).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tensor_lookups_agree_on_all_equivalent_orderings(channels in arb_channels()) {
        let r = CorrelationTensor::from_channels(&channels).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let v = r.get(i, j, k, l);
                        prop_assert_eq!(v, r.get(j, i, k, l));
                        prop_assert_eq!(v, r.get(i, j, l, k));
                        prop_assert_eq!(v, r.get(j, i, l, k));
                        prop_assert_eq!(v, r.get(k, l, i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_entries_are_finite_and_pair_matrix_is_psd(channels in arb_channels()) {
        let r = CorrelationTensor::from_channels(&channels).unwrap();
        for (_, v) in r.irreducible_entries() {
            prop_assert!(v.is_finite());
        }
        let pm = r.as_pair_matrix();
        let cm = CMat::from_fn(pm.nrows(), pm.ncols(), |i, j| cx(pm[(i, j)], 0.0));
        let min = squill_core::linalg::hermitian_eigenvalues(&cm)[0];
        prop_assert!(min > -1e-10, "min eigenvalue {}", min);
    }

    #[test]
    fn generator_preserves_trace_hermiticity_and_the_mixed_state(
        channels in arb_channels(),
        herm in arb_hermitian4(),
        fields in proptest::array::uniform4(-1.5f64..1.5),
    ) {
        let h0 = two_qubit_gate(fields[0], fields[1], fields[2], fields[3], 0.3).unwrap();
        let r = CorrelationTensor::from_channels(&channels).unwrap();
        let l = Superoperator::build(&h0, &r).unwrap();
        prop_assert!(l.trace_preservation_defect() < 1e-10);
        prop_assert!(l.mixed_state_defect() < 1e-10);
        let image = l.apply(&herm);
        prop_assert!(hermiticity_defect(&image) < 1e-9);
    }

    #[test]
    fn tensor_and_channel_dissipators_agree(channels in arb_channels()) {
        let r = CorrelationTensor::from_channels(&channels).unwrap();
        let via_tensor = Superoperator::build(&Hamiltonian::zero(4), &r).unwrap();
        let via_channels = dissipator_from_channels(&channels).unwrap();
        prop_assert!(max_abs(&(via_tensor.matrix() - via_channels.matrix())) < 1e-12);
    }

    #[test]
    fn zero_noise_propagation_is_unitary(
        fields in proptest::array::uniform4(-1.5f64..1.5),
        t in 0.0f64..5.0,
    ) {
        let h0 = two_qubit_gate(fields[0], fields[1], fields[2], fields[3], 0.7).unwrap();
        let l = Superoperator::build(&h0, &CorrelationTensor::zero(4)).unwrap();
        let psi = bell_state(2).unwrap();
        let rho0 = DensityMatrix::pure(&psi).unwrap();
        let out = propagate_fixed(&l, &rho0, t).unwrap();
        prop_assert!((out.purity() - 1.0).abs() < 1e-10);
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn teleportation_formula_matches_the_pipeline(
        psi in arb_qubit_state(),
        g0 in 0.0f64..0.6,
        g1 in 0.0f64..0.6,
        t in 0.0f64..8.0,
    ) {
        let w = bell_populations_closed_form(g0, g1, t).unwrap();
        let pipeline = teleport(&psi, &w).expectation(&psi.ket());
        let formula = teleportation_fidelity(&psi, g0, g1, t);
        prop_assert!((pipeline - formula).abs() < 1e-12,
            "pipeline {} vs formula {}", pipeline, formula);
    }

    #[test]
    fn fidelities_never_increase_with_time(
        psi in arb_qubit_state(),
        g0 in 0.0f64..0.5,
        g1 in 0.0f64..0.5,
    ) {
        let grid: Vec<f64> = (0..40).map(|k| 0.25 * k as f64).collect();
        let mut prev_e = f64::INFINITY;
        let mut prev_t = f64::INFINITY;
        for &t in &grid {
            let fe = entanglement_fidelity(g0, g1, t);
            let ft = teleportation_fidelity(&psi, g0, g1, t);
            prop_assert!(fe <= prev_e + 1e-12);
            prop_assert!(ft <= prev_t + 1e-12);
            prev_e = fe;
            prev_t = ft;
        }
    }

    #[test]
    fn pair_outcomes_depend_only_on_total_rates(
        g0 in 0.01f64..0.4,
        g1 in 0.01f64..0.4,
        split in 0.0f64..1.0,
        t in 0.1f64..5.0,
    ) {
        // redistribute per-qubit strengths at fixed sums Γ₀, Γ₁
        let even = EprModel::degenerate_independent(g0 / 2.0, g0 / 2.0, g1 / 2.0, g1 / 2.0);
        let skew = EprModel::degenerate_independent(
            g0 * split, g0 * (1.0 - split), g1 * (1.0 - split), g1 * split,
        );
        let run = |model: &EprModel| -> CMat {
            let (h, r) = model.build(Basis::Bell).unwrap();
            let l = Superoperator::build(&h, &r).unwrap();
            let rho0 = DensityMatrix::pure(
                &basis_state(QubitRegister::new(2).unwrap(), 0).unwrap(),
            )
            .unwrap();
            propagate_fixed(&l, &rho0, t).unwrap().into_matrix()
        };
        prop_assert!(max_abs(&(run(&even) - run(&skew))) < 1e-10);
    }

    #[test]
    fn gate_metrics_are_exactly_invariant_under_input_reordering(
        seed in 0u64..1000,
        gamma in 0.001f64..0.3,
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let noise = GateNoiseSpec::new(gamma, 0.5 * gamma, 0.25 * gamma).unwrap();
        let total = schedule_propagator(
            &cnot_schedule(&FieldStrengths::unit()).unwrap(),
            &noise.noise_model().unwrap(),
        )
        .unwrap();
        let mut inputs = sixteen_input_states();
        let base = gate_metrics_for_inputs(&total, &inputs).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        inputs.shuffle(&mut rng);
        let shuffled = gate_metrics_for_inputs(&total, &inputs).unwrap();
        prop_assert_eq!(base.fidelity.to_bits(), shuffled.fidelity.to_bits());
        prop_assert_eq!(base.purity.to_bits(), shuffled.purity.to_bits());
        prop_assert_eq!(base.error.to_bits(), shuffled.error.to_bits());
    }
}

#[test]
fn propagated_states_stay_positive_over_many_sampled_times() {
    // ≥ 100 sampled times per scenario; min eigenvalue ≥ −1e-8
    let coherent = EprModel {
        eps_a: 1.0,
        eps_b: 1.0,
        j_a: 0.5,
        j_b: 0.5,
        bath: EprBath::Independent {
            g0a: 0.1,
            g0b: 0.1,
            g1a: 0.1,
            g1b: 0.1,
        },
    };
    let (coherent_h, _) = coherent.build(Basis::Bell).unwrap();
    let scenarios: Vec<(&str, Hamiltonian, NoiseModel)> = vec![
        (
            "coherent pair",
            coherent_h,
            coherent.noise_model(Basis::Bell).unwrap(),
        ),
        (
            "collective pair",
            Hamiltonian::zero(4),
            EprModel::degenerate_collective(0.15, 0.1)
                .noise_model(Basis::Bell)
                .unwrap(),
        ),
        (
            "gate segment with all noise types",
            two_qubit_gate(0.0, 0.0, 0.0, 0.0, -1.0).unwrap(),
            GateNoiseSpec::new(0.05, 0.05, 0.05)
                .unwrap()
                .noise_model()
                .unwrap(),
        ),
    ];
    for (name, h, noise) in scenarios {
        let r = noise.correlation_tensor(4).unwrap();
        let l = Superoperator::build(&h, &r).unwrap();
        let rho0 = DensityMatrix::pure(&bell_state(1).unwrap()).unwrap();
        let step = Propagator::new(&l, 0.1).unwrap();
        let mut rho = rho0;
        for k in 1..=120 {
            rho = step.apply(&rho).expect(name);
            let d = check_density(rho.matrix());
            assert!(
                d.min_eigenvalue >= -1e-8,
                "{name}: eigenvalue {} at step {k}",
                d.min_eigenvalue
            );
            assert!(d.trace_defect <= 1e-9, "{name}: trace at step {k}");
        }
    }
}

#[test]
fn monte_carlo_bias_shrinks_as_dt_halves() {
    // weak error is O(dt): halving the step at fixed trajectory count must
    // reduce the systematic gap to the closed-form populations. Strong
    // noise makes the bias dominate the statistical error.
    let gamma_each = 0.5; // Γ₀ = Γ₁ = 1.0
    let model =
        EprModel::degenerate_independent(gamma_each, gamma_each, gamma_each, gamma_each);
    let channels = model.channels().unwrap();
    let h0 = Hamiltonian::zero(4);
    let rho0 = DensityMatrix::pure(&bell_state(1).unwrap()).unwrap();
    let observables: Vec<Observable> = (1..=4)
        .map(|i| Observable::projector(format!("p{i}"), &bell_state(i).unwrap()).unwrap())
        .collect();

    let gap_at = |dt: f64| -> f64 {
        let cfg = TrajectoryConfig {
            dt,
            t_final: 1.0,
            n_trajectories: 8000,
            master_seed: 515,
        };
        let run = monte_carlo_observables(&h0, &channels, &rho0, &cfg, &observables).unwrap();
        // average |gap| over all populations and the second half of the run,
        // where the bias has accumulated
        let mut total = 0.0;
        let mut n = 0usize;
        for (k, &t) in run.times.iter().enumerate() {
            if t < 0.5 {
                continue;
            }
            let want = bell_populations_closed_form(1.0, 1.0, t).unwrap().as_array();
            for (obs, w) in run.mean[k].iter().zip(want.iter()) {
                total += (obs - w).abs();
                n += 1;
            }
        }
        total / n as f64
    };

    let coarse = gap_at(0.025);
    let medium = gap_at(0.0125);
    let fine = gap_at(0.00625);
    assert!(
        coarse > medium && medium > fine,
        "systematic gap not decreasing: {coarse:.2e} → {medium:.2e} → {fine:.2e}"
    );
}

#[test]
fn monte_carlo_keeps_the_singlet_invariant_under_a_collective_bath() {
    let model = EprModel::degenerate_collective(0.2, 0.15);
    let channels = model.channels().unwrap();
    let h0 = Hamiltonian::zero(4);
    let rho0 = DensityMatrix::pure(&bell_state(4).unwrap()).unwrap();
    let obs = vec![Observable::projector("p4", &bell_state(4).unwrap()).unwrap()];
    let cfg = TrajectoryConfig {
        dt: 0.05,
        t_final: 3.0,
        n_trajectories: 400,
        master_seed: 99,
    };
    let run = monte_carlo_observables(&h0, &channels, &rho0, &cfg, &obs).unwrap();
    for (k, &t) in run.times.iter().enumerate() {
        let diff = (run.mean[k][0] - 1.0).abs();
        let band = (3.0 * run.stderr[k][0]).max(1e-12);
        assert!(diff <= band, "t = {t}: drift {diff:.3e} beyond {band:.3e}");
    }
}

#[test]
fn choi_matrix_of_the_pair_propagator_is_positive() {
    // diagnostic complete-positivity check on a representative propagator:
    // C[(i,k),(j,l)] = Φ(|i⟩⟨j|)_{kl} = P[(k,l),(i,j)]
    let model = EprModel::degenerate_independent(0.05, 0.05, 0.05, 0.05);
    let (h, r) = model.build(Basis::Bell).unwrap();
    let l = Superoperator::build(&h, &r).unwrap();
    let p = Propagator::new(&l, 1.3).unwrap();
    let d = 4;
    let mut choi = CMat::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l_ in 0..d {
                    choi[(i * d + k, j * d + l_)] = p.matrix()[(k * d + l_, i * d + j)];
                }
            }
        }
    }
    assert!(hermiticity_defect(&choi) < 1e-12);
    let min = squill_core::linalg::hermitian_eigenvalues(&choi)[0];
    assert!(min > -1e-10, "Choi minimum eigenvalue {min}");
}
