use lz3::{
    propagate_lindblad, propagate_nonhermitian, propagate_schrodinger, transfer_efficiency, DensityMatrix4, StateVector,
    SystemParams,
};
use proptest::prelude::*;

fn short_params() -> impl Strategy<Value = SystemParams> {
    (0.05f64..1.0, -4.0f64..4.0, 0.0f64..1.5, 0.0f64..1.5, 0.0f64..1.0, 10.0f64..60.0).prop_map(
        |(kappa, delta, omega12, omega23, omega13, horizon)| SystemParams {
            kappa,
            delta,
            omega12,
            omega23,
            omega13,
            horizon,
            ..SystemParams::default()
        },
    )
}

fn phases() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.0f64..6.3, 0.0f64..6.3, 0.0f64..6.3)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn hermitian_evolution_keeps_the_norm(p in short_params(), (a, b, c) in phases()) {
        let p = SystemParams { phi12: a, phi23: b, phi13: c, ..p };
        let r = propagate_schrodinger(&p, &StateVector::basis(1), 1e-10).unwrap();
        for s in &r.trajectory {
            prop_assert!((s.norm - 1.0).abs() < 1e-9);
        }
        let bound = 10.0 * 1e-10 * (r.stats.steps as f64).sqrt();
        prop_assert!((r.final_state.norm_sqr() - 1.0).abs() <= bound);
    }

    #[test]
    fn non_hermitian_norm_never_increases(p in short_params(), g in (0.0f64..0.2, 0.0f64..0.2, 0.0f64..0.2)) {
        let p = SystemParams { gamma1: g.0, gamma2: g.1, gamma3: g.2, ..p };
        let r = propagate_nonhermitian(&p, &StateVector::basis(1), 1e-10).unwrap();
        prop_assert!(r.trajectory.windows(2).all(|w| w[1].norm <= w[0].norm + 1e-12));
        prop_assert!(r.trajectory.windows(2).all(|w| w[0].t < w[1].t));
        prop_assert_eq!(r.trajectory[0].t, -p.horizon);
        prop_assert_eq!(r.trajectory.last().unwrap().t, p.horizon);
    }

    #[test]
    fn lindblad_keeps_trace_and_positivity(p in short_params(), g2 in 0.0f64..0.2) {
        let p = SystemParams { gamma2: g2, gamma1: 0.3 * g2, ..p };
        let r = propagate_lindblad(&p, &DensityMatrix4::basis(1), 1e-10).unwrap();
        for s in &r.trajectory {
            prop_assert!((s.norm + s.sink - 1.0).abs() < 1e-8);
        }
        prop_assert!(r.final_state.validate().is_ok());
        let nh = propagate_nonhermitian(&p, &StateVector::basis(1), 1e-10).unwrap();
        for (a, b) in r.trajectory.iter().zip(&nh.trajectory) {
            for k in 0..3 {
                prop_assert!((a.populations[k] - b.populations[k]).abs() < 1e-6);
            }
        }
    }

    /// Relabelling 1 ↔ 3 and reversing time maps `H(t)` onto the same model
    /// with `Ω₁₂ ↔ Ω₂₃`; for a real Hamiltonian the reversed evolution is the
    /// transpose, so `|⟨3|U|1⟩|²` is unchanged.
    #[test]
    fn swapping_outer_couplings_keeps_efficiency(p in short_params(), signs in (any::<bool>(), any::<bool>(), any::<bool>())) {
        let phase = |neg: bool| if neg { std::f64::consts::PI } else { 0.0 };
        let p = SystemParams { phi12: phase(signs.0), phi23: phase(signs.1), phi13: phase(signs.2), ..p };
        let swapped = SystemParams { omega12: p.omega23, omega23: p.omega12, phi12: p.phi23, phi23: p.phi12, ..p };
        let a = transfer_efficiency(&p, 1e-10).unwrap();
        let b = transfer_efficiency(&swapped, 1e-10).unwrap();
        prop_assert!((a - b).abs() < 1e-8, "{} vs {}", a, b);
    }
}

#[test]
fn decoupled_first_state_stays() {
    let p = SystemParams { omega12: 0.0, omega23: 0.0, omega13: 0.0, delta: -1.0, ..SystemParams::default() };
    let r = propagate_schrodinger(&p, &StateVector::basis(1), 1e-10).unwrap();
    assert!((r.final_state.populations()[0] - 1.0).abs() < 1e-12);
    assert_eq!(r.final_state.populations()[2], 0.0);

    let p = SystemParams { omega12: 0.0, omega13: 0.0, delta: 2.0, ..SystemParams::default() };
    let r = propagate_schrodinger(&p, &StateVector::basis(1), 1e-10).unwrap();
    assert_eq!(r.final_state.populations()[2], 0.0);
}

#[test]
fn efficient_transfer_examples() {
    let p = SystemParams { delta: 4.0, ..SystemParams::default() };
    assert!(transfer_efficiency(&p, 1e-10).unwrap() >= 0.99);
    let p = SystemParams { delta: -4.0, omega13: 0.5, ..SystemParams::default() };
    assert!(transfer_efficiency(&p, 1e-10).unwrap() >= 0.95);
}

#[test]
fn middle_state_decay_examples() {
    let gamma = 0.02;
    let p = SystemParams { omega12: 0.0, omega23: 0.0, omega13: 0.0, gamma2: gamma, horizon: 100.0, ..SystemParams::default() };
    let expected = (-2.0 * gamma * 2.0 * p.horizon).exp();
    let nh = propagate_nonhermitian(&p, &StateVector::basis(2), 1e-10).unwrap();
    assert!((nh.final_state.populations()[1] - expected).abs() < 1e-9);
    let rho = propagate_lindblad(&p, &DensityMatrix4::basis(2), 1e-10).unwrap().final_state;
    assert!((rho.populations()[1] - expected).abs() < 1e-9);
    assert!((rho.sink_population() - (1.0 - expected)).abs() < 1e-9);
}

#[test]
fn zero_decay_lindblad_matches_schrodinger() {
    let p = SystemParams { delta: 1.2, omega13: 0.4, horizon: 80.0, ..SystemParams::default() };
    let rho = propagate_lindblad(&p, &DensityMatrix4::basis(1), 1e-10).unwrap();
    let psi = propagate_schrodinger(&p, &StateVector::basis(1), 1e-10).unwrap();
    for (a, b) in rho.trajectory.iter().zip(&psi.trajectory) {
        for k in 0..3 {
            assert!((a.populations[k] - b.populations[k]).abs() < 1e-6);
        }
    }
    assert!(rho.trajectory.iter().all(|s| s.sink.abs() < 1e-12));
}
