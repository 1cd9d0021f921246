use ablation_core::astro::{
    apophis_elements, delta_m_from_excess, elements_to_state, find_moid, kepler_propagate, mean_from_true,
    propagate_perturbed, solve_kepler, state_to_elements, true_from_mean, Anomaly, OrbitalElements, StateVector,
};
use ablation_core::constants::{wrap_pi, AU, MU_SUN, SECONDS_PER_DAY};
use nalgebra::Vector3;
use proptest::prelude::*;

fn elliptic() -> impl Strategy<Value = OrbitalElements> {
    (
        0.3f64..5.0,
        0.0f64..0.95,
        0.01f64..3.1,
        0.0f64..6.28,
        0.0f64..6.28,
        0.0f64..6.28,
    )
        .prop_map(|(a, e, i, raan, argp, m)| {
            OrbitalElements::new(a * AU, e, i, raan, argp, Anomaly::Mean(m), 0.0).unwrap()
        })
}

fn angle_gap(a: f64, b: f64) -> f64 {
    wrap_pi(a - b).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn state_round_trip(k in elliptic()) {
        let s = elements_to_state(&k, MU_SUN).unwrap();
        let back = state_to_elements(&s, MU_SUN, k.epoch).unwrap();
        prop_assert!(((back.a - k.a) / k.a).abs() < 1e-9);
        prop_assert!((back.e - k.e).abs() < 1e-9);
        prop_assert!((back.i - k.i).abs() < 1e-9);
        // Node and perihelion are ill-defined for near-circular or
        // near-equatorial orbits; compare the combined angles there.
        let lon = |k: &OrbitalElements| k.raan + k.argp + k.mean_anomaly();
        prop_assert!(angle_gap(lon(&back), lon(&k)) < 1e-8);
        if k.e > 1e-3 {
            prop_assert!(angle_gap(back.mean_anomaly(), k.mean_anomaly()) < 1e-8);
        }
    }

    #[test]
    fn kepler_solution_satisfies_the_equation(m in -10.0f64..10.0, e in 0.0f64..0.99) {
        let ecc = solve_kepler(m, e);
        prop_assert!(angle_gap(ecc - e * ecc.sin(), m) < 1e-12);
    }

    #[test]
    fn true_mean_round_trip(nu in 0.0f64..6.28, e in 0.0f64..0.95) {
        prop_assert!(angle_gap(true_from_mean(mean_from_true(nu, e), e), nu) < 1e-10);
    }

    #[test]
    fn propagation_over_a_period_is_identity(k in elliptic(), periods in 1u32..4) {
        let p = kepler_propagate(&k, periods as f64 * k.period(MU_SUN), MU_SUN);
        prop_assert!(angle_gap(p.mean_anomaly(), k.mean_anomaly()) < 1e-9);
        prop_assert_eq!(p.a, k.a);
    }

    #[test]
    fn propagation_conserves_energy(k in elliptic(), dt in -1e8f64..1e8) {
        let s0 = elements_to_state(&k, MU_SUN).unwrap();
        let s1 = elements_to_state(&kepler_propagate(&k, dt, MU_SUN), MU_SUN).unwrap();
        let (e0, e1) = (s0.specific_energy(MU_SUN), s1.specific_energy(MU_SUN));
        prop_assert!(((e1 - e0) / e0).abs() < 1e-10);
        let (h0, h1) = (s0.angular_momentum(), s1.angular_momentum());
        prop_assert!((h1 - h0).norm() / h0.norm() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn moid_never_exceeds_a_sampled_distance(a in elliptic(), b in elliptic(), u in 0.0f64..6.28, v in 0.0f64..6.28) {
        let moid = find_moid(&a, &b);
        let sampled = (a.position_at(u) - b.position_at(v)).norm();
        prop_assert!(moid.distance <= sampled * (1.0 + 1e-9));
        let at = (a.position_at(moid.nu_first) - b.position_at(moid.nu_second)).norm();
        prop_assert!((at - moid.distance).abs() <= 1e-6 * AU);
    }
}

/// Cartesian RK4 with a constant push along the velocity.
fn cartesian(s0: &StateVector, accel: f64, duration: f64, steps: usize) -> StateVector {
    let f = |y: &[f64; 6]| -> [f64; 6] {
        let r = Vector3::new(y[0], y[1], y[2]);
        let v = Vector3::new(y[3], y[4], y[5]);
        let a = -MU_SUN / r.norm().powi(3) * r + accel * v / v.norm();
        [v.x, v.y, v.z, a.x, a.y, a.z]
    };
    let add = |y: &[f64; 6], k: &[f64; 6], h: f64| -> [f64; 6] { std::array::from_fn(|j| y[j] + h * k[j]) };
    let mut y = [s0.position.x, s0.position.y, s0.position.z, s0.velocity.x, s0.velocity.y, s0.velocity.z];
    let h = duration / steps as f64;
    for _ in 0..steps {
        let k1 = f(&y);
        let k2 = f(&add(&y, &k1, h / 2.0));
        let k3 = f(&add(&y, &k2, h / 2.0));
        let k4 = f(&add(&y, &k3, h));
        y = std::array::from_fn(|j| y[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]));
    }
    StateVector::new(Vector3::new(y[0], y[1], y[2]), Vector3::new(y[3], y[4], y[5]))
}

#[test]
fn semi_major_axis_change_matches_cartesian_over_thirty_days() {
    let k0 = apophis_elements(1.1, 0.0);
    let duration = 30.0 * SECONDS_PER_DAY;
    let arc = propagate_perturbed(&k0, duration, 1e-3 * k0.period(MU_SUN), MU_SUN, |_, _| {
        Vector3::new(1e-7, 0.0, 0.0)
    })
    .unwrap();
    let s0 = elements_to_state(&k0, MU_SUN).unwrap();
    let direct = state_to_elements(&cartesian(&s0, 1e-7, duration, 50_000), MU_SUN, duration).unwrap();
    let (da_gauss, da_direct) = (arc.elements.a - k0.a, direct.a - k0.a);
    assert!(((da_gauss - da_direct) / da_direct).abs() < 1e-3, "{da_gauss} vs {da_direct}");
}

#[test]
fn mean_anomaly_shift_matches_cartesian_propagations() {
    // Push for 120 days, then coast to an encounter 400 days after the start.
    let k0 = apophis_elements(0.4, 0.0);
    let thrust = 120.0 * SECONDS_PER_DAY;
    let t_moid = 400.0 * SECONDS_PER_DAY;
    let accel = -1e-7;
    let arc = propagate_perturbed(&k0, thrust, 1e-3 * k0.period(MU_SUN), MU_SUN, |_, _| Vector3::new(accel, 0.0, 0.0))
        .unwrap();
    let n0 = k0.mean_motion(MU_SUN);
    let ni = arc.elements.mean_motion(MU_SUN);
    let dm = delta_m_from_excess(arc.mean_anomaly_excess, thrust, t_moid, n0, ni);

    let s0 = elements_to_state(&k0, MU_SUN).unwrap();
    let pushed = state_to_elements(&cartesian(&s0, accel, thrust, 40_000), MU_SUN, thrust).unwrap();
    let deflected = kepler_propagate(&pushed, t_moid - thrust, MU_SUN);
    let nominal = kepler_propagate(&k0, t_moid, MU_SUN);
    let oracle = wrap_pi(deflected.mean_anomaly() - nominal.mean_anomaly());
    assert!(((dm - oracle) / oracle).abs() < 5e-3, "{dm} vs {oracle}");
}
