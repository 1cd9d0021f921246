//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs with its own harness so the lines always reach the terminal. The
//! process fails when a criterion fails unless it is listed in
//! `KNOWN_UNATTAINABLE`; those keep printing FAIL and have an ignored
//! asserting test in `tests/unattainable.rs`.

use std::time::{Duration, Instant};

use ablation_core::astro::{
    apophis_elements, earth_elements, elements_to_state, propagate_perturbed, state_to_elements, ElementDeltas,
    StateVector,
};
use ablation_core::constants::{wrap_pi, AU, MU_SUN, SECONDS_PER_YEAR};
use ablation_core::deflection::{deflect, DeflectionSetup, Encounter, FormationMode};
use ablation_core::experiments::{
    run_deflection_map, run_eccentricity_sweep, run_formation_design, run_shaped_design, ResultTable, Scenario,
};
use ablation_core::formation::{
    natural_orbit_objectives, natural_position, simulate_station_keeping, Family, ForceModel, ForceSwitches,
    LyapunovGains, StationKeepingConfig, NATURAL_LOWER, NATURAL_UPPER,
};
use ablation_core::moo::{hypervolume, optimize_with_observer, Evaluation, OptimizerSettings, ProblemSpec};
use ablation_core::plume::{degradation_factor, PlumeConstants};
use ablation_core::sizing::{mass_budget, solar_flux, EfficiencyOption, SpacecraftDesign};
use ablation_core::sublimation::{exhaust_velocity, radiation_loss, AsteroidModel};
use nalgebra::Vector3;

const KNOWN_UNATTAINABLE: &[u32] = &[4, 9];

const ENTHALPY: f64 = 1.8e7;

/// Independent optimiser runs merged into each family's front.
const FRONT_RUNS: u64 = 6;

/// Natural formation orbit taken from the y_lim = 1000 m front.
const NATURAL_DELTAS: [f64; 5] = [-1.5317e-10, 6.3518e-10, 2.6469e-8, -2.2061e-8, 3.4494e-9];
const SHAPED_COEFFS: [f64; 8] = [300.0, 0.0, -600.0, 0.0, 400.0, -1200.0, 300.0, 0.0];

struct Outcome {
    passed: bool,
    summary: String,
}

fn outcome(passed: bool, summary: String) -> Outcome {
    Outcome { passed, summary }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn scenario(body: serde_json::Value) -> Scenario {
    Scenario::from_json(&serde_json::to_vec(&body).unwrap()).expect("valid scenario")
}

fn base_scenario() -> serde_json::Value {
    serde_json::json!({
        "schema_version": 1,
        "name": "acceptance",
        "seed": 42,
        "asteroid": {"model": "apophis", "enthalpy_sublimation": {"value": ENTHALPY, "unit": "J/kg"}},
        "specific_impulse": {"value": 2000.0, "unit": "s"},
        "formation": {"mode": "natural"}
    })
}

fn natural_deltas_json() -> serde_json::Value {
    let d = NATURAL_DELTAS;
    serde_json::json!({
        "mode": "natural",
        "deltas": {
            "de": d[0],
            "di": {"value": d[1], "unit": "rad"},
            "draan": {"value": d[2], "unit": "rad"},
            "dargp": {"value": d[3], "unit": "rad"},
            "dmean": {"value": d[4], "unit": "rad"}
        }
    })
}

fn shaped_json() -> serde_json::Value {
    serde_json::json!({"mode": "shaped", "coefficients": {"values": SHAPED_COEFFS, "unit": "m"}})
}

fn column_f64(t: &ResultTable, name: &str) -> Vec<Option<f64>> {
    t.column(name).expect(name).into_iter().map(|v| v.as_f64()).collect()
}

/// Two-body motion plus a push along the velocity, straight RK4 in
/// Cartesian coordinates.
fn cartesian_oracle(s0: &StateVector, accel: f64, duration: f64, steps: usize) -> StateVector {
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

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let k0 = apophis_elements(0.3, 0.0);
    let accel = 1e-7;
    let year = SECONDS_PER_YEAR;
    let arc = propagate_perturbed(&k0, year, 1e-3 * k0.period(MU_SUN), MU_SUN, |_, _| Vector3::new(accel, 0.0, 0.0))
        .unwrap();
    let gauss_time = started.elapsed();
    let s0 = elements_to_state(&k0, MU_SUN).unwrap();
    let direct = state_to_elements(&cartesian_oracle(&s0, accel, year, 200_000), MU_SUN, year).unwrap();
    let g = &arc.elements;
    let angle = |x: f64, y: f64| wrap_pi(x - y).abs() / y.abs();
    let d = [
        rel(g.a, direct.a),
        rel(g.e, direct.e),
        rel(g.i, direct.i),
        angle(g.raan, direct.raan),
        angle(g.argp, direct.argp),
        angle(g.mean_anomaly(), direct.mean_anomaly()),
    ];
    let worst = d.iter().cloned().fold(0.0, f64::max);
    // The push must actually move the orbit for the comparison to mean anything.
    let moved = rel(g.a, k0.a) > 1e-6;
    outcome(
        worst < 1e-3 && moved && gauss_time < Duration::from_secs(10),
        format!(
            "worst relative element difference {worst:.2e} (< 1e-3), da/a {:.2e}, Gauss route {:.2} s (< 10 s)",
            rel(g.a, k0.a),
            gauss_time.as_secs_f64()
        ),
    )
}

fn criterion_2() -> Outcome {
    let k = apophis_elements(0.0, 0.0);
    let ast = AsteroidModel::apophis(k, ENTHALPY);
    // Unconcentrated light cannot reach the sublimation temperature.
    let design = SpacecraftDesign::new(10.0, 4, 1.0, EfficiencyOption::LOW);
    let mut worst_dm: f64 = 0.0;
    let mut worst_b: f64 = 0.0;
    for (window_years, mode) in [
        (0.5, FormationMode::Natural { deltas: ElementDeltas::from_array(&NATURAL_DELTAS) }),
        (1.3, FormationMode::Shaped { orbit: ablation_core::formation::ShapedOrbit::new(SHAPED_COEFFS) }),
    ] {
        let mut setup = DeflectionSetup::new(ast, design, mode);
        setup.include_tug = false;
        let window = window_years * SECONDS_PER_YEAR;
        let enc = Encounter::virtual_impact(&k, &earth_elements(0.0), 0.0, 2.0 * SECONDS_PER_YEAR, MU_SUN).unwrap();
        let out = deflect(&setup, &enc, window).unwrap();
        assert!(out.arc.history.iter().all(|h| h.mass_flow == 0.0));
        worst_dm = worst_dm.max(out.delta_m.abs()).max(out.delta_m_direct.abs());
        worst_b = worst_b.max(out.impact_parameter);
    }
    outcome(
        worst_dm <= 1e-12 && worst_b < 1.0,
        format!("|delta M| {worst_dm:.1e} rad (<= 1e-12), b {worst_b:.2e} m (< 1 m)"),
    )
}

fn criterion_3() -> Outcome {
    let ast = AsteroidModel::apophis(apophis_elements(0.0, 0.0), ENTHALPY);
    // Mean thermal speed of forsterite molecules, Mg2SiO4 at 140.69 g/mol.
    let boltzmann = 1.380649e-23;
    let molecule = 140.69e-3 / 6.02214076e23;
    let v_oracle = (8.0 * boltzmann * 1800.0 / (std::f64::consts::PI * molecule)).sqrt();
    let v = exhaust_velocity(&ast);
    let q = radiation_loss(1800.0, 1.0);
    let q_oracle = 5.670374419e-8 * 1800f64.powi(4);
    let tau = degradation_factor(1e-6, &PlumeConstants::default());
    let p = solar_flux(AU) * 314.0;
    let checks = [
        rel(v, v_oracle) <= 1e-6,
        (v - 520.5).abs() <= 0.05,
        rel(q, q_oracle) <= 1e-6,
        (q - 5.953e5).abs() <= 50.0,
        rel(tau, (-2.0f64).exp()) <= 1e-6,
        (p - 429.2e3).abs() <= 50.0,
        rel(p, 429.5e3) < 2e-3,
    ];
    outcome(
        checks.iter().all(|&c| c),
        format!(
            "v {v:.4} m/s (oracle {v_oracle:.4}), Q_rad {q:.5e} W/m^2, tau {tau:.8}, collected {:.2} kW ({:.3}% from 429.5 kW)",
            p / 1e3,
            100.0 * rel(p, 429.5e3)
        ),
    )
}

fn criterion_4() -> Outcome {
    let started = Instant::now();
    let k = apophis_elements(0.0, 0.0);
    let ast = AsteroidModel::apophis(k, ENTHALPY);
    let design = SpacecraftDesign::new(10.0, 4, 5000.0, EfficiencyOption::LOW);
    let m_sc = mass_budget(&design, k.a * (1.0 - k.e)).unwrap().total;
    let forces = ForceModel {
        asteroid: &ast,
        design: &design,
        spacecraft_mass: m_sc,
        plume: PlumeConstants::default(),
        switches: ForceSwitches::default(),
        mu_sun: MU_SUN,
    };
    let config = StationKeepingConfig {
        duration: SECONDS_PER_YEAR,
        step: 600.0,
        gains: LyapunovGains { stiffness: 1e-6, damping: 1e-5 },
        specific_impulse: 2000.0,
        record_every: 1000,
    };
    let dk = ElementDeltas::from_array(&NATURAL_DELTAS);
    let r = simulate_station_keeping(&forces, &k, |nu| natural_position(&k.with_true_anomaly(nu), &dk, nu), &config)
        .unwrap();
    let elapsed = started.elapsed();
    let error_ratio = r.max_tracking_error / r.orbit_scale;
    outcome(
        r.lyapunov_violations == 0 && error_ratio < 0.01 && elapsed < Duration::from_secs(60),
        format!(
            "V increased on {} of {} steps (worst relative rise {:.1e}), tracking error {:.3}% of orbit scale, {:.1} s",
            r.lyapunov_violations,
            r.steps,
            r.worst_relative_increase,
            100.0 * error_ratio,
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_5() -> Outcome {
    let started = Instant::now();
    let mut body = base_scenario();
    body["design"] = serde_json::json!({
        "aperture_diameter": {"value": 20, "unit": "m"}, "n_spacecraft": 10, "concentration_ratio": 5000
    });
    body["formation"] = serde_json::json!({"mode": "shaped"});
    body["optimizer"] = serde_json::json!({"population": 64, "budget": 5000});
    let t = run_shaped_design(&scenario(body)).unwrap();
    let elapsed = started.elapsed();
    let dist = column_f64(&t, "max_distance_m");
    let thrust = column_f64(&t, "max_thrust_n");
    let in_band: Vec<f64> = dist
        .iter()
        .zip(&thrust)
        .filter(|(d, _)| (1e3..=2e3).contains(&d.unwrap()))
        .map(|(_, f)| f.unwrap() * 1e3)
        .collect();
    let (lo, hi) = in_band.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    outcome(
        !in_band.is_empty() && lo >= 0.1 && hi <= 50.0 && elapsed < Duration::from_secs(600),
        format!(
            "{} of {} front members at 1-2 km, max thrust {lo:.2}..{hi:.2} mN (within 0.1..50), {:.0} s (< 600 s)",
            in_band.len(),
            t.rows.len(),
            elapsed.as_secs_f64()
        ),
    )
}

/// Additive epsilon indicator: the smallest shift by which `a` weakly
/// dominates every point of `b` (minimisation).
fn epsilon_indicator(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    b.iter()
        .map(|q| a.iter().map(|p| (p[0] - q[0]).max(p[1] - q[1])).fold(f64::INFINITY, f64::min))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn criterion_6() -> Outcome {
    // Pointwise reflection of z for mirrored deltas.
    let k = apophis_elements(0.0, 0.0);
    let d = ElementDeltas::from_array(&NATURAL_DELTAS);
    // Negate di and draan; the argument of perihelion takes up the
    // node's along-track contribution so the in-plane motion is unchanged.
    let m = ElementDeltas { di: -d.di, draan: -d.draan, dargp: d.dargp + 2.0 * k.i.cos() * d.draan, ..d };
    let mut worst: f64 = 0.0;
    for j in 0..720 {
        let nu = j as f64 * std::f64::consts::TAU / 720.0;
        let p = natural_position(&k, &d, nu);
        let q = natural_position(&k, &m, nu);
        let scale = p.norm();
        worst = worst.max((p.z + q.z).abs() / scale).max((p.x - q.x).abs() / scale).max((p.y - q.y).abs() / scale);
    }
    let oa = natural_orbit_objectives(&d, &k, 1000.0);
    let ob = natural_orbit_objectives(&m, &k, 1000.0);
    let families_differ = oa.family != ob.family;

    // Each family's own front: non-dominated union of independent
    // optimisations constrained to that family.
    let family_front = |family: Family| -> Vec<[f64; 2]> {
        let spec = ProblemSpec::new(NATURAL_LOWER.to_vec(), NATURAL_UPPER.to_vec(), 2, 2, |x: &[f64]| {
            let o = natural_orbit_objectives(&ElementDeltas::from_array(x), &k, 1000.0);
            let wrong_family = if o.family == family { 0.0 } else { 1.0 };
            Evaluation::new(vec![o.max_distance, o.plume_angle], vec![o.constraint, wrong_family])
        })
        .unwrap();
        let settings = OptimizerSettings { budget: 20_000, ..Default::default() };
        let mut pts = Vec::new();
        for seed in 0..FRONT_RUNS {
            let res = ablation_core::moo::optimize(&spec, &settings, seed).unwrap();
            pts.extend(res.archive.members().iter().filter(|m| m.is_feasible()).map(|m| [m.objectives[0], m.objectives[1]]));
        }
        let dominated = |p: &[f64; 2]| pts.iter().any(|q| q[0] <= p[0] && q[1] <= p[1] && (q[0] < p[0] || q[1] < p[1]));
        pts.iter().filter(|p| !dominated(p)).cloned().collect()
    };
    let (plus, minus) = (family_front(Family::PlusZ), family_front(Family::MinusZ));
    let all: Vec<[f64; 2]> = plus.iter().chain(&minus).cloned().collect();
    let span = |c: usize| {
        let (lo, hi) = all.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p[c]), b.max(p[c])));
        (lo, (hi - lo).max(f64::MIN_POSITIVE))
    };
    let (s0, s1) = (span(0), span(1));
    let normalise = |f: &[[f64; 2]]| -> Vec<[f64; 2]> {
        f.iter().map(|p| [(p[0] - s0.0) / s0.1, (p[1] - s1.0) / s1.1]).collect()
    };
    let (plus, minus) = (normalise(&plus), normalise(&minus));
    // Archive resolution: the epsilon lost by dropping one member and
    // covering it with its neighbour, at the coarsest spacing of either front.
    let coarsest = |f: &[[f64; 2]]| {
        let mut sorted = f.to_vec();
        sorted.sort_by(|a, b| a[0].total_cmp(&b[0]));
        sorted
            .windows(2)
            .map(|w| (w[1][0] - w[0][0]).abs().min((w[0][1] - w[1][1]).abs()))
            .fold(0.0, f64::max)
    };
    let resolution = coarsest(&plus).max(coarsest(&minus));
    let separation = epsilon_indicator(&plus, &minus).max(epsilon_indicator(&minus, &plus));
    let both = !plus.is_empty() && !minus.is_empty();
    outcome(
        worst <= 1e-9 && families_differ && both && separation <= resolution,
        format!(
            "mirror residual {worst:.1e} (<= 1e-9); fronts +z {} / -z {} members, epsilon indicator between fronts {separation:.4} vs archive resolution {resolution:.4} (normalised)",
            plus.len(),
            minus.len()
        ),
    )
}

fn criterion_7() -> Outcome {
    let spec = ProblemSpec::new(vec![-5.0], vec![5.0], 2, 0, |x: &[f64]| {
        Evaluation::new(vec![x[0] * x[0], (x[0] - 2.0).powi(2)], vec![])
    })
    .unwrap();
    let reference = [4.0, 4.0];
    // Front y = (sqrt(f1) - 2)^2 for f1 in [0, 4]; dominated area up to (4, 4).
    let steps = 200_000;
    let h = 4.0 / steps as f64;
    let under: f64 = (0..steps)
        .map(|j| {
            let f1 = (j as f64 + 0.5) * h;
            (f1.sqrt() - 2.0).powi(2)
        })
        .sum::<f64>()
        * h;
    let exact = 16.0 - under;
    let settings = OptimizerSettings {
        budget: 20_000,
        hypervolume_reference: Some(reference.to_vec()),
        ..Default::default()
    };
    let mut dominated_generations = 0;
    let res = optimize_with_observer(&spec, &settings, 7, |g| {
        if g.archive.has_dominated_pair() {
            dominated_generations += 1;
        }
    })
    .unwrap();
    let hv = hypervolume(&res.archive.objective_vectors(), &reference);
    outcome(
        hv / exact >= 0.99 && dominated_generations == 0 && res.evaluations <= 20_000,
        format!(
            "hypervolume {:.3}% of analytic {exact:.5} after {} evaluations, dominated pairs in {dominated_generations} of {} generations",
            100.0 * hv / exact,
            res.evaluations,
            res.generations
        ),
    )
}

fn map_table(formation: serde_json::Value) -> ResultTable {
    let mut body = base_scenario();
    body["formation"] = formation;
    body["warning_times"] = (1..=8).map(|y| serde_json::json!({"value": y, "unit": "year"})).collect();
    body["deflection_map"] = serde_json::json!({
        "aperture_diameters": [{"value": 5, "unit": "m"}], "concentration_ratio": 5000,
        "n_spacecraft": (1..=10).collect::<Vec<u32>>()
    });
    run_deflection_map(&scenario(body)).unwrap()
}

/// b indexed as [n_sc - 1][warning_years - 1].
fn map_grid(t: &ResultTable) -> Vec<Vec<f64>> {
    let n = column_f64(t, "n_spacecraft");
    let w = column_f64(t, "warning_years");
    let b = column_f64(t, "impact_parameter_km");
    let mut grid = vec![vec![f64::NAN; 8]; 10];
    for j in 0..t.rows.len() {
        grid[n[j].unwrap() as usize - 1][w[j].unwrap().round() as usize - 1] = b[j].unwrap();
    }
    grid
}

fn strictly_increasing(grid: &[Vec<f64>]) -> bool {
    let rows = grid.iter().all(|r| r.windows(2).all(|p| p[1] > p[0]));
    let cols = (0..grid[0].len()).all(|c| grid.windows(2).all(|p| p[1][c] > p[0][c]));
    rows && cols
}

fn criterion_8() -> Outcome {
    let natural = map_table(natural_deltas_json());
    let shaped = map_table(shaped_json());
    let (gn, gs) = (map_grid(&natural), map_grid(&shaped));
    let monotone = strictly_increasing(&gn) && strictly_increasing(&gs);
    let cells = gn.iter().flatten().zip(gs.iter().flatten());
    let shaped_wins = cells.clone().filter(|(n, s)| s >= n).count();
    let halts = column_f64(&natural, "halt_years").iter().filter(|h| h.is_some_and(|h| h <= 1.0)).count();
    outcome(
        monotone && shaped_wins == 80 && halts > 0,
        format!(
            "monotone in n_sc and warning: {monotone}; shaped >= natural in {shaped_wins}/80 cells; natural cells halted within a year: {halts}/80"
        ),
    )
}

fn criterion_9() -> Outcome {
    let started = Instant::now();
    let mut body = base_scenario();
    body["earth"] = "circular".into();
    body["design"] = serde_json::json!({
        "aperture_diameter": {"value": 20, "unit": "m"}, "n_spacecraft": 1, "concentration_ratio": 5000
    });
    body["formation"] = shaped_json();
    body["eccentricity_sweep"] = serde_json::json!({
        "aphelion_radius": {"from": 1.0, "to": 2.0, "points": 11, "unit": "AU"},
        "perihelion_radius": {"from": 0.5, "to": 1.0, "points": 11, "unit": "AU"},
        "warning_time": {"value": 9, "unit": "year"}
    });
    let t = run_eccentricity_sweep(&scenario(body)).unwrap();
    let elapsed = started.elapsed();
    let ra = column_f64(&t, "aphelion_au");
    let rp = column_f64(&t, "perihelion_au");
    let ecc = column_f64(&t, "eccentricity");
    let b = column_f64(&t, "impact_parameter_km");
    let mut decreases = 0;
    let mut rows_checked = 0;
    let mut ratio = 0.0;
    let mut distinct_rp: Vec<f64> = rp.iter().map(|x| x.unwrap()).collect();
    distinct_rp.dedup();
    for &r in &distinct_rp {
        let mut row: Vec<(f64, f64, f64)> = (0..t.rows.len())
            .filter(|&j| rp[j].unwrap() == r && b[j].is_some())
            .map(|j| (ra[j].unwrap(), b[j].unwrap(), ecc[j].unwrap()))
            .collect();
        row.sort_by(|a, b| a.0.total_cmp(&b.0));
        if row.len() < 2 {
            continue;
        }
        rows_checked += 1;
        decreases += row.windows(2).filter(|w| w[1].1 < w[0].1).count();
        if r == distinct_rp[0] {
            // Most eccentric cell against the least eccentric one in its row.
            let most = row.iter().max_by(|a, b| a.2.total_cmp(&b.2)).unwrap();
            let least = row.iter().min_by(|a, b| a.2.total_cmp(&b.2)).unwrap();
            ratio = most.1 / least.1;
        }
    }
    outcome(
        decreases == 0 && ratio >= 5.0 && elapsed < Duration::from_secs(1800),
        format!(
            "{decreases} decreases of b along r_a over {rows_checked} rows (0 required); most/least eccentric b ratio {ratio:.1} (>= 5); {:.0} s (< 1800 s)",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut body = base_scenario();
    body["formation"] = serde_json::json!({"mode": "natural", "y_limits": [{"value": 1, "unit": "km"}]});
    body["optimizer"] = serde_json::json!({"population": 24, "budget": 1200});
    let sc = scenario(body);
    let pool = |n: usize| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    let a = pool(1).install(|| run_formation_design(&sc)).unwrap().to_csv().unwrap();
    let b = pool(1).install(|| run_formation_design(&sc)).unwrap().to_csv().unwrap();
    let c = pool(4).install(|| run_formation_design(&sc)).unwrap().to_csv().unwrap();

    let mut map = base_scenario();
    map["formation"] = shaped_json();
    map["warning_times"] = serde_json::json!([{"value": 0.5, "unit": "year"}, {"value": 1, "unit": "year"}]);
    map["deflection_map"] = serde_json::json!({
        "aperture_diameters": [{"value": 5, "unit": "m"}], "concentration_ratio": 5000, "n_spacecraft": [1, 3]
    });
    let msc = scenario(map);
    let m1 = pool(1).install(|| run_deflection_map(&msc)).unwrap().to_csv().unwrap();
    let m2 = pool(3).install(|| run_deflection_map(&msc)).unwrap().to_csv().unwrap();
    outcome(
        a == b && a == c && m1 == m2 && a.lines().count() > 1,
        format!(
            "formation design ({} rows) and deflection map ({} rows) identical across repeats and thread counts",
            a.lines().count() - 1,
            m1.lines().count() - 1
        ),
    )
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "Gauss equations match Cartesian propagation", criterion_1),
        (2, "zero push gives zero deflection", criterion_2),
        (3, "physics spot checks", criterion_3),
        (4, "Lyapunov descent under station keeping", criterion_4),
        (5, "shaped-formation thrust scale", criterion_5),
        (6, "formation-family symmetry", criterion_6),
        (7, "optimizer on the analytic benchmark", criterion_7),
        (8, "deflection-map monotonicity", criterion_8),
        (9, "eccentricity sweep", criterion_9),
        (10, "determinism", criterion_10),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let started = Instant::now();
        let o = run();
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {status} {name}: {} [{:.1} s]", o.summary, started.elapsed().as_secs_f64());
        if !o.passed && !KNOWN_UNATTAINABLE.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
