//! Oracle checks run by the `validate` command: each model is compared
//! against an independent route to the same quantity.

use nalgebra::Vector3;

use super::table::{Column, Metadata, OpenParameters, ResultTable};
use crate::astro::{
    apophis_elements, elements_to_state, find_moid, earth_elements, propagate_perturbed, state_to_elements,
    ElementDeltas, OrbitalElements, StateVector,
};
use crate::constants::{wrap_pi, AU, MU_SUN, SECONDS_PER_YEAR, SOLAR_FLUX_1AU, STEFAN_BOLTZMANN};
use crate::deflection::{deflect, DeflectionSetup, Encounter, FormationMode};
use crate::error::Result;
use crate::formation::natural_position;
use crate::integrate::rk4_step;
use crate::moo::{hypervolume, optimize, Evaluation, OptimizerSettings, ProblemSpec};
use crate::plume::{degradation_factor, PlumeConstants};
use crate::sizing::{EfficiencyOption, SpacecraftDesign};
use crate::sublimation::{exhaust_velocity, radiation_loss, spot_sweep, AsteroidModel};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Measured discrepancy or value.
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn within(name: &'static str, value: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name,
            passed: value.is_finite() && value <= tolerance,
            value,
            tolerance,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_table(&self, seed: u64) -> Result<ResultTable> {
        let open = OpenParameters {
            enthalpy_sublimation_j_per_kg: REFERENCE_ENTHALPY,
            specific_impulse_s: 0.0,
            emissivity: 1.0,
            array_concentration: 10.0,
        };
        let meta = Metadata::new("validate", "built-in oracle suite", b"validate", seed, open);
        let mut t = ResultTable::new(
            "validation",
            vec![
                Column::new("check", "-"),
                Column::new("passed", "-"),
                Column::new("value", "1"),
                Column::new("tolerance", "1"),
                Column::new("detail", "-"),
            ],
            meta,
        );
        for c in &self.checks {
            t.push(vec![
                c.name.into(),
                c.passed.into(),
                c.value.into(),
                c.tolerance.into(),
                c.detail.as_str().into(),
            ])?;
        }
        Ok(t)
    }
}

/// Enthalpy used by the checks that need a complete asteroid model.
const REFERENCE_ENTHALPY: f64 = 1.8e7;

/// Run every oracle check.
pub fn run_validation(seed: u64) -> Result<ValidationReport> {
    let checks = vec![
        exhaust_speed_check(),
        radiation_check(),
        degradation_check(),
        collected_power_check(),
        absorbed_energy_check(),
        gauss_cartesian_check(30.0 * 86_400.0)?,
        null_deflection_check()?,
        mirror_check(),
        moid_check(),
        hypervolume_check(),
        optimizer_check(seed)?,
    ];
    Ok(ValidationReport { checks })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn exhaust_speed_check() -> Check {
    let ast = AsteroidModel::apophis(apophis_elements(0.0, 0.0), REFERENCE_ENTHALPY);
    let v = exhaust_velocity(&ast);
    Check::within("exhaust speed at 1800 K", (v - 520.5).abs(), 0.05, format!("{v:.4} m/s"))
}

fn radiation_check() -> Check {
    let q = radiation_loss(1800.0, 1.0);
    let direct = STEFAN_BOLTZMANN * 1800f64.powi(4);
    Check::within("black-body loss at 1800 K", rel(q, direct), 1e-12, format!("{q:.1} W/m^2"))
}

fn degradation_check() -> Check {
    let c = PlumeConstants::default();
    let tau = degradation_factor(1e-6, &c);
    Check::within(
        "degradation of a 1 micron layer",
        rel(tau, (-2.0f64).exp()),
        1e-12,
        format!("tau = {tau:.6}"),
    )
}

fn collected_power_check() -> Check {
    let p = SOLAR_FLUX_1AU * 314.0;
    Check::within(
        "collected power of 314 m^2 at 1 AU",
        rel(p, 429.5e3),
        2e-3,
        format!("{:.1} kW", p / 1e3),
    )
}

/// Adaptive quadrature of the absorbed energy against its closed form.
fn absorbed_energy_check() -> Check {
    let ast = AsteroidModel::apophis(apophis_elements(0.0, 0.0), REFERENCE_ENTHALPY);
    let design = SpacecraftDesign::new(10.0, 1, 5000.0, EfficiencyOption::LOW);
    let sweep = spot_sweep(&design, &ast, AU, 1.0, 0.3);
    let (p, c) = (sweep.net_input, sweep.conduction_coefficient);
    let mut worst: f64 = 0.0;
    for t in [0.01f64, 0.1, 1.0, 5.0] {
        let s = t.sqrt();
        let s0 = (c / p).min(s);
        let exact = p * (s * s - s0 * s0) - 2.0 * c * (s - s0);
        let q = sweep.absorbed_energy(t);
        if exact > 0.0 {
            worst = worst.max(rel(q, exact));
        }
    }
    Check::within("absorbed energy quadrature", worst, 1e-5, "closed form in sqrt(t)".into())
}

/// Cartesian two-body motion with a tangential push, integrated directly.
fn cartesian_tangential(s0: &StateVector, accel: f64, duration: f64, steps: usize) -> StateVector {
    let mut f = |_t: f64, y: &[f64; 6]| {
        let r = Vector3::new(y[0], y[1], y[2]);
        let v = Vector3::new(y[3], y[4], y[5]);
        let a = -MU_SUN / r.norm().powi(3) * r + accel * v.normalize();
        [v.x, v.y, v.z, a.x, a.y, a.z]
    };
    let mut y = [
        s0.position.x,
        s0.position.y,
        s0.position.z,
        s0.velocity.x,
        s0.velocity.y,
        s0.velocity.z,
    ];
    let h = duration / steps as f64;
    for j in 0..steps {
        y = rk4_step(&mut f, j as f64 * h, &y, h);
    }
    StateVector::new(Vector3::new(y[0], y[1], y[2]), Vector3::new(y[3], y[4], y[5]))
}

/// Largest relative element discrepancy between the two routes.
pub fn element_discrepancy(a: &OrbitalElements, b: &OrbitalElements) -> [f64; 6] {
    let angle = |x: f64, y: f64| wrap_pi(x - y).abs() / y.abs().max(1e-300);
    [
        rel(a.a, b.a),
        rel(a.e, b.e),
        rel(a.i, b.i),
        angle(a.raan, b.raan),
        angle(a.argp, b.argp),
        angle(a.mean_anomaly(), b.mean_anomaly()),
    ]
}

fn gauss_cartesian_check(duration: f64) -> Result<Check> {
    let k0 = apophis_elements(0.3, 0.0);
    let accel = 1e-7;
    let step = 1e-3 * k0.period(MU_SUN);
    let arc = propagate_perturbed(&k0, duration, step, MU_SUN, |_, _| Vector3::new(accel, 0.0, 0.0))?;
    let s0 = elements_to_state(&k0, MU_SUN)?;
    let steps = (duration / (step / 4.0)).ceil() as usize;
    let direct = state_to_elements(&cartesian_tangential(&s0, accel, duration, steps), MU_SUN, duration)?;
    let d = element_discrepancy(&arc.elements, &direct);
    let worst = d.iter().cloned().fold(0.0, f64::max);
    Ok(Check::within(
        "Gauss equations against Cartesian propagation",
        worst,
        1e-3,
        format!("{} days, constant tangential 1e-7 m/s^2", duration / 86_400.0),
    ))
}

fn null_deflection_check() -> Result<Check> {
    let k = apophis_elements(0.0, 0.0);
    let ast = AsteroidModel::apophis(k, REFERENCE_ENTHALPY);
    // Without concentration the spot stays below the sublimation point.
    let design = SpacecraftDesign::new(10.0, 4, 1.0, EfficiencyOption::LOW);
    let deltas = ElementDeltas {
        de: -1.5e-10,
        di: 6.4e-10,
        draan: 2.6e-8,
        dargp: -2.2e-8,
        dmean: 3.4e-9,
    };
    let mut setup = DeflectionSetup::new(ast, design, FormationMode::Natural { deltas });
    setup.include_tug = false;
    setup.step_fraction = 5e-3;
    let enc = Encounter::virtual_impact(&k, &earth_elements(0.0), 0.0, SECONDS_PER_YEAR, MU_SUN)?;
    let out = deflect(&setup, &enc, SECONDS_PER_YEAR)?;
    let ok = out.delta_m.abs() <= 1e-12;
    Ok(Check {
        name: "zero push gives zero deflection",
        passed: ok && out.impact_parameter < 1.0,
        value: out.impact_parameter,
        tolerance: 1.0,
        detail: format!("delta M = {:e} rad", out.delta_m),
    })
}

fn mirror_check() -> Check {
    let k = apophis_elements(0.0, 0.0);
    let dk = ElementDeltas {
        de: -5e-10,
        di: 5e-9,
        draan: 3e-8,
        dargp: 1.2e-7,
        dmean: 2e-8,
    };
    let m = dk.mirrored(k.i);
    let mut worst: f64 = 0.0;
    for j in 0..360 {
        let nu = (j as f64).to_radians();
        let p = natural_position(&k, &dk, nu);
        let q = natural_position(&k, &m, nu);
        let scale = p.norm().max(1e-300);
        worst = worst
            .max((p.z + q.z).abs() / scale)
            .max((p.x - q.x).abs() / scale)
            .max((p.y - q.y).abs() / scale);
    }
    Check::within("mirrored family reflects z", worst, 1e-9, "360 anomalies".into())
}

fn moid_check() -> Check {
    let a = apophis_elements(0.0, 0.0);
    let b = earth_elements(0.0);
    let moid = find_moid(&a, &b);
    let n = 1440;
    let pa: Vec<Vector3<f64>> = (0..n).map(|j| a.position_at(j as f64 * std::f64::consts::TAU / n as f64)).collect();
    let pb: Vec<Vector3<f64>> = (0..n).map(|j| b.position_at(j as f64 * std::f64::consts::TAU / n as f64)).collect();
    let mut grid = f64::INFINITY;
    for p in &pa {
        for q in &pb {
            grid = grid.min((p - q).norm());
        }
    }
    // The dense grid can only overestimate the true minimum.
    let excess = (moid.distance - grid).max(0.0) / AU;
    Check::within("MOID against a dense grid", excess, 1e-9, format!("{:.6e} AU", moid.distance / AU))
}

fn hypervolume_check() -> Check {
    let pts = vec![vec![1.0, 3.0], vec![2.0, 2.0], vec![3.0, 1.0]];
    let hv = hypervolume(&pts, &[4.0, 4.0]);
    Check::within("hypervolume of a staircase", (hv - 6.0).abs(), 1e-12, format!("{hv}"))
}

fn optimizer_check(seed: u64) -> Result<Check> {
    let spec = ProblemSpec::new(vec![-5.0], vec![5.0], 2, 0, |x: &[f64]| {
        Evaluation::new(vec![x[0] * x[0], (x[0] - 2.0).powi(2)], vec![])
    })?;
    let settings = OptimizerSettings {
        budget: 2000,
        parallel: false,
        hypervolume_reference: Some(vec![4.0, 4.0]),
        ..Default::default()
    };
    let res = optimize(&spec, &settings, seed)?;
    let hv = hypervolume(&res.archive.objective_vectors(), &[4.0, 4.0]);
    let exact = 40.0 / 3.0;
    Ok(Check::within(
        "optimizer on min(x^2, (x-2)^2)",
        1.0 - hv / exact,
        0.01,
        format!("hypervolume {hv:.4} of {exact:.4}"),
    ))
}
