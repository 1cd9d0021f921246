//! End-to-end deflection: sublimation thrust integrated through the
//! perturbation equations up to a virtual Earth encounter, and the
//! resulting miss distance in the impact plane.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::astro::{
    deflected_elements_at_moid, delta_m_at_moid, delta_m_from_excess, elements_from_array, find_moid, gauss_rates,
    hill_to_tangential, impact_parameter, kepler_propagate, true_from_mean, mean_from_true, Anomaly, BodyEphemeris,
    ElementDeltas, OrbitalElements,
};
use crate::constants::MU_SUN;
use crate::error::{Error, Result};
use crate::formation::{natural_position, ShapedOrbit};
use crate::integrate::{step_count, try_rk4_step};
use crate::plume::{degradation_factor, sample_environment, PlumeConstants};
use crate::sizing::{mass_budget, SpacecraftDesign};
use crate::sublimation::{exhaust_velocity, mass_flow_rate, tug_acceleration, AsteroidModel};

/// How the formation flies around the asteroid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum FormationMode {
    Natural { deltas: ElementDeltas },
    Shaped { orbit: ShapedOrbit },
}

impl FormationMode {
    pub fn label(&self) -> &'static str {
        match self {
            FormationMode::Natural { .. } => "natural",
            FormationMode::Shaped { .. } => "shaped",
        }
    }

    /// Hill-frame spacecraft position when the asteroid has elements `k`.
    pub fn position(&self, k: &OrbitalElements) -> Vector3<f64> {
        let nu = k.true_anomaly();
        match self {
            FormationMode::Natural { deltas } => natural_position(k, deltas, nu),
            FormationMode::Shaped { orbit } => orbit.position(nu),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeflectionSetup {
    /// Asteroid with its elements at the start of the deflection.
    pub asteroid: AsteroidModel,
    pub design: SpacecraftDesign,
    pub formation: FormationMode,
    pub plume: PlumeConstants,
    /// Integrator step bound as a fraction of the asteroid period.
    pub step_fraction: f64,
    /// Add the gravitational pull of the formation.
    pub include_tug: bool,
    pub mu_sun: f64,
}

impl DeflectionSetup {
    pub fn new(asteroid: AsteroidModel, design: SpacecraftDesign, formation: FormationMode) -> Self {
        Self {
            asteroid,
            design,
            formation,
            plume: PlumeConstants::default(),
            step_fraction: 1e-3,
            include_tug: true,
            mu_sun: MU_SUN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThrustSample {
    pub t: f64,
    pub mass_flow: f64,
    pub contamination: f64,
    pub semi_major_axis: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThrustArc {
    /// Osculating elements when the thrust stops.
    pub elements: OrbitalElements,
    /// Integral of (dM/dt - n0) over the arc.
    pub mean_anomaly_excess: f64,
    pub asteroid_mass: f64,
    pub contamination: f64,
    /// Time from the start after which the flow never resumed although a
    /// clean mirror would have sublimated again.
    pub halted_at: Option<f64>,
    pub history: Vec<ThrustSample>,
    pub spacecraft_mass: f64,
}

/// Integrate the asteroid orbit, mass and mirror contamination while the
/// formation thrusts for `duration` seconds from the asteroid epoch.
pub fn thrust_arc(setup: &DeflectionSetup, duration: f64) -> Result<ThrustArc> {
    let ast = &setup.asteroid;
    let design = &setup.design;
    design.validate()?;
    ast.validate()?;
    if !(duration >= 0.0) {
        return Err(Error::InvalidArgument("thrust duration must be non-negative".into()));
    }
    let mu = setup.mu_sun;
    let k0 = ast.elements;
    let n0 = k0.mean_motion(mu);
    let m0 = k0.mean_anomaly();
    let t0 = k0.epoch;
    let r_sizing = k0.a * (1.0 - k0.e);
    let m_sc = mass_budget(design, r_sizing)?.total;
    let v_bar = exhaust_velocity(ast);

    // State: a, e, i, raan, argp, mean-anomaly excess, asteroid mass, condensate thickness.
    let flow = |t: f64, y: &[f64; 8]| -> Result<(OrbitalElements, f64, f64, Vector3<f64>, f64)> {
        let elems: [f64; 6] = [y[0], y[1], y[2], y[3], y[4], y[5]];
        let k = elements_from_array(&elems, m0, n0, t0, t)?;
        let r = k.radius();
        let gamma = k.flight_path_angle();
        let tau = degradation_factor(y[7], &setup.plume);
        let speed = ast.spin_rate * ast.equatorial_radius(-ast.spin_rate * t - gamma);
        let mdot = if y[6] > 0.0 { mass_flow_rate(design, ast, r, tau, speed) } else { 0.0 };
        let offset = setup.formation.position(&k);
        let env = sample_environment(&offset, ast, design, t, gamma, mdot, v_bar, r, &setup.plume)?;
        Ok((k, mdot, gamma, offset, env.contamination_rate))
    };
    let mut rhs = |t: f64, y: &[f64; 8]| -> Result<[f64; 8]> {
        let (k, mdot, gamma, offset, h_rate) = flow(t, y)?;
        let mass = y[6].max(f64::MIN_POSITIVE);
        // The plume leaves along the orbital velocity, so its reaction on
        // the asteroid points against it.
        let mut accel = Vector3::new(-ast.scattering_factor * v_bar * mdot / mass, 0.0, 0.0);
        if setup.include_tug {
            let tug = tug_acceleration(design.n_spacecraft, m_sc, &offset)?;
            accel += hill_to_tangential(&tug, gamma);
        }
        let rates = gauss_rates(&k, &accel, mu)?;
        Ok([
            rates.a,
            rates.e,
            rates.i,
            rates.raan,
            rates.argp,
            rates.mean_anomaly - n0,
            -mdot,
            h_rate,
        ])
    };

    let mut y = [k0.a, k0.e, k0.i, k0.raan, k0.argp, 0.0, ast.mass, 0.0];
    let steps = step_count(duration, setup.step_fraction * k0.period(mu));
    let h = if steps > 0 { duration / steps as f64 } else { 0.0 };
    let mut history = Vec::with_capacity(steps + 1);
    let mut clean_flow = Vec::with_capacity(steps + 1);
    for s in 0..=steps {
        let t = t0 + s as f64 * h;
        let (_, mdot, ..) = flow(t, &y)?;
        history.push(ThrustSample {
            t,
            mass_flow: mdot,
            contamination: y[7],
            semi_major_axis: y[0],
        });
        let clean = if mdot > 0.0 || y[6] <= 0.0 {
            mdot
        } else {
            let k = elements_from_array(&[y[0], y[1], y[2], y[3], y[4], y[5]], m0, n0, t0, t)?;
            let speed = ast.spin_rate * ast.equatorial_radius(-ast.spin_rate * t - k.flight_path_angle());
            mass_flow_rate(design, ast, k.radius(), 1.0, speed)
        };
        clean_flow.push(clean);
        if s < steps {
            y = try_rk4_step(&mut rhs, t, &y, h)?;
            y[6] = y[6].max(0.0);
        }
    }
    let halted_at = contamination_halt(&history, &clean_flow).map(|t| t - t0);
    let elems: [f64; 6] = [y[0], y[1], y[2], y[3], y[4], y[5]];
    Ok(ThrustArc {
        elements: elements_from_array(&elems, m0, n0, t0, t0 + duration)?,
        mean_anomaly_excess: y[5],
        asteroid_mass: y[6],
        contamination: y[7],
        halted_at,
        history,
        spacecraft_mass: m_sc,
    })
}

/// Start of the final flow-free stretch of `history`, provided a clean
/// mirror would have produced flow somewhere inside it.
fn contamination_halt(history: &[ThrustSample], clean_flow: &[f64]) -> Option<f64> {
    let last_flow = history.iter().rposition(|h| h.mass_flow > 0.0);
    let start = last_flow.map_or(0, |i| i + 1);
    if start >= history.len() || !clean_flow[start..].iter().any(|&c| c > 0.0) {
        return None;
    }
    Some(history[start].t)
}

/// Nominal asteroid and Earth phased so that both reach their closest
/// approach points at `t_moid`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Encounter {
    /// Nominal asteroid elements at the deflection start.
    pub nominal: OrbitalElements,
    pub earth: BodyEphemeris,
    pub t_moid: f64,
}

impl Encounter {
    /// Place the asteroid orbit `shape` and the Earth orbit `earth_shape`
    /// on a virtual collision course at the minimum orbit intersection,
    /// `warning` seconds after `t0`.
    pub fn virtual_impact(
        shape: &OrbitalElements,
        earth_shape: &OrbitalElements,
        t0: f64,
        warning: f64,
        mu: f64,
    ) -> Result<Self> {
        let moid = find_moid(shape, earth_shape);
        Self::at_anomalies(shape, moid.nu_first, earth_shape, moid.nu_second, t0, t0 + warning, mu)
    }

    /// Encounter with the asteroid at true anomaly `nu_asteroid` and the
    /// Earth at `nu_earth` at time `t_moid`.
    pub fn at_anomalies(
        shape: &OrbitalElements,
        nu_asteroid: f64,
        earth_shape: &OrbitalElements,
        nu_earth: f64,
        t0: f64,
        t_moid: f64,
        mu: f64,
    ) -> Result<Self> {
        let m_hit = mean_from_true(nu_asteroid, shape.e);
        let at_hit = shape.with_mean_anomaly(m_hit).with_epoch(t_moid);
        let nominal = kepler_propagate(&at_hit, t0 - t_moid, mu);
        let earth_hit = OrbitalElements {
            anomaly: Anomaly::Mean(mean_from_true(nu_earth, earth_shape.e)),
            epoch: t_moid,
            ..*earth_shape
        };
        earth_hit.validate()?;
        Ok(Self {
            nominal,
            earth: BodyEphemeris::new(earth_hit, mu),
            t_moid,
        })
    }

    pub fn warning_time(&self) -> f64 {
        self.t_moid - self.nominal.epoch
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeflectionOutcome {
    pub arc: ThrustArc,
    /// Mean-anomaly shift at the encounter (rad).
    pub delta_m: f64,
    /// Same shift from the undecomposed integral, for cross-checking.
    pub delta_m_direct: f64,
    /// Change of the impact parameter (m).
    pub impact_parameter: f64,
}

/// Thrust from the encounter's start epoch for `thrust_duration`, coast to
/// `t_moid`, and measure the miss distance.
pub fn deflect(setup: &DeflectionSetup, encounter: &Encounter, thrust_duration: f64) -> Result<DeflectionOutcome> {
    let mu = setup.mu_sun;
    let warning = encounter.warning_time();
    if thrust_duration > warning + 1e-6 {
        return Err(Error::InvalidArgument("thrust cannot continue past the encounter".into()));
    }
    let mut setup = *setup;
    setup.asteroid.elements = encounter.nominal;
    let arc = thrust_arc(&setup, thrust_duration.min(warning))?;
    let t0 = encounter.nominal.epoch;
    let ti = t0 + thrust_duration.min(warning);
    let n0 = encounter.nominal.mean_motion(mu);
    let ni = arc.elements.mean_motion(mu);
    let delta_m = delta_m_from_excess(arc.mean_anomaly_excess, ti, encounter.t_moid, n0, ni);
    let delta_m_direct = delta_m_at_moid(
        n0 * (ti - t0) + arc.mean_anomaly_excess,
        t0,
        ti,
        encounter.t_moid,
        n0,
        ni,
    );
    let deflected = deflected_elements_at_moid(&arc.elements, &encounter.nominal, delta_m, encounter.t_moid, mu);
    let b = impact_parameter(&deflected, &encounter.nominal, &encounter.earth, encounter.t_moid)?;
    Ok(DeflectionOutcome {
        arc,
        delta_m,
        delta_m_direct,
        impact_parameter: b,
    })
}

/// True anomaly on the way out from perihelion where an orbit crosses the
/// circle of radius `radius`, if it does.
pub fn outbound_crossing(k: &OrbitalElements, radius: f64) -> Option<f64> {
    if k.e <= 0.0 {
        return None;
    }
    let c = (k.semi_latus_rectum() / radius - 1.0) / k.e;
    // Apsides touching the circle land a rounding error outside [-1, 1].
    const TOUCH: f64 = 1e-12;
    if !(-1.0 - TOUCH..=1.0 + TOUCH).contains(&c) {
        return None;
    }
    Some(c.clamp(-1.0, 1.0).acos())
}

/// Time after `after` at which an orbit next reaches true anomaly `nu`.
pub fn next_passage(k: &OrbitalElements, nu: f64, after: f64, mu: f64) -> f64 {
    let n = k.mean_motion(mu);
    let m_now = kepler_propagate(k, after - k.epoch, mu).mean_anomaly();
    let m_target = mean_from_true(nu, k.e);
    let dm = (m_target - m_now).rem_euclid(std::f64::consts::TAU);
    after + dm / n
}

/// Anomaly of an orbit `k` at time `t`.
pub fn true_anomaly_at(k: &OrbitalElements, t: f64, mu: f64) -> f64 {
    let m = kepler_propagate(k, t - k.epoch, mu).mean_anomaly();
    true_from_mean(m, k.e)
}
