use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::dynamics::{keplerian_polar_state, proximity_derivatives, velocity_elevation, ForceModel, ProximityState};
use crate::astro::OrbitalElements;
use crate::constants::STANDARD_GRAVITY;
use crate::error::Result;
use crate::integrate::{step_count, try_rk4_step};
use crate::sublimation::exhaust_velocity;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovGains {
    /// Elastic coefficient (1/s^2).
    pub stiffness: f64,
    /// Dissipative coefficient (1/s).
    pub damping: f64,
}

impl Default for LyapunovGains {
    fn default() -> Self {
        Self {
            stiffness: 1e-6,
            damping: 1e-5,
        }
    }
}

/// Station-keeping acceleration: cancels asteroid point-mass gravity and
/// the radiation and plume forces, then adds a spring towards `reference`
/// and viscous damping.
pub fn lyapunov_control(
    position: &Vector3<f64>,
    velocity: &Vector3<f64>,
    reference: &Vector3<f64>,
    gains: &LyapunovGains,
    modelled: &Vector3<f64>,
) -> Vector3<f64> {
    -modelled - gains.stiffness * (position - reference) - gains.damping * velocity
}

/// Lyapunov function: kinetic energy plus spring energy about the reference.
pub fn lyapunov_function(position: &Vector3<f64>, velocity: &Vector3<f64>, reference: &Vector3<f64>, stiffness: f64) -> f64 {
    0.5 * velocity.norm_squared() + 0.5 * stiffness * (position - reference).norm_squared()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationKeepingConfig {
    pub duration: f64,
    pub step: f64,
    pub gains: LyapunovGains,
    pub specific_impulse: f64,
    /// Keep one sample in this many steps in the returned history.
    pub record_every: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationKeepingSample {
    pub t: f64,
    pub position: Vector3<f64>,
    pub reference: Vector3<f64>,
    pub thrust: f64,
    pub lyapunov: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationKeepingResult {
    pub history: Vec<StationKeepingSample>,
    pub steps: usize,
    /// Steps where V rose by more than the tolerance with the reference held.
    pub lyapunov_violations: usize,
    /// Largest per-step increase of V relative to V at the step start.
    pub worst_relative_increase: f64,
    /// Largest distance from the moving reference (m).
    pub max_tracking_error: f64,
    /// Largest distance of the reference from the asteroid (m).
    pub orbit_scale: f64,
    pub delta_v: f64,
    pub max_thrust: f64,
    pub final_contamination: f64,
    pub spacecraft_mass: f64,
    pub specific_impulse: f64,
}

impl StationKeepingResult {
    pub fn mass_fraction(&self) -> f64 {
        1.0 - (-self.delta_v / (self.specific_impulse * STANDARD_GRAVITY)).exp()
    }
}

/// Relative tolerance on the per-step growth of V.
pub const LYAPUNOV_TOLERANCE: f64 = 1e-12;

/// Closed-loop flight along a reference path parameterised by the asteroid
/// true anomaly. The reference point is held fixed during each step and
/// moved to the current anomaly at the start of the next.
pub fn simulate_station_keeping<R>(
    forces: &ForceModel,
    asteroid: &OrbitalElements,
    reference: R,
    config: &StationKeepingConfig,
) -> Result<StationKeepingResult>
where
    R: Fn(f64) -> Vector3<f64>,
{
    let mu_sun = forces.mu_sun;
    let ast = forces.asteroid;
    let v_bar = exhaust_velocity(ast);
    let (r0, rd0, nu0, nud0) = keplerian_polar_state(asteroid, mu_sun);
    let dnu = 1e-5;
    let ref_rate = (reference(nu0 + dnu) - reference(nu0 - dnu)) / (2.0 * dnu);
    let start = ProximityState {
        position: reference(nu0),
        velocity: ref_rate * nud0,
        r_asteroid: r0,
        r_asteroid_dot: rd0,
        nu: nu0,
        nu_dot: nud0,
    };
    let mut y = [0.0; 11];
    y[..10].copy_from_slice(&start.to_array());

    // Control and state rates for the given held reference point.
    let rates = |t: f64, y: &[f64; 11], held: &Vector3<f64>| -> Result<([f64; 11], Vector3<f64>)> {
        let s = ProximityState::from_slice(y);
        let elevation = velocity_elevation(s.r_asteroid, s.r_asteroid_dot, s.nu_dot);
        let pert = forces.perturbations(&s.position, t, s.r_asteroid, elevation, y[10])?;
        let modelled = pert.central + pert.srp + pert.plume;
        let u = lyapunov_control(&s.position, &s.velocity, held, &config.gains, &modelled);
        let push = ast.scattering_factor * v_bar * pert.mass_flow / ast.mass;
        // Plume reaction on the asteroid, against its orbital velocity.
        let deflection = -Vector3::new(elevation.sin(), elevation.cos(), 0.0) * push;
        let d = proximity_derivatives(&s, &(pert.total() + u), &deflection, mu_sun);
        let mut out = [0.0; 11];
        out[..10].copy_from_slice(&d);
        out[10] = pert.contamination_rate;
        Ok((out, u))
    };

    let t0 = asteroid.epoch;
    let steps = step_count(config.duration, config.step);
    let h = config.duration / steps as f64;
    let mut history = Vec::new();
    let mut violations = 0;
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut max_err: f64 = 0.0;
    let mut scale: f64 = 0.0;
    let mut dv = 0.0;
    let mut max_thrust: f64 = 0.0;

    let (_, mut u_prev) = rates(t0, &y, &reference(y[8]))?;
    for k in 0..steps {
        let t = t0 + k as f64 * h;
        let held = reference(y[8]);
        let pos = Vector3::new(y[0], y[1], y[2]);
        let vel = Vector3::new(y[3], y[4], y[5]);
        let v_start = lyapunov_function(&pos, &vel, &held, config.gains.stiffness);
        if k % config.record_every.max(1) == 0 {
            history.push(StationKeepingSample {
                t,
                position: pos,
                reference: held,
                thrust: forces.spacecraft_mass * u_prev.norm(),
                lyapunov: v_start,
            });
        }

        let mut f = |tt: f64, yy: &[f64; 11]| rates(tt, yy, &held).map(|r| r.0);
        y = try_rk4_step(&mut f, t, &y, h)?;

        let pos = Vector3::new(y[0], y[1], y[2]);
        let vel = Vector3::new(y[3], y[4], y[5]);
        let v_end = lyapunov_function(&pos, &vel, &held, config.gains.stiffness);
        let rel = (v_end - v_start) / v_start.max(f64::MIN_POSITIVE);
        worst = worst.max(rel);
        if v_end - v_start > LYAPUNOV_TOLERANCE * v_start {
            violations += 1;
        }

        let (_, u) = rates(t + h, &y, &held)?;
        dv += 0.5 * h * (u_prev.norm() + u.norm());
        max_thrust = max_thrust.max(forces.spacecraft_mass * u.norm());
        u_prev = u;

        let target = reference(y[8]);
        max_err = max_err.max((pos - target).norm());
        scale = scale.max(target.norm());
    }

    Ok(StationKeepingResult {
        history,
        steps,
        lyapunov_violations: violations,
        worst_relative_increase: worst,
        max_tracking_error: max_err,
        orbit_scale: scale,
        delta_v: dv,
        max_thrust,
        final_contamination: y[10],
        spacecraft_mass: forces.spacecraft_mass,
        specific_impulse: config.specific_impulse,
    })
}
