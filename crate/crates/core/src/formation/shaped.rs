use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::dynamics::{keplerian_polar_state, proximity_derivatives, velocity_elevation, ForceModel, ProximityState};
use super::sweep::periodic_max;
use crate::astro::{kepler_propagate, OrbitalElements};
use crate::constants::STANDARD_GRAVITY;
use crate::error::Result;

/// Prescribed first-harmonic trajectory in the Hill frame, coefficients
/// `[x1, x2, x3, y1, y2, y3, z1, z2]` in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapedOrbit {
    pub coeffs: [f64; 8],
}

/// Search-space bounds of the shaped-orbit problem (m).
pub const SHAPED_LOWER: [f64; 8] = [-1e3, -1e3, -1e3, -1e3, -1e3, -2e3, -1e3, -1e3];
pub const SHAPED_UPPER: [f64; 8] = [1e3, 1e3, 0.0, 1e3, 1e3, 0.0, 1e3, 1e3];

/// Position, velocity and acceleration on the prescribed path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapedPoint {
    pub position: Vector3<f64>,
    pub velocity: Vector3<f64>,
    pub acceleration: Vector3<f64>,
}

impl ShapedOrbit {
    pub fn new(coeffs: [f64; 8]) -> Self {
        Self { coeffs }
    }

    pub fn position(&self, nu: f64) -> Vector3<f64> {
        let [x1, x2, x3, y1, y2, y3, z1, z2] = self.coeffs;
        let (s, c) = nu.sin_cos();
        Vector3::new(x1 * c + x2 * s + x3, y1 * c + y2 * s + y3, z1 * c + z2 * s)
    }

    /// First derivative with respect to the true anomaly.
    pub fn position_prime(&self, nu: f64) -> Vector3<f64> {
        let [x1, x2, _, y1, y2, _, z1, z2] = self.coeffs;
        let (s, c) = nu.sin_cos();
        Vector3::new(-x1 * s + x2 * c, -y1 * s + y2 * c, -z1 * s + z2 * c)
    }

    /// Second derivative with respect to the true anomaly.
    pub fn position_second(&self, nu: f64) -> Vector3<f64> {
        let [x1, x2, _, y1, y2, _, z1, z2] = self.coeffs;
        let (s, c) = nu.sin_cos();
        -Vector3::new(x1 * c + x2 * s, y1 * c + y2 * s, z1 * c + z2 * s)
    }

    /// Time derivatives given the anomaly rate and acceleration.
    pub fn eval(&self, nu: f64, nu_dot: f64, nu_ddot: f64) -> ShapedPoint {
        let d1 = self.position_prime(nu);
        ShapedPoint {
            position: self.position(nu),
            velocity: d1 * nu_dot,
            acceleration: self.position_second(nu) * nu_dot * nu_dot + d1 * nu_ddot,
        }
    }

    /// Analytic maximum of x over a revolution.
    pub fn max_x(&self) -> f64 {
        let [x1, x2, x3, ..] = self.coeffs;
        x3 + x1.hypot(x2)
    }

    /// Analytic maximum of y over a revolution.
    pub fn max_y(&self) -> f64 {
        let [_, _, _, y1, y2, y3, ..] = self.coeffs;
        y3 + y1.hypot(y2)
    }

    /// Both path constraints strictly satisfied.
    pub fn is_feasible(&self) -> bool {
        self.max_x() < 0.0 && self.max_y() < 0.0
    }

    pub fn max_distance(&self) -> f64 {
        periodic_max(|nu| self.position(nu).norm()).1
    }
}

/// Setup for computing the control along a shaped orbit.
#[derive(Debug, Clone, Copy)]
pub struct ShapedControlSetup<'a> {
    pub forces: ForceModel<'a>,
    /// Asteroid elements at the start of the window.
    pub asteroid_elements: OrbitalElements,
    pub duration: f64,
    pub samples: usize,
    /// Specific impulse of the station-keeping thrusters (s).
    pub specific_impulse: f64,
}

/// Control history along a shaped orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlProfile {
    pub times: Vec<f64>,
    pub control: Vec<Vector3<f64>>,
    /// Cumulative velocity increment (m/s).
    pub delta_v: Vec<f64>,
    pub spacecraft_mass: f64,
    pub specific_impulse: f64,
    /// Thickness of the condensate on the mirror at each sample (m).
    pub contamination: Vec<f64>,
}

impl ControlProfile {
    pub fn total_delta_v(&self) -> f64 {
        *self.delta_v.last().unwrap_or(&0.0)
    }

    /// Propellant fraction from the rocket equation.
    pub fn mass_fraction(&self) -> f64 {
        1.0 - (-self.total_delta_v() / (self.specific_impulse * STANDARD_GRAVITY)).exp()
    }

    pub fn max_acceleration(&self) -> f64 {
        self.control.iter().map(|u| u.norm()).fold(0.0, f64::max)
    }

    /// Largest thrust of one spacecraft (N).
    pub fn max_thrust(&self) -> f64 {
        self.spacecraft_mass * self.max_acceleration()
    }

    pub fn thrust(&self) -> Vec<f64> {
        self.control.iter().map(|u| self.spacecraft_mass * u.norm()).collect()
    }
}

/// Control needed to hold the prescribed path: required kinematic
/// acceleration minus everything the dynamics already supply.
pub fn shaped_orbit_control(orbit: &ShapedOrbit, setup: &ShapedControlSetup) -> Result<ControlProfile> {
    let fm = &setup.forces;
    let n = setup.samples.max(1);
    let dt = setup.duration / n as f64;
    let k0 = &setup.asteroid_elements;

    let mut times = Vec::with_capacity(n + 1);
    let mut control = Vec::with_capacity(n + 1);
    let mut delta_v = Vec::with_capacity(n + 1);
    let mut contamination = Vec::with_capacity(n + 1);
    let mut h = 0.0;
    let mut prev_rate = 0.0;
    let mut dv = 0.0;

    for j in 0..=n {
        let t = k0.epoch + j as f64 * dt;
        let k = kepler_propagate(k0, t - k0.epoch, fm.mu_sun);
        let (r, r_dot, nu, nu_dot) = keplerian_polar_state(&k, fm.mu_sun);
        let nu_ddot = -2.0 * r_dot * nu_dot / r;
        let p = orbit.eval(nu, nu_dot, nu_ddot);

        let pert = fm.perturbations(&p.position, t, r, velocity_elevation(r, r_dot, nu_dot), h)?;
        let state = ProximityState {
            position: p.position,
            velocity: p.velocity,
            r_asteroid: r,
            r_asteroid_dot: r_dot,
            nu,
            nu_dot,
        };
        let natural = proximity_derivatives(&state, &pert.total(), &Vector3::zeros(), fm.mu_sun);
        let u = p.acceleration - Vector3::new(natural[3], natural[4], natural[5]);

        if j > 0 {
            dv += 0.5 * dt * (control.last().map(|c: &Vector3<f64>| c.norm()).unwrap_or(0.0) + u.norm());
            h += 0.5 * dt * (prev_rate + pert.contamination_rate);
        }
        prev_rate = pert.contamination_rate;
        times.push(t);
        control.push(u);
        delta_v.push(dv);
        contamination.push(h);
    }

    Ok(ControlProfile {
        times,
        control,
        delta_v,
        spacecraft_mass: fm.spacecraft_mass,
        specific_impulse: setup.specific_impulse,
        contamination,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapedObjectives {
    pub mass_fraction: f64,
    pub max_distance: f64,
    /// Largest control acceleration (m/s^2).
    pub max_control: f64,
    pub max_thrust: f64,
    /// max x over the orbit; must be negative.
    pub c1: f64,
    /// max y over the orbit; must be negative.
    pub c2: f64,
}

pub fn shaped_objectives(orbit: &ShapedOrbit, setup: &ShapedControlSetup) -> Result<ShapedObjectives> {
    let profile = shaped_orbit_control(orbit, setup)?;
    Ok(ShapedObjectives {
        mass_fraction: profile.mass_fraction(),
        max_distance: orbit.max_distance(),
        max_control: profile.max_acceleration(),
        max_thrust: profile.max_thrust(),
        c1: orbit.max_x(),
        c2: orbit.max_y(),
    })
}
