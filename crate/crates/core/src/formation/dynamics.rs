use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::gravity::{gravity_acceleration, harmonic_acceleration};
use crate::astro::OrbitalElements;
use crate::error::Result;
use crate::plume::{degradation_factor, sample_environment, PlumeConstants};
use crate::sizing::SpacecraftDesign;
use crate::sublimation::{exhaust_velocity, mass_flow_rate, AsteroidModel};

/// Spacecraft relative state in the asteroid Hill frame together with the
/// asteroid's polar coordinates about the Sun.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProximityState {
    pub position: Vector3<f64>,
    pub velocity: Vector3<f64>,
    pub r_asteroid: f64,
    pub r_asteroid_dot: f64,
    pub nu: f64,
    pub nu_dot: f64,
}

impl ProximityState {
    pub fn to_array(&self) -> [f64; 10] {
        [
            self.position.x,
            self.position.y,
            self.position.z,
            self.velocity.x,
            self.velocity.y,
            self.velocity.z,
            self.r_asteroid,
            self.r_asteroid_dot,
            self.nu,
            self.nu_dot,
        ]
    }

    pub fn from_slice(y: &[f64]) -> Self {
        Self {
            position: Vector3::new(y[0], y[1], y[2]),
            velocity: Vector3::new(y[3], y[4], y[5]),
            r_asteroid: y[6],
            r_asteroid_dot: y[7],
            nu: y[8],
            nu_dot: y[9],
        }
    }
}

/// Asteroid polar motion (r, r_dot, nu, nu_dot) on a Keplerian orbit.
pub fn keplerian_polar_state(k: &OrbitalElements, mu: f64) -> (f64, f64, f64, f64) {
    let nu = k.true_anomaly();
    let p = k.semi_latus_rectum();
    let r = p / (1.0 + k.e * nu.cos());
    let h = (mu * p).sqrt();
    (r, (mu / p).sqrt() * k.e * nu.sin(), nu, h / (r * r))
}

/// Which perturbations the proximity model includes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceSwitches {
    pub asteroid_gravity: bool,
    pub harmonics: bool,
    pub solar_radiation: bool,
    pub plume: bool,
}

impl Default for ForceSwitches {
    fn default() -> Self {
        Self {
            asteroid_gravity: true,
            harmonics: true,
            solar_radiation: true,
            plume: true,
        }
    }
}

impl ForceSwitches {
    pub const NONE: Self = Self {
        asteroid_gravity: false,
        harmonics: false,
        solar_radiation: false,
        plume: false,
    };
}

/// Environment of one spacecraft near the asteroid.
#[derive(Debug, Clone, Copy)]
pub struct ForceModel<'a> {
    pub asteroid: &'a AsteroidModel,
    pub design: &'a SpacecraftDesign,
    pub spacecraft_mass: f64,
    pub plume: PlumeConstants,
    pub switches: ForceSwitches,
    pub mu_sun: f64,
}

/// Non-inertial perturbations at one instant, split into the part the
/// station-keeping law cancels and the part it does not model.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Perturbations {
    /// Central asteroid attraction (m/s^2).
    pub central: Vector3<f64>,
    /// Degree-two gravity correction (m/s^2).
    pub harmonic: Vector3<f64>,
    /// Radiation pressure force divided by spacecraft mass (m/s^2).
    pub srp: Vector3<f64>,
    /// Plume force divided by spacecraft mass (m/s^2).
    pub plume: Vector3<f64>,
    /// Total expelled mass flow of the formation (kg/s).
    pub mass_flow: f64,
    /// Growth rate of the condensed layer (m/s).
    pub contamination_rate: f64,
}

impl Perturbations {
    pub fn total(&self) -> Vector3<f64> {
        self.central + self.harmonic + self.srp + self.plume
    }
}

impl ForceModel<'_> {
    /// Evaluate every enabled perturbation at Hill position `pos`.
    pub fn perturbations(
        &self,
        pos: &Vector3<f64>,
        t: f64,
        r_asteroid: f64,
        velocity_elevation: f64,
        contamination: f64,
    ) -> Result<Perturbations> {
        let sw = self.switches;
        let ast = self.asteroid;
        let mut out = Perturbations::default();
        if sw.asteroid_gravity {
            let g = gravity_acceleration(pos, ast, t)?;
            let h = harmonic_acceleration(pos, ast, t);
            out.central = g - h;
            if sw.harmonics {
                out.harmonic = h;
            }
        } else if sw.harmonics {
            out.harmonic = harmonic_acceleration(pos, ast, t);
        }
        if sw.solar_radiation || sw.plume {
            let tau = degradation_factor(contamination, &self.plume);
            let v_bar = exhaust_velocity(ast);
            let radius = ast.equatorial_radius(-ast.spin_rate * t - velocity_elevation);
            let mdot = if sw.plume {
                mass_flow_rate(self.design, ast, r_asteroid, tau, ast.spin_rate * radius)
            } else {
                0.0
            };
            let env = sample_environment(
                pos,
                ast,
                self.design,
                t,
                velocity_elevation,
                mdot,
                v_bar,
                r_asteroid,
                &self.plume,
            )?;
            if sw.solar_radiation {
                out.srp = env.srp_force / self.spacecraft_mass;
            }
            if sw.plume {
                out.plume = env.plume_force / self.spacecraft_mass;
                out.mass_flow = mdot;
                out.contamination_rate = env.contamination_rate;
            }
        }
        Ok(out)
    }
}

/// Velocity elevation over the Hill y axis for an asteroid at radius `r`
/// moving with radial rate `r_dot` and true-anomaly rate `nu_dot`.
pub fn velocity_elevation(r: f64, r_dot: f64, nu_dot: f64) -> f64 {
    r_dot.atan2(r * nu_dot)
}

/// Time derivative of the proximity state.
///
/// `accel` is the sum of all specific forces on the spacecraft other than
/// solar gravity and the frame terms (asteroid gravity, radiation, plume,
/// control). `deflection` is the asteroid's own non-gravitational
/// acceleration in Hill components.
pub fn proximity_derivatives(
    s: &ProximityState,
    accel: &Vector3<f64>,
    deflection: &Vector3<f64>,
    mu_sun: f64,
) -> [f64; 10] {
    let (x, y, z) = (s.position.x, s.position.y, s.position.z);
    let (vx, vy, vz) = (s.velocity.x, s.velocity.y, s.velocity.z);
    let (r, r_dot, nu_dot) = (s.r_asteroid, s.r_asteroid_dot, s.nu_dot);

    let nu_ddot = deflection.y / r - 2.0 * r_dot * nu_dot / r;
    let r_ddot = nu_dot * nu_dot * r - mu_sun / (r * r) + deflection.x;

    let rx = r + x;
    let r_sc3 = (rx * rx + y * y + z * z).powf(1.5);
    // The asteroid-to-Sun differential gravity is formed explicitly; the
    // two large terms in x cancel to the tidal acceleration.
    let ax = -r_ddot + 2.0 * nu_dot * vy + nu_dot * nu_dot * rx + nu_ddot * y - mu_sun * rx / r_sc3 + accel.x;
    let ay = -2.0 * nu_dot * (vx + r_dot) - nu_ddot * rx + nu_dot * nu_dot * y - mu_sun * y / r_sc3 + accel.y;
    let az = -mu_sun * z / r_sc3 + accel.z;

    [vx, vy, vz, ax, ay, az, r_dot, r_ddot, nu_dot, nu_ddot]
}
