//! Surface power balance and mass flow of a sublimating spot, the resulting
//! deflection acceleration and the gravity-tug contribution.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::astro::OrbitalElements;
use crate::constants::{forsterite_molecule_mass, BOLTZMANN, GRAVITATIONAL_CONSTANT, STEFAN_BOLTZMANN};
use crate::error::{Error, Result};
use crate::quadrature::{adaptive_simpson, gauss_legendre, integrate_gauss};
use crate::sizing::{solar_flux, SpacecraftDesign};

/// Physical description of the target asteroid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsteroidModel {
    pub elements: OrbitalElements,
    pub mass: f64,
    /// Gravitational parameter (m^3/s^2).
    pub mu: f64,
    /// Ellipsoid semi-axes, largest first (m).
    pub semi_axes: [f64; 3],
    /// Spin rate about the shortest axis (rad/s).
    pub spin_rate: f64,
    pub albedo: f64,
    /// Heat capacity (J/(kg K)).
    pub heat_capacity: f64,
    /// Thermal conductivity (W/(m K)).
    pub conductivity: f64,
    /// Bulk density (kg/m^3).
    pub density: f64,
    pub sublimation_temperature: f64,
    pub initial_temperature: f64,
    /// Enthalpy of sublimation (J/kg).
    pub enthalpy: f64,
    /// Mass of one ejected molecule (kg).
    pub molecule_mass: f64,
    pub emissivity: f64,
    /// Ratio of the mean axial ejecta momentum to the total.
    pub scattering_factor: f64,
}

impl AsteroidModel {
    /// Apophis-like body with forsterite surface material. The enthalpy of
    /// sublimation has no default and must be supplied.
    pub fn apophis(elements: OrbitalElements, enthalpy: f64) -> Self {
        Self {
            elements,
            mass: 2.7e10,
            mu: 1.801599,
            semi_axes: [191.0, 135.0, 95.0],
            spin_rate: 3.3e-3f64.to_radians(),
            albedo: 0.2,
            heat_capacity: 750.0,
            conductivity: 2.0,
            density: 2600.0,
            sublimation_temperature: 1800.0,
            initial_temperature: 278.0,
            enthalpy,
            molecule_mass: forsterite_molecule_mass(),
            emissivity: 1.0,
            scattering_factor: 2.0 / std::f64::consts::PI,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let [a, b, c] = self.semi_axes;
        if !(a >= b && b >= c && c > 0.0) {
            return Err(Error::InvalidArgument(format!("semi-axes must satisfy a >= b >= c > 0, got {a}, {b}, {c}")));
        }
        if !(0.0..=1.0).contains(&self.albedo) {
            return Err(Error::InvalidArgument("albedo outside [0, 1]".into()));
        }
        if !(self.sublimation_temperature > self.initial_temperature && self.initial_temperature > 0.0) {
            return Err(Error::InvalidArgument("need sublimation temperature > initial temperature > 0".into()));
        }
        let positive = [
            self.mass,
            self.mu,
            self.heat_capacity,
            self.conductivity,
            self.density,
            self.enthalpy,
            self.molecule_mass,
            self.emissivity,
            self.scattering_factor,
        ];
        if positive.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidArgument("material constants must be positive".into()));
        }
        if !(self.spin_rate >= 0.0) {
            return Err(Error::InvalidArgument("spin rate must be non-negative".into()));
        }
        self.elements.validate()
    }

    /// Radius of the equatorial ellipse at `angle` from the longest axis.
    pub fn equatorial_radius(&self, angle: f64) -> f64 {
        let [a, b, _] = self.semi_axes;
        a * b / ((b * angle.cos()).powi(2) + (a * angle.sin()).powi(2)).sqrt()
    }

    /// Conduction coefficient: Q_cond = coefficient / sqrt(t).
    pub fn conduction_coefficient(&self) -> f64 {
        (self.sublimation_temperature - self.initial_temperature)
            * (self.heat_capacity * self.conductivity * self.density / std::f64::consts::PI).sqrt()
    }
}

/// Per-unit-area power terms at the spot (W/m^2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerBalance {
    pub input: f64,
    pub radiated: f64,
    pub conducted: f64,
    /// Clipped net power available for sublimation.
    pub net: f64,
}

/// Instantaneous deflection state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThrustState {
    pub mass_flow: f64,
    pub sublimation: Vector3<f64>,
    pub tug: Vector3<f64>,
    pub total: Vector3<f64>,
    pub asteroid_mass: f64,
}

/// Power density delivered to the asteroid surface, with `degradation` the
/// transmission of contaminated optics.
pub fn input_power_density(design: &SpacecraftDesign, albedo: f64, r: f64, degradation: f64) -> f64 {
    degradation * design.system_efficiency() * design.concentration_ratio * (1.0 - albedo) * solar_flux(r)
}

pub fn radiation_loss(temperature: f64, emissivity: f64) -> f64 {
    STEFAN_BOLTZMANN * emissivity * temperature.powi(4)
}

/// Conductive loss a time `t` after a surface element enters the spot.
pub fn conduction_loss(t: f64, ast: &AsteroidModel) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("conduction time must be positive, got {t}")));
    }
    Ok(ast.conduction_coefficient() / t.sqrt())
}

pub fn power_balance(design: &SpacecraftDesign, ast: &AsteroidModel, r: f64, degradation: f64, t: f64) -> Result<PowerBalance> {
    let input = input_power_density(design, ast.albedo, r, degradation);
    let radiated = radiation_loss(ast.sublimation_temperature, ast.emissivity);
    let conducted = conduction_loss(t, ast)?;
    Ok(PowerBalance {
        input,
        radiated,
        conducted,
        net: (input - radiated - conducted).max(0.0),
    })
}

/// Mean thermal speed of the ejected molecules.
pub fn exhaust_velocity(ast: &AsteroidModel) -> f64 {
    (8.0 * BOLTZMANN * ast.sublimation_temperature / (std::f64::consts::PI * ast.molecule_mass)).sqrt()
}

/// Geometry and energetics of one circular spot swept by the rotating surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpotSweep {
    /// Input minus radiated power density (W/m^2).
    pub net_input: f64,
    /// Conduction coefficient, Q_cond = coefficient / sqrt(t).
    pub conduction_coefficient: f64,
    pub spot_radius: f64,
    /// Surface speed through the spot (m/s).
    pub surface_speed: f64,
    pub enthalpy: f64,
}

const GL_POINTS: usize = 32;
const TIME_TOLERANCE: f64 = 1e-6;

impl SpotSweep {
    /// Time a surface element at lateral offset `y` stays inside the spot.
    pub fn dwell_time(&self, y: f64) -> f64 {
        2.0 * (self.spot_radius.powi(2) - y * y).max(0.0).sqrt() / self.surface_speed
    }

    /// Energy per unit area absorbed for sublimation by one surface element
    /// with dwell time `t_dwell`, by quadrature in s = sqrt(t).
    pub fn absorbed_energy(&self, t_dwell: f64) -> f64 {
        if t_dwell <= 0.0 || self.net_input <= 0.0 {
            return 0.0;
        }
        let (p, c) = (self.net_input, self.conduction_coefficient);
        // Integrand in s: 2 s max(p - c/s, 0), zero below s* = c/p.
        let s_end = t_dwell.sqrt();
        let s_start = (c / p).min(s_end);
        adaptive_simpson(|s| 2.0 * s * (p - c / s).max(0.0), s_start, s_end, TIME_TOLERANCE)
    }

    /// Mass flow from one spot (kg/s).
    pub fn mass_flow(&self) -> f64 {
        if self.net_input <= 0.0 || !(self.surface_speed > 0.0) || !(self.spot_radius > 0.0) {
            return 0.0;
        }
        let rule = gauss_legendre(GL_POINTS);
        let inner = integrate_gauss(&rule, 0.0, self.spot_radius, |y| self.absorbed_energy(self.dwell_time(y)));
        2.0 * self.surface_speed * inner / self.enthalpy
    }
}

/// Spot sweep for a spacecraft design at heliocentric distance `r`.
pub fn spot_sweep(design: &SpacecraftDesign, ast: &AsteroidModel, r: f64, degradation: f64, surface_speed: f64) -> SpotSweep {
    let p_in = input_power_density(design, ast.albedo, r, degradation);
    SpotSweep {
        net_input: p_in - radiation_loss(ast.sublimation_temperature, ast.emissivity),
        conduction_coefficient: ast.conduction_coefficient(),
        spot_radius: 0.5 * design.spot_diameter(),
        surface_speed,
        enthalpy: ast.enthalpy,
    }
}

/// Total expelled mass flow of the formation (kg/s).
pub fn mass_flow_rate(design: &SpacecraftDesign, ast: &AsteroidModel, r: f64, degradation: f64, surface_speed: f64) -> f64 {
    design.n_spacecraft as f64 * spot_sweep(design, ast, r, degradation, surface_speed).mass_flow()
}

/// Acceleration imparted by the ejecta, along `direction`.
pub fn sublimation_acceleration(mass_flow: f64, asteroid_mass: f64, direction: &Vector3<f64>, ast: &AsteroidModel) -> Vector3<f64> {
    ast.scattering_factor * exhaust_velocity(ast) * mass_flow / asteroid_mass * direction
}

/// Gravitational pull of the formation on the asteroid. `offset` is the
/// spacecraft position relative to the asteroid; the result points towards
/// the spacecraft.
pub fn tug_acceleration(n_spacecraft: u32, spacecraft_mass: f64, offset: &Vector3<f64>) -> Result<Vector3<f64>> {
    let d = offset.norm();
    if !(d > 0.0) {
        return Err(Error::InvalidArgument("spacecraft at the asteroid centre".into()));
    }
    Ok(n_spacecraft as f64 * GRAVITATIONAL_CONSTANT * spacecraft_mass / (d * d) * offset / d)
}

/// Remaining asteroid mass after losing `mass_flow` for `dt`, floored at 0.
pub fn deplete_mass(mass: f64, mass_flow: f64, dt: f64) -> f64 {
    let remaining = mass - mass_flow * dt;
    if remaining < 0.0 {
        log::warn!("asteroid mass exhausted; clamping to zero");
        return 0.0;
    }
    remaining
}
