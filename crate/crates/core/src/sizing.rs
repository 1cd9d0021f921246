//! Spacecraft sizing: radiator areas, laser power and the mass budget.

use serde::{Deserialize, Serialize};

use crate::constants::{AU, SOLAR_FLUX_1AU, STEFAN_BOLTZMANN};
use crate::error::{Error, Result};

/// Efficiency pair for the conversion chain: solar array and laser.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyOption {
    pub solar_array: f64,
    pub laser: f64,
}

impl EfficiencyOption {
    /// 45 % cells, 66 % laser.
    pub const HIGH: Self = Self {
        solar_array: 0.45,
        laser: 0.66,
    };
    /// 40 % cells, 60 % laser.
    pub const LOW: Self = Self {
        solar_array: 0.40,
        laser: 0.60,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalProperties {
    pub array_absorptivity: f64,
    pub array_emissivity: f64,
    pub array_temperature: f64,
    pub array_radiator_temperature: f64,
    pub secondary_temperature: f64,
    pub secondary_absorptivity: f64,
    pub radiator_emissivity: f64,
    pub laser_temperature: f64,
}

impl Default for ThermalProperties {
    fn default() -> Self {
        Self {
            array_absorptivity: 0.8,
            array_emissivity: 0.8,
            array_temperature: 373.0,
            array_radiator_temperature: 373.0,
            secondary_temperature: 373.0,
            secondary_absorptivity: 0.01,
            radiator_emissivity: 0.9,
            laser_temperature: 313.0,
        }
    }
}

/// Specific masses, bus mass and mass fractions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassProperties {
    /// Primary and secondary mirror areal density (kg/m^2).
    pub mirror: f64,
    /// Steering mirror areal density (kg/m^2).
    pub steering_mirror: f64,
    /// Laser specific mass (kg/W).
    pub laser: f64,
    /// Solar array areal density (kg/m^2).
    pub solar_array: f64,
    /// Radiator areal density (kg/m^2).
    pub radiator: f64,
    pub bus: f64,
    pub harness_fraction: f64,
    pub propellant_fraction: f64,
    pub tank_fraction: f64,
}

impl Default for MassProperties {
    fn default() -> Self {
        Self {
            mirror: 0.1,
            steering_mirror: 0.1,
            laser: 0.005,
            solar_array: 1.0,
            radiator: 1.4,
            bus: 500.0,
            harness_fraction: 0.2,
            propellant_fraction: 0.3,
            tank_fraction: 0.1,
        }
    }
}

/// One spacecraft of the formation plus the formation size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacecraftDesign {
    /// Primary mirror aperture diameter (m).
    pub aperture_diameter: f64,
    pub n_spacecraft: u32,
    pub concentration_ratio: f64,
    pub eta_solar_array: f64,
    pub eta_mirror: f64,
    pub eta_laser: f64,
    /// Power regulation and transmission efficiency.
    pub eta_transmission: f64,
    pub thermal: ThermalProperties,
    pub masses: MassProperties,
    /// Secondary mirror area as a fraction of the primary.
    pub secondary_area_fraction: f64,
    /// Steering mirror area as a fraction of the primary.
    pub steering_area_fraction: f64,
    /// Solar concentration on the array, in suns; sets the array area.
    pub array_concentration: f64,
}

impl SpacecraftDesign {
    pub fn new(aperture_diameter: f64, n_spacecraft: u32, concentration_ratio: f64, eff: EfficiencyOption) -> Self {
        Self {
            aperture_diameter,
            n_spacecraft,
            concentration_ratio,
            eta_solar_array: eff.solar_array,
            eta_mirror: 0.9,
            eta_laser: eff.laser,
            eta_transmission: 0.85,
            thermal: ThermalProperties::default(),
            masses: MassProperties::default(),
            secondary_area_fraction: 0.05,
            steering_area_fraction: 0.05,
            array_concentration: 10.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let effs = [self.eta_solar_array, self.eta_mirror, self.eta_laser, self.eta_transmission];
        if effs.iter().any(|e| !(*e > 0.0 && *e <= 1.0)) {
            return Err(Error::InvalidArgument("efficiencies must lie in (0, 1]".into()));
        }
        if !(self.aperture_diameter > 0.0) || !(self.concentration_ratio > 0.0) || self.n_spacecraft == 0 {
            return Err(Error::InvalidArgument(
                "aperture, concentration ratio and spacecraft count must be positive".into(),
            ));
        }
        if !(self.array_concentration > 0.0) {
            return Err(Error::InvalidArgument("array concentration must be positive".into()));
        }
        Ok(())
    }

    /// Primary mirror area (m^2).
    pub fn primary_area(&self) -> f64 {
        std::f64::consts::PI * self.aperture_diameter.powi(2) / 4.0
    }

    /// End-to-end efficiency from collected sunlight to beamed power.
    pub fn system_efficiency(&self) -> f64 {
        self.eta_solar_array * self.eta_mirror * self.eta_transmission * self.eta_laser
    }

    /// Illuminated spot area on the asteroid (m^2).
    pub fn spot_area(&self) -> f64 {
        self.primary_area() / self.concentration_ratio
    }

    pub fn spot_diameter(&self) -> f64 {
        2.0 * (self.spot_area() / std::f64::consts::PI).sqrt()
    }
}

/// Solar flux scaled to heliocentric distance `r` (W/m^2).
pub fn solar_flux(r: f64) -> f64 {
    SOLAR_FLUX_1AU * (AU / r).powi(2)
}

/// Power entering the secondary mirror (W).
pub fn secondary_input_power(design: &SpacecraftDesign, r: f64) -> f64 {
    design.eta_mirror * design.primary_area() * solar_flux(r)
}

/// Solar array area implied by the array concentration.
pub fn solar_array_area(design: &SpacecraftDesign, r: f64) -> f64 {
    design.eta_mirror * secondary_input_power(design, r) / (design.array_concentration * SOLAR_FLUX_1AU)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiatorAreas {
    pub solar_array: f64,
    pub laser: f64,
    pub secondary_mirror: f64,
}

impl RadiatorAreas {
    pub fn total(&self) -> f64 {
        self.solar_array + self.laser + self.secondary_mirror
    }
}

/// Steady-state radiator areas. Negative results mean the element sheds
/// its heat unaided and are clamped to zero.
pub fn radiator_areas(design: &SpacecraftDesign, r: f64) -> Result<RadiatorAreas> {
    let th = &design.thermal;
    let temps = [
        th.array_temperature,
        th.array_radiator_temperature,
        th.secondary_temperature,
        th.laser_temperature,
    ];
    if temps.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::InvalidArgument("temperatures must be positive".into()));
    }
    let p_in = secondary_input_power(design, r);
    let (eta_s, eta_m) = (design.eta_solar_array, design.eta_mirror);
    let sigma = STEFAN_BOLTZMANN;
    let eps_r = th.radiator_emissivity;
    let a_s = solar_array_area(design, r);
    let a_m2 = design.secondary_area_fraction * design.primary_area();

    let array = (th.array_absorptivity * eta_m * p_in
        - eta_s * eta_m * p_in
        - 2.0 * th.array_emissivity * sigma * a_s * th.array_temperature.powi(4))
        / (eps_r * sigma * th.array_radiator_temperature.powi(4));
    let laser = eta_s * eta_m * p_in * (1.0 - design.eta_laser) / (eps_r * sigma * th.laser_temperature.powi(4));
    let secondary = (th.secondary_absorptivity * p_in
        - 2.0 * th.secondary_temperature.powi(4) * th.array_emissivity * sigma * a_m2)
        / (eps_r * sigma * th.secondary_temperature.powi(4));

    Ok(RadiatorAreas {
        solar_array: array.max(0.0),
        laser: laser.max(0.0),
        secondary_mirror: secondary.max(0.0),
    })
}

/// Electrical power delivered to the laser (W).
pub fn laser_power(design: &SpacecraftDesign, r: f64) -> f64 {
    design.eta_transmission * design.eta_solar_array * design.eta_mirror.powi(2) * design.primary_area() * solar_flux(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassBudget {
    pub laser: f64,
    pub solar_array: f64,
    pub mirrors: f64,
    pub radiators: f64,
    pub harness: f64,
    pub bus: f64,
    pub dry: f64,
    pub propellant: f64,
    /// Wet mass of one spacecraft.
    pub total: f64,
    pub radiator_areas: RadiatorAreas,
    pub solar_array_area: f64,
    pub laser_power: f64,
}

/// Mass of one spacecraft sized at heliocentric distance `r`.
pub fn mass_budget(design: &SpacecraftDesign, r: f64) -> Result<MassBudget> {
    design.validate()?;
    let m = &design.masses;
    let areas = radiator_areas(design, r)?;
    let a_s = solar_array_area(design, r);
    let p_l = laser_power(design, r);
    let a1 = design.primary_area();

    let solar_array = 1.15 * m.solar_array * a_s;
    let laser = 1.5 * m.laser * p_l * design.eta_laser;
    let harness = m.harness_fraction * (solar_array + laser);
    let radiators = 1.2 * areas.total() * m.radiator;
    let mirrors = 1.25
        * (m.steering_mirror * design.steering_area_fraction * a1
            + m.mirror * a1
            + m.mirror * design.secondary_area_fraction * a1);
    let dry = 1.2 * (harness + solar_array + mirrors + laser + radiators + m.bus);
    let propellant = dry * m.propellant_fraction;
    Ok(MassBudget {
        laser,
        solar_array,
        mirrors,
        radiators,
        harness,
        bus: m.bus,
        dry,
        propellant,
        total: dry + propellant * (1.0 + m.tank_fraction),
        radiator_areas: areas,
        solar_array_area: a_s,
        laser_power: p_l,
    })
}
