//! Versioned JSON scenario describing one experiment setup.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::units::{Dimension, Quantity, Range};
use crate::astro::{apophis_elements, circular_earth_elements, earth_elements, ElementDeltas, OrbitalElements};
use crate::deflection::FormationMode;
use crate::error::{Error, Result};
use crate::formation::{ShapedOrbit, NATURAL_LOWER, NATURAL_UPPER};
use crate::moo::OptimizerSettings;
use crate::sizing::{EfficiencyOption, SpacecraftDesign};
use crate::sublimation::AsteroidModel;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    pub asteroid: AsteroidSpec,
    #[serde(default)]
    pub earth: EarthModel,
    /// Conversion-chain efficiency options to run; defaults to the low pair.
    #[serde(default)]
    pub efficiency: Vec<EfficiencyChoice>,
    /// Specific impulse of the station-keeping thrusters.
    pub specific_impulse: Quantity,
    #[serde(default)]
    pub design: Option<DesignSpec>,
    #[serde(default)]
    pub design_space: Option<DesignSpaceSpec>,
    pub formation: FormationSpec,
    #[serde(default)]
    pub warning_times: Vec<Quantity>,
    #[serde(default)]
    pub deflection: DeflectionSpec,
    #[serde(default)]
    pub optimizer: OptimizerSettings,
    #[serde(default)]
    pub deflection_map: Option<MapSpec>,
    #[serde(default)]
    pub eccentricity_sweep: Option<SweepSpec>,
    /// Digest of the document this scenario was read from.
    #[serde(skip)]
    pub source_sha256: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsteroidPreset {
    Apophis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsteroidSpec {
    pub model: AsteroidPreset,
    /// Enthalpy of sublimation of the surface material; no default.
    pub enthalpy_sublimation: Quantity,
    #[serde(default = "one")]
    pub emissivity: f64,
    /// Mean anomaly at the scenario epoch.
    #[serde(default)]
    pub mean_anomaly: Option<Quantity>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EarthModel {
    /// Fixed Keplerian elements at the scenario epoch.
    #[default]
    Keplerian,
    /// Circular orbit of 1 AU in the ecliptic.
    Circular,
}

impl EarthModel {
    pub fn elements(self) -> OrbitalElements {
        match self {
            EarthModel::Keplerian => earth_elements(0.0),
            EarthModel::Circular => circular_earth_elements(0.0, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EfficiencyChoice {
    High,
    Low,
}

impl EfficiencyChoice {
    pub fn option(self) -> EfficiencyOption {
        match self {
            EfficiencyChoice::High => EfficiencyOption::HIGH,
            EfficiencyChoice::Low => EfficiencyOption::LOW,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EfficiencyChoice::High => "high",
            EfficiencyChoice::Low => "low",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignSpec {
    pub aperture_diameter: Quantity,
    pub n_spacecraft: u32,
    pub concentration_ratio: f64,
    /// Solar concentration on the arrays, in suns.
    #[serde(default = "default_array_concentration")]
    pub array_concentration: f64,
}

fn default_array_concentration() -> f64 {
    10.0
}

/// Bounds of the fleet design vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignSpaceSpec {
    pub aperture_diameter: [Quantity; 2],
    pub n_spacecraft: [u32; 2],
    pub concentration_ratio: [f64; 2],
    #[serde(default = "default_array_concentration")]
    pub array_concentration: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltasSpec {
    pub de: f64,
    pub di: Quantity,
    pub draan: Quantity,
    pub dargp: Quantity,
    pub dmean: Quantity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSpec {
    pub values: Vec<f64>,
    pub unit: String,
}

/// Search box of the natural-orbit problem, in the order
/// (de, di, draan, dargp, dmean), angles in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NaturalBounds {
    pub lower: [f64; 5],
    pub upper: [f64; 5],
}

impl Default for NaturalBounds {
    fn default() -> Self {
        Self {
            lower: NATURAL_LOWER,
            upper: NATURAL_UPPER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum FormationSpec {
    Natural {
        /// Minimum along-track distances for the formation design runs.
        #[serde(default = "default_y_limits")]
        y_limits: Vec<Quantity>,
        #[serde(default)]
        bounds: NaturalBounds,
        /// Element differences flown in deflection runs.
        #[serde(default)]
        deltas: Option<DeltasSpec>,
    },
    Shaped {
        /// Fourier coefficients flown in deflection runs.
        #[serde(default)]
        coefficients: Option<CoefficientSpec>,
        /// Window over which the control is evaluated in design runs.
        #[serde(default = "default_control_duration")]
        control_duration: Quantity,
        #[serde(default = "default_control_samples")]
        control_samples: usize,
    },
}

fn default_y_limits() -> Vec<Quantity> {
    vec![Quantity::new(500.0, "m"), Quantity::new(1000.0, "m")]
}

fn default_control_duration() -> Quantity {
    Quantity::new(1.0, "year")
}

fn default_control_samples() -> usize {
    365
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeflectionSpec {
    /// Integration step as a fraction of the orbital period.
    pub step_fraction: f64,
    /// Include the gravitational pull of the formation on the asteroid.
    pub include_tug: bool,
}

impl Default for DeflectionSpec {
    fn default() -> Self {
        Self {
            step_fraction: 1e-3,
            include_tug: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub aperture_diameters: Vec<Quantity>,
    pub concentration_ratio: f64,
    pub n_spacecraft: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub aphelion_radius: Range,
    pub perihelion_radius: Range,
    /// Shortest time from the perihelion start to the encounter.
    pub warning_time: Quantity,
}

/// Validated settings of a natural formation.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalSettings {
    pub y_limits: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub deltas: Option<ElementDeltas>,
}

/// Validated settings of a shaped formation.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapedSettings {
    pub orbit: Option<ShapedOrbit>,
    pub control_duration: f64,
    pub control_samples: usize,
}

/// Validated bounds of the fleet design vector `[d_M, n_sc, C_r]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSpace {
    pub lower: [f64; 3],
    pub upper: [f64; 3],
    pub array_concentration: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub aphelion: Vec<f64>,
    pub perihelion: Vec<f64>,
    pub warning_time: f64,
}

impl Scenario {
    /// Parse and validate a scenario document.
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let mut sc: Scenario =
            serde_json::from_slice(bytes).map_err(|e| Error::Scenario(format!("malformed scenario: {e}")))?;
        sc.validate()?;
        sc.source_sha256 = Some(hex::encode(Sha256::digest(bytes)));
        Ok(sc)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path)
            .map_err(|e| Error::Scenario(format!("cannot read scenario {}: {e}", path.display())))?;
        Self::from_json(&bytes)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// SHA-256 of the source document, or of the serialized scenario when
    /// it was built in code.
    pub fn fingerprint(&self) -> Result<String> {
        match &self.source_sha256 {
            Some(h) => Ok(h.clone()),
            None => Ok(hex::encode(Sha256::digest(self.to_json()?.as_bytes()))),
        }
    }

    /// Check every section that is present.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Scenario(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.asteroid()?;
        self.specific_impulse()?;
        self.warning_times()?;
        match &self.formation {
            FormationSpec::Natural { .. } => {
                self.natural()?;
            }
            FormationSpec::Shaped { .. } => {
                self.shaped()?;
            }
        }
        if self.design.is_some() {
            self.design(self.efficiencies()[0])?;
        }
        if self.design_space.is_some() {
            self.design_space()?;
        }
        if let Some(m) = &self.deflection_map {
            self.map_apertures(m)?;
        }
        if self.eccentricity_sweep.is_some() {
            self.sweep_grid()?;
        }
        let d = &self.deflection;
        if !(d.step_fraction > 0.0 && d.step_fraction <= 0.05) {
            return Err(Error::Scenario(format!(
                "deflection.step_fraction {} must lie in (0, 0.05]",
                d.step_fraction
            )));
        }
        let o = &self.optimizer;
        if o.population < 4 || o.budget < o.population || o.archive_capacity == 0 {
            return Err(Error::Scenario(format!(
                "optimizer needs population >= 4, budget >= population and a non-empty archive \
                 (population {}, budget {}, archive {})",
                o.population, o.budget, o.archive_capacity
            )));
        }
        Ok(())
    }

    pub fn asteroid(&self) -> Result<AsteroidModel> {
        let a = &self.asteroid;
        let enthalpy = a.enthalpy_sublimation.si(Dimension::SpecificEnergy, "asteroid.enthalpy_sublimation")?;
        if enthalpy <= 0.0 {
            return Err(Error::Scenario("asteroid.enthalpy_sublimation must be positive".into()));
        }
        if !(a.emissivity > 0.0 && a.emissivity <= 1.0) {
            return Err(Error::Scenario(format!("asteroid.emissivity {} must lie in (0, 1]", a.emissivity)));
        }
        let m0 = match &a.mean_anomaly {
            Some(q) => q.si(Dimension::Angle, "asteroid.mean_anomaly")?,
            None => 0.0,
        };
        let mut model = match a.model {
            AsteroidPreset::Apophis => AsteroidModel::apophis(apophis_elements(m0, 0.0), enthalpy),
        };
        model.emissivity = a.emissivity;
        Ok(model)
    }

    pub fn enthalpy(&self) -> Result<f64> {
        self.asteroid
            .enthalpy_sublimation
            .si(Dimension::SpecificEnergy, "asteroid.enthalpy_sublimation")
    }

    pub fn specific_impulse(&self) -> Result<f64> {
        let isp = self.specific_impulse.si(Dimension::Time, "specific_impulse")?;
        if isp <= 0.0 {
            return Err(Error::Scenario("specific_impulse must be positive".into()));
        }
        Ok(isp)
    }

    pub fn efficiencies(&self) -> Vec<EfficiencyChoice> {
        if self.efficiency.is_empty() {
            vec![EfficiencyChoice::Low]
        } else {
            self.efficiency.clone()
        }
    }

    /// Warning times in seconds.
    pub fn warning_times(&self) -> Result<Vec<f64>> {
        self.warning_times
            .iter()
            .enumerate()
            .map(|(j, q)| {
                let t = q.si(Dimension::Time, &format!("warning_times[{j}]"))?;
                if t < 0.0 {
                    return Err(Error::Scenario(format!("warning_times[{j}] is negative")));
                }
                Ok(t)
            })
            .collect()
    }

    pub fn array_concentration(&self) -> f64 {
        match (&self.design, &self.design_space) {
            (Some(d), _) => d.array_concentration,
            (None, Some(s)) => s.array_concentration,
            _ => default_array_concentration(),
        }
    }

    pub fn design(&self, eff: EfficiencyChoice) -> Result<SpacecraftDesign> {
        let d = self
            .design
            .as_ref()
            .ok_or_else(|| Error::Scenario("this experiment needs a 'design' section".into()))?;
        let mut design = SpacecraftDesign::new(
            d.aperture_diameter.si(Dimension::Length, "design.aperture_diameter")?,
            d.n_spacecraft,
            d.concentration_ratio,
            eff.option(),
        );
        design.array_concentration = d.array_concentration;
        design.validate().map_err(|e| Error::Scenario(format!("design: {e}")))?;
        Ok(design)
    }

    pub fn design_space(&self) -> Result<DesignSpace> {
        let s = self
            .design_space
            .as_ref()
            .ok_or_else(|| Error::Scenario("this experiment needs a 'design_space' section".into()))?;
        let d0 = s.aperture_diameter[0].si(Dimension::Length, "design_space.aperture_diameter[0]")?;
        let d1 = s.aperture_diameter[1].si(Dimension::Length, "design_space.aperture_diameter[1]")?;
        let [n0, n1] = s.n_spacecraft;
        let [c0, c1] = s.concentration_ratio;
        if !(0.0 < d0 && d0 <= d1) || !(1 <= n0 && n0 <= n1) || !(1.0 <= c0 && c0 <= c1) {
            return Err(Error::Scenario(
                "design_space bounds must be ordered with positive diameters, at least one spacecraft \
                 and concentration ratios >= 1"
                    .into(),
            ));
        }
        Ok(DesignSpace {
            lower: [d0, n0 as f64, c0],
            upper: [d1, n1 as f64, c1],
            array_concentration: s.array_concentration,
        })
    }

    pub fn natural(&self) -> Result<NaturalSettings> {
        let FormationSpec::Natural { y_limits, bounds, deltas } = &self.formation else {
            return Err(Error::Scenario("this experiment needs a natural formation".into()));
        };
        let y_limits = y_limits
            .iter()
            .enumerate()
            .map(|(j, q)| q.si(Dimension::Length, &format!("formation.y_limits[{j}]")))
            .collect::<Result<Vec<_>>>()?;
        if bounds.lower.iter().zip(&bounds.upper).any(|(l, u)| !(l <= u)) {
            return Err(Error::Scenario("formation.bounds: every lower bound must not exceed its upper bound".into()));
        }
        let deltas = match deltas {
            Some(d) => Some(ElementDeltas {
                de: d.de,
                di: d.di.si(Dimension::Angle, "formation.deltas.di")?,
                draan: d.draan.si(Dimension::Angle, "formation.deltas.draan")?,
                dargp: d.dargp.si(Dimension::Angle, "formation.deltas.dargp")?,
                dmean: d.dmean.si(Dimension::Angle, "formation.deltas.dmean")?,
            }),
            None => None,
        };
        Ok(NaturalSettings {
            y_limits,
            lower: bounds.lower.to_vec(),
            upper: bounds.upper.to_vec(),
            deltas,
        })
    }

    pub fn shaped(&self) -> Result<ShapedSettings> {
        let FormationSpec::Shaped {
            coefficients,
            control_duration,
            control_samples,
        } = &self.formation
        else {
            return Err(Error::Scenario("this experiment needs a shaped formation".into()));
        };
        let orbit = match coefficients {
            Some(c) => {
                if c.values.len() != 8 {
                    return Err(Error::Scenario(format!(
                        "formation.coefficients needs 8 values, got {}",
                        c.values.len()
                    )));
                }
                let mut x = [0.0; 8];
                for (j, v) in c.values.iter().enumerate() {
                    x[j] = Quantity::new(*v, &c.unit).si(Dimension::Length, "formation.coefficients")?;
                }
                Some(ShapedOrbit::new(x))
            }
            None => None,
        };
        let duration = control_duration.si(Dimension::Time, "formation.control_duration")?;
        if duration <= 0.0 || *control_samples == 0 {
            return Err(Error::Scenario("shaped control window and sample count must be positive".into()));
        }
        Ok(ShapedSettings {
            orbit,
            control_duration: duration,
            control_samples: *control_samples,
        })
    }

    /// Formation flown in deflection runs.
    pub fn formation_mode(&self) -> Result<FormationMode> {
        match &self.formation {
            FormationSpec::Natural { .. } => self
                .natural()?
                .deltas
                .map(|deltas| FormationMode::Natural { deltas })
                .ok_or_else(|| Error::Scenario("deflection runs need formation.deltas for a natural formation".into())),
            FormationSpec::Shaped { .. } => self
                .shaped()?
                .orbit
                .map(|orbit| FormationMode::Shaped { orbit })
                .ok_or_else(|| {
                    Error::Scenario("deflection runs need formation.coefficients for a shaped formation".into())
                }),
        }
    }

    pub fn map_apertures(&self, m: &MapSpec) -> Result<Vec<f64>> {
        if m.aperture_diameters.is_empty() || m.n_spacecraft.is_empty() {
            return Err(Error::Scenario("deflection_map needs apertures and spacecraft counts".into()));
        }
        if m.n_spacecraft.contains(&0) || m.concentration_ratio < 1.0 {
            return Err(Error::Scenario(
                "deflection_map spacecraft counts must be positive and the concentration ratio >= 1".into(),
            ));
        }
        m.aperture_diameters
            .iter()
            .enumerate()
            .map(|(j, q)| {
                let d = q.si(Dimension::Length, &format!("deflection_map.aperture_diameters[{j}]"))?;
                if d <= 0.0 {
                    return Err(Error::Scenario("aperture diameters must be positive".into()));
                }
                Ok(d)
            })
            .collect()
    }

    pub fn sweep_grid(&self) -> Result<SweepGrid> {
        let s = self
            .eccentricity_sweep
            .as_ref()
            .ok_or_else(|| Error::Scenario("this experiment needs an 'eccentricity_sweep' section".into()))?;
        let aphelion = s.aphelion_radius.si(Dimension::Length, "eccentricity_sweep.aphelion_radius")?;
        let perihelion = s.perihelion_radius.si(Dimension::Length, "eccentricity_sweep.perihelion_radius")?;
        if aphelion.iter().chain(&perihelion).any(|&r| r <= 0.0) {
            return Err(Error::Scenario("sweep radii must be positive".into()));
        }
        let warning_time = s.warning_time.si(Dimension::Time, "eccentricity_sweep.warning_time")?;
        if warning_time <= 0.0 {
            return Err(Error::Scenario("eccentricity_sweep.warning_time must be positive".into()));
        }
        Ok(SweepGrid {
            aphelion,
            perihelion,
            warning_time,
        })
    }
}
