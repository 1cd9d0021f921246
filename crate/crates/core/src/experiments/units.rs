//! Physical quantities with explicit unit strings, converted to SI on read.

use serde::{Deserialize, Serialize};

use crate::constants::{AU, SECONDS_PER_DAY, SECONDS_PER_YEAR};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Time,
    Angle,
    Mass,
    SpecificEnergy,
    Acceleration,
    Dimensionless,
}

impl Dimension {
    pub fn name(self) -> &'static str {
        match self {
            Dimension::Length => "length",
            Dimension::Time => "time",
            Dimension::Angle => "angle",
            Dimension::Mass => "mass",
            Dimension::SpecificEnergy => "specific energy",
            Dimension::Acceleration => "acceleration",
            Dimension::Dimensionless => "dimensionless",
        }
    }

    /// Unit strings accepted for this dimension with their SI factor.
    pub fn units(self) -> &'static [(&'static str, f64)] {
        match self {
            Dimension::Length => &[("m", 1.0), ("km", 1e3), ("AU", AU)],
            Dimension::Time => &[
                ("s", 1.0),
                ("min", 60.0),
                ("h", 3600.0),
                ("day", SECONDS_PER_DAY),
                ("year", SECONDS_PER_YEAR),
            ],
            Dimension::Angle => &[("rad", 1.0), ("deg", std::f64::consts::PI / 180.0)],
            Dimension::Mass => &[("kg", 1.0), ("t", 1e3)],
            Dimension::SpecificEnergy => &[("J/kg", 1.0), ("kJ/kg", 1e3), ("MJ/kg", 1e6)],
            Dimension::Acceleration => &[("m/s^2", 1.0), ("mm/s^2", 1e-3)],
            Dimension::Dimensionless => &[("1", 1.0)],
        }
    }
}

/// A number with its unit, as written in a scenario file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quantity {
    pub value: f64,
    pub unit: String,
    /// Free-text provenance of the value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Quantity {
    pub fn new(value: f64, unit: &str) -> Self {
        Self {
            value,
            unit: unit.to_string(),
            note: None,
        }
    }

    /// Value in SI units, after checking that the unit has dimension `dim`.
    pub fn si(&self, dim: Dimension, field: &str) -> Result<f64> {
        if !self.value.is_finite() {
            return Err(Error::Unit(format!("{field}: value {} is not finite", self.value)));
        }
        dim.units()
            .iter()
            .find(|(u, _)| *u == self.unit)
            .map(|(_, f)| self.value * f)
            .ok_or_else(|| {
                let known: Vec<&str> = dim.units().iter().map(|(u, _)| *u).collect();
                Error::Unit(format!(
                    "{field}: unit '{}' is not a {} unit (expected one of {})",
                    self.unit,
                    dim.name(),
                    known.join(", ")
                ))
            })
    }
}

/// Evenly spaced values, endpoints included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub unit: String,
}

impl Range {
    pub fn si(&self, dim: Dimension, field: &str) -> Result<Vec<f64>> {
        if self.points == 0 {
            return Err(Error::Scenario(format!("{field}: a range needs at least one point")));
        }
        let from = Quantity::new(self.from, &self.unit).si(dim, field)?;
        let to = Quantity::new(self.to, &self.unit).si(dim, field)?;
        if self.points == 1 {
            return Ok(vec![from]);
        }
        let step = (to - from) / (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|j| if j + 1 == self.points { to } else { from + j as f64 * step })
            .collect())
    }
}
