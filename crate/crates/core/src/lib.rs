//! Orbit deflection of asteroids by a formation of solar-concentrator
//! spacecraft: sublimation physics, formation design and control, system
//! sizing, multi-objective optimisation and end-to-end deflection runs.

pub mod astro;
pub mod constants;
pub mod deflection;
pub mod error;
pub mod experiments;
pub mod formation;
pub mod integrate;
pub mod moo;
pub mod plume;
pub mod quadrature;
pub mod sizing;
pub mod sublimation;

pub use error::{Error, Result};
