//! Formation orbits around the asteroid: natural (element-difference) and
//! shaped (prescribed) orbits, proximity dynamics and station keeping.

mod control;
mod dynamics;
mod gravity;
mod natural;
mod shaped;
mod sweep;

pub use control::{
    lyapunov_control, lyapunov_function, simulate_station_keeping, LyapunovGains, StationKeepingConfig,
    StationKeepingResult, StationKeepingSample, LYAPUNOV_TOLERANCE,
};
pub use dynamics::{
    keplerian_polar_state, proximity_derivatives, velocity_elevation, ForceModel, ForceSwitches, Perturbations,
    ProximityState,
};
pub use gravity::{gravity_acceleration, harmonic_acceleration, harmonic_coefficients, harmonic_potential};
pub use natural::{
    natural_orbit_objectives, natural_position, plume_axis_angle, Family, NaturalObjectives, NaturalOrbit,
    NATURAL_LOWER, NATURAL_UPPER,
};
pub use shaped::{
    shaped_objectives, shaped_orbit_control, ControlProfile, ShapedControlSetup, ShapedObjectives, ShapedOrbit,
    ShapedPoint, SHAPED_LOWER, SHAPED_UPPER,
};
pub use sweep::{periodic_max, periodic_max_with, SWEEP_POINTS};
