//! Orbital mechanics: element sets, frames, perturbation equations, orbit
//! intersection and impact-plane geometry.

mod bodies;
mod elements;
mod frames;
mod gauss;
mod impact;
mod moid;
mod proximal;

pub use bodies::{apophis_elements, circular_earth_elements, earth_elements};
pub use elements::{
    eccentric_from_true, elements_to_state, kepler_propagate, mean_from_true, solve_kepler,
    state_to_elements, true_from_eccentric, true_from_mean, Anomaly, BodyEphemeris, OrbitalElements,
    StateVector,
};
pub use frames::{hill_to_tangential, tangential_to_hill, FrameBasis, FrameKind};
pub use gauss::{
    elements_from_array, gauss_rates, propagate_perturbed, ElementRates, PerturbedArc, SINGULARITY_TOLERANCE,
};
pub use impact::{
    bplane_offset, deflected_elements_at_moid, delta_m_at_moid, delta_m_from_excess, impact_parameter,
};
pub use moid::{find_moid, Moid};
pub use proximal::{linear_proximal_position, ElementDeltas};
