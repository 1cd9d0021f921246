use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::sweep::periodic_max;
use crate::astro::{hill_to_tangential, linear_proximal_position, ElementDeltas, OrbitalElements};

/// Which side of the orbital plane the spacecraft is on where it comes
/// closest to the plume axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "+z")]
    PlusZ,
    #[serde(rename = "-z")]
    MinusZ,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::PlusZ => "+z",
            Family::MinusZ => "-z",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NaturalOrbit {
    pub deltas: ElementDeltas,
    pub family: Family,
}

/// Lower and upper bounds of the natural-orbit search space, in the order
/// (de, di, draan, dargp, dmean).
pub const NATURAL_LOWER: [f64; 5] = [-0.01e-7, -0.1e-7, -0.9e-7, -1.5e-7, -0.1e-7];
pub const NATURAL_UPPER: [f64; 5] = [0.0, 0.1e-7, 0.9e-7, 1.5e-7, 0.5e-7];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NaturalObjectives {
    /// Largest distance from the asteroid over one revolution (m).
    pub max_distance: f64,
    /// Negative of the smallest angle between the spacecraft direction and
    /// the along-track axis (rad).
    pub plume_angle: f64,
    /// `y_lim - min |y|`; feasible when not positive (m).
    pub constraint: f64,
    pub min_abs_y: f64,
    pub family: Family,
}

/// Hill-frame position of a natural formation orbit.
pub fn natural_position(k: &OrbitalElements, dk: &ElementDeltas, nu: f64) -> Vector3<f64> {
    linear_proximal_position(k, dk, nu)
}

/// Position projected onto the along-track, in-plane normal and out-of-plane
/// axes.
fn tangential_components(k: &OrbitalElements, dk: &ElementDeltas, nu: f64) -> Vector3<f64> {
    let gamma = (k.e * nu.sin()).atan2(1.0 + k.e * nu.cos());
    hill_to_tangential(&linear_proximal_position(k, dk, nu), gamma)
}

/// Angle of the spacecraft off the along-track axis, `atan(rho / y_t)`,
/// with the plain arctangent so that points behind the asteroid give
/// negative angles.
pub fn plume_axis_angle(k: &OrbitalElements, dk: &ElementDeltas, nu: f64) -> f64 {
    let c = tangential_components(k, dk, nu);
    let rho = (c.y * c.y + c.z * c.z).sqrt();
    if rho == 0.0 && c.x == 0.0 {
        return 0.0;
    }
    (rho / c.x).atan()
}

/// Objectives and constraint of the natural formation design problem.
pub fn natural_orbit_objectives(dk: &ElementDeltas, k: &OrbitalElements, y_lim: f64) -> NaturalObjectives {
    let (_, max_distance) = periodic_max(|nu| linear_proximal_position(k, dk, nu).norm());
    let (_, neg_min_angle) = periodic_max(|nu| -plume_axis_angle(k, dk, nu));
    let (nu_closest, neg_min_y) = periodic_max(|nu| -linear_proximal_position(k, dk, nu).y.abs());
    let z = linear_proximal_position(k, dk, nu_closest).z;
    NaturalObjectives {
        max_distance,
        plume_angle: neg_min_angle,
        constraint: y_lim + neg_min_y,
        min_abs_y: -neg_min_y,
        family: if z >= 0.0 { Family::PlusZ } else { Family::MinusZ },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::astro::Anomaly;
    use crate::constants::AU;

    fn apophis() -> OrbitalElements {
        OrbitalElements::new(
            0.9224 * AU,
            0.1912,
            3.3312f64.to_radians(),
            204.4428f64.to_radians(),
            126.4002f64.to_radians(),
            Anomaly::True(0.0),
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn zero_deltas_violate_constraint() {
        let o = natural_orbit_objectives(&ElementDeltas::default(), &apophis(), 1000.0);
        assert_eq!(o.max_distance, 0.0);
        assert!(o.constraint > 0.0);
        assert_eq!(o.plume_angle, 0.0);
    }

    #[test]
    fn pure_argument_of_periapsis_is_along_track() {
        let dk = ElementDeltas { dargp: 1e-8, ..Default::default() };
        let k = apophis();
        for j in 0..8 {
            let p = linear_proximal_position(&k, &dk, j as f64 * 0.8);
            assert_eq!(p.x, 0.0);
            assert_eq!(p.z, 0.0);
        }
        // Along the Hill y axis the tangential projection still has a small
        // normal part from the flight-path angle; at periapsis it vanishes.
        assert!(plume_axis_angle(&k, &dk, 0.0).abs() < 1e-15);
        assert_eq!(natural_orbit_objectives(&dk, &k, 0.0).plume_angle, 0.0);
    }

    #[test]
    fn mirrored_orbit_switches_family() {
        let k = apophis();
        let dk = ElementDeltas { de: -0.5e-9, di: 0.5e-8, draan: 0.3e-7, dargp: 1.2e-7, dmean: 0.2e-7 };
        let a = natural_orbit_objectives(&dk, &k, 1000.0);
        let b = natural_orbit_objectives(&dk.mirrored(k.i), &k, 1000.0);
        assert_ne!(a.family, b.family);
        assert!((a.max_distance - b.max_distance).abs() < 1e-6 * a.max_distance);
        assert!((a.plume_angle - b.plume_angle).abs() < 1e-9);
        assert!((a.constraint - b.constraint).abs() < 1e-6);
    }
}
