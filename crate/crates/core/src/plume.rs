//! Ejecta plume density, mirror contamination and the forces acting on a
//! spacecraft near the spot: plume impingement and solar radiation pressure.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::constants::{AU, SOLAR_FLUX_1AU, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::sizing::SpacecraftDesign;
use crate::sublimation::AsteroidModel;

/// Plume expansion and condensate constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlumeConstants {
    pub jet_constant: f64,
    /// Half-angle of the expansion cone measured from the Hill y axis (rad).
    pub max_expansion_angle: f64,
    pub adiabatic_index: f64,
    /// Density of the condensed layer (kg/m^3).
    pub layer_density: f64,
    /// Absorption coefficient of the condensate (1/m).
    pub absorption_coefficient: f64,
}

impl Default for PlumeConstants {
    fn default() -> Self {
        Self {
            jet_constant: 0.345,
            max_expansion_angle: 130.45f64.to_radians(),
            adiabatic_index: 1.4,
            layer_density: 1000.0,
            absorption_coefficient: 1e6,
        }
    }
}

/// Where the spot is and how the spacecraft sees it, in the Hill frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpotGeometry {
    pub spot: Vector3<f64>,
    pub spot_to_spacecraft: Vector3<f64>,
    /// Equatorial radius of the body under the spot.
    pub radius: f64,
    /// Velocity elevation over the y axis used to place the spot.
    pub velocity_elevation: f64,
    /// Angle between the spot-to-spacecraft vector and the y axis.
    pub phi: f64,
    /// Normalised plume angle, pi * phi / (2 phi_max).
    pub plume_angle: f64,
    /// Line of sight from the spot to the spacecraft passes through the body.
    pub occluded: bool,
}

/// Locate the spot on the spinning ellipsoid and the spacecraft relative to
/// it. `spacecraft` is the Hill-frame position relative to the asteroid
/// centre and `velocity_elevation` the angle of the heliocentric velocity
/// over the Hill y axis.
pub fn spot_to_spacecraft(
    spacecraft: &Vector3<f64>,
    ast: &AsteroidModel,
    t: f64,
    velocity_elevation: f64,
    constants: &PlumeConstants,
) -> Result<SpotGeometry> {
    let [a, b, c] = ast.semi_axes;
    let spin = ast.spin_rate * t;
    let (s, co) = spin.sin_cos();
    // Body long axis at angle `spin` from +y, turning towards +x.
    let long_axis = Vector3::new(s, co, 0.0);
    let mid_axis = Vector3::new(co, -s, 0.0);
    let body = (spacecraft.dot(&long_axis), spacecraft.dot(&mid_axis), spacecraft.z);
    if (body.0 / a).powi(2) + (body.1 / b).powi(2) + (body.2 / c).powi(2) < 1.0 {
        return Err(Error::InsideAsteroid("spacecraft inside the asteroid ellipsoid"));
    }

    let alpha = -spin - velocity_elevation;
    let radius = ast.equatorial_radius(alpha);
    let (sa, ca) = alpha.sin_cos();
    let spot = Vector3::new(radius * s * ca - radius * co * sa, radius * co * ca + radius * s * sa, 0.0);
    let rel = spacecraft - spot;

    let phi = (rel.y / rel.norm()).clamp(-1.0, 1.0).acos();
    let normal = (spot.dot(&long_axis) / (a * a)) * long_axis + (spot.dot(&mid_axis) / (b * b)) * mid_axis;
    Ok(SpotGeometry {
        spot,
        spot_to_spacecraft: rel,
        radius,
        velocity_elevation,
        phi,
        plume_angle: std::f64::consts::PI * phi / (2.0 * constants.max_expansion_angle),
        occluded: normal.dot(&rel) < 0.0,
    })
}

/// Gas density at the spacecraft (kg/m^3). Zero outside the expansion cone
/// and behind the body.
pub fn plume_density(
    geom: &SpotGeometry,
    mass_flow: f64,
    exhaust_velocity: f64,
    spot_area: f64,
    spot_diameter: f64,
    constants: &PlumeConstants,
) -> f64 {
    if geom.occluded || geom.phi >= constants.max_expansion_angle || mass_flow <= 0.0 {
        return 0.0;
    }
    let dist = geom.spot_to_spacecraft.norm();
    let spread = (spot_diameter / (2.0 * dist + spot_diameter)).powi(2);
    let angular = geom.plume_angle.cos().powf(2.0 / (constants.adiabatic_index - 1.0));
    constants.jet_constant * mass_flow / (exhaust_velocity * spot_area) * spread * angular
}

/// Angle between the Sun-pointing mirror normal and the direction the flow
/// comes from.
pub fn view_factor_angle(spot_to_spacecraft: &Vector3<f64>) -> f64 {
    (spot_to_spacecraft.x / spot_to_spacecraft.norm()).clamp(-1.0, 1.0).acos()
}

/// Growth rate of the condensed layer on the mirror (m/s).
pub fn contamination_rate(density: f64, exhaust_velocity: f64, view_angle: f64, layer_density: f64) -> f64 {
    let cos_psi = view_angle.cos();
    if cos_psi <= f64::EPSILON || density <= 0.0 {
        return 0.0;
    }
    2.0 * exhaust_velocity * density * cos_psi / layer_density
}

/// Transmission of optics under a condensed layer of thickness `thickness`.
pub fn degradation_factor(thickness: f64, constants: &PlumeConstants) -> f64 {
    (-2.0 * constants.absorption_coefficient * thickness).exp()
}

/// Steering mirror normal that sends sunlight arriving along +x to the spot,
/// and its half angle to the Sun line.
pub fn steering_normal(spot_to_spacecraft: &Vector3<f64>) -> (Vector3<f64>, f64) {
    let n = (Vector3::x() + spot_to_spacecraft.normalize()).normalize();
    (n, n.x.clamp(-1.0, 1.0).acos())
}

/// Radiation pressure force on one spacecraft in the Hill frame (N).
pub fn srp_force(design: &SpacecraftDesign, r_sc: f64, beta: f64, steer_normal: &Vector3<f64>) -> Vector3<f64> {
    let pressure = design.primary_area() * SOLAR_FLUX_1AU / SPEED_OF_LIGHT * (AU / r_sc).powi(2);
    2.0 * design.system_efficiency() * pressure * beta.cos().powi(2) * steer_normal
        + (1.0 - design.eta_mirror.powi(2)) * pressure * Vector3::x()
}

/// Momentum flux of the plume stuck on a flat plate of area `area` (N).
pub fn plume_force(density: f64, exhaust_velocity: f64, area: f64, view_angle: f64, direction: &Vector3<f64>) -> Vector3<f64> {
    let cos_psi = view_angle.cos();
    if cos_psi <= f64::EPSILON || density <= 0.0 {
        return Vector3::zeros();
    }
    4.0 * density * exhaust_velocity.powi(2) * area * cos_psi * direction
}

/// Everything the plume does to one spacecraft at a given instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlumeSample {
    pub geometry: SpotGeometry,
    pub density: f64,
    pub view_angle: f64,
    pub contamination_rate: f64,
    pub plume_force: Vector3<f64>,
    pub srp_force: Vector3<f64>,
}

/// Evaluate the plume and radiation environment of a spacecraft.
#[allow(clippy::too_many_arguments)]
pub fn sample_environment(
    spacecraft: &Vector3<f64>,
    ast: &AsteroidModel,
    design: &SpacecraftDesign,
    t: f64,
    velocity_elevation: f64,
    mass_flow_per_spot: f64,
    exhaust_velocity: f64,
    r_asteroid: f64,
    constants: &PlumeConstants,
) -> Result<PlumeSample> {
    let geometry = spot_to_spacecraft(spacecraft, ast, t, velocity_elevation, constants)?;
    let density = plume_density(
        &geometry,
        mass_flow_per_spot,
        exhaust_velocity,
        design.spot_area(),
        design.spot_diameter(),
        constants,
    );
    let view_angle = view_factor_angle(&geometry.spot_to_spacecraft);
    let direction = geometry.spot_to_spacecraft.normalize();
    let (normal, beta) = steering_normal(&geometry.spot_to_spacecraft);
    let r_sc = (Vector3::new(r_asteroid, 0.0, 0.0) + spacecraft).norm();
    Ok(PlumeSample {
        geometry,
        density,
        view_angle,
        contamination_rate: contamination_rate(density, exhaust_velocity, view_angle, constants.layer_density),
        plume_force: plume_force(density, exhaust_velocity, design.primary_area(), view_angle, &direction),
        srp_force: srp_force(design, r_sc, beta, &normal),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::astro::{Anomaly, OrbitalElements};
    use crate::sizing::EfficiencyOption;
    use approx::assert_relative_eq;

    fn body(axes: [f64; 3]) -> AsteroidModel {
        let k = OrbitalElements::new(0.9224 * AU, 0.1912, 0.058, 3.57, 2.2, Anomaly::Mean(0.0), 0.0).unwrap();
        AsteroidModel {
            semi_axes: axes,
            ..AsteroidModel::apophis(k, 1.8e7)
        }
    }

    #[test]
    fn sphere_spot_on_y_axis() {
        let ast = body([150.0, 150.0, 150.0]);
        let c = PlumeConstants::default();
        let g = spot_to_spacecraft(&Vector3::new(0.0, 1000.0, 0.0), &ast, 0.0, 0.0, &c).unwrap();
        assert!((g.spot - Vector3::new(0.0, 150.0, 0.0)).norm() < 1e-12);
        assert!((g.spot_to_spacecraft - Vector3::new(0.0, 850.0, 0.0)).norm() < 1e-12);
        assert_eq!(g.phi, 0.0);
        assert!(!g.occluded);
    }

    #[test]
    fn spin_period_repeats_geometry() {
        let ast = body([191.0, 135.0, 95.0]);
        let c = PlumeConstants::default();
        let sc = Vector3::new(-300.0, 900.0, 120.0);
        let g0 = spot_to_spacecraft(&sc, &ast, 0.0, 0.05, &c).unwrap();
        let g1 = spot_to_spacecraft(&sc, &ast, std::f64::consts::TAU / ast.spin_rate, 0.05, &c).unwrap();
        assert!((g0.spot - g1.spot).norm() < 1e-9);
        assert!((g0.phi - g1.phi).abs() < 1e-12);
    }

    #[test]
    fn spot_lies_on_body_surface() {
        let ast = body([191.0, 135.0, 95.0]);
        let c = PlumeConstants::default();
        for j in 0..20 {
            let t = j as f64 * 1234.5;
            let g = spot_to_spacecraft(&Vector3::new(0.0, 2000.0, 0.0), &ast, t, 0.1, &c).unwrap();
            let spin = ast.spin_rate * t;
            let u = g.spot.dot(&Vector3::new(spin.sin(), spin.cos(), 0.0)) / 191.0;
            let v = g.spot.dot(&Vector3::new(spin.cos(), -spin.sin(), 0.0)) / 135.0;
            assert!((u * u + v * v - 1.0).abs() < 1e-12);
            assert!((g.spot.norm() - g.radius).abs() < 1e-9);
        }
    }

    #[test]
    fn radius_at_zero_angle_is_long_axis() {
        let ast = body([191.0, 135.0, 95.0]);
        let c = PlumeConstants::default();
        let g = spot_to_spacecraft(&Vector3::new(0.0, 2000.0, 0.0), &ast, 0.0, 0.0, &c).unwrap();
        assert_relative_eq!(g.radius, 191.0, max_relative = 1e-15);
        let quarter = std::f64::consts::FRAC_PI_2 / ast.spin_rate;
        let g = spot_to_spacecraft(&Vector3::new(0.0, 2000.0, 0.0), &ast, quarter, 0.0, &c).unwrap();
        assert_relative_eq!(g.radius, 135.0, max_relative = 1e-12);
    }

    #[test]
    fn inside_body_rejected() {
        let ast = body([191.0, 135.0, 95.0]);
        assert!(matches!(
            spot_to_spacecraft(&Vector3::new(10.0, 20.0, 5.0), &ast, 0.0, 0.0, &PlumeConstants::default()),
            Err(Error::InsideAsteroid(_))
        ));
    }

    #[test]
    fn far_side_is_occluded() {
        let ast = body([191.0, 135.0, 95.0]);
        let c = PlumeConstants::default();
        let g = spot_to_spacecraft(&Vector3::new(0.0, -1000.0, 0.0), &ast, 0.0, 0.0, &c).unwrap();
        assert!(g.occluded);
        assert_eq!(plume_density(&g, 1.0, 520.0, 0.03, 0.2, &c), 0.0);
    }

    fn geometry(dist: f64, phi: f64, c: &PlumeConstants) -> SpotGeometry {
        SpotGeometry {
            spot: Vector3::zeros(),
            spot_to_spacecraft: Vector3::new(dist * phi.sin(), dist * phi.cos(), 0.0),
            radius: 150.0,
            velocity_elevation: 0.0,
            phi,
            plume_angle: std::f64::consts::PI * phi / (2.0 * c.max_expansion_angle),
            occluded: false,
        }
    }

    #[test]
    fn density_reference_values() {
        let c = PlumeConstants::default();
        let (mdot, v, area, d) = (0.2, 520.5, 0.0314, 0.2);
        let throat = c.jet_constant * mdot / (v * area);
        assert_relative_eq!(plume_density(&geometry(0.0, 0.0, &c), mdot, v, area, d, &c), throat, max_relative = 1e-15);
        assert_relative_eq!(plume_density(&geometry(d / 2.0, 0.0, &c), mdot, v, area, d, &c), throat / 4.0, max_relative = 1e-14);
        let half = plume_density(&geometry(0.0, c.max_expansion_angle / 2.0, &c), mdot, v, area, d, &c);
        assert_relative_eq!(half / throat, (0.5f64.sqrt()).powi(5), max_relative = 1e-12);
        assert!((half / throat - 0.1768).abs() < 1e-4);
        assert_eq!(plume_density(&geometry(10.0, c.max_expansion_angle, &c), mdot, v, area, d, &c), 0.0);
    }

    #[test]
    fn contamination_reference() {
        assert_eq!(contamination_rate(1e-10, 520.5, std::f64::consts::FRAC_PI_2, 1000.0), 0.0);
        assert!((contamination_rate(1e-10, 520.5, 0.0, 1000.0) - 1.041e-10).abs() < 1e-15);
        assert_relative_eq!(
            contamination_rate(3e-10, 520.5, 0.3, 1000.0),
            3.0 * contamination_rate(1e-10, 520.5, 0.3, 1000.0),
            max_relative = 1e-15
        );
    }

    #[test]
    fn degradation_reference() {
        let c = PlumeConstants::default();
        assert_eq!(degradation_factor(0.0, &c), 1.0);
        assert_relative_eq!(degradation_factor(1e-6, &c), (-2.0f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(degradation_factor(3e-7, &c) * degradation_factor(5e-7, &c), degradation_factor(8e-7, &c), max_relative = 1e-14);
    }

    #[test]
    fn srp_reference() {
        let mut d = SpacecraftDesign::new(20.0, 1, 2500.0, EfficiencyOption::HIGH);
        d.aperture_diameter = (4.0 * 314.0 / std::f64::consts::PI).sqrt();
        d.eta_laser = 0.227 / (0.45 * 0.9 * 0.85);
        let n = Vector3::y();
        let first = srp_force(&d, AU, 0.0, &n) - srp_force(&d, AU, std::f64::consts::FRAC_PI_2, &n);
        assert!((first.norm() - 6.50e-4).abs() < 5e-7, "{}", first.norm());
        let mut perfect = d;
        perfect.eta_mirror = 1.0;
        assert_eq!(srp_force(&perfect, AU, 0.0, &n).x, 0.0);
    }

    #[test]
    fn plume_force_reference() {
        let f = plume_force(1e-10, 520.5, 314.0, 0.0, &Vector3::x());
        assert!((f.norm() - 3.40e-2).abs() < 1e-4);
        assert_eq!(plume_force(0.0, 520.5, 314.0, 0.0, &Vector3::x()), Vector3::zeros());
        assert_eq!(plume_force(1e-10, 520.5, 314.0, 2.0, &Vector3::x()), Vector3::zeros());
    }

    #[test]
    fn spacecraft_below_plume_never_contaminated() {
        let ast = body([191.0, 135.0, 95.0]);
        let c = PlumeConstants::default();
        for j in 0..50 {
            let t = j as f64 * 977.0;
            let sc = Vector3::new(-400.0 - 10.0 * j as f64, -900.0 + 40.0 * j as f64, 50.0);
            let g = spot_to_spacecraft(&sc, &ast, t, 0.03, &c).unwrap();
            let psi = view_factor_angle(&g.spot_to_spacecraft);
            if psi >= std::f64::consts::FRAC_PI_2 {
                assert_eq!(contamination_rate(1e-9, 520.5, psi, 1000.0), 0.0);
            }
        }
    }
}
