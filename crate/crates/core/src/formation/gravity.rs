use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::sublimation::AsteroidModel;

/// Second-degree zonal and sectoral coefficients of a homogeneous ellipsoid
/// (m^2).
pub fn harmonic_coefficients(ast: &AsteroidModel) -> (f64, f64) {
    let [a, b, c] = ast.semi_axes;
    (-(2.0 * c * c - a * a - b * b) / 10.0, (a * a - b * b) / 20.0)
}

/// Degree-two potential correction at Hill-frame position `r` and time `t`.
pub fn harmonic_potential(r: &Vector3<f64>, ast: &AsteroidModel, t: f64) -> f64 {
    let (c20, c22) = harmonic_coefficients(ast);
    let (s2, c2) = (2.0 * ast.spin_rate * t).sin_cos();
    let r2 = r.norm_squared();
    let rn = r2.sqrt();
    let rho2 = r.x * r.x + r.y * r.y;
    let q = (r.x * r.x - r.y * r.y) * c2 - 2.0 * r.x * r.y * s2;
    ast.mu / (rn * r2) * (c20 * (1.0 - 1.5 * rho2 / r2) + 3.0 * c22 * q / r2)
}

/// Gradient of [`harmonic_potential`].
pub fn harmonic_acceleration(r: &Vector3<f64>, ast: &AsteroidModel, t: f64) -> Vector3<f64> {
    let (c20, c22) = harmonic_coefficients(ast);
    let (s2, c2) = (2.0 * ast.spin_rate * t).sin_cos();
    let (x, y, z) = (r.x, r.y, r.z);
    let r2 = r.norm_squared();
    let r5 = r2 * r2 * r2.sqrt();
    let r7 = r5 * r2;
    let rho2 = x * x + y * y;
    let q = (x * x - y * y) * c2 - 2.0 * x * y * s2;
    let qx = 2.0 * x * c2 - 2.0 * y * s2;
    let qy = -2.0 * y * c2 - 2.0 * x * s2;
    let mu = ast.mu;
    let zonal = |w: f64, planar: bool| {
        let extra = if planar { -3.0 * w / r5 } else { 0.0 };
        mu * c20 * (-3.0 * w / r5 + extra + 7.5 * rho2 * w / r7)
    };
    Vector3::new(
        zonal(x, true) + 3.0 * mu * c22 * (qx / r5 - 5.0 * q * x / r7),
        zonal(y, true) + 3.0 * mu * c22 * (qy / r5 - 5.0 * q * y / r7),
        zonal(z, false) + 3.0 * mu * c22 * (-5.0 * q * z / r7),
    )
}

/// Point-mass attraction plus the degree-two correction. Points inside the
/// circumscribing sphere are rejected.
pub fn gravity_acceleration(r: &Vector3<f64>, ast: &AsteroidModel, t: f64) -> Result<Vector3<f64>> {
    let d = r.norm();
    if d <= ast.semi_axes[0] {
        return Err(Error::InsideAsteroid("gravity field requested inside the body"));
    }
    Ok(-ast.mu / d.powi(3) * r + harmonic_acceleration(r, ast, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::astro::{Anomaly, OrbitalElements};
    use crate::constants::AU;

    fn apophis() -> AsteroidModel {
        let k = OrbitalElements::new(0.9224 * AU, 0.1912, 0.058, 3.57, 2.2, Anomaly::Mean(0.0), 0.0).unwrap();
        AsteroidModel::apophis(k, 1.8e7)
    }

    #[test]
    fn apophis_sectoral_coefficient() {
        let (_, c22) = harmonic_coefficients(&apophis());
        assert!((c22 - 912.8).abs() < 1e-9);
    }

    #[test]
    fn sphere_has_no_correction() {
        let mut ast = apophis();
        ast.semi_axes = [150.0; 3];
        assert_eq!(harmonic_coefficients(&ast), (0.0, 0.0));
        let r = Vector3::new(300.0, -500.0, 200.0);
        assert_eq!(harmonic_acceleration(&r, &ast, 1e4), Vector3::zeros());
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let ast = apophis();
        let pts = [
            Vector3::new(600.0, 800.0, 100.0),
            Vector3::new(-1200.0, 300.0, -400.0),
            Vector3::new(50.0, -900.0, 700.0),
            Vector3::new(2000.0, 2000.0, 10.0),
        ];
        for (j, p) in pts.iter().enumerate() {
            let t = 3000.0 * j as f64;
            let g = harmonic_acceleration(p, &ast, t);
            for k in 0..3 {
                let mut e = Vector3::zeros();
                e[k] = 1e-2;
                let fd = (harmonic_potential(&(p + e), &ast, t) - harmonic_potential(&(p - e), &ast, t)) / 2e-2;
                assert!((fd - g[k]).abs() <= 1e-6 * g.norm(), "component {k}: {fd} vs {}", g[k]);
            }
        }
    }

    #[test]
    fn interior_rejected() {
        assert!(gravity_acceleration(&Vector3::new(100.0, 0.0, 0.0), &apophis(), 0.0).is_err());
    }
}
