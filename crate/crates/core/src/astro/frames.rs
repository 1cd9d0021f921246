use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::elements::StateVector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameKind {
    /// Radial, along-track, orbit normal.
    Hill,
    /// Along velocity, in-plane normal, orbit normal.
    Tangential,
    /// Impact-plane axes with the third axis along the relative velocity.
    BPlane,
}

/// Right-handed orthonormal triad expressed in inertial coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBasis {
    pub kind: FrameKind,
    pub axes: [Vector3<f64>; 3],
}

impl FrameBasis {
    /// Hill frame: x along the position, z along the angular momentum.
    pub fn hill(state: &StateVector) -> Result<Self> {
        let x = unit(state.position, "zero position")?;
        let z = unit(state.angular_momentum(), "zero angular momentum")?;
        let y = z.cross(&x);
        Ok(Self {
            kind: FrameKind::Hill,
            axes: [x, y, z],
        })
    }

    /// Tangential frame: t along the velocity, h along the angular momentum
    /// and n = h x t.
    pub fn tangential(state: &StateVector) -> Result<Self> {
        let t = unit(state.velocity, "zero velocity")?;
        let h = unit(state.angular_momentum(), "zero angular momentum")?;
        let n = h.cross(&t);
        Ok(Self {
            kind: FrameKind::Tangential,
            axes: [t, n, h],
        })
    }

    /// Impact-plane frame for a relative velocity. The first axis lies in the
    /// ecliptic, the third is along the relative velocity.
    pub fn bplane(relative_velocity: Vector3<f64>) -> Result<Self> {
        let eta = unit(relative_velocity, "zero relative velocity")
            .map_err(|_| Error::BPlaneUndefined(relative_velocity.norm()))?;
        let mut xi = eta.cross(&Vector3::z());
        if xi.norm() < 1e-12 {
            xi = eta.cross(&Vector3::x());
        }
        let xi = xi.normalize();
        let zeta = eta.cross(&xi);
        Ok(Self {
            kind: FrameKind::BPlane,
            axes: [xi, zeta, eta],
        })
    }

    /// Components of an inertial vector along the frame axes.
    pub fn to_frame(&self, v: &Vector3<f64>) -> Vector3<f64> {
        Vector3::new(self.axes[0].dot(v), self.axes[1].dot(v), self.axes[2].dot(v))
    }

    /// Inertial vector from frame components.
    pub fn from_frame(&self, c: &Vector3<f64>) -> Vector3<f64> {
        c.x * self.axes[0] + c.y * self.axes[1] + c.z * self.axes[2]
    }

    /// Largest deviation of the triad from a right-handed orthonormal set.
    pub fn orthonormality_error(&self) -> f64 {
        let [a, b, c] = self.axes;
        let mut err: f64 = 0.0;
        for v in [a, b, c] {
            err = err.max((v.norm() - 1.0).abs());
        }
        err = err.max(a.dot(&b).abs()).max(a.dot(&c).abs()).max(b.dot(&c).abs());
        err.max((a.cross(&b) - c).norm())
    }
}

fn unit(v: Vector3<f64>, what: &'static str) -> Result<Vector3<f64>> {
    let n = v.norm();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::DegenerateState(what));
    }
    Ok(v / n)
}

/// Rotate Hill-frame components into tangential-frame components given the
/// flight-path angle.
pub fn hill_to_tangential(v: &Vector3<f64>, flight_path_angle: f64) -> Vector3<f64> {
    let (s, c) = flight_path_angle.sin_cos();
    Vector3::new(v.x * s + v.y * c, -v.x * c + v.y * s, v.z)
}

/// Inverse of [`hill_to_tangential`].
pub fn tangential_to_hill(v: &Vector3<f64>, flight_path_angle: f64) -> Vector3<f64> {
    let (s, c) = flight_path_angle.sin_cos();
    Vector3::new(v.x * s - v.y * c, v.x * c + v.y * s, v.z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::astro::elements::{elements_to_state, Anomaly, OrbitalElements};
    use crate::constants::{AU, MU_SUN};

    fn sample_state(nu: f64) -> (OrbitalElements, StateVector) {
        let k = OrbitalElements::new(0.9224 * AU, 0.1912, 0.058, 3.57, 2.2, Anomaly::True(nu), 0.0).unwrap();
        (k, elements_to_state(&k, MU_SUN).unwrap())
    }

    #[test]
    fn frames_are_orthonormal() {
        let (_, s) = sample_state(1.1);
        assert!(FrameBasis::hill(&s).unwrap().orthonormality_error() < 1e-14);
        assert!(FrameBasis::tangential(&s).unwrap().orthonormality_error() < 1e-14);
        assert!(FrameBasis::bplane(s.velocity).unwrap().orthonormality_error() < 1e-14);
    }

    #[test]
    fn flight_path_rotation_matches_frames() {
        for &nu in &[0.0, 0.7, 2.0, 4.5] {
            let (k, s) = sample_state(nu);
            let hill = FrameBasis::hill(&s).unwrap();
            let tnh = FrameBasis::tangential(&s).unwrap();
            let v = Vector3::new(0.3, -1.2, 0.8);
            let direct = tnh.to_frame(&hill.from_frame(&v));
            let rotated = hill_to_tangential(&v, k.flight_path_angle());
            assert!((direct - rotated).norm() < 1e-12, "nu={nu}");
            assert!((tangential_to_hill(&rotated, k.flight_path_angle()) - v).norm() < 1e-14);
        }
    }

    #[test]
    fn bplane_rejects_zero_velocity() {
        assert!(matches!(FrameBasis::bplane(Vector3::zeros()), Err(Error::BPlaneUndefined(_))));
    }
}
