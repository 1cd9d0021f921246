use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::elements::OrbitalElements;

/// Element differences of a natural formation orbit. The semi-major axis
/// difference is zero by construction so the relative motion is periodic.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ElementDeltas {
    pub de: f64,
    pub di: f64,
    pub draan: f64,
    pub dargp: f64,
    pub dmean: f64,
}

impl ElementDeltas {
    pub fn from_array(v: &[f64]) -> Self {
        Self {
            de: v[0],
            di: v[1],
            draan: v[2],
            dargp: v[3],
            dmean: v[4],
        }
    }

    pub fn to_array(&self) -> [f64; 5] {
        [self.de, self.di, self.draan, self.dargp, self.dmean]
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::from_array(&self.to_array().map(|v| v * s))
    }

    /// Deltas producing the same in-plane motion with the out-of-plane
    /// motion reversed, for an asteroid of inclination `i`.
    pub fn mirrored(&self, i: f64) -> Self {
        Self {
            di: -self.di,
            draan: -self.draan,
            dargp: self.dargp + 2.0 * i.cos() * self.draan,
            ..*self
        }
    }

    /// Apply the deltas to a reference element set (mean anomaly shifted).
    pub fn apply(&self, k: &OrbitalElements) -> OrbitalElements {
        OrbitalElements {
            e: k.e + self.de,
            i: k.i + self.di,
            raan: k.raan + self.draan,
            argp: k.argp + self.dargp,
            ..k.with_mean_anomaly(k.mean_anomaly() + self.dmean)
        }
    }
}

/// Linearised relative position in the Hill frame of the reference orbit
/// at true anomaly `nu`.
pub fn linear_proximal_position(k: &OrbitalElements, dk: &ElementDeltas, nu: f64) -> Vector3<f64> {
    let (a, e) = (k.a, k.e);
    let eta = (1.0 - e * e).sqrt();
    let (sin_nu, cos_nu) = nu.sin_cos();
    let r = a * (1.0 - e * e) / (1.0 + e * cos_nu);
    let theta = nu + k.argp;
    let x = a * e * sin_nu / eta * dk.dmean - a * cos_nu * dk.de;
    let y = r / eta.powi(3) * (1.0 + e * cos_nu).powi(2) * dk.dmean
        + r * dk.dargp
        + r * sin_nu / (eta * eta) * (2.0 + e * cos_nu) * dk.de
        + r * k.i.cos() * dk.draan;
    let z = r * (theta.sin() * dk.di - theta.cos() * k.i.sin() * dk.draan);
    Vector3::new(x, y, z)
}
