use super::elements::{Anomaly, OrbitalElements};
use crate::constants::AU;

/// Heliocentric ecliptic elements of 99942 Apophis. The catalogue gives no
/// phase, so the mean anomaly and epoch are supplied by the caller.
pub fn apophis_elements(mean_anomaly: f64, epoch: f64) -> OrbitalElements {
    OrbitalElements {
        a: 0.9224 * AU,
        e: 0.1912,
        i: 3.3312f64.to_radians(),
        raan: 204.4428f64.to_radians(),
        argp: 126.4002f64.to_radians(),
        anomaly: Anomaly::Mean(mean_anomaly),
        epoch,
    }
}

/// Mean J2000 ecliptic elements of the Earth-Moon barycentre, with the
/// node set to zero for the (nearly) equatorial orbit and the longitude of
/// perihelion carried in the argument of perihelion.
pub fn earth_elements(epoch: f64) -> OrbitalElements {
    OrbitalElements {
        a: 1.000_002_61 * AU,
        e: 0.016_711_23,
        i: 0.0,
        raan: 0.0,
        argp: 102.937_681_93f64.to_radians(),
        anomaly: Anomaly::Mean((100.464_571_66f64 - 102.937_681_93).to_radians()),
        epoch,
    }
}

/// Circular orbit of radius 1 AU in the ecliptic.
pub fn circular_earth_elements(phase: f64, epoch: f64) -> OrbitalElements {
    OrbitalElements {
        a: AU,
        e: 0.0,
        i: 0.0,
        raan: 0.0,
        argp: 0.0,
        anomaly: Anomaly::Mean(phase),
        epoch,
    }
}
