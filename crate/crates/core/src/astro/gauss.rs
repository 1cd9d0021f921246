use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::elements::OrbitalElements;
use crate::error::{Error, Result};
use crate::integrate::{step_count, try_rk4_step};

/// Eccentricity and inclination below which the variational equations are
/// singular.
pub const SINGULARITY_TOLERANCE: f64 = 1e-8;

/// Time derivatives of (a, e, i, raan, argp, M).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ElementRates {
    pub a: f64,
    pub e: f64,
    pub i: f64,
    pub raan: f64,
    pub argp: f64,
    pub mean_anomaly: f64,
}

/// Element rates under a perturbing acceleration given in the tangential
/// frame (t along velocity, n = h x t, h along angular momentum).
///
/// Zero eccentricity is always rejected. Zero inclination is rejected only
/// when the out-of-plane component is non-zero, since in-plane thrust keeps
/// a planar orbit planar and never needs the node.
pub fn gauss_rates(k: &OrbitalElements, accel_tnh: &Vector3<f64>, mu: f64) -> Result<ElementRates> {
    let (ut, un, uh) = (accel_tnh.x, accel_tnh.y, accel_tnh.z);
    if k.e < SINGULARITY_TOLERANCE {
        return Err(Error::GaussSingularity(format!("eccentricity {} too small", k.e)));
    }
    let sin_i = k.i.sin();
    if uh != 0.0 && sin_i.abs() < SINGULARITY_TOLERANCE {
        return Err(Error::GaussSingularity(format!(
            "inclination {} rad with out-of-plane acceleration",
            k.i
        )));
    }

    let (a, e) = (k.a, k.e);
    let nu = k.true_anomaly();
    let (sin_nu, cos_nu) = nu.sin_cos();
    let p = a * (1.0 - e * e);
    let r = p / (1.0 + e * cos_nu);
    let h = (mu * p).sqrt();
    let v = (mu * (2.0 / r - 1.0 / a)).sqrt();
    let n = k.mean_motion(mu);
    let b = a * (1.0 - e * e).sqrt();
    let theta = nu + k.argp;
    let (sin_th, cos_th) = theta.sin_cos();

    let (di, draan, dargp_out) = if uh == 0.0 {
        (0.0, 0.0, 0.0)
    } else {
        (
            r * cos_th / h * uh,
            r * sin_th / (h * sin_i) * uh,
            -r * sin_th * k.i.cos() / (h * sin_i) * uh,
        )
    };

    Ok(ElementRates {
        a: 2.0 * a * a * v / mu * ut,
        e: (2.0 * (e + cos_nu) * ut - r / a * sin_nu * un) / v,
        i: di,
        raan: draan,
        argp: (2.0 * sin_nu * ut + (2.0 * e + r / a * cos_nu) * un) / (e * v) + dargp_out,
        mean_anomaly: n
            - b / (e * a * v) * (2.0 * (1.0 + e * e * r / p) * sin_nu * ut + r / a * cos_nu * un),
    })
}

/// Result of integrating the variational equations over an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbedArc {
    /// Elements at the end of the arc, anomaly given as mean anomaly.
    pub elements: OrbitalElements,
    /// Integral of (dM/dt - n0) over the arc, n0 being the initial mean motion.
    pub mean_anomaly_excess: f64,
}

/// Integrate the variational equations with fixed-step RK4.
///
/// The mean anomaly is carried as its drift relative to the unperturbed
/// motion, so a zero acceleration reproduces Keplerian motion exactly.
pub fn propagate_perturbed<F>(
    k0: &OrbitalElements,
    duration: f64,
    max_step: f64,
    mu: f64,
    mut accel_tnh: F,
) -> Result<PerturbedArc>
where
    F: FnMut(f64, &OrbitalElements) -> Vector3<f64>,
{
    let n0 = k0.mean_motion(mu);
    let m0 = k0.mean_anomaly();
    let t0 = k0.epoch;
    let mut rhs = |t: f64, y: &[f64; 6]| -> Result<[f64; 6]> {
        let k = elements_from_array(y, m0, n0, t0, t)?;
        let rates = gauss_rates(&k, &accel_tnh(t, &k), mu)?;
        Ok([rates.a, rates.e, rates.i, rates.raan, rates.argp, rates.mean_anomaly - n0])
    };

    let mut y = [k0.a, k0.e, k0.i, k0.raan, k0.argp, 0.0];
    let steps = step_count(duration, max_step);
    let h = if steps > 0 { duration / steps as f64 } else { 0.0 };
    for s in 0..steps {
        y = try_rk4_step(&mut rhs, t0 + s as f64 * h, &y, h)?;
    }
    Ok(PerturbedArc {
        elements: elements_from_array(&y, m0, n0, t0, t0 + duration)?,
        mean_anomaly_excess: y[5],
    })
}

/// Rebuild elements at time `t` from the integrated state
/// `[a, e, i, raan, argp, mean-anomaly excess]`.
pub fn elements_from_array(y: &[f64; 6], m0: f64, n0: f64, t0: f64, t: f64) -> Result<OrbitalElements> {
    let mean = m0 + n0 * (t - t0) + y[5];
    // Inclination can step marginally below zero under RK4 when it starts at
    // zero; reflect it rather than fail validation.
    let (i, raan) = if y[2] < 0.0 {
        (-y[2], y[3] + std::f64::consts::PI)
    } else {
        (y[2], y[3])
    };
    OrbitalElements::new(y[0], y[1], i, raan, y[4], super::Anomaly::Mean(mean), t)
}
