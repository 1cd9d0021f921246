use nalgebra::Vector3;

use super::elements::{elements_to_state, kepler_propagate, BodyEphemeris, OrbitalElements};
use super::frames::FrameBasis;
use crate::error::{Error, Result};

/// Mean-anomaly shift at the encounter time produced by a deflection that
/// ran from `t0` to `ti` and then coasted to `t_moid`.
///
/// `mean_anomaly_integral` is the integral of dM/dt over the thrust arc,
/// `n0` and `ni` the mean motions before and after the thrust.
pub fn delta_m_at_moid(mean_anomaly_integral: f64, t0: f64, ti: f64, t_moid: f64, n0: f64, ni: f64) -> f64 {
    mean_anomaly_integral + n0 * (t0 - t_moid) + ni * (t_moid - ti)
}

/// Same shift computed from the integrated drift relative to the initial
/// mean motion, `excess = integral of (dM/dt - n0)` over the thrust arc.
/// Algebraically equal to [`delta_m_at_moid`] but free of cancellation.
pub fn delta_m_from_excess(excess: f64, ti: f64, t_moid: f64, n0: f64, ni: f64) -> f64 {
    excess + (ni - n0) * (t_moid - ti)
}

/// Offset between the deflected and nominal asteroid at `t_moid`, projected
/// on the plane normal to the asteroid-Earth relative velocity.
pub fn bplane_offset(
    deflected: &OrbitalElements,
    nominal: &OrbitalElements,
    earth: &BodyEphemeris,
    t_moid: f64,
) -> Result<Vector3<f64>> {
    let mu = earth.mu_central;
    let s_dev = elements_to_state(&kepler_propagate(deflected, t_moid - deflected.epoch, mu), mu)?;
    let s_nom = elements_to_state(&kepler_propagate(nominal, t_moid - nominal.epoch, mu), mu)?;
    let s_earth = earth.state_at(t_moid)?;
    let v_rel = s_nom.velocity - s_earth.velocity;
    if v_rel.norm() < 1e-9 {
        return Err(Error::BPlaneUndefined(v_rel.norm()));
    }
    let frame = FrameBasis::bplane(v_rel)?;
    let dr = s_dev.position - s_nom.position;
    let along = frame.axes[2].dot(&dr);
    Ok(dr - along * frame.axes[2])
}

/// Impact parameter change, the norm of [`bplane_offset`].
pub fn impact_parameter(
    deflected: &OrbitalElements,
    nominal: &OrbitalElements,
    earth: &BodyEphemeris,
    t_moid: f64,
) -> Result<f64> {
    Ok(bplane_offset(deflected, nominal, earth, t_moid)?.norm())
}

/// Deflected elements at `t_moid`: the post-thrust shape and orientation
/// with the nominal mean anomaly shifted by `delta_m`.
pub fn deflected_elements_at_moid(
    after_thrust: &OrbitalElements,
    nominal: &OrbitalElements,
    delta_m: f64,
    t_moid: f64,
    mu: f64,
) -> OrbitalElements {
    let m_nominal = kepler_propagate(nominal, t_moid - nominal.epoch, mu).mean_anomaly();
    after_thrust.with_mean_anomaly(m_nominal + delta_m).with_epoch(t_moid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::astro::elements::Anomaly;
    use crate::constants::{AU, MU_SUN};

    #[test]
    fn delta_m_forms_agree() {
        let (t0, ti, tm, n0, ni) = (0.0, 3e7, 9e7, 2.2e-7, 2.2001e-7);
        let excess = 1.5e-4;
        let integral = n0 * (ti - t0) + excess;
        let verbatim = delta_m_at_moid(integral, t0, ti, tm, n0, ni);
        let clean = delta_m_from_excess(excess, ti, tm, n0, ni);
        assert!((verbatim - clean).abs() < 1e-9 * clean.abs().max(1e-6));
    }

    #[test]
    fn delta_m_null_deflection() {
        let (t0, ti, tm, n0) = (0.0, 3e7, 9e7, 2.2e-7);
        assert_eq!(delta_m_from_excess(0.0, ti, tm, n0, n0), 0.0);
        assert!(delta_m_at_moid(n0 * (ti - t0), t0, ti, tm, n0, n0).abs() < 1e-12);
    }

    #[test]
    fn identical_orbits_give_zero_b() {
        let k = OrbitalElements::new(0.9224 * AU, 0.1912, 0.05, 3.5, 2.2, Anomaly::Mean(0.2), 0.0).unwrap();
        let earth = BodyEphemeris::new(
            OrbitalElements::new(AU, 0.0167, 0.0, 0.0, 1.8, Anomaly::Mean(0.0), 0.0).unwrap(),
            MU_SUN,
        );
        assert_eq!(impact_parameter(&k, &k, &earth, 1e6).unwrap(), 0.0);
    }

    #[test]
    fn co_moving_bodies_have_no_bplane() {
        let k = OrbitalElements::new(AU, 0.1, 0.05, 3.5, 2.2, Anomaly::Mean(0.2), 0.0).unwrap();
        let earth = BodyEphemeris::new(k, MU_SUN);
        let shifted = k.with_mean_anomaly(0.2001);
        assert!(matches!(
            impact_parameter(&shifted, &k, &earth, 0.0),
            Err(Error::BPlaneUndefined(_))
        ));
    }
}
