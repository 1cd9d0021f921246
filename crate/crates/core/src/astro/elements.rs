use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::constants::wrap_two_pi;
use crate::error::{Error, Result};

/// Which anomaly an element set carries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Anomaly {
    Mean(f64),
    True(f64),
}

impl Anomaly {
    pub fn value(self) -> f64 {
        match self {
            Anomaly::Mean(v) | Anomaly::True(v) => v,
        }
    }

    fn normalized(self) -> Self {
        match self {
            Anomaly::Mean(v) => Anomaly::Mean(wrap_two_pi(v)),
            Anomaly::True(v) => Anomaly::True(wrap_two_pi(v)),
        }
    }
}

/// Keplerian elements of an elliptic orbit. Angles in radians, lengths in
/// metres, epoch in seconds on the scenario clock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitalElements {
    pub a: f64,
    pub e: f64,
    pub i: f64,
    pub raan: f64,
    pub argp: f64,
    pub anomaly: Anomaly,
    pub epoch: f64,
}

/// Heliocentric inertial position and velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    pub position: Vector3<f64>,
    pub velocity: Vector3<f64>,
}

impl StateVector {
    pub fn new(position: Vector3<f64>, velocity: Vector3<f64>) -> Self {
        Self { position, velocity }
    }

    pub fn specific_energy(&self, mu: f64) -> f64 {
        0.5 * self.velocity.norm_squared() - mu / self.position.norm()
    }

    pub fn angular_momentum(&self) -> Vector3<f64> {
        self.position.cross(&self.velocity)
    }
}

impl OrbitalElements {
    /// Validated constructor. The anomaly is wrapped into `[0, 2*pi)`.
    pub fn new(
        a: f64,
        e: f64,
        i: f64,
        raan: f64,
        argp: f64,
        anomaly: Anomaly,
        epoch: f64,
    ) -> Result<Self> {
        let k = Self {
            a,
            e,
            i,
            raan: wrap_two_pi(raan),
            argp: wrap_two_pi(argp),
            anomaly: anomaly.normalized(),
            epoch,
        };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.a, self.e, self.i, self.raan, self.argp, self.anomaly.value(), self.epoch]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidArgument("non-finite orbital element".into()));
        }
        if !(self.a > 0.0) || !(0.0..1.0).contains(&self.e) {
            return Err(Error::NotElliptic {
                eccentricity: self.e,
                semi_major_axis: self.a,
            });
        }
        if !(0.0..=std::f64::consts::PI).contains(&self.i) {
            return Err(Error::InvalidArgument(format!(
                "inclination {} rad outside [0, pi]",
                self.i
            )));
        }
        Ok(())
    }

    pub fn mean_motion(&self, mu: f64) -> f64 {
        (mu / self.a.powi(3)).sqrt()
    }

    pub fn period(&self, mu: f64) -> f64 {
        std::f64::consts::TAU / self.mean_motion(mu)
    }

    pub fn semi_latus_rectum(&self) -> f64 {
        self.a * (1.0 - self.e * self.e)
    }

    pub fn mean_anomaly(&self) -> f64 {
        match self.anomaly {
            Anomaly::Mean(m) => m,
            Anomaly::True(nu) => mean_from_true(nu, self.e),
        }
    }

    pub fn true_anomaly(&self) -> f64 {
        match self.anomaly {
            Anomaly::Mean(m) => true_from_mean(m, self.e),
            Anomaly::True(nu) => nu,
        }
    }

    /// Heliocentric distance at the current anomaly.
    pub fn radius(&self) -> f64 {
        let nu = self.true_anomaly();
        self.semi_latus_rectum() / (1.0 + self.e * nu.cos())
    }

    /// Flight-path angle: elevation of the velocity over the local horizontal.
    pub fn flight_path_angle(&self) -> f64 {
        let nu = self.true_anomaly();
        (self.e * nu.sin()).atan2(1.0 + self.e * nu.cos())
    }

    pub fn with_mean_anomaly(&self, m: f64) -> Self {
        Self {
            anomaly: Anomaly::Mean(wrap_two_pi(m)),
            ..*self
        }
    }

    pub fn with_true_anomaly(&self, nu: f64) -> Self {
        Self {
            anomaly: Anomaly::True(wrap_two_pi(nu)),
            ..*self
        }
    }

    pub fn with_epoch(&self, epoch: f64) -> Self {
        Self { epoch, ..*self }
    }

    /// Position on the orbit at true anomaly `nu`, independent of timing.
    pub fn position_at(&self, nu: f64) -> Vector3<f64> {
        let (p_hat, q_hat) = self.perifocal_axes();
        let r = self.semi_latus_rectum() / (1.0 + self.e * nu.cos());
        r * (nu.cos() * p_hat + nu.sin() * q_hat)
    }

    /// Derivative of [`Self::position_at`] with respect to the true anomaly.
    pub fn position_derivative_at(&self, nu: f64) -> Vector3<f64> {
        let (p_hat, q_hat) = self.perifocal_axes();
        let p = self.semi_latus_rectum();
        let r = p / (1.0 + self.e * nu.cos());
        (r * r / p) * (-nu.sin() * p_hat + (self.e + nu.cos()) * q_hat)
    }

    /// Unit vectors towards periapsis and 90 degrees ahead of it.
    pub fn perifocal_axes(&self) -> (Vector3<f64>, Vector3<f64>) {
        let (so, co) = self.raan.sin_cos();
        let (sw, cw) = self.argp.sin_cos();
        let (si, ci) = self.i.sin_cos();
        let p_hat = Vector3::new(co * cw - so * sw * ci, so * cw + co * sw * ci, sw * si);
        let q_hat = Vector3::new(-co * sw - so * cw * ci, -so * sw + co * cw * ci, cw * si);
        (p_hat, q_hat)
    }
}

/// Central body plus the elements of a body moving around it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BodyEphemeris {
    pub elements: OrbitalElements,
    pub mu_central: f64,
}

impl BodyEphemeris {
    pub fn new(elements: OrbitalElements, mu_central: f64) -> Self {
        Self {
            elements,
            mu_central,
        }
    }

    pub fn elements_at(&self, t: f64) -> OrbitalElements {
        kepler_propagate(&self.elements, t - self.elements.epoch, self.mu_central)
    }

    pub fn state_at(&self, t: f64) -> Result<StateVector> {
        elements_to_state(&self.elements_at(t), self.mu_central)
    }
}

/// Solve Kepler's equation `E - e sin E = M` for the eccentric anomaly.
///
/// Newton iteration with a bisection fallback; the residual is driven below
/// 1e-12 for every elliptic `e`.
pub fn solve_kepler(mean_anomaly: f64, e: f64) -> f64 {
    let m = wrap_two_pi(mean_anomaly);
    let residual = |ecc_anom: f64| ecc_anom - e * ecc_anom.sin() - m;

    let mut ecc_anom = if e < 0.8 { m } else { std::f64::consts::PI };
    for _ in 0..50 {
        let f = residual(ecc_anom);
        if f.abs() < 1e-14 {
            return ecc_anom;
        }
        let step = f / (1.0 - e * ecc_anom.cos());
        ecc_anom -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    if residual(ecc_anom).abs() < 1e-12 {
        return ecc_anom;
    }

    // E - e sin E is monotone on [0, 2pi], so bisection always converges.
    let (mut lo, mut hi) = (0.0, std::f64::consts::TAU);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

pub fn true_from_eccentric(ecc_anom: f64, e: f64) -> f64 {
    let half = 0.5 * ecc_anom;
    wrap_two_pi(2.0 * ((1.0 + e).sqrt() * half.sin()).atan2((1.0 - e).sqrt() * half.cos()))
}

pub fn eccentric_from_true(nu: f64, e: f64) -> f64 {
    let half = 0.5 * nu;
    wrap_two_pi(2.0 * ((1.0 - e).sqrt() * half.sin()).atan2((1.0 + e).sqrt() * half.cos()))
}

pub fn true_from_mean(m: f64, e: f64) -> f64 {
    true_from_eccentric(solve_kepler(m, e), e)
}

pub fn mean_from_true(nu: f64, e: f64) -> f64 {
    let ecc_anom = eccentric_from_true(nu, e);
    wrap_two_pi(ecc_anom - e * ecc_anom.sin())
}

/// Convert elements to a heliocentric inertial state.
pub fn elements_to_state(k: &OrbitalElements, mu: f64) -> Result<StateVector> {
    k.validate()?;
    let nu = k.true_anomaly();
    let p = k.semi_latus_rectum();
    let (p_hat, q_hat) = k.perifocal_axes();
    let r = p / (1.0 + k.e * nu.cos());
    let position = r * (nu.cos() * p_hat + nu.sin() * q_hat);
    let velocity = (mu / p).sqrt() * (-nu.sin() * p_hat + (k.e + nu.cos()) * q_hat);
    Ok(StateVector::new(position, velocity))
}

/// Convert a bound heliocentric state to elements carrying the true anomaly.
///
/// Circular orbits get `argp = 0` with the anomaly measured from the node;
/// equatorial orbits get `raan = 0` with the node line on the x axis.
pub fn state_to_elements(s: &StateVector, mu: f64, epoch: f64) -> Result<OrbitalElements> {
    let r_vec = s.position;
    let v_vec = s.velocity;
    let r = r_vec.norm();
    if !(r > 0.0) || !r.is_finite() || !v_vec.norm().is_finite() {
        return Err(Error::DegenerateState("position must be finite and non-zero"));
    }
    let energy = s.specific_energy(mu);
    if energy >= 0.0 {
        return Err(Error::UnboundState { energy });
    }
    let h_vec = r_vec.cross(&v_vec);
    let h = h_vec.norm();
    if h <= 1e-10 * r * v_vec.norm() {
        return Err(Error::DegenerateState("angular momentum vanishes (rectilinear motion)"));
    }
    let h_hat = h_vec / h;

    let a = -mu / (2.0 * energy);
    let e_vec = ((v_vec.norm_squared() - mu / r) * r_vec - r_vec.dot(&v_vec) * v_vec) / mu;
    let e = e_vec.norm();
    let i = h_hat.z.clamp(-1.0, 1.0).acos();

    let node = Vector3::z().cross(&h_vec);
    let (raan, node_hat) = if node.norm() > 1e-11 * h {
        (node.y.atan2(node.x), node.normalize())
    } else {
        (0.0, Vector3::x())
    };
    let m_hat = h_hat.cross(&node_hat);

    let arg_lat = r_vec.dot(&m_hat).atan2(r_vec.dot(&node_hat));
    let (argp, nu) = if e > 1e-11 {
        let argp = e_vec.dot(&m_hat).atan2(e_vec.dot(&node_hat));
        (argp, arg_lat - argp)
    } else {
        (0.0, arg_lat)
    };

    OrbitalElements::new(a, e, i, raan, argp, Anomaly::True(nu), epoch)
}

/// Two-body propagation: only the anomaly and the epoch change.
pub fn kepler_propagate(k: &OrbitalElements, dt: f64, mu: f64) -> OrbitalElements {
    let m = k.mean_anomaly() + k.mean_motion(mu) * dt;
    let anomaly = match k.anomaly {
        Anomaly::Mean(_) => Anomaly::Mean(wrap_two_pi(m)),
        Anomaly::True(_) => Anomaly::True(true_from_mean(m, k.e)),
    };
    OrbitalElements {
        anomaly,
        epoch: k.epoch + dt,
        ..*k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{AU, MU_SUN, SECONDS_PER_DAY};
    use approx::assert_relative_eq;

    #[test]
    fn circular_orbit_state() {
        let k = OrbitalElements::new(AU, 0.0, 0.0, 0.0, 0.0, Anomaly::True(0.0), 0.0).unwrap();
        let s = elements_to_state(&k, MU_SUN).unwrap();
        assert_relative_eq!(s.position.x, AU, max_relative = 1e-15);
        assert!(s.position.y.abs() < 1e-3);
        assert_relative_eq!(s.velocity.norm(), (MU_SUN / AU).sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn apophis_periapsis_radius() {
        let k = OrbitalElements::new(
            0.9224 * AU,
            0.1912,
            3.3312f64.to_radians(),
            204.4428f64.to_radians(),
            126.4002f64.to_radians(),
            Anomaly::True(0.0),
            0.0,
        )
        .unwrap();
        let s = elements_to_state(&k, MU_SUN).unwrap();
        assert_relative_eq!(s.position.norm(), 0.9224 * AU * (1.0 - 0.1912), max_relative = 1e-13);
    }

    #[test]
    fn rejects_non_elliptic() {
        assert!(OrbitalElements::new(AU, 1.0, 0.0, 0.0, 0.0, Anomaly::Mean(0.0), 0.0).is_err());
        assert!(OrbitalElements::new(-AU, 0.5, 0.0, 0.0, 0.0, Anomaly::Mean(0.0), 0.0).is_err());
    }

    #[test]
    fn circular_equatorial_state_to_elements() {
        let v = (MU_SUN / AU).sqrt();
        let s = StateVector::new(Vector3::new(AU, 0.0, 0.0), Vector3::new(0.0, v, 0.0));
        let k = state_to_elements(&s, MU_SUN, 0.0).unwrap();
        assert!(k.e < 1e-12);
        assert!(k.i < 1e-12);
    }

    #[test]
    fn periapsis_state_has_zero_true_anomaly() {
        let k = OrbitalElements::new(1.3 * AU, 0.3, 0.2, 1.0, 2.0, Anomaly::True(0.0), 0.0).unwrap();
        let s = elements_to_state(&k, MU_SUN).unwrap();
        assert!(s.position.dot(&s.velocity).abs() / (s.position.norm() * s.velocity.norm()) < 1e-14);
        let back = state_to_elements(&s, MU_SUN, 0.0).unwrap();
        assert!(crate::constants::wrap_pi(back.true_anomaly()).abs() < 1e-10);
    }

    #[test]
    fn unbound_and_degenerate_states_rejected() {
        let fast = StateVector::new(Vector3::new(AU, 0.0, 0.0), Vector3::new(0.0, 1e5, 0.0));
        assert!(matches!(state_to_elements(&fast, MU_SUN, 0.0), Err(Error::UnboundState { .. })));
        let radial = StateVector::new(Vector3::new(AU, 0.0, 0.0), Vector3::new(1e3, 0.0, 0.0));
        assert!(matches!(state_to_elements(&radial, MU_SUN, 0.0), Err(Error::DegenerateState(_))));
    }

    #[test]
    fn kepler_full_period_is_identity() {
        let k = OrbitalElements::new(0.9224 * AU, 0.1912, 0.05, 3.5, 2.2, Anomaly::Mean(1.234), 0.0).unwrap();
        let t = k.period(MU_SUN);
        let k2 = kepler_propagate(&k, t, MU_SUN);
        assert!(crate::constants::wrap_pi(k2.mean_anomaly() - k.mean_anomaly()).abs() < 1e-12);
        assert_eq!(k2.a, k.a);
        assert_eq!(k2.e, k.e);
    }

    #[test]
    fn apophis_table_period() {
        // Period listed for the test asteroid: 323.5969 days.
        let k = OrbitalElements::new(0.9224 * AU, 0.1912, 0.05, 3.5, 2.2, Anomaly::Mean(0.7), 0.0).unwrap();
        let t = 323.5969 * SECONDS_PER_DAY;
        assert_relative_eq!(k.period(MU_SUN), t, max_relative = 1e-4);
        let k2 = kepler_propagate(&k, k.period(MU_SUN), MU_SUN);
        assert!((k2.mean_anomaly() - 0.7).abs() < 1e-10);
    }

    #[test]
    fn kepler_solver_matches_bisection() {
        let (e, m) = (0.1912, 1.0);
        let (mut lo, mut hi) = (0.0f64, std::f64::consts::TAU);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid - e * mid.sin() - m > 0.0 {
                hi = mid
            } else {
                lo = mid
            }
        }
        let oracle = 0.5 * (lo + hi);
        let newton = solve_kepler(m, e);
        assert!((newton - oracle).abs() < 1e-12);
        assert!((newton - e * newton.sin() - m).abs() < 1e-12);
    }

    #[test]
    fn kepler_residual_high_eccentricity() {
        for &e in &[0.0, 0.5, 0.9, 0.99, 0.999] {
            for j in 0..64 {
                let m = j as f64 * 0.1;
                let ea = solve_kepler(m, e);
                assert!((ea - e * ea.sin() - wrap_two_pi(m)).abs() < 1e-12, "e={e} m={m}");
            }
        }
    }
}
