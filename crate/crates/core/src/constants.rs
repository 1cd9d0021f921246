//! Physical constants and unit conversions. Everything is SI.

/// Astronomical unit (m).
pub const AU: f64 = 1.495_978_707e11;
/// Heliocentric gravitational parameter (m^3/s^2).
pub const MU_SUN: f64 = 1.327_124_400_18e20;
/// Solar flux at 1 AU (W/m^2).
pub const SOLAR_FLUX_1AU: f64 = 1367.0;
/// Stefan-Boltzmann constant (W/(m^2 K^4)).
pub const STEFAN_BOLTZMANN: f64 = 5.670_374_419e-8;
/// Boltzmann constant (J/K).
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Avogadro constant (1/mol).
pub const AVOGADRO: f64 = 6.022_140_76e23;
/// Universal gravitational constant (m^3/(kg s^2)).
pub const GRAVITATIONAL_CONSTANT: f64 = 6.674_30e-11;
/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Standard gravity, used for specific impulse (m/s^2).
pub const STANDARD_GRAVITY: f64 = 9.806_65;

pub const SECONDS_PER_DAY: f64 = 86_400.0;
/// Julian year (s).
pub const SECONDS_PER_YEAR: f64 = 365.25 * SECONDS_PER_DAY;

/// Molar mass of forsterite, Mg2SiO4 (kg/mol).
pub const FORSTERITE_MOLAR_MASS: f64 = 0.140_69;

/// Mass of one forsterite formula unit (kg).
pub fn forsterite_molecule_mass() -> f64 {
    FORSTERITE_MOLAR_MASS / AVOGADRO
}

/// Wrap an angle into `[0, 2*pi)`.
pub fn wrap_two_pi(angle: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let wrapped = angle.rem_euclid(tau);
    // rem_euclid can round up to exactly tau for tiny negative inputs
    if wrapped >= tau {
        0.0
    } else {
        wrapped
    }
}

/// Wrap an angle difference into `(-pi, pi]`.
pub fn wrap_pi(angle: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut a = angle.rem_euclid(tau);
    if a > std::f64::consts::PI {
        a -= tau;
    }
    a
}
