//! Maximisation of a periodic function of the true anomaly.

use std::f64::consts::TAU;

/// Samples per revolution of the coarse sweep.
pub const SWEEP_POINTS: usize = 720;

/// Maximum of a 2*pi-periodic function: dense sweep, then golden-section
/// refinement around the best sample. Returns `(argmax, max)`.
pub fn periodic_max<F: Fn(f64) -> f64>(f: F) -> (f64, f64) {
    periodic_max_with(f, SWEEP_POINTS)
}

pub fn periodic_max_with<F: Fn(f64) -> f64>(f: F, points: usize) -> (f64, f64) {
    let step = TAU / points as f64;
    let (mut best_nu, mut best) = (0.0, f64::NEG_INFINITY);
    for j in 0..points {
        let nu = j as f64 * step;
        let v = f(nu);
        if v > best {
            best = v;
            best_nu = nu;
        }
    }
    let (nu, v) = golden_max(&f, best_nu - step, best_nu + step);
    if v > best {
        (nu.rem_euclid(TAU), v)
    } else {
        (best_nu, best)
    }
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..60 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
