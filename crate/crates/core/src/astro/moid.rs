use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use super::elements::OrbitalElements;
use crate::constants::wrap_two_pi;

/// Minimum orbit intersection distance and where on each orbit it occurs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moid {
    pub distance: f64,
    pub nu_first: f64,
    pub nu_second: f64,
}

const GRID_STEP_DEG: f64 = 2.0;
const CANDIDATES: usize = 8;

/// Minimum distance between two elliptic orbits.
///
/// A 2-degree grid in both true anomalies seeds a damped Newton descent on
/// the squared distance from each of the best local grid minima.
pub fn find_moid(first: &OrbitalElements, second: &OrbitalElements) -> Moid {
    let n = (360.0 / GRID_STEP_DEG).round() as usize;
    let step = std::f64::consts::TAU / n as f64;
    let pos_a: Vec<_> = (0..n).map(|j| first.position_at(j as f64 * step)).collect();
    let pos_b: Vec<_> = (0..n).map(|j| second.position_at(j as f64 * step)).collect();
    let d2 = |ia: usize, ib: usize| (pos_a[ia % n] - pos_b[ib % n]).norm_squared();

    let mut minima = Vec::new();
    for ia in 0..n {
        for ib in 0..n {
            let centre = d2(ia, ib);
            let is_min = (0..3).all(|da| {
                (0..3).all(|db| (da == 1 && db == 1) || d2(ia + n + da - 1, ib + n + db - 1) >= centre)
            });
            if is_min {
                minima.push((centre, ia, ib));
            }
        }
    }
    minima.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut best = Moid {
        distance: f64::INFINITY,
        nu_first: 0.0,
        nu_second: 0.0,
    };
    for &(_, ia, ib) in minima.iter().take(CANDIDATES) {
        let (nu_a, nu_b, dist) = refine(first, second, ia as f64 * step, ib as f64 * step);
        if dist < best.distance {
            best = Moid {
                distance: dist,
                nu_first: wrap_two_pi(nu_a),
                nu_second: wrap_two_pi(nu_b),
            };
        }
    }
    best
}

fn refine(first: &OrbitalElements, second: &OrbitalElements, mut nu_a: f64, mut nu_b: f64) -> (f64, f64, f64) {
    let dist2 = |a: f64, b: f64| (first.position_at(a) - second.position_at(b)).norm_squared();
    let mut f = dist2(nu_a, nu_b);
    let fd = 1e-6;
    for _ in 0..100 {
        let diff = first.position_at(nu_a) - second.position_at(nu_b);
        let da = first.position_derivative_at(nu_a);
        let db = second.position_derivative_at(nu_b);
        let dda = (first.position_derivative_at(nu_a + fd) - first.position_derivative_at(nu_a - fd)) / (2.0 * fd);
        let ddb = (second.position_derivative_at(nu_b + fd) - second.position_derivative_at(nu_b - fd)) / (2.0 * fd);
        let grad = Vector2::new(2.0 * diff.dot(&da), -2.0 * diff.dot(&db));
        let hess = Matrix2::new(
            2.0 * (da.dot(&da) + diff.dot(&dda)),
            -2.0 * da.dot(&db),
            -2.0 * da.dot(&db),
            2.0 * (db.dot(&db) - diff.dot(&ddb)),
        );
        let newton = hess
            .try_inverse()
            .filter(|_| hess[(0, 0)] > 0.0 && hess.determinant() > 0.0)
            .map(|inv| -(inv * grad));
        // Steepest descent scaled by the diagonal when the Hessian is not
        // positive definite.
        let mut dir = newton.unwrap_or_else(|| {
            Vector2::new(-grad.x / hess[(0, 0)].abs().max(1.0), -grad.y / hess[(1, 1)].abs().max(1.0))
        });
        let max_step = 0.05;
        if dir.norm() > max_step {
            dir *= max_step / dir.norm();
        }
        let mut scale = 1.0;
        let mut improved = false;
        for _ in 0..40 {
            let (ta, tb) = (nu_a + scale * dir.x, nu_b + scale * dir.y);
            let ft = dist2(ta, tb);
            if ft <= f {
                nu_a = ta;
                nu_b = tb;
                f = ft;
                improved = true;
                break;
            }
            scale *= 0.5;
        }
        if !improved || (scale * dir.norm()) < 1e-13 {
            break;
        }
    }
    (nu_a, nu_b, f.sqrt())
}
