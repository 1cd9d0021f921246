//! Fixed-step fourth-order Runge-Kutta over fixed-size state arrays.

/// One classical RK4 step.
pub fn rk4_step<const N: usize, F>(f: &mut F, t: f64, y: &[f64; N], h: f64) -> [f64; N]
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = f(t + h, &axpy(y, h, &k3));
    let mut out = *y;
    for j in 0..N {
        out[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    out
}

/// Fallible variant: the first error returned by the right-hand side aborts
/// the step.
pub fn try_rk4_step<const N: usize, F, E>(
    f: &mut F,
    t: f64,
    y: &[f64; N],
    h: f64,
) -> Result<[f64; N], E>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N], E>,
{
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k1))?;
    let k3 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k2))?;
    let k4 = f(t + h, &axpy(y, h, &k3))?;
    let mut out = *y;
    for j in 0..N {
        out[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    Ok(out)
}

/// Number of equal steps covering `span` with no step longer than `max_step`.
pub fn step_count(span: f64, max_step: f64) -> usize {
    if span <= 0.0 {
        return 0;
    }
    ((span / max_step).ceil() as usize).max(1)
}

fn axpy<const N: usize>(y: &[f64; N], a: f64, x: &[f64; N]) -> [f64; N] {
    let mut out = *y;
    for j in 0..N {
        out[j] += a * x[j];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_period() {
        let mut f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let n = 1000;
        let h = std::f64::consts::TAU / n as f64;
        let mut y = [1.0, 0.0];
        for k in 0..n {
            y = rk4_step(&mut f, k as f64 * h, &y, h);
        }
        assert!((y[0] - 1.0).abs() < 1e-10 && y[1].abs() < 1e-10);
    }

    #[test]
    fn fourth_order_convergence() {
        let run = |n: usize| {
            let mut f = |t: f64, y: &[f64; 1]| [y[0] * t.cos()];
            let h = 2.0 / n as f64;
            let mut y = [1.0];
            for k in 0..n {
                y = rk4_step(&mut f, k as f64 * h, &y, h);
            }
            (y[0] - 2f64.sin().exp()).abs()
        };
        let ratio = run(20) / run(40);
        assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio}");
    }

    #[test]
    fn step_count_respects_bound() {
        assert_eq!(step_count(10.0, 3.0), 4);
        assert_eq!(step_count(9.0, 3.0), 3);
        assert_eq!(step_count(0.0, 3.0), 0);
    }
}
