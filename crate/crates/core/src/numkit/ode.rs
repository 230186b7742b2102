//! Classical fixed-step fourth-order Runge–Kutta.

/// Advances `y` from `t0` to `t1` in `steps` equal RK4 steps of
/// `y' = f(t, y)`. `f` writes the derivative into its output slice.
///
/// `abort` is consulted after every step; returning `true` stops the
/// integration early and the time reached is returned.
pub fn rk4(
    mut f: impl FnMut(f64, &[f64], &mut [f64]),
    t0: f64,
    t1: f64,
    steps: usize,
    y: &mut [f64],
    mut abort: impl FnMut(f64, &[f64]) -> bool,
) -> f64 {
    let dim = y.len();
    let h = (t1 - t0) / steps.max(1) as f64;
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut tmp = vec![0.0; dim];
    let mut t = t0;
    for step in 0..steps.max(1) {
        f(t, y, &mut k1);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        f(t + 0.5 * h, &tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        f(t + 0.5 * h, &tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = y[i] + h * k3[i];
        }
        f(t + h, &tmp, &mut k4);
        for i in 0..dim {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t = t0 + (step + 1) as f64 * h;
        if abort(t, y) {
            return t;
        }
    }
    t1
}
