//! Central finite differences, for verification and diagnostics.

/// Central-difference gradient with step `h` on every coordinate.
pub fn finite_diff_gradient<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], h: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    (0..x.len())
        .map(|a| {
            y[a] = x[a] + h;
            let up = f(&y);
            y[a] = x[a] - h;
            let down = f(&y);
            y[a] = x[a];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Central-difference Hessian (four-point stencil off the diagonal).
pub fn finite_diff_hessian<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let d = x.len();
    let f0 = f(x);
    let mut y = x.to_vec();
    let mut out = vec![vec![0.0; d]; d];
    for a in 0..d {
        y[a] = x[a] + h;
        let up = f(&y);
        y[a] = x[a] - h;
        let down = f(&y);
        y[a] = x[a];
        out[a][a] = (up - 2.0 * f0 + down) / (h * h);
        for b in 0..a {
            let mut eval = |sa: f64, sb: f64| {
                y[a] = x[a] + sa * h;
                y[b] = x[b] + sb * h;
                let v = f(&y);
                y[a] = x[a];
                y[b] = x[b];
                v
            };
            let v = (eval(1.0, 1.0) - eval(1.0, -1.0) - eval(-1.0, 1.0) + eval(-1.0, -1.0)) / (4.0 * h * h);
            out[a][b] = v;
            out[b][a] = v;
        }
    }
    out
}
