//! Gauss–Legendre rules.

use std::f64::consts::PI;

/// Nodes and weights of the m-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    (x, w)
}

/// A rule mapped to [a, b].
pub fn mapped(rule: &(Vec<f64>, Vec<f64>), a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    rule.0.iter().zip(&rule.1).map(move |(x, w)| (c + h * x, h * w))
}

/// Panels on [0, len] graded geometrically toward 0, finest panel ending
/// at `len·ratio^levels`.
pub fn graded_panels(len: f64, ratio: f64, levels: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(levels + 1);
    let mut hi = len;
    for _ in 0..levels {
        let lo = hi * ratio;
        out.push((lo, hi));
        hi = lo;
    }
    out.push((0.0, hi));
    out
}
