//! Quadrature rules used by the kernel and integral code.
//!
//! [`tanh_sinh`] handles algebraic endpoint singularities. The integrand
//! receives the node together with its distances to both endpoints so that
//! factors like `(1 - y)^p` can be evaluated without cancellation.

use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

const MAX_LEVEL: usize = 10;
const MIN_DIST: f64 = 1e-290;
const TINY_HALF_WIDTH: f64 = 1e-200;

/// Double-exponential quadrature of `f(y, y - a, b - y)` over `[a, b]`.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, tol: f64) -> Result<Estimate>
where
    F: Fn(f64, f64, f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::InvalidParameter(format!("bad interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let half = 0.5 * (b - a);
    let mid = a + half;
    let node_pair = |t: f64| -> Option<(f64, f64)> {
        // returns (complement 1 - x, weight) for x = tanh(pi/2 sinh t)
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u).exp();
        let c = 2.0 * e / (1.0 + e);
        if c < MIN_DIST || half * c < f64::MIN_POSITIVE {
            return None;
        }
        let w = FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
        Some((c, w))
    };
    // (signed, absolute) weighted sums
    let eval = |c: f64, w: f64| -> (f64, f64) {
        let d = half * c;
        let hi = f(b - d, b - a - d, d);
        let lo = f(a + d, d, b - a - d);
        (w * (hi + lo), w * (hi.abs() + lo.abs()))
    };
    if half < TINY_HALF_WIDTH {
        // too short for the node set: midpoint rule
        let v = f(mid, half, half) * (b - a);
        return Ok(Estimate { value: v, error: v.abs() });
    }
    let centre = f(mid, half, half) * FRAC_PI_2;
    let mut sum = centre;
    let mut abs_sum = centre.abs();
    let mut k = 1usize;
    while let Some((c, w)) = node_pair(k as f64) {
        let (s, m) = eval(c, w);
        sum += s;
        abs_sum += m;
        k += 1;
    }
    let mut estimate = sum;
    let mut h = 1.0;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut j = 1usize;
        loop {
            let t = j as f64 * h;
            match node_pair(t) {
                Some((c, w)) => {
                    let (s, m) = eval(c, w);
                    sum += s;
                    abs_sum += m;
                }
                None => break,
            }
            j += 2;
        }
        let next = sum * h * half;
        if !next.is_finite() {
            return Err(Error::NonConvergence("non-finite integrand".into()));
        }
        let diff = (next - estimate).abs();
        estimate = next;
        if level >= 3 && diff <= tol * next.abs().max(1e-300) {
            return Ok(Estimate { value: next, error: diff });
        }
        // cancelling integrands: stop at the rounding floor of the L1 mass
        if level >= 4 && diff <= 1e-14 * abs_sum * h * half {
            return Ok(Estimate { value: next, error: diff });
        }
    }
    Err(Error::NonConvergence(format!("tanh-sinh did not reach tolerance {tol:e} on [{a}, {b}]")))
}

/// Convenience wrapper for integrands that only need the node.
pub fn tanh_sinh_plain<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Estimate> {
    tanh_sinh(|y, _, _| f(y), a, b, tol)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Fixed-order Gauss-Legendre on `[a, b]`.
pub fn gauss_legendre_fixed<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let half = 0.5 * (b - a);
    let mid = a + half;
    rule.0.iter().zip(&rule.1).map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
}
