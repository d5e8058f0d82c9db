//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use fracfilt::Complex64;

/// `(a)_k` by product.
pub fn poch(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |p, i| p * (a + i as f64))
}

pub fn factorial(k: usize) -> f64 {
    poch(1.0, k)
}

/// Hahn polynomial as the terminating 3F2 at unit argument.
pub fn hahn_q(n: usize, x: usize, a: f64, b: f64, big_n: usize) -> f64 {
    (0..=n)
        .map(|k| {
            poch(-(n as f64), k) * poch(n as f64 + a + b + 1.0, k) * poch(-(x as f64), k)
                / (poch(a + 1.0, k) * poch(-(big_n as f64), k) * factorial(k))
        })
        .sum()
}

pub fn hahn_w(x: usize, a: f64, b: f64, big_n: usize) -> f64 {
    poch(a + 1.0, x) * poch(b + 1.0, big_n - x) / (factorial(x) * factorial(big_n - x))
}

/// `k_n n! / h_n`, with `h_n` summed directly.
pub fn lsq_scale(n: usize, a: f64, b: f64, big_n: usize) -> f64 {
    let h: f64 = (0..=big_n).map(|x| hahn_w(x, a, b, big_n) * hahn_q(n, x, a, b, big_n).powi(2)).sum();
    let k = poch(n as f64 + a + b + 1.0, n) / (poch(a + 1.0, n) * poch(-(big_n as f64), n));
    k * factorial(n) / h
}

/// Taps of the fractional sum of order `n - nu` applied to the least-squares
/// `n`-th difference: `(forward[0..=N], backward[1..=M])`, delta factors included.
pub fn brute_taps(a: f64, b: f64, big_n: usize, n: usize, nu: f64, delta: f64, history: usize) -> (Vec<f64>, Vec<f64>) {
    let mu = n as f64 - nu;
    let len = big_n + history + 1;
    let mut c = vec![1.0; len];
    for k in 1..len {
        c[k] = c[k - 1] * (mu + (k - 1) as f64) / k as f64;
    }
    let scale = lsq_scale(n, a, b, big_n) * delta.powf(-nu);
    let qw: Vec<f64> = (0..=big_n).map(|j| hahn_q(n, j, a, b, big_n) * hahn_w(j, a, b, big_n)).collect();
    let forward = (0..=big_n).map(|p| scale * (p..=big_n).map(|j| c[j - p] * qw[j]).sum::<f64>()).collect();
    let backward = (1..=history).map(|m| scale * (0..=big_n).map(|j| c[j + m] * qw[j]).sum::<f64>()).collect();
    (forward, backward)
}

/// `((1 - e^{i t}) / delta)^(nu - n) * (k_n n!/(h_n delta^n)) * sum_x Q_n(x) w(x) e^{-i x t}`.
pub fn brute_transfer(a: f64, b: f64, big_n: usize, n: usize, nu: f64, delta: f64, omega: f64) -> Complex64 {
    let t = omega * delta;
    let base = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, t)) / delta;
    let sum: Complex64 = (0..=big_n)
        .map(|x| hahn_q(n, x, a, b, big_n) * hahn_w(x, a, b, big_n) * Complex64::from_polar(1.0, -(x as f64) * t))
        .sum();
    base.powf(nu - n as f64) * sum * (lsq_scale(n, a, b, big_n) / delta.powi(n as i32))
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}
