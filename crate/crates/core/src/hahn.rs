//! Discrete fractional differences from Hahn polynomials.
//!
//! A filter with window `N`, degree `n` and order `nu` combines a backward
//! fractional sum of order `n - nu` with the least-squares `n`-th difference
//! on the `N + 1` points `x, x + delta, ..., x + N delta`:
//!
//! `I[f](x) = prefactor * (sum_{m=1}^{M} J1(m) f(x - m delta) + sum_{m=0}^{N} J2(m) f(x + m delta))`.
//!
//! The output at `x` approximates the Riemann-Liouville derivative at
//! `x + s delta` with `s` given by [`evaluation_offset`].

use crate::error::{invalid, Error, Result};
use crate::exec::{map_range, Execution};
use crate::fracops::{gl_coefficients, SampledSignal};
use crate::specfun::{gamma_ratio, hyp_3f2_unit, reciprocal_gamma};
use serde::{Deserialize, Serialize};
use std::fmt::Write;

/// Largest backward history chosen by [`default_history`].
pub const MAX_DEFAULT_HISTORY: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HahnFilterParams {
    pub alpha: f64,
    pub beta: f64,
    /// Window length `N`; the forward stencil has `N + 1` taps.
    pub window: u32,
    /// Polynomial degree `n <= N`.
    pub n: u32,
    pub nu: f64,
    pub delta: f64,
    /// Backward history `M`.
    pub history: usize,
}

impl HahnFilterParams {
    pub fn new(alpha: f64, beta: f64, window: u32, n: u32, nu: f64, delta: f64, history: usize) -> Result<Self> {
        let p = Self { alpha, beta, window, n, nu, delta, history };
        p.validate()?;
        Ok(p)
    }

    /// Gram (`alpha = beta = 0`) parameters with the default history.
    pub fn gram(window: u32, n: u32, nu: f64, delta: f64) -> Result<Self> {
        Self::new(0.0, 0.0, window, n, nu, delta, default_history(window, n, nu))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > -1.0 && self.beta > -1.0) {
            return invalid(format!("alpha = {}, beta = {} must exceed -1", self.alpha, self.beta));
        }
        if self.n == 0 || self.n > self.window {
            return invalid(format!("degree n = {} must be in 1..=N = {}", self.n, self.window));
        }
        if !(self.nu.is_finite() && self.nu <= self.n as f64) {
            return invalid(format!("order nu = {} must not exceed n = {}", self.nu, self.n));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return invalid(format!("delta = {} must be positive", self.delta));
        }
        if self.history == 0 {
            return invalid("history M must be at least 1");
        }
        Ok(())
    }
}

/// `16 N / min(1, n - nu)`, capped at [`MAX_DEFAULT_HISTORY`].
pub fn default_history(window: u32, n: u32, nu: f64) -> usize {
    let gap = (n as f64 - nu).clamp(1e-3, 1.0);
    ((16.0 * window as f64 / gap).ceil() as usize).clamp(1, MAX_DEFAULT_HISTORY)
}

/// Tap weights of a discrete filter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterWeights {
    /// Coefficient of `f(x + m delta)`, `m = 0..=N`.
    pub forward: Vec<f64>,
    /// Coefficient of `f(x - m delta)`, `m = 1..=M` (index `m - 1`).
    pub backward: Vec<f64>,
    pub prefactor: f64,
}

impl FilterWeights {
    pub fn window(&self) -> usize {
        self.forward.len() - 1
    }

    pub fn history(&self) -> usize {
        self.backward.len()
    }

    /// `(offset, prefactor * tap)` sorted by offset; backward taps have
    /// negative offsets.
    pub fn effective_taps(&self) -> Vec<(i64, f64)> {
        let mut taps: Vec<(i64, f64)> =
            self.backward.iter().enumerate().rev().map(|(i, c)| (-(i as i64) - 1, self.prefactor * c)).collect();
        taps.extend(self.forward.iter().enumerate().map(|(m, c)| (m as i64, self.prefactor * c)));
        taps
    }

    /// Plain-text tap list, one `m coefficient` pair per line.
    pub fn export_text(&self) -> String {
        let mut s = String::from("# m coefficient\n");
        for (m, c) in self.effective_taps() {
            let _ = writeln!(s, "{m} {c:e}");
        }
        s
    }
}

/// Hahn polynomial `Q_n(j; alpha, beta, N)`.
pub fn hahn_polynomial(n: u32, j: u32, alpha: f64, beta: f64, window: u32) -> f64 {
    let (nf, jf, bn) = (n as f64, j as f64, window as f64);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n.min(j) {
        let k = k as f64;
        term *= (k - jf) * (k - nf) * (nf + alpha + beta + 1.0 + k) / ((alpha + 1.0 + k) * (k - bn) * (k + 1.0));
        sum += term;
    }
    sum
}

/// Hahn weight `(alpha+1)_j (beta+1)_{N-j} / (j! (N-j)!)`.
pub fn hahn_weight(j: u32, alpha: f64, beta: f64, window: u32) -> f64 {
    let mut w = 1.0;
    for i in 0..j {
        w *= (alpha + 1.0 + i as f64) / (i as f64 + 1.0);
    }
    for i in 0..window - j {
        w *= (beta + 1.0 + i as f64) / (i as f64 + 1.0);
    }
    w
}

fn sign(n: u32) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `(a)_k / k!` by product.
fn rising_over_factorial(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |p, i| p * (a + i as f64) / (i as f64 + 1.0))
}

/// Global factor `H1(n) / delta^nu`.
pub fn hahn_prefactor(p: &HahnFilterParams) -> Result<f64> {
    let (a, b, nf, bn) = (p.alpha, p.beta, p.n as f64, p.window as f64);
    let g = gamma_ratio(2.0 * nf + a + b + 2.0, bn + nf + a + b + 2.0)?
        * gamma_ratio(b + 1.0, nf + b + 1.0)?
        * gamma_ratio(bn + 1.0, 1.0)?;
    Ok(sign(p.n) * g * p.delta.powf(-p.nu))
}

/// Backward tap `J1(m)`, `m >= 1`.
pub fn j1_weight(p: &HahnFilterParams, m: usize) -> Result<f64> {
    if m == 0 {
        return invalid("backward taps start at m = 1");
    }
    let (a, b, nu) = (p.alpha, p.beta, p.nu);
    let (n, bn) = (p.n, p.window);
    // 1/(-N)_n * (1+b)_N/(N-n)! = (-1)^n (1+b)_N / N!
    let pre = sign(n) * rising_over_factorial(1.0 + b, bn);
    let k = m + n as usize;
    let coeff = gl_coefficient(nu, k);
    let kf = k as f64;
    let f = hyp_3f2_unit(
        [n as f64 - bn as f64, n as f64 + a + 1.0, kf - nu],
        [-(bn as f64) - b, kf + 1.0],
        (bn - n) as usize + 2,
    )?;
    Ok(pre * coeff * f)
}

/// `(-nu)_k / k!`.
fn gl_coefficient(nu: f64, k: usize) -> f64 {
    if k < 64 {
        return *gl_coefficients(nu, k + 1).last().unwrap();
    }
    // Gamma(k - nu) / (Gamma(-nu) Gamma(k + 1))
    let r = reciprocal_gamma(-nu);
    if r == 0.0 {
        return 0.0;
    }
    r * gamma_ratio(k as f64 - nu, k as f64 + 1.0).unwrap_or(0.0)
}

/// Forward tap `J2(m)`, `0 <= m <= N`.
pub fn j2_weight(p: &HahnFilterParams, m: usize) -> Result<f64> {
    let (a, b, nu) = (p.alpha, p.beta, p.nu);
    let (n, bn) = (p.n as usize, p.window as usize);
    if m > bn {
        return Err(Error::IndexOutOfRange(format!("forward tap {m} beyond N = {bn}")));
    }
    // (b+1)_n (a+n+1)_{N-n} / ((-N)_n (N-n)!) = (-1)^n (b+1)_n (a+n+1)_{N-n} / N!
    let mut pre = sign(p.n);
    for i in 0..n {
        pre *= (b + 1.0 + i as f64) / (i as f64 + 1.0);
    }
    for i in 0..bn - n {
        pre *= (a + n as f64 + 1.0 + i as f64) / ((n + i) as f64 + 1.0);
    }
    // sum_k (n-N)_k (b+n+1)_k (m-N)_k / ((-a-N)_k k!) * (-1)^k (-nu)_{N-m-k} / (N-m)!
    let top = (bn - m).min(bn - n);
    let coeffs = gl_coefficients(nu, bn - m + 1);
    let mut poch = 1.0;
    let mut sum = 0.0;
    for k in 0..=top {
        if k > 0 {
            let kf = (k - 1) as f64;
            poch *= (n as f64 - bn as f64 + kf) * (b + n as f64 + 1.0 + kf) * (m as f64 - bn as f64 + kf)
                / ((-a - bn as f64 + kf) * (kf + 1.0));
        }
        let j = bn - m - k;
        // (-nu)_j / (N-m)! = c_j * j! / (N-m)!
        let mut ratio = coeffs[j];
        for i in j + 1..=bn - m {
            ratio /= i as f64;
        }
        sum += poch * sign(k as u32) * ratio;
    }
    Ok(pre * sum)
}

/// Filter taps for general Hahn parameters.
pub fn hahn_weights(p: &HahnFilterParams, exec: Execution) -> Result<FilterWeights> {
    p.validate()?;
    let forward = (0..=p.window as usize).map(|m| j2_weight(p, m)).collect::<Result<Vec<_>>>()?;
    let backward = map_range(exec, p.history, |i| j1_weight(p, i + 1)).into_iter().collect::<Result<Vec<_>>>()?;
    Ok(FilterWeights { forward, backward, prefactor: hahn_prefactor(p)? })
}

/// Closed-form taps for `n = 1`, `alpha = beta = 0`.
pub fn gram_n1_weights(window: u32, nu: f64, delta: f64, history: usize) -> Result<FilterWeights> {
    HahnFilterParams::new(0.0, 0.0, window, 1, nu, delta, history)?;
    let bn = window as f64;
    let prefactor = 6.0 * reciprocal_gamma(3.0 - nu) / (bn * (bn + 1.0) * (bn + 2.0)) * delta.powf(-nu);
    let forward = (0..=window)
        .map(|m| {
            let mf = m as f64;
            Ok((2.0 * mf - bn * nu) * gamma_ratio(bn - mf - nu + 2.0, bn - mf + 1.0)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut backward = Vec::with_capacity(history);
    let mut g1 = gamma_ratio(2.0 - nu, 1.0)?;
    let mut g2 = gamma_ratio(bn + 3.0 - nu, bn + 2.0)?;
    for m in 1..=history {
        let mf = m as f64;
        if m > 1 {
            g1 *= (mf - nu) / (mf - 1.0);
            g2 *= (bn + mf - nu + 1.0) / (bn + mf);
        }
        backward.push((2.0 * bn + 2.0 * mf - 2.0 * nu - bn * nu + 2.0) * g1 - (2.0 * mf + bn * nu) * g2);
    }
    Ok(FilterWeights { forward, backward, prefactor })
}

/// Evaluation point shift `s` (in samples) of the filter output.
pub fn evaluation_offset(p: &HahnFilterParams) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    let (n, bn) = (p.n as f64, p.window as f64);
    // F(-N+n, a+n+1; -b-N; z) and its z-derivative at z = 1
    let (mut t, mut f, mut df) = (1.0, 1.0, 0.0);
    for k in 0..(p.window - p.n) {
        let k = k as f64;
        t *= (-bn + n + k) * (a + n + 1.0 + k) / ((-b - bn + k) * (k + 1.0));
        f += t;
        df += (k + 1.0) * t;
    }
    n - 0.5 * p.nu + df / f
}

/// Applies filter weights at one sample.
pub fn apply_discrete_filter(signal: &SampledSignal, weights: &FilterWeights, at_index: usize) -> Result<f64> {
    let i = at_index as isize;
    let mut fwd = 0.0;
    for (m, c) in weights.forward.iter().enumerate() {
        let idx = i + m as isize;
        if idx as usize >= signal.len() {
            return Err(Error::IndexOutOfRange(format!("forward tap reaches sample {idx}")));
        }
        fwd += c * signal.samples[idx as usize];
    }
    let mut back = 0.0;
    for (k, c) in weights.backward.iter().enumerate() {
        back += c * signal.at(i - k as isize - 1)?;
    }
    Ok(weights.prefactor * (back + fwd))
}

/// Applies the filter at every sample; `None` where taps are unavailable.
pub fn filter_signal(signal: &SampledSignal, weights: &FilterWeights, exec: Execution) -> Vec<Option<f64>> {
    map_range(exec, signal.len(), |i| apply_discrete_filter(signal, weights, i).ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hahn_orthogonality() {
        let (a, b, bn) = (0.5, 1.5, 6);
        for (p, q) in [(1, 2), (2, 3), (0, 4)] {
            let s: f64 = (0..=bn)
                .map(|j| hahn_weight(j, a, b, bn) * hahn_polynomial(p, j, a, b, bn) * hahn_polynomial(q, j, a, b, bn))
                .sum();
            assert!(s.abs() < 1e-12, "{p} {q} {s}");
        }
    }

    #[test]
    fn first_difference() {
        let w =
            hahn_weights(&HahnFilterParams::new(0.0, 0.0, 1, 1, 1.0, 0.5, 4).unwrap(), Execution::Sequential).unwrap();
        let taps = w.effective_taps();
        let get = |m: i64| taps.iter().find(|t| t.0 == m).unwrap().1;
        assert_relative_eq!(get(1), 2.0, max_relative = 1e-14);
        assert_relative_eq!(get(0), -2.0, max_relative = 1e-14);
        assert_eq!(get(-1), 0.0);
        let s = SampledSignal::from_fn(0.0, 0.5, 10, false, |x| x).unwrap();
        assert_relative_eq!(apply_discrete_filter(&s, &w, 5).unwrap(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn gram_closed_form_examples() {
        let w = gram_n1_weights(4, 0.5, 1.0, 8).unwrap();
        assert_eq!(w.forward[1], 0.0);
        let w = gram_n1_weights(1, 1.0, 1.0, 4).unwrap();
        let taps = w.effective_taps();
        assert_relative_eq!(taps.iter().find(|t| t.0 == 1).unwrap().1, 1.0, max_relative = 1e-14);
        assert_relative_eq!(taps.iter().find(|t| t.0 == 0).unwrap().1, -1.0, max_relative = 1e-14);
        assert!(w.backward.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn integer_order_has_no_tail() {
        let p = HahnFilterParams::new(0.3, 0.7, 5, 2, 2.0, 1.0, 10).unwrap();
        for m in 1..10 {
            assert_eq!(j1_weight(&p, m).unwrap(), 0.0);
        }
        assert!((0..=5).all(|m| j2_weight(&p, m).unwrap().is_finite()));
    }

    #[test]
    fn history_rules() {
        assert_eq!(default_history(4, 1, 0.5), 128);
        assert_eq!(default_history(4, 1, 1.0), MAX_DEFAULT_HISTORY);
        let s = SampledSignal::from_fn(0.0, 1.0, 6, false, |x| x).unwrap();
        let w = gram_n1_weights(2, 0.5, 1.0, 3).unwrap();
        assert!(apply_discrete_filter(&s, &w, 2).is_err());
        assert!(apply_discrete_filter(&s, &w, 3).is_ok());
        assert!(apply_discrete_filter(&s, &w, 4).is_err());
        let zero = SampledSignal::new(0.0, 1.0, vec![0.0; 12], true).unwrap();
        assert_eq!(apply_discrete_filter(&zero, &w, 1).unwrap(), 0.0);
    }

    #[test]
    fn export_lists_every_tap() {
        let w = gram_n1_weights(2, 0.5, 1.0, 3).unwrap();
        let text = w.export_text();
        assert_eq!(text.lines().count(), 1 + 3 + 3);
        assert!(text.lines().nth(1).unwrap().starts_with("-3 "));
    }
}
