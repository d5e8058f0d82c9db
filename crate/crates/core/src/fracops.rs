//! Reference fractional operators: power-law closed forms, numeric
//! Riemann-Liouville integrals and the Grunwald-Letnikov difference.

use crate::error::{invalid, Error, Result};
use crate::exec::{map_range, Execution};
use crate::quad::tanh_sinh;
use crate::specfun::{gamma_ratio, reciprocal_gamma};
use serde::{Deserialize, Serialize};

/// Order `nu` split as `nu = n - mu` with integer `n` and `mu >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalOrder {
    pub nu: f64,
    pub n: u32,
    pub mu: f64,
}

impl FractionalOrder {
    /// Smallest `n >= nu` (`n = 0` for `nu <= 0`).
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() {
            return invalid(format!("order {nu} is not finite"));
        }
        let n = nu.ceil().max(0.0);
        Ok(Self { nu, n: n as u32, mu: n - nu })
    }

    /// Like [`FractionalOrder::new`] but takes `n = nu + 1` at integer `nu`,
    /// forcing the fractional code path.
    pub fn fractional_path(nu: f64) -> Result<Self> {
        let mut o = Self::new(nu)?;
        if nu > 0.0 && nu == nu.round() {
            o.n += 1;
            o.mu += 1.0;
        }
        Ok(o)
    }
}

/// Uniformly sampled signal `f(x0 + k delta)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSignal {
    pub x0: f64,
    pub delta: f64,
    pub samples: Vec<f64>,
    /// `f(x) = 0` for `x < x0`.
    pub causal: bool,
}

impl SampledSignal {
    pub fn new(x0: f64, delta: f64, samples: Vec<f64>, causal: bool) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return invalid(format!("step {delta} must be positive"));
        }
        if samples.is_empty() {
            return invalid("signal has no samples");
        }
        Ok(Self { x0, delta, samples, causal })
    }

    /// Samples a function on `x0 + k delta`, `k = 0..len`.
    pub fn from_fn<F: Fn(f64) -> f64>(x0: f64, delta: f64, len: usize, causal: bool, f: F) -> Result<Self> {
        let samples = (0..len).map(|k| f(x0 + k as f64 * delta)).collect();
        Self::new(x0, delta, samples, causal)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn x(&self, index: usize) -> f64 {
        self.x0 + index as f64 * self.delta
    }

    /// Sample at a signed index; history before the origin is zero for
    /// causal signals and an error otherwise.
    pub fn at(&self, index: isize) -> Result<f64> {
        if index >= 0 && (index as usize) < self.samples.len() {
            return Ok(self.samples[index as usize]);
        }
        if index < 0 && self.causal {
            return Ok(0.0);
        }
        Err(Error::IndexOutOfRange(format!("sample {index} outside 0..{}", self.samples.len())))
    }
}

/// Closed form `R^{-mu}[x^alpha] = Gamma(alpha+1)/Gamma(alpha+mu+1) x^(alpha+mu)`.
pub fn rl_power(alpha: f64, mu: f64, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return invalid(format!("x = {x} must be positive"));
    }
    Ok(gamma_ratio(alpha + 1.0, alpha + mu + 1.0)? * x.powf(alpha + mu))
}

/// Closed form `W^{-mu}[x^alpha]`.
pub fn weyl_power(alpha: f64, mu: f64, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return invalid(format!("x = {x} must be positive"));
    }
    Ok(gamma_ratio(-alpha - mu, -alpha)? * x.powf(alpha + mu))
}

/// `1/Gamma(mu) * int_lower^x f(y) (x - y)^(mu - 1) dy`.
pub fn rl_integral_numeric<F: Fn(f64) -> f64>(f: F, mu: f64, x: f64, lower: f64) -> Result<f64> {
    if mu <= 0.0 {
        return invalid(format!("integration order {mu} must be positive"));
    }
    if x < lower {
        return invalid("x below the lower limit");
    }
    let span = x - lower;
    let t_max = span.powf(mu);
    let inv = 1.0 / mu;
    // y = x - t^(1/mu), so (x - y)^(mu-1) dy = dt / mu; y - lower from the distance to t_max
    let r = tanh_sinh(|_, _, to_end| f(lower - span * ((-to_end / t_max).ln_1p() * inv).exp_m1()), 0.0, t_max, 1e-11)?;
    Ok(r.value * inv * reciprocal_gamma(mu))
}

/// Grunwald-Letnikov coefficients `(-nu)_k / k!`, `k < len`.
pub fn gl_coefficients(nu: f64, len: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(len);
    let mut v = 1.0;
    for k in 0..len {
        if k > 0 {
            v *= (k as f64 - 1.0 - nu) / k as f64;
        }
        c.push(v);
    }
    c
}

fn gl_dot(signal: &SampledSignal, coeffs: &[f64], at_index: usize, terms: usize) -> f64 {
    coeffs[..terms].iter().enumerate().map(|(k, c)| c * signal.samples[at_index - k]).sum()
}

fn gl_terms(signal: &SampledSignal, at_index: usize, terms: usize) -> Result<usize> {
    if terms == 0 {
        return invalid("terms must be at least 1");
    }
    if at_index >= signal.len() {
        return Err(Error::IndexOutOfRange(format!("index {at_index} beyond {} samples", signal.len())));
    }
    if terms > at_index + 1 {
        if signal.causal {
            return Ok(at_index + 1);
        }
        return Err(Error::IndexOutOfRange(format!(
            "{terms} terms need history before sample 0 of a non-causal signal"
        )));
    }
    Ok(terms)
}

/// `delta^-nu * sum_{k < terms} (-nu)_k/k! f(x - k delta)` at sample `at_index`.
pub fn gl_difference(signal: &SampledSignal, nu: f64, at_index: usize, terms: usize) -> Result<f64> {
    let terms = gl_terms(signal, at_index, terms)?;
    let c = gl_coefficients(nu, terms);
    Ok(signal.delta.powf(-nu) * gl_dot(signal, &c, at_index, terms))
}

/// Applies [`gl_difference`] at every sample that has enough history.
///
/// Entries without history are `None` for non-causal signals.
pub fn gl_filter(signal: &SampledSignal, nu: f64, terms: usize, exec: Execution) -> Vec<Option<f64>> {
    let c = gl_coefficients(nu, terms.min(signal.len()).max(1));
    let scale = signal.delta.powf(-nu);
    map_range(exec, signal.len(), |i| {
        let t = gl_terms(signal, i, terms).ok()?;
        Some(scale * gl_dot(signal, &c, i, t))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn orders() {
        let o = FractionalOrder::new(1.3).unwrap();
        assert_eq!(o.n, 2);
        assert_relative_eq!(o.mu, 0.7, max_relative = 1e-15);
        assert_eq!(FractionalOrder::new(2.0).unwrap().n, 2);
        assert_eq!(FractionalOrder::fractional_path(2.0).unwrap().n, 3);
        assert_eq!(FractionalOrder::new(-0.5).unwrap().n, 0);
    }

    #[test]
    fn power_laws() {
        assert_relative_eq!(rl_power(1.0, 1.0, 1.0).unwrap(), 0.5);
        assert_relative_eq!(rl_power(1.0, -0.5, 1.0).unwrap(), std::f64::consts::FRAC_2_SQRT_PI, max_relative = 1e-14);
        assert_relative_eq!(rl_power(2.0, -0.5, 4.0).unwrap(), 12.036_044_449_018_8, max_relative = 1e-13);
        assert_relative_eq!(weyl_power(-0.75, 0.25, 1.0).unwrap(), 1.446_409_084_632_077, max_relative = 1e-13);
        assert_relative_eq!(weyl_power(-1.0, 0.5, 1.0).unwrap(), std::f64::consts::PI.sqrt(), max_relative = 1e-14);
        let (a, m) = (-0.6, 0.3);
        let ratio = weyl_power(a, m, 2.0).unwrap() / rl_power(a, m, 2.0).unwrap();
        let pi = std::f64::consts::PI;
        assert_relative_eq!(ratio, (a * pi).sin() / ((a + m) * pi).sin(), max_relative = 1e-13);
    }

    #[test]
    fn numeric_integral_examples() {
        assert_relative_eq!(
            rl_integral_numeric(|_| 1.0, 0.5, 1.0, 0.0).unwrap(),
            std::f64::consts::FRAC_2_SQRT_PI,
            max_relative = 1e-9
        );
        assert_relative_eq!(rl_integral_numeric(|y| y, 1.0, 2.0, 0.0).unwrap(), 2.0, max_relative = 1e-9);
        assert_relative_eq!(
            rl_integral_numeric(|y| y * y, 0.5, 1.0, 0.0).unwrap(),
            0.601_802_222_450_940_1,
            max_relative = 1e-9
        );
    }

    #[test]
    fn gl_examples() {
        let s = SampledSignal::from_fn(0.0, 0.1, 20, false, |x| x.sin()).unwrap();
        assert_eq!(gl_difference(&s, 0.0, 10, 5).unwrap(), s.samples[10]);
        let d = gl_difference(&s, 1.0, 10, 5).unwrap();
        assert_relative_eq!(d, (s.samples[10] - s.samples[9]) / 0.1, max_relative = 1e-13);
        assert!(gl_difference(&s, 0.5, 3, 10).is_err());
    }

    #[test]
    fn gl_filter_matches_pointwise() {
        let s = SampledSignal::from_fn(0.0, 0.05, 40, true, |x| x * x).unwrap();
        let all = gl_filter(&s, 0.5, 40, Execution::Parallel);
        for (i, v) in all.iter().enumerate() {
            assert_eq!(v.unwrap(), gl_difference(&s, 0.5, i, 40).unwrap());
        }
    }
}
