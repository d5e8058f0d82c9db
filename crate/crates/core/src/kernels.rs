//! Continuous approximate fractional derivatives built on Jacobi and
//! Laguerre weights.
//!
//! The operator is `W[f](x) = delta^-nu * int f(x + delta y) K(y) dy` with
//! `K` supported on `[-1, inf)`. On `(-1, 1)` the kernel carries the Jacobi
//! weight shape; for `y > 1` it is a fractional tail that vanishes at
//! integer order. `W` is a right-sided (Weyl) derivative: at `nu = n` it
//! equals `(-1)^n d^n/dx^n` on polynomials of degree `n`.
//!
//! The kernel is continuous at `y = 1` and its Fourier transform `delta^-nu * int K(y) e^{-i omega delta y} dy` is
//! [`crate::transfer::jacobi_transfer`].

use crate::error::{invalid, Error, Result};
use crate::exec::{map_range, map_slice, Execution};
use crate::fracops::SampledSignal;
use crate::quad::tanh_sinh;
use crate::specfun::{gamma, gamma_ratio, gauss_2f1_complement, kummer_m_scaled, reciprocal_gamma};
use serde::{Deserialize, Serialize};

const TAIL_TARGET: f64 = 1e-8;
const TAIL_LIMIT: f64 = 1e9;
const QUAD_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiKernelParams {
    pub alpha: f64,
    pub beta: f64,
    pub n: u32,
    pub nu: f64,
    pub delta: f64,
}

impl JacobiKernelParams {
    pub fn new(alpha: f64, beta: f64, n: u32, nu: f64, delta: f64) -> Result<Self> {
        let p = Self { alpha, beta, n, nu, delta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > -1.0 && self.beta > -1.0) {
            return invalid(format!("alpha = {}, beta = {} must exceed -1", self.alpha, self.beta));
        }
        if self.n == 0 {
            return invalid("polynomial degree n must be at least 1");
        }
        if !(self.nu <= self.n as f64) || !self.nu.is_finite() {
            return invalid(format!("order nu = {} must not exceed n = {}", self.nu, self.n));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return invalid(format!("delta = {} must be positive", self.delta));
        }
        Ok(())
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    fn integer_order(&self) -> bool {
        self.nu == self.nu.round() && self.nu >= 0.0
    }
}

/// `h_n / k_n` for Jacobi polynomials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolynomialNormalization {
    pub hn_over_kn: f64,
}

impl PolynomialNormalization {
    pub fn jacobi(alpha: f64, beta: f64, n: u32) -> Result<Self> {
        let n = n as f64;
        let b = gamma(n + alpha + 1.0)? * gamma_ratio(n + beta + 1.0, 2.0 * n + alpha + beta + 2.0)?;
        Ok(Self { hn_over_kn: (n + alpha + beta + 1.0).exp2() * b })
    }
}

/// Jacobi polynomial `P_n^{(alpha, beta)}(x)` by three-term recurrence.
pub fn jacobi_polynomial(n: u32, alpha: f64, beta: f64, x: f64) -> f64 {
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = 0.5 * (alpha - beta + (alpha + beta + 2.0) * x);
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + alpha + beta;
        let a1 = 2.0 * k * (k + alpha + beta) * (s - 2.0);
        let a2 = (s - 1.0) * (alpha * alpha - beta * beta);
        let a3 = (s - 2.0) * (s - 1.0) * s;
        let a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * s;
        let p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `Gamma(2n+a+b+2) n! / (Gamma(n+a+1) Gamma(n+b+1) 2^(n+a+b+1))`.
fn derivative_constant(n: u32, alpha: f64, beta: f64) -> Result<f64> {
    let nf = n as f64;
    Ok(gamma_ratio(2.0 * nf + alpha + beta + 2.0, nf + alpha + 1.0)? * gamma_ratio(nf + 1.0, nf + beta + 1.0)?
        / (nf + alpha + beta + 1.0).exp2())
}

/// Interior branch at `1 + y = d_lo`, `1 - y = d_hi`.
fn interior(p: &JacobiKernelParams, d_lo: f64, d_hi: f64) -> Result<f64> {
    let n = p.nf();
    let (a, b, nu) = (p.alpha, p.beta, p.nu);
    if nu == n {
        // (-1)^n times the orthogonal-derivative kernel
        let y = if d_lo < 1.0 { d_lo - 1.0 } else { 1.0 - d_hi };
        let sign = if p.n.is_multiple_of(2) { 1.0 } else { -1.0 };
        return Ok(sign
            * derivative_constant(p.n, a, b)?
            * d_hi.powf(a)
            * d_lo.powf(b)
            * jacobi_polynomial(p.n, a, b, y));
    }
    let pre =
        gamma_ratio(2.0 * n + a + b + 2.0, n + a + 1.0)? * reciprocal_gamma(n - nu + b + 1.0) / (n + b + 1.0).exp2();
    // 2F1(n+b+1, -a-n; n-nu+b+1; (1+y)/2), the Euler transform of the
    // weight-shaped form (1-y)^(n+a-nu) 2F1(-nu, 2n-nu+a+b+1; n-nu+b+1; (1+y)/2)
    let f = gauss_2f1_complement(n + b + 1.0, -a - n, n - nu + b + 1.0, 0.5 * d_hi)?;
    Ok(pre * d_lo.powf(n + b - nu) * f)
}

/// Tail branch at `y - 1 = d`.
fn tail(p: &JacobiKernelParams, d: f64) -> Result<f64> {
    if p.integer_order() {
        return Ok(0.0);
    }
    let n = p.nf();
    let (a, b, nu) = (p.alpha, p.beta, p.nu);
    let one_plus_y = 2.0 + d;
    let f = gauss_2f1_complement(nu + 1.0, n + b + 1.0, 2.0 * n + a + b + 2.0, d / one_plus_y)?;
    Ok(reciprocal_gamma(-nu) * one_plus_y.powf(-nu - 1.0) * f)
}

/// Shape of the approximate fractional Jacobi kernel, without `delta` factors.
pub fn jacobi_kernel(params: &JacobiKernelParams, y: f64) -> Result<f64> {
    params.validate()?;
    if y < -1.0 {
        Ok(0.0)
    } else if y < 1.0 {
        interior(params, 1.0 + y, 1.0 - y)
    } else if y > 1.0 {
        tail(params, y - 1.0)
    } else {
        // continuous at y = 1 when n + alpha - nu > 0
        if params.nf() + params.alpha - params.nu > 0.0 {
            interior(params, 2.0, 0.0)
        } else {
            Ok(f64::INFINITY)
        }
    }
}

/// Jacobi parameters for the Gegenbauer weight `(1 - y^2)^(alpha_g - 1/2)`.
pub fn gegenbauer_legendre_params(alpha_g: f64, n: u32, nu: f64, delta: f64) -> Result<JacobiKernelParams> {
    if alpha_g <= -0.5 {
        return invalid(format!("Gegenbauer parameter {alpha_g} must exceed -1/2"));
    }
    JacobiKernelParams::new(alpha_g - 0.5, alpha_g - 0.5, n, nu, delta)
}

/// Laguerre kernel `y^(n-nu+alpha) e^-y M(-nu; n-nu+alpha+1; y) / Gamma(n-nu+alpha+1)`.
pub fn laguerre_kernel(alpha: f64, n: u32, nu: f64, y: f64) -> Result<f64> {
    if alpha <= -1.0 {
        return invalid(format!("alpha = {alpha} must exceed -1"));
    }
    if nu > n as f64 {
        return invalid(format!("order nu = {nu} must not exceed n = {n}"));
    }
    if y < 0.0 {
        return invalid(format!("Laguerre kernel needs y >= 0, got {y}"));
    }
    let c = n as f64 - nu + alpha + 1.0;
    if y == 0.0 {
        return Ok(if c > 1.0 {
            0.0
        } else if c == 1.0 {
            reciprocal_gamma(c)
        } else {
            f64::INFINITY
        });
    }
    Ok(y.powf(c - 1.0) * kummer_m_scaled(-nu, c, y)? * reciprocal_gamma(c))
}

/// Value of a kernel integral with its error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEstimate {
    pub value: f64,
    /// Quadrature error estimate.
    pub quad_error: f64,
    /// Bound on the neglected tail beyond the last integrated point.
    pub tail_bound: f64,
}

struct TailResult {
    value: f64,
    error: f64,
    bound: f64,
}

/// Integrates `g(start + d)` over `d >= 0` in doubling chunks.
///
/// `bound(Y)` estimates what lies beyond `start + Y`. Stops when the bound
/// falls below `target`, at `cutoff`, or reports a growth violation when
/// chunk contributions stop decreasing.
fn tail_chunks<G, B>(g: G, first: f64, cutoff: Option<f64>, target: f64, bound: B) -> Result<TailResult>
where
    G: Fn(f64) -> Result<f64>,
    B: Fn(f64) -> Result<f64>,
{
    let mut lo = 0.0;
    let mut hi = first;
    let mut value = 0.0;
    let mut error = 0.0;
    let mut mags: Vec<f64> = Vec::new();
    loop {
        if let Some(c) = cutoff {
            hi = hi.min(c);
        }
        let failure = std::cell::RefCell::new(None);
        let r = tanh_sinh(
            |_, da, _| match g(lo + da) {
                Ok(v) => v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            },
            lo,
            hi,
            QUAD_TOL,
        )?;
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        value += r.value;
        error += r.error;
        mags.push(r.value.abs());
        let k = mags.len();
        if k >= 8 && mags[k - 5..].windows(2).all(|w| w[1] >= w[0]) && mags[k - 1] > 0.0 {
            return Err(Error::GrowthCondition("tail contributions are not decreasing; f grows too fast".into()));
        }
        let b = bound(hi)?;
        if cutoff.is_some_and(|c| hi >= c) || b <= target || hi >= TAIL_LIMIT {
            return Ok(TailResult { value, error, bound: b });
        }
        let width = (hi - lo).max(first);
        lo = hi;
        hi += (2.0 * width).min(1024.0).max(width);
    }
}

fn integrate<F>(f: F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: Fn(f64, f64, f64) -> Result<f64>,
{
    let failure = std::cell::RefCell::new(None);
    let r = tanh_sinh(
        |y, da, db| match f(y, da, db) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        a,
        b,
        QUAD_TOL,
    )?;
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok((r.value, r.error)),
    }
}

/// `W[f](x) = delta^-nu int_{-1}^{inf} f(x + delta y) K(y) dy`.
///
/// Without `tail_cutoff` the tail is integrated until the estimated
/// remainder drops below `1e-8` of the interior part.
pub fn apply_kernel<F>(f: F, params: &JacobiKernelParams, x: f64, tail_cutoff: Option<f64>) -> Result<KernelEstimate>
where
    F: Fn(f64) -> f64,
{
    params.validate()?;
    if params.nu < 0.0 {
        return invalid("apply_kernel needs nu >= 0");
    }
    if let Some(c) = tail_cutoff {
        if !(c > 1.0) {
            return invalid(format!("tail cutoff {c} must exceed 1"));
        }
    }
    let d = params.delta;
    // at nu = n the kernel has zero mass; removing f(x) reduces cancellation
    let f0 = if params.nu == params.nf() { f(x) } else { 0.0 };
    let (inner, inner_err) = integrate(|y, da, db| Ok((f(x + d * y) - f0) * interior(params, da, db)?), -1.0, 1.0)?;
    let scale = d.powf(-params.nu);
    if params.integer_order() {
        return Ok(KernelEstimate { value: scale * inner, quad_error: scale * inner_err, tail_bound: 0.0 });
    }
    let target = TAIL_TARGET * inner.abs().max(1e-300);
    let t = tail_chunks(
        |dist| Ok(f(x + d * (1.0 + dist)) * tail(params, dist)?),
        1.0,
        tail_cutoff.map(|c| c - 1.0),
        target,
        |dist| {
            let y = 1.0 + dist;
            Ok((f(x + d * y) * tail(params, dist)?).abs() * (1.0 + y) / params.nu)
        },
    )?;
    Ok(KernelEstimate {
        value: scale * (inner + t.value),
        quad_error: scale * (inner_err + t.error),
        tail_bound: scale * t.bound,
    })
}

/// [`apply_kernel`] at many points.
pub fn apply_kernel_many<F>(
    f: F,
    params: &JacobiKernelParams,
    xs: &[f64],
    tail_cutoff: Option<f64>,
    exec: Execution,
) -> Vec<Result<KernelEstimate>>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    map_slice(exec, xs, |&x| apply_kernel(&f, params, x, tail_cutoff))
}

/// Laguerre analogue: `delta^-nu int_0^inf f(x + delta y) L(y) dy`.
pub fn apply_laguerre_kernel<F>(
    f: F,
    alpha: f64,
    n: u32,
    nu: f64,
    delta: f64,
    x: f64,
    tail_cutoff: Option<f64>,
) -> Result<KernelEstimate>
where
    F: Fn(f64) -> f64,
{
    if !(delta > 0.0) {
        return invalid(format!("delta = {delta} must be positive"));
    }
    if nu < 0.0 {
        return invalid("apply_laguerre_kernel needs nu >= 0");
    }
    laguerre_kernel(alpha, n, nu, 1.0)?;
    let (head, head_err) = integrate(|y, _, _| Ok(f(x + delta * y) * laguerre_kernel(alpha, n, nu, y)?), 0.0, 1.0)?;
    let decay = if nu > 0.0 { nu } else { 1.0 };
    let t = tail_chunks(
        |dist| Ok(f(x + delta * (1.0 + dist)) * laguerre_kernel(alpha, n, nu, 1.0 + dist)?),
        1.0,
        tail_cutoff.map(|c| c - 1.0),
        TAIL_TARGET * head.abs().max(1e-300),
        |dist| {
            let y = 1.0 + dist;
            let k = laguerre_kernel(alpha, n, nu, y)?;
            Ok((f(x + delta * y) * k).abs() * y / decay)
        },
    )?;
    let scale = delta.powf(-nu);
    Ok(KernelEstimate {
        value: scale * (head + t.value),
        quad_error: scale * (head_err + t.error),
        tail_bound: scale * t.bound,
    })
}

/// Integer-order orthogonal derivative `D_delta^n[f](x)`.
pub fn orthogonal_derivative<F>(f: F, n: u32, alpha: f64, beta: f64, delta: f64, x: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    JacobiKernelParams::new(alpha, beta, n.max(1), 0.0, delta)?;
    let c = derivative_constant(n, alpha, beta)?;
    let f0 = if n > 0 { f(x) } else { 0.0 };
    let (v, _) = integrate(
        |y, da, db| Ok((f(x + delta * y) - f0) * db.powf(alpha) * da.powf(beta) * jacobi_polynomial(n, alpha, beta, y)),
        -1.0,
        1.0,
    )?;
    Ok(c * v * delta.powi(-(n as i32)))
}

/// Brute-force evaluation of the fractional Jacobi derivative as a nested
/// double integral; slow, for cross-checking [`apply_kernel`].
pub fn oracle_double_integral<F>(f: F, params: &JacobiKernelParams, x: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    params.validate()?;
    let (a, b, n, nu, d) = (params.alpha, params.beta, params.n, params.nu, params.delta);
    let mu = n as f64 - nu;
    if mu <= 0.0 {
        return invalid("the double-integral oracle needs nu < n");
    }
    let norm = PolynomialNormalization::jacobi(a, b, n)?;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let pre = sign * gamma(n as f64 + 1.0)? * reciprocal_gamma(mu) / norm.hn_over_kn * d.powf(-nu);
    let weight = |u: f64, du_lo: f64, du_hi: f64| jacobi_polynomial(n, a, b, u) * du_hi.powf(a) * du_lo.powf(b);
    let inner_tol = 1e-12;
    // J1(y) = int_{-1}^{y} p w (y - u)^(mu-1) du
    let j1 = |y: f64, y_lo: f64| -> Result<f64> {
        let r =
            tanh_sinh(|u, du_lo, to_y| weight(u, du_lo, 1.0 - u) * to_y.powf(mu - 1.0), -1.0, -1.0 + y_lo, inner_tol)?;
        let _ = y;
        Ok(r.value)
    };
    // J2(y) = int_{-1}^{1} p w (y - u)^(mu-1) du, y = 1 + dist
    let j2 = |dist: f64| -> Result<f64> {
        let r =
            tanh_sinh(|u, du_lo, du_hi| weight(u, du_lo, du_hi) * (dist + du_hi).powf(mu - 1.0), -1.0, 1.0, inner_tol)?;
        Ok(r.value)
    };
    let (inner, _) = integrate(|y, da, _| Ok(f(x + d * y) * j1(y, da)?), -1.0, 1.0)?;
    let t = tail_chunks(
        |dist| Ok(f(x + d * (1.0 + dist)) * j2(dist)?),
        1.0,
        None,
        1e-9 * inner.abs().max(1e-300),
        |dist| Ok((f(x + d * (1.0 + dist)) * j2(dist)?).abs() * (2.0 + dist) / nu.max(1e-3)),
    )?;
    Ok(pre * (inner + t.value))
}

/// A continuous kernel discretized for a uniformly sampled signal.
///
/// The signal is replaced by its piecewise-linear interpolant, zero beyond
/// the last sample, and the kernel integral becomes the FIR filter
/// `sum_j taps[j] f(x_i + (first + j) h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledKernel {
    /// Offset of `taps[0]` in samples (negative looks back).
    pub first: i64,
    pub taps: Vec<f64>,
    /// Samples ahead that must exist for a valid output.
    pub lookahead: usize,
}

impl SampledKernel {
    /// Output at every sample; `None` where the kernel's core reaches past
    /// the data (before the start only for non-causal signals).
    pub fn apply(&self, signal: &SampledSignal, exec: Execution) -> Vec<Option<f64>> {
        let len = signal.len() as i64;
        map_range(exec, signal.len(), |i| {
            let i = i as i64;
            if i + self.lookahead as i64 >= len || (!signal.causal && i + self.first < 0) {
                return None;
            }
            let mut acc = 0.0;
            for (j, c) in self.taps.iter().enumerate() {
                let k = i + self.first + j as i64;
                if k >= len {
                    break;
                }
                if k >= 0 {
                    acc += c * signal.samples[k as usize];
                }
            }
            Some(acc)
        })
    }
}

/// Integral of `kernel` against the hat function at `j r` on the sample
/// lattice, split at the kernel's breakpoints. `kernel(y, a, b)` receives
/// the piece `[a, b]` so it can use exact endpoint distances.
fn hat_tap<K>(kernel: &K, j: i64, r: f64, lo: f64, hi: Option<f64>, breaks: &[f64]) -> Result<f64>
where
    K: Fn(f64, f64, f64, f64, f64) -> Result<f64>,
{
    // lattice points that round onto a breakpoint are moved onto it
    let snap = |v: f64| breaks.iter().copied().find(|b| (v - b).abs() <= 1e-9 * r).unwrap_or(v);
    let (left, centre, right) = (snap((j - 1) as f64 * r), snap(j as f64 * r), snap((j + 1) as f64 * r));
    let mut cuts = vec![left.max(lo)];
    cuts.extend(breaks.iter().copied().chain([centre]).filter(|&b| b > left.max(lo) && b < right));
    cuts.sort_by(f64::total_cmp);
    cuts.push(hi.map_or(right, |h| right.min(h)));
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let (v, _) = integrate(
            |y, da, db| {
                let hat = if y <= centre { (y - left) / (centre - left) } else { (right - y) / (right - centre) };
                Ok(hat * kernel(y, a, b, da, db)?)
            },
            a,
            b,
        )?;
        total += v;
    }
    Ok(total)
}

/// [`apply_kernel`] for a signal sampled with spacing `h`, as FIR taps.
///
/// `tail_samples` caps the taps beyond `x + delta` (fractional orders only).
pub fn jacobi_sampled(
    params: &JacobiKernelParams,
    h: f64,
    tail_samples: usize,
    exec: Execution,
) -> Result<SampledKernel> {
    params.validate()?;
    if params.nu < 0.0 {
        return invalid("sampled kernels need nu >= 0");
    }
    if !(h > 0.0) {
        return invalid(format!("sample spacing {h} must be positive"));
    }
    let r = h / params.delta;
    let first = (-1.0 / r).floor() as i64;
    let core_last = (1.0 / r).ceil() as i64;
    let (last, hi) =
        if params.integer_order() { (core_last, Some(1.0)) } else { (core_last + tail_samples as i64, None) };
    let kernel = |y: f64, a: f64, b: f64, da: f64, db: f64| -> Result<f64> {
        if b <= 1.0 {
            let d_lo = if a == -1.0 { da } else { 1.0 + y };
            let d_hi = if b == 1.0 { db } else { 1.0 - y };
            interior(params, d_lo, d_hi)
        } else {
            tail(params, if a == 1.0 { da } else { y - 1.0 })
        }
    };
    let count = (last - first + 1) as usize;
    let taps = map_range(exec, count, |k| hat_tap(&kernel, first + k as i64, r, -1.0, hi, &[-1.0, 1.0]))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let scale = params.delta.powf(-params.nu);
    Ok(SampledKernel {
        first,
        taps: taps.into_iter().map(|t| t * scale).collect(),
        lookahead: core_last.max(0) as usize,
    })
}

/// [`apply_laguerre_kernel`] for a signal sampled with spacing `h`.
///
/// Outputs need data up to `x + 2 (n + alpha + 1) delta`; `tail_samples`
/// taps follow.
pub fn laguerre_sampled(
    alpha: f64,
    n: u32,
    nu: f64,
    delta: f64,
    h: f64,
    tail_samples: usize,
    exec: Execution,
) -> Result<SampledKernel> {
    if !(delta > 0.0 && h > 0.0) {
        return invalid(format!("delta = {delta} and spacing {h} must be positive"));
    }
    if nu < 0.0 {
        return invalid("sampled kernels need nu >= 0");
    }
    laguerre_kernel(alpha, n, nu, 1.0)?;
    let r = h / delta;
    let core_last = (2.0 * (n as f64 + alpha + 1.0) / r).ceil() as i64;
    let last = core_last + tail_samples as i64;
    let kernel =
        |y: f64, a: f64, _b: f64, da: f64, _db: f64| laguerre_kernel(alpha, n, nu, if a == 0.0 { da } else { y });
    let taps = map_range(exec, (last + 1) as usize, |k| hat_tap(&kernel, k as i64, r, 0.0, None, &[0.0]))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let scale = delta.powf(-nu);
    Ok(SampledKernel { first: 0, taps: taps.into_iter().map(|t| t * scale).collect(), lookahead: core_last as usize })
}
