//! Transfer functions, filter metrics and frequency sweeps.
//!
//! Two phase conventions occur. Continuous kernels are reported against
//! `(i omega)^nu` ([`Convention::Weyl`]); discrete filters, the
//! Grunwald-Letnikov difference and the Butterworth reference against
//! `(-i omega)^nu` ([`Convention::RiemannLiouville`]). Moduli agree.

use crate::error::{invalid, Error, Result};
use crate::exec::{map_slice, Execution};
use crate::hahn::HahnFilterParams;
use crate::kernels::JacobiKernelParams;
use crate::specfun::dd::{ComplexDD, DoubleDouble};
use crate::specfun::{complex_power, gamma, gamma_ratio, kummer_m, reciprocal_gamma, spherical_bessel_ratio};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `(i omega)^nu`
    Weyl,
    /// `(-i omega)^nu`
    RiemannLiouville,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Weyl => "weyl",
            Convention::RiemannLiouville => "riemann_liouville",
        }
    }
}

impl FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weyl" => Ok(Convention::Weyl),
            "rl" | "riemann_liouville" => Ok(Convention::RiemannLiouville),
            _ => invalid(format!("unknown convention '{s}'")),
        }
    }
}

fn cis(t: f64) -> Complex64 {
    Complex64::new(t.cos(), t.sin())
}

/// Ideal differentiator `(i omega)^nu` or `(-i omega)^nu`.
pub fn ideal_transfer(nu: f64, omega: f64, convention: Convention) -> Result<Complex64> {
    if omega == 0.0 {
        return match nu {
            v if v > 0.0 => Ok(Complex64::new(0.0, 0.0)),
            0.0 => Ok(Complex64::new(1.0, 0.0)),
            _ => invalid(format!("ideal transfer of order {nu} is singular at omega = 0")),
        };
    }
    let z = match convention {
        Convention::Weyl => Complex64::new(0.0, omega),
        Convention::RiemannLiouville => Complex64::new(0.0, -omega),
    };
    complex_power(z, nu, None)
}

/// `(i omega)^nu e^{-i omega delta} M(n+alpha+1, 2n+alpha+beta+2; 2 i omega delta)`.
pub fn jacobi_transfer(params: &JacobiKernelParams, omega: f64) -> Result<Complex64> {
    params.validate()?;
    let nf = params.n as f64;
    let t = omega * params.delta;
    let m =
        kummer_m(nf + params.alpha + 1.0, 2.0 * nf + params.alpha + params.beta + 2.0, Complex64::new(0.0, 2.0 * t))?;
    Ok(ideal_transfer(params.nu, omega, Convention::Weyl)? * cis(-t) * m)
}

/// Jacobi transfer at `alpha = beta = 0` through `j_n`.
pub fn legendre_transfer(n: u32, nu: f64, delta: f64, omega: f64) -> Result<Complex64> {
    JacobiKernelParams::new(0.0, 0.0, n, nu, delta)?;
    let dfact = gamma(2.0 * n as f64 + 2.0)? / (2f64.powi(n as i32) * gamma(n as f64 + 1.0)?);
    let r = spherical_bessel_ratio(n as usize, omega * delta);
    Ok(ideal_transfer(nu, omega, Convention::Weyl)? * (dfact * r))
}

/// `((1 - e^{i omega delta}) / delta)^nu`, principal branch.
pub fn gl_transfer(nu: f64, delta: f64, omega: f64) -> Result<Complex64> {
    if !(delta > 0.0) {
        return invalid(format!("delta = {delta} must be positive"));
    }
    let t = omega * delta;
    let s = (0.5 * t).sin();
    let base = Complex64::new(2.0 * s * s, -t.sin()) / delta;
    if base.norm() == 0.0 {
        return ideal_transfer(nu, 0.0, Convention::RiemannLiouville);
    }
    complex_power(base, nu, None)
}

/// Closed-form transfer function of the untruncated Hahn filter.
pub fn hahn_transfer(params: &HahnFilterParams, omega: f64) -> Result<Complex64> {
    params.validate()?;
    let (a, b) = (params.alpha, params.beta);
    let (nf, bn) = (params.n as f64, params.window as f64);
    let t = omega * params.delta;
    let r = gamma_ratio(bn + b + 1.0, nf + b + 1.0)? * gamma_ratio(2.0 * nf + a + b + 2.0, bn + nf + a + b + 2.0)?;
    let z = cis(-t);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..params.window - params.n {
        let k = k as f64;
        term *= z * ((-bn + nf + k) * (a + nf + 1.0 + k) / ((-b - bn + k) * (k + 1.0)));
        sum += term;
    }
    Ok(gl_transfer(params.nu, params.delta, omega)? * cis(-nf * t) * (r * sum))
}

fn require_gram_n1(params: &HahnFilterParams) -> Result<()> {
    params.validate()?;
    if params.n != 1 || params.alpha != 0.0 || params.beta != 0.0 {
        return invalid("truncated transfer and metrics need n = 1, alpha = beta = 0");
    }
    Ok(())
}

/// Transfer function of the `n = 1` Gram filter with `M` backward taps.
pub fn hahn_truncated_transfer(params: &HahnFilterParams, omega: f64) -> Result<Complex64> {
    require_gram_n1(params)?;
    let (nu, bn, m_hist) = (params.nu, params.window as usize, params.history);
    let t = omega * params.delta;
    let dd = |z: Complex64| ComplexDD::from_c64(z);
    // Gamma(m-nu+1)/(Gamma(m) Gamma(2-nu)) and Gamma(m-nu+2)/(Gamma(m) Gamma(3-nu))
    let (mut g1, mut g3) = (DoubleDouble::ONE, DoubleDouble::ONE);
    let (mut s1, mut s3) = (ComplexDD::default(), ComplexDD::default());
    let (mut s1_m, mut s3_m) = (ComplexDD::default(), ComplexDD::default());
    for m in 1..=m_hist + bn + 1 {
        let mf = m as f64;
        if m > 1 {
            let prev = DoubleDouble::new(mf - 1.0);
            g1 = g1 * DoubleDouble::new(mf - nu) / prev;
            g3 = g3 * DoubleDouble::new(mf - nu + 1.0) / prev;
        }
        let e = dd(cis(mf * t));
        s1 = s1 + e.scale(g1);
        if m <= m_hist + bn {
            s3 = s3 + e.scale(g3);
        }
        if m == m_hist {
            s1_m = s1;
            s3_m = s3;
        }
    }
    let two_over_n = DoubleDouble::new(2.0) / DoubleDouble::new(bn as f64);
    let neg = |z: ComplexDD| ComplexDD::new(-z.re, -z.im);
    let total = dd(cis(-(bn as f64 + 1.0) * t)) * s1
        + s1_m
        + neg((dd(cis(-(bn as f64) * t)) * s3 + neg(s3_m)).scale(two_over_n));
    let bnf = bn as f64;
    let pre = 6.0 / ((bnf + 1.0) * (bnf + 2.0)) * params.delta.powf(-nu);
    Ok(total.to_c64() * pre)
}

/// `H(0)` of the truncated `n = 1` Gram filter in closed form.
pub fn truncated_h_zero(params: &HahnFilterParams) -> Result<f64> {
    require_gram_n1(params)?;
    let (nu, bnf, mf) = (params.nu, params.window as f64, params.history as f64);
    let base = gamma_ratio(mf - nu + 2.0, mf)?;
    // Gamma(M+N-nu+3) Gamma(M) / (Gamma(M+N+1) Gamma(M-nu+2))
    let mut p = DoubleDouble::ONE;
    for j in 0..=params.window {
        let j = j as f64;
        p = p * DoubleDouble::new(mf - nu + 2.0 + j) / DoubleDouble::new(mf + j);
    }
    let bracket =
        DoubleDouble::new(bnf - 2.0 * mf - bnf * nu) * p + DoubleDouble::new((3.0 - nu) * bnf + 2.0 * (mf - nu + 2.0));
    let pre = 6.0 * reciprocal_gamma(4.0 - nu) / (bnf * (bnf + 1.0) * (bnf + 2.0)) * params.delta.powf(-nu);
    Ok(pre * base * bracket.to_f64())
}

/// Ideal response over a Butterworth low-pass of order `2n`.
pub fn butterworth_fractional_transfer(nu: f64, n: u32, omega0: f64, omega: f64) -> Result<Complex64> {
    if !(omega0 > 0.0) {
        return invalid(format!("omega0 = {omega0} must be positive"));
    }
    let d = 1.0 + (omega / omega0).abs().powi(2 * n as i32);
    Ok(ideal_transfer(nu, omega, Convention::RiemannLiouville)? / d)
}

/// First modulus maximum of the continuous Jacobi filter, small-frequency estimate.
pub fn jacobi_omega_max(n: u32, alpha: f64, beta: f64, nu: f64, delta: f64) -> f64 {
    let nf = n as f64;
    let s = 2.0 * nf + alpha + beta;
    0.5 * (s + 2.0) * (nu * (s + 3.0) / ((nf + alpha + 1.0) * (nf + beta + 1.0) * (1.0 + nu))).sqrt() / delta
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterMetrics {
    pub omega_lower: f64,
    pub omega_lower_practical: f64,
    pub omega_max: f64,
    /// `omega_max - omega_lower` when positive.
    pub bandwidth: Option<f64>,
    pub h_zero: f64,
    /// `nu = 1`: the maximum estimate degenerates to zero.
    pub integer_order: bool,
}

/// Pass-band edges and DC leakage of the truncated `n = 1` Gram filter.
pub fn filter_metrics(params: &HahnFilterParams) -> Result<FilterMetrics> {
    require_gram_n1(params)?;
    let nu = params.nu;
    if !(nu > 0.0) {
        return invalid(format!("metrics need 0 < nu <= 1, got {nu}"));
    }
    let h_zero = truncated_h_zero(params)?;
    let omega_lower = h_zero.abs().powf(1.0 / nu);
    let bn = params.window as f64;
    let q = 6.0 * bn + nu + 6.0 * bn * nu + bn * bn * nu + bn * bn + 9.0;
    let omega_max = 2.0 * 6f64.sqrt() * ((1.0 - nu) * q).max(0.0).sqrt() / (params.delta * q);
    Ok(FilterMetrics {
        omega_lower,
        omega_lower_practical: 10.0 * omega_lower,
        omega_max,
        bandwidth: (omega_lower < omega_max).then_some(omega_max - omega_lower),
        h_zero,
        integer_order: nu == 1.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Logarithmic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub points: Vec<f64>,
    pub spacing: Spacing,
}

impl FrequencyGrid {
    pub fn new(lo: f64, hi: f64, count: usize, spacing: Spacing) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && hi.is_finite()) || count < 2 {
            return invalid(format!("grid needs 0 < lo < hi and at least two points, got {lo}:{hi}:{count}"));
        }
        let last = (count - 1) as f64;
        let points = (0..count)
            .map(|i| {
                let f = i as f64 / last;
                match spacing {
                    Spacing::Linear => lo + (hi - lo) * f,
                    Spacing::Logarithmic => (lo.ln() + (hi.ln() - lo.ln()) * f).exp(),
                }
            })
            .collect::<Vec<_>>();
        Self::from_points(points, spacing)
    }

    pub fn logarithmic(lo: f64, hi: f64, count: usize) -> Result<Self> {
        Self::new(lo, hi, count, Spacing::Logarithmic)
    }

    pub fn linear(lo: f64, hi: f64, count: usize) -> Result<Self> {
        Self::new(lo, hi, count, Spacing::Linear)
    }

    pub fn from_points(points: Vec<f64>, spacing: Spacing) -> Result<Self> {
        if points.is_empty() || points[0] <= 0.0 || points.windows(2).any(|w| w[1] <= w[0]) {
            return invalid("grid points must be positive and strictly increasing");
        }
        Ok(Self { points, spacing })
    }
}

impl FromStr for FrequencyGrid {
    type Err = Error;

    /// `lo:hi:points:log|lin`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return invalid(format!("grid '{s}' must look like lo:hi:points:log|lin"));
        }
        let num =
            |p: &str| p.trim().parse::<f64>().map_err(|_| Error::InvalidParameter(format!("bad number '{p}' in grid")));
        let count = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidParameter(format!("bad point count '{}' in grid", parts[2])))?;
        let spacing = match parts[3].trim() {
            "log" => Spacing::Logarithmic,
            "lin" => Spacing::Linear,
            other => return invalid(format!("grid spacing '{other}' must be log or lin")),
        };
        Self::new(num(parts[0])?, num(parts[1])?, count, spacing)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferSample {
    pub omega: f64,
    pub value: Option<Complex64>,
    /// Set when the point failed; the sample is kept.
    pub error: Option<String>,
}

impl TransferSample {
    pub fn modulus(&self) -> Option<f64> {
        self.value.map(|v| v.norm())
    }

    pub fn log10_omega(&self) -> f64 {
        self.omega.log10()
    }

    pub fn log10_modulus(&self) -> Option<f64> {
        self.modulus().map(f64::log10)
    }

    pub fn arg(&self) -> Option<f64> {
        self.value.map(|v| v.arg())
    }
}

/// Evaluates `transfer` at each grid point.
pub fn sweep<F>(transfer: F, grid: &FrequencyGrid, exec: Execution) -> Vec<TransferSample>
where
    F: Fn(f64) -> Result<Complex64> + Sync + Send,
{
    map_slice(exec, &grid.points, |&omega| match transfer(omega) {
        Ok(v) if v.re.is_finite() && v.im.is_finite() => TransferSample { omega, value: Some(v), error: None },
        Ok(_) => TransferSample { omega, value: None, error: Some("non-finite value".into()) },
        Err(e) => TransferSample { omega, value: None, error: Some(e.to_string()) },
    })
}

/// Least-squares slope of `log|H|` against `log omega` on `[lo, hi]`.
///
/// Without a window the lowest decade of the samples is used.
pub fn fit_loglog_slope(samples: &[TransferSample], window: Option<(f64, f64)>) -> Result<f64> {
    let first = samples.first().ok_or_else(|| Error::InvalidParameter("no samples".into()))?.omega;
    let (lo, hi) = window.unwrap_or((first, 10.0 * first));
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.omega >= lo * (1.0 - 1e-12) && s.omega <= hi * (1.0 + 1e-12))
        .filter_map(|s| s.modulus().filter(|m| *m > 0.0).map(|m| (s.omega.ln(), m.ln())))
        .collect();
    if pts.len() < 2 {
        return invalid(format!("need two valid samples in [{lo}, {hi}] to fit a slope"));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// A transfer function together with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TransferSpec {
    Ideal { nu: f64, convention: Convention },
    Jacobi(JacobiKernelParams),
    Legendre { n: u32, nu: f64, delta: f64 },
    Hahn(HahnFilterParams),
    HahnTruncated(HahnFilterParams),
    Gl { nu: f64, delta: f64 },
    Butterworth { nu: f64, n: u32, omega0: f64 },
}

impl TransferSpec {
    pub fn eval(&self, omega: f64) -> Result<Complex64> {
        match self {
            TransferSpec::Ideal { nu, convention } => ideal_transfer(*nu, omega, *convention),
            TransferSpec::Jacobi(p) => jacobi_transfer(p, omega),
            TransferSpec::Legendre { n, nu, delta } => legendre_transfer(*n, *nu, *delta, omega),
            TransferSpec::Hahn(p) => hahn_transfer(p, omega),
            TransferSpec::HahnTruncated(p) => hahn_truncated_transfer(p, omega),
            TransferSpec::Gl { nu, delta } => gl_transfer(*nu, *delta, omega),
            TransferSpec::Butterworth { nu, n, omega0 } => butterworth_fractional_transfer(*nu, *n, *omega0, omega),
        }
    }

    pub fn convention(&self) -> Convention {
        match self {
            TransferSpec::Ideal { convention, .. } => *convention,
            TransferSpec::Jacobi(_) | TransferSpec::Legendre { .. } => Convention::Weyl,
            _ => Convention::RiemannLiouville,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            TransferSpec::Ideal { .. } => "ideal",
            TransferSpec::Jacobi(_) => "jacobi",
            TransferSpec::Legendre { .. } => "legendre",
            TransferSpec::Hahn(_) => "hahn",
            TransferSpec::HahnTruncated(_) => "hahn_truncated",
            TransferSpec::Gl { .. } => "gl",
            TransferSpec::Butterworth { .. } => "butterworth",
        }
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: f64| {
            m.insert(k.to_string(), v);
        };
        match self {
            TransferSpec::Ideal { nu, .. } => put("nu", *nu),
            TransferSpec::Jacobi(p) => {
                put("alpha", p.alpha);
                put("beta", p.beta);
                put("n", p.n as f64);
                put("nu", p.nu);
                put("delta", p.delta);
            }
            TransferSpec::Legendre { n, nu, delta } => {
                put("n", *n as f64);
                put("nu", *nu);
                put("delta", *delta);
            }
            TransferSpec::Hahn(p) | TransferSpec::HahnTruncated(p) => {
                put("alpha", p.alpha);
                put("beta", p.beta);
                put("N", p.window as f64);
                put("n", p.n as f64);
                put("nu", p.nu);
                put("delta", p.delta);
                if matches!(self, TransferSpec::HahnTruncated(_)) {
                    put("M", p.history as f64);
                }
            }
            TransferSpec::Gl { nu, delta } => {
                put("nu", *nu);
                put("delta", *delta);
            }
            TransferSpec::Butterworth { nu, n, omega0 } => {
                put("nu", *nu);
                put("n", *n as f64);
                put("omega0", *omega0);
            }
        }
        m
    }

    /// Sweeps this transfer function into a labelled curve.
    pub fn curve(&self, label: impl Into<String>, grid: &FrequencyGrid, exec: Execution) -> SweepCurve {
        SweepCurve {
            label: label.into(),
            family: self.family().to_string(),
            convention: self.convention(),
            params: self.params(),
            samples: sweep(|w| self.eval(w), grid, exec),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCurve {
    pub label: String,
    pub family: String,
    pub convention: Convention,
    pub params: BTreeMap<String, f64>,
    pub samples: Vec<TransferSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub run_id: String,
    pub family: String,
    pub convention: Convention,
    pub params: BTreeMap<String, f64>,
    pub curves: Vec<SweepCurve>,
}

impl SweepReport {
    /// Report whose metadata is taken from the first curve.
    pub fn new(run_id: impl Into<String>, curves: Vec<SweepCurve>) -> Self {
        let (family, convention, params) = curves
            .first()
            .map(|c| (c.family.clone(), c.convention, c.params.clone()))
            .unwrap_or_else(|| (String::new(), Convention::Weyl, BTreeMap::new()));
        Self { run_id: run_id.into(), family, convention, params, curves }
    }

    /// Columnar text: one `#` header block per curve, blank line between curves.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# run_id: {}", self.run_id);
        for (i, c) in self.curves.iter().enumerate() {
            if i > 0 {
                s.push('\n');
            }
            let _ = writeln!(s, "# curve: {}", c.label);
            let _ = writeln!(s, "# family: {}", c.family);
            let _ = writeln!(s, "# convention: {}", c.convention.name());
            let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(s, "# params: {}", params.join(" "));
            let _ = writeln!(s, "# omega re_h im_h abs_h arg_h log10_omega log10_abs_h ok");
            for p in &c.samples {
                match p.value {
                    Some(v) => {
                        let _ = writeln!(
                            s,
                            "{:e} {:e} {:e} {:e} {:e} {:e} {:e} 1",
                            p.omega,
                            v.re,
                            v.im,
                            v.norm(),
                            v.arg(),
                            p.log10_omega(),
                            v.norm().log10()
                        );
                    }
                    None => {
                        let _ = writeln!(s, "{:e} NaN NaN NaN NaN {:e} NaN 0", p.omega, p.log10_omega());
                    }
                }
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ideal_examples() {
        let v = ideal_transfer(2.0, 1.0, Convention::RiemannLiouville).unwrap();
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let v = ideal_transfer(1.0, 3.0, Convention::Weyl).unwrap();
        assert!((v - Complex64::new(0.0, 3.0)).norm() < 1e-15);
        assert_relative_eq!(
            ideal_transfer(1.5, 10.0, Convention::Weyl).unwrap().norm(),
            31.622776601683793,
            max_relative = 1e-14
        );
        assert!(ideal_transfer(-0.5, 0.0, Convention::Weyl).is_err());
    }

    #[test]
    fn legendre_n1_closed_form() {
        for &w in &[0.3, 1.0, 4.0, 17.0] {
            let h = legendre_transfer(1, 0.5, 1.0, w).unwrap().norm();
            let want = (3.0 * w.powf(0.5 - 3.0) * (w.sin() - w * w.cos())).abs();
            assert_relative_eq!(h, want, max_relative = 1e-12);
        }
    }

    #[test]
    fn gl_limits() {
        let v = gl_transfer(0.5, 1e-6, 1.0).unwrap();
        let ideal = ideal_transfer(0.5, 1.0, Convention::RiemannLiouville).unwrap();
        assert!((v - ideal).norm() / ideal.norm() < 1e-5);
        let v = gl_transfer(1.0, 0.5, 2.0).unwrap();
        let want = (Complex64::new(1.0, 0.0) - cis(1.0)) / 0.5;
        assert!((v - want).norm() < 1e-15);
    }

    #[test]
    fn hahn_n1_window1_is_shifted_gl() {
        let p = HahnFilterParams::new(0.0, 0.0, 1, 1, 0.5, 0.7, 8).unwrap();
        for &w in &[0.2, 1.0, 3.0] {
            let h = hahn_transfer(&p, w).unwrap();
            let g = gl_transfer(0.5, 0.7, w).unwrap();
            assert!((h - cis(-w * 0.7) * g).norm() < 1e-14);
            assert_relative_eq!(h.norm(), g.norm(), max_relative = 1e-14);
        }
    }

    #[test]
    fn butterworth_examples() {
        let v = butterworth_fractional_transfer(0.5, 7, 2.0, 2.0).unwrap();
        assert_relative_eq!(v.norm(), 2f64.sqrt() / 2.0, max_relative = 1e-14);
        assert!(butterworth_fractional_transfer(0.5, 7, 0.0, 1.0).is_err());
    }

    #[test]
    fn grid_parsing() {
        let g: FrequencyGrid = "0.001:10:5:log".parse().unwrap();
        assert_eq!(g.points.len(), 5);
        assert_relative_eq!(g.points[1], 0.01, max_relative = 1e-12);
        assert!("1:0.5:4:lin".parse::<FrequencyGrid>().is_err());
        assert!("1:2:4:cubic".parse::<FrequencyGrid>().is_err());
        assert!(FrequencyGrid::from_points(vec![1.0, 1.0], Spacing::Linear).is_err());
    }

    #[test]
    fn sweep_flags_failures() {
        let g = FrequencyGrid::linear(1.0, 3.0, 3).unwrap();
        let s =
            sweep(|w| if w == 2.0 { invalid("boom") } else { Ok(Complex64::new(w, 0.0)) }, &g, Execution::Sequential);
        assert_eq!(s.len(), 3);
        assert!(s[1].value.is_none() && s[1].error.is_some());
        assert!(s[2].value.is_some());
    }

    #[test]
    fn omega_max_legendre_reading() {
        assert_relative_eq!(jacobi_omega_max(1, 0.0, 0.0, 0.5, 1.0), (0.5 * 5.0 / 1.5f64).sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn metrics_edge_cases() {
        let p = HahnFilterParams::new(0.0, 0.0, 7, 1, 1.0, 1.0, 64).unwrap();
        let m = filter_metrics(&p).unwrap();
        assert_eq!(m.omega_max, 0.0);
        assert!(m.integer_order && m.bandwidth.is_none());
        let p = HahnFilterParams::new(0.0, 0.0, 7, 2, 0.5, 1.0, 64).unwrap();
        assert!(filter_metrics(&p).is_err());
    }
}
