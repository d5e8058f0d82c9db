use super::dd::{ComplexDD, DoubleDouble};
use super::gamma::{digamma, gamma, gamma_ratio, is_nonpositive_integer, reciprocal_gamma};
use super::{complex_power, BranchSide};
use crate::error::{Error, Result};
use num_complex::Complex64;

const SERIES_TOL: f64 = 1e-16;
const MAX_TERMS: usize = 10_000;
/// Non-terminating Gauss series are summed directly only inside this radius.
const DIRECT_RADIUS: f64 = 0.75;
/// Complex arguments beyond this radius are rejected.
const EDGE_RADIUS: f64 = 0.9;
const INTEGER_SNAP: f64 = 1e-12;
const KUMMER_ASYMPTOTIC_RADIUS: f64 = 30.0;
const ASYMPTOTIC_TOL: f64 = 1e-15;

fn terminating_length(x: f64) -> Option<usize> {
    is_nonpositive_integer(x).then(|| (-x) as usize)
}

/// Generic power series with term ratio `ratio(k)` (t_{k+1} = t_k * ratio(k)).
fn power_series<F: Fn(usize) -> Complex64>(ratio: F, what: &str) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        term *= ratio(k);
        sum += term;
        if term.norm() < SERIES_TOL * sum.norm() || term.norm() == 0.0 {
            small += 1;
            if small == 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence(format!("{what}: {MAX_TERMS} terms")))
}

fn finite_sum<F: Fn(usize) -> Complex64>(len: usize, ratio: F) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..len {
        term *= ratio(k);
        sum += term;
    }
    sum
}

fn real_series(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let z = Complex64::new(x, 0.0);
    Ok(power_series(
        |k| {
            let k = k as f64;
            z * ((a + k) * (b + k) / ((c + k) * (k + 1.0)))
        },
        "2F1",
    )?
    .re)
}

/// Gauss hypergeometric function `2F1(a, b; c; z)` for real parameters.
///
/// Terminating series are summed exactly for any `z`. Otherwise real
/// arguments are mapped into `|z| <= 1/2` by the Pfaff and `1 - z`
/// transformations, and complex arguments must satisfy `|z| < 0.9`.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let term_len = match (terminating_length(a), terminating_length(b)) {
        (Some(p), Some(q)) => Some(p.min(q)),
        (p, q) => p.or(q),
    };
    if let Some(c_len) = terminating_length(c) {
        match term_len {
            Some(len) if len <= c_len => {}
            _ => return Err(Error::Pole(c)),
        }
    }
    if let Some(len) = term_len {
        return Ok(finite_sum(len, |k| {
            let k = k as f64;
            z * ((a + k) * (b + k) / ((c + k) * (k + 1.0)))
        }));
    }
    if z.im == 0.0 {
        return real_2f1(a, b, c, z.re).map(|v| Complex64::new(v, 0.0));
    }
    let r = z.norm();
    if r >= EDGE_RADIUS {
        return Err(Error::NonConvergence(format!("2F1 argument |z| = {r} too close to the unit circle")));
    }
    power_series(
        |k| {
            let k = k as f64;
            z * ((a + k) * (b + k) / ((c + k) * (k + 1.0)))
        },
        "2F1",
    )
}

fn real_2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if x.abs() <= DIRECT_RADIUS {
        return real_series(a, b, c, x);
    }
    if x < 0.0 {
        // Pfaff: (1-x)^(-a) 2F1(a, c-b; c; x/(x-1))
        let w = x / (x - 1.0);
        let f = gauss_2f1(a, c - b, c, Complex64::new(w, 0.0))?.re;
        return Ok((1.0 - x).powf(-a) * f);
    }
    if x < 1.0 {
        return one_minus_z(a, b, c, 1.0 - x);
    }
    if x == 1.0 && c - a - b > 0.0 {
        return Ok(gamma(c)? * gamma(c - a - b)? * reciprocal_gamma(c - a) * reciprocal_gamma(c - b));
    }
    Err(Error::OutOfRange(format!("2F1 real argument {x} >= 1")))
}

/// `2F1(a, b; c; 1 - s)` for real `0 < s <= 1`, with `s` supplied exactly.
pub(crate) fn gauss_2f1_complement(a: f64, b: f64, c: f64, s: f64) -> Result<f64> {
    if s >= 1.0 - DIRECT_RADIUS || terminating_length(a).is_some() || terminating_length(b).is_some() {
        return gauss_2f1(a, b, c, Complex64::new(1.0 - s, 0.0)).map(|v| v.re);
    }
    if s <= 0.0 {
        return real_2f1(a, b, c, 1.0);
    }
    one_minus_z(a, b, c, s)
}

/// Evaluates `2F1(a, b; c; 1 - s)` for `0 < s < 1/2`.
fn one_minus_z(a: f64, b: f64, c: f64, s: f64) -> Result<f64> {
    let m = c - a - b;
    let m_round = m.round();
    if (m - m_round).abs() <= INTEGER_SNAP * m.abs().max(1.0) {
        let m_int = m_round as i64;
        if m_int < 0 {
            // Euler: s^m 2F1(c-a, c-b; c; 1-s)
            let f = one_minus_z_integer(c - a, c - b, (-m_int) as usize, s)?;
            return Ok(s.powf(m) * f);
        }
        return one_minus_z_integer(a, b, m_int as usize, s);
    }
    let first = gamma(c)? * gamma(m)? * reciprocal_gamma(c - a) * reciprocal_gamma(c - b);
    let f1 = if first == 0.0 { 0.0 } else { real_series(a, b, 1.0 - m, s)? };
    let second = gamma(c)? * gamma(-m)? * reciprocal_gamma(a) * reciprocal_gamma(b);
    let f2 = if second == 0.0 { 0.0 } else { real_series(c - a, c - b, m + 1.0, s)? };
    Ok(first * f1 + second * s.powf(m) * f2)
}

/// `2F1(a, b; a + b + m; 1 - s)` for integer `m >= 0` (logarithmic case).
fn one_minus_z_integer(a: f64, b: f64, m: usize, s: f64) -> Result<f64> {
    let c = a + b + m as f64;
    let ln_s = s.ln();
    let mf = m as f64;
    let mut finite = 0.0;
    if m > 0 {
        let pre = gamma(mf)? * gamma(c)? * reciprocal_gamma(a + mf) * reciprocal_gamma(b + mf);
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 0..m - 1 {
            let nf = n as f64;
            term *= (a + nf) * (b + nf) / ((nf + 1.0) * (1.0 - mf + nf)) * s;
            sum += term;
        }
        finite = pre * sum;
    }
    let pre = gamma(c)? * reciprocal_gamma(a) * reciprocal_gamma(b);
    if pre == 0.0 {
        return Ok(finite);
    }
    let mut fact_m = 1.0;
    for j in 1..=m {
        fact_m *= j as f64;
    }
    let mut coef = 1.0 / fact_m;
    let mut psi_n1 = digamma(1.0)?;
    let mut psi_nm1 = digamma(mf + 1.0)?;
    let mut psi_a = digamma(a + mf)?;
    let mut psi_b = digamma(b + mf)?;
    let mut sum = 0.0;
    let mut small = 0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let term = coef * (ln_s - psi_n1 - psi_nm1 + psi_a + psi_b);
        sum += term;
        if term.abs() < SERIES_TOL * sum.abs() {
            small += 1;
            if small == 3 {
                let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
                // (z - 1)^m = (-s)^m
                return Ok(finite - sign * s.powi(m as i32) * pre * sum);
            }
        } else {
            small = 0;
        }
        coef *= (a + mf + nf) * (b + mf + nf) / ((nf + 1.0) * (nf + mf + 1.0)) * s;
        psi_n1 += 1.0 / (nf + 1.0);
        psi_nm1 += 1.0 / (nf + mf + 1.0);
        psi_a += 1.0 / (a + mf + nf);
        psi_b += 1.0 / (b + mf + nf);
    }
    Err(Error::NonConvergence("2F1 logarithmic case".into()))
}

/// Terminating `3F2(a1, a2, a3; b1, b2; 1)`.
///
/// One numerator parameter must be a nonpositive integer whose magnitude is
/// below `terms`.
pub fn hyp_3f2_unit(a: [f64; 3], b: [f64; 2], terms: usize) -> Result<f64> {
    let len = a
        .iter()
        .filter_map(|&x| terminating_length(x))
        .min()
        .ok_or_else(|| Error::NonConvergence("3F2 at unit argument does not terminate".into()))?;
    if len >= terms {
        return Err(Error::NonConvergence(format!("3F2 needs {} terms, cap is {terms}", len + 1)));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..len {
        let kf = k as f64;
        let den = (b[0] + kf) * (b[1] + kf) * (kf + 1.0);
        if den == 0.0 {
            return Err(Error::Pole(if b[0] + kf == 0.0 { b[0] } else { b[1] }));
        }
        term *= (a[0] + kf) * (a[1] + kf) * (a[2] + kf) / den;
        sum += term;
    }
    Ok(sum)
}

/// Confluent hypergeometric function `M(a, c, z)` for real `a`, `c`.
///
/// Uses the power series for moderate `|z|` (switching to double-double
/// accumulation when the terms cancel), Kummer's transformation for
/// `Re z < 0`, and the large-argument expansion beyond `|z| = 30`.
pub fn kummer_m(a: f64, c: f64, z: Complex64) -> Result<Complex64> {
    if let Some(c_len) = terminating_length(c) {
        match terminating_length(a) {
            Some(len) if len <= c_len => {}
            _ => return Err(Error::Pole(c)),
        }
    }
    if let Some(len) = terminating_length(a) {
        return Ok(finite_sum(len, |k| {
            let k = k as f64;
            z * ((a + k) / ((c + k) * (k + 1.0)))
        }));
    }
    if z.re < 0.0 {
        return Ok(z.exp() * kummer_m(c - a, c, -z)?);
    }
    if z.norm() > KUMMER_ASYMPTOTIC_RADIUS {
        if let Some(v) = kummer_asymptotic(a, c, z)? {
            return Ok(v);
        }
    }
    kummer_series(a, c, z)
}

fn kummer_series(a: f64, c: f64, z: Complex64) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut abs_sum = 1.0;
    let mut small = 0;
    let mut converged = false;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= z * ((a + kf) / ((c + kf) * (kf + 1.0)));
        sum += term;
        abs_sum += term.norm();
        if term.norm() < SERIES_TOL * sum.norm() {
            small += 1;
            if small == 3 {
                converged = true;
                break;
            }
        } else {
            small = 0;
        }
    }
    if !converged {
        return Err(Error::NonConvergence("Kummer series".into()));
    }
    if f64::EPSILON * abs_sum <= 1e-14 * sum.norm() {
        return Ok(sum);
    }
    kummer_series_dd(a, c, z)
}

fn kummer_series_dd(a: f64, c: f64, z: Complex64) -> Result<Complex64> {
    let zd = ComplexDD::from_c64(z);
    let mut term = ComplexDD::new(DoubleDouble::ONE, DoubleDouble::ZERO);
    let mut sum = term;
    let mut abs_sum = 1.0;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let kf = DoubleDouble::new(k as f64);
        let r = (DoubleDouble::new(a) + kf) / ((DoubleDouble::new(c) + kf) * (kf + DoubleDouble::ONE));
        term = (term * zd).scale(r);
        sum = sum + term;
        let tn = term.norm_f64();
        abs_sum += tn;
        let sn = sum.norm_f64();
        if tn < 1e-33 * sn {
            small += 1;
            if small == 3 {
                if 1e-31 * abs_sum > 1e-11 * sn {
                    return Err(Error::OutOfRange(format!(
                        "Kummer M({a}, {c}, {z}) loses too many digits to cancellation"
                    )));
                }
                return Ok(sum.to_c64());
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence("Kummer series (double-double)".into()))
}

/// Large-`|z|` expansion for `Re z >= 0`; `None` if it cannot reach full accuracy.
fn kummer_asymptotic(a: f64, c: f64, z: Complex64) -> Result<Option<Complex64>> {
    let side = if z.im >= 0.0 { BranchSide::Above } else { BranchSide::Below };
    let g1 = gamma_ratio(c, a)?;
    let g2 = gamma_ratio(c, c - a)?;
    let inv = 1.0 / z;
    let (s1, e1) = asymptotic_sum(c - a, 1.0 - a, inv);
    let (s2, e2) = asymptotic_sum(a, a - c + 1.0, -inv);
    let t1 =
        if g1 == 0.0 { Complex64::new(0.0, 0.0) } else { z.exp() * complex_power(z, a - c, Some(side))? * g1 * s1 };
    let phase = if side == BranchSide::Above { 1.0 } else { -1.0 };
    let t2 = if g2 == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::from_polar(1.0, phase * std::f64::consts::PI * a) * complex_power(z, -a, Some(side))? * g2 * s2
    };
    let (n1, n2) = (t1.norm() / s1.norm().max(1e-300), t2.norm() / s2.norm().max(1e-300));
    if z.im == 0.0 {
        // the subdominant term is exponentially small on the positive axis
        if n1 * e1 > ASYMPTOTIC_TOL * t1.norm() {
            return Ok(None);
        }
        return Ok(Some(Complex64::new(t1.re, 0.0)));
    }
    let v = t1 + t2;
    if n1 * e1 + n2 * e2 > ASYMPTOTIC_TOL * v.norm() {
        return Ok(None);
    }
    Ok(Some(v))
}

/// Optimally truncated asymptotic series with its truncation error.
fn asymptotic_sum(p: f64, q: f64, w: Complex64) -> (Complex64, f64) {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut last = 1.0;
    for s in 0..400 {
        let sf = s as f64;
        term *= w * ((p + sf) * (q + sf) / (sf + 1.0));
        let tn = term.norm();
        if tn == 0.0 || tn < 1e-17 * sum.norm() {
            return (sum, tn);
        }
        if tn > last {
            return (sum, last);
        }
        last = tn;
        sum += term;
    }
    (sum, last)
}

/// `exp(-y) M(a, c, y)` for real `y >= 0`.
pub fn kummer_m_scaled(a: f64, c: f64, y: f64) -> Result<f64> {
    if y > KUMMER_ASYMPTOTIC_RADIUS && terminating_length(a).is_none() {
        let (s1, e1) = asymptotic_sum(c - a, 1.0 - a, Complex64::new(1.0 / y, 0.0));
        let (s2, e2) = asymptotic_sum(a, a - c + 1.0, Complex64::new(-1.0 / y, 0.0));
        let p1 = gamma_ratio(c, a)? * y.powf(a - c);
        let p2 = gamma_ratio(c, c - a)? * super::gamma::sin_pi(a + 0.5) * y.powf(-a) * (-y).exp();
        let v = p1 * s1.re + p2 * s2.re;
        if p1.abs() * e1 + p2.abs() * e2 <= ASYMPTOTIC_TOL * v.abs() {
            return Ok(v);
        }
    }
    Ok((-y).exp() * kummer_m(a, c, Complex64::new(y, 0.0))?.re)
}
