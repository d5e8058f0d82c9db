use crate::error::{Error, Result};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `sin(pi x)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    let (r, sign) = if r > 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    let s = if r <= 0.25 {
        (PI * r).sin()
    } else if r <= 0.75 {
        (PI * (0.5 - r)).cos()
    } else {
        (PI * (1.0 - r)).sin()
    };
    sign * s
}

fn lanczos_sum(z: f64) -> f64 {
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    a
}

/// `Gamma(x)` for `x >= 0.5`.
fn gamma_right(x: f64) -> f64 {
    if x == x.round() && x <= 30.0 {
        let mut f = 1.0;
        for k in 2..(x as u64) {
            f *= k as f64;
        }
        return f;
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    let half = (z + 0.5) * 0.5;
    let p = t.powf(half);
    (2.0 * PI).sqrt() * p * ((-t).exp() * p) * lanczos_sum(z)
}

/// Gamma function. Nonpositive integers are poles.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::InvalidParameter("gamma of NaN".into()));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        Ok(PI / (sin_pi(x) * gamma_right(1.0 - x)))
    } else if x > 171.7 {
        Ok(f64::INFINITY)
    } else {
        Ok(gamma_right(x))
    }
}

/// `1 / Gamma(x)`, zero at the poles.
pub fn reciprocal_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x < 0.5 {
        sin_pi(x) * gamma_right(1.0 - x) / PI
    } else if x > 171.7 {
        let (l, _) = ln_gamma(x);
        (-l).exp()
    } else {
        1.0 / gamma_right(x)
    }
}

/// `(ln|Gamma(x)|, sign Gamma(x))`.
pub fn ln_gamma(x: f64) -> (f64, f64) {
    if x < 0.5 {
        let s = sin_pi(x);
        let (l, _) = ln_gamma(1.0 - x);
        return (PI.ln() - s.abs().ln() - l, s.signum());
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    (LN_SQRT_2PI + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln(), 1.0)
}

/// `Gamma(a) / Gamma(b)` without intermediate overflow.
pub fn gamma_ratio(a: f64, b: f64) -> Result<f64> {
    let pa = is_nonpositive_integer(a);
    let pb = is_nonpositive_integer(b);
    match (pa, pb) {
        (true, true) => {
            // Gamma(a)/Gamma(b) = (-1)^(b-a) Gamma(1-b)/Gamma(1-a)
            let sign = if ((b - a) as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            return Ok(sign * gamma_ratio(1.0 - b, 1.0 - a)?);
        }
        (true, false) => return Err(Error::Pole(a)),
        (false, true) => return Ok(0.0),
        _ => {}
    }
    let d = a - b;
    if d == d.round() && d.abs() <= 1e5 {
        let k = d.abs() as usize;
        let (lo, flip) = if d >= 0.0 { (b, false) } else { (a, true) };
        let mut p = 1.0;
        for j in 0..k {
            p *= lo + j as f64;
        }
        return Ok(if flip { 1.0 / p } else { p });
    }
    if a.abs() < 160.0 && b.abs() < 160.0 {
        return Ok(gamma(a)? * reciprocal_gamma(b));
    }
    if a > 1.0 && b > 1.0 && d.abs() < 140.0 {
        let k = (a.min(b) - 20.0).floor().max(0.0);
        if k <= 1e6 {
            let mut p = 1.0;
            let n = k as usize;
            for j in 1..=n {
                p *= (a - j as f64) / (b - j as f64);
            }
            let r = p * (gamma(a - k)? * reciprocal_gamma(b - k));
            if r.is_finite() {
                return Ok(r);
            }
        }
    }
    let (la, sa) = ln_gamma(a);
    let (lb, sb) = ln_gamma(b);
    Ok(sa * sb * (la - lb).exp())
}

/// Rising factorial `(a)_k` by direct product.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    let mut p = 1.0;
    for j in 0..k {
        p *= a + j as f64;
    }
    p
}

/// Digamma function.
pub fn digamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        let reflected = digamma(1.0 - x)?;
        return Ok(reflected - PI * cos_pi(x) / sin_pi(x));
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let r = 1.0 / (y * y);
    let series = r
        * (1.0 / 12.0
            - r * (1.0 / 120.0 - r * (1.0 / 252.0 - r * (1.0 / 240.0 - r * (1.0 / 132.0 - r * 691.0 / 32760.0)))));
    Ok(acc + y.ln() - 0.5 / y - series)
}

fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}
