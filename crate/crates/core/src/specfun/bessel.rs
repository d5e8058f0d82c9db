use super::gamma::reciprocal_gamma;

/// `j_n(x) / x^n` by its power series; accurate for small `x`.
pub fn spherical_bessel_ratio_series(n: usize, x: f64) -> f64 {
    let mut dfact = 1.0;
    for k in 1..=n {
        dfact *= (2 * k + 1) as f64;
    }
    let q = -0.5 * x * x;
    let mut term = 1.0 / dfact;
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (2 * n + 2 * k + 1) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn closed_form(n: usize, x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    match n {
        0 => s / x,
        1 => s / (x * x) - c / x,
        2 => ((3.0 - x * x) * s - 3.0 * x * c) / x.powi(3),
        3 => ((15.0 - 6.0 * x * x) * s - (15.0 - x * x) * x * c) / x.powi(4),
        _ => unreachable!(),
    }
}

/// Spherical Bessel function of the first kind.
pub fn spherical_bessel_j(n: usize, x: f64) -> f64 {
    if x < 0.0 {
        let v = spherical_bessel_j(n, -x);
        return if n.is_multiple_of(2) { v } else { -v };
    }
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x < 1.0 {
        return spherical_bessel_ratio_series(n, x) * x.powi(n as i32);
    }
    if n <= 3 {
        return closed_form(n, x);
    }
    if x >= n as f64 {
        let (mut jm, mut j) = (closed_form(0, x), closed_form(1, x));
        for k in 1..n {
            let next = (2 * k + 1) as f64 / x * j - jm;
            jm = j;
            j = next;
        }
        return j;
    }
    miller(n, x)
}

/// Downward recurrence normalised against `j_0` or `j_1`.
fn miller(n: usize, x: f64) -> f64 {
    let start = n + 20 + (x as usize);
    let (mut above, mut cur) = (0.0f64, 1e-300f64);
    let mut at_n = 0.0;
    let mut j1 = 0.0;
    for k in (1..=start).rev() {
        let below = (2 * k + 1) as f64 / x * cur - above;
        above = cur;
        cur = below;
        if k - 1 == n {
            at_n = cur;
        }
        if k - 1 == 1 {
            j1 = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            at_n *= 1e-250;
            j1 *= 1e-250;
        }
    }
    let j0_true = closed_form(0, x);
    let j1_true = closed_form(1, x);
    if j0_true.abs() > j1_true.abs() {
        at_n * j0_true / cur
    } else {
        at_n * j1_true / j1
    }
}

/// `j_n(x) / x^n`, finite at `x = 0`.
pub fn spherical_bessel_ratio(n: usize, x: f64) -> f64 {
    if x.abs() < 1.0 {
        spherical_bessel_ratio_series(n, x)
    } else {
        spherical_bessel_j(n, x) / x.powi(n as i32)
    }
}

/// Bessel function `J_order(x)` of real order by its power series, `x >= 0`.
pub fn bessel_j_series(order: f64, x: f64) -> f64 {
    let h = 0.5 * x;
    let q = -h * h;
    let mut term = reciprocal_gamma(order + 1.0);
    let mut sum = term;
    for k in 1..500 {
        let kf = k as f64;
        term *= q / (kf * (kf + order));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() && kf > h {
            break;
        }
    }
    sum * h.powf(order)
}
