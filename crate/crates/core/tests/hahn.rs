mod common;

use approx::assert_relative_eq;
use common::{brute_taps, max_abs};
use fracfilt::fracops::{gl_coefficients, rl_power, SampledSignal};
use fracfilt::hahn::*;
use fracfilt::specfun::{gamma, hyp_3f2_unit};
use fracfilt::transfer::hahn_transfer;
use fracfilt::{Complex64, Execution};
use proptest::prelude::*;

fn effective(w: &FilterWeights) -> (Vec<f64>, Vec<f64>) {
    (w.forward.iter().map(|c| c * w.prefactor).collect(), w.backward.iter().map(|c| c * w.prefactor).collect())
}

fn assert_taps_close(got: &FilterWeights, want: &(Vec<f64>, Vec<f64>), tol: f64) {
    let (f, b) = effective(got);
    let scale = max_abs(&want.0).max(max_abs(&want.1));
    for (x, y) in f.iter().zip(&want.0).chain(b.iter().zip(&want.1)) {
        assert!((x - y).abs() <= tol * scale, "{x} vs {y}");
    }
}

#[test]
fn weights_match_brute_force() {
    for &(a, b, big_n, n, nu, delta) in &[
        (0.0, 0.0, 4, 1, 0.5, 1.0),
        (0.5, 1.5, 6, 2, 1.3, 0.1),
        (-0.5, 0.25, 5, 3, 2.7, 2.0),
        (1.0, 0.0, 8, 1, -0.5, 1.0),
        (0.3, 0.7, 7, 4, 4.0, 1.0),
    ] {
        let p = HahnFilterParams::new(a, b, big_n, n, nu, delta, 40).unwrap();
        let w = hahn_weights(&p, Execution::Sequential).unwrap();
        assert_taps_close(&w, &brute_taps(a, b, big_n as usize, n as usize, nu, delta, 40), 1e-12);
    }
}

#[test]
fn gl_embedding_with_shift() {
    for n in 1..=3 {
        let delta = 0.25;
        let p = HahnFilterParams::new(0.0, 0.0, n, n, 0.6, delta, 50).unwrap();
        let (f, b) = effective(&hahn_weights(&p, Execution::Sequential).unwrap());
        let g = gl_coefficients(0.6, n as usize + 51);
        let s = delta.powf(-0.6);
        for m in 0..=n as usize {
            assert!((f[m] - s * g[n as usize - m]).abs() < 1e-12 * s);
        }
        for m in 1..=50 {
            assert!((b[m - 1] - s * g[n as usize + m]).abs() < 1e-12 * s);
        }
    }
}

#[test]
fn gram_closed_form_agrees() {
    for big_n in 1..=8 {
        for &nu in &[0.25, 0.5, 0.9] {
            let p = HahnFilterParams::new(0.0, 0.0, big_n, 1, nu, 0.3, 64).unwrap();
            let generic = hahn_weights(&p, Execution::Sequential).unwrap();
            let closed = gram_n1_weights(big_n, nu, 0.3, 64).unwrap();
            let want = effective(&generic);
            assert_taps_close(&closed, &want, 1e-10);
        }
    }
}

#[test]
fn j1_backward_closed_form() {
    // 3F2(1-N, 2, m+1-nu; -N, m+2; 1) in closed form
    let (big_n, nu) = (4u32, 0.5);
    let nf = big_n as f64;
    for m in [1u32, 2, 7, 30] {
        let mf = m as f64;
        let f = hyp_3f2_unit([1.0 - nf, 2.0, mf + 1.0 - nu], [-nf, mf + 2.0], 10).unwrap();
        let t1 = (2.0 * nf + 2.0 * mf - 2.0 * nu - nf * nu + 2.0) * gamma(mf - nu + 1.0).unwrap() / gamma(mf).unwrap();
        let t2 = (2.0 * mf + nf * nu) * gamma(nf + mf - nu + 2.0).unwrap() / gamma(nf + mf + 1.0).unwrap();
        let closed = gamma(mf + 2.0).unwrap() * gamma(-nu).unwrap()
            / (nf * gamma(mf + 1.0 - nu).unwrap() * gamma(3.0 - nu).unwrap())
            * (t1 - t2);
        // the bracket cancels; scale the tolerance by its condition number
        let cond = (t1.abs() + t2.abs()) / (t1 - t2).abs();
        assert_relative_eq!(f, closed, max_relative = 1e-14 * cond.max(100.0));
    }
}

#[test]
fn integer_order_is_exact_on_polynomials() {
    for &(n, big_n, delta) in &[(1u32, 1u32, 0.7), (1, 5, 0.01), (2, 4, 1.3), (3, 7, 0.2)] {
        let p = HahnFilterParams::new(0.4, 1.1, big_n, n, n as f64, delta, 5).unwrap();
        let w = hahn_weights(&p, Execution::Sequential).unwrap();
        assert!(w.backward.iter().all(|&c| c == 0.0));
        // 2 x^n + x^(n-1): n-th derivative is 2 n!
        let s =
            SampledSignal::from_fn(-1.0, delta, 40, false, |x| 2.0 * x.powi(n as i32) + x.powi(n as i32 - 1)).unwrap();
        let want = 2.0 * gamma(n as f64 + 1.0).unwrap();
        for i in 6..20 {
            assert_relative_eq!(apply_discrete_filter(&s, &w, i).unwrap(), want, max_relative = 1e-10);
        }
    }
}

#[test]
fn order_zero_is_normalized_smoothing() {
    for &(a, b, big_n, n) in &[(0.0, 0.0, 4, 1), (0.5, 1.5, 6, 2), (0.0, 0.0, 3, 3)] {
        let p = HahnFilterParams::new(a, b, big_n, n, 0.0, 0.5, 10).unwrap();
        let (f, back) = effective(&hahn_weights(&p, Execution::Sequential).unwrap());
        assert!(back.iter().all(|&c| c == 0.0));
        assert_relative_eq!(f.iter().sum::<f64>(), 1.0, max_relative = 1e-13);
        if big_n == n {
            for (m, c) in f.iter().enumerate() {
                assert_eq!(*c, if m == n as usize { 1.0 } else { 0.0 });
            }
        }
    }
}

#[test]
fn backward_taps_decay_as_power() {
    for &(n, nu) in &[(1u32, 0.5), (2, 1.5), (1, 0.9)] {
        let p = HahnFilterParams::new(0.0, 0.0, 5, n, nu, 1.0, 1024).unwrap();
        let w = hahn_weights(&p, Execution::Parallel).unwrap();
        let bound = 2f64.powf(nu - n as f64 - 1.0) * 1.2;
        for m in (32..=512).step_by(16) {
            assert!((w.backward[2 * m - 1] / w.backward[m - 1]).abs() <= bound, "n={n} nu={nu} m={m}");
        }
    }
}

#[test]
fn gram_filter_on_causal_square() {
    let delta = 1e-2;
    let s = SampledSignal::from_fn(0.0, delta, 120, true, |x| x * x).unwrap();
    let p = HahnFilterParams::new(0.0, 0.0, 4, 1, 0.5, delta, 110).unwrap();
    let w = gram_n1_weights(4, 0.5, delta, 110).unwrap();
    let shift = evaluation_offset(&p);
    assert_relative_eq!(shift, 2.25, max_relative = 1e-14);
    let i = ((1.0 - shift * delta) / delta).round() as usize;
    let x_eff = s.x(i) + shift * delta;
    let got = apply_discrete_filter(&s, &w, i).unwrap();
    assert!((got - 1.5045055561).abs() < 0.03, "{got}");
    assert!((got - rl_power(2.0, -0.5, x_eff).unwrap()).abs() < 5e-3, "{got}");
}

#[test]
fn filter_signal_marks_edges() {
    let s = SampledSignal::from_fn(0.0, 0.1, 30, false, |x| x).unwrap();
    let w = gram_n1_weights(3, 0.5, 0.1, 5).unwrap();
    let out = filter_signal(&s, &w, Execution::Parallel);
    assert_eq!(out.len(), 30);
    assert!(out[..5].iter().all(Option::is_none));
    assert!(out[5..27].iter().all(Option::is_some));
    assert!(out[27..].iter().all(Option::is_none));
    assert_eq!(out, filter_signal(&s, &w, Execution::Sequential));
}

/// DFT of the taps with a summation-by-parts correction for the cut tail.
fn tap_dft(p: &HahnFilterParams, omega: f64) -> Complex64 {
    let extra = 3;
    let long = HahnFilterParams { history: p.history + extra, ..*p };
    let w = hahn_weights(&long, Execution::Parallel).unwrap();
    let t = omega * p.delta;
    let z = Complex64::from_polar(1.0, t);
    let mut h: Complex64 = w.forward.iter().enumerate().map(|(m, c)| Complex64::from_polar(*c, -(m as f64) * t)).sum();
    for m in 1..=p.history {
        h += z.powu(m as u32) * w.backward[m - 1];
    }
    let mut diff: Vec<f64> = w.backward[p.history..].to_vec();
    let k = p.history + 1;
    let one = Complex64::new(1.0, 0.0);
    for j in 0..extra {
        h += z.powu((k + j) as u32) * diff[j] / (one - z).powu(j as u32 + 1);
        for i in (j + 1..diff.len()).rev() {
            diff[i] -= diff[i - 1];
        }
    }
    h * w.prefactor
}

#[test]
fn transfer_is_tap_dft() {
    for &(a, b, big_n, n, nu) in &[(0.0, 0.0, 4, 1, 0.5), (0.5, 0.5, 6, 2, 1.5), (1.0, 0.0, 5, 1, 0.3)] {
        let p = HahnFilterParams::new(a, b, big_n, n, nu, 0.5, 4096).unwrap();
        for &w in &[0.2, 2.0, 4.0] {
            let got = tap_dft(&p, w);
            let want = hahn_transfer(&p, w).unwrap();
            assert!((got - want).norm() < 1e-8 * want.norm(), "{got} {want}");
        }
    }
}

#[test]
fn export_round_trips_values() {
    let w = gram_n1_weights(3, 0.5, 1.0, 4).unwrap();
    let taps = w.effective_taps();
    for (line, (m, c)) in w.export_text().lines().skip(1).zip(taps) {
        let mut it = line.split_whitespace();
        assert_eq!(it.next().unwrap().parse::<i64>().unwrap(), m);
        assert_eq!(it.next().unwrap().parse::<f64>().unwrap(), c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_weights_match_brute_force(
        a in -0.9f64..2.0,
        b in -0.9f64..2.0,
        big_n in 1u32..9,
        n_frac in 0.0f64..1.0,
        nu_gap in 0.0f64..1.5,
    ) {
        let n = 1 + ((big_n as f64 * n_frac) as u32).min(big_n - 1);
        let nu = n as f64 - nu_gap;
        let p = HahnFilterParams::new(a, b, big_n, n, nu, 1.0, 24).unwrap();
        let w = hahn_weights(&p, Execution::Sequential).unwrap();
        let want = brute_taps(a, b, big_n as usize, n as usize, nu, 1.0, 24);
        let (f, back) = effective(&w);
        let scale = max_abs(&want.0).max(max_abs(&want.1));
        for (x, y) in f.iter().zip(&want.0).chain(back.iter().zip(&want.1)) {
            prop_assert!((x - y).abs() <= 1e-9 * scale, "{} vs {}", x, y);
        }
    }

    #[test]
    fn prop_linear_in_signal(
        seed in prop::collection::vec(-1.0f64..1.0, 40),
        k in -3.0f64..3.0,
    ) {
        let w = gram_n1_weights(3, 0.5, 0.1, 8).unwrap();
        let s = SampledSignal::new(0.0, 0.1, seed.clone(), true).unwrap();
        let ks = SampledSignal::new(0.0, 0.1, seed.iter().map(|v| k * v).collect(), true).unwrap();
        for i in 0..30 {
            let a = apply_discrete_filter(&s, &w, i).unwrap();
            let b = apply_discrete_filter(&ks, &w, i).unwrap();
            prop_assert!((k * a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }
}
