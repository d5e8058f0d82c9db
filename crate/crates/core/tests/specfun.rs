use approx::assert_relative_eq;
use fracfilt::specfun::*;
use fracfilt::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(x: Complex64, y: Complex64, tol: f64) -> bool {
    (x - y).norm() <= tol * x.norm().max(y.norm()).max(1e-300)
}

#[test]
fn gamma_special_values() {
    assert_relative_eq!(gamma(0.5).unwrap(), PI.sqrt(), max_relative = 1e-15);
    assert_relative_eq!(gamma(-1.5).unwrap(), 4.0 * PI.sqrt() / 3.0, max_relative = 1e-14);
    assert_eq!(gamma(6.0).unwrap(), 120.0);
    assert!(gamma(-3.0).is_err());
    assert_eq!(reciprocal_gamma(-3.0), 0.0);
    assert_relative_eq!(digamma(1.0).unwrap(), -0.5772156649015329, max_relative = 1e-14);
    assert_relative_eq!(gamma_ratio(200.5, 200.0).unwrap(), 14.133299559727885, max_relative = 1e-9);
    assert_relative_eq!(
        gamma_ratio(206.7535113145208, 69.55455079230974).unwrap(),
        5.810715679473639e290,
        max_relative = 1e-12
    );
}

#[test]
fn elementary_2f1() {
    for &z in &[-3.0f64, -0.5, 0.3, 0.8, 0.95] {
        let got = gauss_2f1(1.0, 1.0, 2.0, c(z, 0.0)).unwrap();
        assert_relative_eq!(got.re, -(1.0 - z).ln() / z, max_relative = 1e-13);
        let got = gauss_2f1(0.5, 1.0, 1.5, c(-z * z, 0.0)).unwrap();
        assert_relative_eq!(got.re, z.abs().atan() / z.abs(), max_relative = 1e-13);
    }
}

#[test]
fn saalschutz_sum() {
    for &(m, a, b, cc) in &[(3usize, 0.5, 1.3, 2.1), (5, -0.7, 2.0, 0.4), (1, 1.0, 1.0, 3.0)] {
        let mf = m as f64;
        let got = hyp_3f2_unit([-mf, a, b], [cc, 1.0 + a + b - cc - mf], m + 1).unwrap();
        let want = pochhammer(cc - a, m) * pochhammer(cc - b, m) / (pochhammer(cc, m) * pochhammer(cc - a - b, m));
        assert_relative_eq!(got, want, max_relative = 1e-12);
    }
}

#[test]
fn kummer_bessel_identity() {
    // M(n+1, 2n+2; 2iz) = Gamma(n+3/2) e^{iz} (z/2)^(-n-1/2) J_{n+1/2}(z)
    for n in 0..4usize {
        for &z in &[0.3, 2.0, 9.0, 20.0, 45.0] {
            let nf = n as f64;
            let j = (2.0 * z / PI).sqrt() * spherical_bessel_j(n, z);
            let want = Complex64::from_polar(1.0, z) * (gamma(nf + 1.5).unwrap() * (z / 2.0).powf(-nf - 0.5) * j);
            let got = kummer_m(nf + 1.0, 2.0 * nf + 2.0, c(0.0, 2.0 * z)).unwrap();
            assert!(close(got, want, 1e-10), "n={n} z={z} {got} {want}");
        }
    }
}

#[test]
fn spherical_bessel_closed_forms() {
    for &x in &[0.1f64, 1.0, 5.0, 30.0] {
        let (s, co) = x.sin_cos();
        assert_relative_eq!(spherical_bessel_j(0, x), s / x, max_relative = 1e-14);
        assert_relative_eq!(spherical_bessel_j(1, x), s / (x * x) - co / x, max_relative = 1e-10, epsilon = 1e-15);
        assert_relative_eq!(spherical_bessel_ratio(1, x) * x, spherical_bessel_j(1, x), max_relative = 1e-12);
    }
    assert_eq!(spherical_bessel_j(0, 0.0), 1.0);
    assert_eq!(spherical_bessel_j(3, 0.0), 0.0);
    assert_relative_eq!(spherical_bessel_ratio(2, 0.0), 1.0 / 15.0, max_relative = 1e-15);
}

proptest! {
    #[test]
    fn prop_gamma_recurrence(x in -20.0f64..40.0) {
        prop_assume!((x - x.round()).abs() > 1e-3);
        let g = gamma(x).unwrap();
        prop_assert!((gamma(x + 1.0).unwrap() - x * g).abs() <= 1e-13 * (x * g).abs());
    }

    #[test]
    fn prop_gamma_reflection(x in -5.0f64..5.0) {
        prop_assume!((x - x.round()).abs() > 1e-3);
        let lhs = gamma(x).unwrap() * gamma(1.0 - x).unwrap();
        let rhs = PI / sin_pi(x);
        prop_assert!((lhs - rhs).abs() <= 1e-13 * rhs.abs());
    }

    #[test]
    fn prop_gamma_duplication(x in 0.05f64..60.0) {
        let lhs = gamma(x).unwrap() * gamma(x + 0.5).unwrap();
        let rhs = 2f64.powf(1.0 - 2.0 * x) * PI.sqrt() * gamma(2.0 * x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
    }

    #[test]
    fn prop_gamma_ratio_matches_logs(a in 0.1f64..160.0, b in 0.1f64..160.0) {
        let (la, sa) = ln_gamma(a);
        let (lb, sb) = ln_gamma(b);
        let want = sa * sb * (la - lb).exp();
        prop_assert!((gamma_ratio(a, b).unwrap() - want).abs() <= 1e-12 * (1.0 + (la - lb).abs()) * want.abs());
    }

    #[test]
    fn prop_digamma_recurrence(x in 0.1f64..50.0) {
        prop_assert!((digamma(x + 1.0).unwrap() - digamma(x).unwrap() - 1.0 / x).abs() <= 1e-13 * (1.0 + 1.0 / x));
    }

    #[test]
    fn prop_2f1_euler_and_pfaff(a in -2.5f64..2.5, b in -2.5f64..2.5, cc in 0.3f64..4.0, z in -0.45f64..0.45) {
        let zc = c(z, 0.0);
        let f = gauss_2f1(a, b, cc, zc).unwrap();
        let euler = gauss_2f1(cc - a, cc - b, cc, zc).unwrap() * (1.0 - z).powf(cc - a - b);
        let pfaff = gauss_2f1(a, cc - b, cc, c(z / (z - 1.0), 0.0)).unwrap() * (1.0 - z).powf(-a);
        prop_assert!(close(f, euler, 1e-11), "{} {}", f, euler);
        prop_assert!(close(f, pfaff, 1e-11), "{} {}", f, pfaff);
    }

    #[test]
    fn prop_2f1_complex_euler(a in -2.0f64..2.0, b in -2.0f64..2.0, cc in 0.3f64..4.0, r in 0.0f64..0.85, t in -3.1f64..3.1) {
        let z = Complex64::from_polar(r, t);
        let f = gauss_2f1(a, b, cc, z).unwrap();
        let euler = gauss_2f1(cc - a, cc - b, cc, z).unwrap() * (1.0 - z).powf(cc - a - b);
        prop_assert!(close(f, euler, 1e-10), "{} {}", f, euler);
    }

    #[test]
    fn prop_kummer_transformation(a in -3.0f64..5.0, cc in 0.2f64..8.0, x in -20.0f64..20.0, y in -20.0f64..20.0) {
        let z = c(x, y);
        let lhs = kummer_m(a, cc, z).unwrap();
        let rhs = z.exp() * kummer_m(cc - a, cc, -z).unwrap();
        prop_assert!(close(lhs, rhs, 1e-9), "{} {}", lhs, rhs);
    }

    #[test]
    fn prop_kummer_imaginary_axis(a in 0.5f64..6.0, gap in 0.5f64..6.0, y in -200.0f64..200.0) {
        let z = c(0.0, y);
        let cc = a + gap;
        let lhs = kummer_m(a, cc, z).unwrap();
        let rhs = z.exp() * kummer_m(cc - a, cc, -z).unwrap();
        prop_assert!(close(lhs, rhs, 1e-9), "{} {}", lhs, rhs);
    }

    #[test]
    fn prop_kummer_scaled(a in -3.0f64..3.0, cc in 0.2f64..6.0, y in 0.0f64..80.0) {
        let direct = (-y).exp() * kummer_m(a, cc, c(y, 0.0)).unwrap().re;
        let scaled = kummer_m_scaled(a, cc, y).unwrap();
        prop_assert!((direct - scaled).abs() <= 1e-9 * direct.abs().max(scaled.abs()).max(1e-300), "{} {}", direct, scaled);
    }

    #[test]
    fn prop_bessel_recurrence(order in 0.5f64..6.0, x in 0.1f64..15.0) {
        let lhs = bessel_j_series(order - 1.0, x) + bessel_j_series(order + 1.0, x);
        let rhs = 2.0 * order / x * bessel_j_series(order, x);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
    }

    #[test]
    fn prop_spherical_recurrence(n in 1usize..12, x in 0.05f64..60.0) {
        let lhs = spherical_bessel_j(n - 1, x) + spherical_bessel_j(n + 1, x);
        let rhs = (2 * n + 1) as f64 / x * spherical_bessel_j(n, x);
        let scale = spherical_bessel_j(n - 1, x).abs() + spherical_bessel_j(n + 1, x).abs();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1e-300), "{} {}", lhs, rhs);
    }
}
