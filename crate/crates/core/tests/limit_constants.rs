use std::f64::consts::PI;

use approx::assert_relative_eq;
use diamlab_core::limits::{
    aprs_envelope, cap_fraction, gamma_exponent, limit_cdf, sigma0_circle_density, sigma0_sector,
    sigma0_spherical, zeta_tail_constant, LimitLaw, ZETA_2,
};

/// `Γ(m/2)` for a positive integer `m`, from `Γ(1) = 1` and `Γ(½) = √π`.
fn gamma_half(m: u32) -> f64 {
    let (mut x, mut g) = if m.is_multiple_of(2) { (1.0, 1.0) } else { (0.5, PI.sqrt()) };
    while 2.0 * x < m as f64 {
        g *= x;
        x += 1.0;
    }
    g
}

fn c_uniform_ball(d: u32) -> f64 {
    let df = d as f64;
    2f64.powi(d as i32 + 1) * df * gamma_half(d + 2)
        / (PI.sqrt() * (df + 1.0) * (df + 3.0) * gamma_half(d + 1))
}

fn c_sphere(d: u32) -> f64 {
    2f64.powi(d as i32 - 1) * gamma_half(d) / ((d as f64 - 1.0) * PI.sqrt() * gamma_half(d - 1))
}

#[test]
fn half_integer_gamma_helper() {
    assert_eq!(gamma_half(2), 1.0);
    assert_eq!(gamma_half(8), 6.0);
    assert_relative_eq!(gamma_half(5), 0.75 * PI.sqrt(), max_relative = 1e-15);
}

#[test]
fn uniform_ball_constant_matches_closed_form() {
    for d in 2..=10 {
        let got = sigma0_spherical(d, 1.0, d as f64, false).unwrap();
        assert_relative_eq!(got, c_uniform_ball(d), max_relative = 1e-12);
        assert_eq!(gamma_exponent(d, 1.0), (d as f64 + 3.0) / 2.0);
    }
    let half = 0.5 * sigma0_spherical(2, 1.0, 2.0, false).unwrap();
    assert_relative_eq!(half, 16.0 / (15.0 * PI), max_relative = 1e-12);
}

#[test]
fn sphere_constant_matches_closed_form() {
    for d in 2..=10 {
        assert_relative_eq!(zeta_tail_constant(d).unwrap(), c_sphere(d), max_relative = 1e-12);
        assert_relative_eq!(sigma0_spherical(d, 0.0, 1.0, true).unwrap(), c_sphere(d), max_relative = 1e-12);
    }
    assert_relative_eq!(c_sphere(2), 2.0 / PI, max_relative = 1e-15);
    assert_relative_eq!(c_sphere(3), 1.0, max_relative = 1e-15);
}

#[test]
fn disk_law_value_at_one() {
    let law = LimitLaw::continuous(2.5, 32.0 / (15.0 * PI)).unwrap();
    // 1 - exp(-16/(15π))
    assert_relative_eq!(law.cdf(1.0).unwrap(), 0.287_895_454_842_501_9, max_relative = 1e-12);
}

#[test]
fn disk_law_inside_envelope() {
    let law = LimitLaw::continuous(2.5, 32.0 / (15.0 * PI)).unwrap();
    for k in 1..=100 {
        let t = 0.05 * k as f64;
        let (lo, hi) = aprs_envelope(t);
        let f = law.cdf(t).unwrap();
        assert!(lo <= f && f <= hi, "t = {t}: {lo} {f} {hi}");
    }
}

#[test]
fn cdfs_are_nondecreasing_and_bounded() {
    let laws = [
        LimitLaw::continuous(2.5, 32.0 / (15.0 * PI)).unwrap(),
        LimitLaw::continuous(0.5, 2.0 / PI).unwrap(),
        LimitLaw::continuous(1.0, 1.0).unwrap(),
        LimitLaw::segments(vec![1.0]).unwrap(),
        LimitLaw::segments(vec![0.2, 0.3, 0.5]).unwrap(),
        LimitLaw::SegmentsZeta,
    ];
    for law in &laws {
        let mut prev = 0.0;
        for k in 0..=10_000 {
            let f = limit_cdf(law, 0.005 * k as f64).unwrap();
            assert!((0.0..=1.0).contains(&f));
            assert!(f >= prev, "{law:?} decreases at step {k}");
            prev = f;
        }
        assert_eq!(limit_cdf(law, 0.0).unwrap().to_bits(), 0.0f64.to_bits());
    }
}

#[test]
fn zeta_closed_form_matches_long_product() {
    let truncated = LimitLaw::zeta_segments_truncated(1_000_000).unwrap();
    for k in 0..=400 {
        let t = 0.05 * k as f64;
        let closed = limit_cdf(&LimitLaw::SegmentsZeta, t).unwrap();
        let product = limit_cdf(&truncated, t).unwrap();
        assert!((closed - product).abs() < 1e-6, "t = {t}: {closed} vs {product}");
    }
}

#[test]
fn zeta_argument_simplifies() {
    // π √(t / (2ζ(2))) = √(3t)
    let t: f64 = 2.7;
    let y = (3.0 * t).sqrt();
    let expected = 1.0 - (-t / 2.0).exp() * y.sinh() / y;
    assert_relative_eq!(limit_cdf(&LimitLaw::SegmentsZeta, t).unwrap(), expected, max_relative = 1e-13);
    assert_relative_eq!(ZETA_2, PI * PI / 6.0);
}

#[test]
fn circle_constant_for_uniform_and_cosine_densities() {
    let uniform = sigma0_circle_density(|_| 1.0 / (2.0 * PI)).unwrap();
    assert!((uniform - 2.0 / PI).abs() < 1e-10);
    // f = (1 + a cos u)/(2π): f(u) f(u+π) = (1 - a² cos² u)/(4π²), integral (2π - π a²)/(4π²)
    let a = 0.6;
    let got = sigma0_circle_density(|u| (1.0 + a * u.cos()) / (2.0 * PI)).unwrap();
    assert!((got - (2.0 - a * a) / PI).abs() < 1e-12);
    // supported on a half circle: no antipodal pairs
    let half = sigma0_circle_density(|u| if u.sin() > 0.0 { 1.0 / PI } else { 0.0 }).unwrap();
    assert_eq!(half, 0.0);
}

#[test]
fn cap_fraction_reference_values() {
    // d = 3: area fraction (1 - cos θ)/2
    for &theta in &[0.1, 0.7, 1.2, PI / 2.0, 2.0, 3.0] {
        assert_relative_eq!(cap_fraction(3, theta).unwrap(), (1.0 - f64::cos(theta)) / 2.0, max_relative = 1e-12);
    }
    // d = 2: arc fraction θ/π
    for &theta in &[0.3, 1.0, 2.5] {
        assert_relative_eq!(cap_fraction(2, theta).unwrap(), theta / PI, max_relative = 1e-12);
    }
}

#[test]
fn full_sector_keeps_base_scale() {
    let base = sigma0_spherical(2, 1.0, 2.0, false).unwrap();
    assert_relative_eq!(sigma0_sector(base, 2, PI / 2.0).unwrap(), base, max_relative = 1e-15);
    assert_relative_eq!(sigma0_sector(base, 3, PI / 3.0).unwrap(), 2.0 * base, max_relative = 1e-12);
}

#[test]
fn continuous_laws_reach_one_at_a_thousand() {
    use diamlab_core::limits::law_for;
    use diamlab_core::DistributionSpec;
    let specs = [
        DistributionSpec::uniform_ball(2).unwrap(),
        DistributionSpec::uniform_ball(5).unwrap(),
        DistributionSpec::uniform_sphere(3).unwrap(),
        DistributionSpec::radial_power(4, 0.5, 0.0).unwrap(),
        DistributionSpec::radial_power(3, 1.0, 0.4).unwrap(),
    ];
    for spec in &specs {
        let law = law_for(spec).unwrap().unwrap();
        assert!((1.0 - law.cdf(1e3).unwrap()) < 1e-6, "{law:?}");
    }
    // the uniform circle has γ = ½ and a slow tail: exp(-√1000 / π)
    let circle = LimitLaw::continuous(0.5, 2.0 / PI).unwrap();
    let tail = (-(1000f64).sqrt() / PI).exp();
    assert_relative_eq!(1.0 - circle.cdf(1e3).unwrap(), tail, max_relative = 1e-9);
}
