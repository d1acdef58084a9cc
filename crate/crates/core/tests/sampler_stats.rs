use std::f64::consts::PI;

use diamlab_core::sampler::{poisson_count, CircleDensity, CosineTerm};
use diamlab_core::{sample_binomial_process, sample_poisson_process, DistributionSpec, RngHandle};

const DRAWS: usize = 100_000;

fn draws(spec: &DistributionSpec, seed: u64, count: usize) -> Vec<Vec<f64>> {
    let mut rng = RngHandle::from_seed(seed);
    (0..count).map(|_| spec.sample_point(&mut rng).into_coords()).collect()
}

fn norm(p: &[f64]) -> f64 {
    p.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[test]
fn ball_radius_power_is_uniform() {
    for d in [2usize, 3, 7] {
        let pts = draws(&DistributionSpec::uniform_ball(d).unwrap(), 11 + d as u64, DRAWS);
        let mean = pts.iter().map(|p| norm(p).powi(d as i32)).sum::<f64>() / DRAWS as f64;
        assert!((mean - 0.5).abs() < 0.01, "d = {d}: {mean}");
        assert!(pts.iter().all(|p| norm(p) <= 1.0 + 1e-12));
    }
}

#[test]
fn sphere_points_have_unit_norm() {
    for d in [2usize, 3, 10] {
        for p in draws(&DistributionSpec::uniform_sphere(d).unwrap(), 5, 10_000) {
            assert!((norm(&p) - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn radial_power_deficit_cdf() {
    let pts = draws(&DistributionSpec::radial_power(2, 1.0, 0.0).unwrap(), 3, DRAWS);
    let below = pts.iter().filter(|p| 1.0 - norm(p) <= 0.25).count() as f64 / DRAWS as f64;
    assert!((below - 0.25).abs() < 0.01, "{below}");

    // atom 0.3 and F(s) = s^2 on the rest: P(η ≤ 0.5) = 0.3 + 0.7 * 0.25
    let pts = draws(&DistributionSpec::radial_power(3, 2.0, 0.3).unwrap(), 4, DRAWS);
    let on_sphere = pts.iter().filter(|p| (norm(p) - 1.0).abs() < 1e-12).count() as f64 / DRAWS as f64;
    let below = pts.iter().filter(|p| 1.0 - norm(p) <= 0.5).count() as f64 / DRAWS as f64;
    assert!((on_sphere - 0.3).abs() < 0.01, "{on_sphere}");
    assert!((below - 0.475).abs() < 0.01, "{below}");
}

#[test]
fn symmetric_families_have_centred_directions() {
    let specs = [
        DistributionSpec::uniform_ball(3).unwrap(),
        DistributionSpec::uniform_sphere(2).unwrap(),
        DistributionSpec::radial_power(5, 0.5, 0.1).unwrap(),
    ];
    for (k, spec) in specs.iter().enumerate() {
        let pts = draws(spec, 100 + k as u64, DRAWS);
        let mut mean = vec![0.0; spec.dim()];
        for p in &pts {
            let r = norm(p);
            mean.iter_mut().zip(p).for_each(|(m, x)| *m += x / r);
        }
        let len = norm(&mean) / DRAWS as f64;
        assert!(len < 0.02, "{spec:?}: {len}");
    }
}

#[test]
fn segment_points_lie_on_their_lines_with_right_frequencies() {
    let s = 0.5f64.sqrt();
    let directions = vec![vec![1.0, 0.0, 0.0], vec![s, s, 0.0], vec![0.0, 0.6, 0.8]];
    let probs = vec![0.2, 0.3, 0.5];
    let spec = DistributionSpec::segments(directions.clone(), probs.clone()).unwrap();
    let mut counts = [0usize; 3];
    for p in draws(&spec, 8, DRAWS) {
        // distance from p to span{x}: ‖p - ⟨p,x⟩x‖
        let dist = |x: &Vec<f64>| {
            let dot: f64 = p.iter().zip(x).map(|(a, b)| a * b).sum();
            norm(&p.iter().zip(x).map(|(a, b)| a - dot * b).collect::<Vec<_>>())
        };
        let (best, gap) = directions
            .iter()
            .map(dist)
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, g)| if g < acc.1 { (i, g) } else { acc });
        assert!(gap < 1e-9);
        counts[best] += 1;
        assert!(norm(&p) <= 1.0 + 1e-12);
    }
    for (c, p) in counts.iter().zip(&probs) {
        let se = (p * (1.0 - p) / DRAWS as f64).sqrt();
        let freq = *c as f64 / DRAWS as f64;
        assert!((freq - p).abs() < 3.0 * se, "{freq} vs {p}");
    }
}

#[test]
fn sector_points_stay_in_the_double_cone() {
    for (d, angle) in [(2usize, 0.3), (3, 0.5), (5, 1.2)] {
        let mut center = vec![0.0; d];
        center[0] = 0.6;
        center[1] = 0.8;
        let spec = DistributionSpec::sector(DistributionSpec::uniform_ball(d).unwrap(), center.clone(), angle).unwrap();
        for p in draws(&spec, 21, 20_000) {
            let cos = p.iter().zip(&center).map(|(a, b)| a * b).sum::<f64>().abs() / norm(&p);
            assert!(cos.min(1.0).acos() <= angle + 1e-12);
        }
    }
}

#[test]
fn thin_sector_is_rejected() {
    let base = DistributionSpec::uniform_ball(10).unwrap();
    let mut center = vec![0.0; 10];
    center[3] = 1.0;
    let err = DistributionSpec::sector(base, center, 0.05).unwrap_err();
    assert!(err.to_string().contains("sector too thin for rejection sampling"));
}

#[test]
fn circle_angles_pass_chi_square() {
    let terms = vec![
        CosineTerm { harmonic: 1, amplitude: 0.5, phase: 0.4 },
        CosineTerm { harmonic: 3, amplitude: 0.25, phase: -1.0 },
    ];
    let density = CircleDensity::cosine_mix(terms).unwrap();
    let spec = DistributionSpec::circle(density.clone()).unwrap();
    const BINS: usize = 36;
    let width = 2.0 * PI / BINS as f64;
    let mut observed = [0usize; BINS];
    for p in draws(&spec, 77, DRAWS) {
        assert!((norm(&p) - 1.0).abs() < 1e-12);
        let u = p[1].atan2(p[0]).rem_euclid(2.0 * PI);
        observed[((u / width) as usize).min(BINS - 1)] += 1;
    }
    let chi2: f64 = (0..BINS)
        .map(|b| {
            // Simpson's rule on 64 panels per bin
            let h = width / 64.0;
            let lo = b as f64 * width;
            let mass = (0..=64)
                .map(|k| {
                    let w = if k == 0 || k == 64 { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
                    w * density.eval(lo + k as f64 * h)
                })
                .sum::<f64>()
                * h
                / 3.0;
            let expected = mass * DRAWS as f64;
            (observed[b] as f64 - expected).powi(2) / expected
        })
        .sum();
    // 0.999 quantile of chi-square with 35 degrees of freedom
    assert!(chi2 < 66.62, "chi2 = {chi2}");
}

#[test]
fn poisson_count_moments() {
    let mut rng = RngHandle::from_seed(1234);
    let counts: Vec<f64> = (0..10_000).map(|_| poisson_count(1000.0, &mut rng).unwrap() as f64).collect();
    let mean = counts.iter().sum::<f64>() / counts.len() as f64;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (counts.len() - 1) as f64;
    assert!((mean - 1000.0).abs() < 10.0, "{mean}");
    assert!((var - 1000.0).abs() < 60.0, "{var}");
}

#[test]
fn processes_are_deterministic_and_sized() {
    let spec = DistributionSpec::uniform_ball(2).unwrap();
    let a = sample_binomial_process(&spec, 1000, &mut RngHandle::from_seed(9)).unwrap();
    let b = sample_binomial_process(&spec, 1000, &mut RngHandle::from_seed(9)).unwrap();
    assert_eq!(a.len(), 1000);
    assert_eq!(a, b);
    assert!(a.norms().iter().all(|&r| r <= 1.0));
    assert_eq!(sample_binomial_process(&spec, 1, &mut RngHandle::from_seed(0)).unwrap().len(), 1);

    let tiny = (0..200)
        .map(|s| sample_poisson_process(&spec, 0.5, &mut RngHandle::from_seed(s)).unwrap().len())
        .filter(|&n| n == 0)
        .count();
    assert!(tiny > 0, "a Poisson mean of 0.5 should sometimes give an empty cloud");
}

#[test]
fn same_seed_same_stream() {
    let spec = DistributionSpec::radial_power(4, 1.5, 0.0).unwrap();
    assert_eq!(draws(&spec, 42, 50), draws(&spec, 42, 50));
    assert_ne!(draws(&spec, 42, 50), draws(&spec, 43, 50));
}
