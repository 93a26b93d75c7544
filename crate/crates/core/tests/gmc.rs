use fhcore::asymptotics::{separated_ratio, smooth_ratio};
use fhcore::gmc::*;
use fhcore::lindet::{Family, GroupSpec};
use fhcore::rmt::{mc_collect, traces};
use fhcore::c64;
use std::f64::consts::{LN_2, PI, TAU};

#[test]
fn field_trivial_cases() {
    let d = FieldDraw::sample(8, Shift::Orthogonal, 1, 0);
    assert_eq!(truncated_field(&d, 0.4, 0.3, c64(0.0, 0.2), 0).unwrap(), c64(0.0, 0.0));
    let z = FieldDraw::zero(4, Shift::Orthogonal);
    let th = PI / 3.0;
    let want = 2.0 * ((2.0 * th).cos() / 2.0 + (4.0 * th).cos() / 4.0);
    let y = truncated_field(&z, th, 1.0, c64(0.0, 0.0), 4).unwrap();
    assert!((y.re - want).abs() < 1e-15 && y.im == 0.0);
    let ys = truncated_field(&FieldDraw::zero(4, Shift::Symplectic), th, 1.0, c64(0.0, 0.0), 4).unwrap();
    assert!((ys.re + want).abs() < 1e-15);
    assert!(truncated_field(&d, 0.4, 0.3, c64(0.0, 0.2), 9).is_err());
}

#[test]
fn field_variance_matches_covariance_sum() {
    let (k, th, alpha, beta) = (12, 0.9, 0.4, c64(0.0, 0.25));
    let n = 100_000;
    let y: Vec<f64> = (0..n)
        .map(|i| truncated_field(&FieldDraw::sample(k, Shift::Orthogonal, 99, i), th, alpha, beta, k).unwrap().re)
        .collect();
    let m = y.iter().sum::<f64>() / n as f64;
    let var = y.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    let want = variance(th, alpha, beta, k).re;
    assert!((var / want - 1.0).abs() < 5.0 * (2.0 / n as f64).sqrt(), "{var} vs {want}");
}

#[test]
fn shift_partial_sums() {
    assert_eq!(deterministic_shift(1.0, 0), (0.0, 0.0));
    let (x, _) = deterministic_shift(PI / 2.0, 6);
    assert!((x - (-0.5 + 0.25 - 1.0 / 6.0)).abs() < 1e-15);
    let th = PI / 3.0;
    let (x, xh) = deterministic_shift(th, 1_000_000);
    assert!((x + 0.5 * (2.0 * th.sin()).ln()).abs() < 1e-5);
    // Σ_m sin 2mθ / 2m = (π − 2θ)/4 on (0, π).
    assert!((xh + (PI - 2.0 * th) / 4.0).abs() < 1e-5);
}

#[test]
fn covariance_properties() {
    assert_eq!(covariance_partial(0.3, 1.2, 0.0, c64(0.0, 0.0), 50), c64(0.0, 0.0));
    let b = c64(0.0, 0.15);
    let a = covariance_partial(0.3, 1.2, 0.35, b, 50);
    let s = covariance_partial(1.2, 0.3, 0.35, b, 50);
    assert!((a - s).norm() < 1e-14);
    assert_eq!(covariance_closed_form(0.3, 1.2, 0.0, c64(0.0, 0.0)).unwrap(), c64(0.0, 0.0));
    // Pointwise tails oscillate like cos(kφ)/k, so monotonicity is checked
    // on the worst case over several separated pairs.
    let pairs = [(0.3, 1.2), (1.0, 4.0), (2.5, 5.5), (4.0, 4.9)];
    let worst = |k: usize| {
        pairs
            .iter()
            .map(|&(t1, t2)| (covariance_partial(t1, t2, 0.35, b, k) - covariance_closed_form(t1, t2, 0.35, b).unwrap()).norm())
            .fold(0.0, f64::max)
    };
    let (e3, e4, e5) = (worst(1_000), worst(10_000), worst(100_000));
    assert!(e5 < 1e-3 && e5 < e4 && e4 < e3, "{e3} {e4} {e5}");
    let th = 0.7;
    let c = covariance_closed_form(th, th + PI, 0.4, c64(0.0, 0.0)).unwrap();
    let want = -2.0 * 0.16 * LN_2 - 2.0 * 0.16 * (2.0 * th.cos()).abs().ln();
    assert!((c.re - want).abs() < 1e-13 && c.im.abs() < 1e-13);
    assert!(covariance_closed_form(1.0, 1.0, 0.3, b).is_err());
    assert!(covariance_closed_form(1.0, TAU - 1.0, 0.3, b).is_err());
}

#[test]
fn covariance_agrees_with_two_point_ratios() {
    let (alpha, beta) = (0.3, c64(0.0, 0.1));
    for (t1, t2) in [(0.4, 1.9), (1.0, 4.0), (2.0, 5.0), (3.5, 5.8)] {
        for k in [1, 5, 40] {
            let kk = smooth_ratio(t1, t2, alpha, beta, k);
            let cov = covariance_partial(t1, t2, alpha, beta, k).exp();
            assert!((kk - cov.re).abs() < 1e-12 * kk && cov.im.abs() < 1e-12);
        }
        let full = separated_ratio(t1, t2, alpha, beta).unwrap();
        let cov = covariance_closed_form(t1, t2, alpha, beta).unwrap().exp();
        assert!((full - cov).norm() < 1e-12 * cov.norm(), "({t1}, {t2}): {full} vs {cov}");
    }
}

#[test]
fn measure_trivial_and_rejections() {
    let cells = uniform_cells(6);
    let d = FieldDraw::sample(10, Shift::Orthogonal, 3, 0);
    let g = gmc_measure(&d, 0, 0.4, c64(0.0, 0.1), &cells).unwrap();
    for m in &g.masses {
        assert!((m - TAU / 6.0).abs() < 1e-13);
    }
    assert!(gmc_measure(&d, 4, 0.4, c64(0.1, 0.1), &cells).is_err());
    assert!(gmc_measure(&d, 4, 0.4, c64(0.0, 0.1), &[1.0, 0.5]).is_err());
    assert!(gmc_measure(&d, 11, 0.4, c64(0.0, 0.1), &cells).is_err());
}

#[test]
fn first_moment_is_lebesgue_for_every_k() {
    let cells = uniform_cells(8);
    let (alpha, beta) = (0.3, c64(0.0, 0.1));
    for shift in [Shift::Orthogonal, Shift::Symplectic] {
        for k in [4, 16, 32] {
            let runs = gmc_replicates(k, alpha, beta, &cells, shift, 4000, 5).unwrap();
            assert!(runs.iter().all(|r| r.masses.iter().all(|m| *m > 0.0)));
            let (mean, var) = cell_statistics(&runs);
            for (m, v) in mean.iter().zip(&var) {
                assert!((m - TAU / 8.0).abs() < 4.0 * (v / 4000.0).sqrt(), "k = {k}: {m}");
            }
            let tot: Vec<f64> = runs.iter().map(GMCGrid::total_mass).collect();
            let tm = tot.iter().sum::<f64>() / 4000.0;
            let tv = tot.iter().map(|t| (t - tm).powi(2)).sum::<f64>() / 3999.0;
            assert!((tm - TAU).abs() < 4.0 * (tv / 4000.0).sqrt(), "k = {k}: total {tm}");
        }
    }
}

#[test]
fn arc_second_moment() {
    let (alpha, beta, k) = (0.35, c64(0.0, 0.15), 16);
    let (a, b) = (0.5, 1.5);
    let n = 8000;
    let runs = gmc_replicates(k, alpha, beta, &[a, b], Shift::Orthogonal, n, 8).unwrap();
    let sq: Vec<f64> = runs.iter().map(|r| r.masses[0].powi(2)).collect();
    let m = sq.iter().sum::<f64>() / n as f64;
    let se = (sq.iter().map(|s| (s - m).powi(2)).sum::<f64>() / ((n - 1) * n) as f64).sqrt();
    let want = second_moment(a, b, alpha, beta, k, 96);
    assert!(want.im.abs() < 1e-12);
    assert!((m - want.re).abs() < 4.0 * se, "{m} vs {} ± {se}", want.re);
}

#[test]
fn sobolev_norms() {
    assert!((sobolev_norm(&[(1, c64(1.0, 0.0))], -1.0) - 0.5f64.sqrt()).abs() < 1e-15);
    assert_eq!(sobolev_norm(&[], 0.5), 0.0);
    assert_eq!(sobolev_norm(&[(3, c64(0.0, 0.0)), (-2, c64(0.0, 0.0))], -0.3), 0.0);
    let mut means = vec![];
    for n in [8, 16, 32] {
        let g = GroupSpec::new(Family::SoEven, 2 * n).unwrap();
        let v = mc_collect(g, 1000, 4, |s| sobolev_norm(&re_log_coefficients(&traces(s, 400)), -0.3).powi(2)).unwrap();
        means.push(v.iter().sum::<f64>() / v.len() as f64);
    }
    let (lo, hi) = means.iter().fold((f64::MAX, 0.0f64), |(l, h), m| (l.min(*m), h.max(*m)));
    assert!(hi < 1.25 * lo, "{means:?}");
}

#[test]
fn flags() {
    assert!(parameter_flags(0.3, c64(0.0, 0.1)).in_established_range());
    assert!(parameter_flags(-0.3, c64(0.0, 0.0)).alpha_below_quarter);
    assert!(parameter_flags(0.7, c64(0.0, 0.3)).variance_above_half);
    assert!(!parameter_flags(0.7, c64(0.0, 0.3)).alpha_below_quarter);
}
