use std::f64::consts::FRAC_PI_2;

use catlab::sweep::{
    find_metric_peak, scan, ExtremumKind, Metric, MetricSpec, ScanSpec, ScanVariable, THETA_EPSILON,
};
use catlab::CatalysisParams;

fn theta_scan(n: usize) -> ScanSpec {
    ScanSpec::new(ScanVariable::Theta, THETA_EPSILON, FRAC_PI_2 - THETA_EPSILON, n, true).unwrap()
}

#[test]
fn g2_scan_locates_the_two_photon_peak() {
    let spec = MetricSpec::new(Metric::G2, CatalysisParams::real(1.0, 0.5, 2).unwrap());
    let r = scan(&spec, &theta_scan(800)).unwrap();
    let top = r
        .extrema
        .iter()
        .filter(|e| e.kind == ExtremumKind::Max)
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .unwrap();
    assert!((top.location - 0.53).abs() < 0.01, "{top:?}");
    assert!((top.value - 6.83).abs() < 0.06, "{top:?}");
}

#[test]
fn four_photon_peak_in_bracket() {
    let spec = MetricSpec::new(Metric::G2, CatalysisParams::real(1.0, 0.5, 4).unwrap());
    let (x, v) = find_metric_peak(&spec, ScanVariable::Theta, (0.3, 0.5)).unwrap();
    assert!((x - 0.39).abs() <= 0.01 && (v - 6.72).abs() <= 0.05);
}

#[test]
fn zero_crossings_are_resolution_stable() {
    for (metric, m) in [(Metric::MandelQ, 1), (Metric::MandelQ, 3), (Metric::SOpt, 2), (Metric::DbQ, 1)] {
        for z in [1.0, 2.0] {
            let spec = MetricSpec::new(metric, CatalysisParams::real(z, 0.5, m).unwrap());
            let a = scan(&spec, &theta_scan(600)).unwrap();
            let b = scan(&spec, &theta_scan(1200)).unwrap();
            assert_eq!(a.zero_crossings.len(), b.zero_crossings.len(), "{metric:?} m={m} z={z}");
            for (x, y) in a.zero_crossings.iter().zip(&b.zero_crossings) {
                assert!((x - y).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn scans_are_bit_identical() {
    let spec = MetricSpec::new(Metric::G2, CatalysisParams::real(2.0_f64.sqrt(), 0.5, 3).unwrap());
    let a = scan(&spec, &theta_scan(500)).unwrap();
    let b = scan(&spec, &theta_scan(500)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn refined_extrema_stay_in_their_coarse_bracket() {
    let spec = MetricSpec::new(Metric::MandelQ, CatalysisParams::real(2.0, 0.5, 2).unwrap());
    let grid = theta_scan(300);
    let xs = grid.abscissas();
    let step = xs[1] - xs[0];
    let r = scan(&spec, &grid).unwrap();
    assert!(!r.extrema.is_empty());
    for e in &r.extrema {
        let nearest = xs.iter().map(|x| (x - e.location).abs()).fold(f64::INFINITY, f64::min);
        assert!(nearest <= step + 1e-12);
    }
}

#[test]
fn wigner_minimum_scan_over_decay_time() {
    let spec = MetricSpec::new(Metric::MinWigner, CatalysisParams::real(1.0, std::f64::consts::FRAC_PI_3, 1).unwrap());
    let grid = ScanSpec::new(ScanVariable::Kt, 0.0, 0.5, 21, false).unwrap();
    let r = scan(&spec, &grid).unwrap();
    assert!(r.values.windows(2).all(|w| w[1] >= w[0]));
    assert!(r.values[0] < 0.0 && *r.values.last().unwrap() >= 0.0);
}
