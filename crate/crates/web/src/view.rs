use std::f64::consts::FRAC_PI_2;

use catlab::metrics;
use catlab::sweep::{scan, Metric, MetricSpec, ScanSpec, ScanVariable, THETA_EPSILON};
use catlab::wigner::WignerFunction;
use catlab::{CatalysisParams, Complex64, Error, GridSpec, Result, ThermalChannel};

pub const MAX_IMAGE_SIDE: usize = 401;
pub const MAX_CURVE_POINTS: usize = 4000;

#[derive(Debug, Clone, PartialEq)]
pub struct WignerView {
    pub n: usize,
    pub bounds: [f64; 4],
    pub values: Vec<f64>,
    pub min: f64,
    pub max: f64,
    pub delta: f64,
}

fn invalid(name: &'static str, reason: String) -> Error {
    Error::InvalidParameter { name, reason }
}

pub fn params(z_re: f64, z_im: f64, theta: f64, m: u32) -> Result<CatalysisParams> {
    CatalysisParams::new(Complex64::new(z_re, z_im), theta, m)
}

pub fn wigner_view(params: &CatalysisParams, kt: f64, nbar: f64, half_width: f64, n: usize) -> Result<WignerView> {
    if !(2..=MAX_IMAGE_SIDE).contains(&n) {
        return Err(invalid("n", format!("image side must be in 2..={MAX_IMAGE_SIDE}, got {n}")));
    }
    let ch = ThermalChannel::new(kt, nbar)?;
    let w = WignerFunction::decohered(params, &ch);
    let (q, p) = w.center_qp();
    let spec = GridSpec::new(q - half_width, q + half_width, p - half_width, p + half_width, n, n)?;
    let mut values = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            values.push(w.value_qp(spec.q(i), spec.p(j)));
        }
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // midpoint sum on the displayed window, not the converged integral
    let delta = 0.5 * values.iter().map(|v| v.abs() - v).sum::<f64>() * spec.dq() * spec.dp();
    Ok(WignerView {
        n,
        bounds: [spec.q_min, spec.q_max, spec.p_min, spec.p_max],
        values,
        min,
        max,
        delta,
    })
}

pub fn metric_curve(name: &str, params: &CatalysisParams, points: usize) -> Result<Vec<f64>> {
    let metric = Metric::parse(name).ok_or_else(|| invalid("metric", format!("unknown metric {name:?}")))?;
    if points > MAX_CURVE_POINTS {
        return Err(invalid("points", format!("at most {MAX_CURVE_POINTS} points")));
    }
    let grid = ScanSpec::new(ScanVariable::Theta, THETA_EPSILON, FRAC_PI_2 - THETA_EPSILON, points, false)?;
    let r = scan(&MetricSpec::new(metric, *params), &grid)?;
    Ok(r.abscissas.iter().zip(&r.values).flat_map(|(&x, &v)| [x, v]).collect())
}

pub fn photon_distribution(params: &CatalysisParams, n_max: usize) -> Vec<f64> {
    metrics::pnd_vector(params, n_max)
}
