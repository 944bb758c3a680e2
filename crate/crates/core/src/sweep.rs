//! One-dimensional parameter scans with extremum and zero-crossing extraction.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::catalysis::CatalysisParams;
use crate::error::{Error, Result};
use crate::metrics;
use crate::wigner::{self, ThermalChannel};

/// Abscissa tolerance for golden-section refinement.
pub const REFINE_TOLERANCE: f64 = 1e-6;
/// Abscissa tolerance for zero-crossing bisection.
pub const ZERO_TOLERANCE: f64 = 1e-8;
/// Distance kept from the ends of `[0, π/2]` in θ scans (tan θ diverges at π/2).
pub const THETA_EPSILON: f64 = 1e-3;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScanVariable {
    Theta,
    /// Real input amplitude `z`.
    ZReal,
    /// Scaled decay time `κt`.
    Kt,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSpec {
    pub variable: ScanVariable,
    pub lo: f64,
    pub hi: f64,
    pub n_points: usize,
    pub refine: bool,
}

impl ScanSpec {
    pub fn new(variable: ScanVariable, lo: f64, hi: f64, n_points: usize, refine: bool) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::invalid("scan", format!("need lo < hi, got [{lo}, {hi}]")));
        }
        if n_points < 2 {
            return Err(Error::invalid("scan", "need at least 2 points"));
        }
        Ok(ScanSpec {
            variable,
            lo,
            hi,
            n_points,
            refine,
        })
    }

    /// 2000 points on `(ε, π/2 − ε)` with refinement.
    pub fn theta_default() -> Self {
        ScanSpec {
            variable: ScanVariable::Theta,
            lo: THETA_EPSILON,
            hi: FRAC_PI_2 - THETA_EPSILON,
            n_points: 2000,
            refine: true,
        }
    }

    pub fn abscissas(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.n_points - 1) as f64;
        (0..self.n_points)
            .map(|i| {
                if i + 1 == self.n_points {
                    self.hi
                } else {
                    self.lo + i as f64 * step
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub location: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub abscissas: Vec<f64>,
    /// `NaN` at skipped points.
    pub values: Vec<f64>,
    pub skipped: Vec<usize>,
    pub extrema: Vec<Extremum>,
    pub zero_crossings: Vec<f64>,
}

/// A named diagnostic evaluated at fixed parameters while one variable moves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    MandelQ,
    G2,
    VarQ,
    VarP,
    DbQ,
    DbP,
    SOpt,
    MeanPhoton,
    /// Photon-number probability `p_n`.
    Pnd(usize),
    /// Minimum of the (decohered) Wigner function.
    MinWigner,
    /// Wigner negative volume at the channel's `κt`.
    NegativeVolume,
}

impl Metric {
    pub fn parse(name: &str) -> Option<Self> {
        let lower = name.to_ascii_lowercase();
        Some(match lower.as_str() {
            "q" | "mandel_q" | "mandel-q" => Metric::MandelQ,
            "g2" => Metric::G2,
            "var_q" | "var-q" => Metric::VarQ,
            "var_p" | "var-p" => Metric::VarP,
            "db_q" | "db-q" => Metric::DbQ,
            "db_p" | "db-p" => Metric::DbP,
            "s_opt" | "s-opt" | "sopt" => Metric::SOpt,
            "mean_photon" | "nbar" => Metric::MeanPhoton,
            "min_w" | "min-w" | "min_wigner" => Metric::MinWigner,
            "delta" | "negative_volume" => Metric::NegativeVolume,
            other => {
                let n = other.strip_prefix('p')?.parse().ok()?;
                Metric::Pnd(n)
            }
        })
    }

    pub fn name(&self) -> String {
        match self {
            Metric::MandelQ => "Q".into(),
            Metric::G2 => "g2".into(),
            Metric::VarQ => "var_q".into(),
            Metric::VarP => "var_p".into(),
            Metric::DbQ => "db_q".into(),
            Metric::DbP => "db_p".into(),
            Metric::SOpt => "s_opt".into(),
            Metric::MeanPhoton => "mean_photon".into(),
            Metric::Pnd(n) => format!("p{n}"),
            Metric::MinWigner => "min_w".into(),
            Metric::NegativeVolume => "delta".into(),
        }
    }
}

/// A metric plus the parameters it is evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSpec {
    pub metric: Metric,
    pub params: CatalysisParams,
    pub channel: ThermalChannel,
}

impl MetricSpec {
    pub fn new(metric: Metric, params: CatalysisParams) -> Self {
        MetricSpec {
            metric,
            params,
            channel: ThermalChannel::identity(),
        }
    }

    pub fn with_channel(mut self, channel: ThermalChannel) -> Self {
        self.channel = channel;
        self
    }

    pub fn eval(&self) -> Result<f64> {
        let p = &self.params;
        match self.metric {
            Metric::MandelQ => metrics::mandel_q(p),
            Metric::G2 => metrics::g2(p),
            Metric::VarQ => Ok(metrics::quadrature_variances(p)?.var_q),
            Metric::VarP => Ok(metrics::quadrature_variances(p)?.var_p),
            Metric::DbQ => Ok(metrics::quadrature_variances(p)?.db_q),
            Metric::DbP => Ok(metrics::quadrature_variances(p)?.db_p),
            Metric::SOpt => metrics::s_opt(p),
            Metric::MeanPhoton => Ok(metrics::mean_photon(p)),
            Metric::Pnd(n) => Ok(metrics::pnd(p, n)),
            Metric::MinWigner => Ok(wigner::min_wigner(p, &self.channel)?.value),
            Metric::NegativeVolume => wigner::negative_volume_decohered(p, &self.channel),
        }
    }

    /// The same metric with `variable` set to `x`.
    pub fn at(&self, variable: ScanVariable, x: f64) -> Result<MetricSpec> {
        let mut out = *self;
        match variable {
            ScanVariable::Theta => out.params = self.params.with_theta(x)?,
            ScanVariable::ZReal => out.params = self.params.with_z(Complex64::new(x, 0.0))?,
            ScanVariable::Kt => out.channel = ThermalChannel::new(x, self.channel.nbar)?,
        }
        Ok(out)
    }

    pub fn eval_at(&self, variable: ScanVariable, x: f64) -> Result<f64> {
        self.at(variable, x)?.eval()
    }
}

/// Scans `metric` along `spec`.
pub fn scan(metric: &MetricSpec, spec: &ScanSpec) -> Result<ScanResult> {
    let variable = spec.variable;
    scan_fn(&|x| metric.eval_at(variable, x), spec)
}

#[cfg(feature = "parallel")]
fn evaluate_all<F>(f: &F, xs: &[f64]) -> Vec<Result<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    use rayon::prelude::*;
    xs.par_iter().map(|&x| f(x)).collect()
}

#[cfg(not(feature = "parallel"))]
fn evaluate_all<F>(f: &F, xs: &[f64]) -> Vec<Result<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    xs.iter().map(|&x| f(x)).collect()
}

/// Uniform evaluation of `f`, then (optionally) golden-section refinement of
/// every strict interior local extremum and bisection of every sign change.
///
/// Points where `f` fails are recorded in `skipped` and excluded from the
/// extremum and crossing search.
pub fn scan_fn<F>(f: &F, spec: &ScanSpec) -> Result<ScanResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let xs = spec.abscissas();
    let evaluated = evaluate_all(f, &xs);
    let mut values = Vec::with_capacity(xs.len());
    let mut skipped = Vec::new();
    for (i, r) in evaluated.into_iter().enumerate() {
        match r {
            Ok(v) if v.is_finite() => values.push(v),
            _ => {
                skipped.push(i);
                values.push(f64::NAN);
            }
        }
    }

    let finite: Vec<usize> = (0..xs.len()).filter(|&i| values[i].is_finite()).collect();
    let g = |x: f64| f(x).ok().filter(|v| v.is_finite());

    let mut extrema = Vec::new();
    for w in finite.windows(3) {
        let (a, b, c) = (w[0], w[1], w[2]);
        let (va, vb, vc) = (values[a], values[b], values[c]);
        let kind = if vb > va && vb > vc {
            ExtremumKind::Max
        } else if vb < va && vb < vc {
            ExtremumKind::Min
        } else {
            continue;
        };
        let mut ext = Extremum {
            location: xs[b],
            value: vb,
            kind,
        };
        if spec.refine {
            let (x, v) = match kind {
                ExtremumKind::Max => golden_section_max(
                    |x| g(x).unwrap_or(f64::NEG_INFINITY),
                    xs[a],
                    xs[c],
                    REFINE_TOLERANCE,
                ),
                ExtremumKind::Min => golden_section_min(
                    |x| g(x).unwrap_or(f64::INFINITY),
                    xs[a],
                    xs[c],
                    REFINE_TOLERANCE,
                ),
            };
            let better = match kind {
                ExtremumKind::Max => v >= vb,
                ExtremumKind::Min => v <= vb,
            };
            if better {
                ext.location = x;
                ext.value = v;
            }
        }
        extrema.push(ext);
    }

    let mut zero_crossings = Vec::new();
    for w in finite.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (va, vb) = (values[a], values[b]);
        if va == 0.0 {
            zero_crossings.push(xs[a]);
        } else if va * vb < 0.0 {
            zero_crossings.push(bisect_sign_change(&g, xs[a], xs[b], va));
        }
    }
    if let Some(&last) = finite.last() {
        if values[last] == 0.0 {
            zero_crossings.push(xs[last]);
        }
    }

    Ok(ScanResult {
        abscissas: xs,
        values,
        skipped,
        extrema,
        zero_crossings,
    })
}

fn bisect_sign_change<G>(g: &G, mut lo: f64, mut hi: f64, f_lo: f64) -> f64
where
    G: Fn(f64) -> Option<f64>,
{
    let lo_positive = f_lo > 0.0;
    while hi - lo > ZERO_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        match g(mid) {
            Some(v) if v == 0.0 => return mid,
            Some(v) if (v > 0.0) == lo_positive => lo = mid,
            Some(_) => hi = mid,
            None => break,
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section minimization on `[lo, hi]`; returns `(x, f(x))`.
pub fn golden_section_min<F>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // keep the best of the evaluated interior points
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .unwrap()
}

pub fn golden_section_max<F>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let (x, v) = golden_section_min(|x| -f(x), lo, hi, tol);
    (x, -v)
}

/// Maximizes `f` on `bracket` to `1e-6` in the abscissa.
///
/// Fails if the maximum sits on the bracket boundary.
pub fn find_peak<F>(f: F, bracket: (f64, f64)) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let (lo, hi) = bracket;
    if !(lo < hi) {
        return Err(Error::invalid("bracket", format!("need lo < hi, got [{lo}, {hi}]")));
    }
    let (x, v) = golden_section_max(&f, lo, hi, REFINE_TOLERANCE);
    let edge = 4.0 * REFINE_TOLERANCE;
    if x - lo < edge || hi - x < edge || !v.is_finite() {
        return Err(Error::NoInteriorExtremum { lo, hi });
    }
    Ok((x, v))
}

/// [`find_peak`] for a metric along one variable.
pub fn find_metric_peak(
    metric: &MetricSpec,
    variable: ScanVariable,
    bracket: (f64, f64),
) -> Result<(f64, f64)> {
    find_peak(
        |x| metric.eval_at(variable, x).unwrap_or(f64::NEG_INFINITY),
        bracket,
    )
}
