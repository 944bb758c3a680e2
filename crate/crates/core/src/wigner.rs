//! Wigner function of the catalysed state, before and after a thermal channel.
//!
//! Phase space uses `γ = (q + ip)/√2` with `∫ W dq dp = 1`. The state's
//! Wigner function factorizes as `W(γ) = W₀(γ) F_m(γ)` where
//! `W₀ = (1/π) exp{−2|γ − z̄|²}` is the coherent envelope and
//! `F_m = N̄² Σ_{j,l} μ^l μ*^j/(l! j!) C(m,j) C(m,l) H_{l,j}(z̄* − 2γ*, z̄ − 2γ)`.
//!
//! After a channel with decay `κt` and thermal occupation `ñ` the same
//! structure holds with `A = 2ñT + 1`, `B = e^{−2κt} − (2ñ+1)T`,
//! `T = 1 − e^{−2κt}`. The factors `(√(B/A))^{l+j}` and the `1/√(AB)` scaling
//! of the Hermite arguments combine into `A^{−(l+j)} (AB)^k` on the k-th
//! Hermite term, so no square root of `B` (which turns negative for strong
//! decoherence) is ever taken.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_complex::Complex64;

use crate::catalysis::{normalization, CatalysisParams};
use crate::error::{Error, Result};
use crate::metrics;
use crate::polynomials::{binomial, factorial};

/// Allowed `|∫W − 1|` on an accepted grid.
pub const NORMALIZATION_TOLERANCE: f64 = 5e-3;
/// Convergence threshold on `∫|W|` between successive domain/grid refinements.
pub const ABS_INTEGRAL_TOLERANCE: f64 = 1e-4;
/// Values below `-NEGATIVITY_THRESHOLD` count as negative.
pub const NEGATIVITY_THRESHOLD: f64 = 1e-12;
/// Upper end of the search bracket for the characteristic decoherence time.
pub const MAX_KT: f64 = 5.0;

const MAX_GRID_POINTS: usize = 2401;

/// Thermal loss channel after scaled time `κt` with mean occupation `ñ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalChannel {
    pub kt: f64,
    pub nbar: f64,
}

impl ThermalChannel {
    pub fn new(kt: f64, nbar: f64) -> Result<Self> {
        if !(kt.is_finite() && kt >= 0.0) {
            return Err(Error::invalid("kt", format!("{kt} must be finite and >= 0")));
        }
        if !(nbar.is_finite() && nbar >= 0.0) {
            return Err(Error::invalid("nbar", format!("{nbar} must be finite and >= 0")));
        }
        Ok(ThermalChannel { kt, nbar })
    }

    /// No decoherence (`κt = 0`).
    pub fn identity() -> Self {
        ThermalChannel { kt: 0.0, nbar: 0.0 }
    }

    /// `T = 1 − e^{−2κt}`.
    pub fn t(&self) -> f64 {
        -(-2.0 * self.kt).exp_m1()
    }

    /// `A = 2ñT + 1`.
    pub fn a(&self) -> f64 {
        2.0 * self.nbar * self.t() + 1.0
    }

    /// `B = e^{−2κt} − (2ñ + 1)T`.
    pub fn b(&self) -> f64 {
        (-2.0 * self.kt).exp() - (2.0 * self.nbar + 1.0) * self.t()
    }

    /// Amplitude damping factor `e^{−κt}`.
    pub fn decay(&self) -> f64 {
        (-self.kt).exp()
    }
}

/// Precomputed `W(β)` for one state and one channel.
///
/// `F` is stored as a polynomial `Σ_{a,b} c_{ab} X^a Y^b` in the shifted
/// arguments `X = z̄* B − 2β* e^{−κt}`, `Y = z̄ B − 2β e^{−κt}`.
#[derive(Debug, Clone)]
pub struct WignerFunction {
    params: CatalysisParams,
    channel: ThermalChannel,
    zbar: Complex64,
    decay: f64,
    a: f64,
    b: f64,
    /// Row-major `(m+1) × (m+1)`, index `[a * (m+1) + b]`.
    coeffs: Vec<Complex64>,
}

impl WignerFunction {
    pub fn new(params: &CatalysisParams) -> Self {
        Self::decohered(params, &ThermalChannel::identity())
    }

    pub fn decohered(params: &CatalysisParams, channel: &ThermalChannel) -> Self {
        let m = params.m();
        let size = m as usize + 1;
        let mu = params.mu();
        let nbar_sq = normalization(params).nbar_sq;
        let (a, b) = (channel.a(), channel.b());
        let s = a * b;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); size * size];
        for l in 0..=m {
            for j in 0..=m {
                let weight = mu.powu(l) * mu.conj().powu(j)
                    * (binomial(m, j) as f64 * binomial(m, l) as f64 / (factorial(l) * factorial(j)))
                    * nbar_sq
                    * a.powi(-((l + j) as i32));
                for k in 0..=l.min(j) {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    let h = sign * factorial(k) * binomial(l, k) as f64 * binomial(j, k) as f64 * s.powi(k as i32);
                    coeffs[((l - k) as usize) * size + (j - k) as usize] += weight * h;
                }
            }
        }
        WignerFunction {
            params: *params,
            channel: *channel,
            zbar: params.zbar(),
            decay: channel.decay(),
            a,
            b,
            coeffs,
        }
    }

    pub fn params(&self) -> &CatalysisParams {
        &self.params
    }

    pub fn channel(&self) -> &ThermalChannel {
        &self.channel
    }

    /// `W(β)` as a complex number; the imaginary part is rounding residue.
    pub fn evaluate(&self, beta: Complex64) -> Complex64 {
        let size = self.params.m() as usize + 1;
        let x = self.zbar.conj() * self.b - beta.conj() * (2.0 * self.decay);
        let y = self.zbar * self.b - beta * (2.0 * self.decay);
        let mut f = Complex64::new(0.0, 0.0);
        for a in (0..size).rev() {
            let row = &self.coeffs[a * size..(a + 1) * size];
            let mut inner = Complex64::new(0.0, 0.0);
            for &c in row.iter().rev() {
                inner = inner * y + c;
            }
            f = f * x + inner;
        }
        let envelope =
            (-2.0 * (beta - self.zbar * self.decay).norm_sqr() / self.a).exp() / (PI * self.a);
        f * envelope
    }

    pub fn value(&self, beta: Complex64) -> f64 {
        self.evaluate(beta).re
    }

    pub fn value_qp(&self, q: f64, p: f64) -> f64 {
        self.value(gamma_of(q, p))
    }

    /// Centre of the coherent envelope in `(q, p)`.
    pub fn center_qp(&self) -> (f64, f64) {
        let c = self.zbar * self.decay;
        (SQRT_2 * c.re, SQRT_2 * c.im)
    }
}

/// `γ = (q + ip)/√2`.
pub fn gamma_of(q: f64, p: f64) -> Complex64 {
    Complex64::new(q, p) * FRAC_1_SQRT_2
}

/// `(q, p)` of a phase-space point `γ`.
pub fn qp_of(gamma: Complex64) -> (f64, f64) {
    (SQRT_2 * gamma.re, SQRT_2 * gamma.im)
}

/// Wigner function of the catalysed state at `γ`.
pub fn wigner_value(params: &CatalysisParams, gamma: Complex64) -> f64 {
    WignerFunction::new(params).value(gamma)
}

/// Wigner function after the thermal channel, at `β`.
pub fn decohered_wigner(params: &CatalysisParams, channel: &ThermalChannel, beta: Complex64) -> f64 {
    WignerFunction::decohered(params, channel).value(beta)
}

/// Cell-centred rectangular grid in `(q, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub n_q: usize,
    pub n_p: usize,
}

impl GridSpec {
    pub fn new(q_min: f64, q_max: f64, p_min: f64, p_max: f64, n_q: usize, n_p: usize) -> Result<Self> {
        let ok = |lo: f64, hi: f64| lo.is_finite() && hi.is_finite() && lo < hi;
        if !ok(q_min, q_max) || !ok(p_min, p_max) {
            return Err(Error::invalid("grid", "bounds must be finite with min < max"));
        }
        if n_q < 2 || n_p < 2 || n_q > MAX_GRID_POINTS || n_p > MAX_GRID_POINTS {
            return Err(Error::invalid(
                "grid",
                format!("resolution must be within 2..={MAX_GRID_POINTS} per axis"),
            ));
        }
        Ok(GridSpec {
            q_min,
            q_max,
            p_min,
            p_max,
            n_q,
            n_p,
        })
    }

    /// Square window `center ± half_width` with `n × n` cells.
    pub fn around(center: (f64, f64), half_width: f64, n: usize) -> Self {
        GridSpec {
            q_min: center.0 - half_width,
            q_max: center.0 + half_width,
            p_min: center.1 - half_width,
            p_max: center.1 + half_width,
            n_q: n,
            n_p: n,
        }
    }

    /// `±6` around the displaced centre at 301 × 301.
    pub fn default_for(params: &CatalysisParams) -> Self {
        let c = params.zbar();
        GridSpec::around((SQRT_2 * c.re, SQRT_2 * c.im), 6.0, 301)
    }

    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / self.n_q as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / self.n_p as f64
    }

    pub fn q(&self, i: usize) -> f64 {
        self.q_min + (i as f64 + 0.5) * self.dq()
    }

    pub fn p(&self, j: usize) -> f64 {
        self.p_min + (j as f64 + 0.5) * self.dp()
    }

    /// Grows the window by whole cells until it contains `bounds`, so the
    /// existing sample points stay on the lattice.
    fn covering(&self, bounds: (f64, f64, f64, f64)) -> GridSpec {
        let (ql, qh, pl, ph) = bounds;
        let (dq, dp) = (self.dq(), self.dp());
        let cells = |gap: f64, h: f64| (gap / h).ceil().max(0.0) as usize;
        let (q_lo, q_hi) = (cells(self.q_min - ql, dq), cells(qh - self.q_max, dq));
        let (p_lo, p_hi) = (cells(self.p_min - pl, dp), cells(ph - self.p_max, dp));
        let n_q = (self.n_q + q_lo + q_hi).min(MAX_GRID_POINTS);
        let n_p = (self.n_p + p_lo + p_hi).min(MAX_GRID_POINTS);
        let q_min = self.q_min - q_lo as f64 * dq;
        let p_min = self.p_min - p_lo as f64 * dp;
        GridSpec {
            q_min,
            q_max: q_min + n_q as f64 * dq,
            p_min,
            p_max: p_min + n_p as f64 * dp,
            n_q,
            n_p,
        }
    }

    /// Adds `margin` on every side at the same cell size.
    fn widened(&self, margin: f64) -> GridSpec {
        self.covering((
            self.q_min - margin,
            self.q_max + margin,
            self.p_min - margin,
            self.p_max + margin,
        ))
    }

    /// Same window, cells halved.
    fn refined(&self) -> GridSpec {
        GridSpec {
            n_q: (2 * self.n_q).min(MAX_GRID_POINTS),
            n_p: (2 * self.n_p).min(MAX_GRID_POINTS),
            ..*self
        }
    }
}

/// Wigner values on a [`GridSpec`]; `values[i * n_p + j]` is at `(q_i, p_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
    /// `∫W dq dp − 1` by the midpoint rule.
    pub normalization_defect: f64,
    /// Largest `|Im W|` met while filling the grid.
    pub max_imag_residue: f64,
}

impl WignerGrid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.spec.n_p + j]
    }

    fn cell_area(&self) -> f64 {
        self.spec.dq() * self.spec.dp()
    }

    pub fn integral(&self) -> f64 {
        pairwise_sum(&self.values) * self.cell_area()
    }

    pub fn abs_integral(&self) -> f64 {
        let abs: Vec<f64> = self.values.iter().map(|v| v.abs()).collect();
        pairwise_sum(&abs) * self.cell_area()
    }

    /// `½ (∫|W| − ∫W)`: zero exactly when no cell is negative.
    pub fn negative_volume(&self) -> f64 {
        let neg: Vec<f64> = self.values.iter().map(|v| (-v).max(0.0)).collect();
        pairwise_sum(&neg) * self.cell_area()
    }

    /// Smallest value and its `(q, p)`.
    pub fn min(&self) -> (f64, f64, f64) {
        let (idx, v) = self
            .values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, v)| (i, *v))
            .expect("grid is never empty");
        let (i, j) = (idx / self.spec.n_p, idx % self.spec.n_p);
        (v, self.spec.q(i), self.spec.p(j))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

/// Order-fixed pairwise summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 64 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[cfg(feature = "parallel")]
fn fill_rows(w: &WignerFunction, spec: &GridSpec) -> Vec<(Vec<f64>, f64)> {
    use rayon::prelude::*;
    (0..spec.n_q).into_par_iter().map(|i| fill_row(w, spec, i)).collect()
}

#[cfg(not(feature = "parallel"))]
fn fill_rows(w: &WignerFunction, spec: &GridSpec) -> Vec<(Vec<f64>, f64)> {
    (0..spec.n_q).map(|i| fill_row(w, spec, i)).collect()
}

fn fill_row(w: &WignerFunction, spec: &GridSpec, i: usize) -> (Vec<f64>, f64) {
    let q = spec.q(i);
    let mut residue = 0.0f64;
    let row = (0..spec.n_p)
        .map(|j| {
            let v = w.evaluate(gamma_of(q, spec.p(j)));
            residue = residue.max(v.im.abs());
            v.re
        })
        .collect();
    (row, residue)
}

/// Box `⟨X⟩ ± 4σ_X` for both quadratures after the channel.
fn required_bounds(params: &CatalysisParams, channel: &ThermalChannel) -> Result<(f64, f64, f64, f64)> {
    let table = crate::catalysis::MomentTable::new(*params);
    let vars = metrics::quadrature_variances_from(&table)?;
    let mean_b = table.get(1, 0)?;
    let e = channel.decay();
    let noise = 0.5 * (2.0 * channel.nbar + 1.0) * channel.t();
    let sq = (e * e * vars.var_q + noise).sqrt();
    let sp = (e * e * vars.var_p + noise).sqrt();
    let (mq, mp) = qp_of(mean_b * e);
    Ok((mq - 4.0 * sq, mq + 4.0 * sq, mp - 4.0 * sp, mp + 4.0 * sp))
}

fn evaluate_grid(w: &WignerFunction, spec: &GridSpec) -> WignerGrid {
    let rows = fill_rows(w, spec);
    let mut values = Vec::with_capacity(spec.n_q * spec.n_p);
    let mut max_imag_residue = 0.0f64;
    for (row, residue) in rows {
        values.extend(row);
        max_imag_residue = max_imag_residue.max(residue);
    }
    let mut grid = WignerGrid {
        spec: *spec,
        values,
        normalization_defect: 0.0,
        max_imag_residue,
    };
    grid.normalization_defect = grid.integral() - 1.0;
    grid
}

fn checked_grid(w: &WignerFunction, spec: &GridSpec) -> Result<WignerGrid> {
    let needed = required_bounds(w.params(), w.channel())?;
    let spec = spec.covering(needed);
    let grid = evaluate_grid(w, &spec);
    if grid.normalization_defect.abs() > NORMALIZATION_TOLERANCE {
        let s = spec.widened(0.5 * (spec.q_max - spec.q_min).max(spec.p_max - spec.p_min));
        return Err(Error::Domain {
            defect: grid.normalization_defect,
            q_min: s.q_min,
            q_max: s.q_max,
            p_min: s.p_min,
            p_max: s.p_max,
        });
    }
    Ok(grid)
}

/// Wigner function on a grid. The window is widened to cover four standard
/// deviations of both quadratures around their means if necessary.
pub fn wigner_grid(params: &CatalysisParams, spec: &GridSpec) -> Result<WignerGrid> {
    checked_grid(&WignerFunction::new(params), spec)
}

/// Decohered Wigner function on a grid, with the same coverage rule.
pub fn decohered_grid(params: &CatalysisParams, channel: &ThermalChannel, spec: &GridSpec) -> Result<WignerGrid> {
    checked_grid(&WignerFunction::decohered(params, channel), spec)
}

/// Negative volume `δ = ½[∫|W| dq dp − 1]` of the decohered state.
///
/// The window is widened until `∫|W|` moves by less than `1e-4`, then the
/// cells are halved until the same holds between resolutions. The reported
/// value is `½(∫|W| − ∫W)`, which equals the definition for a normalized `W`
/// and is exactly zero when `W >= 0` on the grid.
pub fn negative_volume_on(w: &WignerFunction, spec: &GridSpec) -> Result<f64> {
    let mut grid = checked_grid(w, spec)?;
    let mut current = grid.abs_integral();
    let mut expanded = false;
    for _ in 0..8 {
        let next_spec = grid.spec.widened(1.0);
        let next = evaluate_grid(w, &next_spec);
        let value = next.abs_integral();
        let change = (value - current).abs();
        grid = next;
        current = value;
        if change < ABS_INTEGRAL_TOLERANCE {
            expanded = true;
            break;
        }
    }
    if !expanded {
        return Err(Error::NonConvergence(
            "negative volume: domain expansion did not settle".into(),
        ));
    }
    loop {
        let finer_spec = grid.spec.refined();
        if finer_spec == grid.spec {
            return Err(Error::NonConvergence(
                "negative volume: grid refinement hit the resolution cap".into(),
            ));
        }
        let finer = evaluate_grid(w, &finer_spec);
        let value = finer.abs_integral();
        let change = (value - current).abs();
        grid = finer;
        current = value;
        if change < ABS_INTEGRAL_TOLERANCE {
            return Ok(grid.negative_volume());
        }
    }
}

pub fn negative_volume(params: &CatalysisParams, spec: &GridSpec) -> Result<f64> {
    negative_volume_on(&WignerFunction::new(params), spec)
}

/// Negative volume after the channel, on the default window.
pub fn negative_volume_decohered(params: &CatalysisParams, channel: &ThermalChannel) -> Result<f64> {
    let w = WignerFunction::decohered(params, channel);
    negative_volume_on(&w, &GridSpec::around(w.center_qp(), 6.0, 301))
}

/// Location and value of the global minimum of the (decohered) Wigner function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerMinimum {
    pub value: f64,
    /// Phase-space point `γ` of the minimum.
    pub location: Complex64,
}

const MIN_SEARCH_CELLS: usize = 121;
const DESCENT_RESOLUTION: f64 = 1e-5;

/// Global minimum over the channel-output support: grid scan, then coordinate
/// descent from the lowest few local minima down to `1e-5` in `q` and `p`.
pub fn min_wigner(params: &CatalysisParams, channel: &ThermalChannel) -> Result<WignerMinimum> {
    let w = WignerFunction::decohered(params, channel);
    let (ql, qh, pl, ph) = required_bounds(params, channel)?;
    let spec = GridSpec::new(ql - 1.0, qh + 1.0, pl - 1.0, ph + 1.0, MIN_SEARCH_CELLS, MIN_SEARCH_CELLS)?;
    let grid = evaluate_grid(&w, &spec);

    let n = MIN_SEARCH_CELLS;
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = grid.value(i, j);
            let mut is_min = true;
            for (di, dj) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
                let (ii, jj) = (i as i64 + di, j as i64 + dj);
                if ii < 0 || jj < 0 || ii >= n as i64 || jj >= n as i64 {
                    continue;
                }
                if grid.value(ii as usize, jj as usize) < v {
                    is_min = false;
                    break;
                }
            }
            if is_min {
                candidates.push((v, i, j));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    candidates.truncate(4);

    let step = spec.dq().max(spec.dp());
    let mut best: Option<(f64, f64, f64)> = None;
    for &(v, i, j) in &candidates {
        let (q, p, value) = coordinate_descent(&w, spec.q(i), spec.p(j), v, step);
        if best.map_or(true, |b| value < b.0) {
            best = Some((value, q, p));
        }
    }
    let (value, q, p) = best.expect("a finite grid always has a minimum");
    if value < -NEGATIVITY_THRESHOLD {
        let edge = 2.0 * step;
        if q - spec.q_min < edge || spec.q_max - q < edge || p - spec.p_min < edge || spec.p_max - p < edge {
            return Err(Error::Domain {
                defect: value,
                q_min: spec.q_min - 2.0,
                q_max: spec.q_max + 2.0,
                p_min: spec.p_min - 2.0,
                p_max: spec.p_max + 2.0,
            });
        }
    }
    Ok(WignerMinimum {
        value,
        location: gamma_of(q, p),
    })
}

fn coordinate_descent(w: &WignerFunction, mut q: f64, mut p: f64, mut value: f64, mut step: f64) -> (f64, f64, f64) {
    while step >= DESCENT_RESOLUTION {
        let mut moved = false;
        for (dq, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let v = w.value_qp(q + dq, p + dp);
            if v < value {
                q += dq;
                p += dp;
                value = v;
                moved = true;
                break;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (q, p, value)
}

/// Scaled time `κt_c` after which the Wigner function has no negative region.
///
/// Returns 0 for states that are nonnegative to begin with. Bisection on the
/// sign of [`min_wigner`] over `[0, 5]` to `1e-4`.
pub fn characteristic_time(params: &CatalysisParams, nbar: f64) -> Result<f64> {
    let negative = |kt: f64| -> Result<bool> {
        let ch = ThermalChannel::new(kt, nbar)?;
        Ok(min_wigner(params, &ch)?.value < -NEGATIVITY_THRESHOLD)
    };
    if !negative(0.0)? {
        return Ok(0.0);
    }
    if negative(MAX_KT)? {
        return Err(Error::NoSignChange { lo: 0.0, hi: MAX_KT });
    }
    let (mut lo, mut hi) = (0.0, MAX_KT);
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if negative(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock_oracle::{catalyze, default_truncation, oracle_wigner};
    use crate::polynomials::hermite2_unchecked;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Literal double sum with principal square roots of `B/A` and `AB`.
    fn principal_branch(params: &CatalysisParams, ch: &ThermalChannel, beta: Complex64) -> Complex64 {
        let m = params.m();
        let mu = params.mu();
        let zbar = params.zbar();
        let (a, b, e) = (ch.a(), ch.b(), ch.decay());
        let root_ba = c(b / a, 0.0).sqrt();
        let root_ab = c(a * b, 0.0).sqrt();
        let x = (zbar.conj() * b - beta.conj() * 2.0 * e) / root_ab;
        let y = (zbar * b - beta * 2.0 * e) / root_ab;
        let mut f = c(0.0, 0.0);
        for j in 0..=m {
            for l in 0..=m {
                f += mu.powu(l) * mu.conj().powu(j) / (factorial(l) * factorial(j))
                    * (binomial(m, j) * binomial(m, l)) as f64
                    * root_ba.powu(l + j)
                    * hermite2_unchecked(l, j, x, y);
            }
        }
        let w0 = (-2.0 * (beta - zbar * e).norm_sqr() / a).exp() / (PI * a);
        f * normalization(params).nbar_sq * w0
    }

    #[test]
    fn channel_constants() {
        let id = ThermalChannel::identity();
        assert_eq!((id.t(), id.a(), id.b()), (0.0, 1.0, 1.0));
        let ch = ThermalChannel::new(0.2, 1.0).unwrap();
        assert!(ch.t() > 0.0 && ch.t() < 1.0 && ch.a() >= 1.0);
        assert!(ch.b() < 0.0);
        assert!(ThermalChannel::new(-0.1, 0.0).is_err());
    }

    #[test]
    fn coherent_peak_is_one_over_pi() {
        let p = CatalysisParams::new(c(1.2, 0.3), 0.5, 0).unwrap();
        assert!((wigner_value(&p, p.zbar()) - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn polynomial_form_matches_literal_sum() {
        let p = CatalysisParams::new(c(1.0, 0.4), 0.9, 3).unwrap();
        for ch in [
            ThermalChannel::identity(),
            ThermalChannel::new(0.1, 0.0).unwrap(),
            ThermalChannel::new(0.2, 1.0).unwrap(), // B < 0
        ] {
            let w = WignerFunction::decohered(&p, &ch);
            for beta in [c(0.1, -0.3), c(0.8, 0.2), c(-0.5, 0.6)] {
                let a = w.evaluate(beta);
                let b = principal_branch(&p, &ch, beta);
                assert!((a - b).norm() < 1e-12, "{a} vs {b} at kt={}", ch.kt);
            }
        }
    }

    #[test]
    fn matches_displaced_parity_oracle() {
        let p = CatalysisParams::real(1.0, FRAC_PI_4, 2).unwrap();
        let (state, _) = catalyze(p.z(), p.theta(), 2, default_truncation(p.z(), 2)).unwrap();
        for gamma in [c(0.3, -0.2), c(0.5, 0.1), c(-0.4, 0.7)] {
            let a = wigner_value(&p, gamma);
            let b = oracle_wigner(&state, gamma).value;
            assert!((a - b).abs() < 1e-7, "{a} vs {b}");
        }
    }

    #[test]
    fn single_photon_catalysis_has_negative_cells() {
        let p = CatalysisParams::real(1.0, std::f64::consts::PI / 5.0, 1).unwrap();
        let grid = wigner_grid(&p, &GridSpec::default_for(&p)).unwrap();
        assert!(grid.min().0 < 0.0);
        assert!(grid.max_imag_residue < 1e-10);
    }

    #[test]
    fn coherent_grid_is_positive_and_normalized() {
        let p = CatalysisParams::real(1.5, 0.4, 0).unwrap();
        let grid = wigner_grid(&p, &GridSpec::default_for(&p)).unwrap();
        assert!(grid.values.iter().all(|&v| v > 0.0));
        assert!(grid.normalization_defect.abs() < 1e-10);
        assert_eq!(grid.negative_volume(), 0.0);
    }

    #[test]
    fn grid_normalization_two_photon() {
        let p = CatalysisParams::real(1.0, FRAC_PI_4, 2).unwrap();
        let grid = wigner_grid(&p, &GridSpec::default_for(&p)).unwrap();
        assert!(grid.normalization_defect.abs() < 5e-3);
        assert!(grid.max_abs() <= 1.0 / PI + 1e-12);
    }

    #[test]
    fn small_window_is_widened_to_cover_the_state() {
        let p = CatalysisParams::real(2.0, 0.3, 1).unwrap();
        let tiny = GridSpec::new(-0.5, 0.5, -0.5, 0.5, 50, 50).unwrap();
        let grid = wigner_grid(&p, &tiny).unwrap();
        assert!(grid.spec.q_max > 3.0);
        assert!(grid.normalization_defect.abs() < 5e-3);
    }

    #[test]
    fn too_coarse_grid_reports_domain_error() {
        // a single cell per axis cannot integrate anything
        let p = CatalysisParams::real(1.0, 0.3, 1).unwrap();
        let coarse = GridSpec::new(-20.0, 20.0, -20.0, 20.0, 2, 2).unwrap();
        assert!(matches!(wigner_grid(&p, &coarse), Err(Error::Domain { .. })));
    }

    #[test]
    fn negative_volume_vanishes_for_coherent_states() {
        let p = CatalysisParams::real(1.0, FRAC_PI_3, 0).unwrap();
        assert!(negative_volume(&p, &GridSpec::default_for(&p)).unwrap() < 1e-12);
    }

    #[test]
    fn kt_zero_reduces_to_initial_function() {
        let p = CatalysisParams::new(c(1.0, 0.2), FRAC_PI_3, 2).unwrap();
        let ch = ThermalChannel::new(0.0, 0.7).unwrap();
        for beta in [c(0.0, 0.0), c(0.4, -0.3), c(1.1, 0.9)] {
            assert!((decohered_wigner(&p, &ch, beta) - wigner_value(&p, beta)).abs() < 1e-15);
        }
    }

    #[test]
    fn small_kt_is_continuous() {
        let p = CatalysisParams::real(1.0, FRAC_PI_3, 1).unwrap();
        let ch = ThermalChannel::new(1e-6, 0.0).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let beta = c(-0.5 + 0.4 * i as f64, -0.8 + 0.4 * j as f64);
                let d = (decohered_wigner(&p, &ch, beta) - wigner_value(&p, beta)).abs();
                assert!(d < 1e-4);
            }
        }
    }

    #[test]
    fn coherent_state_never_negative() {
        let p = CatalysisParams::real(1.0, 0.5, 0).unwrap();
        for kt in [0.0, 0.1, 0.5] {
            let min = min_wigner(&p, &ThermalChannel::new(kt, 0.0).unwrap()).unwrap();
            assert!(min.value >= 0.0);
        }
        assert_eq!(characteristic_time(&p, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn minimum_rises_with_decay_time() {
        let p = CatalysisParams::real(1.0, FRAC_PI_3, 1).unwrap();
        let mins: Vec<f64> = [0.0, 0.05, 0.1, 0.2]
            .iter()
            .map(|&kt| min_wigner(&p, &ThermalChannel::new(kt, 0.0).unwrap()).unwrap().value)
            .collect();
        assert!(mins[0] < 0.0);
        for w in mins.windows(2) {
            assert!(w[1] >= w[0]);
        }
    }

    /// With ñ = 0 the channel output at `B = 0` (κt = ln2 / 2) is a smoothed
    /// Husimi function, which is nonnegative, so negativity must be gone by then.
    #[test]
    fn vacuum_bath_negativity_ends_by_half_transmission() {
        let p = CatalysisParams::real(1.0, FRAC_PI_3, 1).unwrap();
        let kt_c = characteristic_time(&p, 0.0).unwrap();
        assert!(kt_c > 0.0 && kt_c <= 0.5 * 2f64.ln() + 1e-3, "{kt_c}");
        let past = ThermalChannel::new(0.5 * 2f64.ln() + 0.01, 0.0).unwrap();
        assert!(min_wigner(&p, &past).unwrap().value >= -NEGATIVITY_THRESHOLD);
    }

    #[test]
    fn thermal_bath_shortens_negativity() {
        let p = CatalysisParams::real(1.0, FRAC_PI_3, 1).unwrap();
        let cold = characteristic_time(&p, 0.0).unwrap();
        let hot = characteristic_time(&p, 1.0).unwrap();
        assert!(hot < cold);
    }

    #[test]
    fn grid_fill_is_deterministic() {
        let p = CatalysisParams::real(1.0, FRAC_PI_2 - 0.7, 2).unwrap();
        let spec = GridSpec::default_for(&p);
        let a = wigner_grid(&p, &spec).unwrap();
        let b = wigner_grid(&p, &spec).unwrap();
        assert_eq!(a, b);
    }
}
