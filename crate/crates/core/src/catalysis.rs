//! The catalysed state `N̄ L_m(μ b†) |z cosθ>` in closed form.
//!
//! Everything downstream reads the state through [`MomentTable`]: the
//! anti-normally ordered moments `<b^q b†^p>` are sums of two-variable Hermite
//! polynomials evaluated at `(z̄*, −z̄)`, with `z̄ = z cosθ` and
//! `μ = z cosθ tan²θ`.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;
use std::sync::{Arc, Mutex, RwLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock_oracle::FockVector;
use crate::polynomials::{binomial, factorial, hermite2_unchecked, MAX_ORDER};

/// One catalysed state: input amplitude `z`, beam-splitter angle `theta`
/// (transmissivity `cos θ`), and herald photon number `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalysisParams {
    z: Complex64,
    theta: f64,
    m: u32,
}

impl CatalysisParams {
    pub fn new(z: Complex64, theta: f64, m: u32) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::invalid("z", "must be finite"));
        }
        if !theta.is_finite() || !(0.0..FRAC_PI_2).contains(&theta) {
            return Err(Error::invalid(
                "theta",
                format!("{theta} is outside [0, pi/2)"),
            ));
        }
        if 2 * u64::from(m) > u64::from(MAX_ORDER) {
            return Err(Error::OrderCap {
                order: m,
                cap: MAX_ORDER / 2,
            });
        }
        Ok(CatalysisParams { z, theta, m })
    }

    /// Real-amplitude shorthand.
    pub fn real(z: f64, theta: f64, m: u32) -> Result<Self> {
        Self::new(Complex64::new(z, 0.0), theta, m)
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Transmission amplitude `cos θ`.
    pub fn t(&self) -> f64 {
        self.theta.cos()
    }

    /// Reflection amplitude `sin θ`.
    pub fn r(&self) -> f64 {
        self.theta.sin()
    }

    /// `μ = z cosθ tan²θ`.
    pub fn mu(&self) -> Complex64 {
        let tan = self.theta.tan();
        self.z * (self.t() * tan * tan)
    }

    /// `z̄ = z cosθ`, the amplitude of the underlying coherent state.
    pub fn zbar(&self) -> Complex64 {
        self.z * self.t()
    }

    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(self.z, theta, self.m)
    }

    pub fn with_z(&self, z: Complex64) -> Result<Self> {
        Self::new(z, self.theta, self.m)
    }

    /// Exact bit-pattern key for memoization.
    pub fn key(&self) -> ParamsKey {
        ParamsKey {
            z_re: self.z.re.to_bits(),
            z_im: self.z.im.to_bits(),
            theta: self.theta.to_bits(),
            m: self.m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParamsKey {
    z_re: u64,
    z_im: u64,
    theta: u64,
    m: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationResult {
    /// `N̄_m^{-2}`, the squared norm of `L_m(μ b†)|z̄>`.
    pub nbar_inv_sq: f64,
    /// `N̄_m^2`.
    pub nbar_sq: f64,
    /// Imaginary part left over by the complex double sum.
    pub imag_residue: f64,
}

/// Coefficients `C(m,l) (-1)^l μ^l / l!` of `L_m(μ x)` as a polynomial in `x`.
fn laguerre_in_mu(m: u32, mu: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(m as usize + 1);
    let mut mu_pow = Complex64::new(1.0, 0.0);
    for l in 0..=m {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        out.push(mu_pow * (sign * binomial(m, l) as f64 / factorial(l)));
        mu_pow *= mu;
    }
    out
}

/// `<z̄| b^{l'} b†^{l} |z̄> = (-1)^{l'} H_{l,l'}(z̄*, −z̄)`.
#[inline]
fn coherent_antinormal(zbar: Complex64, l: u32, lp: u32) -> Complex64 {
    let h = hermite2_unchecked(l, lp, zbar.conj(), -zbar);
    if lp % 2 == 0 {
        h
    } else {
        -h
    }
}

/// `N̄_m^{-2} = Σ_{l,k} C(m,l)C(m,k) (-1)^k μ^k μ*^l / (l!k!) H_{k,l}(z̄*, −z̄)`.
pub fn normalization(params: &CatalysisParams) -> NormalizationResult {
    let value = antinormal_unnormalized(params, 0, 0);
    NormalizationResult {
        nbar_inv_sq: value.re,
        nbar_sq: 1.0 / value.re,
        imag_residue: value.im.abs(),
    }
}

/// `<z̄| L_m(μ* b) b^q b†^p L_m(μ b†) |z̄>` without the normalization factor.
fn antinormal_unnormalized(params: &CatalysisParams, q: u32, p: u32) -> Complex64 {
    let m = params.m;
    let mu = params.mu();
    let zbar = params.zbar();
    let (x, y) = (zbar.conj(), -zbar);
    let mut total = Complex64::new(0.0, 0.0);
    let mut mu_k = Complex64::new(1.0, 0.0);
    for k in 0..=m {
        let mut mu_l = Complex64::new(1.0, 0.0);
        for l in 0..=m {
            let coef = binomial(m, l) as f64 * binomial(m, k) as f64 / (factorial(l) * factorial(k));
            let sign = if (q + k) % 2 == 0 { 1.0 } else { -1.0 };
            total += mu_k * mu_l.conj() * hermite2_unchecked(k + p, l + q, x, y) * (sign * coef);
            mu_l *= mu;
        }
        mu_k *= mu;
    }
    total
}

/// Coefficients of the polynomial `P_q` with `b^q L_m(μ b†)|z̄> = P_q(b†)|z̄>`:
/// `P_q(x) = Σ_j C(q,j) z̄^{q−j} (d/dx)^j L_m(μ x)`.
fn lowered_polynomial(params: &CatalysisParams, q: u32) -> Vec<Complex64> {
    let m = params.m as usize;
    let base = laguerre_in_mu(params.m, params.mu());
    let zbar = params.zbar();
    let mut out = vec![Complex64::new(0.0, 0.0); m + 1];
    let mut deriv = base;
    for j in 0..=q.min(params.m) {
        let weight = zbar.powu(q - j) * binomial(q, j) as f64;
        for (l, c) in deriv.iter().enumerate() {
            out[l] += *c * weight;
        }
        // differentiate once more
        deriv = (1..deriv.len())
            .map(|l| deriv[l] * l as f64)
            .chain(std::iter::once(Complex64::new(0.0, 0.0)))
            .collect();
    }
    out
}

/// Moments of the normalized catalysed state, memoized per `(q, p)`.
///
/// Fills are idempotent; concurrent readers never observe partial entries.
#[derive(Debug)]
pub struct MomentTable {
    params: CatalysisParams,
    norm: NormalizationResult,
    antinormal: RwLock<HashMap<(u32, u32), Complex64>>,
    normal: RwLock<HashMap<(u32, u32), Complex64>>,
}

impl MomentTable {
    pub fn new(params: CatalysisParams) -> Self {
        MomentTable {
            norm: normalization(&params),
            params,
            antinormal: RwLock::new(HashMap::new()),
            normal: RwLock::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> &CatalysisParams {
        &self.params
    }

    pub fn normalization(&self) -> &NormalizationResult {
        &self.norm
    }

    fn check_orders(&self, q: u32, p: u32) -> Result<()> {
        let needed = u64::from(q) + u64::from(p) + 2 * u64::from(self.params.m);
        if needed > u64::from(MAX_ORDER) {
            return Err(Error::OrderCap {
                order: q.max(p) + self.params.m,
                cap: MAX_ORDER,
            });
        }
        Ok(())
    }

    /// Anti-normally ordered moment `<b^q b†^p>`.
    pub fn get(&self, q: u32, p: u32) -> Result<Complex64> {
        self.check_orders(q, p)?;
        if let Some(v) = self.antinormal.read().unwrap().get(&(q, p)) {
            return Ok(*v);
        }
        let value = antinormal_unnormalized(&self.params, q, p) * self.norm.nbar_sq;
        self.antinormal.write().unwrap().insert((q, p), value);
        Ok(value)
    }

    /// Normally ordered moment `<b†^p b^q>`.
    ///
    /// Evaluated as `<P_p ψ̃ | P_q ψ̃>` where `b^q` has been moved through the
    /// Laguerre factor onto the coherent state, so no commutator shifts (and no
    /// cancellation against the vacuum terms) are involved.
    pub fn normal(&self, p: u32, q: u32) -> Result<Complex64> {
        self.check_orders(q, p)?;
        if let Some(v) = self.normal.read().unwrap().get(&(p, q)) {
            return Ok(*v);
        }
        let left = lowered_polynomial(&self.params, p);
        let right = lowered_polynomial(&self.params, q);
        let zbar = self.params.zbar();
        let mut total = Complex64::new(0.0, 0.0);
        for (lp, a) in left.iter().enumerate() {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (l, b) in right.iter().enumerate() {
                total += a.conj() * b * coherent_antinormal(zbar, l as u32, lp as u32);
            }
        }
        let value = total * self.norm.nbar_sq;
        self.normal.write().unwrap().insert((p, q), value);
        Ok(value)
    }

    /// Mean photon number `<b†b>`.
    pub fn mean_photon(&self) -> f64 {
        self.normal(1, 1).expect("orders within cap").re
    }
}

/// `<b^q b†^p>` for a single query. Prefer [`MomentTable`] for repeated use.
pub fn moments(params: &CatalysisParams, q: u32, p: u32) -> Result<Complex64> {
    MomentTable::new(*params).get(q, p)
}

/// Shares moment tables between callers that query the same parameters.
#[derive(Debug, Default)]
pub struct MomentCache {
    tables: Mutex<HashMap<ParamsKey, Arc<MomentTable>>>,
}

impl MomentCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn table(&self, params: &CatalysisParams) -> Arc<MomentTable> {
        let mut tables = self.tables.lock().unwrap();
        tables
            .entry(params.key())
            .or_insert_with(|| Arc::new(MomentTable::new(*params)))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.tables.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Unnormalized amplitude sum `Σ_l C(m,l) C(n,l) (−μ)^l z̄^{n−l} / √n!`,
/// computed as `Σ_l C(m,l) (−μ)^l g_{n−l} √(n!/(n−l)!) / l!` with
/// `g_k = z̄^k/√k!` to stay finite for large `n`.
fn amplitude_sums(params: &CatalysisParams, n_max: usize) -> Vec<Complex64> {
    let m = params.m as usize;
    let zbar = params.zbar();
    let neg_mu = -params.mu();
    let mut g = Vec::with_capacity(n_max + 1);
    g.push(Complex64::new(1.0, 0.0));
    for k in 1..=n_max {
        let prev = g[k - 1];
        g.push(prev * zbar / (k as f64).sqrt());
    }
    let mu_pows: Vec<Complex64> = (0..=m).map(|l| neg_mu.powu(l as u32)).collect();
    (0..=n_max)
        .map(|n| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut falling = 1.0f64; // n (n-1) ... (n-l+1)
            for l in 0..=m.min(n) {
                if l > 0 {
                    falling *= (n + 1 - l) as f64;
                }
                acc += mu_pows[l] * g[n - l] * (binomial(m as u32, l as u32) as f64 * falling.sqrt() / factorial(l as u32));
            }
            acc
        })
        .collect()
}

/// Normalized Fock amplitudes `c_0..c_{n_max}`, without tail check.
pub(crate) fn amplitudes_unchecked(params: &CatalysisParams, n_max: usize) -> Vec<Complex64> {
    let norm = normalization(params);
    let scale = norm.nbar_sq.sqrt() * (-0.5 * params.zbar().norm_sqr()).exp();
    amplitude_sums(params, n_max)
        .into_iter()
        .map(|s| s * scale)
        .collect()
}

/// Probability weight beyond `n_max`, summed until the terms are negligible.
pub fn tail_weight(params: &CatalysisParams, n_max: usize) -> f64 {
    let extra = 60 + 4 * params.m as usize + (4.0 * params.zbar().norm_sqr()).ceil() as usize;
    amplitudes_unchecked(params, n_max + extra)[n_max + 1..]
        .iter()
        .map(|c| c.norm_sqr())
        .sum()
}

/// Starting truncation before the tail check: Poisson tail margin plus the
/// polynomial degree.
pub fn default_n_max(params: &CatalysisParams) -> usize {
    let mean = params.zbar().norm_sqr();
    ((mean + 10.0 * (mean + 1.0).sqrt()).ceil() as usize + params.m as usize).max(20)
}

const TAIL_TOLERANCE: f64 = 1e-14;

/// Fock amplitudes of the catalysed state up to `n_max`.
///
/// Fails when the weight beyond `n_max` exceeds `1e-14`; the error carries a
/// truncation that passes.
pub fn output_amplitudes(params: &CatalysisParams, n_max: usize) -> Result<FockVector> {
    let tail = tail_weight(params, n_max);
    if tail > TAIL_TOLERANCE {
        return Err(Error::Truncation {
            n_max,
            tail,
            suggested: converged_n_max(params)?,
        });
    }
    Ok(FockVector::from_amplitudes(amplitudes_unchecked(params, n_max)))
}

/// Smallest truncation from the default, grown by half each step, with a
/// negligible tail.
pub fn converged_n_max(params: &CatalysisParams) -> Result<usize> {
    let mut n = default_n_max(params);
    for _ in 0..40 {
        if tail_weight(params, n) <= TAIL_TOLERANCE {
            return Ok(n);
        }
        n += n / 2;
    }
    Err(Error::NonConvergence(format!(
        "no Fock truncation below {n} reaches tail weight {TAIL_TOLERANCE:e}"
    )))
}

/// [`output_amplitudes`] at [`converged_n_max`].
pub fn output_amplitudes_auto(params: &CatalysisParams) -> Result<FockVector> {
    let n = converged_n_max(params)?;
    output_amplitudes(params, n)
}
