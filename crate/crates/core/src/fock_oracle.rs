//! Brute-force ground truth in a truncated Fock space.
//!
//! The catalysis circuit is simulated literally: the signal `|z>` (mode b)
//! and the herald `|m>` (mode a) enter a beam splitter
//! `B(θ) = exp{θ(a†b − ab†)}`, mode a is projected onto `<m|`, and what is
//! left in mode b is the conditional output. Product-space index is
//! `i * (n_trunc + 1) + j` for `|i>_a |j>_b`.
//!
//! Nothing here uses the closed-form expressions of [`crate::catalysis`] or
//! [`crate::wigner`]; the two are compared in tests.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest per-mode truncation accepted by the oracle.
pub const MAX_TRUNCATION: usize = 150;

/// Relative weight of the top three amplitudes above which results are flagged.
const TAIL_WARNING: f64 = 1e-10;

/// Amplitudes over `|0>..|n_trunc>`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub amps: Vec<Complex64>,
    pub n_trunc: usize,
    /// `1 - sum |amps|^2` before any normalization was applied.
    pub norm_defect: f64,
}

impl FockVector {
    /// Wraps raw amplitudes, recording their norm defect without rescaling.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        assert!(!amps.is_empty(), "a Fock vector needs at least |0>");
        let norm: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        FockVector {
            n_trunc: amps.len() - 1,
            norm_defect: 1.0 - norm,
            amps,
        }
    }

    /// Rescales to unit norm; `norm_defect` keeps the pre-normalization value.
    pub fn normalized(mut self) -> Self {
        let norm = self.norm_sqr().sqrt();
        if norm > 0.0 {
            for a in &mut self.amps {
                *a /= norm;
            }
        }
        self
    }

    /// Coherent state `|alpha>` truncated at `n_trunc` (not renormalized).
    pub fn coherent(alpha: Complex64, n_trunc: usize) -> Self {
        let mut amps = Vec::with_capacity(n_trunc + 1);
        let mut term = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
        amps.push(term);
        for n in 1..=n_trunc {
            term = term * alpha / (n as f64).sqrt();
            amps.push(term);
        }
        FockVector::from_amplitudes(amps)
    }

    pub fn fock(n: usize, n_trunc: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); n_trunc + 1];
        amps[n] = Complex64::new(1.0, 0.0);
        FockVector::from_amplitudes(amps)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn mean_photon(&self) -> f64 {
        let norm = self.norm_sqr();
        self.amps
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum::<f64>()
            / norm
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Fraction of the total weight carried by the three highest Fock levels.
    pub fn top_weight(&self) -> f64 {
        top_weight(&self.amps)
    }
}

fn top_weight(amps: &[Complex64]) -> f64 {
    let total: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
    let top: f64 = amps.iter().rev().take(3).map(|c| c.norm_sqr()).sum();
    if total > 0.0 {
        top / total
    } else {
        0.0
    }
}

/// An oracle number together with its truncation diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate<T> {
    pub value: T,
    pub truncation_warning: bool,
}

/// `B(θ)` on the truncated two-mode space, stored as its total-photon-number
/// blocks. Block `N` acts on `|i, N-i>` for all `i` with both occupations
/// within the truncation, ordered by increasing `i`.
#[derive(Debug, Clone)]
pub struct TwoModeOperator {
    pub theta: f64,
    pub n_trunc: usize,
    blocks: Vec<DMatrix<f64>>,
}

impl TwoModeOperator {
    pub fn dim(&self) -> usize {
        (self.n_trunc + 1) * (self.n_trunc + 1)
    }

    /// Range of mode-a occupations present in block `total`.
    fn block_range(&self, total: usize) -> (usize, usize) {
        let lo = total.saturating_sub(self.n_trunc);
        let hi = total.min(self.n_trunc);
        (lo, hi)
    }

    pub fn block(&self, total: usize) -> &DMatrix<f64> {
        &self.blocks[total]
    }

    /// Element `<i_out, j_out| B |i_in, j_in>`.
    pub fn element(&self, out: (usize, usize), inp: (usize, usize)) -> f64 {
        let total = inp.0 + inp.1;
        if out.0 + out.1 != total || out.0 > self.n_trunc || out.1 > self.n_trunc {
            return 0.0;
        }
        if inp.0 > self.n_trunc || inp.1 > self.n_trunc {
            return 0.0;
        }
        let (lo, _) = self.block_range(total);
        self.blocks[total][(out.0 - lo, inp.0 - lo)]
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let d = self.n_trunc + 1;
        let mut out = DMatrix::<Complex64>::zeros(d * d, d * d);
        for (total, block) in self.blocks.iter().enumerate() {
            let (lo, hi) = self.block_range(total);
            for r in lo..=hi {
                for c in lo..=hi {
                    let row = r * d + (total - r);
                    let col = c * d + (total - c);
                    out[(row, col)] = Complex64::new(block[(r - lo, c - lo)], 0.0);
                }
            }
        }
        out
    }

    /// Applies the operator to a product-space vector.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let d = self.n_trunc + 1;
        assert_eq!(psi.len(), d * d, "vector does not live on this space");
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for (total, block) in self.blocks.iter().enumerate() {
            let (lo, hi) = self.block_range(total);
            for r in lo..=hi {
                let mut acc = Complex64::new(0.0, 0.0);
                for c in lo..=hi {
                    acc += psi[c * d + (total - c)] * block[(r - lo, c - lo)];
                }
                out[r * d + (total - r)] = acc;
            }
        }
        out
    }

    /// `max |B^T B - I|` over blocks with total photon number `<= max_total`.
    pub fn unitarity_leakage(&self, max_total: usize) -> f64 {
        let mut worst = 0.0f64;
        for block in self.blocks.iter().take(max_total + 1) {
            let prod = block.transpose() * block;
            for r in 0..prod.nrows() {
                for c in 0..prod.ncols() {
                    let target = if r == c { 1.0 } else { 0.0 };
                    worst = worst.max((prod[(r, c)] - target).abs());
                }
            }
        }
        worst
    }
}

/// `exp{θ(a†b − ab†)}` on the space truncated at `n_trunc` photons per mode.
///
/// The generator conserves total photon number, so each block is exponentiated
/// on its own (Padé scaling-and-squaring). The result equals the exponential of
/// the full truncated generator exactly.
pub fn beam_splitter(theta: f64, n_trunc: usize) -> Result<TwoModeOperator> {
    if n_trunc < 1 {
        return Err(Error::invalid("n_trunc", "must be at least 1"));
    }
    if n_trunc > MAX_TRUNCATION {
        return Err(Error::invalid(
            "n_trunc",
            format!("{n_trunc} exceeds the oracle cap of {MAX_TRUNCATION}"),
        ));
    }
    if !theta.is_finite() {
        return Err(Error::invalid("theta", "must be finite"));
    }
    let mut blocks = Vec::with_capacity(2 * n_trunc + 1);
    for total in 0..=2 * n_trunc {
        let lo = total.saturating_sub(n_trunc);
        let hi = total.min(n_trunc);
        let size = hi - lo + 1;
        let mut gen = DMatrix::<f64>::zeros(size, size);
        for i in lo..=hi {
            let j = total - i;
            // a†b |i, j> = sqrt(i+1) sqrt(j) |i+1, j-1>
            if i < hi && j >= 1 {
                gen[(i + 1 - lo, i - lo)] += theta * ((i + 1) as f64 * j as f64).sqrt();
            }
            // -ab† |i, j> = -sqrt(i) sqrt(j+1) |i-1, j+1>
            if i > lo {
                gen[(i - 1 - lo, i - lo)] -= theta * (i as f64 * (j + 1) as f64).sqrt();
            }
        }
        blocks.push(gen.exp());
    }
    Ok(TwoModeOperator {
        theta,
        n_trunc,
        blocks,
    })
}

/// Default per-mode truncation for an input amplitude `z` and herald `m`.
pub fn default_truncation(z: Complex64, m: u32) -> usize {
    12 + (4.0 * (z.norm_sqr() + f64::from(m))).ceil() as usize
}

/// Smallest truncation whose coherent tail weight drops below `tol`.
fn coherent_truncation_for(alpha: Complex64, tol: f64) -> usize {
    let mean = alpha.norm_sqr();
    let mut p = (-mean).exp();
    let mut cum = p;
    let mut n = 0usize;
    while 1.0 - cum > tol && n < 10 * MAX_TRUNCATION {
        n += 1;
        p *= mean / n as f64;
        cum += p;
    }
    n
}

/// Simulates heralded catalysis: `|z>_b ⊗ |m>_a → B(θ) → <m|_a`.
///
/// Returns the normalized conditional state of mode b and the success
/// probability (squared norm before normalization).
pub fn catalyze(
    z: Complex64,
    theta: f64,
    m: u32,
    n_trunc: usize,
) -> Result<(FockVector, f64)> {
    let m = m as usize;
    if m > n_trunc {
        return Err(Error::Truncation {
            n_max: n_trunc,
            tail: 1.0,
            suggested: default_truncation(z, m as u32),
        });
    }
    let input = FockVector::coherent(z, n_trunc);
    let tail = input.norm_defect;
    if tail > 1e-14 {
        return Err(Error::Truncation {
            n_max: n_trunc,
            tail,
            suggested: coherent_truncation_for(z, 1e-15).max(n_trunc + 1),
        });
    }
    let bs = beam_splitter(theta, n_trunc)?;
    let d = n_trunc + 1;
    let mut psi = vec![Complex64::new(0.0, 0.0); d * d];
    for (j, &c) in input.amps.iter().enumerate() {
        psi[m * d + j] = c;
    }
    let out = bs.apply(&psi);
    let conditional: Vec<Complex64> = (0..d).map(|j| out[m * d + j]).collect();
    let state = FockVector::from_amplitudes(conditional);
    let p_succ = state.norm_sqr();
    Ok((state.normalized(), p_succ))
}

/// `<ψ| b^q b†^p |ψ>` by direct ladder-operator action on the amplitudes.
pub fn oracle_moment(state: &FockVector, q: u32, p: u32) -> OracleEstimate<Complex64> {
    let raised_p = raise(&state.amps, p as usize);
    let raised_q = raise(&state.amps, q as usize);
    let len = raised_p.len().min(raised_q.len());
    let value = (0..len)
        .map(|n| raised_q[n].conj() * raised_p[n])
        .sum::<Complex64>();
    OracleEstimate {
        value,
        truncation_warning: state.top_weight() > TAIL_WARNING,
    }
}

/// `(b†)^k` applied to `amps`, extending the support by `k` levels.
fn raise(amps: &[Complex64], k: usize) -> Vec<Complex64> {
    let mut cur = amps.to_vec();
    for _ in 0..k {
        let mut next = vec![Complex64::new(0.0, 0.0); cur.len() + 1];
        for (n, &c) in cur.iter().enumerate() {
            next[n + 1] = c * ((n + 1) as f64).sqrt();
        }
        cur = next;
    }
    cur
}

/// Displacement operator `D(alpha) = exp(alpha b† − alpha* b)` on `|0>..|dim-1>`.
pub fn displacement(alpha: Complex64, dim: usize) -> DMatrix<Complex64> {
    let mut gen = DMatrix::<Complex64>::zeros(dim, dim);
    for n in 0..dim.saturating_sub(1) {
        let s = ((n + 1) as f64).sqrt();
        gen[(n + 1, n)] += alpha * s;
        gen[(n, n + 1)] -= alpha.conj() * s;
    }
    gen.exp()
}

/// Wigner function by displaced parity, `(1/π) Σ_n (−1)^n |<n|D(−γ)|ψ>|²`.
///
/// Phase-space convention `γ = (q + ip)/√2`, normalized so that
/// `∫ W dq dp = 1` (coherent-state peak `1/π`).
pub fn oracle_wigner(state: &FockVector, gamma: Complex64) -> OracleEstimate<f64> {
    let r = gamma.norm();
    let pad = (4.0 * r * r + 10.0 * r).ceil() as usize + 40;
    let dim = state.amps.len() + pad;
    let mut padded = nalgebra::DVector::<Complex64>::zeros(dim);
    for (n, &c) in state.amps.iter().enumerate() {
        padded[n] = c;
    }
    let shifted = displacement(-gamma, dim) * padded;
    let amps: Vec<Complex64> = shifted.iter().copied().collect();
    let value = amps
        .iter()
        .enumerate()
        .map(|(n, c)| if n % 2 == 0 { c.norm_sqr() } else { -c.norm_sqr() })
        .sum::<f64>()
        / PI;
    OracleEstimate {
        value,
        truncation_warning: top_weight(&amps) > TAIL_WARNING || state.top_weight() > TAIL_WARNING,
    }
}

/// Quadrature helpers shared by oracle-style tests.
pub mod quadrature {
    use num_complex::Complex64;

    /// `∫ d²z f(z)` over the square `center ± half_width` (both axes) by the
    /// trapezoid rule on `n × n` nodes. Spectrally accurate for integrands
    /// that are analytic and negligible at the box edge.
    pub fn trapezoid_2d<F>(center: Complex64, half_width: f64, n: usize, f: F) -> Complex64
    where
        F: Fn(Complex64) -> Complex64,
    {
        assert!(n >= 2);
        let h = 2.0 * half_width / (n - 1) as f64;
        let mut total = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let wx = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            let x = center.re - half_width + i as f64 * h;
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let wy = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                let y = center.im - half_width + j as f64 * h;
                row += f(Complex64::new(x, y)) * wy;
            }
            total += row * wx;
        }
        total * h * h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn beam_splitter_at_zero_is_identity() {
        let bs = beam_splitter(0.0, 4).unwrap();
        let dense = bs.to_dense();
        let id = DMatrix::<Complex64>::identity(25, 25);
        assert!((dense - id).camax() < 1e-15);
    }

    #[test]
    fn single_excitation_sector_rotates() {
        let theta = 0.37;
        let bs = beam_splitter(theta, 3).unwrap();
        // B|1,0> = cosθ|1,0> − sinθ|0,1>
        assert!((bs.element((1, 0), (1, 0)) - theta.cos()).abs() < 1e-14);
        assert!((bs.element((0, 1), (1, 0)) + theta.sin()).abs() < 1e-14);
        assert!((bs.element((1, 0), (0, 1)) - theta.sin()).abs() < 1e-14);
    }

    #[test]
    fn quarter_turn_swaps_modes() {
        let bs = beam_splitter(FRAC_PI_2, 5).unwrap();
        for n in 0..=5usize {
            let amp = bs.element((0, n), (n, 0));
            assert!((amp.abs() - 1.0).abs() < 1e-12, "n={n}: {amp}");
        }
    }

    #[test]
    fn dense_form_is_block_diagonal_in_total_number() {
        let bs = beam_splitter(0.8, 4).unwrap();
        let dense = bs.to_dense();
        let d = 5;
        for r in 0..d * d {
            for col in 0..d * d {
                let (ri, rj) = (r / d, r % d);
                let (ci, cj) = (col / d, col % d);
                if ri + rj != ci + cj {
                    assert_eq!(dense[(r, col)], c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn unitarity_leakage_is_tiny() {
        let bs = beam_splitter(1.1, 20).unwrap();
        assert!(bs.unitarity_leakage(10) < 1e-8);
        // truncated blocks are still exact exponentials of a real
        // antisymmetric matrix, so the whole operator is orthogonal
        assert!(bs.unitarity_leakage(40) < 1e-8);
    }

    #[test]
    fn zero_herald_gives_attenuated_coherent_state() {
        let z = c(1.2, -0.4);
        let theta = FRAC_PI_3;
        let (state, p_succ) = catalyze(z, theta, 0, 30).unwrap();
        let expected = FockVector::coherent(z * theta.cos(), 30);
        for (a, b) in state.amps.iter().zip(&expected.amps) {
            assert!((a - b).norm() < 1e-12);
        }
        let closed = (-z.norm_sqr() * theta.sin().powi(2)).exp();
        assert!((p_succ - closed).abs() < 1e-10, "{p_succ} vs {closed}");
    }

    #[test]
    fn perfect_transmission_returns_input() {
        let z = c(0.8, 0.3);
        for m in 0..4 {
            let (state, p_succ) = catalyze(z, 0.0, m, 25).unwrap();
            let expected = FockVector::coherent(z, 25);
            for (a, b) in state.amps.iter().zip(&expected.amps) {
                assert!((a - b).norm() < 1e-12);
            }
            assert!((p_succ - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn p_succ_is_a_probability() {
        for m in 0..4 {
            let (_, p) = catalyze(c(1.0, 0.0), FRAC_PI_4, m, 30).unwrap();
            assert!(p > 0.0 && p <= 1.0);
        }
    }

    #[test]
    fn truncation_too_small_is_reported() {
        let err = catalyze(c(3.0, 0.0), 0.5, 1, 10).unwrap_err();
        assert!(matches!(err, Error::Truncation { suggested, .. } if suggested > 10));
    }

    #[test]
    fn coherent_moments() {
        let alpha = c(0.6, -0.2);
        let state = FockVector::coherent(alpha, 40).normalized();
        let m01 = oracle_moment(&state, 0, 1);
        assert!((m01.value - alpha.conj()).norm() < 1e-13);
        assert!(!m01.truncation_warning);
        assert!((oracle_moment(&state, 0, 0).value - 1.0).norm() < 1e-14);
        let m11 = oracle_moment(&state, 1, 1).value;
        assert!((m11 - (1.0 + alpha.norm_sqr())).norm() < 1e-13);
    }

    #[test]
    fn truncation_warning_fires_for_edge_supported_states() {
        let state = FockVector::fock(5, 5);
        assert!(oracle_moment(&state, 1, 1).truncation_warning);
    }

    #[test]
    fn vacuum_and_coherent_wigner_peaks() {
        let vac = FockVector::fock(0, 10);
        assert!((oracle_wigner(&vac, c(0.0, 0.0)).value - 1.0 / PI).abs() < 1e-12);
        let alpha = c(0.7, 0.4);
        let coh = FockVector::coherent(alpha, 40).normalized();
        assert!((oracle_wigner(&coh, alpha).value - 1.0 / PI).abs() < 1e-10);
        // Fock |1> is negative at the origin with value -1/π
        let one = FockVector::fock(1, 10);
        assert!((oracle_wigner(&one, c(0.0, 0.0)).value + 1.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn doubling_truncation_does_not_move_results() {
        let z = c(1.0, 0.5);
        let n = default_truncation(z, 2);
        let (a, _) = catalyze(z, FRAC_PI_4, 2, n).unwrap();
        let (b, _) = catalyze(z, FRAC_PI_4, 2, 2 * n).unwrap();
        for (x, y) in a.amps.iter().zip(&b.amps) {
            assert!((x - y).norm() < 1e-9);
        }
        let ma = oracle_moment(&a, 2, 2).value;
        let mb = oracle_moment(&b, 2, 2).value;
        assert!((ma - mb).norm() < 1e-9);
        let g = c(0.3, -0.5);
        assert!((oracle_wigner(&a, g).value - oracle_wigner(&b, g).value).abs() < 1e-9);
    }

    #[test]
    fn trapezoid_integrates_a_gaussian() {
        let v = quadrature::trapezoid_2d(c(0.5, -0.2), 8.0, 161, |z| {
            c((-(z - c(0.5, -0.2)).norm_sqr()).exp(), 0.0)
        });
        assert!((v.re - PI).abs() < 1e-12);
    }
}
