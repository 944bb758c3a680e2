//! Scalar nonclassicality diagnostics.
//!
//! All statistics are assembled from moments supplied by a [`MomentSource`]:
//! the closed-form [`MomentTable`] in normal use, or a Fock vector when
//! auditing against the brute-force oracle.

use num_complex::Complex64;

use crate::catalysis::{amplitudes_unchecked, CatalysisParams, MomentTable};
use crate::error::{Error, Result};
use crate::fock_oracle::{oracle_moment, FockVector};
use crate::sweep::{self, ScanSpec, ScanVariable};

/// Vacuum variance of either quadrature for `Q = (b + b†)/√2`.
pub const VACUUM_VARIANCE: f64 = 0.5;

/// Anything that can report single-mode moments of a normalized state.
pub trait MomentSource {
    /// `<b^q b†^p>`.
    fn antinormal(&self, q: u32, p: u32) -> Result<Complex64>;
    /// `<b†^p b^q>`.
    fn normal(&self, p: u32, q: u32) -> Result<Complex64>;
}

impl MomentSource for MomentTable {
    fn antinormal(&self, q: u32, p: u32) -> Result<Complex64> {
        self.get(q, p)
    }

    fn normal(&self, p: u32, q: u32) -> Result<Complex64> {
        MomentTable::normal(self, p, q)
    }
}

impl MomentSource for FockVector {
    fn antinormal(&self, q: u32, p: u32) -> Result<Complex64> {
        Ok(oracle_moment(self, q, p).value)
    }

    fn normal(&self, p: u32, q: u32) -> Result<Complex64> {
        // <b^p ψ | b^q ψ>
        let lower = |k: u32| -> Vec<Complex64> {
            let mut cur = self.amps.clone();
            for _ in 0..k {
                cur = (1..cur.len())
                    .map(|n| cur[n] * (n as f64).sqrt())
                    .collect();
            }
            cur
        };
        let (a, b) = (lower(p), lower(q));
        Ok(a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum())
    }
}

/// Quadrature variances and their shot-noise-relative levels in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureVariances {
    pub var_q: f64,
    pub var_p: f64,
    pub db_q: f64,
    pub db_p: f64,
    /// Largest imaginary part discarded while assembling the variances.
    pub imag_residue: f64,
}

/// Result of minimizing `(ΔQ)²` over the beam-splitter angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeOptimum {
    /// Most negative `10 log10(var_q / 0.5)` found.
    pub db_best: f64,
    pub theta_star: f64,
    pub var_at_star: f64,
    /// Scan points dropped because the variance was not finite.
    pub skipped: usize,
}

/// Intensity-correlation regime of a `g²` value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum G2Class {
    /// `g² < 1`
    Antibunched,
    /// `1 <= g² <= 2`
    Bunched,
    /// `g² > 2`
    SuperBunched,
}

impl G2Class {
    pub fn of(g2: f64) -> Self {
        if g2 < 1.0 {
            G2Class::Antibunched
        } else if g2 <= 2.0 {
            G2Class::Bunched
        } else {
            G2Class::SuperBunched
        }
    }
}

pub fn to_db(variance: f64) -> f64 {
    10.0 * (variance / VACUUM_VARIANCE).log10()
}

fn positive_mean_photon<S: MomentSource + ?Sized>(src: &S) -> Result<f64> {
    let n = src.normal(1, 1)?.re;
    if !(n > 0.0) {
        return Err(Error::Degenerate(
            "mean photon number is zero (vacuum state)".into(),
        ));
    }
    Ok(n)
}

pub fn mean_photon_from<S: MomentSource + ?Sized>(src: &S) -> Result<f64> {
    Ok(src.normal(1, 1)?.re)
}

/// Mandel `Q = (<(b†b)²> − <b†b>²)/<b†b> − 1`.
pub fn mandel_q_from<S: MomentSource + ?Sized>(src: &S) -> Result<f64> {
    let n = positive_mean_photon(src)?;
    let n2 = src.normal(2, 2)?.re;
    Ok((n2 - n * n) / n)
}

/// `g² = <b†²b²>/<b†b>²`.
pub fn g2_from<S: MomentSource + ?Sized>(src: &S) -> Result<f64> {
    let n = positive_mean_photon(src)?;
    Ok(src.normal(2, 2)?.re / (n * n))
}

/// Mandel Q rewritten with anti-normally ordered moments only.
pub fn mandel_q_antinormal<S: MomentSource + ?Sized>(src: &S) -> Result<f64> {
    let m11 = src.antinormal(1, 1)?.re;
    let m22 = src.antinormal(2, 2)?.re;
    if !(m11 - 1.0 > 0.0) {
        return Err(Error::Degenerate("mean photon number is zero".into()));
    }
    Ok((m22 - m11 * m11 - 2.0 * m11 + 1.0) / (m11 - 1.0))
}

/// `g²` rewritten with anti-normally ordered moments only.
pub fn g2_antinormal<S: MomentSource + ?Sized>(src: &S) -> Result<f64> {
    let m11 = src.antinormal(1, 1)?.re;
    let m22 = src.antinormal(2, 2)?.re;
    if !(m11 - 1.0 > 0.0) {
        return Err(Error::Degenerate("mean photon number is zero".into()));
    }
    Ok((m22 - 4.0 * m11 + 2.0) / ((m11 - 1.0) * (m11 - 1.0)))
}

pub fn quadrature_variances_from<S: MomentSource + ?Sized>(
    src: &S,
) -> Result<QuadratureVariances> {
    let b = src.antinormal(1, 0)?;
    let bd = src.antinormal(0, 1)?;
    let b2 = src.antinormal(2, 0)?;
    let bd2 = src.antinormal(0, 2)?;
    let bbd = src.antinormal(1, 1)?;
    let common = bbd * 2.0 - b * bd * 2.0 - 1.0;
    let coherent = b2 - b * b + bd2 - bd * bd;
    let var_q = (coherent + common) * 0.5;
    let var_p = (common - coherent) * 0.5;
    Ok(QuadratureVariances {
        var_q: var_q.re,
        var_p: var_p.re,
        db_q: to_db(var_q.re),
        db_p: to_db(var_p.re),
        imag_residue: var_q.im.abs().max(var_p.im.abs()),
    })
}

/// Variance of `X_φ = (b e^{−iφ} + b† e^{iφ})/√2`; `φ = 0` is Q, `φ = π/2` is P.
pub fn rotated_quadrature_variance<S: MomentSource + ?Sized>(src: &S, phi: f64) -> Result<f64> {
    let b = src.antinormal(1, 0)?;
    let bd = src.antinormal(0, 1)?;
    let b2 = src.antinormal(2, 0)?;
    let bd2 = src.antinormal(0, 2)?;
    let bbd = src.antinormal(1, 1)?;
    let rot = Complex64::from_polar(1.0, 2.0 * phi);
    let v = ((b2 - b * b) * rot.conj() + (bd2 - bd * bd) * rot + bbd * 2.0 - b * bd * 2.0 - 1.0)
        * 0.5;
    Ok(v.re)
}

/// Phase-optimized normally ordered quadrature variance,
/// `−2|<b†²> − <b†>²| + 2<bb†> − 2|<b†>|² − 2`.
pub fn s_opt_from<S: MomentSource + ?Sized>(src: &S) -> Result<f64> {
    let bd = src.antinormal(0, 1)?;
    let bd2 = src.antinormal(0, 2)?;
    let bbd = src.antinormal(1, 1)?.re;
    Ok(-2.0 * (bd2 - bd * bd).norm() + 2.0 * bbd - 2.0 * bd.norm_sqr() - 2.0)
}

pub fn mean_photon(params: &CatalysisParams) -> f64 {
    MomentTable::new(*params).mean_photon()
}

pub fn mandel_q(params: &CatalysisParams) -> Result<f64> {
    mandel_q_from(&MomentTable::new(*params))
}

pub fn g2(params: &CatalysisParams) -> Result<f64> {
    g2_from(&MomentTable::new(*params))
}

pub fn quadrature_variances(params: &CatalysisParams) -> Result<QuadratureVariances> {
    quadrature_variances_from(&MomentTable::new(*params))
}

pub fn s_opt(params: &CatalysisParams) -> Result<f64> {
    s_opt_from(&MomentTable::new(*params))
}

/// Probability of `n` photons,
/// `p_n = N̄²/n! e^{−|z̄|²} |Σ_l C(m,l) C(n,l) (−μ)^l z̄^{n−l}|²`.
pub fn pnd(params: &CatalysisParams, n: usize) -> f64 {
    amplitudes_unchecked(params, n)[n].norm_sqr()
}

/// `p_0..p_{n_max}` in one pass.
pub fn pnd_vector(params: &CatalysisParams, n_max: usize) -> Vec<f64> {
    amplitudes_unchecked(params, n_max)
        .into_iter()
        .map(|c| c.norm_sqr())
        .collect()
}

/// Minimizes `(ΔQ)²` over `θ`: uniform coarse scan, then golden-section
/// refinement around the best coarse point.
pub fn optimal_squeezing(z: Complex64, m: u32, scan: &ScanSpec) -> Result<SqueezeOptimum> {
    if scan.variable != ScanVariable::Theta {
        return Err(Error::invalid("scan", "optimal squeezing scans theta"));
    }
    let objective = |theta: f64| -> Result<f64> {
        let params = CatalysisParams::new(z, theta, m)?;
        let v = quadrature_variances(&params)?.var_q;
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(Error::NonConvergence(format!("variance {v} at theta {theta}")))
        }
    };
    let result = sweep::scan_fn(&objective, scan)?;
    let best = result
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::NonConvergence("no finite variance on the scan".into()))?;
    let xs = &result.abscissas;
    let lo = xs[best.saturating_sub(1)];
    let hi = xs[(best + 1).min(xs.len() - 1)];
    let (theta_star, var) = if scan.refine {
        sweep::golden_section_min(
            |t| objective(t).unwrap_or(f64::INFINITY),
            lo,
            hi,
            sweep::REFINE_TOLERANCE,
        )
    } else {
        (xs[best], result.values[best])
    };
    let (theta_star, var) = if var <= result.values[best] {
        (theta_star, var)
    } else {
        (xs[best], result.values[best])
    };
    Ok(SqueezeOptimum {
        db_best: to_db(var),
        theta_star,
        var_at_star: var,
        skipped: result.skipped.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalysis::output_amplitudes_auto;
    use crate::fock_oracle::{catalyze, default_truncation};
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn oracle_state(p: &CatalysisParams) -> FockVector {
        catalyze(p.z(), p.theta(), p.m(), default_truncation(p.z(), p.m()))
            .unwrap()
            .0
    }

    #[test]
    fn coherent_state_is_poissonian() {
        let p = CatalysisParams::real(1.0, FRAC_PI_4, 0).unwrap();
        assert!(mandel_q(&p).unwrap().abs() < 1e-14);
        assert!((g2(&p).unwrap() - 1.0).abs() < 1e-14);
        let v = quadrature_variances(&p).unwrap();
        assert!((v.var_q - 0.5).abs() < 1e-12 && (v.var_p - 0.5).abs() < 1e-12);
        assert!(s_opt(&p).unwrap().abs() < 1e-14);
    }

    #[test]
    fn single_photon_catalysis_gives_sub_poissonian_light() {
        let p = CatalysisParams::real(1.0, 0.1, 1).unwrap();
        assert!(mandel_q(&p).unwrap() < 0.0);
    }

    #[test]
    fn vacuum_input_is_degenerate() {
        let p = CatalysisParams::real(0.0, 0.5, 2).unwrap();
        assert!(matches!(mandel_q(&p), Err(Error::Degenerate(_))));
        assert!(matches!(g2(&p), Err(Error::Degenerate(_))));
    }

    #[test]
    fn mandel_q_matches_oracle() {
        let p = CatalysisParams::real(2.0, FRAC_PI_3, 3).unwrap();
        let a = mandel_q(&p).unwrap();
        let b = mandel_q_from(&oracle_state(&p)).unwrap();
        assert!((a - b).abs() / b.abs() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn g2_regimes() {
        let coh = CatalysisParams::real(0.7, 0.4, 0).unwrap();
        assert!((g2(&coh).unwrap() - 1.0).abs() < 1e-12);
        let high_reflect = CatalysisParams::real(1.0, 1.2, 1).unwrap();
        let g = g2(&high_reflect).unwrap();
        assert!(g < 1.0);
        assert_eq!(G2Class::of(g), G2Class::Antibunched);
        assert_eq!(G2Class::of(1.5), G2Class::Bunched);
        assert_eq!(G2Class::of(6.9), G2Class::SuperBunched);
    }

    #[test]
    fn pnd_reduces_to_poisson_for_m0() {
        let p = CatalysisParams::real(1.3, 0.6, 0).unwrap();
        let mean = p.zbar().norm_sqr();
        let mut poisson = (-mean).exp();
        for n in 0..25 {
            if n > 0 {
                poisson *= mean / n as f64;
            }
            assert!((pnd(&p, n) - poisson).abs() < 1e-15);
        }
    }

    #[test]
    fn pnd_equals_amplitude_moduli_and_sums_to_one() {
        let p = CatalysisParams::real(1.0, FRAC_PI_4, 2).unwrap();
        let v = output_amplitudes_auto(&p).unwrap();
        let probs = pnd_vector(&p, v.n_trunc);
        for (n, a) in v.amps.iter().enumerate() {
            assert!((a.norm_sqr() - probs[n]).abs() < 1e-12);
            assert!((pnd(&p, n) - probs[n]).abs() < 1e-15);
        }
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn quadrature_variance_matches_oracle() {
        let p = CatalysisParams::real(0.5, 0.6, 1).unwrap();
        let a = quadrature_variances(&p).unwrap();
        let b = quadrature_variances_from(&oracle_state(&p)).unwrap();
        assert!((a.var_q - b.var_q).abs() < 1e-8);
        assert!((a.var_p - b.var_p).abs() < 1e-8);
        assert!(a.imag_residue < 1e-10);
    }

    #[test]
    fn rotated_quadratures_reduce_to_q_and_p() {
        let t = MomentTable::new(CatalysisParams::new(c(0.9, 0.4), 0.7, 2).unwrap());
        let v = quadrature_variances_from(&t).unwrap();
        assert!((rotated_quadrature_variance(&t, 0.0).unwrap() - v.var_q).abs() < 1e-13);
        let half_pi = std::f64::consts::FRAC_PI_2;
        assert!((rotated_quadrature_variance(&t, half_pi).unwrap() - v.var_p).abs() < 1e-13);
    }

    #[test]
    fn s_opt_negative_for_single_photon_catalysis() {
        let p = CatalysisParams::real(1.0, 0.3, 1).unwrap();
        let s = s_opt(&p).unwrap();
        assert!((-1.0..0.0).contains(&s), "{s}");
    }

    #[test]
    fn s_opt_matches_oracle() {
        let p = CatalysisParams::real(2.0, FRAC_PI_3, 2).unwrap();
        let a = s_opt(&p).unwrap();
        let b = s_opt_from(&oracle_state(&p)).unwrap();
        assert!((a - b).abs() < 1e-8 * b.abs().max(1.0));
    }

    #[test]
    fn antinormal_forms_agree_with_primary_definitions() {
        let t = MomentTable::new(CatalysisParams::new(c(1.0, 0.3), 0.5, 2).unwrap());
        let q = mandel_q_from(&t).unwrap();
        let qa = mandel_q_antinormal(&t).unwrap();
        assert!((q - qa).abs() < 1e-10 * q.abs().max(1.0));
        let g = g2_from(&t).unwrap();
        let ga = g2_antinormal(&t).unwrap();
        assert!((g - ga).abs() < 1e-10 * g);
    }

    #[test]
    fn single_photon_optimum_is_z_independent() {
        let scan = ScanSpec::theta_default();
        let a = optimal_squeezing(c(0.5, 0.0), 1, &scan).unwrap();
        let b = optimal_squeezing(c(2.5, 0.0), 1, &scan).unwrap();
        assert!((a.db_best - b.db_best).abs() < 0.005);
        assert!(a.db_best < 0.0 && a.theta_star > 0.0 && a.theta_star < std::f64::consts::FRAC_PI_2);
        assert_eq!(a.skipped, 0);
    }
}
