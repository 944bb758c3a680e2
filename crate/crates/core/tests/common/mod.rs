#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

use catlab::fock_oracle::{catalyze, default_truncation, quadrature::trapezoid_2d, FockVector};
use catlab::wigner::{ThermalChannel, WignerFunction};
use catlab::{CatalysisParams, Complex64};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `z ∈ {0.5, 1, 2} × {1, e^{iπ/7}}`, `θ ∈ {π/6, π/4, π/3}`, `m ∈ 0..=4`.
pub fn standard_lattice() -> Vec<CatalysisParams> {
    let mut out = Vec::new();
    for r in [0.5, 1.0, 2.0] {
        for phase in [0.0, PI / 7.0] {
            for theta in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
                for m in 0..=4 {
                    out.push(CatalysisParams::new(Complex64::from_polar(r, phase), theta, m).unwrap());
                }
            }
        }
    }
    out
}

pub fn oracle_state(p: &CatalysisParams) -> FockVector {
    catalyze(p.z(), p.theta(), p.m(), default_truncation(p.z(), p.m()))
        .expect("default truncation converges on the lattice")
        .0
}

/// Thermal-channel output by direct quadrature of the Gaussian convolution
/// `W(β,t) = 2/((2ñ+1)T) ∫ d²γ/π W(γ) exp{−2|β − γ e^{−κt}|²/((2ñ+1)T)}`.
pub fn convolved_wigner(params: &CatalysisParams, ch: &ThermalChannel, beta: Complex64) -> f64 {
    let w = WignerFunction::new(params);
    let e = ch.decay();
    let spread = (2.0 * ch.nbar + 1.0) * ch.t();
    // the product is confined to the support of W; the step resolves the kernel
    let sigma = (spread / (4.0 * e * e)).sqrt();
    let half_width = 6.0;
    let n = ((2.0 * half_width / (sigma / 4.0).min(0.05)).ceil() as usize).max(401);
    let integrand = |g: Complex64| {
        let k = (-2.0 * (beta - g * e).norm_sqr() / spread).exp();
        Complex64::new(w.value(g) * k, 0.0)
    };
    trapezoid_2d(params.zbar(), half_width, n, integrand).re * 2.0 / (spread * PI)
}
