//! wasm-bindgen surface for the static page in `www/`.
//!
//! The exported functions are thin wrappers over the plain functions in [`view`],
//! which are what the native tests exercise.

use wasm_bindgen::prelude::*;

pub mod view;

fn js_err(e: catlab::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Wigner map on an `n × n` grid centred on the state.
#[wasm_bindgen]
pub struct WignerImage(view::WignerView);

#[wasm_bindgen]
impl WignerImage {
    #[wasm_bindgen(getter)]
    pub fn n(&self) -> usize {
        self.0.n
    }

    /// `[q_min, q_max, p_min, p_max]`
    #[wasm_bindgen(getter)]
    pub fn bounds(&self) -> Vec<f64> {
        self.0.bounds.to_vec()
    }

    /// Row-major, `q` outer.
    #[wasm_bindgen(getter)]
    pub fn values(&self) -> Vec<f64> {
        self.0.values.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn min(&self) -> f64 {
        self.0.min
    }

    #[wasm_bindgen(getter)]
    pub fn max(&self) -> f64 {
        self.0.max
    }

    #[wasm_bindgen(getter)]
    pub fn delta(&self) -> f64 {
        self.0.delta
    }
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn wigner_image(
    z_re: f64,
    z_im: f64,
    theta: f64,
    m: u32,
    kt: f64,
    nbar: f64,
    half_width: f64,
    n: usize,
) -> Result<WignerImage, JsError> {
    let params = view::params(z_re, z_im, theta, m).map_err(js_err)?;
    view::wigner_view(&params, kt, nbar, half_width, n).map(WignerImage).map_err(js_err)
}

/// Interleaved `[θ0, v0, θ1, v1, ...]` over `(0, π/2)`; skipped points carry `NaN`.
#[wasm_bindgen]
pub fn metric_curve(metric: &str, z_re: f64, z_im: f64, m: u32, points: usize) -> Result<Vec<f64>, JsError> {
    let params = view::params(z_re, z_im, std::f64::consts::FRAC_PI_4, m).map_err(js_err)?;
    view::metric_curve(metric, &params, points).map_err(js_err)
}

/// `p_0 ..= p_{n_max}`.
#[wasm_bindgen]
pub fn photon_distribution(z_re: f64, z_im: f64, theta: f64, m: u32, n_max: usize) -> Result<Vec<f64>, JsError> {
    let params = view::params(z_re, z_im, theta, m).map_err(js_err)?;
    Ok(view::photon_distribution(&params, n_max))
}
