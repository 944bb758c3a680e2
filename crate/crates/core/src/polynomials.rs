//! Laguerre polynomials `L_m(x)` and two-variable Hermite polynomials
//! `H_{m,n}(x, y)` with complex arguments.
//!
//! The two-variable Hermite family used throughout is
//!
//! ```text
//! H_{m,n}(x, y) = sum_{k=0}^{min(m,n)} (-1)^k m! n! / (k! (m-k)! (n-k)!) x^(m-k) y^(n-k)
//! ```
//!
//! which satisfies `(-1)^m / m! * H_{m,m}(x, y) = L_m(x y)` and the Gaussian
//! integral `H_{m,n}(xi, eta) = (-1)^n e^{xi eta} ∫ d²z/π z^n z*^m e^{-|z|² + xi z - eta z*}`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest polynomial order accepted anywhere in the crate.
pub const MAX_ORDER: u32 = 64;

/// A validated polynomial order, `0 <= m <= MAX_ORDER`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyOrder(u32);

impl PolyOrder {
    pub fn new(order: u32) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::OrderCap {
                order,
                cap: MAX_ORDER,
            });
        }
        Ok(PolyOrder(order))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for PolyOrder {
    type Error = Error;

    fn try_from(order: u32) -> Result<Self> {
        PolyOrder::new(order)
    }
}

/// Exact binomial coefficient, computed in 128-bit integers.
pub fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        // c * (n - i) is divisible by (i + 1) at every step
        c = c * u128::from(n - i) / u128::from(i + 1);
    }
    c
}

/// `n!` as a double. Exact up to 22!, correctly rounded products beyond.
pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * f64::from(k))
}

/// Laguerre polynomial `L_m(x) = sum_l C(m,l) (-1)^l x^l / l!`.
pub fn laguerre(m: PolyOrder, x: Complex64) -> Complex64 {
    laguerre_unchecked(m.get(), x)
}

pub(crate) fn laguerre_unchecked(m: u32, x: Complex64) -> Complex64 {
    // Horner from the top coefficient down.
    let mut acc = Complex64::new(0.0, 0.0);
    for l in (0..=m).rev() {
        acc = acc * x + laguerre_coefficient(m, l);
    }
    acc
}

/// Coefficient of `x^l` in `L_m(x)`.
pub fn laguerre_coefficient(m: u32, l: u32) -> f64 {
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    sign * binomial(m, l) as f64 / factorial(l)
}

/// Two-variable Hermite polynomial `H_{m,n}(x, y)`.
pub fn hermite2(m: PolyOrder, n: PolyOrder, x: Complex64, y: Complex64) -> Complex64 {
    hermite2_scaled_unchecked(m.get(), n.get(), x, y, Complex64::new(1.0, 0.0))
}

/// `sum_k (-1)^k m! n! / (k! (m-k)! (n-k)!) s^k x^(m-k) y^(n-k)`.
///
/// With `s = 1` this is [`hermite2`]. The extra scale lets the thermal-channel
/// Wigner function be written without square roots of the (possibly negative)
/// channel parameter.
pub fn hermite2_scaled(
    m: PolyOrder,
    n: PolyOrder,
    x: Complex64,
    y: Complex64,
    s: Complex64,
) -> Complex64 {
    hermite2_scaled_unchecked(m.get(), n.get(), x, y, s)
}

#[inline]
pub(crate) fn hermite2_unchecked(m: u32, n: u32, x: Complex64, y: Complex64) -> Complex64 {
    hermite2_scaled_unchecked(m, n, x, y, Complex64::new(1.0, 0.0))
}

pub(crate) fn hermite2_scaled_unchecked(
    m: u32,
    n: u32,
    x: Complex64,
    y: Complex64,
    s: Complex64,
) -> Complex64 {
    let kmax = m.min(n);
    // H = x^(m-K) y^(n-K) * sum_k (-1)^k c_k s^k (xy)^(K-k), Horner in u = xy.
    let u = x * y;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut s_pow = Complex64::new(1.0, 0.0);
    let mut coeffs = [Complex64::new(0.0, 0.0); MAX_ORDER as usize + 1];
    for k in 0..=kmax {
        let c = factorial(k) * binomial(m, k) as f64 * binomial(n, k) as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        coeffs[k as usize] = s_pow * (sign * c);
        s_pow *= s;
    }
    // highest power of u belongs to k = 0
    for k in 0..=kmax {
        acc = acc * u + coeffs[k as usize];
    }
    acc * x.powu(m - kmax) * y.powu(n - kmax)
}
