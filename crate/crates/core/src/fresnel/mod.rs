//! Fresnel integrals
//!
//! ```text
//! C(x) = ∫₀ˣ cos(π t²/2) dt        S(x) = ∫₀ˣ sin(π t²/2) dt
//! ```
//!
//! The fast path has three regimes on `|x|`:
//! - Maclaurin series below [`SERIES_LIMIT`],
//! - the auxiliary function `f + i·g` from a Lentz continued fraction for the
//!   complementary error function up to [`ASYMPTOTIC_LIMIT`],
//! - leading asymptotic terms of the auxiliary functions beyond that.
//!
//! [`fresnel_oracle`] integrates the defining integrals directly and shares no
//! code with the fast path apart from the phase reduction helper.

mod oracle;

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

pub use oracle::fresnel_oracle;

/// Below this the series is used.
pub const SERIES_LIMIT: f64 = 1.6;
/// Above this only the leading asymptotic terms are used.
pub const ASYMPTOTIC_LIMIT: f64 = 1e4;

const SERIES_EPS: f64 = 1e-17;
const CF_EPS: f64 = 1e-16;
const CF_MAX_ITER: usize = 500;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FresnelError {
    #[error("Fresnel argument must be finite, got {0}")]
    NonFinite(f64),
    #[error("oracle argument |x| = {0} exceeds 1e4")]
    ArgumentTooLarge(f64),
    #[error("oracle tolerance {0} outside [1e-14, 1e-6]")]
    InvalidTolerance(f64),
    #[error("oracle quadrature did not converge: achieved bound {achieved:e} after {subintervals} subintervals")]
    NotConverged { achieved: f64, subintervals: usize },
}

/// `(C(x), S(x))` at `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelPair {
    pub x: f64,
    pub c: f64,
    pub s: f64,
}

impl FresnelPair {
    /// `C + i·S`.
    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.c, self.s)
    }

    /// `C² + S²`.
    pub fn norm_sqr(&self) -> f64 {
        self.c * self.c + self.s * self.s
    }
}

/// Evaluates both Fresnel integrals at `x`.
pub fn fresnel(x: f64) -> Result<FresnelPair, FresnelError> {
    if !x.is_finite() {
        return Err(FresnelError::NonFinite(x));
    }
    let ax = x.abs();
    let (c, s) = if ax < SERIES_LIMIT {
        series(ax)
    } else if ax <= ASYMPTOTIC_LIMIT {
        continued_fraction(ax)
    } else {
        asymptotic(ax)
    };
    let (c, s) = if x.is_sign_negative() {
        (-c, -s)
    } else {
        (c, s)
    };
    Ok(FresnelPair { x, c, s })
}

/// `x² mod 4`, accurate to a few ulps of the reduced value even when `x²`
/// itself is far beyond 2^53 ulps of 4.
pub(crate) fn square_mod4(x: f64) -> f64 {
    let hi = x * x;
    let lo = x.mul_add(x, -hi);
    let r = hi % 4.0 + lo;
    r.rem_euclid(4.0)
}

/// `(sin, cos)` of `π x²/2`.
pub(crate) fn half_pi_square_sin_cos(x: f64) -> (f64, f64) {
    (0.5 * PI * square_mod4(x)).sin_cos()
}

fn series(x: f64) -> (f64, f64) {
    // Alternating terms x^{2k+1}·(π/2)^k / k! split by parity of k between C and S,
    // each divided by (2k+1).
    if x == 0.0 {
        return (0.0, 0.0);
    }
    let fact = 0.5 * PI * x * x;
    let mut term = x;
    let mut c = x;
    let mut s = 0.0;
    let mut k = 1usize;
    loop {
        term *= fact / k as f64;
        let contribution = term / (2 * k + 1) as f64;
        // k mod 4: 1 → +S, 2 → −C, 3 → −S, 0 → +C
        match k % 4 {
            1 => s += contribution,
            2 => c -= contribution,
            3 => s -= contribution,
            _ => c += contribution,
        }
        if contribution < SERIES_EPS * c.abs().max(s.abs()) || k > 200 {
            break;
        }
        k += 1;
    }
    (c, s)
}

/// Modified Lentz evaluation of the continued fraction for
/// `erfc` along the diagonal, giving `C + iS` directly.
fn continued_fraction(x: f64) -> (f64, f64) {
    let tiny = 1e-300;
    let pix2 = PI * x * x;
    let mut b = Complex64::new(1.0, -pix2);
    let mut cc = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    let mut n = -1.0;
    for _ in 2..CF_MAX_ITER {
        n += 2.0;
        let a = -n * (n + 1.0);
        b += 4.0;
        d = (d * a + b).inv();
        cc = b + cc.inv() * a;
        let del = cc * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < CF_EPS {
            break;
        }
    }
    h *= Complex64::new(x, -x);
    let (sin, cos) = half_pi_square_sin_cos(x);
    let cs = Complex64::new(0.5, 0.5) * (Complex64::new(1.0, 0.0) - Complex64::new(cos, sin) * h);
    (cs.re, cs.im)
}

fn asymptotic(x: f64) -> (f64, f64) {
    let pix = PI * x;
    let u = 1.0 / (pix * x);
    let u2 = u * u;
    let f = (1.0 - 3.0 * u2) / pix;
    let g = u * (1.0 - 15.0 * u2) / pix;
    let (sin, cos) = half_pi_square_sin_cos(x);
    (0.5 + f * sin - g * cos, 0.5 - f * cos - g * sin)
}
