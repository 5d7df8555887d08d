use std::f64::consts::PI;

use num_complex::Complex64;

use super::{square_mod4, FresnelError, FresnelPair};
use crate::quadrature::gauss_legendre_24;

/// Subdivision budget.
const MAX_SUBINTERVALS: usize = 1 << 20;
/// Initial panels cover at most this much of `u = t²`; the phase `πu/2`
/// then advances by at most 8π (four periods) per panel.
const INITIAL_U_SPAN: f64 = 16.0;

/// `C(x) + i·S(x)` by adaptive Gauss–Legendre quadrature of `e^{iπt²/2}`.
///
/// Panels are halved until the 24-point rule on a panel and on its two
/// halves agree to within the panel's width-proportional share of
/// `tolerance`. The phase on each panel is evaluated from the panel's left
/// edge `p` and the local offset `s` as `π/2·(p² mod 4 + s(2p + s))`, so the
/// rounding of `t = p + s` does not leak into the phase for large `t`.
pub fn fresnel_oracle(x: f64, tolerance: f64) -> Result<FresnelPair, FresnelError> {
    if !x.is_finite() {
        return Err(FresnelError::NonFinite(x));
    }
    if x.abs() > 1e4 {
        return Err(FresnelError::ArgumentTooLarge(x.abs()));
    }
    if !(1e-14..=1e-6).contains(&tolerance) {
        return Err(FresnelError::InvalidTolerance(tolerance));
    }
    let ax = x.abs();
    if ax == 0.0 {
        return Ok(FresnelPair { x, c: 0.0, s: 0.0 });
    }

    let initial = (ax * ax / INITIAL_U_SPAN).ceil().max(1.0);
    if initial > MAX_SUBINTERVALS as f64 {
        return Err(FresnelError::NotConverged {
            achieved: f64::INFINITY,
            subintervals: 0,
        });
    }
    let initial = initial as usize;
    let density = tolerance / ax;

    // Breakpoints equally spaced in t² so every initial panel spans the same phase.
    let breakpoint = |j: usize| -> f64 {
        if j == initial {
            ax
        } else {
            ax * (j as f64 / initial as f64).sqrt()
        }
    };
    let mut stack: Vec<(f64, f64, Complex64)> = Vec::with_capacity(initial + 64);
    for j in (0..initial).rev() {
        let (p0, p1) = (breakpoint(j), breakpoint(j + 1));
        stack.push((p0, p1, panel(p0, p1)));
    }

    let mut total = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut accepted = 0usize;
    while let Some((p0, p1, coarse)) = stack.pop() {
        let mid = 0.5 * (p0 + p1);
        let left = panel(p0, mid);
        let right = panel(mid, p1);
        let fine = left + right;
        let diff = (fine - coarse).norm();
        if diff <= density * (p1 - p0) || mid <= p0 || mid >= p1 {
            total += fine;
            error += diff;
            accepted += 1;
            continue;
        }
        if accepted + stack.len() + 2 > MAX_SUBINTERVALS {
            let pending: f64 = stack.iter().map(|(_, _, c)| c.norm()).sum();
            return Err(FresnelError::NotConverged {
                achieved: error + diff + pending,
                subintervals: accepted + stack.len() + 1,
            });
        }
        stack.push((mid, p1, right));
        stack.push((p0, mid, left));
    }

    let (c, s) = if x < 0.0 {
        (-total.re, -total.im)
    } else {
        (total.re, total.im)
    };
    Ok(FresnelPair { x, c, s })
}

fn panel(p0: f64, p1: f64) -> Complex64 {
    let rule = gauss_legendre_24();
    let half = 0.5 * (p1 - p0);
    let base = square_mod4(p0);
    let twice_start = 2.0 * p0;
    let mut acc = Complex64::new(0.0, 0.0);
    for (node, w) in rule.nodes().iter().zip(rule.weights()) {
        let s = half * (1.0 + node);
        let phase = 0.5 * PI * (base + s * (twice_start + s));
        let (sin, cos) = phase.sin_cos();
        acc += Complex64::new(cos, sin) * *w;
    }
    acc * half
}
