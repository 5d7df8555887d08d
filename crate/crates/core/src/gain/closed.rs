//! Fresnel-integral closed forms for on-axis defocus, and the `sinc·cos`
//! transverse profile on the focal plane.
//!
//! With `s = √(2/(λ·z_eff))` and `p = s·δ/2` the element half-height in
//! Fresnel units, the y-factor is `C²(p) + S²(p)` and the pair of sub-arrays
//! at `±Δ̄` contributes `(C + iS)(Np + sΔ̄) + (C + iS)(Np − sΔ̄)`. For
//! `δ = λ/2`, `p² = λ/(8·z_eff)`, which is the usual `a` parameter.

use std::f64::consts::PI;

use super::{GainError, Route, Scenario};
use crate::fresnel::fresnel;
use crate::geometry::{effective_distance, ArrayKind};

/// Normalized sinc, `sin(πu)/(πu)`.
pub fn sinc(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        let x = PI * u;
        x.sin() / x
    }
}

/// On-axis ULA gain with half-wavelength spacing.
pub fn gain_ula_closed(n: usize, wavelength: f64, focus: f64, z: f64) -> Result<f64, GainError> {
    ula_closed_general(n, wavelength / 2.0, wavelength, focus, z)
}

/// On-axis MLA gain with half-wavelength spacing; `separation` is the gap
/// between the innermost antenna centers.
pub fn gain_mla_closed(
    n: usize,
    wavelength: f64,
    separation: f64,
    focus: f64,
    z: f64,
) -> Result<f64, GainError> {
    let spacing = wavelength / 2.0;
    let half_offset = (separation + (n as f64 - 1.0) * spacing) / 2.0;
    mla_closed_general(n, spacing, wavelength, half_offset, focus, z)
}

fn defocus_scale(wavelength: f64, focus: f64, z: f64) -> Result<Option<f64>, GainError> {
    if !(wavelength.is_finite() && wavelength > 0.0) {
        return Err(GainError::Domain(format!(
            "wavelength must be > 0, got {wavelength}"
        )));
    }
    let z_eff = effective_distance(focus, z)?;
    if z_eff.is_infinite() {
        return Ok(None);
    }
    Ok(Some((2.0 / (wavelength * z_eff)).sqrt()))
}

/// ULA closed form for arbitrary element spacing.
pub fn ula_closed_general(
    n: usize,
    spacing: f64,
    wavelength: f64,
    focus: f64,
    z: f64,
) -> Result<f64, GainError> {
    check_n(n)?;
    let Some(s) = defocus_scale(wavelength, focus, z)? else {
        return Ok(1.0);
    };
    let p = 0.5 * spacing * s;
    let a = p * p;
    let nf = n as f64;
    let y = fresnel(p)?.norm_sqr();
    let x = fresnel(nf * p)?.norm_sqr();
    Ok(y * x / (nf * a).powi(2))
}

/// MLA closed form for arbitrary element spacing and sub-array offset `±Δ̄`.
pub fn mla_closed_general(
    n: usize,
    spacing: f64,
    wavelength: f64,
    half_offset: f64,
    focus: f64,
    z: f64,
) -> Result<f64, GainError> {
    check_n(n)?;
    let Some(s) = defocus_scale(wavelength, focus, z)? else {
        return Ok(1.0);
    };
    let p = 0.5 * spacing * s;
    let a = p * p;
    let nf = n as f64;
    let shift = s * half_offset;
    let beta1 = nf * p + shift;
    let beta2 = nf * p - shift;
    let y = fresnel(p)?.norm_sqr();
    let sum = fresnel(beta1)?.as_complex() + fresnel(beta2)?.as_complex();
    Ok(y * sum.norm_sqr() / (2.0 * nf * a).powi(2))
}

fn check_n(n: usize) -> Result<(), GainError> {
    if n == 0 {
        Err(GainError::Domain("element count must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// Closed-form gain for an on-axis transmitter.
pub fn gain_closed(scenario: &Scenario) -> Result<f64, GainError> {
    if scenario.x_t != 0.0 {
        return Err(GainError::Unsupported {
            route: Route::Closed,
            reason: format!(
                "closed forms hold only on the axis x_t = 0, got x_t = {}",
                scenario.x_t
            ),
        });
    }
    let layout = &scenario.layout;
    let n = layout.elements_per_subarray();
    let lambda = scenario.wavelength();
    match layout.kind() {
        ArrayKind::Ula => {
            ula_closed_general(n, layout.spacing(), lambda, scenario.focus, scenario.z)
        }
        ArrayKind::Mla => mla_closed_general(
            n,
            layout.spacing(),
            lambda,
            layout.half_offset(),
            scenario.focus,
            scenario.z,
        ),
    }
}

/// Signed field amplitude on the focal plane, `sinc(Nδx_t/(λF))·cos(2πΔ̄x_t/(λF))`.
/// Its square is [`gain_transverse_closed`].
pub fn transverse_amplitude(
    n: usize,
    spacing: f64,
    wavelength: f64,
    half_offset: f64,
    focus: f64,
    x_t: f64,
) -> f64 {
    let scale = x_t / (wavelength * focus);
    sinc(n as f64 * spacing * scale) * (2.0 * PI * half_offset * scale).cos()
}

pub fn gain_transverse_closed(
    n: usize,
    spacing: f64,
    wavelength: f64,
    half_offset: f64,
    focus: f64,
    x_t: f64,
) -> f64 {
    transverse_amplitude(n, spacing, wavelength, half_offset, focus, x_t).powi(2)
}

/// `sinc²(Nδx_t/(λF))`, the envelope of the focal-plane gain.
pub fn upper_bound(n: usize, spacing: f64, wavelength: f64, focus: f64, x_t: f64) -> f64 {
    sinc(n as f64 * spacing * x_t / (wavelength * focus)).powi(2)
}
