//! Beam metrics and design rules for the modular array: 3 dB beamwidth,
//! ripple nulls inside the beamfocusing region, the single-beam condition
//! and the antenna count it implies.
//!
//! The closed-form rules assume half-wavelength spacing, where the
//! focal-plane envelope is `sinc²(N·x_t/(2F))`.

use thiserror::Error;

use crate::geometry::{
    aperture_length, fraunhofer_distance, ArrayKind, ArrayLayout, CarrierSpec, GeometryError,
};

/// `sinc²(u) = 1/2` at `u ≈ 0.443`; full width `2·0.443·2F/N ≈ 1.77F/N`.
pub const HALF_POWER_WIDTH_FACTOR: f64 = 1.77;

/// Search limit for [`min_antennas`].
pub const MAX_ANTENNAS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("no element count below {limit} satisfies the single-beam condition")]
    Infeasible { limit: usize },
    #[error("design reports need a modular (two sub-array) layout")]
    NotModular,
    #[error("invalid input: {0}")]
    Domain(String),
}

/// Full 3 dB width of the focal-plane envelope, `1.77·F/N`.
pub fn beamwidth_3db(n: usize, focus: f64) -> f64 {
    HALF_POWER_WIDTH_FACTOR * focus / n as f64
}

/// Closed interval `[−BW/2, BW/2]` where the envelope is at least one half.
pub fn beamfocusing_region(n: usize, focus: f64) -> (f64, f64) {
    let half = 0.5 * beamwidth_3db(n, focus);
    (-half, half)
}

/// Distance between adjacent ripple nulls, `λF/(2Δ̄)`. `None` when `Δ̄ = 0`.
pub fn null_spacing(wavelength: f64, focus: f64, half_offset: f64) -> Option<f64> {
    (half_offset > 0.0).then(|| wavelength * focus / (2.0 * half_offset))
}

/// Zeros of `cos(2πΔ̄x/(λF))`: `±(λF/(4Δ̄))(2k+1)` for `k = 0..=k_max`,
/// ascending. Empty when `Δ̄ = 0` (a plain ULA has no ripple).
pub fn null_positions(wavelength: f64, focus: f64, half_offset: f64, k_max: usize) -> Vec<f64> {
    if half_offset <= 0.0 {
        return Vec::new();
    }
    let unit = wavelength * focus / (4.0 * half_offset);
    let positive = (0..=k_max).map(|k| unit * (2 * k + 1) as f64);
    let mut out: Vec<f64> = positive.clone().rev().map(|x| -x).collect();
    out.extend(positive);
    out
}

/// Ripple count estimate `⌊BW_3dB / (λF/(2Δ̄))⌋ + 1 = ⌊3.54·Δ̄/(λN)⌋ + 1`.
///
/// The focal distance cancels, so it is not a parameter.
pub fn null_count(n: usize, wavelength: f64, half_offset: f64) -> usize {
    let ratio = 2.0 * HALF_POWER_WIDTH_FACTOR * half_offset / (wavelength * n as f64);
    ratio.floor() as usize + 1
}

/// `N > 1.77·Δ̄/λ`: at most one ripple null pair inside the region.
pub fn single_beam_condition(n: usize, wavelength: f64, half_offset: f64) -> bool {
    n as f64 > HALF_POWER_WIDTH_FACTOR * half_offset / wavelength
}

/// Smallest per-sub-array element count `N` satisfying the single-beam
/// condition with `Δ̄ = (Δ + (N−1)δ)/2` taken at that same `N`.
pub fn min_antennas(
    separation: f64,
    spacing: f64,
    wavelength: f64,
) -> Result<usize, AnalysisError> {
    if !(separation.is_finite() && separation >= 0.0) {
        return Err(AnalysisError::Domain(format!(
            "separation must be >= 0, got {separation}"
        )));
    }
    if !(spacing > 0.0 && wavelength > 0.0) {
        return Err(AnalysisError::Domain(
            "spacing and wavelength must be > 0".into(),
        ));
    }
    (1..=MAX_ANTENNAS)
        .find(|&n| {
            let half_offset = (separation + (n as f64 - 1.0) * spacing) / 2.0;
            single_beam_condition(n, wavelength, half_offset)
        })
        .ok_or(AnalysisError::Infeasible {
            limit: MAX_ANTENNAS,
        })
}

/// Elements of a δ-spaced ULA whose extent covers the MLA span `Δ + 2Nδ`.
pub fn equivalent_ula_elements(layout: &ArrayLayout) -> usize {
    let n = layout.elements_per_subarray() as f64;
    let span = layout.separation() + 2.0 * n * layout.spacing();
    // absorb representation error in Δ/δ before rounding up
    (span / layout.spacing() - 1e-9).ceil() as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamMetrics {
    pub bw_3db: f64,
    pub null_spacing: Option<f64>,
    /// Ripple nulls inside the beamfocusing region, ascending.
    pub null_positions: Vec<f64>,
    pub null_count_in_region: usize,
    pub single_beam: bool,
}

pub fn beam_metrics(layout: &ArrayLayout, carrier: &CarrierSpec, focus: f64) -> BeamMetrics {
    let n = layout.elements_per_subarray();
    let lambda = carrier.wavelength();
    let half_offset = layout.half_offset();
    let bw = beamwidth_3db(n, focus);
    let null_positions = match null_spacing(lambda, focus, half_offset) {
        Some(spacing) => {
            // first null at spacing/2, then every `spacing`
            let inside = ((0.5 * bw - 0.5 * spacing) / spacing).floor();
            if inside < 0.0 {
                Vec::new()
            } else {
                null_positions(lambda, focus, half_offset, inside as usize)
            }
        }
        None => Vec::new(),
    };
    BeamMetrics {
        bw_3db: bw,
        null_spacing: null_spacing(lambda, focus, half_offset),
        null_positions,
        null_count_in_region: null_count(n, lambda, half_offset),
        single_beam: single_beam_condition(n, lambda, half_offset),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignReport {
    pub elements_per_subarray: usize,
    pub spacing: f64,
    pub separation: f64,
    pub half_offset: f64,
    pub wavelength: f64,
    pub focus: f64,
    pub aperture_length: f64,
    pub fraunhofer_distance: f64,
    pub metrics: BeamMetrics,
    pub min_elements_per_subarray: usize,
    /// `Δ/(Nλ)`.
    pub fill_ratio: f64,
    pub mla_elements: usize,
    pub equivalent_ula_elements: usize,
    /// `1 − mla_elements/equivalent_ula_elements`.
    pub savings: f64,
}

pub fn design_report(
    layout: &ArrayLayout,
    carrier: &CarrierSpec,
    focus: f64,
) -> Result<DesignReport, AnalysisError> {
    if layout.kind() != ArrayKind::Mla {
        return Err(AnalysisError::NotModular);
    }
    if !(focus.is_finite() && focus > 0.0) {
        return Err(AnalysisError::Domain(format!(
            "focus must be > 0, got {focus}"
        )));
    }
    let n = layout.elements_per_subarray();
    let lambda = carrier.wavelength();
    let mla_elements = layout.total_elements();
    let equivalent = equivalent_ula_elements(layout);
    Ok(DesignReport {
        elements_per_subarray: n,
        spacing: layout.spacing(),
        separation: layout.separation(),
        half_offset: layout.half_offset(),
        wavelength: lambda,
        focus,
        aperture_length: aperture_length(layout),
        fraunhofer_distance: fraunhofer_distance(layout, carrier),
        metrics: beam_metrics(layout, carrier, focus),
        min_elements_per_subarray: min_antennas(layout.separation(), layout.spacing(), lambda)?,
        fill_ratio: layout.separation() / (n as f64 * lambda),
        mla_elements,
        equivalent_ula_elements: equivalent,
        savings: 1.0 - mla_elements as f64 / equivalent as f64,
    })
}
