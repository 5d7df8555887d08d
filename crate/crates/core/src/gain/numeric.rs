//! Matched-filter gain by direct quadrature over the receiving aperture.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::{GainError, Scenario};
use crate::geometry::element_centers;
use crate::quadrature::{
    gauss_legendre_8, integrate_adaptive, AdaptiveOptions, GaussLegendre, NotConverged,
};

/// Phase model of the matched filter and of the incoming wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseModel {
    /// Quadratic (Fresnel) phases `π(x² + y²)/(λd)`.
    Fresnel,
    /// Spherical phases `2π√(x² + y² + d²)/λ`, uniform amplitude.
    Exact,
}

/// How the aperture is partitioned before integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApertureModel {
    /// One `Nδ × δ` rectangle per sub-array.
    Continuous,
    /// One `δ × δ` square per antenna.
    PerElement,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericOptions {
    /// Error target relative to the integration length (the integrand has
    /// unit modulus, so this bounds the error relative to the largest
    /// possible integral).
    pub rel_tol: f64,
    /// Initial panel width along x.
    pub max_panel: f64,
    pub max_subintervals: usize,
    pub aperture: ApertureModel,
}

impl NumericOptions {
    /// Defaults: `1e-9` relative tolerance, `λ/8` panels, continuous aperture.
    pub fn for_wavelength(wavelength: f64) -> Self {
        NumericOptions {
            rel_tol: 1e-9,
            max_panel: wavelength / 8.0,
            max_subintervals: 1 << 20,
            aperture: ApertureModel::Continuous,
        }
    }
}

fn gauss_legendre_4() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(4))
}

fn not_converged(e: NotConverged, scale: f64) -> GainError {
    GainError::NotConverged {
        estimate: e.estimate.norm_sqr() / (scale * scale),
        error_bound: e.error_bound / scale,
    }
}

/// `(lo, hi)` x-intervals that make up the aperture.
fn x_intervals(scenario: &Scenario, model: ApertureModel) -> Vec<(f64, f64)> {
    let layout = &scenario.layout;
    match model {
        ApertureModel::Continuous => {
            let half = 0.5 * layout.subarray_width();
            layout
                .subarray_centers()
                .into_iter()
                .map(|c| (c - half, c + half))
                .collect()
        }
        ApertureModel::PerElement => {
            let positions = element_centers(layout);
            let half = 0.5 * positions.element_side;
            positions
                .centers
                .into_iter()
                .map(|c| (c - half, c + half))
                .collect()
        }
    }
}

/// `√(u² + d²) − d` without cancellation.
#[inline]
fn path_excess(u2: f64, d: f64) -> f64 {
    u2 / ((u2 + d * d).sqrt() + d)
}

/// Normalized gain by numerical integration of the matched-filter product.
///
/// The transmitter phase uses `(x − x_t)` so off-axis placements are
/// supported by both phase models. For [`PhaseModel::Fresnel`] the y-factor
/// separates and is integrated once.
pub fn gain_numeric(
    scenario: &Scenario,
    model: PhaseModel,
    opts: &NumericOptions,
) -> Result<f64, GainError> {
    let layout = &scenario.layout;
    let spacing = layout.spacing();
    let lambda = scenario.wavelength();
    let k = 2.0 * PI / lambda;
    let (focus, z, x_t) = (scenario.focus, scenario.z, scenario.x_t);
    let intervals = x_intervals(scenario, opts.aperture);
    let total_length: f64 = intervals.iter().map(|(a, b)| b - a).sum();
    let x_opts = |lo: f64, hi: f64| AdaptiveOptions {
        abs_tol: opts.rel_tol * (hi - lo),
        max_panel: opts.max_panel,
        max_subintervals: opts.max_subintervals,
    };
    let y_opts = AdaptiveOptions {
        abs_tol: opts.rel_tol * spacing,
        max_panel: spacing,
        max_subintervals: opts.max_subintervals,
    };
    let half_y = 0.5 * spacing;
    let area = total_length * spacing;

    let integral = match model {
        PhaseModel::Fresnel => {
            let curvature = 1.0 / focus - 1.0 / z;
            let y = integrate_adaptive(
                gauss_legendre_8(),
                |y| Complex64::from_polar(1.0, 0.5 * k * y * y * curvature),
                -half_y,
                half_y,
                &y_opts,
            )
            .map_err(|e| not_converged(e, spacing))?;
            let mut x_sum = Complex64::new(0.0, 0.0);
            for &(lo, hi) in &intervals {
                let est = integrate_adaptive(
                    gauss_legendre_8(),
                    |x| {
                        let d = x - x_t;
                        Complex64::from_polar(1.0, 0.5 * k * (x * x / focus - d * d / z))
                    },
                    lo,
                    hi,
                    &x_opts(lo, hi),
                )
                .map_err(|e| not_converged(e, total_length))?;
                x_sum += est.value;
            }
            x_sum * y.value
        }
        PhaseModel::Exact => {
            let mut sum = Complex64::new(0.0, 0.0);
            for &(lo, hi) in &intervals {
                let mut inner_failure: Option<NotConverged> = None;
                let est = integrate_adaptive(
                    gauss_legendre_8(),
                    |x| {
                        let d = x - x_t;
                        let (x2, d2) = (x * x, d * d);
                        let column = integrate_adaptive(
                            gauss_legendre_4(),
                            |y| {
                                let y2 = y * y;
                                let phase =
                                    k * (path_excess(x2 + y2, focus) - path_excess(d2 + y2, z));
                                Complex64::from_polar(1.0, phase)
                            },
                            -half_y,
                            half_y,
                            &y_opts,
                        );
                        match column {
                            Ok(c) => c.value,
                            Err(e) => {
                                inner_failure.get_or_insert(e);
                                e.estimate
                            }
                        }
                    },
                    lo,
                    hi,
                    &x_opts(lo, hi),
                )
                .map_err(|e| not_converged(e, area))?;
                if let Some(e) = inner_failure {
                    return Err(not_converged(e, spacing));
                }
                sum += est.value;
            }
            sum
        }
    };
    Ok(integral.norm_sqr() / (area * area))
}
