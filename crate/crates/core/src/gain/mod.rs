//! Normalized matched-filter gain of ULA and MLA receivers.
//!
//! Every route returns `|Σ ∫ MF·field|² / (total aperture area)²`, so the
//! gain is 1 when the transmitter sits on the focal point and lies in
//! `[0, 1]` otherwise. The routes differ in how the integral is obtained:
//!
//! | route               | method                                            | valid for        |
//! |---------------------|---------------------------------------------------|------------------|
//! | `closed`            | Fresnel-integral closed forms                     | on axis (`x_t=0`)|
//! | `fresnel_numeric`   | quadrature of the quadratic (Fresnel) phase       | anywhere         |
//! | `exact_numeric`     | quadrature of the exact spherical phase           | anywhere         |
//! | `transverse_closed` | `sinc·cos` product on the focal plane             | `z = F`          |
//! | `upper_bound`       | `sinc²` envelope on the focal plane               | `z = F`          |

mod closed;
mod field;
mod numeric;
mod sweep;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::fresnel::FresnelError;
use crate::geometry::{effective_distance, ArrayLayout, CarrierSpec, GeometryError, FOCUS_EPSILON};

pub use closed::{
    gain_closed, gain_mla_closed, gain_transverse_closed, gain_ula_closed, mla_closed_general,
    sinc, transverse_amplitude, ula_closed_general, upper_bound,
};
pub use field::{field_exact, field_fresnel, FieldSample};
pub use numeric::{gain_numeric, ApertureModel, NumericOptions, PhaseModel};
pub use sweep::{
    gain_curve, gain_map, Axis, CurveColumn, GainCurve, GainMap, Grid, SampleWarning, WarningKind,
};

/// Headroom above 1 allowed for roundoff.
pub const GAIN_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GainError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Fresnel(#[from] FresnelError),
    #[error("route {route} does not support this configuration: {reason}")]
    Unsupported { route: Route, reason: String },
    #[error("quadrature did not converge: estimate {estimate:.6e}, error bound {error_bound:.3e}")]
    NotConverged { estimate: f64, error_bound: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid input: {0}")]
    Domain(String),
}

/// How a gain value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Route {
    Closed,
    FresnelNumeric,
    ExactNumeric,
    TransverseClosed,
    UpperBound,
}

impl Route {
    pub const ALL: [Route; 5] = [
        Route::Closed,
        Route::FresnelNumeric,
        Route::ExactNumeric,
        Route::TransverseClosed,
        Route::UpperBound,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Closed => "closed",
            Route::FresnelNumeric => "fresnel_numeric",
            Route::ExactNumeric => "exact_numeric",
            Route::TransverseClosed => "transverse_closed",
            Route::UpperBound => "upper_bound",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Route {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Route::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Route::ALL.iter().map(Route::as_str).collect();
                format!("unknown route `{s}` (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainValue {
    pub value: f64,
    pub route: Route,
}

/// A receiver layout with its matched filter focused at `(0, 0, focus)`
/// and a transmitter at `(x_t, 0, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub layout: ArrayLayout,
    pub carrier: CarrierSpec,
    pub focus: f64,
    pub x_t: f64,
    pub z: f64,
}

impl Scenario {
    pub fn new(
        layout: ArrayLayout,
        carrier: CarrierSpec,
        focus: f64,
        x_t: f64,
        z: f64,
    ) -> Result<Self, GainError> {
        effective_distance(focus, z)?;
        if !x_t.is_finite() {
            return Err(GainError::Domain(format!("x_t must be finite, got {x_t}")));
        }
        Ok(Scenario {
            layout,
            carrier,
            focus,
            x_t,
            z,
        })
    }

    /// Same layout and focus, transmitter moved.
    pub fn with_transmitter(&self, x_t: f64, z: f64) -> Result<Self, GainError> {
        Scenario::new(self.layout, self.carrier, self.focus, x_t, z)
    }

    pub fn wavelength(&self) -> f64 {
        self.carrier.wavelength()
    }

    pub fn on_focal_plane(&self) -> bool {
        (self.z - self.focus).abs() < FOCUS_EPSILON
    }

    pub fn effective_distance(&self) -> f64 {
        // validated in the constructor
        effective_distance(self.focus, self.z).unwrap_or(f64::INFINITY)
    }
}

/// Evaluates one route at one scenario.
pub fn evaluate(
    scenario: &Scenario,
    route: Route,
    opts: &NumericOptions,
) -> Result<GainValue, GainError> {
    let value = match route {
        Route::Closed => gain_closed(scenario)?,
        Route::FresnelNumeric => gain_numeric(scenario, PhaseModel::Fresnel, opts)?,
        Route::ExactNumeric => gain_numeric(scenario, PhaseModel::Exact, opts)?,
        Route::TransverseClosed | Route::UpperBound => {
            if !scenario.on_focal_plane() {
                return Err(GainError::Unsupported {
                    route,
                    reason: format!(
                        "requires the transmitter on the focal plane z = {}, got z = {}",
                        scenario.focus, scenario.z
                    ),
                });
            }
            let layout = &scenario.layout;
            let n = layout.elements_per_subarray();
            let (spacing, lambda) = (layout.spacing(), scenario.wavelength());
            if route == Route::UpperBound {
                upper_bound(n, spacing, lambda, scenario.focus, scenario.x_t)
            } else {
                gain_transverse_closed(
                    n,
                    spacing,
                    lambda,
                    layout.half_offset(),
                    scenario.focus,
                    scenario.x_t,
                )
            }
        }
    };
    Ok(GainValue { value, route })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn route_names_round_trip() {
        for r in Route::ALL {
            assert_eq!(r.as_str().parse::<Route>().unwrap(), r);
        }
        assert!("exact".parse::<Route>().is_err());
    }

    #[test]
    fn scenario_rejects_bad_distances() {
        let layout = ArrayLayout::ula(4, 0.01).unwrap();
        let carrier = CarrierSpec::from_wavelength(0.02).unwrap();
        assert!(Scenario::new(layout, carrier, 0.0, 0.0, 1.0).is_err());
        assert!(Scenario::new(layout, carrier, 1.0, 0.0, -1.0).is_err());
        assert!(Scenario::new(layout, carrier, 1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn focal_plane_routes_need_z_equal_focus() {
        let layout = ArrayLayout::mla(16, 0.01, 1.0).unwrap();
        let carrier = CarrierSpec::from_wavelength(0.02).unwrap();
        let s = Scenario::new(layout, carrier, 30.0, 0.1, 31.0).unwrap();
        let opts = NumericOptions::for_wavelength(0.02);
        assert!(matches!(
            evaluate(&s, Route::UpperBound, &opts),
            Err(GainError::Unsupported { .. })
        ));
    }

    #[test]
    fn every_route_is_one_at_focus() {
        let layout = ArrayLayout::mla(16, 0.01, 1.0).unwrap();
        let carrier = CarrierSpec::from_wavelength(0.02).unwrap();
        let s = Scenario::new(layout, carrier, 30.0, 0.0, 30.0).unwrap();
        let opts = NumericOptions::for_wavelength(0.02);
        for r in Route::ALL {
            let g = evaluate(&s, r, &opts).unwrap();
            assert!((g.value - 1.0).abs() < 1e-9, "{r}: {}", g.value);
        }
    }
}
