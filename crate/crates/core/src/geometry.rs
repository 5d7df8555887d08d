//! Array layouts, element positions and the distance quantities shared by
//! every gain route.
//!
//! Arrays lie on the x-axis in the `z = 0` plane and radiate towards `+z`.
//! All lengths are in meters.

use thiserror::Error;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// `|F - z|` below this is treated as perfect focus (`z_eff = +inf`).
pub const FOCUS_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },
}

impl GeometryError {
    fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        GeometryError::Invalid {
            field,
            reason: reason.into(),
        }
    }
}

/// Carrier wavelength, optionally tagged with the frequency it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarrierSpec {
    frequency: Option<f64>,
    wavelength: f64,
}

impl CarrierSpec {
    pub fn from_wavelength(wavelength: f64) -> Result<Self, GeometryError> {
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(GeometryError::invalid(
                "wavelength",
                format!("must be finite and > 0, got {wavelength}"),
            ));
        }
        Ok(CarrierSpec {
            frequency: None,
            wavelength,
        })
    }

    pub fn from_frequency(frequency: f64) -> Result<Self, GeometryError> {
        if !(frequency.is_finite() && frequency > 0.0) {
            return Err(GeometryError::invalid(
                "frequency",
                format!("must be finite and > 0, got {frequency}"),
            ));
        }
        Ok(CarrierSpec {
            frequency: Some(frequency),
            wavelength: SPEED_OF_LIGHT / frequency,
        })
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn frequency(&self) -> Option<f64> {
        self.frequency
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArrayKind {
    /// Single uniform linear array.
    Ula,
    /// Two identical ULAs on a common line, separated by a gap.
    Mla,
}

impl ArrayKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ArrayKind::Ula => "ula",
            ArrayKind::Mla => "mla",
        }
    }
}

/// Validated ULA or two-sub-array MLA geometry.
///
/// For an MLA, `separation` is the distance between the centers of the two
/// innermost antennas (one from each sub-array).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayLayout {
    kind: ArrayKind,
    elements_per_subarray: usize,
    spacing: f64,
    separation: f64,
}

impl ArrayLayout {
    pub fn ula(elements: usize, spacing: f64) -> Result<Self, GeometryError> {
        Self::validate_common(elements, spacing)?;
        Ok(ArrayLayout {
            kind: ArrayKind::Ula,
            elements_per_subarray: elements,
            spacing,
            separation: 0.0,
        })
    }

    pub fn mla(
        elements_per_subarray: usize,
        spacing: f64,
        separation: f64,
    ) -> Result<Self, GeometryError> {
        Self::validate_common(elements_per_subarray, spacing)?;
        if !(separation.is_finite() && separation >= 0.0) {
            return Err(GeometryError::invalid(
                "separation",
                format!("must be finite and >= 0, got {separation}"),
            ));
        }
        Ok(ArrayLayout {
            kind: ArrayKind::Mla,
            elements_per_subarray,
            spacing,
            separation,
        })
    }

    fn validate_common(elements: usize, spacing: f64) -> Result<(), GeometryError> {
        if elements == 0 {
            return Err(GeometryError::invalid("elements", "must be >= 1"));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(GeometryError::invalid(
                "spacing",
                format!("must be finite and > 0, got {spacing}"),
            ));
        }
        Ok(())
    }

    pub fn kind(&self) -> ArrayKind {
        self.kind
    }

    pub fn elements_per_subarray(&self) -> usize {
        self.elements_per_subarray
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Gap between the innermost centers; zero for a ULA.
    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn subarray_count(&self) -> usize {
        match self.kind {
            ArrayKind::Ula => 1,
            ArrayKind::Mla => 2,
        }
    }

    pub fn total_elements(&self) -> usize {
        self.subarray_count() * self.elements_per_subarray
    }

    /// Offset of each sub-array center from the origin (`Δ̄`). Zero for a ULA.
    pub fn half_offset(&self) -> f64 {
        match self.kind {
            ArrayKind::Ula => 0.0,
            ArrayKind::Mla => {
                (self.separation + (self.elements_per_subarray as f64 - 1.0) * self.spacing) / 2.0
            }
        }
    }

    /// Sub-array centers, ascending.
    pub fn subarray_centers(&self) -> Vec<f64> {
        match self.kind {
            ArrayKind::Ula => vec![0.0],
            ArrayKind::Mla => {
                let h = self.half_offset();
                vec![-h, h]
            }
        }
    }

    /// Width of one sub-array's continuous aperture, `N·δ`.
    pub fn subarray_width(&self) -> f64 {
        self.elements_per_subarray as f64 * self.spacing
    }

    /// Total physical aperture area, `elements · δ²`.
    pub fn total_area(&self) -> f64 {
        self.total_elements() as f64 * self.spacing * self.spacing
    }
}

/// Element centers plus the square aperture each element covers.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementPositions {
    pub centers: Vec<f64>,
    /// Side of each element's square aperture.
    pub element_side: f64,
}

impl ElementPositions {
    pub fn element_area(&self) -> f64 {
        self.element_side * self.element_side
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }
}

/// Antenna centers `(n - (N+1)/2)·δ`, shifted by `∓Δ̄` for the two MLA
/// sub-arrays.
pub fn element_centers(layout: &ArrayLayout) -> ElementPositions {
    let n = layout.elements_per_subarray;
    let spacing = layout.spacing;
    let local = (1..=n).map(|i| (i as f64 - (n as f64 + 1.0) / 2.0) * spacing);
    let centers = layout
        .subarray_centers()
        .into_iter()
        .flat_map(|c| local.clone().map(move |x| x + c))
        .collect();
    ElementPositions {
        centers,
        element_side: spacing,
    }
}

/// Diagonal of the array's bounding rectangle.
pub fn aperture_length(layout: &ArrayLayout) -> f64 {
    let n = layout.elements_per_subarray as f64;
    let spacing = layout.spacing;
    let extent = match layout.kind {
        ArrayKind::Ula => n * spacing,
        ArrayKind::Mla => layout.separation + (2.0 * n - 1.0) * spacing,
    };
    extent.hypot(spacing)
}

/// Fraunhofer array distance `2·D²/λ`.
pub fn fraunhofer_distance(layout: &ArrayLayout, carrier: &CarrierSpec) -> f64 {
    let d = aperture_length(layout);
    2.0 * d * d / carrier.wavelength()
}

/// Effective defocus distance `F·z/|F − z|`; `+inf` at perfect focus.
pub fn effective_distance(focus: f64, z: f64) -> Result<f64, GeometryError> {
    if !(focus.is_finite() && focus > 0.0) {
        return Err(GeometryError::invalid(
            "focus",
            format!("must be finite and > 0, got {focus}"),
        ));
    }
    if !(z.is_finite() && z > 0.0) {
        return Err(GeometryError::invalid(
            "z",
            format!("must be finite and > 0, got {z}"),
        ));
    }
    let gap = (focus - z).abs();
    if gap < FOCUS_EPSILON {
        Ok(f64::INFINITY)
    } else {
        Ok(focus * z / gap)
    }
}

/// Matched-filter focal distance, transmitter depth and transverse offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocusGeometry {
    pub focus: f64,
    pub z: f64,
    pub x_t: f64,
    pub effective_distance: f64,
    pub half_offset: f64,
}

impl FocusGeometry {
    pub fn new(layout: &ArrayLayout, focus: f64, z: f64, x_t: f64) -> Result<Self, GeometryError> {
        if !x_t.is_finite() {
            return Err(GeometryError::invalid("x_t", "must be finite"));
        }
        Ok(FocusGeometry {
            focus,
            z,
            x_t,
            effective_distance: effective_distance(focus, z)?,
            half_offset: layout.half_offset(),
        })
    }

    pub fn at_focus(&self) -> bool {
        self.effective_distance.is_infinite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_element_ula_is_symmetric() {
        let p = element_centers(&ArrayLayout::ula(2, 0.01).unwrap());
        assert_eq!(p.centers, vec![-0.005, 0.005]);
    }

    #[test]
    fn single_element_mla_sits_at_half_gap() {
        let p = element_centers(&ArrayLayout::mla(1, 0.01, 1.0).unwrap());
        assert_eq!(p.centers, vec![-0.5, 0.5]);
    }

    #[test]
    fn mla_inner_and_outer_centers() {
        let layout = ArrayLayout::mla(16, 0.01, 1.0).unwrap();
        let p = element_centers(&layout);
        assert_eq!(p.len(), 32);
        assert!((p.centers[15] + 0.5).abs() < 1e-12);
        assert!((p.centers[16] - 0.5).abs() < 1e-12);
        assert!((p.centers[0] + 0.65).abs() < 1e-12);
        assert!((p.centers[31] - 0.65).abs() < 1e-12);
        assert!((p.centers[16] - p.centers[15] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn validation_names_the_field() {
        let err = ArrayLayout::ula(0, 0.01).unwrap_err();
        assert!(err.to_string().contains("elements"));
        let err = ArrayLayout::ula(4, -0.01).unwrap_err();
        assert!(err.to_string().contains("spacing"));
        let err = ArrayLayout::mla(4, 0.01, -1.0).unwrap_err();
        assert!(err.to_string().contains("separation"));
        assert!(CarrierSpec::from_wavelength(0.0).is_err());
        assert!(CarrierSpec::from_frequency(f64::NAN).is_err());
    }

    #[test]
    fn aperture_examples() {
        let ula = ArrayLayout::ula(50, 0.01).unwrap();
        assert!((aperture_length(&ula) - 0.500_099_990_001_999_6).abs() < 1e-12);
        let mla = ArrayLayout::mla(64, 0.01, 0.72).unwrap();
        let expected = (1.99f64 * 1.99 + 1e-4).sqrt();
        assert!((aperture_length(&mla) - expected).abs() < 1e-12);
        assert!((aperture_length(&mla) - 1.990025).abs() < 1e-6);
    }

    #[test]
    fn zero_gap_mla_is_one_spacing_shorter_than_the_2n_ula() {
        let mla = ArrayLayout::mla(8, 0.01, 0.0).unwrap();
        let ula = ArrayLayout::ula(16, 0.01).unwrap();
        assert!(aperture_length(&mla) < aperture_length(&ula));
        let touching = ArrayLayout::mla(8, 0.01, 0.01).unwrap();
        assert!((aperture_length(&touching) - aperture_length(&ula)).abs() < 1e-15);
    }

    #[test]
    fn fraunhofer_examples() {
        let carrier = CarrierSpec::from_wavelength(0.02).unwrap();
        let ula = ArrayLayout::ula(50, 0.01).unwrap();
        assert!((fraunhofer_distance(&ula, &carrier) - 25.01).abs() < 1e-9);
        let mla = ArrayLayout::mla(64, 0.01, 0.72).unwrap();
        let d = fraunhofer_distance(&mla, &carrier);
        assert!((d - 2.0 * (1.99f64 * 1.99 + 1e-4) / 0.02).abs() < 1e-9);
        assert!((d - 396.0).abs() < 0.1);
        let doubled = CarrierSpec::from_wavelength(0.04).unwrap();
        assert!((fraunhofer_distance(&mla, &doubled) * 2.0 - d).abs() < 1e-9);
    }

    #[test]
    fn frequency_to_wavelength() {
        let c = CarrierSpec::from_frequency(15e9).unwrap();
        assert!((c.wavelength() * 15e9 / SPEED_OF_LIGHT - 1.0).abs() < 1e-12);
        assert_eq!(c.frequency(), Some(15e9));
    }

    #[test]
    fn effective_distance_examples() {
        assert_eq!(effective_distance(30.0, 60.0).unwrap(), 60.0);
        assert!(effective_distance(30.0, 30.0).unwrap().is_infinite());
        assert_eq!(effective_distance(30.0, 20.0).unwrap(), 60.0);
        assert!(effective_distance(0.0, 20.0).is_err());
        assert!(effective_distance(30.0, -1.0).is_err());
    }

    #[test]
    fn half_offset_matches_definition() {
        let l = ArrayLayout::mla(64, 0.01, 0.72).unwrap();
        assert!((l.half_offset() - 0.675).abs() < 1e-12);
        let f = FocusGeometry::new(&l, 30.0, 30.0, 0.0).unwrap();
        assert!(f.at_focus());
        assert_eq!(ArrayLayout::ula(5, 0.01).unwrap().half_offset(), 0.0);
    }
}
