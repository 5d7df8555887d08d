use std::f64::consts::PI;

use num_complex::Complex64;

use super::GainError;

/// Scalar field at `(x, y, 0)` radiated by an isotropic source at `(0, 0, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub e: Complex64,
    pub x: f64,
    pub y: f64,
    pub scale: f64,
}

fn check(z: f64, wavelength: f64) -> Result<(), GainError> {
    if !(z.is_finite() && z > 0.0) {
        return Err(GainError::Domain(format!("z must be > 0, got {z}")));
    }
    if !(wavelength.is_finite() && wavelength > 0.0) {
        return Err(GainError::Domain(format!(
            "wavelength must be > 0, got {wavelength}"
        )));
    }
    Ok(())
}

/// `E₀/√(4π) · √(z(x²+z²))/r^{5/4} · e^{−i2π√r/λ}` with `r = x²+y²+z²`.
pub fn field_exact(
    x: f64,
    y: f64,
    z: f64,
    wavelength: f64,
    scale: f64,
) -> Result<FieldSample, GainError> {
    check(z, wavelength)?;
    let r = x * x + y * y + z * z;
    let amplitude = scale / (4.0 * PI).sqrt() * (z * (x * x + z * z)).sqrt() / r.powf(1.25);
    let phase = -2.0 * PI / wavelength * r.sqrt();
    Ok(FieldSample {
        e: Complex64::from_polar(amplitude, phase),
        x,
        y,
        scale,
    })
}

/// Fresnel approximation: amplitude `E₀/(√(4π)·z)`, phase
/// `−2π/λ·(z + x²/2z + y²/2z)`.
pub fn field_fresnel(
    x: f64,
    y: f64,
    z: f64,
    wavelength: f64,
    scale: f64,
) -> Result<FieldSample, GainError> {
    check(z, wavelength)?;
    let amplitude = scale / ((4.0 * PI).sqrt() * z);
    let phase = -2.0 * PI / wavelength * (z + (x * x + y * y) / (2.0 * z));
    Ok(FieldSample {
        e: Complex64::from_polar(amplitude, phase),
        x,
        y,
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wrap(phase: f64) -> f64 {
        (phase + PI).rem_euclid(2.0 * PI) - PI
    }

    #[test]
    fn boresight_values() {
        let z = 10.0;
        let e = field_exact(0.0, 0.0, z, 0.02, 1.0).unwrap();
        let f = field_fresnel(0.0, 0.0, z, 0.02, 1.0).unwrap();
        // √(z·z²)/(z²)^{5/4} = 1/z on boresight
        let amp = 1.0 / ((4.0 * PI).sqrt() * z);
        assert!((e.e.norm() - amp).abs() < 1e-15);
        assert!((f.e.norm() - amp).abs() < 1e-15);
        assert!((wrap(e.e.arg() - f.e.arg())).abs() < 1e-9);
        assert!((wrap(e.e.arg() + 2.0 * PI * z / 0.02)).abs() < 1e-9);
    }

    #[test]
    fn off_axis_direct_substitution() {
        let (x, z) = (0.1f64, 10.0f64);
        let e = field_exact(x, 0.0, z, 0.02, 1.0).unwrap();
        let r = x * x + z * z;
        let amp = (z * r).sqrt() / ((4.0 * PI).sqrt() * r.powf(1.25));
        assert!((e.e.norm() - amp).abs() < 1e-15);
        let f = field_fresnel(x, 0.0, z, 0.02, 1.0).unwrap();
        assert!((f.e.norm() - 1.0 / ((4.0 * PI).sqrt() * 10.0)).abs() < 1e-16);
        assert!((e.e.norm() / f.e.norm() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn fresnel_phase_error_within_next_taylor_term() {
        let (x, z, lambda) = (0.25f64, 30.0f64, 0.02);
        let e = field_exact(x, 0.0, z, lambda, 1.0).unwrap();
        let f = field_fresnel(x, 0.0, z, lambda, 1.0).unwrap();
        let bound = 2.0 * PI * x.powi(4) / (8.0 * z.powi(3) * lambda);
        assert!(wrap(e.e.arg() - f.e.arg()).abs() <= bound * (1.0 + 1e-6));
    }

    #[test]
    fn linear_in_scale() {
        let a = field_exact(0.3, 0.1, 5.0, 0.02, 1.0).unwrap();
        let b = field_exact(0.3, 0.1, 5.0, 0.02, 2.0).unwrap();
        assert_eq!(b.e.norm(), 2.0 * a.e.norm());
        assert!(field_exact(0.0, 0.0, 0.0, 0.02, 1.0).is_err());
        assert!(field_fresnel(0.0, 0.0, -1.0, 0.02, 1.0).is_err());
    }
}
