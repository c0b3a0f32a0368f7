//! Medium constants and frequency bookkeeping.

use crate::error::{Error, Result};
use std::f64::consts::TAU;

/// Acoustic properties of the medium inside the duct.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumProperties {
    /// Density in kg/m³.
    pub density: f64,
    /// Speed of sound in m/s.
    pub speed_of_sound: f64,
}

impl Default for MediumProperties {
    /// Dry air near 20 °C.
    fn default() -> Self {
        Self {
            density: 1.2,
            speed_of_sound: 343.0,
        }
    }
}

impl MediumProperties {
    pub fn new(density: f64, speed_of_sound: f64) -> Result<Self> {
        if !density.is_finite() || density <= 0.0 {
            return Err(Error::invalid(format!(
                "density must be positive, got {density}"
            )));
        }
        if !speed_of_sound.is_finite() || speed_of_sound <= 0.0 {
            return Err(Error::invalid(format!(
                "speed of sound must be positive, got {speed_of_sound}"
            )));
        }
        Ok(Self {
            density,
            speed_of_sound,
        })
    }

    /// Characteristic acoustic impedance ρc/S of a duct of cross-section `area`.
    pub fn duct_impedance(&self, area: f64) -> f64 {
        self.density * self.speed_of_sound / area
    }
}

/// One frequency with its derived wave quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyPoint {
    /// Frequency in Hz.
    pub frequency: f64,
    /// Angular frequency ω = 2πf in rad/s.
    pub angular_frequency: f64,
    /// Wavenumber k = ω/c in 1/m.
    pub wavenumber: f64,
    /// Wavelength λ = c/f in m.
    pub wavelength: f64,
}

impl FrequencyPoint {
    pub fn new(frequency: f64, medium: &MediumProperties) -> Result<Self> {
        if !frequency.is_finite() || frequency <= 0.0 {
            return Err(Error::invalid(format!(
                "frequency must be positive, got {frequency}"
            )));
        }
        let angular_frequency = TAU * frequency;
        Ok(Self {
            frequency,
            angular_frequency,
            wavenumber: angular_frequency / medium.speed_of_sound,
            wavelength: medium.speed_of_sound / frequency,
        })
    }
}

/// Evenly spaced inclusive frequency grid.
pub fn linear_grid(
    f_start: f64,
    f_end: f64,
    count: usize,
    medium: &MediumProperties,
) -> Result<Vec<FrequencyPoint>> {
    if f_start.partial_cmp(&f_end) != Some(std::cmp::Ordering::Less) {
        return Err(Error::invalid(format!(
            "frequency range must satisfy f_start < f_end, got [{f_start}, {f_end}]"
        )));
    }
    if count < 2 {
        return Err(Error::invalid(format!(
            "grid needs at least 2 points, got {count}"
        )));
    }
    let n = (count - 1) as f64;
    (0..count)
        .map(|i| {
            // stable lerp: hits exact grid values for round inputs
            let f = (f_start * (n - i as f64) + f_end * i as f64) / n;
            FrequencyPoint::new(f, medium)
        })
        .collect()
}

/// Raw frequencies of a linear grid, without derived quantities.
pub fn linear_grid_frequencies(f_start: f64, f_end: f64, count: usize) -> Result<Vec<f64>> {
    if f_start.partial_cmp(&f_end) != Some(std::cmp::Ordering::Less) {
        return Err(Error::invalid(format!(
            "frequency range must satisfy f_start < f_end, got [{f_start}, {f_end}]"
        )));
    }
    if count < 2 {
        return Err(Error::invalid(format!(
            "grid needs at least 2 points, got {count}"
        )));
    }
    let n = (count - 1) as f64;
    Ok((0..count)
        .map(|i| (f_start * (n - i as f64) + f_end * i as f64) / n)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn default_medium_is_dry_air() {
        let m = MediumProperties::default();
        assert_eq!(m.density, 1.2);
        assert_eq!(m.speed_of_sound, 343.0);
    }

    #[test]
    fn rejects_nonpositive_constants() {
        assert!(MediumProperties::new(0.0, 343.0).is_err());
        assert!(MediumProperties::new(1.2, -1.0).is_err());
        assert!(MediumProperties::new(f64::NAN, 343.0).is_err());
    }

    #[test]
    fn grid_of_200_points_over_audio_range_has_100_hz_step() {
        let m = MediumProperties::default();
        let grid = linear_grid(100.0, 20_000.0, 200, &m).unwrap();
        assert_eq!(grid.len(), 200);
        assert_eq!(grid[0].frequency, 100.0);
        assert_eq!(grid[199].frequency, 20_000.0);
        for w in grid.windows(2) {
            assert!((w[1].frequency - w[0].frequency - 100.0).abs() < 1e-9);
        }
    }

    #[test]
    fn two_point_grid_is_just_the_endpoints() {
        let m = MediumProperties::default();
        let grid = linear_grid(100.0, 200.0, 2, &m).unwrap();
        let freqs: Vec<f64> = grid.iter().map(|p| p.frequency).collect();
        assert_eq!(freqs, vec![100.0, 200.0]);
    }

    #[test]
    fn ten_point_grid_steps_by_100() {
        let m = MediumProperties::default();
        let grid = linear_grid(100.0, 1000.0, 10, &m).unwrap();
        assert_eq!(grid.len(), 10);
        for (i, p) in grid.iter().enumerate() {
            assert!((p.frequency - (100.0 + 100.0 * i as f64)).abs() < 1e-9);
        }
    }

    #[test]
    fn invalid_ranges_are_rejected() {
        let m = MediumProperties::default();
        assert!(linear_grid(200.0, 100.0, 10, &m).is_err());
        assert!(linear_grid(100.0, 100.0, 10, &m).is_err());
        assert!(linear_grid(100.0, 200.0, 1, &m).is_err());
    }

    proptest! {
        // k = 2πf/c and λ = c/f must agree to machine precision: kλ = 2π, λf = c.
        #[test]
        fn derived_quantities_are_consistent(f in 1.0f64..1e6) {
            let m = MediumProperties::default();
            let p = FrequencyPoint::new(f, &m).unwrap();
            prop_assert!((p.wavenumber * p.wavelength - std::f64::consts::TAU).abs() < 1e-12 * std::f64::consts::TAU);
            prop_assert!((p.wavelength * p.frequency - m.speed_of_sound).abs() < 1e-12 * m.speed_of_sound);
            prop_assert!((p.angular_frequency - std::f64::consts::TAU * f).abs() < 1e-12 * p.angular_frequency);
        }
    }
}
