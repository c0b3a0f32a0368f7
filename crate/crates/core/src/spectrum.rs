//! Complex impedance spectra and level/phase comparison utilities.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// What a spectrum represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    /// Pressure over volume velocity at the duct entrance.
    Input,
    /// Eardrum pressure over entrance volume velocity.
    Transfer,
}

/// A complex impedance sampled on a strictly increasing frequency grid,
/// in Pa·s/m³.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpedanceSpectrum {
    kind: SpectrumKind,
    frequencies: Vec<f64>,
    values: Vec<Complex64>,
}

impl ImpedanceSpectrum {
    pub fn new(kind: SpectrumKind, frequencies: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if frequencies.len() != values.len() {
            return Err(Error::invalid(format!(
                "spectrum has {} frequencies but {} values",
                frequencies.len(),
                values.len()
            )));
        }
        if frequencies.is_empty() {
            return Err(Error::invalid("spectrum must not be empty"));
        }
        for w in frequencies.windows(2) {
            if w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less) {
                return Err(Error::invalid(format!(
                    "frequencies must be strictly increasing, got {} after {}",
                    w[1], w[0]
                )));
            }
        }
        for (f, v) in frequencies.iter().zip(&values) {
            if !f.is_finite() || !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::invalid(format!("non-finite entry at {f} Hz: {v}")));
            }
        }
        Ok(Self {
            kind,
            frequencies,
            values,
        })
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.frequencies
            .iter()
            .copied()
            .zip(self.values.iter().copied())
    }

    /// Index of the sample at `frequency`, tolerating grid round-off.
    pub fn index_of(&self, frequency: f64) -> Option<usize> {
        let tol = 1e-6 * frequency.abs().max(1.0);
        let i = self.frequencies.partition_point(|&f| f < frequency - tol);
        if i < self.frequencies.len() && (self.frequencies[i] - frequency).abs() <= tol {
            Some(i)
        } else {
            None
        }
    }

    /// Value at `frequency`, if that frequency is on the grid.
    pub fn value_at(&self, frequency: f64) -> Option<Complex64> {
        self.index_of(frequency).map(|i| self.values[i])
    }

    /// Whether the grid spans at least `[f_lo, f_hi]`.
    pub fn covers(&self, f_lo: f64, f_hi: f64) -> bool {
        let tol = 1e-6;
        self.frequencies[0] <= f_lo + tol && *self.frequencies.last().unwrap() >= f_hi - tol
    }
}

/// Level (dB) and phase (rad) of a complex ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelPhaseDiff {
    /// 20·log10 of the magnitude ratio.
    pub level_db: f64,
    /// Principal argument of the ratio, in (−π, π].
    pub phase_rad: f64,
}

/// Level and phase of `model` relative to `data`.
pub fn level_phase_diff(model: Complex64, data: Complex64) -> Result<LevelPhaseDiff> {
    if model.norm() == 0.0 || data.norm() == 0.0 {
        return Err(Error::domain(
            "level/phase difference undefined for zero impedance",
        ));
    }
    if !model.is_finite() || !data.is_finite() {
        return Err(Error::domain("level/phase difference of non-finite value"));
    }
    let ratio = model / data;
    let mut phase = ratio.arg();
    if phase == -PI {
        phase = PI;
    }
    Ok(LevelPhaseDiff {
        level_db: 20.0 * ratio.norm().log10(),
        phase_rad: phase,
    })
}
