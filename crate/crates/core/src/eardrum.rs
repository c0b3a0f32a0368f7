//! Terminating acoustic impedances: two-resonator eardrum model, cone-volume
//! compliance, their parallel combination, and a (nearly) rigid reference.
//!
//! Time convention is e^{+iωt}: compliances have negative imaginary
//! impedance, masses positive, and passive loads positive real part.

use crate::error::{Error, Result};
use crate::medium::MediumProperties;
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Two parallel damped resonators, each with an impedance level at
/// resonance (dB re 1 Pa·s/m³), a quality factor and a resonance frequency.
///
/// The second resonator's level is stored as a non-negative offset from the
/// first, which keeps the ordering L2 ≥ L1 by construction during fitting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoResonatorParams {
    /// Level of resonator 1 at resonance, dB re 1 Pa·s/m³.
    pub level_db: f64,
    /// Level offset of resonator 2 above resonator 1, dB.
    pub level_offset_db: f64,
    /// Quality factor of resonator 1.
    pub quality1: f64,
    /// Quality factor of resonator 2.
    pub quality2: f64,
    /// Resonance frequency of resonator 1, Hz.
    pub resonance1_hz: f64,
    /// Resonance frequency of resonator 2, Hz.
    pub resonance2_hz: f64,
}

impl TwoResonatorParams {
    pub fn new(
        level_db: f64,
        level_offset_db: f64,
        quality1: f64,
        quality2: f64,
        resonance1_hz: f64,
        resonance2_hz: f64,
    ) -> Result<Self> {
        if !(quality1.is_finite() && quality2.is_finite()) || quality1 <= 0.0 || quality2 <= 0.0 {
            return Err(Error::invalid(format!(
                "quality factors must be positive, got {quality1}, {quality2}"
            )));
        }
        if !(resonance1_hz.is_finite() && resonance2_hz.is_finite())
            || resonance1_hz <= 0.0
            || resonance2_hz <= 0.0
        {
            return Err(Error::invalid(format!(
                "resonance frequencies must be positive, got {resonance1_hz}, {resonance2_hz}"
            )));
        }
        Ok(Self {
            level_db,
            level_offset_db,
            quality1,
            quality2,
            resonance1_hz,
            resonance2_hz,
        })
    }

    /// Detuning v = f/f0 − f0/f of one resonator.
    pub fn detuning(frequency: f64, resonance_hz: f64) -> f64 {
        frequency / resonance_hz - resonance_hz / frequency
    }

    /// Impedance of the two-resonator model at `frequency`.
    ///
    /// Each resonator contributes the admittance
    /// `1 / (10^{L/20}·(i·v·Q + 1))`; the model impedance is the reciprocal
    /// of the admittance sum.
    pub fn impedance(&self, frequency: f64) -> Complex64 {
        let term = |level_db: f64, q: f64, f0: f64| {
            let v = Self::detuning(frequency, f0);
            10f64.powf(level_db / 20.0) * Complex64::new(1.0, v * q)
        };
        let y = term(self.level_db, self.quality1, self.resonance1_hz).inv()
            + term(
                self.level_db + self.level_offset_db,
                self.quality2,
                self.resonance2_hz,
            )
            .inv();
        y.inv()
    }
}

/// Lumped compliance of the innermost, cone-shaped part of the canal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeLoad {
    /// Enclosed volume in m³.
    pub volume: f64,
}

impl ConeLoad {
    pub fn new(volume: f64) -> Result<Self> {
        if !volume.is_finite() || volume <= 0.0 {
            return Err(Error::invalid(format!(
                "cone volume must be positive, got {volume}"
            )));
        }
        Ok(Self { volume })
    }

    /// A right circular cone: V = πr²h/3.
    pub fn right_circular_cone(radius: f64, height: f64) -> Result<Self> {
        Self::new(std::f64::consts::PI * radius * radius * height / 3.0)
    }

    /// Compliance impedance ρc²/(iωV); purely negative-imaginary.
    pub fn impedance(&self, medium: &MediumProperties, frequency: f64) -> Complex64 {
        let omega = TAU * frequency;
        let rho_c2 = medium.density * medium.speed_of_sound * medium.speed_of_sound;
        Complex64::new(0.0, -rho_c2 / (omega * self.volume))
    }
}

impl Default for ConeLoad {
    /// The 2.5 mm radius, 4 mm height cone.
    fn default() -> Self {
        Self::right_circular_cone(2.5e-3, 4e-3).unwrap()
    }
}

/// The (nearly) rigid termination impedance, Pa·s/m³.
pub const RIGID_TERMINATION: Complex64 = Complex64::new(8.4e22, -8.8e15);

/// Terminating impedance at the inner end of the modeled canal.
#[derive(Debug, Clone, PartialEq)]
pub enum EardrumLoad {
    /// Two-resonator eardrum in parallel with the cone compliance; the cone
    /// effectively stands in for the innermost part of the canal geometry.
    TwoResonatorWithCone {
        resonators: TwoResonatorParams,
        cone: ConeLoad,
    },
    /// A nearly rigid wall. Finite by design so the impedance boundary term
    /// in the solver stays well-defined.
    Rigid,
}

impl EardrumLoad {
    /// Terminating impedance Z_d at `frequency`.
    pub fn impedance(&self, medium: &MediumProperties, frequency: f64) -> Complex64 {
        match self {
            EardrumLoad::TwoResonatorWithCone { resonators, cone } => {
                let z_ed = resonators.impedance(frequency);
                let z_vol = cone.impedance(medium, frequency);
                z_ed * z_vol / (z_ed + z_vol)
            }
            EardrumLoad::Rigid => RIGID_TERMINATION,
        }
    }
}
