//! Fourier parameterization of the ear-canal area function.
//!
//! The cross-section along the canal axis is a truncated Fourier series
//! over `[0, ℓ]`:
//!
//! ```text
//! S(x) = S0 + Σ_{m=1..M} c_m·cos(mπx/ℓ) + s_m·sin(mπx/ℓ)
//! ```
//!
//! Negative areas are representable on purpose; positivity is enforced by
//! penalty terms in the fitting cost, not by construction.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Sample count used by penalty and reporting evaluations. Resolves all
/// oscillations of the supported harmonic orders (M ≤ 8) comfortably.
pub const DEFAULT_AREA_SAMPLES: usize = 101;

/// Parameters of the area function.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaFunctionParams {
    /// Mean cross-section S0 in m².
    pub mean_area: f64,
    /// Cosine coefficients c_1..c_M in m².
    pub cosine_coeffs: Vec<f64>,
    /// Sine coefficients s_1..s_M in m².
    pub sine_coeffs: Vec<f64>,
    /// Canal length ℓ in m.
    pub length: f64,
}

impl AreaFunctionParams {
    pub fn new(
        mean_area: f64,
        cosine_coeffs: Vec<f64>,
        sine_coeffs: Vec<f64>,
        length: f64,
    ) -> Result<Self> {
        if cosine_coeffs.is_empty() || cosine_coeffs.len() != sine_coeffs.len() {
            return Err(Error::invalid(format!(
                "coefficient lists must be non-empty and equally long, got {} and {}",
                cosine_coeffs.len(),
                sine_coeffs.len()
            )));
        }
        if !length.is_finite() || length <= 0.0 {
            return Err(Error::invalid(format!(
                "length must be positive, got {length}"
            )));
        }
        if !mean_area.is_finite()
            || cosine_coeffs
                .iter()
                .chain(&sine_coeffs)
                .any(|v| !v.is_finite())
        {
            return Err(Error::invalid("area parameters must be finite"));
        }
        Ok(Self {
            mean_area,
            cosine_coeffs,
            sine_coeffs,
            length,
        })
    }

    /// A uniform duct of cross-section `area` and length `length`.
    pub fn uniform(area: f64, length: f64) -> Result<Self> {
        Self::new(area, vec![0.0], vec![0.0], length)
    }

    /// Number of harmonics M.
    pub fn order(&self) -> usize {
        self.cosine_coeffs.len()
    }

    /// S(x) for `x` inside `[0, ℓ]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..=self.length).contains(&x) {
            return Err(Error::invalid(format!(
                "x = {x} outside the canal [0, {}]",
                self.length
            )));
        }
        Ok(self.eval_raw(x))
    }

    pub(crate) fn eval_raw(&self, x: f64) -> f64 {
        // harmonics by angle addition: one sin/cos pair per evaluation
        let t = PI * x / self.length;
        let (sin_t, cos_t) = t.sin_cos();
        let mut cos_m = cos_t;
        let mut sin_m = sin_t;
        let mut s = self.mean_area;
        for (m, (&c, &sn)) in self.cosine_coeffs.iter().zip(&self.sine_coeffs).enumerate() {
            if m > 0 {
                let next_cos = cos_m * cos_t - sin_m * sin_t;
                let next_sin = sin_m * cos_t + cos_m * sin_t;
                cos_m = next_cos;
                sin_m = next_sin;
            }
            s += c * cos_m + sn * sin_m;
        }
        s
    }

    /// Uniform samples of S on `[0, ℓ]` including both endpoints.
    pub fn sample(&self, n_samples: usize) -> Result<Vec<(f64, f64)>> {
        if n_samples < 2 {
            return Err(Error::invalid(format!(
                "need at least 2 samples, got {n_samples}"
            )));
        }
        let n = (n_samples - 1) as f64;
        Ok((0..n_samples)
            .map(|i| {
                let x = self.length * (i as f64 / n);
                (x, self.eval_raw(x))
            })
            .collect())
    }

    /// Discrete minimum of S over a uniform grid; ties break toward the
    /// smallest x for reproducibility.
    pub fn min_on_grid(&self, n_samples: usize) -> Result<(f64, f64)> {
        let samples = self.sample(n_samples)?;
        let mut best = samples[0];
        for &(x, s) in &samples[1..] {
            if s < best.1 {
                best = (x, s);
            }
        }
        Ok(best)
    }
}
