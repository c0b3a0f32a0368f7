//! The flat parameter vector searched by the optimizer, and its bounds.

use crate::eardrum::{ConeLoad, TwoResonatorParams};
use crate::error::{Error, Result};
use crate::geometry::AreaFunctionParams;
use crate::neldermead::Bounds;

/// All fitted parameters in one flat vector:
/// `[S0, c_1..c_M, s_1..s_M, ℓ, L1, dL, Q1, Q2, f1, f2, V]`
/// for a total dimension of 2M + 9.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterVector {
    values: Vec<f64>,
}

impl ParameterVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 11 || !(values.len() - 9).is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "parameter vector must have dimension 2M + 9 with M >= 1, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("parameter vector must be finite"));
        }
        Ok(Self { values })
    }

    pub fn from_parts(
        area: &AreaFunctionParams,
        resonators: &TwoResonatorParams,
        cone: &ConeLoad,
    ) -> Self {
        let mut values = Vec::with_capacity(2 * area.order() + 9);
        values.push(area.mean_area);
        values.extend_from_slice(&area.cosine_coeffs);
        values.extend_from_slice(&area.sine_coeffs);
        values.push(area.length);
        values.push(resonators.level_db);
        values.push(resonators.level_offset_db);
        values.push(resonators.quality1);
        values.push(resonators.quality2);
        values.push(resonators.resonance1_hz);
        values.push(resonators.resonance2_hz);
        values.push(cone.volume);
        Self { values }
    }

    pub fn dimension(&self) -> usize {
        self.values.len()
    }

    /// Number of harmonics M in the area function.
    pub fn fourier_order(&self) -> usize {
        (self.values.len() - 9) / 2
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    pub fn mean_area(&self) -> f64 {
        self.values[0]
    }

    pub fn length(&self) -> f64 {
        self.values[2 * self.fourier_order() + 1]
    }

    pub fn set_length(&mut self, length: f64) {
        let i = 2 * self.fourier_order() + 1;
        self.values[i] = length;
    }

    pub fn area(&self) -> Result<AreaFunctionParams> {
        let m = self.fourier_order();
        AreaFunctionParams::new(
            self.values[0],
            self.values[1..=m].to_vec(),
            self.values[m + 1..=2 * m].to_vec(),
            self.values[2 * m + 1],
        )
    }

    pub fn resonators(&self) -> Result<TwoResonatorParams> {
        let b = 2 * self.fourier_order() + 2;
        TwoResonatorParams::new(
            self.values[b],
            self.values[b + 1],
            self.values[b + 2],
            self.values[b + 3],
            self.values[b + 4],
            self.values[b + 5],
        )
    }

    pub fn cone(&self) -> Result<ConeLoad> {
        ConeLoad::new(self.values[2 * self.fourier_order() + 8])
    }
}

/// Lower/upper bounds plus the basic (default initial) estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct FitBounds {
    pub lower: ParameterVector,
    pub upper: ParameterVector,
    pub basic: ParameterVector,
}

impl FitBounds {
    /// The standard search box for `order` harmonics:
    ///
    /// | parameter | lower     | upper     | basic          |
    /// |-----------|-----------|-----------|----------------|
    /// | S0 [m²]   | 1e-5      | 2e-4      | 6e-5           |
    /// | c_m, s_m  | −2^{2−m}·1e-5 | +2^{2−m}·1e-5 | c_1 = 2e-6, rest 0 |
    /// | ℓ [m]     | 15e-3     | 45e-3     | 30e-3          |
    /// | L1 [dB]   | 50        | 200       | 161            |
    /// | dL [dB]   | 0         | 40        | 20             |
    /// | Q1, Q2    | 0.3       | 10        | 1.2            |
    /// | f1 [Hz]   | 500       | 2500      | 900            |
    /// | f2 [Hz]   | 2500      | 6000      | 4000           |
    /// | V [m³]    | 1.3e-8    | 5.23e-8   | 2.62e-8        |
    pub fn default_for_order(order: usize) -> Result<Self> {
        if !(1..=8).contains(&order) {
            return Err(Error::invalid(format!(
                "harmonic order must be in 1..=8, got {order}"
            )));
        }
        let coeff_bound = |m: usize| 2f64.powi(2 - m as i32) * 1e-5;

        let mut lower = vec![1e-5];
        let mut upper = vec![2e-4];
        let mut basic = vec![6e-5];
        for part in 0..2 {
            for m in 1..=order {
                lower.push(-coeff_bound(m));
                upper.push(coeff_bound(m));
                basic.push(if part == 0 && m == 1 { 2e-6 } else { 0.0 });
            }
        }
        lower.push(15e-3);
        upper.push(45e-3);
        basic.push(30e-3);

        let drum = [
            // (lower, upper, basic)
            (50.0, 200.0, 161.0),       // L1
            (0.0, 40.0, 20.0),          // dL
            (0.3, 10.0, 1.2),           // Q1
            (0.3, 10.0, 1.2),           // Q2
            (500.0, 2500.0, 900.0),     // f1
            (2500.0, 6000.0, 4000.0),   // f2
            (1.3e-8, 5.23e-8, 2.62e-8), // V
        ];
        for (lo, hi, b) in drum {
            lower.push(lo);
            upper.push(hi);
            basic.push(b);
        }

        let bounds = Self {
            lower: ParameterVector::new(lower)?,
            upper: ParameterVector::new(upper)?,
            basic: ParameterVector::new(basic)?,
        };
        bounds.validate()?;
        Ok(bounds)
    }

    /// Pin the length window around a pre-estimated canal length:
    /// `ℓ ∈ [ℓ_est − 3 mm, ℓ_est + 1 mm]`, with the upper side tighter
    /// because the cone already accounts for the innermost part of the
    /// canal. The basic length becomes the estimate itself.
    pub fn with_length_window(mut self, estimated_length: f64) -> Self {
        self.lower.set_length(estimated_length - 3e-3);
        self.upper.set_length(estimated_length + 1e-3);
        self.basic.set_length(estimated_length);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.lower.dimension();
        if self.upper.dimension() != d || self.basic.dimension() != d {
            return Err(Error::invalid("bound vectors must share one dimension"));
        }
        for i in 0..d {
            let (lo, hi, b) = (
                self.lower.as_slice()[i],
                self.upper.as_slice()[i],
                self.basic.as_slice()[i],
            );
            if !(lo <= b && b <= hi) {
                return Err(Error::invalid(format!(
                    "bound {i} must satisfy lower <= basic <= upper, got {lo} <= {b} <= {hi}"
                )));
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.lower.dimension()
    }

    pub fn fourier_order(&self) -> usize {
        self.lower.fourier_order()
    }

    pub fn to_search_bounds(&self) -> Result<Bounds> {
        Bounds::new(
            self.lower.as_slice().to_vec(),
            self.upper.as_slice().to_vec(),
        )
    }

    pub fn clamp(&self, values: &mut [f64]) {
        for (i, v) in values.iter_mut().enumerate() {
            *v = v.clamp(self.lower.as_slice()[i], self.upper.as_slice()[i]);
        }
    }
}
