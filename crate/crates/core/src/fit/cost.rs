//! Cost assembly: data misfit plus area-function penalties.

use crate::error::{Error, Result};
use crate::geometry::AreaFunctionParams;
use crate::spectrum::ImpedanceSpectrum;
use num_complex::Complex64;

/// Scale of both penalty terms.
const PENALTY_SCALE: f64 = 1e4;

/// Weights of the misfit terms and parameters of the penalties.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostWeights {
    /// Weight A of the squared log10 magnitude ratio.
    pub magnitude: f64,
    /// Weight B of the squared phase difference (radians).
    pub phase: f64,
    /// Area floor H1 in m²; smaller cross-sections are penalized.
    pub area_floor: f64,
    /// Allowed rise H2 of the end area above the running minimum
    /// (dimensionless slack); zero forces the minimum to sit at the end.
    pub end_slack: f64,
}

impl Default for CostWeights {
    fn default() -> Self {
        Self {
            magnitude: 10.0,
            phase: 1.0,
            area_floor: 1e-5,
            end_slack: 0.0,
        }
    }
}

impl CostWeights {
    pub fn validate(&self) -> Result<()> {
        if self.magnitude < 0.0 || self.phase < 0.0 {
            return Err(Error::invalid("misfit weights must be non-negative"));
        }
        if !self.area_floor.is_finite() || self.area_floor <= 0.0 {
            return Err(Error::invalid("area floor must be positive"));
        }
        if self.end_slack < 0.0 {
            return Err(Error::invalid("end slack must be non-negative"));
        }
        Ok(())
    }
}

/// Misfit of one model value against one data value:
/// `A·(log10|z/z_data|)² + B·arg(z/z_data)²`.
pub fn misfit_term(model: Complex64, data: Complex64, weights: &CostWeights) -> f64 {
    let ratio = model / data;
    let log_mag = ratio.norm().log10();
    let phase = ratio.arg();
    weights.magnitude * log_mag * log_mag + weights.phase * phase * phase
}

/// Weighted misfit of `model` against `data` summed over `frequencies`.
/// Both spectra must contain every requested frequency.
pub fn cost_j0(
    model: &ImpedanceSpectrum,
    data: &ImpedanceSpectrum,
    weights: &CostWeights,
    frequencies: &[f64],
) -> Result<f64> {
    let mut total = 0.0;
    for &f in frequencies {
        let zm = model
            .value_at(f)
            .ok_or_else(|| Error::invalid(format!("model spectrum is missing {f} Hz")))?;
        let zd = data
            .value_at(f)
            .ok_or_else(|| Error::invalid(format!("data spectrum is missing {f} Hz")))?;
        total += misfit_term(zm, zd, weights);
    }
    Ok(total)
}

/// Penalty against small or negative cross-sections:
/// `10⁴·max(H1 − S(x), 0)_∞ / H1` over the sample grid.
pub fn area_floor_penalty(area: &AreaFunctionParams, floor: f64, samples: usize) -> Result<f64> {
    let (_, s_min) = area.min_on_grid(samples)?;
    Ok(PENALTY_SCALE * (floor - s_min).max(0.0) / floor)
}

/// Penalty against the end of the canal being wider than its interior:
/// `10⁴·max((S(ℓ) − S(x) − H2)/|S(x)|, 0)_∞` over the sample grid. With
/// zero slack this forces the area minimum to the end of the canal.
pub fn end_rise_penalty(area: &AreaFunctionParams, slack: f64, samples: usize) -> Result<f64> {
    let grid = area.sample(samples)?;
    let s_end = grid.last().unwrap().1;
    let worst = grid
        .iter()
        .map(|&(_, s)| ((s_end - s - slack) / s.abs()).max(0.0))
        .fold(0.0f64, f64::max);
    Ok(PENALTY_SCALE * worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DEFAULT_AREA_SAMPLES;
    use crate::spectrum::SpectrumKind;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spectrum(values: Vec<Complex64>) -> ImpedanceSpectrum {
        let freqs = (0..values.len()).map(|i| 100.0 * (i + 1) as f64).collect();
        ImpedanceSpectrum::new(SpectrumKind::Input, freqs, values).unwrap()
    }

    #[test]
    fn identical_spectra_cost_nothing() {
        let data = spectrum(vec![c(1e7, 2e6), c(-3e6, 1e7), c(5e6, -5e6)]);
        let w = CostWeights::default();
        let j = cost_j0(&data, &data, &w, &[100.0, 200.0, 300.0]).unwrap();
        assert_eq!(j, 0.0);
    }

    #[test]
    fn one_decade_costs_the_magnitude_weight() {
        let data = spectrum(vec![c(1.0, 0.0)]);
        let model = spectrum(vec![c(10.0, 0.0)]);
        let w = CostWeights::default();
        let j = cost_j0(&model, &data, &w, &[100.0]).unwrap();
        assert!((j - 10.0).abs() < 1e-12, "got {j}");
    }

    #[test]
    fn quarter_turn_costs_the_phase_weight() {
        let data = spectrum(vec![c(1.0, 0.0)]);
        let model = spectrum(vec![c(0.0, 1.0)]);
        let w = CostWeights::default();
        let j = cost_j0(&model, &data, &w, &[100.0]).unwrap();
        assert!((j - PI * PI / 4.0).abs() < 1e-12, "got {j}");
        assert!((j - 2.4674011002723395).abs() < 1e-12);
    }

    #[test]
    fn missing_frequencies_are_an_error() {
        let data = spectrum(vec![c(1.0, 0.0)]);
        let model = spectrum(vec![c(1.0, 0.0)]);
        assert!(cost_j0(&model, &data, &CostWeights::default(), &[250.0]).is_err());
    }

    #[test]
    fn cost_is_invariant_under_frequency_permutation() {
        let data = spectrum(vec![c(1e7, 2e6), c(-3e6, 1e7), c(5e6, -5e6)]);
        let model = spectrum(vec![c(2e7, 1e6), c(-4e6, 8e6), c(6e6, -4e6)]);
        let w = CostWeights::default();
        let a = cost_j0(&model, &data, &w, &[100.0, 200.0, 300.0]).unwrap();
        let b = cost_j0(&model, &data, &w, &[300.0, 100.0, 200.0]).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn area_floor_penalty_matches_worked_values() {
        // comfortably above the floor: no penalty
        let wide = AreaFunctionParams::uniform(6e-5, 0.03).unwrap();
        assert_eq!(
            area_floor_penalty(&wide, 1e-5, DEFAULT_AREA_SAMPLES).unwrap(),
            0.0
        );

        // half the floor violated: 10⁴·0.5
        let narrow = AreaFunctionParams::uniform(0.5e-5, 0.03).unwrap();
        let p = area_floor_penalty(&narrow, 1e-5, DEFAULT_AREA_SAMPLES).unwrap();
        assert!((p - 5000.0).abs() < 1e-9, "got {p}");

        // vanished area: the full scale
        let zero = AreaFunctionParams::uniform(0.0, 0.03).unwrap();
        let p = area_floor_penalty(&zero, 1e-5, DEFAULT_AREA_SAMPLES).unwrap();
        assert!((p - 1e4).abs() < 1e-9, "got {p}");
    }

    #[test]
    fn end_rise_penalty_matches_worked_values() {
        // monotone decreasing taper: the end is the minimum, no penalty
        let taper =
            AreaFunctionParams::new(6e-5, vec![2e-6, 0.0, 0.0, 0.0], vec![0.0; 4], 0.03).unwrap();
        assert_eq!(
            end_rise_penalty(&taper, 0.0, DEFAULT_AREA_SAMPLES).unwrap(),
            0.0
        );

        // constant area: boundary case, still no penalty
        let flat = AreaFunctionParams::uniform(6e-5, 0.03).unwrap();
        assert_eq!(
            end_rise_penalty(&flat, 0.0, DEFAULT_AREA_SAMPLES).unwrap(),
            0.0
        );

        // interior dip to 5e-5 with the ends at 6e-5:
        // 10⁴·(6e-5 − 5e-5)/5e-5 = 2000
        let dip =
            AreaFunctionParams::new(6e-5, vec![0.0; 4], vec![-1e-5, 0.0, 0.0, 0.0], 0.03).unwrap();
        let p = end_rise_penalty(&dip, 0.0, DEFAULT_AREA_SAMPLES).unwrap();
        assert!((p - 2000.0).abs() < 1e-6, "got {p}");
    }
}
