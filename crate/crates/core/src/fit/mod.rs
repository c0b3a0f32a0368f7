//! End-to-end parameter fitting: cost assembly, length pre-estimation,
//! frequency-set construction, multistart orchestration and best-candidate
//! selection, plus transfer-impedance validation utilities.

mod cost;
mod freq;
mod params;
mod start;

pub use cost::{area_floor_penalty, cost_j0, end_rise_penalty, misfit_term, CostWeights};
pub use freq::{
    build_frequency_set, estimate_length, local_extrema, FrequencySpacing, LengthEstimate,
    FALLBACK_LENGTH, LENGTH_RANGE,
};
pub use params::{FitBounds, ParameterVector};
pub use start::initial_points;

use crate::eardrum::EardrumLoad;
use crate::error::{Error, Result};
use crate::geometry::DEFAULT_AREA_SAMPLES;
use crate::horn::{self, HornProblem};
use crate::medium::{FrequencyPoint, MediumProperties};
use crate::neldermead;
use crate::spectrum::{level_phase_diff, ImpedanceSpectrum, LevelPhaseDiff};
use num_complex::Complex64;
use rayon::prelude::*;

/// Configuration of the fitting pipeline. The defaults reproduce the
/// reference procedure: 25 log-spaced frequencies up to 10 kHz augmented
/// with the impedance-magnitude extrema, twelve starts perturbed by ±25%,
/// three restarts each, four Fourier harmonics.
#[derive(Debug, Clone)]
pub struct FitConfig {
    pub medium: MediumProperties,
    pub weights: CostWeights,
    /// Number of area-function harmonics M (1..=8).
    pub fourier_order: usize,
    /// Number of distributed fitting frequencies before augmentation.
    pub frequency_count: usize,
    /// Lower edge of the fitting band, Hz.
    pub f_lo: f64,
    /// Upper edge of the fitting band, Hz.
    pub f_cap: f64,
    pub spacing: FrequencySpacing,
    /// Augment the fitting set with the |Z_in| extrema of the data.
    pub include_extrema: bool,
    pub n_starts: usize,
    /// Restarts per start, each initialized at the preceding optimum.
    pub restarts: usize,
    /// Multiplicative perturbation of the basic values, ±fraction.
    pub initial_perturbation: f64,
    pub seed: u64,
    /// Source volume velocity used in the forward model, m³/s.
    pub volume_velocity: f64,
    /// Sample count of the penalty grid.
    pub area_samples: usize,
    /// Search box override; defaults to the standard box for the order.
    pub bounds: Option<FitBounds>,
    /// Evaluation budget per simplex run; defaults to 400·dimension.
    pub max_evals_per_run: Option<usize>,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            medium: MediumProperties::default(),
            weights: CostWeights::default(),
            fourier_order: 4,
            frequency_count: 25,
            f_lo: 100.0,
            f_cap: 10_000.0,
            spacing: FrequencySpacing::Logarithmic,
            include_extrema: true,
            n_starts: 12,
            restarts: 3,
            initial_perturbation: 0.25,
            seed: 0,
            volume_velocity: 1.0,
            area_samples: DEFAULT_AREA_SAMPLES,
            bounds: None,
            max_evals_per_run: None,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        self.weights.validate()?;
        if !(1..=8).contains(&self.fourier_order) {
            return Err(Error::invalid("fourier_order must be in 1..=8"));
        }
        if self.n_starts < 1 {
            return Err(Error::invalid("need at least one start"));
        }
        if self.volume_velocity == 0.0 {
            return Err(Error::invalid("volume velocity must be nonzero"));
        }
        if self.area_samples < 2 {
            return Err(Error::invalid("area grid needs at least 2 samples"));
        }
        if let Some(b) = &self.bounds {
            b.validate()?;
            if b.fourier_order() != self.fourier_order {
                return Err(Error::invalid(format!(
                    "bounds are for order {}, config says {}",
                    b.fourier_order(),
                    self.fourier_order
                )));
            }
        }
        Ok(())
    }
}

/// The fitting objective over a fixed frequency set:
/// `J = J0 + J1 + J2`, where J0 is the data misfit and J1/J2 the
/// area-function penalties. Forward-model failures yield +∞ so the
/// simplex rejects the vertex.
pub struct FitObjective<'a> {
    data: &'a ImpedanceSpectrum,
    set_points: Vec<FrequencyPoint>,
    set_data: Vec<Complex64>,
    weights: CostWeights,
    medium: MediumProperties,
    volume_velocity: f64,
    area_samples: usize,
}

impl<'a> FitObjective<'a> {
    pub fn new(
        data: &'a ImpedanceSpectrum,
        frequency_set: &[f64],
        weights: CostWeights,
        medium: MediumProperties,
        volume_velocity: f64,
        area_samples: usize,
    ) -> Result<Self> {
        let mut set_points = Vec::with_capacity(frequency_set.len());
        let mut set_data = Vec::with_capacity(frequency_set.len());
        for &f in frequency_set {
            let value = data
                .value_at(f)
                .ok_or_else(|| Error::invalid(format!("data spectrum is missing {f} Hz")))?;
            set_points.push(FrequencyPoint::new(f, &medium)?);
            set_data.push(value);
        }
        Ok(Self {
            data,
            set_points,
            set_data,
            weights,
            medium,
            volume_velocity,
            area_samples,
        })
    }

    fn problem(&self, params: &ParameterVector) -> Result<HornProblem> {
        HornProblem::new(
            params.area()?,
            EardrumLoad::TwoResonatorWithCone {
                resonators: params.resonators()?,
                cone: params.cone()?,
            },
            self.medium,
            self.volume_velocity,
        )
    }

    /// J0 over the fitting set; an error for undecodable parameters.
    pub fn misfit(&self, params: &ParameterVector) -> Result<f64> {
        let problem = self.problem(params)?;
        let mut j0 = 0.0;
        for (point, &zd) in self.set_points.iter().zip(&self.set_data) {
            let d = horn::solve(&problem, point)?;
            j0 += misfit_term(d.input_impedance(), zd, &self.weights);
        }
        if j0.is_nan() {
            return Err(Error::numerical("misfit evaluated to NaN"));
        }
        Ok(j0)
    }

    /// Both penalties at `params`.
    pub fn penalties(&self, params: &ParameterVector) -> Result<(f64, f64)> {
        let area = params.area()?;
        Ok((
            area_floor_penalty(&area, self.weights.area_floor, self.area_samples)?,
            end_rise_penalty(&area, self.weights.end_slack, self.area_samples)?,
        ))
    }

    /// Total cost `J0 + J1 + J2`; +∞ when the forward model fails.
    pub fn total_cost(&self, params: &ParameterVector) -> f64 {
        let Ok((j1, j2)) = self.penalties(params) else {
            return f64::INFINITY;
        };
        match self.misfit(params) {
            Ok(j0) => j0 + j1 + j2,
            Err(_) => f64::INFINITY,
        }
    }

    fn total_cost_slice(&self, values: &[f64]) -> f64 {
        match ParameterVector::new(values.to_vec()) {
            Ok(p) => self.total_cost(&p),
            Err(_) => f64::INFINITY,
        }
    }

    /// J0 of `params` over every frequency of the data grid; used for
    /// selecting among starts.
    pub fn full_grid_misfit(&self, params: &ParameterVector) -> Result<f64> {
        let problem = self.problem(params)?;
        let grid: Result<Vec<FrequencyPoint>> = self
            .data
            .frequencies()
            .iter()
            .map(|&f| FrequencyPoint::new(f, &self.medium))
            .collect();
        let mut j0 = 0.0;
        for (point, &zd) in grid?.iter().zip(self.data.values()) {
            let d = horn::solve(&problem, point)?;
            j0 += misfit_term(d.input_impedance(), zd, &self.weights);
        }
        Ok(j0)
    }
}

/// Diagnostics of one multistart candidate.
#[derive(Debug, Clone)]
pub struct StartDiagnostics {
    pub start_index: usize,
    /// Total cost over the fitting set at this start's optimum.
    pub fit_cost: f64,
    /// J0 over the full data grid at this start's optimum; the selection
    /// criterion.
    pub selection_cost: f64,
    pub evaluations: usize,
    /// Best value after each simplex run; non-increasing.
    pub run_best_values: Vec<f64>,
    pub converged: bool,
}

/// Cost breakdown at the selected optimum.
#[derive(Debug, Clone, Copy)]
pub struct CostBreakdown {
    /// Misfit over the fitting set.
    pub j0_fit: f64,
    /// Area-floor penalty.
    pub j1: f64,
    /// End-rise penalty.
    pub j2: f64,
    /// J0 + J1 + J2 over the fitting set.
    pub total: f64,
    /// Misfit over the full data grid (the selection cost).
    pub j0_full_grid: f64,
}

/// Result of the full fitting pipeline.
#[derive(Debug, Clone)]
pub struct FitResult {
    /// The winning parameter vector.
    pub parameters: ParameterVector,
    /// Fitted input impedance over the full data grid.
    pub input_impedance: ImpedanceSpectrum,
    /// Fitted transfer impedance over the full data grid.
    pub transfer_impedance: ImpedanceSpectrum,
    pub cost: CostBreakdown,
    pub length_estimate: LengthEstimate,
    /// The fitting frequency set that was used.
    pub frequency_set: Vec<f64>,
    pub starts: Vec<StartDiagnostics>,
    pub winner_index: usize,
    /// True when a penalty is still active at the optimum, i.e. the area
    /// function dips below the floor or rises at the end; usually a sign
    /// that the model cannot represent the data.
    pub penalty_active: bool,
}

/// Fit the horn model to input-impedance data.
///
/// Pre-estimates the canal length from the first impedance maximum,
/// tightens the length bounds around it, builds the fitting frequency set,
/// runs `n_starts` independent bounded simplex searches (each with
/// restarts), evaluates every start's optimum over the full data grid and
/// returns the lowest.
pub fn fit(data: &ImpedanceSpectrum, config: &FitConfig) -> Result<FitResult> {
    config.validate()?;
    if !data.covers(config.f_lo, config.f_cap) {
        return Err(Error::invalid(format!(
            "data grid [{}, {}] does not cover the fitting band [{}, {}]",
            data.frequencies()[0],
            data.frequencies().last().unwrap(),
            config.f_lo,
            config.f_cap
        )));
    }

    let length_estimate = estimate_length(data, &config.medium);
    let bounds = match &config.bounds {
        Some(b) => b.clone(),
        None => FitBounds::default_for_order(config.fourier_order)?,
    }
    .with_length_window(length_estimate.length);
    bounds.validate()?;

    let frequency_set = build_frequency_set(
        data,
        config.frequency_count,
        config.f_lo,
        config.f_cap,
        config.spacing,
        config.include_extrema,
    )?;
    let objective = FitObjective::new(
        data,
        &frequency_set,
        config.weights,
        config.medium,
        config.volume_velocity,
        config.area_samples,
    )?;

    let starts = initial_points(
        &bounds,
        length_estimate.length,
        config.n_starts,
        config.initial_perturbation,
        config.seed,
    )?;
    let search_bounds = bounds.to_search_bounds()?;
    let options = neldermead::Options {
        restarts: config.restarts,
        max_evals_per_run: config.max_evals_per_run,
        ..neldermead::Options::default()
    };

    // independent searches; results collected in start order
    let outcomes: Vec<(ParameterVector, neldermead::Minimum, f64)> = starts
        .par_iter()
        .map(|start| {
            let minimum = neldermead::minimize(
                |x| objective.total_cost_slice(x),
                &search_bounds,
                start.as_slice(),
                &options,
            )?;
            let point = ParameterVector::new(minimum.point.clone())?;
            let selection = objective.full_grid_misfit(&point).unwrap_or(f64::INFINITY);
            Ok((point, minimum, selection))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut diagnostics = Vec::with_capacity(outcomes.len());
    let mut winner: Option<usize> = None;
    for (i, (_, minimum, selection)) in outcomes.iter().enumerate() {
        diagnostics.push(StartDiagnostics {
            start_index: i,
            fit_cost: minimum.value,
            selection_cost: *selection,
            evaluations: minimum.evaluations,
            run_best_values: minimum.runs.iter().map(|r| r.best_value).collect(),
            converged: minimum.converged,
        });
        let better = match winner {
            None => selection.is_finite(),
            Some(w) => *selection < outcomes[w].2,
        };
        if better {
            winner = Some(i);
        }
    }
    let winner_index = winner.ok_or_else(|| {
        Error::numerical(format!(
            "all {} starts failed; fit costs: {:?}",
            outcomes.len(),
            diagnostics.iter().map(|d| d.fit_cost).collect::<Vec<_>>()
        ))
    })?;
    let (parameters, _, selection_cost) = outcomes[winner_index].clone();

    // forward model over the full data grid
    let problem = HornProblem::new(
        parameters.area()?,
        EardrumLoad::TwoResonatorWithCone {
            resonators: parameters.resonators()?,
            cone: parameters.cone()?,
        },
        config.medium,
        config.volume_velocity,
    )?;
    let grid: Result<Vec<FrequencyPoint>> = data
        .frequencies()
        .iter()
        .map(|&f| FrequencyPoint::new(f, &config.medium))
        .collect();
    let (input_impedance, transfer_impedance) = horn::impedances(&problem, &grid?)?;

    let j0_fit = objective.misfit(&parameters)?;
    let (j1, j2) = objective.penalties(&parameters)?;
    Ok(FitResult {
        cost: CostBreakdown {
            j0_fit,
            j1,
            j2,
            total: j0_fit + j1 + j2,
            j0_full_grid: selection_cost,
        },
        parameters,
        input_impedance,
        transfer_impedance,
        length_estimate,
        frequency_set,
        starts: diagnostics,
        winner_index,
        penalty_active: j1 > 0.0 || j2 > 0.0,
    })
}

/// Per-frequency comparison of a fitted transfer impedance against a
/// reference, with the validation cost summed over the reference grid.
#[derive(Debug, Clone)]
pub struct TransferValidation {
    pub frequencies: Vec<f64>,
    pub diffs: Vec<LevelPhaseDiff>,
    pub j_val: f64,
}

/// Validate a fitted transfer impedance against reference data over the
/// full reference grid.
pub fn validate_transfer(
    model: &ImpedanceSpectrum,
    reference: &ImpedanceSpectrum,
    weights: &CostWeights,
) -> Result<TransferValidation> {
    if model.len() != reference.len() {
        return Err(Error::invalid(format!(
            "grid mismatch: model has {} points, reference {}",
            model.len(),
            reference.len()
        )));
    }
    let mut diffs = Vec::with_capacity(reference.len());
    let mut j_val = 0.0;
    for (i, &f) in reference.frequencies().iter().enumerate() {
        if (model.frequencies()[i] - f).abs() > 1e-6 * f.max(1.0) {
            return Err(Error::invalid(format!(
                "grid mismatch at index {i}: {} vs {f} Hz",
                model.frequencies()[i]
            )));
        }
        let zm = model.values()[i];
        let zr = reference.values()[i];
        diffs.push(level_phase_diff(zm, zr)?);
        j_val += misfit_term(zm, zr, weights);
    }
    Ok(TransferValidation {
        frequencies: reference.frequencies().to_vec(),
        diffs,
        j_val,
    })
}

/// Mean and 5%/95% quantile curves over a batch of validations.
#[derive(Debug, Clone)]
pub struct BatchQuantiles {
    pub frequencies: Vec<f64>,
    pub level_mean: Vec<f64>,
    pub level_q05: Vec<f64>,
    pub level_q95: Vec<f64>,
    pub phase_mean: Vec<f64>,
    pub phase_q05: Vec<f64>,
    pub phase_q95: Vec<f64>,
}

/// Summarize a batch of validations into mean and quantile curves.
pub fn summarize_validations(batch: &[TransferValidation]) -> Result<BatchQuantiles> {
    let first = batch
        .first()
        .ok_or_else(|| Error::invalid("empty validation batch"))?;
    let n = first.frequencies.len();
    for v in batch {
        if v.frequencies.len() != n {
            return Err(Error::invalid("validation grids differ in length"));
        }
    }
    let mut out = BatchQuantiles {
        frequencies: first.frequencies.clone(),
        level_mean: Vec::with_capacity(n),
        level_q05: Vec::with_capacity(n),
        level_q95: Vec::with_capacity(n),
        phase_mean: Vec::with_capacity(n),
        phase_q05: Vec::with_capacity(n),
        phase_q95: Vec::with_capacity(n),
    };
    for i in 0..n {
        let levels: Vec<f64> = batch.iter().map(|v| v.diffs[i].level_db).collect();
        let phases: Vec<f64> = batch.iter().map(|v| v.diffs[i].phase_rad).collect();
        out.level_mean.push(mean(&levels));
        out.level_q05.push(quantile(&levels, 0.05));
        out.level_q95.push(quantile(&levels, 0.95));
        out.phase_mean.push(mean(&phases));
        out.phase_q05.push(quantile(&phases, 0.05));
        out.phase_q95.push(quantile(&phases, 0.95));
    }
    Ok(out)
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Linear-interpolation quantile of `values` at fraction `q`.
fn quantile(values: &[f64], q: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let h = q * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::SpectrumKind;

    fn forward(params: &ParameterVector, config: &FitConfig, freqs: &[f64]) -> ImpedanceSpectrum {
        let problem = HornProblem::new(
            params.area().unwrap(),
            EardrumLoad::TwoResonatorWithCone {
                resonators: params.resonators().unwrap(),
                cone: params.cone().unwrap(),
            },
            config.medium,
            config.volume_velocity,
        )
        .unwrap();
        let grid: Vec<FrequencyPoint> = freqs
            .iter()
            .map(|&f| FrequencyPoint::new(f, &config.medium).unwrap())
            .collect();
        horn::impedances(&problem, &grid).unwrap().0
    }

    #[test]
    fn self_generated_data_costs_nothing_at_the_truth() {
        let config = FitConfig::default();
        let bounds = FitBounds::default_for_order(4).unwrap();
        let truth = bounds.basic.clone();
        let freqs = crate::medium::linear_grid_frequencies(100.0, 20_000.0, 200).unwrap();
        let data = forward(&truth, &config, &freqs);

        let set = build_frequency_set(
            &data,
            25,
            100.0,
            10_000.0,
            FrequencySpacing::Logarithmic,
            true,
        )
        .unwrap();
        let objective = FitObjective::new(
            &data,
            &set,
            config.weights,
            config.medium,
            config.volume_velocity,
            config.area_samples,
        )
        .unwrap();
        let j = objective.total_cost(&truth);
        assert!(j < 1e-12, "inverse-crime identity violated: J = {j}");
        let (j1, j2) = objective.penalties(&truth).unwrap();
        assert_eq!(j1, 0.0);
        assert_eq!(j2, 0.0);
    }

    #[test]
    fn negative_area_is_dominated_by_the_floor_penalty() {
        let config = FitConfig::default();
        let bounds = FitBounds::default_for_order(4).unwrap();
        let truth = bounds.basic.clone();
        let freqs = crate::medium::linear_grid_frequencies(100.0, 20_000.0, 200).unwrap();
        let data = forward(&truth, &config, &freqs);
        let objective = FitObjective::new(
            &data,
            &[1000.0],
            config.weights,
            config.medium,
            config.volume_velocity,
            config.area_samples,
        )
        .unwrap();

        // drive the mean area to the bound floor and the first cosine hard
        // negative so that S goes negative near the entrance
        let mut bad = truth.clone().into_vec();
        bad[0] = 1e-5;
        bad[1] = -2e-5;
        let bad = ParameterVector::new(bad).unwrap();
        let area = bad.area().unwrap();
        let (_, s_min) = area.min_on_grid(config.area_samples).unwrap();
        assert!(s_min < 0.0);
        let expected_floor = 1e4 * (config.weights.area_floor - s_min) / config.weights.area_floor;
        assert!(objective.total_cost(&bad) >= expected_floor);
    }

    #[test]
    fn one_db_at_one_frequency_costs_a_fortieth() {
        // 1 dB is 0.05 decades; A·0.05² = 0.025
        let config = FitConfig::default();
        let bounds = FitBounds::default_for_order(4).unwrap();
        let truth = bounds.basic.clone();
        let freqs = crate::medium::linear_grid_frequencies(100.0, 2000.0, 20).unwrap();
        let data = forward(&truth, &config, &freqs);

        let mut perturbed_values = data.values().to_vec();
        perturbed_values[7] *= 10f64.powf(1.0 / 20.0);
        let perturbed = ImpedanceSpectrum::new(
            SpectrumKind::Input,
            data.frequencies().to_vec(),
            perturbed_values,
        )
        .unwrap();
        let w = CostWeights::default();
        let j = cost_j0(&perturbed, &data, &w, data.frequencies()).unwrap();
        assert!((j - 0.025).abs() < 1e-12, "got {j}");
    }

    #[test]
    fn validation_of_identical_spectra_is_zero() {
        let config = FitConfig::default();
        let bounds = FitBounds::default_for_order(4).unwrap();
        let freqs = crate::medium::linear_grid_frequencies(100.0, 20_000.0, 200).unwrap();
        let data = forward(&bounds.basic, &config, &freqs);
        let v = validate_transfer(&data, &data, &CostWeights::default()).unwrap();
        assert_eq!(v.j_val, 0.0);
        assert!(v
            .diffs
            .iter()
            .all(|d| d.level_db == 0.0 && d.phase_rad == 0.0));
    }

    #[test]
    fn uniform_level_offset_accumulates_over_the_grid() {
        // one decade at every one of the 200 frequencies: J_val = 200·10
        let config = FitConfig::default();
        let bounds = FitBounds::default_for_order(4).unwrap();
        let freqs = crate::medium::linear_grid_frequencies(100.0, 20_000.0, 200).unwrap();
        let data = forward(&bounds.basic, &config, &freqs);
        let offset = ImpedanceSpectrum::new(
            SpectrumKind::Input,
            data.frequencies().to_vec(),
            data.values().iter().map(|z| z * 10.0).collect(),
        )
        .unwrap();
        let v = validate_transfer(&offset, &data, &CostWeights::default()).unwrap();
        assert!((v.j_val - 2000.0).abs() < 1e-9, "got {}", v.j_val);
        assert!(v.diffs.iter().all(|d| (d.level_db - 20.0).abs() < 1e-9));
    }

    #[test]
    fn degenerate_batch_quantiles_coincide_with_the_mean() {
        let config = FitConfig::default();
        let bounds = FitBounds::default_for_order(4).unwrap();
        let freqs = crate::medium::linear_grid_frequencies(100.0, 20_000.0, 200).unwrap();
        let data = forward(&bounds.basic, &config, &freqs);
        let v = validate_transfer(&data, &data, &CostWeights::default()).unwrap();
        let batch = vec![v.clone(), v.clone(), v];
        let q = summarize_validations(&batch).unwrap();
        for i in 0..q.frequencies.len() {
            assert_eq!(q.level_mean[i], q.level_q05[i]);
            assert_eq!(q.level_mean[i], q.level_q95[i]);
            assert_eq!(q.phase_mean[i], q.phase_q05[i]);
        }
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let config = FitConfig::default();
        let bounds = FitBounds::default_for_order(4).unwrap();
        let f200 = crate::medium::linear_grid_frequencies(100.0, 20_000.0, 200).unwrap();
        let f100 = crate::medium::linear_grid_frequencies(100.0, 20_000.0, 100).unwrap();
        let a = forward(&bounds.basic, &config, &f200);
        let b = forward(&bounds.basic, &config, &f100);
        assert!(validate_transfer(&a, &b, &CostWeights::default()).is_err());
    }

    #[test]
    fn truncated_data_is_rejected_with_a_range_error() {
        let config = FitConfig::default();
        let bounds = FitBounds::default_for_order(4).unwrap();
        let freqs = crate::medium::linear_grid_frequencies(100.0, 8000.0, 80).unwrap();
        let data = forward(&bounds.basic, &config, &freqs);
        match fit(&data, &config) {
            Err(Error::InvalidArgument(msg)) => assert!(msg.contains("cover")),
            other => panic!("expected a range error, got {other:?}"),
        }
    }

    #[test]
    fn quantile_interpolates_linearly() {
        let values = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile(&values, 0.0), 1.0);
        assert_eq!(quantile(&values, 1.0), 5.0);
        assert_eq!(quantile(&values, 0.5), 3.0);
        assert!((quantile(&values, 0.05) - 1.2).abs() < 1e-12);
        assert!((quantile(&values, 0.95) - 4.8).abs() < 1e-12);
    }
}
