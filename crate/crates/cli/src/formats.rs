//! On-disk formats: delimiter-separated impedance spectra, TOML documents
//! for simulation parameters, fit configuration and fit reports.
//!
//! Spectra are plain text with a header line and `frequency_hz,re,im` rows
//! in Pa·s/m³; floats are printed in shortest round-trip form, so a
//! write/read cycle is lossless. Lines starting with `#` are comments.

use crate::{CliError, CliResult};
use hornfit::eardrum::{ConeLoad, EardrumLoad, TwoResonatorParams};
use hornfit::fit::{
    CostWeights, FitBounds, FitConfig, FitResult, FrequencySpacing, ParameterVector,
};
use hornfit::geometry::AreaFunctionParams;
use hornfit::medium::MediumProperties;
use hornfit::spectrum::{ImpedanceSpectrum, SpectrumKind};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::Write;
use std::path::Path;

pub const SPECTRUM_HEADER: &str = "frequency_hz,re,im";

// ---------------------------------------------------------------------------
// Impedance spectra
// ---------------------------------------------------------------------------

pub fn write_spectrum(path: &Path, spectrum: &ImpedanceSpectrum) -> CliResult<()> {
    let mut out = String::with_capacity(32 * spectrum.len() + 32);
    out.push_str(SPECTRUM_HEADER);
    out.push('\n');
    for (f, z) in spectrum.iter() {
        out.push_str(&format!("{},{},{}\n", f, z.re, z.im));
    }
    write_file(path, out.as_bytes())
}

/// Same format, with rows at pole frequencies replaced by a comment.
pub fn write_spectrum_with_pole_flags(
    path: &Path,
    rows: &[(f64, Option<Complex64>)],
) -> CliResult<()> {
    let mut out = String::new();
    out.push_str(SPECTRUM_HEADER);
    out.push('\n');
    for (f, z) in rows {
        match z {
            Some(z) => out.push_str(&format!("{},{},{}\n", f, z.re, z.im)),
            None => out.push_str(&format!("# pole at {f} Hz: value omitted\n")),
        }
    }
    write_file(path, out.as_bytes())
}

pub fn read_spectrum(path: &Path, kind: SpectrumKind) -> CliResult<ImpedanceSpectrum> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let mut frequencies = Vec::new();
    let mut values = Vec::new();
    let mut saw_header = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            saw_header = true;
            continue; // header line
        }
        let mut parts = line.split(',');
        let mut next = |name: &str| -> CliResult<f64> {
            parts
                .next()
                .ok_or_else(|| {
                    CliError::usage(format!(
                        "{}:{}: missing {name} column",
                        path.display(),
                        lineno + 1
                    ))
                })?
                .trim()
                .parse::<f64>()
                .map_err(|e| {
                    CliError::usage(format!(
                        "{}:{}: bad {name}: {e}",
                        path.display(),
                        lineno + 1
                    ))
                })
        };
        let f = next("frequency")?;
        let re = next("re")?;
        let im = next("im")?;
        frequencies.push(f);
        values.push(Complex64::new(re, im));
    }
    Ok(ImpedanceSpectrum::new(kind, frequencies, values)?)
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut file = fs::File::create(path)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
    file.write_all(bytes)?;
    Ok(())
}

pub fn write_toml<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = toml::to_string_pretty(value)
        .map_err(|e| CliError::usage(format!("cannot serialize {}: {e}", path.display())))?;
    write_file(path, text.as_bytes())
}

pub fn read_toml<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// Simulation parameters
// ---------------------------------------------------------------------------

/// Geometry and termination used by `hornfit simulate`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationParamsFile {
    #[serde(default)]
    pub medium: MediumSection,
    pub area: AreaSection,
    pub termination: TerminationSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MediumSection {
    pub density: f64,
    pub speed_of_sound: f64,
}

impl Default for MediumSection {
    fn default() -> Self {
        let m = MediumProperties::default();
        Self {
            density: m.density,
            speed_of_sound: m.speed_of_sound,
        }
    }
}

impl MediumSection {
    pub fn to_medium(&self) -> CliResult<MediumProperties> {
        Ok(MediumProperties::new(self.density, self.speed_of_sound)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AreaSection {
    pub mean_area: f64,
    pub cosine: Vec<f64>,
    pub sine: Vec<f64>,
    pub length: f64,
}

impl AreaSection {
    pub fn to_area(&self) -> CliResult<AreaFunctionParams> {
        Ok(AreaFunctionParams::new(
            self.mean_area,
            self.cosine.clone(),
            self.sine.clone(),
            self.length,
        )?)
    }

    pub fn from_area(area: &AreaFunctionParams) -> Self {
        Self {
            mean_area: area.mean_area,
            cosine: area.cosine_coeffs.clone(),
            sine: area.sine_coeffs.clone(),
            length: area.length,
        }
    }
}

/// Termination model: a two-resonator eardrum with a cone compliance, or a
/// nearly rigid wall.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TerminationSection {
    pub kind: TerminationKind,
    #[serde(default)]
    pub level_db: Option<f64>,
    #[serde(default)]
    pub level_offset_db: Option<f64>,
    #[serde(default)]
    pub quality1: Option<f64>,
    #[serde(default)]
    pub quality2: Option<f64>,
    #[serde(default)]
    pub resonance1_hz: Option<f64>,
    #[serde(default)]
    pub resonance2_hz: Option<f64>,
    /// Cone volume in m³; defaults to the 2.5 mm × 4 mm right cone.
    #[serde(default)]
    pub cone_volume: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminationKind {
    TwoResonator,
    Rigid,
}

impl TerminationSection {
    pub fn to_load(&self) -> CliResult<EardrumLoad> {
        match self.kind {
            TerminationKind::Rigid => Ok(EardrumLoad::Rigid),
            TerminationKind::TwoResonator => {
                let get = |v: Option<f64>, name: &str| {
                    v.ok_or_else(|| {
                        CliError::usage(format!(
                            "termination.{name} is required for kind = \"two-resonator\""
                        ))
                    })
                };
                let resonators = TwoResonatorParams::new(
                    get(self.level_db, "level_db")?,
                    get(self.level_offset_db, "level_offset_db")?,
                    get(self.quality1, "quality1")?,
                    get(self.quality2, "quality2")?,
                    get(self.resonance1_hz, "resonance1_hz")?,
                    get(self.resonance2_hz, "resonance2_hz")?,
                )?;
                let cone = match self.cone_volume {
                    Some(v) => ConeLoad::new(v)?,
                    None => ConeLoad::default(),
                };
                Ok(EardrumLoad::TwoResonatorWithCone { resonators, cone })
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Fit configuration
// ---------------------------------------------------------------------------

/// On-disk fit configuration; every field is optional and defaults to the
/// reference procedure.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitConfigFile {
    pub fourier_order: Option<usize>,
    pub volume_velocity: Option<f64>,
    pub area_samples: Option<usize>,
    pub medium: Option<MediumSection>,
    pub weights: Option<WeightsSection>,
    pub frequencies: Option<FrequenciesSection>,
    pub multistart: Option<MultistartSection>,
    pub bounds: Option<BoundsSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WeightsSection {
    pub magnitude: f64,
    pub phase: f64,
    pub area_floor: f64,
    pub end_slack: f64,
}

impl Default for WeightsSection {
    fn default() -> Self {
        let w = CostWeights::default();
        Self {
            magnitude: w.magnitude,
            phase: w.phase,
            area_floor: w.area_floor,
            end_slack: w.end_slack,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FrequenciesSection {
    pub count: usize,
    pub f_lo: f64,
    pub f_cap: f64,
    pub spacing: SpacingName,
    pub include_extrema: bool,
}

impl Default for FrequenciesSection {
    fn default() -> Self {
        Self {
            count: 25,
            f_lo: 100.0,
            f_cap: 10_000.0,
            spacing: SpacingName::Log,
            include_extrema: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SpacingName {
    Log,
    Linear,
}

impl From<SpacingName> for FrequencySpacing {
    fn from(s: SpacingName) -> Self {
        match s {
            SpacingName::Log => FrequencySpacing::Logarithmic,
            SpacingName::Linear => FrequencySpacing::Linear,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MultistartSection {
    pub n_starts: usize,
    pub restarts: usize,
    pub seed: u64,
    pub perturbation: f64,
}

impl Default for MultistartSection {
    fn default() -> Self {
        Self {
            n_starts: 12,
            restarts: 3,
            seed: 0,
            perturbation: 0.25,
        }
    }
}

/// Per-parameter `{lower, upper, basic}` overrides of the standard search
/// box. The length row is listed for completeness but is always replaced
/// by the window around the pre-estimated length.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsSection {
    pub s0: Option<BoundRow>,
    pub length: Option<BoundRow>,
    pub level: Option<BoundRow>,
    pub level_offset: Option<BoundRow>,
    pub quality1: Option<BoundRow>,
    pub quality2: Option<BoundRow>,
    pub resonance1: Option<BoundRow>,
    pub resonance2: Option<BoundRow>,
    pub volume: Option<BoundRow>,
    /// Scales the harmonic coefficient bounds ±2^{2−m}·1e-5.
    pub coeff_scale: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundRow {
    pub lower: f64,
    pub upper: f64,
    pub basic: f64,
}

impl BoundRow {
    fn check(&self, name: &str, hard_lo: f64, hard_hi: f64) -> CliResult<()> {
        if !(self.lower <= self.basic && self.basic <= self.upper) {
            return Err(CliError::usage(format!(
                "bounds.{name}: need lower <= basic <= upper"
            )));
        }
        if self.lower < hard_lo || self.upper > hard_hi {
            return Err(CliError::usage(format!(
                "bounds.{name}: outside the sane range [{hard_lo}, {hard_hi}]"
            )));
        }
        Ok(())
    }
}

impl FitConfigFile {
    /// Resolve the file into a runnable configuration.
    pub fn to_config(&self) -> CliResult<FitConfig> {
        let mut config = FitConfig::default();
        if let Some(m) = self.fourier_order {
            config.fourier_order = m;
        }
        if let Some(q) = self.volume_velocity {
            config.volume_velocity = q;
        }
        if let Some(n) = self.area_samples {
            config.area_samples = n;
        }
        if let Some(m) = &self.medium {
            config.medium = m.to_medium()?;
        }
        if let Some(w) = &self.weights {
            config.weights = CostWeights {
                magnitude: w.magnitude,
                phase: w.phase,
                area_floor: w.area_floor,
                end_slack: w.end_slack,
            };
        }
        if let Some(f) = &self.frequencies {
            config.frequency_count = f.count;
            config.f_lo = f.f_lo;
            config.f_cap = f.f_cap;
            config.spacing = f.spacing.into();
            config.include_extrema = f.include_extrema;
        }
        if let Some(m) = &self.multistart {
            config.n_starts = m.n_starts;
            config.restarts = m.restarts;
            config.seed = m.seed;
            config.initial_perturbation = m.perturbation;
        }
        if let Some(b) = &self.bounds {
            config.bounds = Some(b.to_bounds(config.fourier_order)?);
        }
        config.validate()?;
        Ok(config)
    }
}

impl BoundsSection {
    pub fn to_bounds(&self, order: usize) -> CliResult<FitBounds> {
        let base = FitBounds::default_for_order(order)?;
        let mut lower = base.lower.as_slice().to_vec();
        let mut upper = base.upper.as_slice().to_vec();
        let mut basic = base.basic.as_slice().to_vec();

        if let Some(scale) = self.coeff_scale {
            if !(scale > 0.0 && scale <= 100.0) {
                return Err(CliError::usage("bounds.coeff_scale must be in (0, 100]"));
            }
            for i in 1..=2 * order {
                lower[i] *= scale;
                upper[i] *= scale;
            }
        }

        let mut apply =
            |row: &Option<BoundRow>, name: &str, index: usize, hard: (f64, f64)| -> CliResult<()> {
                if let Some(r) = row {
                    r.check(name, hard.0, hard.1)?;
                    lower[index] = r.lower;
                    upper[index] = r.upper;
                    basic[index] = r.basic;
                }
                Ok(())
            };
        let ell = 2 * order + 1;
        apply(&self.s0, "s0", 0, (1e-7, 1e-2))?;
        apply(&self.length, "length", ell, (5e-3, 0.1))?;
        apply(&self.level, "level", ell + 1, (0.0, 400.0))?;
        apply(&self.level_offset, "level_offset", ell + 2, (0.0, 100.0))?;
        apply(&self.quality1, "quality1", ell + 3, (1e-3, 1e3))?;
        apply(&self.quality2, "quality2", ell + 4, (1e-3, 1e3))?;
        apply(&self.resonance1, "resonance1", ell + 5, (10.0, 20e3))?;
        apply(&self.resonance2, "resonance2", ell + 6, (10.0, 20e3))?;
        apply(&self.volume, "volume", ell + 7, (1e-12, 1e-5))?;

        let bounds = FitBounds {
            lower: ParameterVector::new(lower)?,
            upper: ParameterVector::new(upper)?,
            basic: ParameterVector::new(basic)?,
        };
        bounds.validate()?;
        Ok(bounds)
    }
}

// ---------------------------------------------------------------------------
// Fit report
// ---------------------------------------------------------------------------

/// The fit report written by `hornfit fit`: fitted parameters, cost
/// breakdown, diagnostics per start, and the names of the emitted tables.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FitReportFile {
    pub winner_index: usize,
    pub penalty_active: bool,
    pub frequency_set: Vec<f64>,
    pub parameters: ReportParameters,
    pub cost: ReportCost,
    pub length_estimate: ReportLengthEstimate,
    pub starts: Vec<ReportStart>,
    pub outputs: ReportOutputs,
    pub config: ReportConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ReportParameters {
    pub mean_area: f64,
    pub cosine: Vec<f64>,
    pub sine: Vec<f64>,
    pub length: f64,
    pub level_db: f64,
    pub level_offset_db: f64,
    pub quality1: f64,
    pub quality2: f64,
    pub resonance1_hz: f64,
    pub resonance2_hz: f64,
    pub cone_volume: f64,
}

impl ReportParameters {
    pub fn from_vector(p: &ParameterVector) -> CliResult<Self> {
        let area = p.area()?;
        let drum = p.resonators()?;
        let cone = p.cone()?;
        Ok(Self {
            mean_area: area.mean_area,
            cosine: area.cosine_coeffs.clone(),
            sine: area.sine_coeffs.clone(),
            length: area.length,
            level_db: drum.level_db,
            level_offset_db: drum.level_offset_db,
            quality1: drum.quality1,
            quality2: drum.quality2,
            resonance1_hz: drum.resonance1_hz,
            resonance2_hz: drum.resonance2_hz,
            cone_volume: cone.volume,
        })
    }

    pub fn to_vector(&self) -> CliResult<ParameterVector> {
        let area = AreaFunctionParams::new(
            self.mean_area,
            self.cosine.clone(),
            self.sine.clone(),
            self.length,
        )?;
        let drum = TwoResonatorParams::new(
            self.level_db,
            self.level_offset_db,
            self.quality1,
            self.quality2,
            self.resonance1_hz,
            self.resonance2_hz,
        )?;
        let cone = ConeLoad::new(self.cone_volume)?;
        Ok(ParameterVector::from_parts(&area, &drum, &cone))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ReportCost {
    pub j0_fit: f64,
    pub j1: f64,
    pub j2: f64,
    pub total: f64,
    pub j0_full_grid: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ReportLengthEstimate {
    pub length: f64,
    pub peak_frequency: Option<f64>,
    pub fallback: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ReportStart {
    pub index: usize,
    pub fit_cost: f64,
    pub selection_cost: f64,
    pub evaluations: usize,
    pub run_best: Vec<f64>,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ReportOutputs {
    pub input_impedance: String,
    pub transfer_impedance: String,
    pub area_function: String,
}

/// Echo of the effective configuration, for reproducibility.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ReportConfig {
    pub fourier_order: usize,
    pub frequency_count: usize,
    pub f_lo: f64,
    pub f_cap: f64,
    pub spacing: SpacingName,
    pub include_extrema: bool,
    pub n_starts: usize,
    pub restarts: usize,
    pub seed: u64,
    pub perturbation: f64,
    pub density: f64,
    pub speed_of_sound: f64,
}

impl FitReportFile {
    pub fn from_result(
        result: &FitResult,
        config: &FitConfig,
        outputs: ReportOutputs,
    ) -> CliResult<Self> {
        Ok(Self {
            winner_index: result.winner_index,
            penalty_active: result.penalty_active,
            frequency_set: result.frequency_set.clone(),
            parameters: ReportParameters::from_vector(&result.parameters)?,
            cost: ReportCost {
                j0_fit: result.cost.j0_fit,
                j1: result.cost.j1,
                j2: result.cost.j2,
                total: result.cost.total,
                j0_full_grid: result.cost.j0_full_grid,
            },
            length_estimate: ReportLengthEstimate {
                length: result.length_estimate.length,
                peak_frequency: result.length_estimate.peak_frequency,
                fallback: result.length_estimate.fallback,
            },
            starts: result
                .starts
                .iter()
                .map(|s| ReportStart {
                    index: s.start_index,
                    fit_cost: s.fit_cost,
                    selection_cost: s.selection_cost,
                    evaluations: s.evaluations,
                    run_best: s.run_best_values.clone(),
                    converged: s.converged,
                })
                .collect(),
            outputs,
            config: ReportConfig {
                fourier_order: config.fourier_order,
                frequency_count: config.frequency_count,
                f_lo: config.f_lo,
                f_cap: config.f_cap,
                spacing: match config.spacing {
                    FrequencySpacing::Logarithmic => SpacingName::Log,
                    FrequencySpacing::Linear => SpacingName::Linear,
                },
                include_extrema: config.include_extrema,
                n_starts: config.n_starts,
                restarts: config.restarts,
                seed: config.seed,
                perturbation: config.initial_perturbation,
                density: config.medium.density,
                speed_of_sound: config.medium.speed_of_sound,
            },
        })
    }
}
