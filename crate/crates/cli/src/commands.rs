//! Implementations of the CLI subcommands.

use crate::formats::{
    self, FitConfigFile, FitReportFile, ReportOutputs, SimulationParamsFile, SpacingName,
};
use crate::{CliError, CliResult};
use hornfit::analytic;
use hornfit::fit::{self, FitConfig, TransferValidation};
use hornfit::horn::{self, HornProblem};
use hornfit::medium::{linear_grid, MediumProperties};
use hornfit::spectrum::SpectrumKind;
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

/// Frequency grid options shared by `simulate` and `oracle`.
#[derive(Debug, Clone, Copy)]
pub struct GridOptions {
    pub f_start: f64,
    pub f_end: f64,
    pub count: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            f_start: 100.0,
            f_end: 20_000.0,
            count: 200,
        }
    }
}

/// Command-line overrides of the fit configuration.
#[derive(Debug, Clone, Default)]
pub struct FitOverrides {
    pub seed: Option<u64>,
    pub f_cap: Option<f64>,
    pub spacing: Option<SpacingName>,
    pub n_starts: Option<usize>,
    pub restarts: Option<usize>,
    pub fourier_order: Option<usize>,
}

/// `hornfit simulate`: forward-model a parameter file into input and
/// transfer impedance spectra.
pub fn simulate(params_path: &Path, grid: GridOptions, out_dir: &Path) -> CliResult<Vec<PathBuf>> {
    let params: SimulationParamsFile = formats::read_toml(params_path)?;
    let medium = params.medium.to_medium()?;
    let problem = HornProblem::new(
        params.area.to_area()?,
        params.termination.to_load()?,
        medium,
        1.0,
    )?;
    let points = linear_grid(grid.f_start, grid.f_end, grid.count, &medium)?;
    let (zin, ztr) = horn::impedances(&problem, &points)?;

    let zin_path = out_dir.join("input_impedance.csv");
    let ztr_path = out_dir.join("transfer_impedance.csv");
    formats::write_spectrum(&zin_path, &zin)?;
    formats::write_spectrum(&ztr_path, &ztr)?;
    Ok(vec![zin_path, ztr_path])
}

/// `hornfit fit`: fit the horn model to an input-impedance file and write
/// the report plus the fitted spectra and area function.
pub fn fit(
    data_path: &Path,
    config_path: Option<&Path>,
    overrides: &FitOverrides,
    out_dir: &Path,
) -> CliResult<Vec<PathBuf>> {
    let data = formats::read_spectrum(data_path, SpectrumKind::Input)?;
    let file: FitConfigFile = match config_path {
        Some(p) => formats::read_toml(p)?,
        None => FitConfigFile::default(),
    };
    let mut config = file.to_config()?;
    apply_overrides(&mut config, overrides)?;

    let result = fit::fit(&data, &config)?;

    let outputs = ReportOutputs {
        input_impedance: "fitted_input_impedance.csv".into(),
        transfer_impedance: "fitted_transfer_impedance.csv".into(),
        area_function: "area_function.csv".into(),
    };
    let zin_path = out_dir.join(&outputs.input_impedance);
    let ztr_path = out_dir.join(&outputs.transfer_impedance);
    let area_path = out_dir.join(&outputs.area_function);
    let report_path = out_dir.join("report.toml");

    formats::write_spectrum(&zin_path, &result.input_impedance)?;
    formats::write_spectrum(&ztr_path, &result.transfer_impedance)?;
    write_area_table(&area_path, &result, config.area_samples)?;
    let report = FitReportFile::from_result(&result, &config, outputs)?;
    formats::write_toml(&report_path, &report)?;
    Ok(vec![report_path, zin_path, ztr_path, area_path])
}

fn apply_overrides(config: &mut FitConfig, overrides: &FitOverrides) -> CliResult<()> {
    if let Some(seed) = overrides.seed {
        config.seed = seed;
    }
    if let Some(f_cap) = overrides.f_cap {
        config.f_cap = f_cap;
    }
    if let Some(spacing) = overrides.spacing {
        config.spacing = spacing.into();
    }
    if let Some(n) = overrides.n_starts {
        config.n_starts = n;
    }
    if let Some(r) = overrides.restarts {
        config.restarts = r;
    }
    if let Some(m) = overrides.fourier_order {
        if config.bounds.is_some() && config.bounds.as_ref().unwrap().fourier_order() != m {
            return Err(CliError::usage(
                "--fourier-order conflicts with the bounds override in the config file",
            ));
        }
        config.fourier_order = m;
    }
    Ok(config.validate()?)
}

fn write_area_table(path: &Path, result: &fit::FitResult, samples: usize) -> CliResult<()> {
    let area = result.parameters.area()?;
    let mut out = String::from("x_m,area_m2\n");
    for (x, s) in area.sample(samples)? {
        out.push_str(&format!("{},{}\n", x, s));
    }
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, out)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

/// One report/reference pair for `hornfit validate`.
#[derive(Debug, Clone)]
pub struct ValidatePair {
    pub report: PathBuf,
    pub reference: PathBuf,
}

#[derive(Debug, Serialize)]
struct ValidationSummary {
    pairs: Vec<PairSummary>,
}

#[derive(Debug, Serialize)]
struct PairSummary {
    report: String,
    reference: String,
    j_val: f64,
    differences: String,
}

/// `hornfit validate`: compare each report's fitted transfer impedance
/// against reference data; write per-frequency difference tables and (for
/// batches) mean and quantile curves.
pub fn validate(pairs: &[ValidatePair], out_dir: &Path) -> CliResult<Vec<PathBuf>> {
    if pairs.is_empty() {
        return Err(CliError::usage("validate needs at least one --pair"));
    }
    let weights = hornfit::fit::CostWeights::default();
    let mut written = Vec::new();
    let mut validations: Vec<TransferValidation> = Vec::new();
    let mut summaries = Vec::new();

    for (i, pair) in pairs.iter().enumerate() {
        let report: FitReportFile = formats::read_toml(&pair.report)?;
        let report_dir = pair.report.parent().unwrap_or_else(|| Path::new("."));
        let fitted_path = report_dir.join(&report.outputs.transfer_impedance);
        let fitted = formats::read_spectrum(&fitted_path, SpectrumKind::Transfer)?;
        let reference = formats::read_spectrum(&pair.reference, SpectrumKind::Transfer)?;
        let validation = fit::validate_transfer(&fitted, &reference, &weights)?;

        let diff_name = format!("differences_{i:03}.csv");
        let diff_path = out_dir.join(&diff_name);
        let mut out = String::from("frequency_hz,level_db,phase_rad\n");
        for (f, d) in validation.frequencies.iter().zip(&validation.diffs) {
            out.push_str(&format!("{},{},{}\n", f, d.level_db, d.phase_rad));
        }
        fs::create_dir_all(out_dir)?;
        fs::write(&diff_path, out)?;
        written.push(diff_path);

        summaries.push(PairSummary {
            report: pair.report.display().to_string(),
            reference: pair.reference.display().to_string(),
            j_val: validation.j_val,
            differences: diff_name,
        });
        validations.push(validation);
    }

    let summary_path = out_dir.join("validation.toml");
    formats::write_toml(&summary_path, &ValidationSummary { pairs: summaries })?;
    written.push(summary_path);

    if validations.len() > 1 {
        let q = fit::summarize_validations(&validations)?;
        let mut out = String::from(
            "frequency_hz,level_mean_db,level_q05_db,level_q95_db,phase_mean_rad,phase_q05_rad,phase_q95_rad\n",
        );
        for i in 0..q.frequencies.len() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                q.frequencies[i],
                q.level_mean[i],
                q.level_q05[i],
                q.level_q95[i],
                q.phase_mean[i],
                q.phase_q05[i],
                q.phase_q95[i]
            ));
        }
        let q_path = out_dir.join("quantiles.csv");
        fs::write(&q_path, out)?;
        written.push(q_path);
    }
    Ok(written)
}

/// Analytic reference kinds for `hornfit oracle`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OracleKind {
    /// Uniform duct with a rigid far end: Z_in = −i·(ρc/S)·cot(kℓ).
    RigidCylinder,
}

/// `hornfit oracle`: write the closed-form input impedance of a reference
/// configuration; grid rows falling on a pole are flagged and omitted.
pub fn oracle(
    kind: OracleKind,
    area: f64,
    length: f64,
    grid: GridOptions,
    out_dir: &Path,
) -> CliResult<Vec<PathBuf>> {
    if !area.is_finite() || area <= 0.0 || !length.is_finite() || length <= 0.0 {
        return Err(CliError::usage("oracle needs positive --area and --length"));
    }
    let OracleKind::RigidCylinder = kind;
    let medium = MediumProperties::default();
    let points = linear_grid(grid.f_start, grid.f_end, grid.count, &medium)?;
    let rows: Vec<(f64, Option<num_complex::Complex64>)> = points
        .iter()
        .map(|p| {
            let kl = p.wavenumber * length;
            if kl.sin().abs() < 1e-12 {
                (p.frequency, None)
            } else {
                (
                    p.frequency,
                    Some(analytic::rigid_cylinder_input_impedance(
                        area,
                        length,
                        &medium,
                        p.frequency,
                    )),
                )
            }
        })
        .collect();
    let path = out_dir.join("oracle_input_impedance.csv");
    formats::write_spectrum_with_pole_flags(&path, &rows)?;
    Ok(vec![path])
}
