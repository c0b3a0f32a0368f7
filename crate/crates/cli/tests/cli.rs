//! End-to-end tests of the command implementations and the binary.

use hornfit::analytic;
use hornfit::fit::CostWeights;
use hornfit::medium::MediumProperties;
use hornfit::spectrum::{level_phase_diff, SpectrumKind};
use hornfit_cli::commands::{self, FitOverrides, GridOptions, OracleKind, ValidatePair};
use hornfit_cli::formats::{self, FitReportFile};
use hornfit_cli::CliError;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use tempfile::tempdir;

const BIN: &str = env!("CARGO_BIN_EXE_hornfit");

fn write_two_resonator_params(path: &Path) {
    // synthetic-data eardrum (1 kHz / 3.5 kHz resonators) over the basic geometry
    fs::write(
        path,
        r#"
[area]
mean_area = 6e-5
cosine = [2e-6, 0.0, 0.0, 0.0]
sine = [0.0, 0.0, 0.0, 0.0]
length = 0.03

[termination]
kind = "two-resonator"
level_db = 153.0
level_offset_db = 4.0
quality1 = 1.1
quality2 = 1.5
resonance1_hz = 1000.0
resonance2_hz = 3500.0
"#,
    )
    .unwrap();
}

fn write_rigid_params(path: &Path, mean_area: f64, length: f64) {
    fs::write(
        path,
        format!(
            r#"
[area]
mean_area = {mean_area}
cosine = [0.0]
sine = [0.0]
length = {length}

[termination]
kind = "rigid"
"#
        ),
    )
    .unwrap();
}

#[test]
fn simulate_writes_full_grids() {
    let dir = tempdir().unwrap();
    let params = dir.path().join("params.toml");
    write_two_resonator_params(&params);
    let out = dir.path().join("out");
    let written = commands::simulate(&params, GridOptions::default(), &out).unwrap();
    assert_eq!(written.len(), 2);
    for path in &written {
        let s = formats::read_spectrum(path, SpectrumKind::Input).unwrap();
        assert_eq!(s.len(), 200);
        assert_eq!(s.frequencies()[0], 100.0);
        assert_eq!(*s.frequencies().last().unwrap(), 20_000.0);
    }
}

#[test]
fn simulate_minimal_grid_has_two_rows() {
    let dir = tempdir().unwrap();
    let params = dir.path().join("params.toml");
    write_rigid_params(&params, 6e-5, 0.03);
    let out = dir.path().join("out");
    let grid = GridOptions {
        f_start: 100.0,
        f_end: 200.0,
        count: 2,
    };
    let written = commands::simulate(&params, grid, &out).unwrap();
    let s = formats::read_spectrum(&written[0], SpectrumKind::Input).unwrap();
    assert_eq!(s.len(), 2);
}

#[test]
fn simulated_rigid_duct_matches_the_oracle_away_from_extrema() {
    let dir = tempdir().unwrap();
    let params = dir.path().join("params.toml");
    write_rigid_params(&params, 6e-5, 0.03);
    let sim_out = dir.path().join("sim");
    let oracle_out = dir.path().join("oracle");
    let sim = commands::simulate(&params, GridOptions::default(), &sim_out).unwrap();
    let oracle = commands::oracle(
        OracleKind::RigidCylinder,
        6e-5,
        0.03,
        GridOptions::default(),
        &oracle_out,
    )
    .unwrap();

    let zin = formats::read_spectrum(&sim[0], SpectrumKind::Input).unwrap();
    let reference = formats::read_spectrum(&oracle[0], SpectrumKind::Input).unwrap();
    let medium = MediumProperties::default();
    let extrema = analytic::rigid_cylinder_extremum_frequencies(0.03, &medium, 21_000.0);
    let mut checked = 0;
    for (f, z_ref) in reference.iter() {
        if extrema.iter().any(|e| (f - e).abs() < 0.02 * e) {
            continue;
        }
        let z = zin.value_at(f).unwrap();
        let d = level_phase_diff(z, z_ref).unwrap();
        // simulate uses the frequency-dependent element rule, so allow its
        // dispersion error near the sharp features
        assert!(d.level_db.abs() < 1.0, "{} dB at {f} Hz", d.level_db);
        checked += 1;
    }
    assert!(checked > 150);
}

#[test]
fn oracle_flags_pole_rows_and_zeroes_quarter_wave() {
    let dir = tempdir().unwrap();
    // l = 34.3 mm puts the first pole exactly on the 5 kHz grid line and
    // the quarter-wave zero exactly at 2.5 kHz
    let out = dir.path().join("oracle");
    let grid = GridOptions {
        f_start: 100.0,
        f_end: 20_000.0,
        count: 200,
    };
    let written = commands::oracle(OracleKind::RigidCylinder, 6e-5, 0.0343, grid, &out).unwrap();
    let text = fs::read_to_string(&written[0]).unwrap();
    assert!(text.contains("# pole at 5000 Hz"), "{text:.200}");
    let s = formats::read_spectrum(&written[0], SpectrumKind::Input).unwrap();
    assert!(s.value_at(5000.0).is_none());
    let quarter = s.value_at(2500.0).unwrap();
    assert!(quarter.norm() < 1e-6, "quarter-wave value {quarter}");
    // frozen closed-form value at 1 kHz for the standard 30 mm duct
    let out2 = dir.path().join("oracle2");
    let grid2 = GridOptions {
        f_start: 1000.0,
        f_end: 2000.0,
        count: 2,
    };
    let written2 = commands::oracle(OracleKind::RigidCylinder, 6e-5, 0.03, grid2, &out2).unwrap();
    let s2 = formats::read_spectrum(&written2[0], SpectrumKind::Input).unwrap();
    let z = s2.value_at(1000.0).unwrap();
    assert!((z.im - -1.1200258457132092e7).abs() < 1.0);
    assert_eq!(z.re, 0.0);
}

fn quick_overrides() -> FitOverrides {
    FitOverrides {
        seed: Some(7),
        n_starts: Some(3),
        restarts: Some(1),
        ..FitOverrides::default()
    }
}

#[test]
fn fit_recovers_simulated_data_and_report_is_consistent() {
    let dir = tempdir().unwrap();
    let params = dir.path().join("params.toml");
    write_two_resonator_params(&params);
    let sim_out = dir.path().join("sim");
    let sim = commands::simulate(&params, GridOptions::default(), &sim_out).unwrap();

    // matching configuration: the fitting band spans the full data grid,
    // so the round trip must reproduce the data everywhere
    let overrides = FitOverrides {
        f_cap: Some(20_000.0),
        ..quick_overrides()
    };
    let fit_out = dir.path().join("fit");
    let written = commands::fit(&sim[0], None, &overrides, &fit_out).unwrap();
    let report: FitReportFile = formats::read_toml(&written[0]).unwrap();

    assert!(
        report.cost.j0_full_grid < 1e-3,
        "full-grid misfit {}",
        report.cost.j0_full_grid
    );
    assert!(!report.penalty_active);
    assert_eq!(report.starts.len(), 3);
    assert_eq!(report.config.seed, 7);

    // the report's parameters reproduce the stored spectra through the
    // forward model
    let vector = report.parameters.to_vector().unwrap();
    let problem = hornfit::horn::HornProblem::new(
        vector.area().unwrap(),
        hornfit::eardrum::EardrumLoad::TwoResonatorWithCone {
            resonators: vector.resonators().unwrap(),
            cone: vector.cone().unwrap(),
        },
        MediumProperties::new(report.config.density, report.config.speed_of_sound).unwrap(),
        1.0,
    )
    .unwrap();
    let grid =
        hornfit::medium::linear_grid(100.0, 20_000.0, 200, &MediumProperties::default()).unwrap();
    let (zin, ztr) = hornfit::horn::impedances(&problem, &grid).unwrap();
    let stored_zin = formats::read_spectrum(
        &fit_out.join("fitted_input_impedance.csv"),
        SpectrumKind::Input,
    )
    .unwrap();
    let stored_ztr = formats::read_spectrum(
        &fit_out.join("fitted_transfer_impedance.csv"),
        SpectrumKind::Transfer,
    )
    .unwrap();
    for i in 0..grid.len() {
        let a = zin.values()[i];
        let b = stored_zin.values()[i];
        assert!((a - b).norm() <= 1e-9 * b.norm(), "zin mismatch at {i}");
        let a = ztr.values()[i];
        let b = stored_ztr.values()[i];
        assert!((a - b).norm() <= 1e-9 * b.norm(), "ztr mismatch at {i}");
    }

    // area table has the penalty-grid resolution
    let area_text = fs::read_to_string(fit_out.join("area_function.csv")).unwrap();
    assert_eq!(area_text.lines().count(), 102); // header + 101 samples
}

#[test]
fn fit_reports_are_byte_identical_for_a_fixed_seed() {
    let dir = tempdir().unwrap();
    let params = dir.path().join("params.toml");
    write_two_resonator_params(&params);
    let sim = commands::simulate(&params, GridOptions::default(), &dir.path().join("sim")).unwrap();

    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let a = commands::fit(&sim[0], None, &quick_overrides(), &out_a).unwrap();
    let b = commands::fit(&sim[0], None, &quick_overrides(), &out_b).unwrap();
    assert_eq!(fs::read(&a[0]).unwrap(), fs::read(&b[0]).unwrap());
}

#[test]
fn truncated_data_is_a_range_error() {
    let dir = tempdir().unwrap();
    let params = dir.path().join("params.toml");
    write_two_resonator_params(&params);
    let grid = GridOptions {
        f_start: 100.0,
        f_end: 8000.0,
        count: 80,
    };
    let sim = commands::simulate(&params, grid, &dir.path().join("sim")).unwrap();
    match commands::fit(&sim[0], None, &quick_overrides(), &dir.path().join("fit")) {
        Err(e @ CliError::Usage(_)) => {
            assert_eq!(e.exit_code(), 2);
            assert!(e.to_string().contains("cover"), "{e}");
        }
        other => panic!("expected a range error, got {other:?}"),
    }
}

fn fit_report_for_validation(dir: &Path) -> (PathBuf, PathBuf) {
    let params = dir.join("params.toml");
    write_two_resonator_params(&params);
    let sim = commands::simulate(&params, GridOptions::default(), &dir.join("sim")).unwrap();
    let fit_out = dir.join("fit");
    let written = commands::fit(&sim[0], None, &quick_overrides(), &fit_out).unwrap();
    (written[0].clone(), sim[1].clone())
}

#[test]
fn validating_a_report_against_its_own_transfer_impedance_is_exact() {
    let dir = tempdir().unwrap();
    let (report_path, _) = fit_report_for_validation(dir.path());
    let report: FitReportFile = formats::read_toml(&report_path).unwrap();
    let own_ztr = report_path
        .parent()
        .unwrap()
        .join(&report.outputs.transfer_impedance);

    let out = dir.path().join("val");
    let written = commands::validate(
        &[ValidatePair {
            report: report_path,
            reference: own_ztr,
        }],
        &out,
    )
    .unwrap();
    let text = fs::read_to_string(&written[0]).unwrap();
    for line in text.lines().skip(1) {
        let mut cols = line.split(',');
        let _f = cols.next().unwrap();
        assert_eq!(cols.next().unwrap().parse::<f64>().unwrap(), 0.0);
        assert_eq!(cols.next().unwrap().parse::<f64>().unwrap(), 0.0);
    }
    let summary = fs::read_to_string(&written[1]).unwrap();
    assert!(summary.contains("j_val = 0.0"), "{summary}");
}

#[test]
fn uniform_offset_shows_up_as_a_constant_level_column() {
    let dir = tempdir().unwrap();
    let (report_path, _) = fit_report_for_validation(dir.path());
    let report: FitReportFile = formats::read_toml(&report_path).unwrap();
    let own_ztr_path = report_path
        .parent()
        .unwrap()
        .join(&report.outputs.transfer_impedance);

    // reference = fitted / 10^{6/20}: the fit then sits +6 dB above it
    let fitted = formats::read_spectrum(&own_ztr_path, SpectrumKind::Transfer).unwrap();
    let scale = 10f64.powf(6.0 / 20.0);
    let shifted = hornfit::spectrum::ImpedanceSpectrum::new(
        SpectrumKind::Transfer,
        fitted.frequencies().to_vec(),
        fitted.values().iter().map(|z| z / scale).collect(),
    )
    .unwrap();
    let reference_path = dir.path().join("shifted.csv");
    formats::write_spectrum(&reference_path, &shifted).unwrap();

    let out = dir.path().join("val");
    let written = commands::validate(
        &[ValidatePair {
            report: report_path,
            reference: reference_path,
        }],
        &out,
    )
    .unwrap();
    let text = fs::read_to_string(&written[0]).unwrap();
    for line in text.lines().skip(1) {
        let level: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((level - 6.0).abs() < 1e-9, "level {level}");
    }

    // summary J_val matches the hand value 200·A·(6/20)² = 180
    let summary = fs::read_to_string(&written[1]).unwrap();
    let j_line = summary
        .lines()
        .find(|l| l.trim_start().starts_with("j_val"))
        .unwrap();
    let j: f64 = j_line.split('=').nth(1).unwrap().trim().parse().unwrap();
    let expected = 200.0 * CostWeights::default().magnitude * (6.0f64 / 20.0).powi(2);
    assert!((j - expected).abs() < 1e-6, "j_val {j} vs {expected}");
}

#[test]
fn batch_validation_writes_degenerate_quantiles() {
    let dir = tempdir().unwrap();
    let (report_path, reference) = fit_report_for_validation(dir.path());
    let pairs: Vec<ValidatePair> = (0..3)
        .map(|_| ValidatePair {
            report: report_path.clone(),
            reference: reference.clone(),
        })
        .collect();
    let out = dir.path().join("val");
    let written = commands::validate(&pairs, &out).unwrap();
    let quantiles = written
        .iter()
        .find(|p| p.ends_with("quantiles.csv"))
        .unwrap();
    let text = fs::read_to_string(quantiles).unwrap();
    assert_eq!(text.lines().count(), 201); // header + 200 rows
    for line in text.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        // identical inputs: the quantiles coincide exactly, the mean up to
        // the rounding of (3x)/3
        assert_eq!(cols[2], cols[3]); // level q05 == q95
        assert!((cols[1] - cols[2]).abs() <= 1e-12 * cols[2].abs().max(1e-300));
        assert_eq!(cols[5], cols[6]); // phase q05 == q95
        assert!((cols[4] - cols[5]).abs() <= 1e-12 * cols[5].abs().max(1e-300));
    }
}

// ---------------------------------------------------------------------------
// Binary-level checks: exit codes and stdout
// ---------------------------------------------------------------------------

#[test]
fn binary_oracle_runs_and_reports_files() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("out");
    let output = Command::new(BIN)
        .args([
            "oracle",
            "--area",
            "6e-5",
            "--length",
            "0.03",
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("oracle_input_impedance.csv"));
    assert!(out.join("oracle_input_impedance.csv").exists());
}

#[test]
fn binary_exit_code_2_on_bad_arguments() {
    let dir = tempdir().unwrap();
    // missing data file is a usage error
    let output = Command::new(BIN)
        .args([
            "fit",
            "--data",
            dir.path().join("nonexistent.csv").to_str().unwrap(),
            "--out",
            dir.path().join("out").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));

    // clap usage errors also exit with 2
    let output = Command::new(BIN).args(["fit"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn binary_exit_code_3_on_numerical_failure() {
    let dir = tempdir().unwrap();
    let params = dir.path().join("params.toml");
    // a zero-area duct assembles to a singular system
    fs::write(
        &params,
        r#"
[area]
mean_area = 0.0
cosine = [0.0]
sine = [0.0]
length = 0.03

[termination]
kind = "rigid"
"#,
    )
    .unwrap();
    let output = Command::new(BIN)
        .args([
            "simulate",
            "--params",
            params.to_str().unwrap(),
            "--out",
            dir.path().join("out").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3), "{output:?}");
}
