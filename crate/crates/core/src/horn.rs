//! Per-frequency linear finite-element solution of the horn equation
//!
//! ```text
//! d/dx[S(x)·p'(x)] + k²·S(x)·p(x) = 0        on [0, ℓ]
//! ```
//!
//! with a volume-velocity source at x = 0 and an impedance termination
//! Z_d at x = ℓ. Discretizing the weak form with hat functions on a
//! uniform mesh yields the complex system `(A − M + R)c = F` where
//!
//! * `A_ij = ∫ S φ_j' φ_i' dx` (stiffness),
//! * `M_ij = k² ∫ S φ_j φ_i dx` (mass),
//! * `R_NN = iωρ/Z_d` (impedance boundary term),
//! * `F_0 = q·iωρ` (source term).
//!
//! The source volume velocity `q` is directed into the duct, so a uniform
//! rigid-ended duct reproduces the textbook `Z_in = −i·(ρc/S)·cot(kℓ)`.
//! Element integrals use the per-element Simpson rule (endpoints plus
//! midpoint), exact for the stiffness entries whenever S varies at most
//! cubically per element.

use crate::eardrum::EardrumLoad;
use crate::error::{Error, Result};
use crate::geometry::AreaFunctionParams;
use crate::medium::{FrequencyPoint, MediumProperties};
use crate::spectrum::{ImpedanceSpectrum, SpectrumKind};
use num_complex::Complex64;

/// A horn problem: geometry, termination, medium and source strength.
#[derive(Debug, Clone, PartialEq)]
pub struct HornProblem {
    pub area: AreaFunctionParams,
    pub load: EardrumLoad,
    pub medium: MediumProperties,
    /// Source volume velocity q in m³/s, directed into the duct.
    pub volume_velocity: f64,
}

impl HornProblem {
    pub fn new(
        area: AreaFunctionParams,
        load: EardrumLoad,
        medium: MediumProperties,
        volume_velocity: f64,
    ) -> Result<Self> {
        if volume_velocity == 0.0 || !volume_velocity.is_finite() {
            return Err(Error::invalid(format!(
                "volume velocity must be nonzero, got {volume_velocity}"
            )));
        }
        Ok(Self {
            area,
            load,
            medium,
            volume_velocity,
        })
    }
}

/// Frequency-dependent element count `N = ⌈4·max(ℓ/λ² · 1 m, 1)⌉`.
///
/// Guarantees well over the rule-of-thumb ten elements per wavelength for
/// canal-scale geometries.
pub fn element_count(length: f64, wavelength: f64) -> usize {
    (4.0 * (length / (wavelength * wavelength)).max(1.0)).ceil() as usize
}

/// Assembled (and optionally solved) discretization of one frequency.
///
/// The stiffness and mass matrices are real symmetric tridiagonal and are
/// stored as diagonal plus one off-diagonal; the boundary term and the
/// source have a single nonzero entry each, so they are stored as scalars.
#[derive(Debug, Clone)]
pub struct HornDiscretization {
    /// Number of elements N; the mesh has N+1 nodes.
    pub element_count: usize,
    /// Node coordinates x_0 = 0 .. x_N = ℓ.
    pub nodes: Vec<f64>,
    /// Stiffness diagonal, length N+1.
    pub stiffness_diag: Vec<f64>,
    /// Stiffness off-diagonal, length N.
    pub stiffness_off: Vec<f64>,
    /// Mass diagonal (k²-scaled), length N+1.
    pub mass_diag: Vec<f64>,
    /// Mass off-diagonal (k²-scaled), length N.
    pub mass_off: Vec<f64>,
    /// Impedance boundary entry R_NN = iωρ/Z_d.
    pub robin: Complex64,
    /// Source entry F_0 = q·iωρ.
    pub source: Complex64,
    /// Source volume velocity, for impedance extraction.
    pub volume_velocity: f64,
    /// Frequency this system was assembled for, Hz.
    pub frequency: f64,
    /// Nodal pressures; empty until solved.
    pub pressures: Vec<Complex64>,
}

impl HornDiscretization {
    /// Assemble the system for an arbitrary area profile.
    pub fn from_profile(
        profile: impl Fn(f64) -> f64,
        length: f64,
        terminal_impedance: Complex64,
        medium: &MediumProperties,
        volume_velocity: f64,
        point: &FrequencyPoint,
        elements: usize,
    ) -> Result<Self> {
        if elements < 1 {
            return Err(Error::invalid("need at least one element"));
        }
        if terminal_impedance.norm() == 0.0 {
            return Err(Error::domain(
                "zero terminal impedance makes the boundary term singular",
            ));
        }
        let n = elements;
        let h = length / n as f64;
        let k2 = point.wavenumber * point.wavenumber;
        let nodes: Vec<f64> = (0..=n).map(|i| length * (i as f64 / n as f64)).collect();

        let mut stiffness_diag = vec![0.0; n + 1];
        let mut stiffness_off = vec![0.0; n];
        let mut mass_diag = vec![0.0; n + 1];
        let mut mass_off = vec![0.0; n];

        let mut s_left = profile(nodes[0]);
        for e in 0..n {
            let xl = nodes[e];
            let xr = nodes[e + 1];
            let s_mid = profile(0.5 * (xl + xr));
            let s_right = profile(xr);

            // Simpson: ∫_e S dx ≈ h/6·(S_l + 4S_m + S_r)
            let s_int = h / 6.0 * (s_left + 4.0 * s_mid + s_right);
            let a = s_int / (h * h);
            stiffness_diag[e] += a;
            stiffness_diag[e + 1] += a;
            stiffness_off[e] = -a;

            // Simpson on S·φφ products of the two local hat functions
            let m_ll = h / 6.0 * (s_left + s_mid);
            let m_rr = h / 6.0 * (s_right + s_mid);
            let m_lr = h / 6.0 * s_mid;
            mass_diag[e] += k2 * m_ll;
            mass_diag[e + 1] += k2 * m_rr;
            mass_off[e] = k2 * m_lr;

            s_left = s_right;
        }

        let i_omega_rho = Complex64::new(0.0, point.angular_frequency * medium.density);
        Ok(Self {
            element_count: n,
            nodes,
            stiffness_diag,
            stiffness_off,
            mass_diag,
            mass_off,
            robin: i_omega_rho / terminal_impedance,
            source: volume_velocity * i_omega_rho,
            volume_velocity,
            frequency: point.frequency,
            pressures: Vec::new(),
        })
    }

    /// Assemble the system for `problem` with an explicit element count.
    pub fn assemble_with_elements(
        problem: &HornProblem,
        point: &FrequencyPoint,
        elements: usize,
    ) -> Result<Self> {
        let z_d = problem.load.impedance(&problem.medium, point.frequency);
        Self::from_profile(
            |x| problem.area.eval_raw(x),
            problem.area.length,
            z_d,
            &problem.medium,
            problem.volume_velocity,
            point,
            elements,
        )
    }

    /// Assemble with the frequency-dependent element-count rule.
    pub fn assemble(problem: &HornProblem, point: &FrequencyPoint) -> Result<Self> {
        let n = element_count(problem.area.length, point.wavelength);
        Self::assemble_with_elements(problem, point, n)
    }

    /// Solve `(A − M + R)c = F` for the nodal pressures.
    pub fn solve(&mut self) -> Result<()> {
        let n = self.stiffness_diag.len();
        let mut diag: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(self.stiffness_diag[i] - self.mass_diag[i], 0.0))
            .collect();
        diag[n - 1] += self.robin;
        let off: Vec<Complex64> = (0..n - 1)
            .map(|i| Complex64::new(self.stiffness_off[i] - self.mass_off[i], 0.0))
            .collect();
        let mut rhs = vec![Complex64::new(0.0, 0.0); n];
        rhs[0] = self.source;

        self.pressures = solve_tridiagonal(&off, &diag, &off, &rhs)
            .map_err(|msg| Error::numerical_at(self.frequency, msg))?;
        Ok(())
    }

    /// Entrance pressure p(0).
    pub fn entrance_pressure(&self) -> Complex64 {
        self.pressures[0]
    }

    /// Far-end pressure p(ℓ).
    pub fn end_pressure(&self) -> Complex64 {
        *self.pressures.last().unwrap()
    }

    /// Z_in = p(0)/q. Requires a solved system.
    pub fn input_impedance(&self) -> Complex64 {
        self.entrance_pressure() / self.volume_velocity
    }

    /// Z_tr = p(ℓ)/q. Requires a solved system.
    pub fn transfer_impedance(&self) -> Complex64 {
        self.end_pressure() / self.volume_velocity
    }
}

/// Assemble and solve one frequency with the element-count rule.
pub fn solve(problem: &HornProblem, point: &FrequencyPoint) -> Result<HornDiscretization> {
    let mut d = HornDiscretization::assemble(problem, point)?;
    d.solve()?;
    Ok(d)
}

/// Assemble and solve one frequency with an explicit element count.
pub fn solve_with_elements(
    problem: &HornProblem,
    point: &FrequencyPoint,
    elements: usize,
) -> Result<HornDiscretization> {
    let mut d = HornDiscretization::assemble_with_elements(problem, point, elements)?;
    d.solve()?;
    Ok(d)
}

/// Input and transfer impedance spectra over a frequency grid, solving each
/// frequency with the element-count rule.
pub fn impedances(
    problem: &HornProblem,
    grid: &[FrequencyPoint],
) -> Result<(ImpedanceSpectrum, ImpedanceSpectrum)> {
    impedances_impl(problem, grid, None)
}

/// Same as [`impedances`] but with a fixed element count for every
/// frequency; used for reference solutions and convergence studies.
pub fn impedances_with_elements(
    problem: &HornProblem,
    grid: &[FrequencyPoint],
    elements: usize,
) -> Result<(ImpedanceSpectrum, ImpedanceSpectrum)> {
    impedances_impl(problem, grid, Some(elements))
}

fn impedances_impl(
    problem: &HornProblem,
    grid: &[FrequencyPoint],
    elements: Option<usize>,
) -> Result<(ImpedanceSpectrum, ImpedanceSpectrum)> {
    if grid.is_empty() {
        return Err(Error::invalid("frequency grid must not be empty"));
    }
    let mut freqs = Vec::with_capacity(grid.len());
    let mut zin = Vec::with_capacity(grid.len());
    let mut ztr = Vec::with_capacity(grid.len());
    for point in grid {
        let d = match elements {
            Some(n) => solve_with_elements(problem, point, n)?,
            None => solve(problem, point)?,
        };
        freqs.push(point.frequency);
        zin.push(d.input_impedance());
        ztr.push(d.transfer_impedance());
    }
    Ok((
        ImpedanceSpectrum::new(SpectrumKind::Input, freqs.clone(), zin)?,
        ImpedanceSpectrum::new(SpectrumKind::Transfer, freqs, ztr)?,
    ))
}

/// Direct solution of a complex tridiagonal system.
///
/// Elimination without pivoting, falling back to partially pivoted
/// elimination when a pivot magnitude drops below 1e-14 of its row norm —
/// diagonal dominance fails near resonances, exactly where the fitting
/// frequencies concentrate.
fn solve_tridiagonal(
    sub: &[Complex64],
    diag: &[Complex64],
    sup: &[Complex64],
    rhs: &[Complex64],
) -> std::result::Result<Vec<Complex64>, String> {
    let n = diag.len();
    if n == 0 {
        return Err("empty system".into());
    }

    // Thomas pass with pivot monitoring.
    let mut c_prime = vec![Complex64::new(0.0, 0.0); n.saturating_sub(1)];
    let mut d_prime = vec![Complex64::new(0.0, 0.0); n];
    let mut ok = true;
    let mut denom = diag[0];
    let row_norm0 = diag[0].norm() + sup.first().map_or(0.0, |c| c.norm());
    if denom.norm() < 1e-14 * row_norm0 || row_norm0 == 0.0 {
        ok = false;
    }
    if ok {
        if n > 1 {
            c_prime[0] = sup[0] / denom;
        }
        d_prime[0] = rhs[0] / denom;
        for i in 1..n {
            denom = diag[i] - sub[i - 1] * c_prime[i - 1];
            let row_norm =
                diag[i].norm() + sub[i - 1].norm() + if i < n - 1 { sup[i].norm() } else { 0.0 };
            if denom.norm() < 1e-14 * row_norm || !denom.is_finite() {
                ok = false;
                break;
            }
            if i < n - 1 {
                c_prime[i] = sup[i] / denom;
            }
            d_prime[i] = (rhs[i] - sub[i - 1] * d_prime[i - 1]) / denom;
        }
    }
    if ok {
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        x[n - 1] = d_prime[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = d_prime[i] - c_prime[i] * x[i + 1];
        }
        return Ok(x);
    }

    solve_tridiagonal_pivoting(sub, diag, sup, rhs)
}

/// Banded LU with partial pivoting; row swaps introduce one extra
/// superdiagonal of fill-in.
fn solve_tridiagonal_pivoting(
    sub: &[Complex64],
    diag: &[Complex64],
    sup: &[Complex64],
    rhs: &[Complex64],
) -> std::result::Result<Vec<Complex64>, String> {
    let n = diag.len();
    let mut lower: Vec<Complex64> = sub.to_vec();
    let mut d: Vec<Complex64> = diag.to_vec();
    let mut u1: Vec<Complex64> = sup.to_vec();
    let mut u2 = vec![Complex64::new(0.0, 0.0); n.saturating_sub(2)];
    let mut b: Vec<Complex64> = rhs.to_vec();

    let scale: f64 = d
        .iter()
        .map(|c| c.norm())
        .chain(lower.iter().map(|c| c.norm()))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return Err("singular system (zero matrix)".into());
    }

    for k in 0..n - 1 {
        if lower[k].norm() > d[k].norm() {
            // swap rows k and k+1
            std::mem::swap(&mut d[k], &mut lower[k]);
            std::mem::swap(&mut u1[k], &mut d[k + 1]);
            if k + 1 < n - 1 {
                std::mem::swap(&mut u2[k], &mut u1[k + 1]);
            }
            b.swap(k, k + 1);
        }
        if d[k].norm() <= f64::EPSILON * scale {
            return Err(format!("singular system (pivot {} vanishes)", k));
        }
        let m = lower[k] / d[k];
        d[k + 1] -= m * u1[k];
        if k + 1 < n - 1 {
            u1[k + 1] -= m * u2[k];
        }
        let bk = b[k];
        b[k + 1] -= m * bk;
    }
    if d[n - 1].norm() <= f64::EPSILON * scale {
        return Err("singular system (last pivot vanishes)".into());
    }

    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        if i + 1 < n {
            acc -= u1[i] * x[i + 1];
        }
        if i + 2 < n {
            acc -= u2[i] * x[i + 2];
        }
        x[i] = acc / d[i];
    }
    Ok(x)
}
