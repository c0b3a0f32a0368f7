//! Closed-form reference solutions for simple duct configurations, used to
//! validate the numerical solver and to pre-estimate the canal length.

use crate::medium::MediumProperties;
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Input impedance of a uniform duct with a rigid far end:
/// `Z_in = −i·(ρc/S)·cot(kℓ)`, with the source volume velocity directed
/// into the duct.
///
/// Diverges at the pressure antiresonances kℓ = nπ (f = n·c/2ℓ) and
/// vanishes at kℓ = (2n−1)π/2.
pub fn rigid_cylinder_input_impedance(
    area: f64,
    length: f64,
    medium: &MediumProperties,
    frequency: f64,
) -> Complex64 {
    let k = TAU * frequency / medium.speed_of_sound;
    let z0 = medium.duct_impedance(area);
    Complex64::new(0.0, -z0 / (k * length).tan())
}

/// Transfer impedance of the same duct: `Z_tr = −i·(ρc/S)/sin(kℓ)`.
pub fn rigid_cylinder_transfer_impedance(
    area: f64,
    length: f64,
    medium: &MediumProperties,
    frequency: f64,
) -> Complex64 {
    let k = TAU * frequency / medium.speed_of_sound;
    let z0 = medium.duct_impedance(area);
    Complex64::new(0.0, -z0 / (k * length).sin())
}

/// Frequencies of the analytic |Z_in| extrema of a rigid-ended uniform duct
/// up to `f_max`: maxima at n·c/(2ℓ), minima at (2n−1)·c/(4ℓ), jointly the
/// multiples of c/(4ℓ).
pub fn rigid_cylinder_extremum_frequencies(
    length: f64,
    medium: &MediumProperties,
    f_max: f64,
) -> Vec<f64> {
    let step = medium.speed_of_sound / (4.0 * length);
    let mut out = Vec::new();
    let mut m = 1;
    loop {
        let f = m as f64 * step;
        if f > f_max {
            break;
        }
        out.push(f);
        m += 1;
    }
    out
}
