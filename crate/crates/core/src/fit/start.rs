//! Multistart initialization.

use crate::error::{Error, Result};
use crate::fit::params::{FitBounds, ParameterVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Build `n_starts` initial parameter vectors: every basic parameter α₀ is
/// perturbed multiplicatively to α₀·(1 + p·U(−1, 1)) and clamped into the
/// bounds; the length coordinate is pinned to the pre-estimated value for
/// every start so it cannot leave its tightened window. Deterministic for
/// a fixed seed.
pub fn initial_points(
    bounds: &FitBounds,
    estimated_length: f64,
    n_starts: usize,
    perturbation: f64,
    seed: u64,
) -> Result<Vec<ParameterVector>> {
    if n_starts < 1 {
        return Err(Error::invalid("need at least one start"));
    }
    if !(0.0..=1.0).contains(&perturbation) {
        return Err(Error::invalid(format!(
            "perturbation must be in [0, 1], got {perturbation}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = Vec::with_capacity(n_starts);
    for _ in 0..n_starts {
        let mut values: Vec<f64> = bounds
            .basic
            .as_slice()
            .iter()
            .map(|&basic| {
                let draw: f64 = rng.random_range(-1.0..1.0);
                basic * (1.0 + perturbation * draw)
            })
            .collect();
        bounds.clamp(&mut values);
        let mut point = ParameterVector::new(values)?;
        point.set_length(estimated_length);
        starts.push(point);
    }
    Ok(starts)
}
