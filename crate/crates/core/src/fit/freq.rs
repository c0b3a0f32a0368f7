//! Canal-length pre-estimation and fitting-frequency selection.

use crate::error::{Error, Result};
use crate::medium::MediumProperties;
use crate::spectrum::ImpedanceSpectrum;

/// Hard length range of plausible canals, m.
pub const LENGTH_RANGE: (f64, f64) = (15e-3, 45e-3);

/// Fallback length when the data shows no usable maximum, m.
pub const FALLBACK_LENGTH: f64 = 30e-3;

/// Result of the length pre-estimation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthEstimate {
    /// Estimated canal length, m.
    pub length: f64,
    /// Frequency of the first |Z_in| maximum, when one was found.
    pub peak_frequency: Option<f64>,
    /// True when no maximum was found and the fallback length was used.
    pub fallback: bool,
}

/// Estimate the canal length from the first interior maximum of the
/// input-impedance magnitude: a rigidly terminated uniform duct of length
/// ℓ has its first maximum at c/(2ℓ), so `ℓ_est = c/(2·f_max)`. The result
/// is clamped into the plausible range; without any maximum the estimate
/// falls back to 30 mm and is flagged.
pub fn estimate_length(data: &ImpedanceSpectrum, medium: &MediumProperties) -> LengthEstimate {
    let magnitudes: Vec<f64> = data.values().iter().map(|z| z.norm()).collect();
    let (maxima, _) = local_extrema(&magnitudes);
    match maxima.first() {
        Some(&i) => {
            let f_max = data.frequencies()[i];
            let raw = medium.speed_of_sound / (2.0 * f_max);
            LengthEstimate {
                length: raw.clamp(LENGTH_RANGE.0, LENGTH_RANGE.1),
                peak_frequency: Some(f_max),
                fallback: false,
            }
        }
        None => LengthEstimate {
            length: FALLBACK_LENGTH,
            peak_frequency: None,
            fallback: true,
        },
    }
}

/// Indices of the interior local maxima and minima of `values`.
///
/// A point qualifies when it is strictly greater (resp. smaller) than its
/// neighbors; runs of equal values count once, at their leftmost point.
/// Runs touching either end of the grid are not extrema.
pub fn local_extrema(values: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    let n = values.len();
    if n < 3 {
        return (maxima, minima);
    }
    let mut i = 1;
    while i < n - 1 {
        // [i, j] is a run of equal values
        let mut j = i;
        while j + 1 < n && values[j + 1] == values[i] {
            j += 1;
        }
        // runs starting at the grid edge or ending on it are not interior
        if j + 1 < n && values[i] != values[i - 1] {
            let before = values[i - 1];
            let after = values[j + 1];
            if values[i] > before && values[i] > after {
                maxima.push(i);
            } else if values[i] < before && values[i] < after {
                minima.push(i);
            }
        }
        i = j + 1;
    }
    (maxima, minima)
}

/// How the base frequency set is distributed over `[f_lo, f_cap]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrequencySpacing {
    Logarithmic,
    Linear,
}

/// Build the fitting frequency set: `count` points distributed over
/// `[f_lo, f_cap]`, each rounded up to the nearest 100 Hz and deduplicated;
/// optionally augmented with the frequencies of all |Z_in| extrema of the
/// data within the range, because those carry the most shape information.
/// Every member must exist on the data grid.
pub fn build_frequency_set(
    data: &ImpedanceSpectrum,
    count: usize,
    f_lo: f64,
    f_cap: f64,
    spacing: FrequencySpacing,
    include_extrema: bool,
) -> Result<Vec<f64>> {
    if f_lo.partial_cmp(&f_cap) != Some(std::cmp::Ordering::Less) || f_lo <= 0.0 {
        return Err(Error::invalid(format!(
            "need 0 < f_lo < f_cap, got [{f_lo}, {f_cap}]"
        )));
    }
    if count < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 frequencies, got {count}"
        )));
    }
    if !data.covers(f_lo, f_cap) {
        return Err(Error::invalid(format!(
            "data grid [{}, {}] does not cover the requested range [{f_lo}, {f_cap}]",
            data.frequencies()[0],
            data.frequencies().last().unwrap()
        )));
    }

    let n = (count - 1) as f64;
    let mut set: Vec<f64> = (0..count)
        .map(|i| {
            let t = i as f64 / n;
            let raw = match spacing {
                FrequencySpacing::Logarithmic => f_lo * (f_cap / f_lo).powf(t),
                FrequencySpacing::Linear => f_lo + (f_cap - f_lo) * t,
            };
            round_up_to_100(raw).min(f_cap)
        })
        .collect();

    if include_extrema {
        let magnitudes: Vec<f64> = data.values().iter().map(|z| z.norm()).collect();
        let (maxima, minima) = local_extrema(&magnitudes);
        for i in maxima.into_iter().chain(minima) {
            let f = data.frequencies()[i];
            if f >= f_lo - 1e-9 && f <= f_cap + 1e-9 {
                set.push(f);
            }
        }
    }

    set.sort_by(f64::total_cmp);
    set.dedup_by(|a, b| (*a - *b).abs() < 1e-6);

    for &f in &set {
        if data.index_of(f).is_none() {
            return Err(Error::invalid(format!(
                "selected frequency {f} Hz is not on the data grid"
            )));
        }
    }
    if set.is_empty() {
        return Err(Error::invalid("empty frequency set"));
    }
    Ok(set)
}

/// Round up to the next multiple of 100 Hz, tolerating float round-off on
/// values that already sit on the grid.
fn round_up_to_100(f: f64) -> f64 {
    let cells = f / 100.0;
    let nearest = cells.round();
    if (cells - nearest).abs() < 1e-9 {
        nearest * 100.0
    } else {
        cells.ceil() * 100.0
    }
}
