//! Fundamental-frequency and voicing estimation for one analysis
//! window.
//!
//! The estimator is a normalized cross-correlation pitch tracker: the
//! window is compared against itself at every candidate period lag,
//! and the correlation peak height doubles as a voicing probability.
//! Periodic speech correlates strongly with itself one period later;
//! noise and silence do not.

use alloc::vec::Vec;

use super::{ProsodyError, ProsodyParams};

/// A period candidate must reach this fraction of the strongest peak
/// to be chosen. Preferring the smallest such lag avoids locking onto
/// an integer multiple of the true period (octave errors).
const PEAK_RATIO: f64 = 0.9;

/// Estimate `(f0_hz, voicing_prob)` for one window.
///
/// Voicing is the height of the strongest normalized autocorrelation
/// peak in the search band, clamped to [0, 1]. Windows below
/// `params.voicing_threshold` are unvoiced and report `f0_hz` of 0.
/// For voiced windows the period is the smallest lag whose local peak
/// reaches `PEAK_RATIO` of the strongest, refined by parabolic
/// interpolation through the neighboring lags.
pub fn estimate_f0(
    window: &[f32],
    sample_rate: u32,
    params: &ProsodyParams,
) -> Result<(f64, f64), ProsodyError> {
    params.validate()?;
    let n = window.len();
    let sr = sample_rate as f64;

    let lag_min = (libm::floor(sr / params.f0_max_hz) as usize).max(2);
    let lag_max = (libm::ceil(sr / params.f0_min_hz) as usize).min(n.saturating_sub(2));
    if lag_min > lag_max {
        return Err(ProsodyError::InvalidParams(
            "window too short for the f0 search band at this sample rate",
        ));
    }

    // Remove the DC offset so a constant bias does not read as a
    // perfect correlation at every lag.
    let mean = window.iter().map(|&s| s as f64).sum::<f64>() / n as f64;
    let x: Vec<f64> = window.iter().map(|&s| s as f64 - mean).collect();

    // Prefix sums of energy make the per-lag normalizer O(1).
    let mut energy_prefix = Vec::with_capacity(n + 1);
    energy_prefix.push(0.0f64);
    for &v in &x {
        let last = *energy_prefix.last().unwrap();
        energy_prefix.push(last + v * v);
    }
    let total_energy = energy_prefix[n];
    if total_energy <= 0.0 {
        return Ok((0.0, 0.0));
    }

    // One extra lag on each side gives every in-band lag two
    // neighbors for peak picking and parabolic refinement.
    let lo = lag_min - 1;
    let hi = (lag_max + 1).min(n - 1);
    let ncc: Vec<f64> =
        (lo..=hi).map(|lag| normalized_correlation(&x, &energy_prefix, lag)).collect();
    let at = |lag: usize| ncc[lag - lo];

    let mut best = f64::NEG_INFINITY;
    for lag in lag_min..=lag_max {
        if at(lag) > best {
            best = at(lag);
        }
    }
    let voicing = best.clamp(0.0, 1.0);
    if voicing < params.voicing_threshold {
        return Ok((0.0, voicing));
    }

    for lag in lag_min..=lag_max {
        let here = at(lag);
        let before = if lag > lo { at(lag - 1) } else { here };
        let after = if lag < hi { at(lag + 1) } else { here };
        if here >= before && here >= after && here >= PEAK_RATIO * best {
            let delta = parabolic_offset(before, here, after);
            return Ok((sr / (lag as f64 + delta), voicing));
        }
    }
    // Unreachable in practice: the argmax itself satisfies the peak
    // conditions. Kept as a safe fallback.
    Ok((0.0, voicing))
}

/// Correlation of the window with itself shifted by `lag`, normalized
/// to [-1, 1] by the energies of the two overlapping segments.
fn normalized_correlation(x: &[f64], energy_prefix: &[f64], lag: usize) -> f64 {
    let n = x.len();
    let overlap = n - lag;
    let mut dot = 0.0f64;
    for i in 0..overlap {
        dot += x[i] * x[i + lag];
    }
    let head_energy = energy_prefix[overlap];
    let tail_energy = energy_prefix[n] - energy_prefix[lag];
    let denom = libm::sqrt(head_energy * tail_energy);
    if denom <= 0.0 {
        return 0.0;
    }
    dot / denom
}

/// Vertex offset of the parabola through three equally spaced points,
/// clamped to half a lag in either direction.
fn parabolic_offset(before: f64, here: f64, after: f64) -> f64 {
    let denom = before - 2.0 * here + after;
    if denom == 0.0 {
        return 0.0;
    }
    (0.5 * (before - after) / denom).clamp(-0.5, 0.5)
}
