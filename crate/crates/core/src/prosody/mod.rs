//! Prosodic feature extraction from speech audio.
//!
//! The audio track is cut into short overlapping analysis windows
//! (25 ms every 10 ms by default) and each window yields a loudness
//! estimate in dBFS plus a fundamental-frequency / voicing estimate.
//! These per-frame features later weight the visual and textual
//! evidence during fusion: loud, voiced speech counts for more.

mod pitch;
mod wav;

pub use pitch::estimate_f0;
pub use wav::decode_wav;

use alloc::vec::Vec;

/// Loudness assigned to digital silence, and the lower clamp for all
/// loudness values (dB relative to full scale).
pub const SILENCE_DB: f64 = -96.0;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProsodyError {
    #[error("unsupported WAV encoding: {0}")]
    UnsupportedFormat(&'static str),
    #[error("corrupt WAV file: {0}")]
    CorruptFile(&'static str),
    #[error("sample rate {0} Hz is below the 8000 Hz minimum for speech analysis")]
    SampleRateTooLow(u32),
    #[error("sample {index} is outside [-1, 1]")]
    SampleOutOfRange { index: usize },
    #[error("empty analysis window")]
    EmptyWindow,
    #[error("invalid prosody parameters: {0}")]
    InvalidParams(&'static str),
}

/// Mono audio in the range [-1, 1] with its sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioSignal {
    samples: Vec<f32>,
    sample_rate: u32,
}

impl AudioSignal {
    /// Wrap raw samples, checking the range and rate invariants.
    pub fn new(samples: Vec<f32>, sample_rate: u32) -> Result<Self, ProsodyError> {
        if sample_rate < 8000 {
            return Err(ProsodyError::SampleRateTooLow(sample_rate));
        }
        if let Some(index) = samples.iter().position(|s| !(-1.0..=1.0).contains(s)) {
            return Err(ProsodyError::SampleOutOfRange { index });
        }
        Ok(Self { samples, sample_rate })
    }

    pub fn samples(&self) -> &[f32] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    /// Duration in seconds.
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

/// Analysis parameters for [`extract_prosody`].
///
/// Deserialization fills missing fields with the defaults and rejects
/// unknown keys, so configuration typos fail loudly.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProsodyParams {
    /// Spacing between window starts, seconds.
    pub hop_s: f64,
    /// Window length, seconds; at least `hop_s`.
    pub window_s: f64,
    /// Pitch search band lower edge, Hz.
    pub f0_min_hz: f64,
    /// Pitch search band upper edge, Hz.
    pub f0_max_hz: f64,
    /// Windows whose voicing probability falls below this are treated
    /// as unvoiced (`f0_hz` = 0).
    pub voicing_threshold: f64,
}

impl Default for ProsodyParams {
    fn default() -> Self {
        Self {
            hop_s: 0.010,
            window_s: 0.025,
            f0_min_hz: 50.0,
            f0_max_hz: 500.0,
            voicing_threshold: 0.45,
        }
    }
}

impl ProsodyParams {
    // Negated comparisons are deliberate: `!(a > b)` rejects NaN,
    // which a rewritten `a <= b` would let through.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), ProsodyError> {
        if !(self.hop_s > 0.0) || !self.hop_s.is_finite() {
            return Err(ProsodyError::InvalidParams("hop must be positive"));
        }
        if !(self.window_s >= self.hop_s) || !self.window_s.is_finite() {
            return Err(ProsodyError::InvalidParams("window must be at least one hop"));
        }
        if !(self.f0_min_hz > 0.0) || !(self.f0_max_hz > self.f0_min_hz) {
            return Err(ProsodyError::InvalidParams("need 0 < f0_min < f0_max"));
        }
        if !(self.voicing_threshold > 0.0 && self.voicing_threshold <= 1.0) {
            return Err(ProsodyError::InvalidParams("voicing threshold must be in (0, 1]"));
        }
        Ok(())
    }
}

/// One analysis window cut from a signal.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameWindow {
    /// Position in the window sequence, starting at 0.
    pub index: usize,
    /// Center of the window in seconds.
    pub time: f64,
    /// Window samples; always the full window length (the final
    /// partial window is zero-padded).
    pub samples: Vec<f32>,
}

/// Per-window prosodic features.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ProsodyFrame {
    /// Window center, seconds.
    pub time: f64,
    /// Loudness in dB relative to full scale, clamped to
    /// [[`SILENCE_DB`], 0].
    pub loudness_db: f64,
    /// Fundamental frequency estimate in Hz; 0 when unvoiced.
    pub f0_hz: f64,
    /// Voicing probability in [0, 1].
    pub voicing_prob: f64,
}

/// Cut a signal into overlapping windows.
///
/// Window starts advance by `hop_s`; every start with a full window of
/// samples yields one window, and any leftover samples after the last
/// full window become one final zero-padded window. A signal shorter
/// than one window yields no windows. Window `time` is the center of
/// the window span.
pub fn frame_windows(signal: &AudioSignal, hop_s: f64, window_s: f64) -> Vec<FrameWindow> {
    let sr = signal.sample_rate as f64;
    let hop = (libm::round(hop_s * sr) as usize).max(1);
    let win = (libm::round(window_s * sr) as usize).max(1);
    let n = signal.samples.len();
    if n < win {
        return Vec::new();
    }

    let full = (n - win) / hop + 1;
    let mut windows = Vec::with_capacity(full + 1);
    for index in 0..full {
        let start = index * hop;
        windows.push(FrameWindow {
            index,
            time: (start as f64 + win as f64 / 2.0) / sr,
            samples: signal.samples[start..start + win].to_vec(),
        });
    }
    let tail_start = full * hop;
    if tail_start < n {
        let mut samples = signal.samples[tail_start..].to_vec();
        samples.resize(win, 0.0);
        windows.push(FrameWindow {
            index: full,
            time: (tail_start as f64 + win as f64 / 2.0) / sr,
            samples,
        });
    }
    windows
}

/// Root-mean-square loudness of one window in dB relative to full
/// scale, clamped to [[`SILENCE_DB`], 0]. Digital silence maps to
/// [`SILENCE_DB`].
pub fn loudness_db(window: &[f32]) -> Result<f64, ProsodyError> {
    if window.is_empty() {
        return Err(ProsodyError::EmptyWindow);
    }
    let mut energy = 0.0f64;
    for &s in window {
        energy += s as f64 * s as f64;
    }
    let rms = libm::sqrt(energy / window.len() as f64);
    if rms <= 0.0 {
        return Ok(SILENCE_DB);
    }
    Ok((20.0 * libm::log10(rms)).clamp(SILENCE_DB, 0.0))
}

/// Run the full per-window analysis over a signal.
///
/// Frames come back in time order, one per window from
/// [`frame_windows`]. A signal shorter than one window yields an empty
/// vector.
pub fn extract_prosody(
    signal: &AudioSignal,
    params: &ProsodyParams,
) -> Result<Vec<ProsodyFrame>, ProsodyError> {
    params.validate()?;
    let windows = frame_windows(signal, params.hop_s, params.window_s);
    let mut frames = Vec::with_capacity(windows.len());
    for window in &windows {
        let loudness = loudness_db(&window.samples)?;
        let (f0_hz, voicing_prob) = estimate_f0(&window.samples, signal.sample_rate, params)?;
        frames.push(ProsodyFrame { time: window.time, loudness_db: loudness, f0_hz, voicing_prob });
    }
    Ok(frames)
}
