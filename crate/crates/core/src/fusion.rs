//! Evidence fusion: fold visual emotion events and caption sentiment
//! into two tension bins and pick the larger.
//!
//! Every piece of evidence — a recognized facial emotion on a frame, a
//! non-neutral sentence — lands in either the Low or the High bin,
//! scaled by how loud and voiced the speech around it is. A quiet
//! aside counts for less than a raised voice, but never for nothing:
//! the audio weight is floored at a configurable ε so silent passages
//! cannot erase strong visual evidence. The video's label is the bin
//! with the larger sum.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::caption::Sentence;
use crate::prosody::{ProsodyFrame, SILENCE_DB};
use crate::sentiment::SentimentVector;
use crate::visual::{EmotionLabel, VisualFeatures};

/// How far a frame's visual event reaches into the prosody stream on
/// each side when computing its audio weight, in seconds.
pub const VISUAL_EVENT_HALF_SPAN_S: f64 = 0.005;

/// The two-class emotional label of a news video.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TensionLevel {
    Low,
    High,
}

impl TensionLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            TensionLevel::Low => "low",
            TensionLevel::High => "high",
        }
    }
}

/// How per-frame loudness maps to the [0, 1] factor inside the audio
/// weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoudnessNormalizationMode {
    /// Min–max over the video's own frames; robust to recording gain.
    /// A video with uniform loudness normalizes to 1.
    MinMax,
    /// Fixed mapping of the full digital range [−96, 0] dB to [0, 1];
    /// comparable across videos but gain-sensitive.
    FullScale,
}

/// Deserialization fills missing fields with the defaults and rejects
/// unknown keys, so configuration typos fail loudly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FusionConfig {
    /// Which bin each recognized emotion feeds. Must cover all seven
    /// modeled emotions; `nonexistent` never contributes and is not
    /// mapped.
    pub emotion_map: BTreeMap<EmotionLabel, TensionLevel>,
    /// ε, the lower bound of every audio weight, in (0, 1).
    pub weight_floor: f64,
    pub loudness_normalization: LoudnessNormalizationMode,
    /// Label applied when both bins hold exactly the same sum.
    pub tie_break: TensionLevel,
}

impl Default for FusionConfig {
    /// Happiness feeds Low; the six negative/high-arousal emotions
    /// feed High. ε = 0.1, per-video min–max loudness, ties → Low.
    fn default() -> Self {
        let mut emotion_map = BTreeMap::new();
        emotion_map.insert(EmotionLabel::Happiness, TensionLevel::Low);
        for emotion in [
            EmotionLabel::Surprise,
            EmotionLabel::Aversion,
            EmotionLabel::Contempt,
            EmotionLabel::Anger,
            EmotionLabel::Fear,
            EmotionLabel::Sadness,
        ] {
            emotion_map.insert(emotion, TensionLevel::High);
        }
        Self {
            emotion_map,
            weight_floor: 0.1,
            loudness_normalization: LoudnessNormalizationMode::MinMax,
            tie_break: TensionLevel::Low,
        }
    }
}

impl FusionConfig {
    pub fn validate(&self) -> Result<(), FusionError> {
        if !self.weight_floor.is_finite() || !(0.0 < self.weight_floor && self.weight_floor < 1.0) {
            return Err(FusionError::InvalidConfig("weight_floor must lie in (0, 1)"));
        }
        for emotion in EmotionLabel::MODELED {
            if !self.emotion_map.contains_key(&emotion) {
                return Err(FusionError::UnmappedEmotion(emotion));
            }
        }
        if self.emotion_map.contains_key(&EmotionLabel::Nonexistent) {
            return Err(FusionError::InvalidConfig("nonexistent must not be mapped"));
        }
        Ok(())
    }
}

/// Accumulated evidence per tension bin. Non-negative and finite.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TensionScores {
    pub low: f64,
    pub high: f64,
}

/// Bin sums split by modality. `visual + sentiment` agrees with
/// `total` per bin to within accumulation rounding (1e-9 relative).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TensionBreakdown {
    pub visual: TensionScores,
    pub sentiment: TensionScores,
    pub total: TensionScores,
}

/// Everything fusion needs to know about one video.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoFeatures {
    /// Per-frame visual features; frame indices non-decreasing.
    pub visual: Vec<VisualFeatures>,
    /// Per-window prosodic features; times non-decreasing.
    pub prosody: Vec<ProsodyFrame>,
    /// Scored caption sentences; start times non-decreasing. Empty
    /// for videos without captions.
    pub sentiments: Vec<(Sentence, SentimentVector)>,
    /// Video frame rate, used to place frame events on the timeline.
    pub fps: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FusionError {
    #[error("emotion {} has no tension mapping", .0.as_str())]
    UnmappedEmotion(EmotionLabel),
    #[error("invalid fusion config: {0}")]
    InvalidConfig(&'static str),
    #[error("invalid video features: {0}")]
    InvalidFeatures(&'static str),
}

/// Per-video loudness normalization, precomputed over the whole video
/// so that weights are independent of how the video is later split or
/// queried.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoudnessScale {
    floor_db: f64,
    range_db: f64,
}

impl LoudnessScale {
    pub fn from_prosody(frames: &[ProsodyFrame], mode: LoudnessNormalizationMode) -> Self {
        match mode {
            LoudnessNormalizationMode::FullScale => {
                Self { floor_db: SILENCE_DB, range_db: -SILENCE_DB }
            }
            LoudnessNormalizationMode::MinMax => {
                let mut min = f64::INFINITY;
                let mut max = f64::NEG_INFINITY;
                for frame in frames {
                    min = min.min(frame.loudness_db);
                    max = max.max(frame.loudness_db);
                }
                if frames.is_empty() {
                    Self { floor_db: SILENCE_DB, range_db: 0.0 }
                } else {
                    Self { floor_db: min, range_db: max - min }
                }
            }
        }
    }

    /// Map a loudness to [0, 1]. A degenerate range (uniform loudness
    /// across the video) maps everything to 1.
    pub fn normalize(&self, loudness_db: f64) -> f64 {
        if self.range_db <= 0.0 {
            return 1.0;
        }
        ((loudness_db - self.floor_db) / self.range_db).clamp(0.0, 1.0)
    }
}

/// Audio weight of the time span `[start, end]` (closed on both
/// ends): ε + (1 − ε) · mean of voicing × normalized loudness over
/// the prosody frames inside the span. A span holding no frames
/// weighs ε. Always in [ε, 1].
pub fn audio_weight(
    prosody: &[ProsodyFrame],
    start: f64,
    end: f64,
    scale: &LoudnessScale,
    config: &FusionConfig,
) -> f64 {
    let epsilon = config.weight_floor;
    let mut sum = 0.0f64;
    let mut count = 0usize;
    for frame in prosody {
        if frame.time >= start && frame.time <= end {
            sum += frame.voicing_prob * scale.normalize(frame.loudness_db);
            count += 1;
        }
    }
    if count == 0 {
        return epsilon;
    }
    let mean = (sum / count as f64).clamp(0.0, 1.0);
    epsilon + (1.0 - epsilon) * mean
}

/// Fold a video's evidence into the two bins, split by modality.
///
/// The loudness scale is derived from the video's own prosody stream;
/// use [`accumulate_with_scale`] to pin the scale externally (for
/// example when accumulating parts of a video separately).
pub fn accumulate_breakdown(
    features: &VideoFeatures,
    config: &FusionConfig,
) -> Result<TensionBreakdown, FusionError> {
    let scale = LoudnessScale::from_prosody(&features.prosody, config.loudness_normalization);
    accumulate_with_scale(features, &scale, config)
}

/// [`accumulate_breakdown`] reduced to the total bins.
pub fn accumulate(
    features: &VideoFeatures,
    config: &FusionConfig,
) -> Result<TensionScores, FusionError> {
    Ok(accumulate_breakdown(features, config)?.total)
}

/// Evidence source, also the tie order for simultaneous events.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Modality {
    Visual,
    Sentiment,
}

struct Contribution {
    time: f64,
    modality: Modality,
    level: TensionLevel,
    amount: f64,
}

/// Fold a video's evidence using a caller-supplied loudness scale.
///
/// Contributions are summed in time order (visual before sentiment on
/// equal anchors) with compensated accumulation, so results are
/// bit-for-bit reproducible for identical inputs.
pub fn accumulate_with_scale(
    features: &VideoFeatures,
    scale: &LoudnessScale,
    config: &FusionConfig,
) -> Result<TensionBreakdown, FusionError> {
    config.validate()?;
    validate_features(features)?;

    let mut contributions = Vec::with_capacity(features.visual.len() + features.sentiments.len());
    for frame in &features.visual {
        if frame.emotion == EmotionLabel::Nonexistent {
            continue;
        }
        let level = *config
            .emotion_map
            .get(&frame.emotion)
            .ok_or(FusionError::UnmappedEmotion(frame.emotion))?;
        let time = frame.frame_index as f64 / features.fps;
        let weight = audio_weight(
            &features.prosody,
            time - VISUAL_EVENT_HALF_SPAN_S,
            time + VISUAL_EVENT_HALF_SPAN_S,
            scale,
            config,
        );
        contributions.push(Contribution {
            time,
            modality: Modality::Visual,
            level,
            amount: frame.intensity * frame.field_size * weight,
        });
    }
    for (sentence, vector) in &features.sentiments {
        if vector.sum == 0 {
            continue;
        }
        let level = if vector.sum < 0 { TensionLevel::High } else { TensionLevel::Low };
        let weight = audio_weight(&features.prosody, sentence.start, sentence.end, scale, config);
        contributions.push(Contribution {
            time: sentence.start,
            modality: Modality::Sentiment,
            level,
            amount: vector.sum.unsigned_abs() as f64 * weight,
        });
    }
    // Stable sort: simultaneous events keep visual-then-sentiment
    // order, making the fold deterministic.
    contributions.sort_by(|a, b| a.time.total_cmp(&b.time));

    let mut totals = BinSums::default();
    let mut visual = BinSums::default();
    let mut sentiment = BinSums::default();
    for c in &contributions {
        totals.add(c.level, c.amount);
        match c.modality {
            Modality::Visual => visual.add(c.level, c.amount),
            Modality::Sentiment => sentiment.add(c.level, c.amount),
        }
    }
    Ok(TensionBreakdown {
        visual: visual.scores(),
        sentiment: sentiment.scores(),
        total: totals.scores(),
    })
}

/// Pick the bin with the larger sum; exact ties fall to the
/// configured side.
pub fn classify(scores: &TensionScores, config: &FusionConfig) -> TensionLevel {
    if scores.high > scores.low {
        TensionLevel::High
    } else if scores.low > scores.high {
        TensionLevel::Low
    } else {
        config.tie_break
    }
}

// `!(fps > 0.0)` is deliberate: it rejects NaN, which `fps <= 0.0`
// would let through.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn validate_features(features: &VideoFeatures) -> Result<(), FusionError> {
    if !(features.fps > 0.0) || !features.fps.is_finite() {
        return Err(FusionError::InvalidFeatures("fps must be positive and finite"));
    }
    for frame in &features.visual {
        if !frame.intensity.is_finite() || frame.intensity < 0.0 {
            return Err(FusionError::InvalidFeatures("visual intensity must be non-negative"));
        }
        if !frame.field_size.is_finite() || !(0.0..=1.0).contains(&frame.field_size) {
            return Err(FusionError::InvalidFeatures("field size must lie in [0, 1]"));
        }
    }
    let visual_ordered = features.visual.windows(2).all(|w| w[0].frame_index <= w[1].frame_index);
    if !visual_ordered {
        return Err(FusionError::InvalidFeatures("visual frames must be time-ordered"));
    }
    let prosody_ordered = features.prosody.windows(2).all(|w| w[0].time <= w[1].time);
    if !prosody_ordered {
        return Err(FusionError::InvalidFeatures("prosody frames must be time-ordered"));
    }
    let sentences_ordered = features.sentiments.windows(2).all(|w| w[0].0.start <= w[1].0.start);
    if !sentences_ordered {
        return Err(FusionError::InvalidFeatures("sentences must be time-ordered"));
    }
    Ok(())
}

/// Neumaier-compensated running sums for the two bins.
#[derive(Default)]
struct BinSums {
    low: CompensatedSum,
    high: CompensatedSum,
}

impl BinSums {
    fn add(&mut self, level: TensionLevel, amount: f64) {
        match level {
            TensionLevel::Low => self.low.add(amount),
            TensionLevel::High => self.high.add(amount),
        }
    }

    fn scores(&self) -> TensionScores {
        TensionScores { low: self.low.value(), high: self.high.value() }
    }
}

#[derive(Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, value: f64) {
        let new_sum = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - new_sum) + value;
        } else {
            self.compensation += (value - new_sum) + self.sum;
        }
        self.sum = new_sum;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sentiment::Polarity;
    use alloc::string::ToString;
    use alloc::vec;
    use approx::assert_relative_eq;

    fn frame(time: f64, loudness_db: f64, f0_hz: f64, voicing_prob: f64) -> ProsodyFrame {
        ProsodyFrame { time, loudness_db, f0_hz, voicing_prob }
    }

    fn visual(
        frame_index: u32,
        emotion: EmotionLabel,
        intensity: f64,
        field_size: f64,
    ) -> VisualFeatures {
        VisualFeatures { frame_index, emotion, intensity, field_size }
    }

    fn scored_sentence(start: f64, end: f64, sum: i32) -> (Sentence, SentimentVector) {
        let polarity = match sum.signum() {
            1 => Polarity::Positive,
            -1 => Polarity::Negative,
            _ => Polarity::Neutral,
        };
        let scores = vec![polarity; sum.unsigned_abs() as usize];
        let vector = SentimentVector::new(scores);
        assert_eq!(vector.sum, sum);
        (Sentence { text: "t".to_string(), start, end, source_cue: 1 }, vector)
    }

    fn empty_features() -> VideoFeatures {
        VideoFeatures { visual: vec![], prosody: vec![], sentiments: vec![], fps: 25.0 }
    }

    #[test]
    fn default_config_is_valid_and_maps_happiness_low() {
        let config = FusionConfig::default();
        config.validate().unwrap();
        assert_eq!(config.emotion_map[&EmotionLabel::Happiness], TensionLevel::Low);
        for emotion in [
            EmotionLabel::Surprise,
            EmotionLabel::Aversion,
            EmotionLabel::Contempt,
            EmotionLabel::Anger,
            EmotionLabel::Fear,
            EmotionLabel::Sadness,
        ] {
            assert_eq!(config.emotion_map[&emotion], TensionLevel::High);
        }
        assert_eq!(config.weight_floor, 0.1);
        assert_eq!(config.tie_break, TensionLevel::Low);
    }

    #[test]
    fn config_validation_catches_bad_values() {
        let mut config = FusionConfig { weight_floor: 0.0, ..FusionConfig::default() };
        assert!(matches!(config.validate(), Err(FusionError::InvalidConfig(_))));
        config.weight_floor = 1.0;
        assert!(matches!(config.validate(), Err(FusionError::InvalidConfig(_))));

        let mut config = FusionConfig::default();
        config.emotion_map.remove(&EmotionLabel::Sadness);
        assert_eq!(config.validate(), Err(FusionError::UnmappedEmotion(EmotionLabel::Sadness)));
    }

    #[test]
    fn audio_weight_floors_silence_at_epsilon() {
        let config = FusionConfig::default();
        let prosody = vec![frame(0.01, SILENCE_DB, 0.0, 0.0), frame(0.02, SILENCE_DB, 0.0, 0.0)];
        let scale = LoudnessScale::from_prosody(&prosody, LoudnessNormalizationMode::MinMax);
        assert_eq!(audio_weight(&prosody, 0.0, 0.1, &scale, &config), 0.1);
    }

    #[test]
    fn audio_weight_peaks_at_one() {
        let config = FusionConfig::default();
        // Loudness varies so min–max has a real range; the span under
        // test covers only the loud, fully voiced frames.
        let prosody = vec![
            frame(0.01, -40.0, 0.0, 0.0),
            frame(0.50, -3.0, 200.0, 1.0),
            frame(0.51, -3.0, 210.0, 1.0),
        ];
        let scale = LoudnessScale::from_prosody(&prosody, LoudnessNormalizationMode::MinMax);
        assert_relative_eq!(audio_weight(&prosody, 0.45, 0.55, &scale, &config), 1.0);
    }

    #[test]
    fn audio_weight_outside_timeline_is_epsilon() {
        let config = FusionConfig::default();
        let prosody = vec![frame(0.5, -10.0, 100.0, 1.0)];
        let scale = LoudnessScale::from_prosody(&prosody, LoudnessNormalizationMode::MinMax);
        assert_eq!(audio_weight(&prosody, 10.0, 11.0, &scale, &config), 0.1);
        assert_eq!(audio_weight(&[], 0.0, 1.0, &scale, &config), 0.1);
    }

    #[test]
    fn span_boundaries_are_inclusive() {
        let config = FusionConfig::default();
        let prosody = vec![frame(1.0, -10.0, 100.0, 1.0)];
        let scale = LoudnessScale::from_prosody(&prosody, LoudnessNormalizationMode::MinMax);
        // Uniform loudness normalizes to 1; the single frame sits
        // exactly on each span edge.
        assert_relative_eq!(audio_weight(&prosody, 1.0, 2.0, &scale, &config), 1.0);
        assert_relative_eq!(audio_weight(&prosody, 0.0, 1.0, &scale, &config), 1.0);
    }

    #[test]
    fn full_scale_mode_uses_fixed_range() {
        let scale = LoudnessScale::from_prosody(
            &[frame(0.0, -48.0, 0.0, 0.0)],
            LoudnessNormalizationMode::FullScale,
        );
        assert_relative_eq!(scale.normalize(-48.0), 0.5);
        assert_relative_eq!(scale.normalize(0.0), 1.0);
        assert_relative_eq!(scale.normalize(SILENCE_DB), 0.0);
    }

    #[test]
    fn single_happy_frame_lands_in_low() {
        // Uniform loud, fully voiced prosody makes the weight exactly 1.
        let features = VideoFeatures {
            visual: vec![visual(0, EmotionLabel::Happiness, 2.0, 0.5)],
            prosody: vec![frame(0.0, -10.0, 150.0, 1.0)],
            sentiments: vec![],
            fps: 25.0,
        };
        let scores = accumulate(&features, &FusionConfig::default()).unwrap();
        assert_relative_eq!(scores.low, 1.0);
        assert_eq!(scores.high, 0.0);
    }

    #[test]
    fn negative_sentence_lands_in_high_scaled_by_weight() {
        let config = FusionConfig::default();
        // No prosody at all: every span weighs ε = 0.1.
        let features = VideoFeatures {
            visual: vec![],
            prosody: vec![],
            sentiments: vec![scored_sentence(0.0, 2.0, -5)],
            fps: 25.0,
        };
        let scores = accumulate(&features, &config).unwrap();
        assert_eq!(scores.low, 0.0);
        assert_relative_eq!(scores.high, 0.5);

        // Fully voiced, uniform loudness: weight 1 → the whole |sum|.
        let features = VideoFeatures { prosody: vec![frame(1.0, -6.0, 120.0, 1.0)], ..features };
        let scores = accumulate(&features, &config).unwrap();
        assert_relative_eq!(scores.high, 5.0);
    }

    #[test]
    fn positive_sentence_lands_in_low() {
        let features = VideoFeatures {
            visual: vec![],
            prosody: vec![],
            sentiments: vec![scored_sentence(0.0, 1.0, 2)],
            fps: 25.0,
        };
        let scores = accumulate(&features, &FusionConfig::default()).unwrap();
        assert_relative_eq!(scores.low, 0.2);
        assert_eq!(scores.high, 0.0);
    }

    #[test]
    fn neutral_sentences_and_nonexistent_frames_contribute_nothing() {
        let features = VideoFeatures {
            visual: vec![visual(0, EmotionLabel::Nonexistent, 0.0, 0.0)],
            prosody: vec![frame(0.0, -10.0, 150.0, 1.0)],
            sentiments: vec![scored_sentence(0.0, 1.0, 0)],
            fps: 25.0,
        };
        let scores = accumulate(&features, &FusionConfig::default()).unwrap();
        assert_eq!(scores, TensionScores { low: 0.0, high: 0.0 });
    }

    #[test]
    fn empty_features_accumulate_to_zero() {
        let scores = accumulate(&empty_features(), &FusionConfig::default()).unwrap();
        assert_eq!(scores, TensionScores { low: 0.0, high: 0.0 });
    }

    #[test]
    fn unmapped_emotion_is_a_config_error() {
        let mut config = FusionConfig::default();
        config.emotion_map.remove(&EmotionLabel::Fear);
        let features = VideoFeatures {
            visual: vec![visual(0, EmotionLabel::Fear, 1.0, 0.5)],
            prosody: vec![],
            sentiments: vec![],
            fps: 25.0,
        };
        assert_eq!(
            accumulate(&features, &config),
            Err(FusionError::UnmappedEmotion(EmotionLabel::Fear))
        );
    }

    #[test]
    fn invalid_features_are_rejected() {
        let mut features = empty_features();
        features.fps = 0.0;
        assert!(matches!(
            accumulate(&features, &FusionConfig::default()),
            Err(FusionError::InvalidFeatures(_))
        ));

        let features = VideoFeatures {
            visual: vec![visual(0, EmotionLabel::Fear, f64::NAN, 0.5)],
            prosody: vec![],
            sentiments: vec![],
            fps: 25.0,
        };
        assert!(matches!(
            accumulate(&features, &FusionConfig::default()),
            Err(FusionError::InvalidFeatures(_))
        ));

        let features = VideoFeatures {
            visual: vec![
                visual(5, EmotionLabel::Fear, 1.0, 0.5),
                visual(0, EmotionLabel::Fear, 1.0, 0.5),
            ],
            prosody: vec![],
            sentiments: vec![],
            fps: 25.0,
        };
        assert!(matches!(
            accumulate(&features, &FusionConfig::default()),
            Err(FusionError::InvalidFeatures(_))
        ));
    }

    #[test]
    fn breakdown_subtotals_match_totals() {
        let features = VideoFeatures {
            visual: vec![
                visual(0, EmotionLabel::Anger, 1.5, 0.3),
                visual(10, EmotionLabel::Happiness, 0.8, 0.2),
                visual(20, EmotionLabel::Fear, 2.0, 0.1),
            ],
            prosody: vec![
                frame(0.0, -30.0, 0.0, 0.2),
                frame(0.4, -10.0, 150.0, 0.9),
                frame(0.8, -5.0, 180.0, 1.0),
            ],
            sentiments: vec![scored_sentence(0.1, 0.5, -2), scored_sentence(0.6, 0.9, 1)],
            fps: 25.0,
        };
        let breakdown = accumulate_breakdown(&features, &FusionConfig::default()).unwrap();
        assert_relative_eq!(
            breakdown.visual.low + breakdown.sentiment.low,
            breakdown.total.low,
            max_relative = 1e-9
        );
        assert_relative_eq!(
            breakdown.visual.high + breakdown.sentiment.high,
            breakdown.total.high,
            max_relative = 1e-9
        );
        assert!(breakdown.total.low > 0.0 && breakdown.total.high > 0.0);
    }

    #[test]
    fn removing_captions_reproduces_the_no_caption_path() {
        let with_captions = VideoFeatures {
            visual: vec![visual(0, EmotionLabel::Anger, 1.5, 0.3)],
            prosody: vec![frame(0.0, -10.0, 150.0, 0.9), frame(0.5, -20.0, 0.0, 0.1)],
            sentiments: vec![scored_sentence(0.1, 0.5, -2)],
            fps: 25.0,
        };
        let without_captions = VideoFeatures { sentiments: vec![], ..with_captions.clone() };

        let config = FusionConfig::default();
        let full = accumulate_breakdown(&with_captions, &config).unwrap();
        let bare = accumulate_breakdown(&without_captions, &config).unwrap();
        assert_eq!(bare.sentiment, TensionScores { low: 0.0, high: 0.0 });
        assert_eq!(bare.total, bare.visual);
        assert_eq!(bare.visual, full.visual);
    }

    #[test]
    fn accumulation_is_bit_for_bit_deterministic() {
        let features = VideoFeatures {
            visual: (0..50)
                .map(|i| visual(i, EmotionLabel::MODELED[i as usize % 7], 0.1 * i as f64, 0.01))
                .collect(),
            prosody: (0..100)
                .map(|i| frame(i as f64 * 0.01, -30.0 + i as f64 * 0.2, 100.0, 0.5))
                .collect(),
            sentiments: vec![scored_sentence(0.1, 0.4, -2), scored_sentence(0.5, 0.9, 2)],
            fps: 25.0,
        };
        let config = FusionConfig::default();
        let a = accumulate(&features, &config).unwrap();
        let b = accumulate(&features, &config).unwrap();
        assert_eq!(a.low.to_bits(), b.low.to_bits());
        assert_eq!(a.high.to_bits(), b.high.to_bits());
    }

    #[test]
    fn accumulate_is_additive_over_anchor_partitions() {
        // Split events at an anchor timestamp; both halves keep the
        // whole prosody stream and the video-level loudness scale, so
        // each event's weight is identical in the part and the whole.
        let features = VideoFeatures {
            visual: (0..40)
                .map(|i| {
                    visual(i, EmotionLabel::MODELED[i as usize % 7], 1.0 + i as f64 * 0.1, 0.05)
                })
                .collect(),
            prosody: (0..160)
                .map(|i| {
                    frame(i as f64 * 0.01, -40.0 + (i % 30) as f64, 120.0, (i % 10) as f64 / 10.0)
                })
                .collect(),
            sentiments: vec![
                scored_sentence(0.2, 0.5, -2),
                scored_sentence(0.7, 1.0, 1),
                scored_sentence(1.2, 1.5, -1),
            ],
            fps: 25.0,
        };
        let config = FusionConfig::default();
        let scale = LoudnessScale::from_prosody(&features.prosody, config.loudness_normalization);
        let whole = accumulate_with_scale(&features, &scale, &config).unwrap();

        for split_at in [0.0, 0.3, 0.81, 1.3, 10.0] {
            let before = VideoFeatures {
                visual: features
                    .visual
                    .iter()
                    .copied()
                    .filter(|v| (v.frame_index as f64 / features.fps) <= split_at)
                    .collect(),
                prosody: features.prosody.clone(),
                sentiments: features
                    .sentiments
                    .iter()
                    .filter(|(s, _)| s.start <= split_at)
                    .cloned()
                    .collect(),
                fps: features.fps,
            };
            let after = VideoFeatures {
                visual: features
                    .visual
                    .iter()
                    .copied()
                    .filter(|v| (v.frame_index as f64 / features.fps) > split_at)
                    .collect(),
                prosody: features.prosody.clone(),
                sentiments: features
                    .sentiments
                    .iter()
                    .filter(|(s, _)| s.start > split_at)
                    .cloned()
                    .collect(),
                fps: features.fps,
            };
            let a = accumulate_with_scale(&before, &scale, &config).unwrap();
            let b = accumulate_with_scale(&after, &scale, &config).unwrap();
            assert_relative_eq!(a.total.low + b.total.low, whole.total.low, max_relative = 1e-9);
            assert_relative_eq!(a.total.high + b.total.high, whole.total.high, max_relative = 1e-9);
        }
    }

    #[test]
    fn classify_picks_larger_bin_and_breaks_ties() {
        let config = FusionConfig::default();
        assert_eq!(classify(&TensionScores { low: 1.0, high: 0.0 }, &config), TensionLevel::Low);
        assert_eq!(classify(&TensionScores { low: 0.0, high: 2.5 }, &config), TensionLevel::High);
        assert_eq!(classify(&TensionScores { low: 0.0, high: 0.0 }, &config), TensionLevel::Low);
        let mut high_ties = config.clone();
        high_ties.tie_break = TensionLevel::High;
        assert_eq!(
            classify(&TensionScores { low: 0.0, high: 0.0 }, &high_ties),
            TensionLevel::High
        );
    }

    #[test]
    fn classification_is_invariant_under_positive_scaling() {
        let config = FusionConfig::default();
        let base = TensionScores { low: 0.4, high: 0.9 };
        let label = classify(&base, &config);
        for factor in [1e-6, 0.5, 3.0, 1e9] {
            let scaled = TensionScores { low: base.low * factor, high: base.high * factor };
            assert_eq!(classify(&scaled, &config), label);
        }
    }

    #[test]
    fn config_round_trips_through_serialization() {
        let config = FusionConfig::default();
        let json = serde_json::to_string(&config).unwrap();
        assert!(json.contains(r#""happiness":"low""#));
        assert!(json.contains(r#""loudness_normalization":"min-max""#));
        let back: FusionConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, config);
    }
}
