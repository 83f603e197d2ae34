//! Evaluation protocol: annotator agreement, gold labels by majority
//! vote, accuracy, single-feature baselines and the paired t-test.
//!
//! Ground truth comes from several human annotators per video. A
//! video's gold label is the strict majority of its votes; an even
//! split abstains and the video drops out of every accuracy
//! denominator. Accuracy is reported both over all majority-labeled
//! videos and over the concordance subset where annotators were
//! unanimous.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::fusion::TensionLevel;
use crate::stats::student_t_two_sided_p;

/// One annotator's verdict on one video.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub video_id: String,
    pub annotator_id: String,
    pub label: TensionLevel,
}

/// Majority-vote ground truth for one video.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldLabel {
    pub video_id: String,
    pub label: TensionLevel,
    /// Fraction of annotators who voted for `label`; in (0.5, 1.0].
    pub agreement: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("no annotation records given")]
    EmptyRecords,
    #[error("records mix video {expected:?} with video {found:?}")]
    MixedVideoIds { expected: String, found: String },
    #[error("annotator {annotator_id:?} voted twice on video {video_id:?}")]
    DuplicateAnnotation { video_id: String, annotator_id: String },
    #[error("no prediction for video {video_id:?}")]
    MissingPrediction { video_id: String },
    #[error("no majority-labeled videos to evaluate")]
    NoGoldVideos,
    #[error("paired samples differ in length: {left} vs {right}")]
    SampleLengthMismatch { left: usize, right: usize },
    #[error("paired t-test needs at least 2 samples, got {count}")]
    TooFewSamples { count: usize },
}

/// Strict-majority label for one video's records.
///
/// Returns `Ok(None)` when the vote splits evenly (abstention).
/// All records must belong to the same video, one vote per annotator.
pub fn majority_label(records: &[AnnotationRecord]) -> Result<Option<GoldLabel>, EvalError> {
    let first = records.first().ok_or(EvalError::EmptyRecords)?;
    let mut seen_annotators = BTreeSet::new();
    let mut high_votes = 0usize;
    for record in records {
        if record.video_id != first.video_id {
            return Err(EvalError::MixedVideoIds {
                expected: first.video_id.clone(),
                found: record.video_id.clone(),
            });
        }
        if !seen_annotators.insert(record.annotator_id.as_str()) {
            return Err(EvalError::DuplicateAnnotation {
                video_id: record.video_id.clone(),
                annotator_id: record.annotator_id.clone(),
            });
        }
        if record.label == TensionLevel::High {
            high_votes += 1;
        }
    }
    let total = records.len();
    let low_votes = total - high_votes;
    let (label, votes) = if high_votes > low_votes {
        (TensionLevel::High, high_votes)
    } else if low_votes > high_votes {
        (TensionLevel::Low, low_votes)
    } else {
        return Ok(None);
    };
    Ok(Some(GoldLabel {
        video_id: first.video_id.clone(),
        label,
        agreement: votes as f64 / total as f64,
    }))
}

/// Group records by video and take each video's strict majority.
/// Abstaining (evenly split) videos are omitted. Output is sorted by
/// video id.
pub fn gold_labels(records: &[AnnotationRecord]) -> Result<Vec<GoldLabel>, EvalError> {
    let mut labels = Vec::new();
    for (_, group) in group_by_video(records)? {
        if let Some(gold) = majority_label(&group)? {
            labels.push(gold);
        }
    }
    Ok(labels)
}

/// Gold rows with unanimous annotators.
pub fn concordant_subset(gold: &[GoldLabel]) -> Vec<GoldLabel> {
    gold.iter().filter(|g| g.agreement == 1.0).cloned().collect()
}

/// Agreement bucket counts across all videos. The four buckets
/// partition the videos.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementCounts {
    pub videos: usize,
    /// All annotators agreed.
    pub unanimous: usize,
    /// Agreement exactly 3/4 (e.g. 3-of-4 votes).
    pub at_three_quarters: usize,
    /// Strict majority at any other agreement level.
    pub other_majority: usize,
    /// Even splits; no gold label.
    pub tied: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgreementStats {
    /// Share of videos with unanimous annotations.
    pub full_agreement_rate: f64,
    /// Share of videos at exactly 3/4 agreement.
    pub rate_at_three_quarters: f64,
    pub counts: AgreementCounts,
}

/// Agreement statistics over a whole annotation set.
pub fn agreement_stats(records: &[AnnotationRecord]) -> Result<AgreementStats, EvalError> {
    let groups = group_by_video(records)?;
    let mut counts = AgreementCounts {
        videos: groups.len(),
        unanimous: 0,
        at_three_quarters: 0,
        other_majority: 0,
        tied: 0,
    };
    for group in groups.values() {
        let total = group.len();
        match majority_label(group)? {
            None => counts.tied += 1,
            Some(gold) => {
                // Integer arithmetic so "exactly 3/4" is exact.
                let votes = libm::round(gold.agreement * total as f64) as usize;
                if votes == total {
                    counts.unanimous += 1;
                } else if 4 * votes == 3 * total {
                    counts.at_three_quarters += 1;
                } else {
                    counts.other_majority += 1;
                }
            }
        }
    }
    Ok(AgreementStats {
        full_agreement_rate: counts.unanimous as f64 / counts.videos as f64,
        rate_at_three_quarters: counts.at_three_quarters as f64 / counts.videos as f64,
        counts,
    })
}

fn group_by_video(
    records: &[AnnotationRecord],
) -> Result<BTreeMap<String, Vec<AnnotationRecord>>, EvalError> {
    if records.is_empty() {
        return Err(EvalError::EmptyRecords);
    }
    let mut groups: BTreeMap<String, Vec<AnnotationRecord>> = BTreeMap::new();
    for record in records {
        groups.entry(record.video_id.clone()).or_default().push(record.clone());
    }
    Ok(groups)
}

/// Fraction of gold videos whose prediction matches. Every gold video
/// must have a prediction.
pub fn accuracy(
    predictions: &BTreeMap<String, TensionLevel>,
    gold: &[GoldLabel],
) -> Result<f64, EvalError> {
    if gold.is_empty() {
        return Err(EvalError::NoGoldVideos);
    }
    let mut correct = 0usize;
    for row in gold {
        let predicted = predictions
            .get(&row.video_id)
            .ok_or_else(|| EvalError::MissingPrediction { video_id: row.video_id.clone() })?;
        if *predicted == row.label {
            correct += 1;
        }
    }
    Ok(correct as f64 / gold.len() as f64)
}

/// Field-size baseline: a video whose mean field size reaches the
/// threshold is predicted High (big faces, tight shots), otherwise
/// Low.
pub fn predict_by_field_size(
    mean_field_sizes: &BTreeMap<String, f64>,
    threshold: f64,
) -> BTreeMap<String, TensionLevel> {
    mean_field_sizes
        .iter()
        .map(|(video_id, &mean)| {
            let label = if mean >= threshold { TensionLevel::High } else { TensionLevel::Low };
            (video_id.clone(), label)
        })
        .collect()
}

/// Result of the exhaustive field-size threshold sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCalibration {
    pub threshold: f64,
    pub accuracy: f64,
}

/// Exhaustively sweep the field-size threshold and keep the most
/// accurate one (smallest threshold on ties).
///
/// Candidate thresholds are the distinct mean values themselves plus
/// one sentinel above the maximum: together these realize every
/// labeling the ≥-rule can produce.
pub fn calibrate_field_size_threshold(
    mean_field_sizes: &BTreeMap<String, f64>,
    gold: &[GoldLabel],
) -> Result<ThresholdCalibration, EvalError> {
    if gold.is_empty() {
        return Err(EvalError::NoGoldVideos);
    }
    let mut candidates: Vec<f64> = Vec::with_capacity(gold.len() + 1);
    for row in gold {
        let mean = mean_field_sizes
            .get(&row.video_id)
            .ok_or_else(|| EvalError::MissingPrediction { video_id: row.video_id.clone() })?;
        candidates.push(*mean);
    }
    let max = candidates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    candidates.push(max + 1.0);
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let mut best: Option<ThresholdCalibration> = None;
    for &threshold in &candidates {
        let predictions = predict_by_field_size(mean_field_sizes, threshold);
        let acc = accuracy(&predictions, gold)?;
        if best.is_none_or(|b| acc > b.accuracy) {
            best = Some(ThresholdCalibration { threshold, accuracy: acc });
        }
    }
    Ok(best.expect("candidate list is non-empty"))
}

/// Sentiment baseline: negative total sentiment predicts High
/// tension, zero or positive predicts Low.
pub fn predict_by_sentiment(
    total_sentiments: &BTreeMap<String, i64>,
) -> BTreeMap<String, TensionLevel> {
    total_sentiments
        .iter()
        .map(|(video_id, &total)| {
            let label = if total < 0 { TensionLevel::High } else { TensionLevel::Low };
            (video_id.clone(), label)
        })
        .collect()
}

/// Paired t-test outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairedTTest {
    pub t: f64,
    pub df: usize,
    pub p_two_sided: f64,
}

/// Two-sided paired t-test over two same-length samples (typically
/// per-video 0/1 correctness of two approaches, in the same video
/// order).
///
/// Zero-variance differences short-circuit: identical samples give
/// t = 0, p = 1; a constant nonzero difference gives t = ±∞, p = 0.
pub fn paired_t_test(x: &[f64], y: &[f64]) -> Result<PairedTTest, EvalError> {
    if x.len() != y.len() {
        return Err(EvalError::SampleLengthMismatch { left: x.len(), right: y.len() });
    }
    let n = x.len();
    if n < 2 {
        return Err(EvalError::TooFewSamples { count: n });
    }
    let differences: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let n_f = n as f64;
    let mean = differences.iter().sum::<f64>() / n_f;
    let variance = differences.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n_f - 1.0);
    let df = n - 1;

    if variance == 0.0 {
        return Ok(if mean == 0.0 {
            PairedTTest { t: 0.0, df, p_two_sided: 1.0 }
        } else {
            let t = if mean > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
            PairedTTest { t, df, p_two_sided: 0.0 }
        });
    }
    let t = mean / libm::sqrt(variance / n_f);
    Ok(PairedTTest { t, df, p_two_sided: student_t_two_sided_p(t, df as f64) })
}
