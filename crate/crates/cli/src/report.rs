//! Report record schema: line-delimited JSON, one self-describing
//! record per line (`"record"` names the kind). Analysis reports open
//! with a `run` header embedding the full effective configuration,
//! followed by one `video` record per manifest entry in manifest
//! order. Evaluation reports carry `evaluation`, `agreement`,
//! `accuracy` and `t_test` records.

use std::io::Write;

use anyhow::{Context, Result};
use newstension_core::fusion::{TensionLevel, TensionScores};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

/// Bumped whenever a record shape changes incompatibly.
pub const SCHEMA_VERSION: u32 = 1;

/// One line of an analysis report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum ReportRecord {
    Run(RunHeader),
    Video(VideoRecord),
}

/// First record of every analysis report: what produced it and with
/// which (fully resolved) settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunHeader {
    pub schema_version: u32,
    pub config: RunConfig,
    /// Resolved scorer names in ensemble order.
    pub scorers: Vec<String>,
    /// Ensemble size K; per-sentence sums lie in [-K, K].
    pub ensemble_size: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VideoStatus {
    Ok,
    Failed,
}

/// Per-modality bin sums; each pair adds up to the video's total
/// scores within 1e-9.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubTotals {
    pub visual: TensionScores,
    pub sentiment: TensionScores,
}

/// Feature summary statistics for one analyzed video. Means over empty
/// streams are reported as null rather than invented.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSummary {
    /// Annotated visual frames.
    pub frames: usize,
    /// Scored caption sentences.
    pub sentences: usize,
    pub mean_field_size: Option<f64>,
    pub mean_loudness_db: Option<f64>,
    /// Sum of all per-sentence sentiment sums.
    pub total_sentiment: i64,
}

/// One video's analysis outcome. Failed videos keep their manifest
/// position and carry the error text instead of results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VideoRecord {
    pub video_id: String,
    pub status: VideoStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<TensionLevel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scores: Option<TensionScores>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breakdown: Option<SubTotals>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<FeatureSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl VideoRecord {
    pub fn failed(video_id: &str, error: String) -> Self {
        Self {
            video_id: video_id.to_string(),
            status: VideoStatus::Failed,
            level: None,
            scores: None,
            breakdown: None,
            summary: None,
            error: Some(error),
        }
    }
}

/// One line of an evaluation report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum EvalRecord {
    Evaluation(EvaluationHeader),
    Agreement(AgreementRecord),
    Accuracy(AccuracyRecord),
    TTest(TTestRecord),
}

/// First record of an evaluation report: scope and calibration notes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationHeader {
    pub schema_version: u32,
    /// Approaches compared, proposed method first.
    pub approaches: Vec<String>,
    pub videos_in_reports: usize,
    pub videos_failed: usize,
    /// Videos with both a successful report and annotations.
    pub videos_evaluated: usize,
    /// Videos with a strict-majority gold label.
    pub gold_videos: usize,
    /// Gold videos with unanimous annotators.
    pub concordant_videos: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_size_calibration: Option<CalibrationRecord>,
}

/// How the field-size baseline threshold was chosen. The sweep runs on
/// the evaluation videos themselves (resubstitution), so the baseline
/// is given its best case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRecord {
    pub method: String,
    pub threshold: f64,
    pub training_accuracy: f64,
}

/// Inter-annotator agreement over the evaluated videos.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgreementRecord {
    pub videos: usize,
    pub unanimous: usize,
    pub at_three_quarters: usize,
    pub other_majority: usize,
    pub tied: usize,
    pub full_agreement_rate: f64,
    pub rate_at_three_quarters: f64,
}

/// Accuracy over one denominator: how many videos and the fraction
/// predicted correctly; null accuracy when the denominator is empty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracyCell {
    pub videos: usize,
    pub accuracy: Option<f64>,
}

/// One approach's accuracy on both denominators: all strict-majority
/// videos and the unanimous (concordant) subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyRecord {
    pub approach: String,
    pub all_majority: AccuracyCell,
    pub concordant: AccuracyCell,
}

/// Paired t-test between two approaches' per-video correctness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TTestRecord {
    pub left: String,
    pub right: String,
    /// Which gold set the correctness vectors cover.
    pub denominator: String,
    pub videos: usize,
    #[serde(serialize_with = "serialize_t", deserialize_with = "deserialize_t")]
    pub t: f64,
    pub df: usize,
    pub p_two_sided: f64,
}

/// JSON has no infinity literal; a constant nonzero correctness
/// difference (t = ±∞) is written as a signed string instead of the
/// silent null serde_json would produce.
fn serialize_t<S: serde::Serializer>(t: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    if t.is_finite() {
        serializer.serialize_f64(*t)
    } else if *t > 0.0 {
        serializer.serialize_str("+inf")
    } else {
        serializer.serialize_str("-inf")
    }
}

fn deserialize_t<'de, D: serde::Deserializer<'de>>(deserializer: D) -> Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }
    match Repr::deserialize(deserializer)? {
        Repr::Number(t) => Ok(t),
        Repr::Text(s) if s == "+inf" => Ok(f64::INFINITY),
        Repr::Text(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
        Repr::Text(s) => Err(serde::de::Error::custom(format!("invalid t value {s:?}"))),
    }
}

/// Append one record as a JSON line.
pub fn write_record<W: Write, R: Serialize>(writer: &mut W, record: &R) -> Result<()> {
    let line = serde_json::to_string(record).context("serializing report record")?;
    writer.write_all(line.as_bytes())?;
    writer.write_all(b"\n")?;
    Ok(())
}

/// Parse an analysis report: the run header plus all video records.
pub fn read_report(text: &str) -> Result<(Option<RunHeader>, Vec<VideoRecord>)> {
    let mut header = None;
    let mut videos = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: ReportRecord =
            serde_json::from_str(line).with_context(|| format!("report line {}", line_no + 1))?;
        match record {
            ReportRecord::Run(run) => {
                if header.replace(run).is_some() {
                    anyhow::bail!("report line {}: second run header", line_no + 1);
                }
            }
            ReportRecord::Video(video) => videos.push(video),
        }
    }
    Ok((header, videos))
}
