//! Evaluation of finished analysis reports against multi-annotator
//! ground truth: agreement statistics, accuracy of the fused method
//! and the enabled single-feature baselines on two denominators (all
//! strict-majority videos, and the unanimous subset), plus pairwise
//! paired t-tests on per-video correctness.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use newstension_core::eval::{
    agreement_stats, calibrate_field_size_threshold, concordant_subset, gold_labels, paired_t_test,
    predict_by_field_size, predict_by_sentiment, AnnotationRecord, GoldLabel,
};
use newstension_core::fusion::TensionLevel;
use serde::Deserialize;

use crate::report::{
    read_report, AccuracyCell, AccuracyRecord, AgreementRecord, CalibrationRecord, EvalRecord,
    EvaluationHeader, TTestRecord, VideoRecord, VideoStatus, SCHEMA_VERSION,
};

/// Single-feature baselines that can be enabled alongside the fused
/// method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Baseline {
    /// Threshold on the mean field size, threshold swept for best
    /// accuracy on the evaluation videos themselves.
    FieldSize,
    /// Sign of the total sentiment sum: negative predicts High.
    Sentiment,
}

/// Evaluate a report file against an annotations file, writing the
/// evaluation records to `writer`.
pub fn run_evaluate<W: Write>(
    reports_path: &Path,
    annotations_path: &Path,
    baselines: &[Baseline],
    writer: &mut W,
) -> Result<()> {
    let report_text = fs::read_to_string(reports_path)
        .with_context(|| format!("reading reports {}", reports_path.display()))?;
    let (header, videos) = read_report(&report_text)
        .with_context(|| format!("parsing reports {}", reports_path.display()))?;
    if header.is_none() {
        log::warn!("reports {} carry no run header", reports_path.display());
    }
    let annotations = load_annotations(annotations_path)?;
    evaluate_reports(&videos, &annotations, baselines, writer)
}

/// One row of the annotations CSV.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnnotationRow {
    video_id: String,
    annotator_id: String,
    label: String,
}

/// Read `video_id,annotator_id,label` rows; labels must be exactly
/// `low` or `high`.
pub fn load_annotations(path: &Path) -> Result<Vec<AnnotationRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("reading annotations {}", path.display()))?;
    let mut records = Vec::new();
    for (row_no, row) in reader.deserialize::<AnnotationRow>().enumerate() {
        let row =
            row.with_context(|| format!("annotations {}: row {}", path.display(), row_no + 1))?;
        let label = match row.label.as_str() {
            "low" => TensionLevel::Low,
            "high" => TensionLevel::High,
            other => bail!(
                "annotations {}: row {}: label must be \"low\" or \"high\", got {other:?}",
                path.display(),
                row_no + 1
            ),
        };
        records.push(AnnotationRecord {
            video_id: row.video_id,
            annotator_id: row.annotator_id,
            label,
        });
    }
    if records.is_empty() {
        bail!("annotations {} contain no rows", path.display());
    }
    Ok(records)
}

/// The core of `evaluate`, over already-parsed inputs.
pub fn evaluate_reports<W: Write>(
    videos: &[VideoRecord],
    annotations: &[AnnotationRecord],
    baselines: &[Baseline],
    writer: &mut W,
) -> Result<()> {
    // Partition report videos and collect per-video evaluation inputs.
    let mut fused: BTreeMap<String, TensionLevel> = BTreeMap::new();
    let mut mean_field_sizes: BTreeMap<String, f64> = BTreeMap::new();
    let mut total_sentiments: BTreeMap<String, i64> = BTreeMap::new();
    let mut failed_ids: BTreeSet<&str> = BTreeSet::new();
    for video in videos {
        if video.status == VideoStatus::Failed {
            log::warn!("excluding failed video {:?} from evaluation", video.video_id);
            failed_ids.insert(&video.video_id);
            continue;
        }
        let level = video
            .level
            .with_context(|| format!("video {:?} has status ok but no level", video.video_id))?;
        if fused.insert(video.video_id.clone(), level).is_some() {
            bail!("duplicate report record for video {:?}", video.video_id);
        }
        if let Some(summary) = &video.summary {
            if let Some(mean) = summary.mean_field_size {
                mean_field_sizes.insert(video.video_id.clone(), mean);
            }
            total_sentiments.insert(video.video_id.clone(), summary.total_sentiment);
        }
    }

    // Keep annotations that match a successfully analyzed video.
    let mut kept: Vec<AnnotationRecord> = Vec::with_capacity(annotations.len());
    for record in annotations {
        if fused.contains_key(&record.video_id) {
            kept.push(record.clone());
        } else if failed_ids.contains(record.video_id.as_str()) {
            log::warn!("skipping annotations for failed video {:?}", record.video_id);
        } else {
            log::warn!("skipping annotations for unknown video {:?}", record.video_id);
        }
    }
    if kept.is_empty() {
        bail!("no annotations match a successfully analyzed video");
    }
    let annotated_ids: BTreeSet<&str> = kept.iter().map(|r| r.video_id.as_str()).collect();
    for video_id in fused.keys() {
        if !annotated_ids.contains(video_id.as_str()) {
            log::warn!("video {video_id:?} has a report but no annotations; excluded");
        }
    }

    let agreement = agreement_stats(&kept)?;
    let gold = gold_labels(&kept)?;
    if gold.is_empty() {
        bail!("every annotated video splits evenly; nothing to evaluate");
    }
    let concordant = concordant_subset(&gold);

    // Assemble approaches in canonical order: fused first, then the
    // enabled baselines.
    let mut approaches: Vec<(String, BTreeMap<String, TensionLevel>)> =
        vec![("fused".to_string(), fused)];
    let mut calibration = None;
    if baselines.contains(&Baseline::FieldSize) {
        match build_field_size_baseline(&mean_field_sizes, &gold)? {
            Some((record, predictions)) => {
                calibration = Some(record);
                approaches.push(("field-size".to_string(), predictions));
            }
            None => log::warn!("field-size baseline skipped: no gold video has visual frames"),
        }
    }
    if baselines.contains(&Baseline::Sentiment) {
        approaches.push(("sentiment".to_string(), predict_by_sentiment(&total_sentiments)));
    }

    let header = EvaluationHeader {
        schema_version: SCHEMA_VERSION,
        approaches: approaches.iter().map(|(name, _)| name.clone()).collect(),
        videos_in_reports: videos.len(),
        videos_failed: failed_ids.len(),
        videos_evaluated: annotated_ids.len(),
        gold_videos: gold.len(),
        concordant_videos: concordant.len(),
        field_size_calibration: calibration,
    };
    crate::report::write_record(writer, &EvalRecord::Evaluation(header))?;
    crate::report::write_record(
        writer,
        &EvalRecord::Agreement(AgreementRecord {
            videos: agreement.counts.videos,
            unanimous: agreement.counts.unanimous,
            at_three_quarters: agreement.counts.at_three_quarters,
            other_majority: agreement.counts.other_majority,
            tied: agreement.counts.tied,
            full_agreement_rate: agreement.full_agreement_rate,
            rate_at_three_quarters: agreement.rate_at_three_quarters,
        }),
    )?;

    for (name, predictions) in &approaches {
        let record = AccuracyRecord {
            approach: name.clone(),
            all_majority: accuracy_cell(name, predictions, &gold),
            concordant: accuracy_cell(name, predictions, &concordant),
        };
        crate::report::write_record(writer, &EvalRecord::Accuracy(record))?;
    }

    for (left_index, (left, left_predictions)) in approaches.iter().enumerate() {
        for (right, right_predictions) in approaches.iter().skip(left_index + 1) {
            for (denominator, rows) in [("all_majority", &gold), ("concordant", &concordant)] {
                let Some(record) = t_test_record(
                    left,
                    left_predictions,
                    right,
                    right_predictions,
                    denominator,
                    rows,
                ) else {
                    continue;
                };
                crate::report::write_record(writer, &EvalRecord::TTest(record))?;
            }
        }
    }
    Ok(())
}

/// Calibrate and apply the field-size baseline; `None` when no gold
/// video has a mean field size.
fn build_field_size_baseline(
    mean_field_sizes: &BTreeMap<String, f64>,
    gold: &[GoldLabel],
) -> Result<Option<(CalibrationRecord, BTreeMap<String, TensionLevel>)>> {
    let covered: Vec<GoldLabel> =
        gold.iter().filter(|row| mean_field_sizes.contains_key(&row.video_id)).cloned().collect();
    if covered.is_empty() {
        return Ok(None);
    }
    if covered.len() < gold.len() {
        log::warn!(
            "field-size baseline covers {} of {} gold videos (others have no visual frames)",
            covered.len(),
            gold.len()
        );
    }
    let calibration = calibrate_field_size_threshold(mean_field_sizes, &covered)?;
    let record = CalibrationRecord {
        method: "exhaustive sweep on the evaluation videos (resubstitution)".to_string(),
        threshold: calibration.threshold,
        training_accuracy: calibration.accuracy,
    };
    Ok(Some((record, predict_by_field_size(mean_field_sizes, calibration.threshold))))
}

/// Accuracy of one approach over the gold rows it has predictions for.
fn accuracy_cell(
    name: &str,
    predictions: &BTreeMap<String, TensionLevel>,
    rows: &[GoldLabel],
) -> AccuracyCell {
    let covered: Vec<&GoldLabel> =
        rows.iter().filter(|row| predictions.contains_key(&row.video_id)).collect();
    if covered.len() < rows.len() {
        log::warn!(
            "approach {name:?}: {} of {} gold videos have no prediction",
            rows.len() - covered.len(),
            rows.len()
        );
    }
    if covered.is_empty() {
        return AccuracyCell { videos: 0, accuracy: None };
    }
    let correct = covered.iter().filter(|row| predictions[&row.video_id] == row.label).count();
    AccuracyCell { videos: covered.len(), accuracy: Some(correct as f64 / covered.len() as f64) }
}

/// Paired t-test between two approaches on one denominator; `None`
/// (with a warning) when fewer than two videos are covered by both.
fn t_test_record(
    left: &str,
    left_predictions: &BTreeMap<String, TensionLevel>,
    right: &str,
    right_predictions: &BTreeMap<String, TensionLevel>,
    denominator: &str,
    rows: &[GoldLabel],
) -> Option<TTestRecord> {
    let covered: Vec<&GoldLabel> = rows
        .iter()
        .filter(|row| {
            left_predictions.contains_key(&row.video_id)
                && right_predictions.contains_key(&row.video_id)
        })
        .collect();
    let correctness = |predictions: &BTreeMap<String, TensionLevel>| -> Vec<f64> {
        covered
            .iter()
            .map(|row| if predictions[&row.video_id] == row.label { 1.0 } else { 0.0 })
            .collect()
    };
    match paired_t_test(&correctness(left_predictions), &correctness(right_predictions)) {
        Ok(test) => Some(TTestRecord {
            left: left.to_string(),
            right: right.to_string(),
            denominator: denominator.to_string(),
            videos: covered.len(),
            t: test.t,
            df: test.df,
            p_two_sided: test.p_two_sided,
        }),
        Err(error) => {
            log::warn!("t-test {left} vs {right} on {denominator} skipped: {error}");
            None
        }
    }
}
