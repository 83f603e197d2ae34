//! The per-video analysis pipeline and its batch driver.
//!
//! Each manifest entry runs independently inside a bounded worker
//! pool: decode audio, extract prosody, load face annotations, score
//! captions, fuse. Workers share only the immutable configuration;
//! results are collected back into manifest order and written by a
//! single serializer, so reports are byte-stable regardless of
//! scheduling. One video's failure is logged, recorded and does not
//! disturb the others.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use newstension_core::caption::{parse_srt, segment_sentences, Sentence};
use newstension_core::fusion::{accumulate_breakdown, classify, VideoFeatures};
use newstension_core::prosody::{decode_wav, extract_prosody, ProsodyFrame};
use newstension_core::sentiment::{ScorerEnsemble, SentimentVector};
use newstension_core::visual::load_visual_annotations;

use crate::config::RunConfig;
use crate::manifest::VideoManifest;
use crate::report::{
    FeatureSummary, ReportRecord, RunHeader, SubTotals, VideoRecord, VideoStatus, SCHEMA_VERSION,
};

/// Outcome of a batch run: every record in manifest order, plus the
/// failure count that decides the process exit code.
pub struct BatchOutcome {
    pub records: Vec<VideoRecord>,
    pub failures: usize,
}

/// Analyze every manifest entry and stream the report to `writer`.
/// `config_dir` anchors relative lexicon paths from the configuration.
pub fn run_batch<W: Write>(
    entries: &[VideoManifest],
    config: &RunConfig,
    config_dir: &Path,
    writer: &mut W,
) -> Result<BatchOutcome> {
    let ensemble = config.build_ensemble(config_dir).context("building scorer ensemble")?;
    let header = RunHeader {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        scorers: ensemble.names().iter().map(|s| s.to_string()).collect(),
        ensemble_size: ensemble.size(),
    };
    crate::report::write_record(writer, &ReportRecord::Run(header))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.worker_count())
        .build()
        .context("building worker pool")?;
    let records: Vec<VideoRecord> = pool.install(|| {
        use rayon::prelude::*;
        entries.par_iter().map(|entry| analyze_video(entry, config, &ensemble)).collect()
    });

    let mut failures = 0;
    for record in &records {
        if record.status == VideoStatus::Failed {
            failures += 1;
        }
        crate::report::write_record(writer, &ReportRecord::Video(record.clone()))?;
    }
    Ok(BatchOutcome { records, failures })
}

/// Run one video, folding any failure into its report record.
pub fn analyze_video(
    entry: &VideoManifest,
    config: &RunConfig,
    ensemble: &ScorerEnsemble,
) -> VideoRecord {
    match try_analyze(entry, config, ensemble) {
        Ok(record) => record,
        Err(error) => {
            let error = format!("{error:#}");
            log::error!("video {:?} failed: {error}", entry.video_id);
            VideoRecord::failed(&entry.video_id, error)
        }
    }
}

fn try_analyze(
    entry: &VideoManifest,
    config: &RunConfig,
    ensemble: &ScorerEnsemble,
) -> Result<VideoRecord> {
    let wav_bytes = fs::read(&entry.wav_path)
        .with_context(|| format!("reading audio {}", entry.wav_path.display()))?;
    let signal = decode_wav(&wav_bytes)
        .with_context(|| format!("decoding audio {}", entry.wav_path.display()))?;
    let prosody = extract_prosody(&signal, &config.prosody).context("extracting prosody")?;

    let visual_bytes = fs::read(&entry.visual_path)
        .with_context(|| format!("reading face annotations {}", entry.visual_path.display()))?;
    let document = load_visual_annotations(&visual_bytes)
        .with_context(|| format!("parsing face annotations {}", entry.visual_path.display()))?;
    let visual = document.features();

    let sentiments: Vec<(Sentence, SentimentVector)> = match &entry.srt_path {
        Some(srt_path) => {
            let srt_bytes = fs::read(srt_path)
                .with_context(|| format!("reading captions {}", srt_path.display()))?;
            let cues = parse_srt(&srt_bytes)
                .with_context(|| format!("parsing captions {}", srt_path.display()))?;
            ensemble.score_captions(segment_sentences(&cues))
        }
        None => Vec::new(),
    };

    let summary = summarize(&visual, &prosody, &sentiments);
    let features = VideoFeatures { visual, prosody, sentiments, fps: entry.fps };
    let breakdown = accumulate_breakdown(&features, &config.fusion).context("fusing features")?;
    let level = classify(&breakdown.total, &config.fusion);

    if config.run.cache_artifacts {
        write_artifacts(entry, &features).context("writing cached artifacts")?;
    }

    Ok(VideoRecord {
        video_id: entry.video_id.clone(),
        status: VideoStatus::Ok,
        level: Some(level),
        scores: Some(breakdown.total),
        breakdown: Some(SubTotals { visual: breakdown.visual, sentiment: breakdown.sentiment }),
        summary: Some(summary),
        error: None,
    })
}

fn summarize(
    visual: &[newstension_core::visual::VisualFeatures],
    prosody: &[ProsodyFrame],
    sentiments: &[(Sentence, SentimentVector)],
) -> FeatureSummary {
    let mean = |values: &mut dyn Iterator<Item = f64>, count: usize| -> Option<f64> {
        (count > 0).then(|| values.sum::<f64>() / count as f64)
    };
    FeatureSummary {
        frames: visual.len(),
        sentences: sentiments.len(),
        mean_field_size: mean(&mut visual.iter().map(|v| v.field_size), visual.len()),
        mean_loudness_db: mean(&mut prosody.iter().map(|f| f.loudness_db), prosody.len()),
        total_sentiment: sentiments.iter().map(|(_, v)| v.sum as i64).sum(),
    }
}

/// Write recomputable per-video artifacts beside the inputs: prosody
/// frames as CSV and scored sentences as JSON lines. Artifacts are
/// never read back; they exist for inspection and downstream tooling.
fn write_artifacts(entry: &VideoManifest, features: &VideoFeatures) -> Result<()> {
    let prosody_path = entry.wav_path.with_extension("prosody.csv");
    let mut csv = String::from("time,loudness_db,f0_hz,voicing_prob\n");
    for frame in &features.prosody {
        csv.push_str(&format!(
            "{:.6},{:.6},{:.6},{:.6}\n",
            frame.time, frame.loudness_db, frame.f0_hz, frame.voicing_prob
        ));
    }
    fs::write(&prosody_path, csv).with_context(|| format!("writing {}", prosody_path.display()))?;

    if let Some(srt_path) = &entry.srt_path {
        let sentiment_path = srt_path.with_extension("sentiment.jsonl");
        let mut lines = String::new();
        for (sentence, vector) in &features.sentiments {
            let row = serde_json::json!({
                "start": sentence.start,
                "end": sentence.end,
                "text": sentence.text,
                "scores": vector.scores,
                "sum": vector.sum,
            });
            lines.push_str(&row.to_string());
            lines.push('\n');
        }
        fs::write(&sentiment_path, lines)
            .with_context(|| format!("writing {}", sentiment_path.display()))?;
    }
    Ok(())
}
