//! Manifest-driven batch frontend for the tension-analysis core.
//!
//! The binary walks a line-delimited manifest of videos, runs the
//! caption → prosody → visual → sentiment → fusion pipeline on each
//! entry in a bounded worker pool, and writes one structured report
//! record per video. A separate `evaluate` pass compares finished
//! reports against multi-annotator ground truth, including the
//! single-feature baselines and pairwise significance tests.

pub mod config;
pub mod evaluate;
pub mod fixtures;
pub mod manifest;
pub mod pipeline;
pub mod report;
