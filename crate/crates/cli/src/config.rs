//! Run configuration: one TOML document covering every tunable of the
//! pipeline. All keys are optional — an empty file is a valid
//! configuration — but unknown keys are rejected so typos cannot
//! silently fall back to defaults. The fully resolved configuration is
//! embedded in every report header.

use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use anyhow::{bail, Context, Result};
use newstension_core::fusion::FusionConfig;
use newstension_core::prosody::ProsodyParams;
use newstension_core::sentiment::{Lexicon, LexiconScorer, PolarityScorer, ScorerEnsemble};
use serde::{Deserialize, Serialize};

/// Lexicon scorers compiled into the binary.
pub const BUILTIN_SCORERS: [&str; 2] = ["general", "news-tone"];

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub prosody: ProsodyParams,
    pub sentiment: SentimentConfig,
    pub fusion: FusionConfig,
    pub run: RunSection,
}

/// Which polarity scorers make up the ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SentimentConfig {
    /// Scorer names in ensemble order: builtin names and/or names of
    /// directories listed in `lexicon_dirs`.
    pub scorers: Vec<String>,
    /// Directories each holding a custom lexicon as `positive.txt` and
    /// `negative.txt` (one lowercase term per line). The directory
    /// name is the scorer name. Relative paths are resolved against
    /// the configuration file's directory.
    pub lexicon_dirs: Vec<PathBuf>,
}

impl Default for SentimentConfig {
    fn default() -> Self {
        Self {
            scorers: BUILTIN_SCORERS.iter().map(|s| s.to_string()).collect(),
            lexicon_dirs: Vec::new(),
        }
    }
}

/// Execution knobs that do not affect the computed scores.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    /// Worker pool size; 0 means one worker per available core.
    pub workers: usize,
    /// Write per-video prosody and sentiment artifacts beside the
    /// input files. Artifacts are write-only: reruns recompute
    /// everything, so cached files can never go stale.
    pub cache_artifacts: bool,
}

impl RunConfig {
    /// Read and validate a TOML configuration file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: Self =
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    /// Check every section before any processing starts.
    pub fn validate(&self) -> Result<()> {
        self.prosody.validate().context("invalid [prosody] section")?;
        self.fusion.validate().context("invalid [fusion] section")?;
        if self.sentiment.scorers.is_empty() {
            bail!("invalid [sentiment] section: at least one scorer is required");
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in &self.sentiment.scorers {
            if !seen.insert(name.as_str()) {
                bail!("invalid [sentiment] section: scorer {name:?} listed twice");
            }
        }
        for name in &self.sentiment.scorers {
            if !BUILTIN_SCORERS.contains(&name.as_str())
                && !self.sentiment.lexicon_dirs.iter().any(|d| dir_name(d) == Some(name))
            {
                bail!(
                    "invalid [sentiment] section: unknown scorer {name:?} \
                     (builtins: {}; or list its directory in lexicon_dirs)",
                    BUILTIN_SCORERS.join(", ")
                );
            }
        }
        Ok(())
    }

    /// Instantiate the configured scorer ensemble. `config_dir` anchors
    /// relative `lexicon_dirs` entries.
    pub fn build_ensemble(&self, config_dir: &Path) -> Result<ScorerEnsemble> {
        let mut scorers: Vec<Box<dyn PolarityScorer>> =
            Vec::with_capacity(self.sentiment.scorers.len());
        for name in &self.sentiment.scorers {
            scorers.push(match name.as_str() {
                "general" => Box::new(LexiconScorer::general()),
                "news-tone" => Box::new(LexiconScorer::news_tone()),
                custom => Box::new(self.load_custom_scorer(custom, config_dir)?),
            });
        }
        ScorerEnsemble::new(scorers).map_err(Into::into)
    }

    fn load_custom_scorer(&self, name: &str, config_dir: &Path) -> Result<LexiconScorer> {
        let dir = self
            .sentiment
            .lexicon_dirs
            .iter()
            .find(|d| dir_name(d) == Some(name))
            .expect("validate() checked every scorer name");
        let dir = if dir.is_absolute() { dir.clone() } else { config_dir.join(dir) };
        let read = |file: &str| {
            fs::read_to_string(dir.join(file))
                .with_context(|| format!("reading lexicon {}", dir.join(file).display()))
        };
        let lexicon = Lexicon::from_word_lists(&read("positive.txt")?, &read("negative.txt")?)
            .with_context(|| format!("lexicon {name:?} is not usable"))?;
        Ok(LexiconScorer::new(name, lexicon))
    }

    /// Effective worker pool size.
    pub fn worker_count(&self) -> usize {
        if self.run.workers > 0 {
            self.run.workers
        } else {
            thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        }
    }
}

fn dir_name(dir: &Path) -> Option<&str> {
    dir.file_name().and_then(|n| n.to_str())
}
