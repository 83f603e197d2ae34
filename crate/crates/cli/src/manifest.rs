//! Line-delimited video manifests: one JSON object per line naming a
//! video's extracted input files. Relative paths are resolved against
//! the manifest's own directory so a dataset can move as a unit.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

/// One video's inputs: pre-extracted audio, captions and face
/// annotations. A missing `srt_path` means the video has no closed
/// captions and its sentiment contribution is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VideoManifest {
    pub video_id: String,
    pub wav_path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub srt_path: Option<PathBuf>,
    pub visual_path: PathBuf,
    /// Video frame rate; converts visual frame indices to seconds.
    pub fps: f64,
}

impl VideoManifest {
    fn validate(&self) -> Result<()> {
        if self.video_id.is_empty() {
            bail!("video_id must not be empty");
        }
        if !(self.fps > 0.0 && self.fps.is_finite()) {
            bail!("video {:?}: fps must be positive and finite", self.video_id);
        }
        Ok(())
    }

    fn resolve_paths(&mut self, base: &Path) {
        resolve(base, &mut self.wav_path);
        resolve(base, &mut self.visual_path);
        if let Some(srt) = &mut self.srt_path {
            resolve(base, srt);
        }
    }
}

fn resolve(base: &Path, path: &mut PathBuf) {
    if path.is_relative() {
        *path = base.join(&path);
    }
}

/// Read a manifest file: one JSON object per non-blank line, unique
/// video ids, paths resolved relative to the manifest location.
pub fn load_manifest(path: &Path) -> Result<Vec<VideoManifest>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));

    let mut entries: Vec<VideoManifest> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut entry: VideoManifest = serde_json::from_str(line)
            .with_context(|| format!("manifest {}: line {}", path.display(), line_no + 1))?;
        entry
            .validate()
            .with_context(|| format!("manifest {}: line {}", path.display(), line_no + 1))?;
        if !seen.insert(entry.video_id.clone()) {
            bail!(
                "manifest {}: line {}: duplicate video_id {:?}",
                path.display(),
                line_no + 1,
                entry.video_id
            );
        }
        entry.resolve_paths(base);
        entries.push(entry);
    }
    if entries.is_empty() {
        bail!("manifest {} lists no videos", path.display());
    }
    Ok(entries)
}

/// Render manifest entries as JSON lines.
pub fn serialize_manifest(entries: &[VideoManifest]) -> Result<String> {
    let mut out = String::new();
    for entry in entries {
        out.push_str(&serde_json::to_string(entry)?);
        out.push('\n');
    }
    Ok(out)
}
