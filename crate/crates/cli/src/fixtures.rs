//! Synthetic desk-scale dataset: 20 short videos whose inputs are
//! constructed so the winning tension bin is decidable by hand.
//!
//! Most clips put every non-zero contribution into a single bin
//! (e.g. anger faces with neutral captions), so the label follows from
//! "that bin is positive, the other is zero". The mixed clips are
//! decided by bracketing: every audio weight lies in [ε, 1], so one
//! side's guaranteed minimum (ε × its raw evidence) is made larger
//! than the other side's possible maximum (1 × its raw evidence).
//! Annotator votes are scripted to give 12 unanimous videos, 6 at 3-of-4
//! and 2 even splits.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use newstension_core::caption::{serialize_srt, CaptionCue};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::manifest::{serialize_manifest, VideoManifest};

const SAMPLE_RATE: u32 = 16000;
const FPS: f64 = 25.0;
const FRAME_WIDTH: u32 = 640;
const FRAME_HEIGHT: u32 = 360;
/// Base RNG seed; each clip offsets it by its index so clips are
/// independent but every run is identical.
const NOISE_SEED: u64 = 0x6E65_7773_7669_6400;

/// What fills a clip's audio track.
enum Audio {
    /// Constant-amplitude sine.
    Tone { freq: f64, amp: f64 },
    /// Sine with linearly interpolated amplitude.
    Ramp { freq: f64, from: f64, to: f64 },
    /// Seeded uniform white noise.
    Noise { amp: f64 },
    /// Tone for the first half, noise for the second.
    Split { freq: f64, amp: f64, noise_amp: f64 },
}

/// What the face-annotation track contains.
enum Visual {
    /// `count` frames `step` indices apart, one face each, the same
    /// dominant emotion throughout.
    Faces { emotion: &'static str, margin: f64, count: u32, step: u32, bbox: [u32; 4] },
    /// Frames with no detected faces.
    Faceless { count: u32, step: u32 },
    /// Like `Faces` but cycling fear → sadness → anger.
    Mixture { margin: f64, count: u32, step: u32, bbox: [u32; 4] },
}

struct Clip {
    id: &'static str,
    duration_s: f64,
    audio: Audio,
    visual: Visual,
    /// (start_ms, end_ms, text); empty means the clip has no captions
    /// and the manifest omits srt_path.
    captions: &'static [(u32, u32, &'static str)],
    /// Scripted annotator votes, ann-1 through ann-4.
    votes: [&'static str; 4],
}

// Bounding boxes by fraction of the 640×360 frame they cover.
const BOX_05: [u32; 4] = [200, 100, 144, 80]; // 0.05
const BOX_15: [u32; 4] = [224, 90, 192, 180]; // 0.15
const BOX_20: [u32; 4] = [100, 90, 256, 180]; // 0.20
const BOX_25: [u32; 4] = [40, 60, 288, 200]; // 0.25
const BOX_30: [u32; 4] = [60, 40, 288, 240]; // 0.30
const BOX_35: [u32; 4] = [50, 50, 336, 240]; // 0.35
const BOX_50: [u32; 4] = [32, 80, 576, 200]; // 0.50

fn clips() -> Vec<Clip> {
    vec![
        // Single-bin High: anger faces, neutral captions.
        Clip {
            id: "clip-01",
            duration_s: 1.2,
            audio: Audio::Tone { freq: 220.0, amp: 0.30 },
            visual: Visual::Faces {
                emotion: "anger",
                margin: 1.5,
                count: 10,
                step: 3,
                bbox: BOX_20,
            },
            captions: &[
                (100, 550, "The evening broadcast begins now"),
                (600, 1100, "Officials met reporters this afternoon"),
            ],
            votes: ["high", "high", "high", "high"],
        },
        // Single-bin Low: happy faces, no captions.
        Clip {
            id: "clip-02",
            duration_s: 1.4,
            audio: Audio::Ramp { freq: 150.0, from: 0.10, to: 0.40 },
            visual: Visual::Faces {
                emotion: "happiness",
                margin: 1.2,
                count: 8,
                step: 4,
                bbox: BOX_30,
            },
            captions: &[],
            votes: ["low", "low", "low", "low"],
        },
        // Single-bin High: negative captions, no faces.
        Clip {
            id: "clip-03",
            duration_s: 1.2,
            audio: Audio::Noise { amp: 0.25 },
            visual: Visual::Faceless { count: 6, step: 5 },
            captions: &[
                (100, 400, "War airstrike reported overnight"),
                (450, 750, "Violence erupts during riot downtown"),
                (800, 1100, "Fear grips city after explosion"),
            ],
            votes: ["high", "high", "high", "high"],
        },
        // Single-bin Low: positive captions, no faces.
        Clip {
            id: "clip-04",
            duration_s: 1.3,
            audio: Audio::Tone { freq: 330.0, amp: 0.25 },
            visual: Visual::Faceless { count: 5, step: 6 },
            captions: &[
                (100, 450, "Peace treaty celebrated in capital"),
                (500, 850, "Rescue brings relief to families"),
                (900, 1250, "Vaccine breakthrough offers hope"),
            ],
            votes: ["low", "low", "low", "low"],
        },
        // Agreeing modalities: anger faces plus negative captions.
        Clip {
            id: "clip-05",
            duration_s: 1.6,
            audio: Audio::Split { freq: 120.0, amp: 0.35, noise_amp: 0.20 },
            visual: Visual::Faces {
                emotion: "anger",
                margin: 2.0,
                count: 8,
                step: 4,
                bbox: BOX_25,
            },
            captions: &[
                (150, 700, "Massacre victims mourned after attack"),
                (750, 1300, "Brutal clash leaves casualties"),
            ],
            votes: ["high", "high", "high", "high"],
        },
        // Agreeing modalities: happy faces plus positive captions.
        Clip {
            id: "clip-06",
            duration_s: 1.2,
            audio: Audio::Tone { freq: 260.0, amp: 0.20 },
            visual: Visual::Faces {
                emotion: "happiness",
                margin: 1.8,
                count: 8,
                step: 3,
                bbox: BOX_25,
            },
            captions: &[
                (100, 550, "Ceasefire agreement brings calm"),
                (600, 1050, "Recovery continues with strong growth"),
            ],
            votes: ["low", "low", "low", "low"],
        },
        // Single-bin High: fear faces, no captions.
        Clip {
            id: "clip-07",
            duration_s: 1.4,
            audio: Audio::Tone { freq: 95.0, amp: 0.30 },
            visual: Visual::Faces {
                emotion: "fear",
                margin: 1.4,
                count: 12,
                step: 2,
                bbox: BOX_15,
            },
            captions: &[],
            votes: ["high", "high", "high", "low"],
        },
        // Single-bin High: sadness faces, neutral captions.
        Clip {
            id: "clip-08",
            duration_s: 1.3,
            audio: Audio::Tone { freq: 440.0, amp: 0.15 },
            visual: Visual::Faces {
                emotion: "sadness",
                margin: 1.1,
                count: 9,
                step: 3,
                bbox: BOX_20,
            },
            captions: &[
                (100, 600, "The weather forecast follows the report"),
                (650, 1200, "Cameras followed the motorcade through town"),
            ],
            votes: ["high", "high", "high", "high"],
        },
        // Opposing, visual side dominant: surprise evidence ≥ ε·16·3.0·0.5
        // = 2.4 beats the one positive sentence's maximum of 2.
        Clip {
            id: "clip-09",
            duration_s: 1.3,
            audio: Audio::Tone { freq: 180.0, amp: 0.30 },
            visual: Visual::Faces {
                emotion: "surprise",
                margin: 3.0,
                count: 16,
                step: 2,
                bbox: BOX_50,
            },
            captions: &[(200, 900, "Volunteers win praise for charity work")],
            votes: ["high", "high", "high", "high"],
        },
        // Opposing, sentiment side dominant: six +2 sentences guarantee
        // ε·12 = 1.2; the tiny anger faces can reach at most
        // 3·0.2·0.05 = 0.03.
        Clip {
            id: "clip-10",
            duration_s: 1.8,
            audio: Audio::Ramp { freq: 240.0, from: 0.25, to: 0.15 },
            visual: Visual::Faces {
                emotion: "anger",
                margin: 0.2,
                count: 3,
                step: 10,
                bbox: BOX_05,
            },
            captions: &[
                (100, 350, "Peace treaty celebrated in capital"),
                (380, 630, "Rescue brings relief to families"),
                (660, 910, "Vaccine breakthrough offers hope"),
                (940, 1190, "Ceasefire agreement brings calm"),
                (1220, 1470, "Recovery continues with strong growth"),
                (1500, 1750, "Volunteers win praise for charity work"),
            ],
            votes: ["low", "low", "high", "low"],
        },
        // No evidence at all: ties break Low.
        Clip {
            id: "clip-11",
            duration_s: 1.0,
            audio: Audio::Noise { amp: 0.002 },
            visual: Visual::Faceless { count: 4, step: 5 },
            captions: &[],
            votes: ["low", "low", "high", "high"],
        },
        // Neutral captions only: still no evidence, ties break Low.
        Clip {
            id: "clip-12",
            duration_s: 1.4,
            audio: Audio::Noise { amp: 0.15 },
            visual: Visual::Faceless { count: 5, step: 6 },
            captions: &[
                (100, 600, "The evening broadcast begins now"),
                (650, 1300, "Officials met reporters this afternoon"),
            ],
            votes: ["low", "high", "low", "low"],
        },
        // Single-bin High: contempt faces.
        Clip {
            id: "clip-13",
            duration_s: 1.2,
            audio: Audio::Tone { freq: 200.0, amp: 0.30 },
            visual: Visual::Faces {
                emotion: "contempt",
                margin: 1.6,
                count: 10,
                step: 3,
                bbox: BOX_20,
            },
            captions: &[],
            votes: ["high", "high", "low", "high"],
        },
        // Single-bin High: aversion faces over noisy audio.
        Clip {
            id: "clip-14",
            duration_s: 1.3,
            audio: Audio::Noise { amp: 0.30 },
            visual: Visual::Faces {
                emotion: "aversion",
                margin: 1.3,
                count: 8,
                step: 4,
                bbox: BOX_30,
            },
            captions: &[(200, 900, "Cameras followed the motorcade through town")],
            votes: ["high", "high", "high", "high"],
        },
        // Opposing, visual dominant: happiness ≥ ε·24·2.0·0.3 = 1.44
        // beats the single scorer-disagreement sentence's maximum of 1.
        Clip {
            id: "clip-15",
            duration_s: 2.0,
            audio: Audio::Tone { freq: 170.0, amp: 0.28 },
            visual: Visual::Faces {
                emotion: "happiness",
                margin: 2.0,
                count: 24,
                step: 2,
                bbox: BOX_30,
            },
            captions: &[(300, 1400, "Transit workers strike over wages")],
            votes: ["low", "low", "low", "low"],
        },
        // Mixture of High-bin emotions, no captions.
        Clip {
            id: "clip-16",
            duration_s: 1.5,
            audio: Audio::Tone { freq: 140.0, amp: 0.32 },
            visual: Visual::Mixture { margin: 1.5, count: 12, step: 3, bbox: BOX_20 },
            captions: &[],
            votes: ["high", "high", "high", "high"],
        },
        // Single-bin Low: happy faces over very quiet audio (the weight
        // floor keeps the evidence alive).
        Clip {
            id: "clip-17",
            duration_s: 1.2,
            audio: Audio::Tone { freq: 250.0, amp: 0.02 },
            visual: Visual::Faces {
                emotion: "happiness",
                margin: 1.0,
                count: 6,
                step: 5,
                bbox: BOX_35,
            },
            captions: &[],
            votes: ["low", "low", "low", "low"],
        },
        // Single-bin High: negative captions over noise, no faces.
        Clip {
            id: "clip-18",
            duration_s: 1.7,
            audio: Audio::Noise { amp: 0.22 },
            visual: Visual::Faceless { count: 6, step: 7 },
            captions: &[
                (100, 450, "Deadly crisis after earthquake strikes region"),
                (500, 850, "Families suffer amid famine and drought"),
                (900, 1250, "Wildfire destroys homes in tragic blaze"),
                (1300, 1650, "War airstrike reported overnight"),
            ],
            votes: ["high", "low", "high", "high"],
        },
        // Agreeing modalities: happy faces plus positive captions.
        Clip {
            id: "clip-19",
            duration_s: 1.5,
            audio: Audio::Tone { freq: 310.0, amp: 0.26 },
            visual: Visual::Faces {
                emotion: "happiness",
                margin: 1.4,
                count: 10,
                step: 3,
                bbox: BOX_25,
            },
            captions: &[
                (100, 500, "Peace treaty celebrated in capital"),
                (550, 950, "Recovery continues with strong growth"),
                (1000, 1400, "Rescue brings relief to families"),
            ],
            votes: ["low", "low", "low", "high"],
        },
        // Opposing, sentiment dominant: eight −2 sentences guarantee
        // ε·16 = 1.6; the small happy faces reach at most
        // 4·0.5·0.2 = 0.4.
        Clip {
            id: "clip-20",
            duration_s: 2.0,
            audio: Audio::Tone { freq: 130.0, amp: 0.30 },
            visual: Visual::Faces {
                emotion: "happiness",
                margin: 0.5,
                count: 4,
                step: 12,
                bbox: BOX_20,
            },
            captions: &[
                (100, 300, "War airstrike reported overnight"),
                (330, 530, "Violence erupts during riot downtown"),
                (560, 760, "Deadly crisis after earthquake strikes region"),
                (790, 990, "Families suffer amid famine and drought"),
                (1020, 1220, "Fear grips city after explosion"),
                (1250, 1450, "Massacre victims mourned after attack"),
                (1480, 1680, "Brutal clash leaves casualties"),
                (1710, 1910, "Wildfire destroys homes in tragic blaze"),
            ],
            votes: ["high", "high", "low", "low"],
        },
    ]
}

/// Configuration written alongside the dataset; spells out every
/// default so the file doubles as schema documentation.
const CONFIG_TOML: &str = "\
# Analysis configuration for the synthetic fixture dataset.
# Every value shown is the built-in default.

[prosody]
hop_s = 0.01
window_s = 0.025
f0_min_hz = 50.0
f0_max_hz = 500.0
voicing_threshold = 0.45

[sentiment]
scorers = [\"general\", \"news-tone\"]

[fusion]
weight_floor = 0.1
loudness_normalization = \"min-max\"
tie_break = \"low\"

[fusion.emotion_map]
anger = \"high\"
aversion = \"high\"
contempt = \"high\"
fear = \"high\"
happiness = \"low\"
sadness = \"high\"
surprise = \"high\"

[run]
workers = 0
cache_artifacts = false
";

/// Write the complete dataset (media, manifest, annotations, config)
/// into `out_dir`. Deterministic: two runs produce identical bytes.
pub fn generate(out_dir: &Path) -> Result<usize> {
    let media_dir = out_dir.join("media");
    fs::create_dir_all(&media_dir).with_context(|| format!("creating {}", media_dir.display()))?;

    let clips = clips();
    let mut entries = Vec::with_capacity(clips.len());
    let mut annotations = String::from("video_id,annotator_id,label\n");

    for (index, clip) in clips.iter().enumerate() {
        let wav_name = format!("media/{}.wav", clip.id);
        let visual_name = format!("media/{}.visual.json", clip.id);
        fs::write(out_dir.join(&wav_name), render_audio(clip, index as u64))
            .with_context(|| format!("writing {wav_name}"))?;
        fs::write(out_dir.join(&visual_name), render_visual(&clip.visual))
            .with_context(|| format!("writing {visual_name}"))?;

        let srt_name = if clip.captions.is_empty() {
            None
        } else {
            let name = format!("media/{}.srt", clip.id);
            fs::write(out_dir.join(&name), render_captions(clip.captions))
                .with_context(|| format!("writing {name}"))?;
            Some(name)
        };

        entries.push(VideoManifest {
            video_id: clip.id.to_string(),
            wav_path: wav_name.into(),
            srt_path: srt_name.map(Into::into),
            visual_path: visual_name.into(),
            fps: FPS,
        });
        for (annotator, vote) in clip.votes.iter().enumerate() {
            annotations.push_str(&format!("{},ann-{},{}\n", clip.id, annotator + 1, vote));
        }
    }

    fs::write(out_dir.join("manifest.jsonl"), serialize_manifest(&entries)?)?;
    fs::write(out_dir.join("annotations.csv"), annotations)?;
    fs::write(out_dir.join("config.toml"), CONFIG_TOML)?;
    Ok(entries.len())
}

fn render_audio(clip: &Clip, index: u64) -> Vec<u8> {
    let n = (clip.duration_s * SAMPLE_RATE as f64) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(NOISE_SEED + index);
    let omega =
        |freq: f64, i: usize| 2.0 * std::f64::consts::PI * freq * i as f64 / SAMPLE_RATE as f64;
    let samples: Vec<f64> = (0..n)
        .map(|i| match clip.audio {
            Audio::Tone { freq, amp } => amp * omega(freq, i).sin(),
            Audio::Ramp { freq, from, to } => {
                let amp = from + (to - from) * i as f64 / n as f64;
                amp * omega(freq, i).sin()
            }
            Audio::Noise { amp } => rng.gen_range(-amp..=amp),
            Audio::Split { freq, amp, noise_amp } => {
                if i < n / 2 {
                    amp * omega(freq, i).sin()
                } else {
                    rng.gen_range(-noise_amp..=noise_amp)
                }
            }
        })
        .collect();
    encode_wav(&samples)
}

/// Minimal RIFF/WAVE writer: 16-bit PCM mono.
fn encode_wav(samples: &[f64]) -> Vec<u8> {
    let data_len = (samples.len() * 2) as u32;
    let mut out = Vec::with_capacity(44 + samples.len() * 2);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&SAMPLE_RATE.to_le_bytes());
    out.extend_from_slice(&(SAMPLE_RATE * 2).to_le_bytes()); // byte rate
    out.extend_from_slice(&2u16.to_le_bytes()); // block align
    out.extend_from_slice(&16u16.to_le_bytes()); // bits per sample
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for &sample in samples {
        let scaled = (sample.clamp(-1.0, 1.0) * 32767.0).round() as i16;
        out.extend_from_slice(&scaled.to_le_bytes());
    }
    out
}

const EMOTIONS: [&str; 7] =
    ["happiness", "surprise", "aversion", "contempt", "anger", "fear", "sadness"];

fn face_json(bbox: [u32; 4], dominant: &str, margin: f64) -> serde_json::Value {
    let margins: serde_json::Map<String, serde_json::Value> = EMOTIONS
        .iter()
        .map(|&e| {
            let value = if e == dominant { margin } else { 0.05 };
            (e.to_string(), serde_json::json!(value))
        })
        .collect();
    serde_json::json!({
        "x": bbox[0], "y": bbox[1], "w": bbox[2], "h": bbox[3],
        "margins": margins,
    })
}

fn render_visual(visual: &Visual) -> String {
    let frames: Vec<serde_json::Value> = match *visual {
        Visual::Faces { emotion, margin, count, step, bbox } => (0..count)
            .map(|i| {
                serde_json::json!({"index": i * step, "faces": [face_json(bbox, emotion, margin)]})
            })
            .collect(),
        Visual::Faceless { count, step } => (0..count)
            .map(|i| serde_json::json!({"index": i * step, "faces": []}))
            .collect(),
        Visual::Mixture { margin, count, step, bbox } => {
            let cycle = ["fear", "sadness", "anger"];
            (0..count)
                .map(|i| {
                    let emotion = cycle[i as usize % cycle.len()];
                    serde_json::json!({
                        "index": i * step,
                        "faces": [face_json(bbox, emotion, margin)],
                    })
                })
                .collect()
        }
    };
    serde_json::json!({
        "frame_width": FRAME_WIDTH,
        "frame_height": FRAME_HEIGHT,
        "frames": frames,
    })
    .to_string()
}

fn render_captions(captions: &[(u32, u32, &str)]) -> String {
    let cues: Vec<CaptionCue> = captions
        .iter()
        .enumerate()
        .map(|(i, &(start_ms, end_ms, text))| CaptionCue {
            index: i as u32 + 1,
            start: start_ms as f64 / 1000.0,
            end: end_ms as f64 / 1000.0,
            text: text.to_string(),
        })
        .collect();
    serialize_srt(&cues)
}
