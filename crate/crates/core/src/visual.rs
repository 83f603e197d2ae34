//! Per-frame face and emotion annotation ingestion.
//!
//! An external facial-expression recognizer produces, for every
//! annotated video frame, zero or more face bounding boxes with a
//! signed decision value ("margin") per emotion. This module validates
//! those documents and reduces each frame to two features: the
//! intensity of the recognized emotion on the dominant (largest) face,
//! and the field size — the fraction of the frame that face occupies,
//! a proxy for camera shot tightness.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// The seven modeled emotions plus the reserved value for frames
/// without a detected face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmotionLabel {
    Happiness,
    Surprise,
    Aversion,
    Contempt,
    Anger,
    Fear,
    Sadness,
    /// No face in the frame; never carries intensity.
    Nonexistent,
}

impl EmotionLabel {
    /// The seven emotions a face can be classified as, in the fixed
    /// tie-breaking order.
    pub const MODELED: [EmotionLabel; 7] = [
        EmotionLabel::Happiness,
        EmotionLabel::Surprise,
        EmotionLabel::Aversion,
        EmotionLabel::Contempt,
        EmotionLabel::Anger,
        EmotionLabel::Fear,
        EmotionLabel::Sadness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EmotionLabel::Happiness => "happiness",
            EmotionLabel::Surprise => "surprise",
            EmotionLabel::Aversion => "aversion",
            EmotionLabel::Contempt => "contempt",
            EmotionLabel::Anger => "anger",
            EmotionLabel::Fear => "fear",
            EmotionLabel::Sadness => "sadness",
            EmotionLabel::Nonexistent => "nonexistent",
        }
    }
}

/// One-vs-all classifier decision values for a single face, one per
/// modeled emotion. Positive means the face is on the emotion's side
/// of the separating hyperplane; magnitude is confidence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmotionMargins {
    pub happiness: f64,
    pub surprise: f64,
    pub aversion: f64,
    pub contempt: f64,
    pub anger: f64,
    pub fear: f64,
    pub sadness: f64,
}

impl EmotionMargins {
    pub fn get(&self, emotion: EmotionLabel) -> Option<f64> {
        match emotion {
            EmotionLabel::Happiness => Some(self.happiness),
            EmotionLabel::Surprise => Some(self.surprise),
            EmotionLabel::Aversion => Some(self.aversion),
            EmotionLabel::Contempt => Some(self.contempt),
            EmotionLabel::Anger => Some(self.anger),
            EmotionLabel::Fear => Some(self.fear),
            EmotionLabel::Sadness => Some(self.sadness),
            EmotionLabel::Nonexistent => None,
        }
    }

    /// Winning emotion and its raw (unclamped) margin. Equal margins
    /// resolve to the earlier label in [`EmotionLabel::MODELED`].
    pub fn argmax(&self) -> (EmotionLabel, f64) {
        let mut best = (EmotionLabel::MODELED[0], self.happiness);
        for &emotion in &EmotionLabel::MODELED[1..] {
            let margin = self.get(emotion).unwrap();
            if margin > best.1 {
                best = (emotion, margin);
            }
        }
        best
    }
}

/// One detected face: pixel bounding box plus per-emotion margins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceObservation {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
    pub margins: EmotionMargins,
}

impl FaceObservation {
    pub fn area(&self) -> u64 {
        self.w as u64 * self.h as u64
    }
}

/// All faces detected in one video frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameAnnotation {
    pub frame_index: u32,
    pub faces: Vec<FaceObservation>,
}

/// A validated annotation document: frame dimensions plus per-frame
/// face observations with strictly increasing frame indices.
#[derive(Debug, Clone, PartialEq)]
pub struct VisualDocument {
    pub frame_width: u32,
    pub frame_height: u32,
    pub frames: Vec<FrameAnnotation>,
}

/// The two visual features of one frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VisualFeatures {
    pub frame_index: u32,
    /// Recognized emotion of the largest face; `nonexistent` when the
    /// frame has no faces.
    pub emotion: EmotionLabel,
    /// Clamped winning margin of the largest face; 0 when the face
    /// matches no emotion or the frame has no faces.
    pub intensity: f64,
    /// Largest face area over frame area, in [0, 1]; 0 with no faces.
    pub field_size: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VisualError {
    #[error("malformed annotation document: {0}")]
    MalformedDocument(String),
    #[error("frame dimensions must be positive")]
    InvalidDimensions,
    #[error("frame {frame}: missing margin for {emotion}")]
    MissingMargin { frame: u32, emotion: &'static str },
    #[error("frame {frame}: unknown margin key {key:?}")]
    UnknownMarginKey { frame: u32, key: String },
    #[error("frame {frame}: margin for {emotion} is not finite")]
    NonFiniteMargin { frame: u32, emotion: &'static str },
    #[error("frame {frame}: {reason}")]
    InvalidFaceBox { frame: u32, reason: &'static str },
    #[error("frame {frame}: frame indices must be strictly increasing")]
    FrameOrder { frame: u32 },
}

/// The raw JSON shape; validation happens after deserialization so
/// errors can name the offending frame.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    frame_width: u32,
    frame_height: u32,
    frames: Vec<RawFrame>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFrame {
    index: u32,
    faces: Vec<RawFace>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFace {
    x: u32,
    y: u32,
    w: u32,
    h: u32,
    margins: BTreeMap<String, f64>,
}

/// Parse and validate a JSON annotation document.
pub fn load_visual_annotations(document: &[u8]) -> Result<VisualDocument, VisualError> {
    let raw: RawDocument = serde_json::from_slice(document)
        .map_err(|e| VisualError::MalformedDocument(e.to_string()))?;
    if raw.frame_width == 0 || raw.frame_height == 0 {
        return Err(VisualError::InvalidDimensions);
    }

    let mut frames = Vec::with_capacity(raw.frames.len());
    let mut previous_index: Option<u32> = None;
    for frame in raw.frames {
        if previous_index.is_some_and(|p| frame.index <= p) {
            return Err(VisualError::FrameOrder { frame: frame.index });
        }
        previous_index = Some(frame.index);

        let mut faces = Vec::with_capacity(frame.faces.len());
        for face in frame.faces {
            faces.push(validate_face(face, frame.index, raw.frame_width, raw.frame_height)?);
        }
        frames.push(FrameAnnotation { frame_index: frame.index, faces });
    }
    Ok(VisualDocument { frame_width: raw.frame_width, frame_height: raw.frame_height, frames })
}

fn validate_face(
    face: RawFace,
    frame: u32,
    frame_width: u32,
    frame_height: u32,
) -> Result<FaceObservation, VisualError> {
    if face.w == 0 || face.h == 0 {
        return Err(VisualError::InvalidFaceBox {
            frame,
            reason: "face box has zero width or height",
        });
    }
    let fits_x = face.x.checked_add(face.w).is_some_and(|right| right <= frame_width);
    let fits_y = face.y.checked_add(face.h).is_some_and(|bottom| bottom <= frame_height);
    if !fits_x || !fits_y {
        return Err(VisualError::InvalidFaceBox {
            frame,
            reason: "face box extends outside the frame",
        });
    }

    for key in face.margins.keys() {
        let known = EmotionLabel::MODELED.iter().any(|e| e.as_str() == key.as_str());
        if !known {
            return Err(VisualError::UnknownMarginKey { frame, key: key.clone() });
        }
    }
    let fetch = |emotion: EmotionLabel| -> Result<f64, VisualError> {
        let name = emotion.as_str();
        let value =
            *face.margins.get(name).ok_or(VisualError::MissingMargin { frame, emotion: name })?;
        if !value.is_finite() {
            return Err(VisualError::NonFiniteMargin { frame, emotion: name });
        }
        Ok(value)
    };
    let margins = EmotionMargins {
        happiness: fetch(EmotionLabel::Happiness)?,
        surprise: fetch(EmotionLabel::Surprise)?,
        aversion: fetch(EmotionLabel::Aversion)?,
        contempt: fetch(EmotionLabel::Contempt)?,
        anger: fetch(EmotionLabel::Anger)?,
        fear: fetch(EmotionLabel::Fear)?,
        sadness: fetch(EmotionLabel::Sadness)?,
    };
    Ok(FaceObservation { x: face.x, y: face.y, w: face.w, h: face.h, margins })
}

/// Fraction of the frame occupied by the largest detected face;
/// 0 when the frame has no faces.
pub fn field_size(frame: &FrameAnnotation, frame_width: u32, frame_height: u32) -> f64 {
    let largest = frame.faces.iter().map(FaceObservation::area).max().unwrap_or(0);
    largest as f64 / (frame_width as f64 * frame_height as f64)
}

/// Emotion and clamped intensity of the dominant face.
///
/// The dominant face is the one with the largest bounding-box area;
/// area ties resolve to the lowest `x`, then lowest `y`. Its emotion
/// is the margin argmax and its intensity the winning margin clamped
/// at zero. Frames without faces report `(nonexistent, 0)`.
pub fn recognized_emotion(frame: &FrameAnnotation) -> (EmotionLabel, f64) {
    let Some(dominant) = frame
        .faces
        .iter()
        // max_by_key favors later elements on ties, so reversed x/y/w
        // encode "largest area, then lowest x, then lowest y".
        .max_by_key(|f| {
            (f.area(), core::cmp::Reverse(f.x), core::cmp::Reverse(f.y), core::cmp::Reverse(f.w))
        })
    else {
        return (EmotionLabel::Nonexistent, 0.0);
    };
    let (emotion, margin) = dominant.margins.argmax();
    (emotion, margin.max(0.0))
}

/// Reduce every frame to its two visual features, preserving order.
pub fn visual_features(
    frames: &[FrameAnnotation],
    frame_width: u32,
    frame_height: u32,
) -> Vec<VisualFeatures> {
    frames
        .iter()
        .map(|frame| {
            let (emotion, intensity) = recognized_emotion(frame);
            VisualFeatures {
                frame_index: frame.frame_index,
                emotion,
                intensity,
                field_size: field_size(frame, frame_width, frame_height),
            }
        })
        .collect()
}

impl VisualDocument {
    /// Convenience wrapper over [`visual_features`].
    pub fn features(&self) -> Vec<VisualFeatures> {
        visual_features(&self.frames, self.frame_width, self.frame_height)
    }
}
