//! SubRip (.srt) closed-caption parsing and sentence segmentation.
//!
//! Each subtitle cue carries an index, a time span and one or more text
//! lines. Cue text is normalized (lines joined with single spaces,
//! whitespace collapsed) and each cue becomes exactly one [`Sentence`]
//! for downstream sentiment scoring.

use alloc::string::String;
use alloc::vec::Vec;

/// One timed subtitle unit of an SRT document.
#[derive(Debug, Clone, PartialEq)]
pub struct CaptionCue {
    /// Cue counter as written in the document (positive).
    pub index: u32,
    /// Start of the cue in seconds.
    pub start: f64,
    /// End of the cue in seconds; always greater than `start`.
    pub end: f64,
    /// Normalized cue text: lines joined by single spaces, runs of
    /// whitespace collapsed, leading/trailing whitespace removed.
    pub text: String,
}

/// A caption sentence ready for sentiment scoring. One per cue, with the
/// cue's span attached.
#[derive(Debug, Clone, PartialEq)]
pub struct Sentence {
    pub text: String,
    /// Span start in seconds, inherited from the source cue.
    pub start: f64,
    /// Span end in seconds, inherited from the source cue.
    pub end: f64,
    /// Index of the cue this sentence came from.
    pub source_cue: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CaptionError {
    #[error("document is not valid UTF-8")]
    InvalidUtf8,
    #[error("line {line}: malformed cue index")]
    MalformedIndex { line: usize },
    #[error("line {line}: malformed timestamp (expected HH:MM:SS,mmm --> HH:MM:SS,mmm)")]
    MalformedTimestamp { line: usize },
    #[error("cue {index}: end time is not after start time")]
    InvalidSpan { index: u32 },
    #[error("cue {index} overlaps the previous cue")]
    OverlappingCues { index: u32 },
}

/// Parse an SRT document into validated cues.
///
/// A UTF-8 byte-order mark is tolerated and stripped. Cues with empty
/// text after normalization are dropped with a warning rather than
/// rejected. Kept cues must be time-ordered and non-overlapping.
pub fn parse_srt(document: &[u8]) -> Result<Vec<CaptionCue>, CaptionError> {
    let document = strip_bom(document);
    let text = core::str::from_utf8(document).map_err(|_| CaptionError::InvalidUtf8)?;

    // (1-based line number, line without trailing \r)
    let lines: Vec<(usize, &str)> = text
        .split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .collect();

    let mut cues: Vec<CaptionCue> = Vec::new();
    let mut pos = 0;
    loop {
        while pos < lines.len() && lines[pos].1.trim().is_empty() {
            pos += 1;
        }
        if pos >= lines.len() {
            break;
        }

        let (index_line, index_text) = lines[pos];
        let index: u32 = index_text
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or(CaptionError::MalformedIndex { line: index_line })?;
        pos += 1;

        let (ts_line, ts_text) = lines
            .get(pos)
            .copied()
            .ok_or(CaptionError::MalformedTimestamp { line: index_line + 1 })?;
        let (start, end) = parse_timing_line(ts_text, ts_line)?;
        pos += 1;

        let mut body: Vec<&str> = Vec::new();
        while pos < lines.len() && !lines[pos].1.trim().is_empty() {
            body.push(lines[pos].1);
            pos += 1;
        }
        let text = normalize_text(&body);

        if text.is_empty() {
            log::warn!("dropping cue {index}: empty text after normalization");
            continue;
        }
        if end <= start {
            return Err(CaptionError::InvalidSpan { index });
        }
        if let Some(prev) = cues.last() {
            if start < prev.end {
                return Err(CaptionError::OverlappingCues { index });
            }
        }
        cues.push(CaptionCue { index, start, end, text });
    }
    Ok(cues)
}

/// Render cues back to SRT text. `parse_srt` of the output yields
/// structurally equal cues.
pub fn serialize_srt(cues: &[CaptionCue]) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for cue in cues {
        let _ = write!(
            out,
            "{}\n{} --> {}\n{}\n\n",
            cue.index,
            format_timestamp(cue.start),
            format_timestamp(cue.end),
            cue.text
        );
    }
    out
}

/// Turn each cue into a single sentence carrying the cue's span.
pub fn segment_sentences(cues: &[CaptionCue]) -> Vec<Sentence> {
    cues.iter()
        .map(|cue| Sentence {
            text: cue.text.clone(),
            start: cue.start,
            end: cue.end,
            source_cue: cue.index,
        })
        .collect()
}

fn strip_bom(bytes: &[u8]) -> &[u8] {
    bytes.strip_prefix(&[0xEF, 0xBB, 0xBF]).unwrap_or(bytes)
}

fn normalize_text(lines: &[&str]) -> String {
    let joined = lines.join(" ");
    let words: Vec<&str> = joined.split_whitespace().collect();
    words.join(" ")
}

fn parse_timing_line(line: &str, line_no: usize) -> Result<(f64, f64), CaptionError> {
    let err = || CaptionError::MalformedTimestamp { line: line_no };
    let (lhs, rhs) = line.split_once("-->").ok_or_else(err)?;
    let start = parse_timestamp(lhs.trim()).ok_or_else(err)?;
    let end = parse_timestamp(rhs.trim()).ok_or_else(err)?;
    Ok((start, end))
}

/// `HH:MM:SS,mmm` to seconds. Hours may exceed two digits; minutes and
/// seconds are exactly two digits below 60, milliseconds exactly three.
fn parse_timestamp(text: &str) -> Option<f64> {
    let mut fields = text.split(':');
    let hours = fields.next()?;
    let minutes = fields.next()?;
    let rest = fields.next()?;
    if fields.next().is_some() {
        return None;
    }
    let (seconds, millis) = rest.split_once(',')?;

    if hours.is_empty() || hours.len() > 5 || !all_ascii_digits(hours) {
        return None;
    }
    if minutes.len() != 2 || seconds.len() != 2 || millis.len() != 3 {
        return None;
    }
    if !all_ascii_digits(minutes) || !all_ascii_digits(seconds) || !all_ascii_digits(millis) {
        return None;
    }

    let h: u64 = hours.parse().ok()?;
    let m: u64 = minutes.parse().ok()?;
    let s: u64 = seconds.parse().ok()?;
    let ms: u64 = millis.parse().ok()?;
    if m >= 60 || s >= 60 {
        return None;
    }
    let total_ms = ((h * 60 + m) * 60 + s) * 1000 + ms;
    Some(total_ms as f64 / 1000.0)
}

fn format_timestamp(seconds: f64) -> String {
    use core::fmt::Write;
    let total_ms = libm::round(seconds * 1000.0) as u64;
    let ms = total_ms % 1000;
    let total_s = total_ms / 1000;
    let s = total_s % 60;
    let m = (total_s / 60) % 60;
    let h = total_s / 3600;
    let mut out = String::new();
    let _ = write!(out, "{h:02}:{m:02}:{s:02},{ms:03}");
    out
}

fn all_ascii_digits(s: &str) -> bool {
    s.bytes().all(|b| b.is_ascii_digit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn parses_single_cue() {
        let cues = parse_srt(b"1\n00:00:01,000 --> 00:00:02,500\nHello\n\n").unwrap();
        assert_eq!(
            cues,
            vec![CaptionCue { index: 1, start: 1.0, end: 2.5, text: "Hello".to_string() }]
        );
    }

    #[test]
    fn empty_document_yields_no_cues() {
        assert_eq!(parse_srt(b"").unwrap(), vec![]);
        assert_eq!(parse_srt(b"\n\n\n").unwrap(), vec![]);
    }

    #[test]
    fn joins_multi_line_text_with_single_spaces() {
        let cues = parse_srt(b"1\n00:00:01,000 --> 00:00:02,000\nBREAKING\nNEWS\n\n").unwrap();
        assert_eq!(cues[0].text, "BREAKING NEWS");
    }

    #[test]
    fn normalizes_internal_and_surrounding_whitespace() {
        let cues =
            parse_srt(b"1\n00:00:01,000 --> 00:00:02,000\n  Fire   downtown.  \n\n").unwrap();
        assert_eq!(cues[0].text, "Fire downtown.");
    }

    #[test]
    fn tolerates_bom_and_crlf() {
        let doc = b"\xEF\xBB\xBF1\r\n00:00:00,100 --> 00:00:00,900\r\nok\r\n\r\n";
        let cues = parse_srt(doc).unwrap();
        assert_eq!(cues[0].text, "ok");
        assert_eq!(cues[0].start, 0.1);
    }

    #[test]
    fn missing_final_blank_line_is_accepted() {
        let cues = parse_srt(b"1\n00:00:01,000 --> 00:00:02,000\nlast").unwrap();
        assert_eq!(cues.len(), 1);
    }

    #[test]
    fn malformed_timestamp_names_line() {
        let doc = b"1\n00:00:01.000 --> 00:00:02,000\nHello\n\n";
        assert_eq!(parse_srt(doc), Err(CaptionError::MalformedTimestamp { line: 2 }));

        let doc =
            b"1\n00:00:01,000 --> 00:00:02,000\nHello\n\n2\n00:00:61,000 --> 00:00:62,000\nx\n";
        assert_eq!(parse_srt(doc), Err(CaptionError::MalformedTimestamp { line: 6 }));
    }

    #[test]
    fn malformed_index_names_line() {
        let doc = b"abc\n00:00:01,000 --> 00:00:02,000\nHello\n\n";
        assert_eq!(parse_srt(doc), Err(CaptionError::MalformedIndex { line: 1 }));
        let doc = b"0\n00:00:01,000 --> 00:00:02,000\nHello\n\n";
        assert_eq!(parse_srt(doc), Err(CaptionError::MalformedIndex { line: 1 }));
    }

    #[test]
    fn rejects_empty_or_reversed_span() {
        let doc = b"1\n00:00:02,000 --> 00:00:02,000\nHello\n\n";
        assert_eq!(parse_srt(doc), Err(CaptionError::InvalidSpan { index: 1 }));
        let doc = b"1\n00:00:03,000 --> 00:00:02,000\nHello\n\n";
        assert_eq!(parse_srt(doc), Err(CaptionError::InvalidSpan { index: 1 }));
    }

    #[test]
    fn rejects_overlapping_cues() {
        let doc = b"1\n00:00:01,000 --> 00:00:03,000\na\n\n2\n00:00:02,500 --> 00:00:04,000\nb\n\n";
        assert_eq!(parse_srt(doc), Err(CaptionError::OverlappingCues { index: 2 }));
        // out-of-order cues overlap by definition of the sorted invariant
        let doc = b"1\n00:00:10,000 --> 00:00:11,000\na\n\n2\n00:00:01,000 --> 00:00:02,000\nb\n\n";
        assert_eq!(parse_srt(doc), Err(CaptionError::OverlappingCues { index: 2 }));
    }

    #[test]
    fn back_to_back_cues_are_fine() {
        let doc = b"1\n00:00:01,000 --> 00:00:02,000\na\n\n2\n00:00:02,000 --> 00:00:03,000\nb\n\n";
        assert_eq!(parse_srt(doc).unwrap().len(), 2);
    }

    #[test]
    fn drops_empty_cues_with_warning() {
        let doc =
            b"1\n00:00:01,000 --> 00:00:02,000\n   \n\n2\n00:00:03,000 --> 00:00:04,000\nkept\n\n";
        let cues = parse_srt(doc).unwrap();
        assert_eq!(cues.len(), 1);
        assert_eq!(cues[0].index, 2);
    }

    #[test]
    fn serialize_then_parse_round_trips() {
        let doc = b"3\n01:02:03,456 --> 01:02:04,000\nSome text here\n\n7\n02:00:00,000 --> 02:00:05,999\nmore\n\n";
        let cues = parse_srt(doc).unwrap();
        let round = parse_srt(serialize_srt(&cues).as_bytes()).unwrap();
        assert_eq!(cues, round);
    }

    #[test]
    fn one_sentence_per_cue_in_order() {
        let doc = b"1\n00:00:01,000 --> 00:00:02,000\na\n\n2\n00:00:02,000 --> 00:00:03,000\nb\n\n3\n00:00:03,000 --> 00:00:04,000\nc\n\n";
        let cues = parse_srt(doc).unwrap();
        let sentences = segment_sentences(&cues);
        assert_eq!(sentences.len(), cues.len());
        for (cue, s) in cues.iter().zip(&sentences) {
            assert_eq!(s.text, cue.text);
            assert_eq!(s.start, cue.start);
            assert_eq!(s.end, cue.end);
            assert_eq!(s.source_cue, cue.index);
        }
    }

    #[test]
    fn segment_of_empty_is_empty() {
        assert_eq!(segment_sentences(&[]), vec![]);
    }
}
