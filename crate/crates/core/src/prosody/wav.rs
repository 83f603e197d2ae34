//! Minimal RIFF/WAVE decoder for 16-bit PCM audio.
//!
//! News recordings arrive as plain PCM WAV files; anything fancier
//! (compressed codecs, float samples, more than two channels) is
//! rejected rather than guessed at. Stereo is folded to mono by
//! averaging the channels.

use alloc::vec::Vec;

use super::{AudioSignal, ProsodyError};

/// Decode a RIFF/WAVE byte stream into a mono [`AudioSignal`].
///
/// Accepts PCM (format tag 1), 16 bits per sample, one or two
/// channels. Stereo channels are averaged. Samples are scaled by
/// 1/32768 so the result lies in [-1, 1).
pub fn decode_wav(bytes: &[u8]) -> Result<AudioSignal, ProsodyError> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(ProsodyError::CorruptFile("missing RIFF/WAVE header"));
    }

    let mut format: Option<FormatChunk> = None;
    let mut data: Option<&[u8]> = None;
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = read_u32(bytes, pos + 4) as usize;
        let body_start = pos + 8;
        let body_end = body_start
            .checked_add(size)
            .ok_or(ProsodyError::CorruptFile("chunk size overflows"))?;
        if body_end > bytes.len() {
            return Err(ProsodyError::CorruptFile("truncated chunk"));
        }
        let body = &bytes[body_start..body_end];
        match id {
            b"fmt " => format = Some(FormatChunk::parse(body)?),
            b"data" => data = Some(body),
            _ => {} // skip LIST, cue, and other metadata chunks
        }
        // Chunk bodies are word-aligned; odd sizes carry a pad byte.
        pos = body_end + size % 2;
    }

    let format = format.ok_or(ProsodyError::CorruptFile("missing fmt chunk"))?;
    let data = data.ok_or(ProsodyError::CorruptFile("missing data chunk"))?;

    let frame_bytes = 2 * format.channels as usize;
    if data.len() % frame_bytes != 0 {
        return Err(ProsodyError::CorruptFile("data chunk is not whole frames"));
    }

    let mut samples = Vec::with_capacity(data.len() / frame_bytes);
    match format.channels {
        1 => {
            for chunk in data.chunks_exact(2) {
                samples.push(i16::from_le_bytes([chunk[0], chunk[1]]) as f32 / 32768.0);
            }
        }
        2 => {
            for chunk in data.chunks_exact(4) {
                let left = i16::from_le_bytes([chunk[0], chunk[1]]) as f32;
                let right = i16::from_le_bytes([chunk[2], chunk[3]]) as f32;
                samples.push((left + right) / 2.0 / 32768.0);
            }
        }
        _ => unreachable!("validated by FormatChunk::parse"),
    }

    AudioSignal::new(samples, format.sample_rate)
}

struct FormatChunk {
    channels: u16,
    sample_rate: u32,
}

impl FormatChunk {
    fn parse(body: &[u8]) -> Result<Self, ProsodyError> {
        if body.len() < 16 {
            return Err(ProsodyError::CorruptFile("fmt chunk too short"));
        }
        let format_tag = read_u16(body, 0);
        let channels = read_u16(body, 2);
        let sample_rate = read_u32(body, 4);
        let bits_per_sample = read_u16(body, 14);

        if format_tag != 1 {
            return Err(ProsodyError::UnsupportedFormat("only PCM (format tag 1) is supported"));
        }
        if bits_per_sample != 16 {
            return Err(ProsodyError::UnsupportedFormat("only 16-bit samples are supported"));
        }
        if !(1..=2).contains(&channels) {
            return Err(ProsodyError::UnsupportedFormat("only mono or stereo is supported"));
        }
        Ok(Self { channels, sample_rate })
    }
}

fn read_u16(bytes: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([bytes[at], bytes[at + 1]])
}

fn read_u32(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([bytes[at], bytes[at + 1], bytes[at + 2], bytes[at + 3]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    /// Assemble a WAV file in memory: RIFF header, fmt chunk, data chunk.
    fn build_wav(
        format_tag: u16,
        channels: u16,
        sample_rate: u32,
        bits: u16,
        data: &[u8],
    ) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(b"RIFF");
        out.extend_from_slice(&(36 + data.len() as u32).to_le_bytes());
        out.extend_from_slice(b"WAVE");
        out.extend_from_slice(b"fmt ");
        out.extend_from_slice(&16u32.to_le_bytes());
        out.extend_from_slice(&format_tag.to_le_bytes());
        out.extend_from_slice(&channels.to_le_bytes());
        out.extend_from_slice(&sample_rate.to_le_bytes());
        let block_align = channels * bits / 8;
        out.extend_from_slice(&(sample_rate * block_align as u32).to_le_bytes());
        out.extend_from_slice(&block_align.to_le_bytes());
        out.extend_from_slice(&bits.to_le_bytes());
        out.extend_from_slice(b"data");
        out.extend_from_slice(&(data.len() as u32).to_le_bytes());
        out.extend_from_slice(data);
        out
    }

    fn pcm_bytes(samples: &[i16]) -> Vec<u8> {
        samples.iter().flat_map(|s| s.to_le_bytes()).collect()
    }

    #[test]
    fn decodes_mono_pcm16() {
        let wav = build_wav(1, 1, 16000, 16, &pcm_bytes(&[0, 16384, -16384, 32767, -32768]));
        let signal = decode_wav(&wav).unwrap();
        assert_eq!(signal.sample_rate(), 16000);
        assert_eq!(signal.samples(), &[0.0, 0.5, -0.5, 32767.0 / 32768.0, -1.0]);
    }

    #[test]
    fn averages_stereo_to_mono() {
        let wav = build_wav(1, 2, 16000, 16, &pcm_bytes(&[16384, -16384, 8192, 8192]));
        let signal = decode_wav(&wav).unwrap();
        assert_eq!(signal.samples(), &[0.0, 0.25]);
    }

    #[test]
    fn skips_metadata_chunks() {
        let mut wav = build_wav(1, 1, 16000, 16, &pcm_bytes(&[100]));
        // Insert a LIST chunk with an odd size (exercises pad-byte
        // handling) between fmt and data.
        let mut list = Vec::new();
        list.extend_from_slice(b"LIST");
        list.extend_from_slice(&3u32.to_le_bytes());
        list.extend_from_slice(b"abc\0"); // 3 bytes + pad
        wav.splice(36..36, list);
        let signal = decode_wav(&wav).unwrap();
        assert_eq!(signal.samples().len(), 1);
    }

    #[test]
    fn rejects_non_pcm() {
        let wav = build_wav(3, 1, 16000, 16, &[]);
        assert_eq!(
            decode_wav(&wav),
            Err(ProsodyError::UnsupportedFormat("only PCM (format tag 1) is supported"))
        );
    }

    #[test]
    fn rejects_wrong_bit_depth_and_channel_count() {
        let wav = build_wav(1, 1, 16000, 8, &[]);
        assert!(matches!(decode_wav(&wav), Err(ProsodyError::UnsupportedFormat(_))));
        let wav = build_wav(1, 6, 16000, 16, &[]);
        assert!(matches!(decode_wav(&wav), Err(ProsodyError::UnsupportedFormat(_))));
    }

    #[test]
    fn rejects_truncated_data_chunk() {
        let mut wav = build_wav(1, 1, 16000, 16, &pcm_bytes(&[1, 2, 3, 4]));
        wav.truncate(wav.len() - 3);
        assert_eq!(decode_wav(&wav), Err(ProsodyError::CorruptFile("truncated chunk")));
    }

    #[test]
    fn rejects_non_riff_bytes() {
        assert_eq!(
            decode_wav(b"OggS\0\0\0\0\0\0\0\0"),
            Err(ProsodyError::CorruptFile("missing RIFF/WAVE header"))
        );
        assert!(decode_wav(b"RI").is_err());
    }

    #[test]
    fn rejects_missing_chunks() {
        // RIFF header only, no fmt or data.
        let mut wav = Vec::new();
        wav.extend_from_slice(b"RIFF");
        wav.extend_from_slice(&4u32.to_le_bytes());
        wav.extend_from_slice(b"WAVE");
        assert_eq!(decode_wav(&wav), Err(ProsodyError::CorruptFile("missing fmt chunk")));
    }

    #[test]
    fn rejects_low_sample_rate() {
        let wav = build_wav(1, 1, 4000, 16, &pcm_bytes(&[0]));
        assert_eq!(decode_wav(&wav), Err(ProsodyError::SampleRateTooLow(4000)));
    }

    #[test]
    fn rejects_ragged_data_chunk() {
        // Stereo frames are 4 bytes; 6 bytes of data is not whole frames.
        let wav = build_wav(1, 2, 16000, 16, &[0u8; 6]);
        assert_eq!(
            decode_wav(&wav),
            Err(ProsodyError::CorruptFile("data chunk is not whole frames"))
        );
    }
}
