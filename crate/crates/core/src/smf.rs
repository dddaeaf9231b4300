//! Standard MIDI File reading and writing.
//!
//! Writes exactly what the compiler needs: an `MThd` chunk followed by
//! `MTrk` chunks of delta-prefixed channel events, every event carrying its
//! own status byte. The reader accepts the same subset and skips unknown
//! meta events.

use std::fmt::Write as _;

use thiserror::Error;

use crate::sequencer::{EventKind, MidiEvent};

pub const HEADER_MAGIC: &[u8; 4] = b"MThd";
pub const TRACK_MAGIC: &[u8; 4] = b"MTrk";
pub const VLQ_MAX: u32 = 0x0FFF_FFFF;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("{0} does not fit in a variable-length quantity (max {VLQ_MAX:#x})")]
pub struct VlqRangeError(pub u32);

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("input ends early at byte {offset}")]
    TruncatedInput { offset: usize },
    #[error("bad chunk magic at byte {offset}: expected {expected:?}")]
    BadMagic {
        offset: usize,
        expected: &'static str,
    },
    #[error("length field at byte {offset} says {declared}, found {actual}")]
    LengthMismatch {
        offset: usize,
        declared: usize,
        actual: usize,
    },
    #[error("unknown event status {status:#04x} at byte {offset}")]
    UnknownEvent { status: u8, offset: usize },
    #[error("overlong variable-length quantity at byte {offset}")]
    OverlongVlq { offset: usize },
    #[error("invalid header: {0}")]
    InvalidHeader(String),
}

impl DecodeError {
    pub fn offset(&self) -> Option<usize> {
        match *self {
            DecodeError::TruncatedInput { offset }
            | DecodeError::BadMagic { offset, .. }
            | DecodeError::LengthMismatch { offset, .. }
            | DecodeError::UnknownEvent { offset, .. }
            | DecodeError::OverlongVlq { offset } => Some(offset),
            DecodeError::InvalidHeader(_) => None,
        }
    }
}

pub fn encode_vlq(n: u32) -> Result<Vec<u8>, VlqRangeError> {
    let mut out = Vec::with_capacity(4);
    write_vlq(&mut out, n)?;
    Ok(out)
}

fn write_vlq(buf: &mut Vec<u8>, n: u32) -> Result<(), VlqRangeError> {
    if n > VLQ_MAX {
        return Err(VlqRangeError(n));
    }
    for shift in [21u32, 14, 7] {
        if n >> shift != 0 {
            buf.push(((n >> shift) & 0x7F) as u8 | 0x80);
        }
    }
    buf.push((n & 0x7F) as u8);
    Ok(())
}

/// Decodes a VLQ from the front of `bytes`, returning the value and the
/// number of bytes consumed. Leading `0x80` padding is rejected.
pub fn decode_vlq(bytes: &[u8]) -> Result<(u32, usize), DecodeError> {
    let mut value = 0u32;
    for (i, &b) in bytes.iter().enumerate().take(4) {
        if i == 0 && b == 0x80 && bytes.len() > 1 {
            return Err(DecodeError::OverlongVlq { offset: 0 });
        }
        value = (value << 7) | u32::from(b & 0x7F);
        if b & 0x80 == 0 {
            return Ok((value, i + 1));
        }
    }
    if bytes.len() >= 4 {
        Err(DecodeError::OverlongVlq { offset: 0 })
    } else {
        Err(DecodeError::TruncatedInput {
            offset: bytes.len(),
        })
    }
}

/// Status and data bytes of one event, without the delta.
pub fn encode_event(kind: &EventKind) -> Vec<u8> {
    match *kind {
        EventKind::NoteOff {
            channel,
            note,
            velocity,
        } => vec![0x80 | (channel & 0x0F), note & 0x7F, velocity & 0x7F],
        EventKind::NoteOn {
            channel,
            note,
            velocity,
        } => vec![0x90 | (channel & 0x0F), note & 0x7F, velocity & 0x7F],
        EventKind::ControlChange {
            channel,
            controller,
            value,
        } => vec![0xB0 | (channel & 0x0F), controller & 0x7F, value & 0x7F],
        EventKind::ProgramChange { channel, program } => {
            vec![0xC0 | (channel & 0x0F), program & 0x7F]
        }
        EventKind::EndOfTrack => vec![0xFF, 0x2F, 0x00],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    /// One multi-channel track.
    Single,
    /// Several simultaneous tracks.
    Parallel,
}

impl Format {
    pub fn code(self) -> u16 {
        match self {
            Format::Single => 0,
            Format::Parallel => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SmfHeader {
    pub format: Format,
    pub division: u16,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmfFile {
    header: SmfHeader,
    tracks: Vec<Vec<MidiEvent>>,
}

impl SmfFile {
    /// Checks the header invariants: at least one track, a single-track
    /// format holds exactly one, and the division is a positive tick count.
    pub fn new(header: SmfHeader, tracks: Vec<Vec<MidiEvent>>) -> Result<Self, DecodeError> {
        if tracks.is_empty() || tracks.len() > usize::from(u16::MAX) {
            return Err(DecodeError::InvalidHeader(format!(
                "track count {} out of range",
                tracks.len()
            )));
        }
        if header.format == Format::Single && tracks.len() != 1 {
            return Err(DecodeError::InvalidHeader(format!(
                "format 0 with {} tracks",
                tracks.len()
            )));
        }
        if header.division == 0 || header.division > 0x7FFF {
            return Err(DecodeError::InvalidHeader(format!(
                "division {} is not a ticks-per-quarter value",
                header.division
            )));
        }
        Ok(SmfFile { header, tracks })
    }

    pub fn header(&self) -> SmfHeader {
        self.header
    }

    pub fn ntracks(&self) -> u16 {
        self.tracks.len() as u16
    }

    pub fn tracks(&self) -> &[Vec<MidiEvent>] {
        &self.tracks
    }
}

pub fn write_smf(file: &SmfFile) -> Result<Vec<u8>, VlqRangeError> {
    let mut out = Vec::new();
    out.extend_from_slice(HEADER_MAGIC);
    out.extend_from_slice(&6u32.to_be_bytes());
    out.extend_from_slice(&file.header.format.code().to_be_bytes());
    out.extend_from_slice(&file.ntracks().to_be_bytes());
    out.extend_from_slice(&file.header.division.to_be_bytes());
    for track in &file.tracks {
        out.extend_from_slice(TRACK_MAGIC);
        let len_at = out.len();
        out.extend_from_slice(&[0; 4]);
        let start = out.len();
        for ev in track {
            write_vlq(&mut out, ev.delta_ticks)?;
            out.extend(encode_event(&ev.kind));
        }
        let len = (out.len() - start) as u32;
        out[len_at..start].copy_from_slice(&len.to_be_bytes());
    }
    Ok(out)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], DecodeError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        match end {
            Some(end) => {
                let s = &self.bytes[self.pos..end];
                self.pos = end;
                Ok(s)
            }
            None => Err(DecodeError::TruncatedInput {
                offset: self.bytes.len(),
            }),
        }
    }

    fn u8(&mut self) -> Result<u8, DecodeError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, DecodeError> {
        let b = self.take(2)?;
        Ok(u16::from_be_bytes([b[0], b[1]]))
    }

    fn u32(&mut self) -> Result<u32, DecodeError> {
        let b = self.take(4)?;
        Ok(u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn magic(&mut self, magic: &'static [u8; 4]) -> Result<(), DecodeError> {
        let offset = self.pos;
        if self.take(4)? != magic {
            return Err(DecodeError::BadMagic {
                offset,
                expected: std::str::from_utf8(magic).unwrap_or("?"),
            });
        }
        Ok(())
    }

    fn vlq(&mut self) -> Result<u32, DecodeError> {
        let at = self.pos;
        let (v, used) = decode_vlq(&self.bytes[self.pos..]).map_err(|e| match e {
            DecodeError::OverlongVlq { .. } => DecodeError::OverlongVlq { offset: at },
            _ => DecodeError::TruncatedInput {
                offset: self.bytes.len(),
            },
        })?;
        self.pos += used;
        Ok(v)
    }
}

pub fn read_smf(bytes: &[u8]) -> Result<SmfFile, DecodeError> {
    let mut cur = Cursor { bytes, pos: 0 };
    cur.magic(HEADER_MAGIC)?;
    let len_at = cur.pos;
    let header_len = cur.u32()? as usize;
    if header_len != 6 {
        return Err(DecodeError::LengthMismatch {
            offset: len_at,
            declared: header_len,
            actual: 6,
        });
    }
    let format = match cur.u16()? {
        0 => Format::Single,
        1 => Format::Parallel,
        other => {
            return Err(DecodeError::InvalidHeader(format!(
                "unsupported format {other}"
            )))
        }
    };
    let ntracks = cur.u16()?;
    let division = cur.u16()?;
    let mut tracks = Vec::with_capacity(usize::from(ntracks));
    for _ in 0..ntracks {
        tracks.push(read_track(&mut cur)?);
    }
    if cur.pos != bytes.len() {
        return Err(DecodeError::LengthMismatch {
            offset: cur.pos,
            declared: cur.pos,
            actual: bytes.len(),
        });
    }
    SmfFile::new(SmfHeader { format, division }, tracks)
}

fn read_track(cur: &mut Cursor<'_>) -> Result<Vec<MidiEvent>, DecodeError> {
    cur.magic(TRACK_MAGIC)?;
    let len_at = cur.pos;
    let declared = cur.u32()? as usize;
    let start = cur.pos;
    let end = start.saturating_add(declared);
    if end > cur.bytes.len() {
        return Err(DecodeError::TruncatedInput {
            offset: cur.bytes.len(),
        });
    }
    let mut events = Vec::new();
    let mut carried = 0u32;
    loop {
        if cur.pos >= end {
            // ran off the chunk without an End of Track
            return Err(DecodeError::LengthMismatch {
                offset: len_at,
                declared,
                actual: cur.pos - start,
            });
        }
        let delta = carried.saturating_add(cur.vlq()?);
        let at = cur.pos;
        let status = cur.u8()?;
        let channel = status & 0x0F;
        let kind = match status & 0xF0 {
            0x80 => {
                let d = cur.take(2)?;
                EventKind::NoteOff {
                    channel,
                    note: data_byte(d[0], at + 1)?,
                    velocity: data_byte(d[1], at + 2)?,
                }
            }
            0x90 => {
                let d = cur.take(2)?;
                EventKind::NoteOn {
                    channel,
                    note: data_byte(d[0], at + 1)?,
                    velocity: data_byte(d[1], at + 2)?,
                }
            }
            0xB0 => {
                let d = cur.take(2)?;
                EventKind::ControlChange {
                    channel,
                    controller: data_byte(d[0], at + 1)?,
                    value: data_byte(d[1], at + 2)?,
                }
            }
            0xC0 => EventKind::ProgramChange {
                channel,
                program: data_byte(cur.u8()?, at + 1)?,
            },
            0xF0 if status == 0xFF => {
                let meta = cur.u8()?;
                let len = cur.vlq()? as usize;
                cur.take(len)?;
                if meta == 0x2F {
                    EventKind::EndOfTrack
                } else {
                    carried = delta;
                    continue;
                }
            }
            _ => return Err(DecodeError::UnknownEvent { status, offset: at }),
        };
        carried = 0;
        events.push(MidiEvent::new(delta, kind));
        if kind == EventKind::EndOfTrack {
            break;
        }
    }
    if cur.pos != end {
        return Err(DecodeError::LengthMismatch {
            offset: len_at,
            declared,
            actual: cur.pos - start,
        });
    }
    Ok(events)
}

fn data_byte(b: u8, offset: usize) -> Result<u8, DecodeError> {
    if b & 0x80 != 0 {
        Err(DecodeError::UnknownEvent { status: b, offset })
    } else {
        Ok(b)
    }
}

/// Sixteen space-separated uppercase hex bytes per line.
pub fn hex_dump(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(bytes.len() * 3);
    for row in bytes.chunks(16) {
        for (i, b) in row.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{b:02X}");
        }
        out.push('\n');
    }
    out
}
