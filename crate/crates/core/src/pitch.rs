//! Scale degrees to MIDI note numbers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::nmn::TuneToken;

/// Octave row that an unshifted degree lands in; degree 5 in C is 67.
pub const BASE_OCTAVE: i32 = 5;

const DEGREE_SEMITONES: [u8; 7] = [0, 2, 4, 5, 7, 9, 11];

/// The twelve selectable keys, in root-offset order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MajorScale {
    #[default]
    C,
    Db,
    D,
    Eb,
    E,
    F,
    Fs,
    G,
    Ab,
    A,
    Bb,
    B,
}

impl MajorScale {
    pub const ALL: [MajorScale; 12] = [
        MajorScale::C,
        MajorScale::Db,
        MajorScale::D,
        MajorScale::Eb,
        MajorScale::E,
        MajorScale::F,
        MajorScale::Fs,
        MajorScale::G,
        MajorScale::Ab,
        MajorScale::A,
        MajorScale::Bb,
        MajorScale::B,
    ];

    pub fn root_offset(self) -> u8 {
        self as u8
    }

    pub fn from_root_offset(offset: u8) -> Option<Self> {
        Self::ALL.get(usize::from(offset)).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            MajorScale::C => "C",
            MajorScale::Db => "Db",
            MajorScale::D => "D",
            MajorScale::Eb => "Eb",
            MajorScale::E => "E",
            MajorScale::F => "F",
            MajorScale::Fs => "Fs",
            MajorScale::G => "G",
            MajorScale::Ab => "Ab",
            MajorScale::A => "A",
            MajorScale::Bb => "Bb",
            MajorScale::B => "B",
        }
    }
}

impl fmt::Display for MajorScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown major scale {0:?}")]
pub struct UnknownScale(pub String);

impl FromStr for MajorScale {
    type Err = UnknownScale;

    /// Accepts the canonical names plus `#`/`♯`/`♭` spellings, case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s
            .trim()
            .replace(['#', '♯'], "s")
            .replace('♭', "b")
            .to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|k| k.name().to_ascii_lowercase() == norm)
            .ok_or_else(|| UnknownScale(s.to_string()))
    }
}

/// A MIDI note number, 0..=127.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NoteNumber(u8);

impl NoteNumber {
    pub const MAX: u8 = 127;

    pub fn new(value: u8) -> Option<Self> {
        (value <= Self::MAX).then_some(NoteNumber(value))
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("note number {value} is outside the MIDI range 0-127")]
pub struct RangeError {
    pub value: i32,
}

/// Semitone offset of a degree above the scale root.
pub fn degree_semitone(degree: u8, sharp: bool) -> u8 {
    debug_assert!((1..=7).contains(&degree));
    DEGREE_SEMITONES[usize::from(degree - 1)] + u8::from(sharp)
}

/// Maps a pitched token into a key. Rests have no pitch and must be filtered out first.
pub fn map_note(token: TuneToken, scale: MajorScale) -> Result<NoteNumber, RangeError> {
    assert!(!token.is_rest(), "rests have no note number");
    let value = 12 * (BASE_OCTAVE + i32::from(token.octave_shift()))
        + i32::from(degree_semitone(token.degree(), token.is_sharp()))
        + i32::from(scale.root_offset());
    u8::try_from(value)
        .ok()
        .and_then(NoteNumber::new)
        .ok_or(RangeError { value })
}

/// Column headings of the note table, left to right.
pub const TABLE_COLUMNS: [(u8, bool); 12] = [
    (1, false),
    (1, true),
    (2, false),
    (2, true),
    (3, false),
    (4, false),
    (4, true),
    (5, false),
    (5, true),
    (6, false),
    (6, true),
    (7, false),
];

/// The note table: 11 octave rows by 12 columns, blank past note 127.
pub fn note_table_oracle() -> [[Option<u8>; 12]; 11] {
    let mut table = [[None; 12]; 11];
    for (octave, row) in table.iter_mut().enumerate() {
        for (col, cell) in row.iter_mut().enumerate() {
            let n = 12 * octave + col;
            *cell = u8::try_from(n).ok().filter(|&n| n <= NoteNumber::MAX);
        }
    }
    table
}
