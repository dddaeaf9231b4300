//! Tokenizer and validator for the tune and tempo boxes.
//!
//! A tune token is a scale degree written as a decimal-looking number:
//! `5` is degree five, each trailing `0` raises it an octave, a leading `-`
//! lowers it one octave plus one more per trailing `0`, and a `.5` suffix
//! sharpens it. A lone `0` is a rest. Tempo tokens are non-negative
//! decimal beat counts with at most three fractional digits.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest octave shift a tune token may carry in either direction.
pub const MAX_OCTAVE_SHIFT: i8 = 5;

/// Degrees that have a sharp column in the note table.
const SHARPABLE: [u8; 5] = [1, 2, 4, 5, 6];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TuneToken {
    degree: u8,
    octave_shift: i8,
    sharp: bool,
}

impl TuneToken {
    pub const REST: TuneToken = TuneToken {
        degree: 0,
        octave_shift: 0,
        sharp: false,
    };

    /// Builds a pitched token, or `None` if the combination cannot be written.
    pub fn note(degree: u8, octave_shift: i8, sharp: bool) -> Option<Self> {
        if !(1..=7).contains(&degree) || octave_shift.abs() > MAX_OCTAVE_SHIFT {
            return None;
        }
        if sharp && !SHARPABLE.contains(&degree) {
            return None;
        }
        Some(TuneToken {
            degree,
            octave_shift,
            sharp,
        })
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn octave_shift(&self) -> i8 {
        self.octave_shift
    }

    pub fn is_sharp(&self) -> bool {
        self.sharp
    }

    pub fn is_rest(&self) -> bool {
        self.degree == 0
    }
}

impl fmt::Display for TuneToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rest() {
            return f.write_str("0");
        }
        let zeros = if self.octave_shift < 0 {
            f.write_str("-")?;
            (-self.octave_shift - 1) as usize
        } else {
            self.octave_shift as usize
        };
        write!(f, "{}{}", self.degree, "0".repeat(zeros))?;
        if self.sharp {
            f.write_str(".5")?;
        }
        Ok(())
    }
}

impl FromStr for TuneToken {
    type Err = SyntaxReason;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(SyntaxReason::Empty);
        }
        if s == "0" {
            return Ok(TuneToken::REST);
        }
        let (negative, rest) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s),
        };
        let (body, sharp) = match rest.strip_suffix(".5") {
            Some(b) => (b, true),
            None => (rest, false),
        };
        let mut chars = body.chars();
        let degree = match chars.next() {
            Some(c @ '1'..='7') => c as u8 - b'0',
            _ => return Err(SyntaxReason::MalformedTune),
        };
        let tail = chars.as_str();
        if !tail.bytes().all(|b| b == b'0') {
            return Err(SyntaxReason::MalformedTune);
        }
        let zeros = tail.len();
        let shift = if negative { zeros + 1 } else { zeros };
        if shift > MAX_OCTAVE_SHIFT as usize {
            return Err(SyntaxReason::OctaveShiftTooLarge);
        }
        let shift = if negative {
            -(shift as i8)
        } else {
            shift as i8
        };
        if sharp && !SHARPABLE.contains(&degree) {
            return Err(SyntaxReason::NoSharp(degree));
        }
        Ok(TuneToken {
            degree,
            octave_shift: shift,
            sharp,
        })
    }
}

/// A duration in beats, held exactly in thousandths of a beat.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Beats(u32);

impl Beats {
    pub const ZERO: Beats = Beats(0);
    /// Integer part is limited to this many digits.
    const MAX_INT_DIGITS: usize = 6;

    pub fn from_millibeats(millibeats: u32) -> Self {
        Beats(millibeats)
    }

    pub fn millibeats(self) -> u32 {
        self.0
    }

    pub fn whole(beats: u32) -> Self {
        Beats(beats * 1000)
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 1000.0
    }
}

impl fmt::Display for Beats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let whole = self.0 / 1000;
        let frac = self.0 % 1000;
        if frac == 0 {
            write!(f, "{whole}")
        } else {
            let digits = format!("{frac:03}");
            write!(f, "{whole}.{}", digits.trim_end_matches('0'))
        }
    }
}

impl FromStr for Beats {
    type Err = SyntaxReason;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(SyntaxReason::Empty);
        }
        if s.starts_with('-') {
            return Err(SyntaxReason::NegativeTempo);
        }
        let (int, frac) = match s.split_once('.') {
            Some((i, f)) => (i, Some(f)),
            None => (s, None),
        };
        let all_digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(int) || frac.is_some_and(|f| !all_digits(f)) {
            return Err(SyntaxReason::MalformedTempo);
        }
        let int = int.trim_start_matches('0');
        if int.len() > Self::MAX_INT_DIGITS {
            return Err(SyntaxReason::TempoTooLarge);
        }
        let frac = frac.unwrap_or("");
        if frac.len() > 3 {
            return Err(SyntaxReason::TooPrecise);
        }
        let whole: u32 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| SyntaxReason::MalformedTempo)?
        };
        let mut millis = 0u32;
        for (i, b) in frac.bytes().enumerate() {
            millis += u32::from(b - b'0') * 10u32.pow(2 - i as u32);
        }
        Ok(Beats(whole * 1000 + millis))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TempoToken {
    pub beats: Beats,
}

impl TempoToken {
    pub fn new(beats: Beats) -> Self {
        TempoToken { beats }
    }

    /// Chord members strike without advancing time.
    pub fn is_chord_member(&self) -> bool {
        self.beats == Beats::ZERO
    }
}

impl fmt::Display for TempoToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.beats.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum SyntaxReason {
    #[error("empty token")]
    Empty,
    #[error(
        "expected a degree 1-7 with optional leading '-', trailing zeros and '.5', or a lone 0"
    )]
    MalformedTune,
    #[error("octave shift exceeds {MAX_OCTAVE_SHIFT}")]
    OctaveShiftTooLarge,
    #[error("degree {0} has no sharp")]
    NoSharp(u8),
    #[error("expected a non-negative decimal number")]
    MalformedTempo,
    #[error("negative durations are not allowed")]
    NegativeTempo,
    #[error("at most 3 fractional digits are allowed")]
    TooPrecise,
    #[error("duration is too large")]
    TempoTooLarge,
}

/// A malformed token, located by its 1-based index in the list.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("token {position} {token:?}: {reason}")]
pub struct SyntaxError {
    pub position: usize,
    pub token: String,
    pub reason: SyntaxReason,
}

/// The two count checks run before compilation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error(
        "Error 1: The quantities of numbers in the Tune box ({tune_count}) and the Tempo box ({tempo_count}) are different."
    )]
    CountMismatch {
        tune_count: usize,
        tempo_count: usize,
    },
    #[error("Error 2: The Tune box and the Tempo box must not be blank.")]
    Blank,
}

impl ValidationError {
    /// Public error number: 1 for a count mismatch, 2 for blank input.
    pub fn code(&self) -> u8 {
        match self {
            ValidationError::CountMismatch { .. } => 1,
            ValidationError::Blank => 2,
        }
    }
}

/// Splits box text into raw tokens. Commas and whitespace both separate;
/// an empty slot between commas is kept as `""` so the caller can reject it.
pub fn split_tokens(text: &str) -> Vec<&str> {
    if text.trim().is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for piece in text.split(',') {
        let before = out.len();
        out.extend(piece.split_whitespace());
        if out.len() == before {
            out.push("");
        }
    }
    out
}

fn parse_list<T>(text: &str) -> Result<Vec<T>, SyntaxError>
where
    T: FromStr<Err = SyntaxReason>,
{
    split_tokens(text)
        .into_iter()
        .enumerate()
        .map(|(i, raw)| {
            raw.parse().map_err(|reason| SyntaxError {
                position: i + 1,
                token: raw.to_string(),
                reason,
            })
        })
        .collect()
}

pub fn parse_tune_list(text: &str) -> Result<Vec<TuneToken>, SyntaxError> {
    parse_list(text)
}

pub fn parse_tempo_list(text: &str) -> Result<Vec<TempoToken>, SyntaxError> {
    parse_list::<Beats>(text).map(|v| v.into_iter().map(TempoToken::new).collect())
}

/// Equal-length, non-empty tune and tempo lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Melody {
    tunes: Vec<TuneToken>,
    tempos: Vec<TempoToken>,
}

impl Melody {
    pub fn tunes(&self) -> &[TuneToken] {
        &self.tunes
    }

    pub fn tempos(&self) -> &[TempoToken] {
        &self.tempos
    }

    pub fn len(&self) -> usize {
        self.tunes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tunes.is_empty()
    }

    pub fn notes(&self) -> impl Iterator<Item = (TuneToken, TempoToken)> + '_ {
        self.tunes.iter().copied().zip(self.tempos.iter().copied())
    }
}

pub fn validate_melody(
    tunes: Vec<TuneToken>,
    tempos: Vec<TempoToken>,
) -> Result<Melody, ValidationError> {
    check_counts(tunes.len(), tempos.len())?;
    Ok(Melody { tunes, tempos })
}

/// Blank input wins over a mismatch, so `0 / 3` is reported as Error 2.
pub fn check_counts(tune_count: usize, tempo_count: usize) -> Result<(), ValidationError> {
    if tune_count == 0 || tempo_count == 0 {
        Err(ValidationError::Blank)
    } else if tune_count != tempo_count {
        Err(ValidationError::CountMismatch {
            tune_count,
            tempo_count,
        })
    } else {
        Ok(())
    }
}

fn render_list<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

pub fn render_tune_list(tokens: &[TuneToken]) -> String {
    render_list(tokens)
}

pub fn render_tempo_list(tokens: &[TempoToken]) -> String {
    render_list(tokens)
}
