//! The performance parameters applied on top of a melody.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instruments::{instrument_name, program_for_name};
use crate::pitch::MajorScale;

pub const MAX_LEVEL: u8 = 10;
pub const MAX_REPEAT: u16 = 999;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RhythmStyle {
    #[default]
    #[serde(rename = "NONE")]
    None,
    Waltz,
    Rock,
    Disco,
    Rumba,
}

impl RhythmStyle {
    pub const ALL: [RhythmStyle; 5] = [
        RhythmStyle::None,
        RhythmStyle::Waltz,
        RhythmStyle::Rock,
        RhythmStyle::Disco,
        RhythmStyle::Rumba,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RhythmStyle::None => "NONE",
            RhythmStyle::Waltz => "Waltz",
            RhythmStyle::Rock => "Rock",
            RhythmStyle::Disco => "Disco",
            RhythmStyle::Rumba => "Rumba",
        }
    }
}

impl fmt::Display for RhythmStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RhythmStyle {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Self::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ParamError::UnknownRhythm(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("{name} must be between {min} and {max}, got {value}")]
    OutOfRange {
        name: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },
    #[error("{name}: expected an integer, got {value:?}")]
    NotAnInteger { name: &'static str, value: String },
    #[error("unknown instrument {0:?}")]
    UnknownInstrument(String),
    #[error("unknown major scale {0:?}")]
    UnknownScale(String),
    #[error("unknown rhythm {0:?}")]
    UnknownRhythm(String),
}

/// Speed, volumes, instrument, key, rhythm and repeat count.
///
/// Defaults regenerate the reference Happy Birthday file byte for byte.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamSet {
    pub speed: u8,
    pub tune_volume: u8,
    pub rhythm_volume: u8,
    pub instrument: u8,
    pub scale: MajorScale,
    pub rhythm: RhythmStyle,
    pub repeat: u16,
}

impl Default for ParamSet {
    fn default() -> Self {
        ParamSet {
            speed: 3,
            tune_volume: 10,
            rhythm_volume: 10,
            instrument: 0,
            scale: MajorScale::C,
            rhythm: RhythmStyle::None,
            repeat: 1,
        }
    }
}

fn check(name: &'static str, value: i64, min: i64, max: i64) -> Result<(), ParamError> {
    if (min..=max).contains(&value) {
        Ok(())
    } else {
        Err(ParamError::OutOfRange {
            name,
            value,
            min,
            max,
        })
    }
}

impl ParamSet {
    pub fn validate(&self) -> Result<(), ParamError> {
        let level = i64::from(MAX_LEVEL);
        check("speed", self.speed.into(), 0, level)?;
        check("volume", self.tune_volume.into(), 0, level)?;
        check("rhythm volume", self.rhythm_volume.into(), 0, level)?;
        check("instrument", self.instrument.into(), 0, 127)?;
        check("repeat", self.repeat.into(), 1, MAX_REPEAT.into())?;
        Ok(())
    }

    /// Header division: the speed knob, with 0 lifted to the smallest legal value.
    pub fn division(&self) -> u16 {
        u16::from(self.speed.max(1))
    }

    pub fn instrument_name(&self) -> &'static str {
        instrument_name(self.instrument).unwrap_or("?")
    }
}

/// Optional per-field replacements, as given on the command line, in a
/// `.nmn` document or in a service request.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamOverrides {
    pub speed: Option<u8>,
    pub tune_volume: Option<u8>,
    pub rhythm_volume: Option<u8>,
    pub instrument: Option<u8>,
    pub scale: Option<MajorScale>,
    pub rhythm: Option<RhythmStyle>,
    pub repeat: Option<u16>,
}

impl ParamOverrides {
    /// Layers `self` over `base`; fields set here win.
    pub fn apply(&self, base: ParamSet) -> Result<ParamSet, ParamError> {
        let params = ParamSet {
            speed: self.speed.unwrap_or(base.speed),
            tune_volume: self.tune_volume.unwrap_or(base.tune_volume),
            rhythm_volume: self.rhythm_volume.unwrap_or(base.rhythm_volume),
            instrument: self.instrument.unwrap_or(base.instrument),
            scale: self.scale.unwrap_or(base.scale),
            rhythm: self.rhythm.unwrap_or(base.rhythm),
            repeat: self.repeat.unwrap_or(base.repeat),
        };
        params.validate()?;
        Ok(params)
    }

    /// `other` wins where both are set.
    pub fn merged_with(&self, other: &ParamOverrides) -> ParamOverrides {
        ParamOverrides {
            speed: other.speed.or(self.speed),
            tune_volume: other.tune_volume.or(self.tune_volume),
            rhythm_volume: other.rhythm_volume.or(self.rhythm_volume),
            instrument: other.instrument.or(self.instrument),
            scale: other.scale.or(self.scale),
            rhythm: other.rhythm.or(self.rhythm),
            repeat: other.repeat.or(self.repeat),
        }
    }
}

pub fn parse_level(name: &'static str, text: &str) -> Result<u8, ParamError> {
    let v = parse_int(name, text)?;
    check(name, v, 0, MAX_LEVEL.into())?;
    Ok(v as u8)
}

pub fn parse_repeat(text: &str) -> Result<u16, ParamError> {
    let v = parse_int("repeat", text)?;
    check("repeat", v, 1, MAX_REPEAT.into())?;
    Ok(v as u16)
}

/// A program number 0..=127 or a General MIDI instrument name.
pub fn parse_instrument(text: &str) -> Result<u8, ParamError> {
    let text = text.trim();
    if !text.is_empty() && text.bytes().all(|b| b.is_ascii_digit()) {
        let v = parse_int("instrument", text)?;
        check("instrument", v, 0, 127)?;
        return Ok(v as u8);
    }
    program_for_name(text).ok_or_else(|| ParamError::UnknownInstrument(text.to_string()))
}

pub fn parse_scale(text: &str) -> Result<MajorScale, ParamError> {
    text.parse()
        .map_err(|_| ParamError::UnknownScale(text.trim().to_string()))
}

fn parse_int(name: &'static str, text: &str) -> Result<i64, ParamError> {
    text.trim().parse().map_err(|_| ParamError::NotAnInteger {
        name,
        value: text.trim().to_string(),
    })
}
