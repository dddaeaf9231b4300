//! The `.nmn` text format.
//!
//! ```text
//! # comment
//! TITLE: Happy Birthday
//! TUNE: 5,5,6,5,10,7
//! TEMPO: 0.5,0.5,1,1,1,2
//! SPEED: 3
//! ```
//!
//! Keys are case-insensitive and may appear at most once. `TUNE` and
//! `TEMPO` carry the box contents verbatim; the remaining keys override
//! performance parameters.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::params::{
    parse_instrument, parse_level, parse_repeat, parse_scale, ParamError, ParamOverrides,
    RhythmStyle,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DocumentErrorKind {
    #[error("expected `KEY: value`")]
    MissingColon,
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("key {0} given twice")]
    DuplicateKey(&'static str),
    #[error(transparent)]
    BadValue(#[from] ParamError),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct DocumentError {
    pub line: usize,
    pub kind: DocumentErrorKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Key {
    Title,
    Tune,
    Tempo,
    Speed,
    Volume,
    RhythmVolume,
    Instrument,
    Scale,
    Rhythm,
    Repeat,
}

impl Key {
    const ALL: [Key; 10] = [
        Key::Title,
        Key::Tune,
        Key::Tempo,
        Key::Speed,
        Key::Volume,
        Key::RhythmVolume,
        Key::Instrument,
        Key::Scale,
        Key::Rhythm,
        Key::Repeat,
    ];

    fn name(self) -> &'static str {
        match self {
            Key::Title => "TITLE",
            Key::Tune => "TUNE",
            Key::Tempo => "TEMPO",
            Key::Speed => "SPEED",
            Key::Volume => "VOLUME",
            Key::RhythmVolume => "RHYTHM-VOLUME",
            Key::Instrument => "INSTRUMENT",
            Key::Scale => "SCALE",
            Key::Rhythm => "RHYTHM",
            Key::Repeat => "REPEAT",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NmnDocument {
    pub title: Option<String>,
    pub tune_text: String,
    pub tempo_text: String,
    pub overrides: ParamOverrides,
}

impl FromStr for NmnDocument {
    type Err = DocumentError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut doc = NmnDocument::default();
        let mut seen = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |kind| DocumentError { line: i + 1, kind };
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| err(DocumentErrorKind::MissingColon))?;
            let key_text = key.trim();
            let key = Key::ALL
                .into_iter()
                .find(|k| k.name().eq_ignore_ascii_case(key_text))
                .ok_or_else(|| err(DocumentErrorKind::UnknownKey(key_text.to_string())))?;
            if seen.contains(&key) {
                return Err(err(DocumentErrorKind::DuplicateKey(key.name())));
            }
            seen.push(key);
            let value = value.trim();
            let o = &mut doc.overrides;
            let set: Result<(), ParamError> = match key {
                Key::Title => {
                    doc.title = Some(value.to_string());
                    Ok(())
                }
                Key::Tune => {
                    doc.tune_text = value.to_string();
                    Ok(())
                }
                Key::Tempo => {
                    doc.tempo_text = value.to_string();
                    Ok(())
                }
                Key::Speed => parse_level("speed", value).map(|v| o.speed = Some(v)),
                Key::Volume => parse_level("volume", value).map(|v| o.tune_volume = Some(v)),
                Key::RhythmVolume => {
                    parse_level("rhythm volume", value).map(|v| o.rhythm_volume = Some(v))
                }
                Key::Instrument => parse_instrument(value).map(|v| o.instrument = Some(v)),
                Key::Scale => parse_scale(value).map(|v| o.scale = Some(v)),
                Key::Rhythm => value.parse::<RhythmStyle>().map(|v| o.rhythm = Some(v)),
                Key::Repeat => parse_repeat(value).map(|v| o.repeat = Some(v)),
            };
            set.map_err(|e| err(e.into()))?;
        }
        Ok(doc)
    }
}

impl fmt::Display for NmnDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(title) = &self.title {
            writeln!(f, "TITLE: {title}")?;
        }
        writeln!(f, "TUNE: {}", self.tune_text)?;
        writeln!(f, "TEMPO: {}", self.tempo_text)?;
        let o = &self.overrides;
        if let Some(v) = o.speed {
            writeln!(f, "SPEED: {v}")?;
        }
        if let Some(v) = o.tune_volume {
            writeln!(f, "VOLUME: {v}")?;
        }
        if let Some(v) = o.rhythm_volume {
            writeln!(f, "RHYTHM-VOLUME: {v}")?;
        }
        if let Some(v) = o.instrument {
            writeln!(f, "INSTRUMENT: {v}")?;
        }
        if let Some(v) = o.scale {
            writeln!(f, "SCALE: {v}")?;
        }
        if let Some(v) = o.rhythm {
            writeln!(f, "RHYTHM: {v}")?;
        }
        if let Some(v) = o.repeat {
            writeln!(f, "REPEAT: {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pitch::MajorScale;

    #[test]
    fn parses_all_keys() {
        let doc: NmnDocument = "\
# a comment
title: Test
TUNE: 1, 2, 3
TEMPO: 1 1 2

SPEED: 5
VOLUME: 7
RHYTHM-VOLUME: 4
INSTRUMENT: Acoustic Bass
SCALE: F#
RHYTHM: rumba
REPEAT: 2
"
        .parse()
        .unwrap();
        assert_eq!(doc.title.as_deref(), Some("Test"));
        assert_eq!(doc.tune_text, "1, 2, 3");
        assert_eq!(doc.tempo_text, "1 1 2");
        let o = &doc.overrides;
        assert_eq!(o.speed, Some(5));
        assert_eq!(o.tune_volume, Some(7));
        assert_eq!(o.rhythm_volume, Some(4));
        assert_eq!(o.instrument, Some(32));
        assert_eq!(o.scale, Some(MajorScale::Fs));
        assert_eq!(o.rhythm, Some(RhythmStyle::Rumba));
        assert_eq!(o.repeat, Some(2));
        let again: NmnDocument = doc.to_string().parse().unwrap();
        assert_eq!(again, doc);
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        let err = "TUNE: 1\nTEMPOO: 1\n".parse::<NmnDocument>().unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.kind, DocumentErrorKind::UnknownKey("TEMPOO".into()));
        let err = "TUNE: 1\ntune: 2\n".parse::<NmnDocument>().unwrap_err();
        assert_eq!(err.kind, DocumentErrorKind::DuplicateKey("TUNE"));
        let err = "just text".parse::<NmnDocument>().unwrap_err();
        assert_eq!(err.kind, DocumentErrorKind::MissingColon);
    }

    #[test]
    fn bad_values_carry_the_line() {
        let err = "TUNE: 1\nSPEED: 11".parse::<NmnDocument>().unwrap_err();
        assert_eq!(err.line, 2);
        assert!(matches!(err.kind, DocumentErrorKind::BadValue(_)));
        assert!("INSTRUMENT: kazoo".parse::<NmnDocument>().is_err());
        assert!("SCALE: H".parse::<NmnDocument>().is_err());
        assert!("REPEAT: 0".parse::<NmnDocument>().is_err());
    }

    #[test]
    fn missing_boxes_are_blank() {
        let doc: NmnDocument = "SPEED: 4".parse().unwrap();
        assert!(doc.tune_text.is_empty() && doc.tempo_text.is_empty());
    }
}
