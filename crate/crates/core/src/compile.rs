//! End-to-end compilation: box text and parameters in, SMF bytes out.

use crate::error::{Error, Result};
use crate::nmn::{parse_tempo_list, parse_tune_list, validate_melody, Melody};
use crate::params::ParamSet;
use crate::rhythm::{compile_rhythm_track, pattern_for};
use crate::sequencer::{compile_melody_track, total_ticks, QuantizationWarning, SequencerOptions};
use crate::smf::{write_smf, Format, SmfFile, SmfHeader};

/// Default output file name.
pub const DEFAULT_OUTPUT: &str = "0001.mid";

/// Longest melody accepted, in ticks (65536 beats).
pub const MAX_TOTAL_TICKS: u64 = 1 << 18;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compiled {
    pub file: SmfFile,
    pub bytes: Vec<u8>,
    pub total_ticks: u64,
    pub warnings: Vec<QuantizationWarning>,
}

pub fn parse_melody(tune_text: &str, tempo_text: &str) -> Result<Melody> {
    let tunes = parse_tune_list(tune_text).map_err(Error::TuneSyntax)?;
    let tempos = parse_tempo_list(tempo_text).map_err(Error::TempoSyntax)?;
    Ok(validate_melody(tunes, tempos)?)
}

pub fn compile_text(
    tune_text: &str,
    tempo_text: &str,
    params: &ParamSet,
    options: SequencerOptions,
) -> Result<Compiled> {
    params.validate()?;
    let melody = parse_melody(tune_text, tempo_text)?;
    compile_melody(&melody, params, options)
}

/// A format 0 file with just the melody track, or a format 1 file with the
/// melody track followed by a rhythm track of equal length.
pub fn compile_melody(
    melody: &Melody,
    params: &ParamSet,
    options: SequencerOptions,
) -> Result<Compiled> {
    params.validate()?;
    let melody_track = compile_melody_track(melody, params, options)?;
    let ticks = total_ticks(&melody_track.events);
    if ticks > MAX_TOTAL_TICKS {
        return Err(Error::TooLong {
            ticks,
            max: MAX_TOTAL_TICKS,
        });
    }
    let header = |format| SmfHeader {
        format,
        division: params.division(),
    };
    let file = match pattern_for(params.rhythm) {
        None => SmfFile::new(header(Format::Single), vec![melody_track.events]),
        Some(pattern) => {
            let rhythm = compile_rhythm_track(&pattern, ticks, params.rhythm_volume);
            SmfFile::new(header(Format::Parallel), vec![melody_track.events, rhythm])
        }
    }
    .expect("compiler output satisfies header invariants");
    let bytes = write_smf(&file)?;
    Ok(Compiled {
        file,
        bytes,
        total_ticks: ticks,
        warnings: melody_track.warnings,
    })
}
