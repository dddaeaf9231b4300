//! Turns a validated melody into the melody track's event stream.

use std::fmt;

use thiserror::Error;

use crate::nmn::{Beats, Melody};
use crate::params::ParamSet;
use crate::pitch::{map_note, RangeError};

/// Fixed grid: one beat is four ticks.
pub const TICKS_PER_BEAT: u32 = 4;
pub const MELODY_CHANNEL: u8 = 0;
pub const PERCUSSION_CHANNEL: u8 = 9;
pub const ALL_NOTES_OFF: u8 = 123;
const NOTE_OFF_VELOCITY: u8 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EventKind {
    NoteOn {
        channel: u8,
        note: u8,
        velocity: u8,
    },
    NoteOff {
        channel: u8,
        note: u8,
        velocity: u8,
    },
    ProgramChange {
        channel: u8,
        program: u8,
    },
    ControlChange {
        channel: u8,
        controller: u8,
        value: u8,
    },
    EndOfTrack,
}

impl EventKind {
    pub fn channel(&self) -> Option<u8> {
        match *self {
            EventKind::NoteOn { channel, .. }
            | EventKind::NoteOff { channel, .. }
            | EventKind::ProgramChange { channel, .. }
            | EventKind::ControlChange { channel, .. } => Some(channel),
            EventKind::EndOfTrack => None,
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            EventKind::NoteOn {
                channel,
                note,
                velocity,
            } => write!(f, "NoteOn ch={channel} note={note} vel={velocity}"),
            EventKind::NoteOff {
                channel,
                note,
                velocity,
            } => write!(f, "NoteOff ch={channel} note={note} vel={velocity}"),
            EventKind::ProgramChange { channel, program } => {
                write!(f, "ProgramChange ch={channel} program={program}")
            }
            EventKind::ControlChange {
                channel,
                controller,
                value,
            } => write!(
                f,
                "ControlChange ch={channel} controller={controller} value={value}"
            ),
            EventKind::EndOfTrack => f.write_str("EndOfTrack"),
        }
    }
}

/// A track event preceded by its delta time in ticks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MidiEvent {
    pub delta_ticks: u32,
    pub kind: EventKind,
}

impl MidiEvent {
    pub fn new(delta_ticks: u32, kind: EventKind) -> Self {
        MidiEvent { delta_ticks, kind }
    }
}

impl fmt::Display for MidiEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "+{} {}", self.delta_ticks, self.kind)
    }
}

/// A tempo that does not fall on the tick grid; the value is still rounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("tempo {position} ({beats} beats) is not a multiple of 1/{TICKS_PER_BEAT} beat; rounded to {ticks} ticks")]
pub struct QuantizationWarning {
    pub position: usize,
    pub beats: Beats,
    pub ticks: u32,
}

/// Rounds to the nearest tick, halves away from zero.
pub fn beats_to_ticks(beats: Beats) -> u32 {
    let per_tick = 1000 / TICKS_PER_BEAT;
    (beats.millibeats() + per_tick / 2) / per_tick
}

pub fn is_on_grid(beats: Beats) -> bool {
    beats.millibeats().is_multiple_of(1000 / TICKS_PER_BEAT)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SequencerOptions {
    /// Emit NoteOff events when time moves past sounding notes. Off by
    /// default; the reference output contains none.
    pub note_off: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MelodyTrack {
    pub events: Vec<MidiEvent>,
    pub warnings: Vec<QuantizationWarning>,
}

/// Builds the melody track: program change, one NoteOn per pitched token
/// (repeated `params.repeat` times), then All Notes Off and End of Track.
///
/// Rests and durations accumulate into the delta of the next event, so a
/// tempo of 0 strikes a note together with the following one.
pub fn compile_melody_track(
    melody: &Melody,
    params: &ParamSet,
    options: SequencerOptions,
) -> Result<MelodyTrack, RangeError> {
    let velocity = params.tune_volume.saturating_mul(10).min(127);
    let mut warnings = Vec::new();
    let mut body = Vec::with_capacity(melody.len());
    for (i, (tune, tempo)) in melody.notes().enumerate() {
        let ticks = beats_to_ticks(tempo.beats);
        if !is_on_grid(tempo.beats) {
            warnings.push(QuantizationWarning {
                position: i + 1,
                beats: tempo.beats,
                ticks,
            });
        }
        let note = if tune.is_rest() {
            None
        } else {
            Some(map_note(tune, params.scale)?.value())
        };
        body.push((note, ticks));
    }

    let mut events = vec![MidiEvent::new(
        0,
        EventKind::ProgramChange {
            channel: MELODY_CHANNEL,
            program: params.instrument,
        },
    )];
    let mut pending = 0u32;
    let mut sounding: Vec<u8> = Vec::new();
    for _ in 0..params.repeat {
        for &(note, ticks) in &body {
            if options.note_off && pending > 0 && !sounding.is_empty() {
                release(&mut events, &mut sounding, &mut pending);
            }
            if let Some(note) = note {
                events.push(MidiEvent::new(
                    pending,
                    EventKind::NoteOn {
                        channel: MELODY_CHANNEL,
                        note,
                        velocity,
                    },
                ));
                pending = 0;
                if options.note_off {
                    sounding.push(note);
                }
            }
            pending = pending.saturating_add(ticks);
        }
    }
    if !sounding.is_empty() {
        release(&mut events, &mut sounding, &mut pending);
    }
    events.push(MidiEvent::new(
        pending,
        EventKind::ControlChange {
            channel: MELODY_CHANNEL,
            controller: ALL_NOTES_OFF,
            value: 0,
        },
    ));
    events.push(MidiEvent::new(0, EventKind::EndOfTrack));
    Ok(MelodyTrack { events, warnings })
}

fn release(events: &mut Vec<MidiEvent>, sounding: &mut Vec<u8>, pending: &mut u32) {
    for note in sounding.drain(..) {
        events.push(MidiEvent::new(
            std::mem::take(pending),
            EventKind::NoteOff {
                channel: MELODY_CHANNEL,
                note,
                velocity: NOTE_OFF_VELOCITY,
            },
        ));
    }
}

pub fn total_ticks(events: &[MidiEvent]) -> u64 {
    events.iter().map(|e| u64::from(e.delta_ticks)).sum()
}
