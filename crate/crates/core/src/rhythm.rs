//! Percussion accompaniment for the second track.
//!
//! Each style is a single bar of drum hits looped from tick 0 and cut off
//! at the melody's length. The bars are plain constants and can be swapped
//! without touching the generator.

use crate::params::RhythmStyle;
use crate::sequencer::{EventKind, MidiEvent, ALL_NOTES_OFF, PERCUSSION_CHANNEL};

pub const KICK: u8 = 35;
pub const SNARE: u8 = 38;
pub const CLOSED_HIHAT: u8 = 42;
pub const WOODBLOCK: u8 = 76;

const ACCENT_BOOST: u8 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hit {
    pub tick_offset: u32,
    pub note: u8,
    pub accent: bool,
}

const fn hit(tick_offset: u32, note: u8, accent: bool) -> Hit {
    Hit {
        tick_offset,
        note,
        accent,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RhythmPattern {
    pub style: RhythmStyle,
    pub bar_ticks: u32,
    pub hits: &'static [Hit],
}

const WALTZ: [Hit; 3] = [
    hit(0, KICK, true),
    hit(4, SNARE, false),
    hit(8, SNARE, false),
];

const ROCK: [Hit; 8] = [
    hit(0, KICK, true),
    hit(2, CLOSED_HIHAT, false),
    hit(4, SNARE, false),
    hit(6, CLOSED_HIHAT, false),
    hit(8, KICK, false),
    hit(10, CLOSED_HIHAT, false),
    hit(12, SNARE, false),
    hit(14, CLOSED_HIHAT, false),
];

const DISCO: [Hit; 8] = [
    hit(0, KICK, true),
    hit(2, CLOSED_HIHAT, false),
    hit(4, KICK, true),
    hit(6, CLOSED_HIHAT, false),
    hit(8, KICK, true),
    hit(10, CLOSED_HIHAT, false),
    hit(12, KICK, true),
    hit(14, CLOSED_HIHAT, false),
];

const RUMBA: [Hit; 5] = [
    hit(0, KICK, true),
    hit(3, WOODBLOCK, false),
    hit(6, WOODBLOCK, false),
    hit(8, SNARE, false),
    hit(12, WOODBLOCK, false),
];

/// The one-bar figure for a style; `None` has no pattern.
pub fn pattern_for(style: RhythmStyle) -> Option<RhythmPattern> {
    let (bar_ticks, hits): (u32, &'static [Hit]) = match style {
        RhythmStyle::None => return None,
        RhythmStyle::Waltz => (12, &WALTZ),
        RhythmStyle::Rock => (16, &ROCK),
        RhythmStyle::Disco => (16, &DISCO),
        RhythmStyle::Rumba => (16, &RUMBA),
    };
    Some(RhythmPattern {
        style,
        bar_ticks,
        hits,
    })
}

/// Loops `pattern` over `melody_ticks` on the percussion channel and closes
/// the track exactly at `melody_ticks`.
pub fn compile_rhythm_track(
    pattern: &RhythmPattern,
    melody_ticks: u64,
    rhythm_volume: u8,
) -> Vec<MidiEvent> {
    let base = rhythm_volume.saturating_mul(10).min(127);
    let velocity = |accent: bool| {
        if accent && base > 0 {
            base.saturating_add(ACCENT_BOOST).min(127)
        } else {
            base
        }
    };
    let bar = u64::from(pattern.bar_ticks);
    let mut events = Vec::new();
    let mut last = 0u64;
    let mut bar_start = 0u64;
    'bars: while bar_start < melody_ticks {
        for h in pattern.hits {
            let at = bar_start + u64::from(h.tick_offset);
            if at >= melody_ticks {
                break 'bars;
            }
            events.push(MidiEvent::new(
                (at - last) as u32,
                EventKind::NoteOn {
                    channel: PERCUSSION_CHANNEL,
                    note: h.note,
                    velocity: velocity(h.accent),
                },
            ));
            last = at;
        }
        bar_start += bar;
    }
    events.push(MidiEvent::new(
        (melody_ticks - last) as u32,
        EventKind::ControlChange {
            channel: PERCUSSION_CHANNEL,
            controller: ALL_NOTES_OFF,
            value: 0,
        },
    ));
    events.push(MidiEvent::new(0, EventKind::EndOfTrack));
    events
}
