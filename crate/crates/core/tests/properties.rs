use nmnc_core::nmn::{
    parse_tempo_list, parse_tune_list, render_tempo_list, render_tune_list, validate_melody, Beats,
};
use nmnc_core::pitch::{map_note, MajorScale};
use nmnc_core::rhythm::{compile_rhythm_track, pattern_for};
use nmnc_core::sequencer::{beats_to_ticks, compile_melody_track, total_ticks, EventKind};
use nmnc_core::smf::{decode_vlq, encode_vlq, read_smf, write_smf};
use nmnc_core::{
    compile_melody, Melody, ParamSet, RhythmStyle, SequencerOptions, TempoToken, TuneToken,
};
use proptest::prelude::*;

fn tune_token(max_shift: i8) -> impl Strategy<Value = TuneToken> {
    prop_oneof![
        1 => Just(TuneToken::REST),
        4 => (1..=7u8, -5..=max_shift, any::<bool>()).prop_map(|(d, s, sharp)| {
            TuneToken::note(d, s, sharp).or(TuneToken::note(d, s, false)).unwrap()
        }),
    ]
}

fn tempo_token() -> impl Strategy<Value = TempoToken> {
    prop_oneof![
        1 => Just(TempoToken::new(Beats::ZERO)),
        5 => (1..=16u32).prop_map(|q| TempoToken::new(Beats::from_millibeats(q * 250))),
    ]
}

fn melody() -> impl Strategy<Value = Melody> {
    prop::collection::vec((tune_token(3), tempo_token()), 1..40).prop_map(|pairs| {
        let (t, b) = pairs.into_iter().unzip();
        validate_melody(t, b).unwrap()
    })
}

fn params() -> impl Strategy<Value = ParamSet> {
    (
        0..=10u8,
        0..=10u8,
        0..=10u8,
        0..=127u8,
        0..12u8,
        0..5usize,
        1..=4u16,
    )
        .prop_map(
            |(speed, tv, rv, instrument, root, rhythm, repeat)| ParamSet {
                speed,
                tune_volume: tv,
                rhythm_volume: rv,
                instrument,
                scale: MajorScale::from_root_offset(root).unwrap(),
                rhythm: RhythmStyle::ALL[rhythm],
                repeat,
            },
        )
}

fn note_ons(events: &[nmnc_core::MidiEvent]) -> Vec<(u8, u8, u8)> {
    events
        .iter()
        .filter_map(|e| match e.kind {
            EventKind::NoteOn {
                channel,
                note,
                velocity,
            } => Some((channel, note, velocity)),
            _ => None,
        })
        .collect()
}

proptest! {
    #[test]
    fn tune_render_parse_identity(tokens in prop::collection::vec(tune_token(5), 0..50)) {
        let text = render_tune_list(&tokens);
        prop_assert_eq!(parse_tune_list(&text).unwrap(), tokens);
    }

    #[test]
    fn tempo_render_parse_identity(ms in prop::collection::vec(0..100_000u32, 0..50)) {
        let tokens: Vec<TempoToken> =
            ms.into_iter().map(|m| TempoToken::new(Beats::from_millibeats(m))).collect();
        prop_assert_eq!(parse_tempo_list(&render_tempo_list(&tokens)).unwrap(), tokens);
    }

    #[test]
    fn rendering_normalizes_separators(
        tokens in prop::collection::vec(tune_token(5), 1..30),
        seps in prop::collection::vec(prop::sample::select(vec![",", " ", ", ", "\n", " ,\t"]), 30),
    ) {
        let mut messy = String::from("  ");
        for (i, t) in tokens.iter().enumerate() {
            if i > 0 {
                messy.push_str(seps[i]);
            }
            messy.push_str(&t.to_string());
        }
        messy.push('\n');
        let canonical = render_tune_list(&parse_tune_list(&messy).unwrap());
        prop_assert_eq!(&canonical, &render_tune_list(&tokens));
        prop_assert_eq!(render_tune_list(&parse_tune_list(&canonical).unwrap()), canonical);
    }

    #[test]
    fn vlq_round_trip(n in 0..=0x0FFF_FFFFu32) {
        let bytes = encode_vlq(n).unwrap();
        prop_assert_eq!(decode_vlq(&bytes).unwrap(), (n, bytes.len()));
    }

    #[test]
    fn smf_round_trip(m in melody(), p in params(), note_off in any::<bool>()) {
        let out = compile_melody(&m, &p, SequencerOptions { note_off }).unwrap();
        prop_assert_eq!(read_smf(&out.bytes).unwrap(), out.file.clone());
        prop_assert_eq!(write_smf(&out.file).unwrap(), out.bytes);
    }

    #[test]
    fn melody_track_invariants(m in melody(), p in params()) {
        let track = compile_melody_track(&m, &p, SequencerOptions::default()).unwrap();
        let ev = &track.events;
        prop_assert_eq!(ev[0].kind, EventKind::ProgramChange { channel: 0, program: p.instrument });
        prop_assert_eq!(
            ev[ev.len() - 2].kind,
            EventKind::ControlChange { channel: 0, controller: 123, value: 0 }
        );
        prop_assert_eq!(ev[ev.len() - 1].kind, EventKind::EndOfTrack);
        let ons = note_ons(ev);
        let pitched = m.tunes().iter().filter(|t| !t.is_rest()).count();
        prop_assert_eq!(ons.len(), usize::from(p.repeat) * pitched);
        prop_assert!(ons.iter().all(|&(c, _, v)| c == 0 && v == p.tune_volume * 10));
        let body: u64 = m.tempos().iter().map(|t| u64::from(beats_to_ticks(t.beats))).sum();
        prop_assert_eq!(total_ticks(ev), u64::from(p.repeat) * body);
    }

    #[test]
    fn transposition_shifts_only_notes(m in melody(), p in params()) {
        let in_c = ParamSet { scale: MajorScale::C, ..p };
        let base = compile_melody_track(&m, &in_c, SequencerOptions::default()).unwrap().events;
        let moved = compile_melody_track(&m, &p, SequencerOptions::default()).unwrap().events;
        let r = p.scale.root_offset();
        prop_assert_eq!(base.len(), moved.len());
        for (a, b) in base.iter().zip(&moved) {
            match (a.kind, b.kind) {
                (EventKind::NoteOn { note: x, .. }, EventKind::NoteOn { note: y, .. }) => {
                    prop_assert_eq!(x + r, y);
                    prop_assert_eq!(a.delta_ticks, b.delta_ticks);
                }
                _ => prop_assert_eq!(a, b),
            }
        }
    }

    #[test]
    fn octave_marks_move_twelve(d in 1..=7u8, s in -5..=2i8, root in 0..12u8) {
        let scale = MajorScale::from_root_offset(root).unwrap();
        let lo = map_note(TuneToken::note(d, s, false).unwrap(), scale).unwrap();
        let hi = map_note(TuneToken::note(d, s + 1, false).unwrap(), scale).unwrap();
        prop_assert_eq!(hi.value() - lo.value(), 12);
    }

    #[test]
    fn rhythm_tracks_match_melody_length(
        style in prop::sample::select(RhythmStyle::ALL[1..].to_vec()),
        ticks in 0..2000u64,
        vol in 0..=10u8,
    ) {
        let pattern = pattern_for(style).unwrap();
        let ev = compile_rhythm_track(&pattern, ticks, vol);
        prop_assert_eq!(total_ticks(&ev), ticks);
        prop_assert!(note_ons(&ev).iter().all(|&(c, n, _)| c == 9 && (35..=81).contains(&n)));
        prop_assert_eq!(compile_rhythm_track(&pattern, ticks, vol), ev);
    }
}

#[test]
fn vlq_exhaustive_low_range_and_boundaries() {
    for n in (0..100_000).chain([
        0x7F,
        0x80,
        0x3FFF,
        0x4000,
        0x1F_FFFF,
        0x20_0000,
        0x0FFF_FFFF,
    ]) {
        let bytes = encode_vlq(n).unwrap();
        assert_eq!(decode_vlq(&bytes).unwrap(), (n, bytes.len()), "{n}");
        let minimal = match n {
            0..=0x7F => 1,
            0x80..=0x3FFF => 2,
            0x4000..=0x1F_FFFF => 3,
            _ => 4,
        };
        assert_eq!(bytes.len(), minimal, "{n}");
    }
}
