use std::path::Path;
use std::process::Command;

use nmnc_cli::run;
use nmnc_core::read_smf;
use nmnc_core::sequencer::EventKind;

struct Run {
    code: i32,
    stdout: Vec<u8>,
    stderr: String,
}

fn nmnc(args: &[&str]) -> Run {
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let argv = std::iter::once("nmnc").chain(args.iter().copied());
    let code = run(argv, &mut stdout, &mut stderr);
    Run {
        code,
        stdout,
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn text(r: &Run) -> String {
    String::from_utf8(r.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn compile_library_song_to_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("hb.mid");
    let r = nmnc(&[
        "compile",
        "--library",
        "happy-birthday",
        "-o",
        path_str(&out),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(text(&r).contains("133 bytes, 96 ticks"));
    assert_eq!(std::fs::read(&out).unwrap().len(), 133);
}

#[test]
fn default_output_is_0001_mid_in_working_dir() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_nmnc"))
        .args(["compile", "--library", "happy-birthday"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(status.status.success());
    assert_eq!(
        std::fs::read(dir.path().join("0001.mid")).unwrap().len(),
        133
    );
}

#[test]
fn binary_exit_codes() {
    let code = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_nmnc"))
            .args(args)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(
        code(&["compile", "--tune", "5", "--tempo", "1,2", "-o", "-"]),
        Some(1)
    );
    assert_eq!(code(&["library", "show", "nope"]), Some(4));
    assert_eq!(code(&["frobnicate"]), Some(64));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn chord_to_stdout() {
    let r = nmnc(&[
        "compile", "--tune", "1,3,5,0", "--tempo", "0,0,0,2", "-o", "-",
    ]);
    assert_eq!(r.code, 0);
    assert!(r.stderr.contains("8 ticks"));
    let file = read_smf(&r.stdout).unwrap();
    let ons: Vec<_> = file.tracks()[0]
        .iter()
        .filter_map(|e| match e.kind {
            EventKind::NoteOn { note, .. } => Some((e.delta_ticks, note)),
            _ => None,
        })
        .collect();
    assert_eq!(ons, [(0, 60), (0, 64), (0, 67)]);
}

#[test]
fn validation_exit_codes() {
    let r = nmnc(&["compile", "--tune", "5", "--tempo", "1,2", "-o", "-"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("Error 1"));
    assert!(r.stderr.contains("(1)") && r.stderr.contains("(2)"));
    assert!(r.stdout.is_empty());

    let r = nmnc(&["compile", "--tune", "", "--tempo", "", "-o", "-"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("Error 2"));

    for (tune, tempo) in [
        ("8", "1"),
        ("--5", "1"),
        ("0.5", "1"),
        ("1", "-1"),
        ("100000", "1"),
    ] {
        let r = nmnc(&[
            "compile", "--tune", tune, "--tempo", tempo, "--scale", "B", "-o", "-",
        ]);
        assert_eq!(r.code, 3, "{tune} / {tempo}: {}", r.stderr);
    }
}

#[test]
fn usage_errors_are_64() {
    for args in [
        &["compile"][..],
        &["compile", "--tune", "1"],
        &["compile", "--tune", "1", "--tempo", "1", "--speed", "11"],
        &[
            "compile",
            "--tune",
            "1",
            "--tempo",
            "1",
            "--instrument",
            "Kazoo",
        ],
        &["compile", "--tune", "1", "--tempo", "1", "--scale", "H"],
        &["compile", "--tune", "1", "--tempo", "1", "--repeat", "0"],
        &[
            "compile",
            "--library",
            "happy-birthday",
            "--tune",
            "1",
            "--tempo",
            "1",
        ],
        &["inspect"],
        &["library"],
        &[],
    ] {
        let r = nmnc(args);
        assert_eq!(r.code, 64, "{args:?}");
        assert!(!r.stderr.is_empty());
    }
}

#[test]
fn flags_override_document() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("song.nmn");
    std::fs::write(
        &doc,
        "# test\nTUNE: 1 2 3\nTEMPO: 1 1 1\nSPEED: 5\nSCALE: F#\nRHYTHM: waltz\n",
    )
    .unwrap();
    let r = nmnc(&[
        "compile",
        "--input",
        path_str(&doc),
        "--speed",
        "7",
        "-o",
        "-",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let file = read_smf(&r.stdout).unwrap();
    assert_eq!(file.header().division, 7);
    assert_eq!(file.ntracks(), 2);
    assert!(file.tracks()[0]
        .iter()
        .any(|e| matches!(e.kind, EventKind::NoteOn { note: 66, .. })));
}

#[test]
fn instrument_by_name_or_number() {
    for inst in ["32", "acoustic bass"] {
        let r = nmnc(&[
            "compile",
            "--tune",
            "1",
            "--tempo",
            "1",
            "--instrument",
            inst,
            "-o",
            "-",
        ]);
        assert_eq!(r.code, 0);
        let file = read_smf(&r.stdout).unwrap();
        assert_eq!(
            file.tracks()[0][0].kind,
            EventKind::ProgramChange {
                channel: 0,
                program: 32
            }
        );
    }
}

#[test]
fn bad_documents() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("bad.nmn");
    std::fs::write(&doc, "TUNE: 1\nTEMPO: 1\nTEMP: 2\n").unwrap();
    let r = nmnc(&["compile", "--input", path_str(&doc), "-o", "-"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("line 3"));

    let missing = dir.path().join("missing.nmn");
    let r = nmnc(&["compile", "--input", path_str(&missing)]);
    assert_eq!(r.code, 66);
}

#[test]
fn unwritable_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("no/such/dir/x.mid");
    let r = nmnc(&[
        "compile",
        "--tune",
        "1",
        "--tempo",
        "1",
        "-o",
        path_str(&out),
    ]);
    assert_eq!(r.code, 73);
}

#[test]
fn quantization_warnings_go_to_stderr() {
    let r = nmnc(&["compile", "--tune", "1 2", "--tempo", "0.3 1", "-o", "-"]);
    assert_eq!(r.code, 0);
    assert!(r.stderr.contains("warning: tempo 1"));
}

#[test]
fn inspect_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("hb.mid");
    assert_eq!(
        nmnc(&[
            "compile",
            "--library",
            "happy-birthday",
            "-o",
            path_str(&out)
        ])
        .code,
        0
    );

    let r = nmnc(&["inspect", path_str(&out), "--hex"]);
    assert_eq!(r.code, 0);
    let hex = text(&r);
    assert_eq!(hex.lines().count(), 9);
    assert!(hex.starts_with("4D 54 68 64 00 00 00 06 00 00 00 01 00 03 4D 54\n"));

    let r = nmnc(&["inspect", path_str(&out), "--events"]);
    let events = text(&r);
    assert_eq!(events.lines().count(), 28);
    assert_eq!(
        events.lines().nth(1),
        Some("+0 NoteOn ch=0 note=67 vel=100")
    );

    let r = nmnc(&["inspect", path_str(&out)]);
    assert!(text(&r).contains("format 0, 1 track(s), division 3, 133 bytes"));
    assert!(text(&r).contains("track 0: 28 events, 96 ticks"));
}

#[test]
fn inspect_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mid");
    std::fs::write(
        &bad,
        b"MThd\x00\x00\x00\x06\x00\x00\x00\x01\x00\x03MTrk\x00\x00\x00\x04\x00\xF5\x00\x00",
    )
    .unwrap();
    let r = nmnc(&["inspect", path_str(&bad)]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("byte"));

    let r = nmnc(&["inspect", path_str(&dir.path().join("missing.mid"))]);
    assert_eq!(r.code, 66);
}

#[test]
fn inspect_tags_tracks_of_rhythm_files() {
    let r = nmnc(&[
        "compile", "--tune", "1 2", "--tempo", "2 2", "--rhythm", "rock", "-o", "-",
    ]);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.mid");
    std::fs::write(&out, &r.stdout).unwrap();
    let r = nmnc(&["inspect", path_str(&out), "--events"]);
    let events = text(&r);
    assert!(events
        .lines()
        .all(|l| l.starts_with("[0] ") || l.starts_with("[1] ")));
    assert!(events.contains("[1] +0 NoteOn ch=9"));
}

#[test]
fn library_commands() {
    let r = nmnc(&["library", "list"]);
    assert_eq!(r.code, 0);
    let list = text(&r);
    assert_eq!(list.lines().count(), 4);
    assert!(list
        .lines()
        .next()
        .unwrap()
        .starts_with("happy-birthday\tHappy Birthday"));

    let r = nmnc(&["library", "show", "happy-birthday"]);
    assert_eq!(r.code, 0);
    let shown = text(&r);
    assert!(shown.contains("TUNE: 5,5,6,5,10,7"));
    assert!(shown.contains("TEMPO: 0.5,0.5,1,1,1,2"));

    let r = nmnc(&["library", "show", "no-such-song"]);
    assert_eq!(r.code, 4);
    assert!(r.stdout.is_empty());
}

#[test]
fn shown_song_compiles_identically() {
    let dir = tempfile::tempdir().unwrap();
    for id in [
        "happy-birthday",
        "christmas-eve-song",
        "amazing-grace",
        "happy-day",
    ] {
        let shown = nmnc(&["library", "show", id]).stdout;
        let doc = dir.path().join(format!("{id}.nmn"));
        std::fs::write(&doc, shown).unwrap();
        let a = nmnc(&["compile", "--input", path_str(&doc), "-o", "-"]).stdout;
        let b = nmnc(&["compile", "--library", id, "-o", "-"]).stdout;
        assert!(!a.is_empty());
        assert_eq!(a, b, "{id}");
    }
}

#[test]
fn library_dir_overrides_bundled_songs() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("tiny.nmn"),
        "TITLE: Tiny\nTUNE: 1\nTEMPO: 1\n",
    )
    .unwrap();
    let r = nmnc(&["library", "list", "--library-dir", path_str(dir.path())]);
    assert_eq!(text(&r), "tiny\tTiny\n");
    let r = nmnc(&[
        "compile",
        "--library",
        "tiny",
        "--library-dir",
        path_str(dir.path()),
        "-o",
        "-",
    ]);
    assert_eq!(r.code, 0);
    let r = nmnc(&[
        "library",
        "list",
        "--library-dir",
        path_str(&dir.path().join("nope")),
    ]);
    assert_eq!(r.code, 66);
}
