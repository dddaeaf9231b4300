//! The `nmnc` command line: compile notation to MIDI, inspect MIDI files and
//! browse the song library. This tool writes files only; it never plays audio.
//!
//! Exit codes:
//!
//! | code | meaning                                           |
//! |------|---------------------------------------------------|
//! | 0    | success                                           |
//! | 1    | Tune and Tempo counts differ                      |
//! | 2    | Tune or Tempo box is blank                        |
//! | 3    | syntax, range, document or MIDI decode error      |
//! | 4    | no library song with that id                      |
//! | 64   | bad command-line usage                            |
//! | 66   | input file missing or unreadable                  |
//! | 73   | output file could not be written                  |

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nmnc_core::params::{parse_instrument, parse_level, parse_repeat, parse_scale};
use nmnc_core::smf::hex_dump;
use nmnc_core::{
    compile_text, read_smf, Compiled, Error, Library, LibraryError, MajorScale, NmnDocument,
    ParamOverrides, ParamSet, RhythmStyle, SequencerOptions, DEFAULT_OUTPUT,
};

pub mod exit {
    pub const OK: i32 = 0;
    pub const COUNT_MISMATCH: i32 = 1;
    pub const BLANK: i32 = 2;
    pub const INVALID: i32 = 3;
    pub const NOT_FOUND: i32 = 4;
    pub const USAGE: i32 = 64;
    pub const NO_INPUT: i32 = 66;
    pub const CANT_CREATE: i32 = 73;
}

#[derive(Debug, Parser)]
#[command(
    name = "nmnc",
    version,
    about = "Numbered musical notation to Standard MIDI File compiler"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile notation to a .mid file.
    Compile(CompileArgs),
    /// Decode a .mid file and print its structure.
    Inspect(InspectArgs),
    /// List or show the bundled songs.
    #[command(subcommand)]
    Library(LibraryCommand),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["input", "tune", "library"])))]
struct CompileArgs {
    /// A .nmn document.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Tune box contents.
    #[arg(long, requires = "tempo", allow_hyphen_values = true)]
    tune: Option<String>,
    /// Tempo box contents.
    #[arg(long, requires = "tune", allow_hyphen_values = true)]
    tempo: Option<String>,
    /// A library song id.
    #[arg(long, value_name = "ID")]
    library: Option<String>,
    /// Read library songs from this directory instead of the bundled set.
    #[arg(long, value_name = "DIR")]
    library_dir: Option<PathBuf>,
    #[arg(long, value_parser = |s: &str| parse_level("speed", s))]
    speed: Option<u8>,
    #[arg(long, value_parser = |s: &str| parse_level("volume", s))]
    volume: Option<u8>,
    #[arg(long, value_parser = |s: &str| parse_level("rhythm volume", s))]
    rhythm_volume: Option<u8>,
    /// General MIDI program number or name.
    #[arg(long, value_name = "N|NAME", value_parser = parse_instrument)]
    instrument: Option<u8>,
    #[arg(long, value_parser = parse_scale)]
    scale: Option<MajorScale>,
    #[arg(long, value_parser = |s: &str| s.parse::<RhythmStyle>())]
    rhythm: Option<RhythmStyle>,
    #[arg(long, value_parser = parse_repeat)]
    repeat: Option<u16>,
    /// Release each note at the next event boundary.
    #[arg(long)]
    note_off: bool,
    /// Output path; `-` writes the bytes to stdout.
    #[arg(short, long, value_name = "PATH", default_value = DEFAULT_OUTPUT)]
    output: PathBuf,
}

impl CompileArgs {
    fn overrides(&self) -> ParamOverrides {
        ParamOverrides {
            speed: self.speed,
            tune_volume: self.volume,
            rhythm_volume: self.rhythm_volume,
            instrument: self.instrument,
            scale: self.scale,
            rhythm: self.rhythm,
            repeat: self.repeat,
        }
    }
}

#[derive(Debug, Args)]
struct InspectArgs {
    file: PathBuf,
    /// Print the bytes as hex, 16 per row.
    #[arg(long)]
    hex: bool,
    /// Print one decoded event per line.
    #[arg(long)]
    events: bool,
}

#[derive(Debug, Subcommand)]
enum LibraryCommand {
    /// One line per song: id, then title.
    List {
        #[arg(long, value_name = "DIR")]
        library_dir: Option<PathBuf>,
    },
    /// Print a song as a .nmn document.
    Show {
        id: String,
        #[arg(long, value_name = "DIR")]
        library_dir: Option<PathBuf>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(i32::from(e.code()), e.to_string())
    }
}

impl From<LibraryError> for Failure {
    fn from(e: LibraryError) -> Self {
        let code = match &e {
            LibraryError::NotFound(_) => exit::NOT_FOUND,
            LibraryError::Io { .. } => exit::NO_INPUT,
            LibraryError::InvalidSong { .. } | LibraryError::Document { .. } => exit::INVALID,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Runs one command line; `args` includes the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                exit::USAGE
            } else {
                let _ = write!(stdout, "{text}");
                exit::OK
            };
        }
    };
    let outcome = match cli.command {
        Command::Compile(args) => cmd_compile(&args, stdout, stderr),
        Command::Inspect(args) => cmd_inspect(&args, stdout),
        Command::Library(cmd) => cmd_library(&cmd, stdout),
    };
    match outcome {
        Ok(()) => exit::OK,
        Err(f) => {
            let _ = writeln!(stderr, "nmnc: {}", f.message);
            f.code
        }
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::new(exit::NO_INPUT, format!("{}: {e}", path.display())))
}

fn load_library(dir: Option<&Path>) -> Result<std::borrow::Cow<'static, Library>, Failure> {
    Ok(match dir {
        Some(dir) => std::borrow::Cow::Owned(Library::load_dir(dir)?),
        None => std::borrow::Cow::Borrowed(Library::builtin()),
    })
}

/// Box texts and document-level parameters for the chosen source.
fn compile_source(args: &CompileArgs) -> Result<(String, String, ParamOverrides), Failure> {
    if let Some(path) = &args.input {
        let bytes = read_input(path)?;
        let text = String::from_utf8(bytes).map_err(|_| {
            Failure::new(exit::INVALID, format!("{}: not UTF-8 text", path.display()))
        })?;
        let doc: NmnDocument = text
            .parse()
            .map_err(|e| Failure::new(exit::INVALID, format!("{}: {e}", path.display())))?;
        return Ok((doc.tune_text, doc.tempo_text, doc.overrides));
    }
    if let Some(id) = &args.library {
        let library = load_library(args.library_dir.as_deref())?;
        let doc = library.get_song(id)?.to_document();
        return Ok((doc.tune_text, doc.tempo_text, doc.overrides));
    }
    Ok((
        args.tune.clone().unwrap_or_default(),
        args.tempo.clone().unwrap_or_default(),
        ParamOverrides::default(),
    ))
}

fn compile(args: &CompileArgs) -> Result<Compiled, Failure> {
    let (tune, tempo, base) = compile_source(args)?;
    let params = base
        .merged_with(&args.overrides())
        .apply(ParamSet::default())
        .map_err(|e| Failure::from(Error::Param(e)))?;
    let options = SequencerOptions {
        note_off: args.note_off,
    };
    Ok(compile_text(&tune, &tempo, &params, options)?)
}

fn cmd_compile(args: &CompileArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let out = compile(args)?;
    for w in &out.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let summary = format!("{} bytes, {} ticks", out.bytes.len(), out.total_ticks);
    if args.output == Path::new("-") {
        stdout
            .write_all(&out.bytes)
            .map_err(|e| Failure::new(exit::CANT_CREATE, format!("stdout: {e}")))?;
        let _ = writeln!(stderr, "{summary}");
    } else {
        fs::write(&args.output, &out.bytes).map_err(|e| {
            Failure::new(exit::CANT_CREATE, format!("{}: {e}", args.output.display()))
        })?;
        let _ = writeln!(stdout, "wrote {}: {summary}", args.output.display());
    }
    Ok(())
}

fn cmd_inspect(args: &InspectArgs, stdout: &mut dyn Write) -> Outcome {
    let bytes = read_input(&args.file)?;
    let file = read_smf(&bytes)
        .map_err(|e| Failure::new(exit::INVALID, format!("{}: {e}", args.file.display())))?;
    let write_err = |e: io::Error| Failure::new(exit::CANT_CREATE, format!("stdout: {e}"));
    if args.hex {
        write!(stdout, "{}", hex_dump(&bytes)).map_err(write_err)?;
    }
    if args.events {
        let tagged = file.ntracks() > 1;
        for (i, track) in file.tracks().iter().enumerate() {
            for ev in track {
                if tagged {
                    write!(stdout, "[{i}] ").map_err(write_err)?;
                }
                writeln!(stdout, "{ev}").map_err(write_err)?;
            }
        }
    }
    if !args.hex && !args.events {
        let h = file.header();
        writeln!(
            stdout,
            "format {}, {} track(s), division {}, {} bytes",
            h.format.code(),
            file.ntracks(),
            h.division,
            bytes.len()
        )
        .map_err(write_err)?;
        for (i, track) in file.tracks().iter().enumerate() {
            writeln!(
                stdout,
                "track {i}: {} events, {} ticks",
                track.len(),
                nmnc_core::sequencer::total_ticks(track)
            )
            .map_err(write_err)?;
        }
    }
    Ok(())
}

fn cmd_library(cmd: &LibraryCommand, stdout: &mut dyn Write) -> Outcome {
    let write_err = |e: io::Error| Failure::new(exit::CANT_CREATE, format!("stdout: {e}"));
    match cmd {
        LibraryCommand::List { library_dir } => {
            let library = load_library(library_dir.as_deref())?;
            for (id, title) in library.list_songs() {
                writeln!(stdout, "{id}\t{title}").map_err(write_err)?;
            }
        }
        LibraryCommand::Show { id, library_dir } => {
            let library = load_library(library_dir.as_deref())?;
            let doc = library.get_song(id)?.to_document();
            write!(stdout, "{doc}").map_err(write_err)?;
        }
    }
    Ok(())
}
