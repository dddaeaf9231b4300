//! Compiles numbered musical notation into Standard MIDI Files.
//!
//! The tune box holds scale degrees (`5`, `50`, `-5`, `5.5`, `0` for a
//! rest) and the tempo box holds one beat count per tune token. Together
//! with a [`ParamSet`] they compile to a format 0 file, or to a format 1
//! file with a percussion track when a rhythm style is selected.
//!
//! ```
//! use nmnc_core::{compile_text, ParamSet, SequencerOptions};
//!
//! let out = compile_text("1, 3, 5, 0", "0, 0, 0, 2", &ParamSet::default(),
//!                        SequencerOptions::default()).unwrap();
//! assert_eq!(out.total_ticks, 8);
//! ```

pub mod compile;
pub mod document;
mod error;
pub mod instruments;
pub mod library;
pub mod nmn;
pub mod params;
pub mod pitch;
pub mod rhythm;
pub mod sequencer;
pub mod smf;

pub use compile::{compile_melody, compile_text, parse_melody, Compiled, DEFAULT_OUTPUT};
pub use document::NmnDocument;
pub use error::{Error, Result};
pub use library::{Library, LibraryError, Song};
pub use nmn::{Melody, TempoToken, TuneToken, ValidationError};
pub use params::{ParamOverrides, ParamSet, RhythmStyle};
pub use pitch::{MajorScale, NoteNumber};
pub use sequencer::{EventKind, MidiEvent, SequencerOptions};
pub use smf::{read_smf, write_smf, SmfFile};
