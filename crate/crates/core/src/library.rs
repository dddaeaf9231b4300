//! The predefined song library.
//!
//! Songs are `.nmn` documents. Four ship inside the crate; more can be
//! loaded from a directory, one song per file, with the file stem as id.

use std::path::Path;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::compile::parse_melody;
use crate::document::{DocumentError, NmnDocument};
use crate::params::ParamSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Song {
    pub id: String,
    pub title: String,
    pub tune_text: String,
    pub tempo_text: String,
    pub default_params: ParamSet,
    /// `false` for approximate transcriptions.
    pub canonical: bool,
}

impl Song {
    /// Builds a song from a document, checking that its boxes validate.
    pub fn from_document(
        id: &str,
        doc: NmnDocument,
        canonical: bool,
    ) -> Result<Song, LibraryError> {
        let invalid = |source| LibraryError::InvalidSong {
            id: id.to_string(),
            source: Box::new(source),
        };
        parse_melody(&doc.tune_text, &doc.tempo_text).map_err(invalid)?;
        let default_params = doc
            .overrides
            .apply(ParamSet::default())
            .map_err(|e| invalid(e.into()))?;
        Ok(Song {
            id: id.to_string(),
            title: doc.title.unwrap_or_else(|| id.to_string()),
            tune_text: doc.tune_text,
            tempo_text: doc.tempo_text,
            default_params,
            canonical,
        })
    }

    /// The song as a `.nmn` document with every parameter spelled out.
    pub fn to_document(&self) -> NmnDocument {
        let p = self.default_params;
        NmnDocument {
            title: Some(self.title.clone()),
            tune_text: self.tune_text.clone(),
            tempo_text: self.tempo_text.clone(),
            overrides: crate::params::ParamOverrides {
                speed: Some(p.speed),
                tune_volume: Some(p.tune_volume),
                rhythm_volume: Some(p.rhythm_volume),
                instrument: Some(p.instrument),
                scale: Some(p.scale),
                rhythm: Some(p.rhythm),
                repeat: Some(p.repeat),
            },
        }
    }
}

#[derive(Debug, Error)]
pub enum LibraryError {
    #[error("no song with id {0:?}")]
    NotFound(String),
    #[error("song {id}: {source}")]
    InvalidSong {
        id: String,
        source: Box<crate::error::Error>,
    },
    #[error("{path}: {source}")]
    Document { path: String, source: DocumentError },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

const BUILTIN: [(&str, bool, &str); 4] = [
    (
        "happy-birthday",
        true,
        include_str!("../library/happy-birthday.nmn"),
    ),
    (
        "christmas-eve-song",
        false,
        include_str!("../library/christmas-eve-song.nmn"),
    ),
    (
        "amazing-grace",
        false,
        include_str!("../library/amazing-grace.nmn"),
    ),
    ("happy-day", false, include_str!("../library/happy-day.nmn")),
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Library {
    songs: Vec<Song>,
}

impl Library {
    /// The bundled songs, parsed once.
    pub fn builtin() -> &'static Library {
        static LIB: OnceLock<Library> = OnceLock::new();
        LIB.get_or_init(|| {
            let songs = BUILTIN
                .iter()
                .map(|&(id, canonical, text)| {
                    let doc = text.parse().expect("bundled song parses");
                    Song::from_document(id, doc, canonical).expect("bundled song validates")
                })
                .collect();
            Library { songs }
        })
    }

    /// Loads every `*.nmn` file in `dir`, ordered by file name.
    pub fn load_dir(dir: &Path) -> Result<Library, LibraryError> {
        let io = |path: &Path, source| LibraryError::Io {
            path: path.display().to_string(),
            source,
        };
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(|e| io(dir, e))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "nmn"))
            .collect();
        paths.sort();
        let mut songs = Vec::with_capacity(paths.len());
        for path in paths {
            let text = std::fs::read_to_string(&path).map_err(|e| io(&path, e))?;
            let doc = text.parse().map_err(|source| LibraryError::Document {
                path: path.display().to_string(),
                source,
            })?;
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            songs.push(Song::from_document(&id, doc, false)?);
        }
        Ok(Library { songs })
    }

    /// `(id, title)` pairs in library order.
    pub fn list_songs(&self) -> Vec<(&str, &str)> {
        self.songs
            .iter()
            .map(|s| (s.id.as_str(), s.title.as_str()))
            .collect()
    }

    pub fn songs(&self) -> &[Song] {
        &self.songs
    }

    pub fn get_song(&self, id: &str) -> Result<&Song, LibraryError> {
        self.songs
            .iter()
            .find(|s| s.id == id)
            .ok_or_else(|| LibraryError::NotFound(id.to_string()))
    }
}
