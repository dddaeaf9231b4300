use thiserror::Error;

use crate::document::DocumentError;
use crate::nmn::{SyntaxError, ValidationError};
use crate::params::ParamError;
use crate::pitch::RangeError;
use crate::smf::VlqRangeError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("Tune box, {0}")]
    TuneSyntax(SyntaxError),
    #[error("Tempo box, {0}")]
    TempoSyntax(SyntaxError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Range(#[from] RangeError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error("melody lasts {ticks} ticks, the limit is {max}")]
    TooLong { ticks: u64, max: u64 },
    #[error("delta time too long: {0}")]
    Encode(#[from] VlqRangeError),
}

impl Error {
    /// 1 = count mismatch, 2 = blank input, 3 = anything malformed or out of range.
    pub fn code(&self) -> u8 {
        match self {
            Error::Validation(v) => v.code(),
            _ => 3,
        }
    }
}
