use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Load { path: PathBuf, source: io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },

    #[error("malformed {what} at line {line}: {reason}")]
    Format {
        what: String,
        line: usize,
        reason: String,
    },

    #[error("no transliteration for U+{codepoint:04X} '{ch}'")]
    UncoveredCodepoint { ch: char, codepoint: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
