//! Hybrid Hindi-to-English translation engine: example-database matching,
//! dictionary transfer with statistical sense disambiguation, and rule-based
//! SOV-to-SVO rearrangement, plus WER evaluation tooling.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod grammar;
pub mod lex;
pub mod lexicon;
pub mod lm;
pub mod morph;
pub mod pipeline;
pub mod segment;
pub mod smt;
pub mod translit;

pub use error::{Error, Result};
pub use pipeline::{build, load_bundle, translate, translate_lines, Bundle, PipelineConfig};
