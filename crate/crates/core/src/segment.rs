//! Tokenization and example-database segmentation.
//!
//! Input sentences are split into word and punctuation tokens, then scanned
//! left to right: the longest example-database match at each position becomes
//! an `ExampleMatch` segment, everything else falls out as single-word
//! segments. Flattening the segments always reproduces the input tokens.

use std::collections::HashMap;

use serde::Serialize;

use crate::corpus::ExampleEntry;

/// Punctuation codepoints detached from adjacent words during tokenization.
pub const PUNCTUATION: [char; 4] = ['।', '?', '!', ','];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Word,
    Punctuation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
}

impl Token {
    pub fn word(surface: impl Into<String>) -> Self {
        Token {
            surface: surface.into(),
            kind: TokenKind::Word,
        }
    }

    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }
}

/// Splits on Unicode whitespace; danda, '?', '!' and ',' come out as
/// separate punctuation tokens. Empty input yields an empty sequence.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let mut word = String::new();
        for ch in chunk.chars() {
            if PUNCTUATION.contains(&ch) {
                if !word.is_empty() {
                    tokens.push(Token::word(std::mem::take(&mut word)));
                }
                tokens.push(Token {
                    surface: ch.to_string(),
                    kind: TokenKind::Punctuation,
                });
            } else {
                word.push(ch);
            }
        }
        if !word.is_empty() {
            tokens.push(Token::word(word));
        }
    }
    tokens
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleCategory {
    Idiom,
    Phrase,
    FullSentence,
}

impl ExampleCategory {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "idiom" => Some(ExampleCategory::Idiom),
            "phrase" => Some(ExampleCategory::Phrase),
            "full_sentence" => Some(ExampleCategory::FullSentence),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ExampleCategory::Idiom => "idiom",
            ExampleCategory::Phrase => "phrase",
            ExampleCategory::FullSentence => "full_sentence",
        }
    }
}

/// Example database keyed by exact token sequences.
#[derive(Debug, Clone, Default)]
pub struct ExampleIndex {
    entries: HashMap<Vec<String>, (String, ExampleCategory)>,
    max_phrase_len: usize,
}

impl ExampleIndex {
    pub fn build(entries: &[ExampleEntry]) -> Self {
        let mut index = ExampleIndex::default();
        for entry in entries {
            let key: Vec<String> = entry.hindi_tokens.clone();
            index.max_phrase_len = index.max_phrase_len.max(key.len());
            // First occurrence wins; loaders deduplicate already.
            index
                .entries
                .entry(key)
                .or_insert_with(|| (entry.english_text.clone(), entry.category));
        }
        index
    }

    pub fn max_phrase_len(&self) -> usize {
        self.max_phrase_len
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Longest entry matching `tokens[start..]`, returned as
    /// (match length, english text, category).
    pub fn longest_match(
        &self,
        tokens: &[Token],
        start: usize,
    ) -> Option<(usize, &str, ExampleCategory)> {
        let limit = self.max_phrase_len.min(tokens.len() - start);
        for len in (1..=limit).rev() {
            let window = &tokens[start..start + len];
            if window.iter().any(|t| !t.is_word()) {
                continue;
            }
            let key: Vec<String> = window.iter().map(|t| t.surface.clone()).collect();
            if let Some((english, category)) = self.entries.get(&key) {
                return Some((len, english.as_str(), *category));
            }
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    ExampleMatch,
    Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub kind: SegmentKind,
    pub tokens: Vec<Token>,
    /// English text of an example match, verbatim from the database.
    pub translation: Option<String>,
    pub category: Option<ExampleCategory>,
}

impl Segment {
    pub fn surface(&self) -> String {
        self.tokens
            .iter()
            .map(|t| t.surface.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Greedy leftmost-longest scan over the token sequence. Punctuation tokens
/// become single-token Word segments.
pub fn segment(tokens: &[Token], index: &ExampleIndex) -> Vec<Segment> {
    let mut segments = Vec::new();
    let mut pos = 0;
    while pos < tokens.len() {
        if tokens[pos].is_word() {
            if let Some((len, english, category)) = index.longest_match(tokens, pos) {
                segments.push(Segment {
                    kind: SegmentKind::ExampleMatch,
                    tokens: tokens[pos..pos + len].to_vec(),
                    translation: Some(english.to_string()),
                    category: Some(category),
                });
                pos += len;
                continue;
            }
        }
        segments.push(Segment {
            kind: SegmentKind::Word,
            tokens: vec![tokens[pos].clone()],
            translation: None,
            category: None,
        });
        pos += 1;
    }
    segments
}
