//! Lexical translation table trained with Model-1-style expectation
//! maximization over word-aligned sentence pairs, with a NULL source slot.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use crate::corpus::ParallelPair;
use crate::error::{Error, Result};
use crate::segment::tokenize;

pub const NULL_SOURCE: &str = "<null>";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TranslationTable {
    probs: BTreeMap<String, BTreeMap<String, f64>>,
}

impl TranslationTable {
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// P(target | source); None when the source word is unknown.
    pub fn prob(&self, source: &str, target: &str) -> Option<f64> {
        let targets = self.probs.get(source)?;
        Some(targets.get(target).copied().unwrap_or(0.0))
    }

    pub fn knows_source(&self, source: &str) -> bool {
        self.probs.contains_key(source)
    }

    pub fn sources(&self) -> impl Iterator<Item = &String> {
        self.probs.keys()
    }

    pub fn distribution(&self, source: &str) -> Option<&BTreeMap<String, f64>> {
        self.probs.get(source)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (source, targets) in &self.probs {
            for (target, prob) in targets {
                out.push_str(&format!("{source}\t{target}\t{prob}\n"));
            }
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(|source| Error::Write {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Load {
            path: path.to_path_buf(),
            source,
        })?;
        let mut table = TranslationTable::default();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::Format {
                    what: "translation table".to_string(),
                    line: i + 1,
                    reason: format!("expected 3 fields, got {}", fields.len()),
                });
            }
            let prob: f64 = fields[2].parse().map_err(|_| Error::Format {
                what: "translation table".to_string(),
                line: i + 1,
                reason: "bad probability".to_string(),
            })?;
            table
                .probs
                .entry(fields[0].to_string())
                .or_default()
                .insert(fields[1].to_string(), prob);
        }
        Ok(table)
    }
}

/// Lowercased word tokens of one corpus side.
pub fn word_tokens(sentence: &str, lowercase: bool) -> Vec<String> {
    tokenize(sentence)
        .into_iter()
        .filter(|t| t.is_word())
        .map(|t| {
            if lowercase {
                t.surface.to_lowercase()
            } else {
                t.surface
            }
        })
        .collect()
}

fn tokenized_pairs(pairs: &[ParallelPair]) -> Vec<(Vec<String>, Vec<String>)> {
    pairs
        .iter()
        .map(|p| {
            (
                word_tokens(&p.hindi_sentence, false),
                word_tokens(&p.english_sentence, true),
            )
        })
        .filter(|(s, t)| !s.is_empty() && !t.is_empty())
        .collect()
}

/// Model-1 EM: uniform initialization over co-occurring words, `iterations`
/// rounds of expected-count collection and per-source renormalization.
pub fn train_lex(pairs: &[ParallelPair], iterations: usize) -> TranslationTable {
    assert!(iterations >= 1, "iterations must be >= 1");
    train_lex_tokenized(&tokenized_pairs(pairs), iterations)
}

pub fn train_lex_tokenized(
    pairs: &[(Vec<String>, Vec<String>)],
    iterations: usize,
) -> TranslationTable {
    let mut table = TranslationTable::default();
    // Uniform initialization over co-occurring target words.
    let mut cooc: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (src, tgt) in pairs {
        for s in src.iter().map(String::as_str).chain([NULL_SOURCE]) {
            let entry = cooc.entry(s.to_string()).or_default();
            for t in tgt {
                entry.insert(t.clone());
            }
        }
    }
    for (source, targets) in cooc {
        let uniform = 1.0 / targets.len() as f64;
        table.probs.insert(
            source,
            targets.into_iter().map(|t| (t, uniform)).collect(),
        );
    }
    if table.is_empty() {
        return table;
    }

    for _ in 0..iterations {
        let mut counts: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
        let mut totals: BTreeMap<String, f64> = BTreeMap::new();
        for (src, tgt) in pairs {
            let sources: Vec<&str> = std::iter::once(NULL_SOURCE)
                .chain(src.iter().map(String::as_str))
                .collect();
            for t in tgt {
                let denom: f64 = sources
                    .iter()
                    .map(|s| table.prob(s, t).unwrap_or(0.0))
                    .sum();
                if denom == 0.0 {
                    continue;
                }
                for s in &sources {
                    let delta = table.prob(s, t).unwrap_or(0.0) / denom;
                    if delta > 0.0 {
                        *counts
                            .entry((*s).to_string())
                            .or_default()
                            .entry(t.clone())
                            .or_insert(0.0) += delta;
                        *totals.entry((*s).to_string()).or_insert(0.0) += delta;
                    }
                }
            }
        }
        let mut next = TranslationTable::default();
        for (source, target_counts) in counts {
            let total = totals[&source];
            let dist: BTreeMap<String, f64> = target_counts
                .into_iter()
                .map(|(t, c)| (t, c / total))
                .collect();
            next.probs.insert(source, dist);
        }
        table = next;
    }
    table
}

/// Corpus log-likelihood under the table (Model 1 with uniform alignment).
pub fn log_likelihood(pairs: &[(Vec<String>, Vec<String>)], table: &TranslationTable) -> f64 {
    let mut total = 0.0;
    for (src, tgt) in pairs {
        let sources: Vec<&str> = std::iter::once(NULL_SOURCE)
            .chain(src.iter().map(String::as_str))
            .collect();
        let align_prior = 1.0 / sources.len() as f64;
        for t in tgt {
            let p: f64 = sources
                .iter()
                .map(|s| table.prob(s, t).unwrap_or(0.0))
                .sum::<f64>()
                * align_prior;
            total += p.max(f64::MIN_POSITIVE).ln();
        }
    }
    total
}

pub fn tokenize_pairs_for_tests(pairs: &[(&str, &str)]) -> Vec<(Vec<String>, Vec<String>)> {
    pairs
        .iter()
        .map(|(s, t)| (word_tokens(s, false), word_tokens(t, true)))
        .collect()
}
