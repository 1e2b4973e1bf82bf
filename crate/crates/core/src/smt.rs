//! Statistical word-sense disambiguation.
//!
//! For a source word with several English candidates, each candidate is
//! scored as log P_lex(candidate | source) + log P_lm(context + candidate).
//! Factors shared by all candidates (the source-side probability) cannot
//! move an argmax and are omitted. Ties break toward the lowest index.

use serde::Serialize;

use crate::lexicon::Candidate;
use crate::lex::TranslationTable;
use crate::lm::NGramModel;

/// Floor for candidates whose source word is unknown to the lexical table;
/// keeps scores finite and lets the language model dominate.
pub const LEX_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct DisambiguationScore {
    pub candidate: Candidate,
    pub log_lex: f64,
    pub log_lm: f64,
    pub total: f64,
}

/// Scores every candidate; the winning index is the argmax of `total`.
pub fn score_candidates(
    source_word: &str,
    candidates: &[Candidate],
    left_context: &[String],
    lm: &NGramModel,
    lex: &TranslationTable,
) -> Vec<DisambiguationScore> {
    candidates
        .iter()
        .map(|candidate| {
            let tokens: Vec<String> = candidate
                .english
                .split_whitespace()
                .map(|t| t.to_lowercase())
                .collect();
            let log_lex: f64 = tokens
                .iter()
                .map(|t| {
                    lex.prob(source_word, t)
                        .filter(|p| *p > 0.0)
                        .unwrap_or(LEX_FLOOR)
                        .ln()
                })
                .sum();
            let log_lm = lm.extension_logprob(left_context, &tokens);
            DisambiguationScore {
                candidate: candidate.clone(),
                log_lex,
                log_lm,
                total: log_lex + log_lm,
            }
        })
        .collect()
}

/// Index of the best candidate. Single candidates win without model queries.
pub fn disambiguate(
    source_word: &str,
    candidates: &[Candidate],
    left_context: &[String],
    lm: &NGramModel,
    lex: &TranslationTable,
) -> usize {
    assert!(!candidates.is_empty(), "candidates must be non-empty");
    if candidates.len() == 1 {
        return 0;
    }
    let scores = score_candidates(source_word, candidates, left_context, lm, lex);
    argmax(&scores.iter().map(|s| s.total).collect::<Vec<_>>())
}

pub fn argmax(totals: &[f64]) -> usize {
    let mut best = 0;
    for (i, &score) in totals.iter().enumerate().skip(1) {
        if score > totals[best] {
            best = i;
        }
    }
    best
}
