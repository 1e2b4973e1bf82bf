//! N-gram language model with Laplace (add-k) smoothing.
//!
//! Sentences are padded with n-1 start sentinels and one end sentinel while
//! counting (order >= 2). Order-1 models count raw tokens without sentinels.
//! Unseen tokens map to a reserved UNK symbol, so every conditional
//! distribution is proper and every query is finite.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const UNK: &str = "<unk>";
pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";

#[derive(Debug, Clone, PartialEq)]
pub struct NGramModel {
    order: usize,
    k: f64,
    counts: BTreeMap<Vec<String>, BTreeMap<String, u64>>,
    context_totals: BTreeMap<Vec<String>, u64>,
    vocab: BTreeSet<String>,
}

impl NGramModel {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn vocab(&self) -> &BTreeSet<String> {
        &self.vocab
    }

    /// Vocabulary size including the reserved UNK token.
    pub fn effective_vocab_size(&self) -> usize {
        self.vocab.len() + 1
    }

    fn map_token<'a>(&self, token: &'a str) -> &'a str
    where
        Self: Sized,
    {
        if self.vocab.contains(token) {
            token
        } else {
            UNK
        }
    }

    fn padded(&self, tokens: &[String]) -> Vec<String> {
        if self.order == 1 {
            return tokens.iter().map(|t| self.map_token(t).to_string()).collect();
        }
        let mut seq = vec![BOS.to_string(); self.order - 1];
        seq.extend(tokens.iter().map(|t| self.map_token(t).to_string()));
        seq.push(EOS.to_string());
        seq
    }

    /// Smoothed P(token | context); context and token are mapped to UNK
    /// when unseen.
    pub fn cond_prob(&self, context: &[String], token: &str) -> f64 {
        let context: Vec<String> = context
            .iter()
            .map(|t| self.map_token(t).to_string())
            .collect();
        let token = self.map_token(token);
        let v = self.effective_vocab_size() as f64;
        let count = self
            .counts
            .get(&context)
            .and_then(|m| m.get(token))
            .copied()
            .unwrap_or(0) as f64;
        let total = self.context_totals.get(&context).copied().unwrap_or(0) as f64;
        (count + self.k) / (total + self.k * v)
    }

    /// Sum of log conditional probabilities with start/end padding.
    pub fn logprob(&self, tokens: &[String]) -> f64 {
        let seq = self.padded(tokens);
        let ctx_len = self.order - 1;
        let mut total = 0.0;
        for i in ctx_len..seq.len() {
            total += self.cond_prob(&seq[i - ctx_len..i], &seq[i]).ln();
        }
        total
    }

    /// Log probability of appending `extension` after `context` (no end
    /// sentinel; used for candidate scoring mid-sentence).
    pub fn extension_logprob(&self, context: &[String], extension: &[String]) -> f64 {
        let ctx_len = self.order - 1;
        let mut seq = vec![BOS.to_string(); ctx_len];
        seq.extend(context.iter().map(|t| self.map_token(t).to_string()));
        let start = seq.len();
        seq.extend(extension.iter().map(|t| self.map_token(t).to_string()));
        let mut total = 0.0;
        for i in start..seq.len() {
            total += self.cond_prob(&seq[i - ctx_len..i], &seq[i]).ln();
        }
        total
    }

    /// Serializes as a header line `order<TAB>k` followed by
    /// `context tokens<TAB>token<TAB>count` lines in sorted order.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\t{}\n", self.order, self.k);
        for (context, tokens) in &self.counts {
            for (token, count) in tokens {
                out.push_str(&format!("{}\t{}\t{}\n", context.join(" "), token, count));
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
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::Format {
            what: "language model".to_string(),
            line: 1,
            reason: "missing header".to_string(),
        })?;
        let header_fields: Vec<&str> = header.split('\t').collect();
        if header_fields.len() != 2 {
            return Err(Error::Format {
                what: "language model".to_string(),
                line: 1,
                reason: "header must be order<TAB>k".to_string(),
            });
        }
        let order: usize = header_fields[0].parse().map_err(|_| Error::Format {
            what: "language model".to_string(),
            line: 1,
            reason: "bad order".to_string(),
        })?;
        let k: f64 = header_fields[1].parse().map_err(|_| Error::Format {
            what: "language model".to_string(),
            line: 1,
            reason: "bad k".to_string(),
        })?;
        let mut model = NGramModel {
            order,
            k,
            counts: BTreeMap::new(),
            context_totals: BTreeMap::new(),
            vocab: BTreeSet::new(),
        };
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::Format {
                    what: "language model".to_string(),
                    line: i + 1,
                    reason: format!("expected 3 fields, got {}", fields.len()),
                });
            }
            let context: Vec<String> = if fields[0].is_empty() {
                Vec::new()
            } else {
                fields[0].split(' ').map(String::from).collect()
            };
            let token = fields[1].to_string();
            let count: u64 = fields[2].parse().map_err(|_| Error::Format {
                what: "language model".to_string(),
                line: i + 1,
                reason: "bad count".to_string(),
            })?;
            for t in context.iter().chain(std::iter::once(&token)) {
                if t != UNK {
                    model.vocab.insert(t.clone());
                }
            }
            *model.context_totals.entry(context.clone()).or_insert(0) += count;
            *model.counts.entry(context).or_default().entry(token).or_insert(0) += count;
        }
        Ok(model)
    }
}

/// Trains an add-k smoothed n-gram model over tokenized sentences.
pub fn train_lm(sentences: &[Vec<String>], order: usize, k: f64) -> NGramModel {
    assert!(order >= 1, "order must be >= 1");
    let mut model = NGramModel {
        order,
        k,
        counts: BTreeMap::new(),
        context_totals: BTreeMap::new(),
        vocab: BTreeSet::new(),
    };
    for sentence in sentences {
        for token in sentence {
            model.vocab.insert(token.clone());
        }
        if order >= 2 && !sentence.is_empty() {
            model.vocab.insert(BOS.to_string());
            model.vocab.insert(EOS.to_string());
        }
    }
    let ctx_len = order - 1;
    for sentence in sentences {
        if sentence.is_empty() {
            continue;
        }
        let seq: Vec<String> = if order == 1 {
            sentence.clone()
        } else {
            let mut s = vec![BOS.to_string(); ctx_len];
            s.extend(sentence.iter().cloned());
            s.push(EOS.to_string());
            s
        };
        for i in ctx_len..seq.len() {
            let context = seq[i - ctx_len..i].to_vec();
            *model.context_totals.entry(context.clone()).or_insert(0) += 1;
            *model
                .counts
                .entry(context)
                .or_default()
                .entry(seq[i].clone())
                .or_insert(0) += 1;
        }
    }
    model
}

pub fn split_tokens(sentence: &str) -> Vec<String> {
    sentence.split_whitespace().map(String::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_bigram() -> NGramModel {
        train_lm(&[split_tokens("a b"), split_tokens("a c")], 2, 1.0)
    }

    #[test]
    fn toy_bigram_laplace_value() {
        let model = toy_bigram();
        // vocab = {a, b, c, <s>, </s>}, +UNK -> 6; count(a)=2, count(a b)=1
        assert_eq!(model.effective_vocab_size(), 6);
        let p = model.cond_prob(&[String::from("a")], "b");
        assert!((p - 0.25).abs() < 1e-12, "{p}");
    }

    #[test]
    fn empty_corpus_degenerates_to_unk() {
        let model = train_lm(&[], 2, 1.0);
        assert_eq!(model.effective_vocab_size(), 1);
        let p = model.cond_prob(&[String::from("x")], "y");
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unigram_no_sentinels() {
        let model = train_lm(&[split_tokens("a a b")], 1, 1.0);
        // vocab = {a, b}, +UNK -> 3; P(a) = (2+1)/(3+3)
        let p = model.cond_prob(&[], "a");
        assert!((p - 0.5).abs() < 1e-12, "{p}");
    }

    #[test]
    fn logprob_empty_sequence_is_end_given_start() {
        let model = toy_bigram();
        let expected = model.cond_prob(&[BOS.to_string()], EOS).ln();
        assert!((model.logprob(&[]) - expected).abs() < 1e-12);
    }

    #[test]
    fn logprob_nonpositive() {
        let model = toy_bigram();
        for text in ["a b", "b a", "x y z", ""] {
            assert!(model.logprob(&split_tokens(text)) <= 0.0);
        }
    }

    #[test]
    fn logprob_toy_sequence_matches_hand_sum() {
        let model = toy_bigram();
        let hand = model.cond_prob(&[BOS.to_string()], "a").ln()
            + model.cond_prob(&[String::from("a")], "b").ln()
            + model.cond_prob(&[String::from("b")], EOS).ln();
        let got = model.logprob(&split_tokens("a b"));
        assert!((got - hand).abs() < 1e-12);
    }

    #[test]
    fn conditionals_sum_to_one() {
        let model = toy_bigram();
        for context in [vec![String::from("a")], vec![String::from("zzz")]] {
            let mut total: f64 = model
                .vocab()
                .iter()
                .map(|w| model.cond_prob(&context, w))
                .sum();
            total += model.cond_prob(&context, UNK);
            assert!((total - 1.0).abs() < 1e-9, "{total}");
        }
    }

    #[test]
    fn save_load_round_trip() {
        let model = toy_bigram();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lm.tsv");
        model.save(&path).unwrap();
        let reloaded = NGramModel::load(&path).unwrap();
        assert_eq!(model, reloaded);
    }

    #[test]
    fn serialization_is_deterministic() {
        let a = train_lm(&[split_tokens("a b"), split_tokens("a c")], 2, 1.0);
        let b = train_lm(&[split_tokens("a b"), split_tokens("a c")], 2, 1.0);
        assert_eq!(a.to_text(), b.to_text());
    }
}
