//! Loading of the three knowledge sources (bilingual dictionary, example
//! database, parallel corpus) plus corpus statistics.
//!
//! All files are UTF-8 TSV without headers. Devanagari is NFC-normalized at
//! load. Malformed lines never abort a load: they land in a rejects report
//! written beside the input as `<name>.rejects`.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::lexicon::Tag;
use crate::segment::{tokenize, ExampleCategory};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DictionaryEntry {
    pub hindi_lemma: String,
    pub english_lemma: String,
    pub tag: Tag,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExampleEntry {
    pub hindi_tokens: Vec<String>,
    pub english_text: String,
    pub category: ExampleCategory,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelPair {
    pub hindi_sentence: String,
    pub english_sentence: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reject {
    pub line: usize,
    pub reason: String,
}

/// Result of loading one file: retained entries plus the rejects report.
#[derive(Debug, Clone)]
pub struct LoadOutcome<T> {
    pub items: Vec<T>,
    pub rejects: Vec<Reject>,
}

impl<T> LoadOutcome<T> {
    /// Writes `<input>.rejects` beside the input file. Always written, even
    /// when empty, so downstream tooling can rely on its presence.
    pub fn write_rejects(&self, input: &Path) -> Result<PathBuf> {
        let mut name = input
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "input".to_string());
        name.push_str(".rejects");
        let path = input.with_file_name(name);
        let mut body = String::new();
        for reject in &self.rejects {
            body.push_str(&format!("{}\t{}\n", reject.line, reject.reason));
        }
        fs::write(&path, body).map_err(|source| Error::Write {
            path: path.clone(),
            source,
        })?;
        Ok(path)
    }
}

pub fn nfc(s: &str) -> String {
    s.nfc().collect()
}

fn read_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Load {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.to_string()))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect())
}

/// Loads `hindi<TAB>english<TAB>tag` lines. Duplicate triples are dropped,
/// file order is preserved among retained entries.
pub fn load_dictionary(path: &Path) -> Result<LoadOutcome<DictionaryEntry>> {
    let mut items = Vec::new();
    let mut rejects = Vec::new();
    let mut seen = BTreeSet::new();
    for (line, text) in read_lines(path)? {
        let fields: Vec<&str> = text.split('\t').collect();
        if fields.len() != 3 {
            rejects.push(Reject {
                line,
                reason: format!("expected 3 fields, got {}", fields.len()),
            });
            continue;
        }
        let hindi = nfc(fields[0].trim());
        let english = fields[1].trim().to_lowercase();
        if hindi.is_empty() || english.is_empty() {
            rejects.push(Reject {
                line,
                reason: "empty hindi or english field".to_string(),
            });
            continue;
        }
        let tag = match Tag::parse(fields[2].trim()) {
            Some(tag) => tag,
            None => {
                rejects.push(Reject {
                    line,
                    reason: format!("unknown tag: {}", fields[2].trim()),
                });
                continue;
            }
        };
        let entry = DictionaryEntry {
            hindi_lemma: hindi,
            english_lemma: english,
            tag,
        };
        if seen.insert(entry.clone()) {
            items.push(entry);
        }
    }
    Ok(LoadOutcome { items, rejects })
}

/// Loads `hindi phrase<TAB>english text<TAB>category` lines. Entries with
/// identical hindi token sequences keep the first occurrence.
pub fn load_examples(path: &Path) -> Result<LoadOutcome<ExampleEntry>> {
    let mut items: Vec<ExampleEntry> = Vec::new();
    let mut rejects = Vec::new();
    let mut seen: BTreeSet<Vec<String>> = BTreeSet::new();
    for (line, text) in read_lines(path)? {
        let fields: Vec<&str> = text.split('\t').collect();
        if fields.len() != 3 {
            rejects.push(Reject {
                line,
                reason: format!("expected 3 fields, got {}", fields.len()),
            });
            continue;
        }
        let tokens = tokenize(&nfc(fields[0].trim()));
        if tokens.is_empty() {
            rejects.push(Reject {
                line,
                reason: "empty hindi phrase".to_string(),
            });
            continue;
        }
        if tokens.iter().any(|t| !t.is_word()) {
            rejects.push(Reject {
                line,
                reason: "hindi phrase contains punctuation".to_string(),
            });
            continue;
        }
        let english = fields[1].trim().to_string();
        if english.is_empty() {
            rejects.push(Reject {
                line,
                reason: "empty english text".to_string(),
            });
            continue;
        }
        let category = match ExampleCategory::parse(fields[2].trim()) {
            Some(c) => c,
            None => {
                rejects.push(Reject {
                    line,
                    reason: format!("unknown category: {}", fields[2].trim()),
                });
                continue;
            }
        };
        let key: Vec<String> = tokens.iter().map(|t| t.surface.clone()).collect();
        if seen.insert(key.clone()) {
            items.push(ExampleEntry {
                hindi_tokens: key,
                english_text: english,
                category,
            });
        }
    }
    Ok(LoadOutcome { items, rejects })
}

/// Loads `hindi<TAB>english` lines in file order.
pub fn load_parallel(path: &Path) -> Result<LoadOutcome<ParallelPair>> {
    let mut items = Vec::new();
    let mut rejects = Vec::new();
    for (line, text) in read_lines(path)? {
        let fields: Vec<&str> = text.split('\t').collect();
        if fields.len() != 2 {
            rejects.push(Reject {
                line,
                reason: format!("expected 2 fields, got {}", fields.len()),
            });
            continue;
        }
        let hindi = nfc(fields[0].trim());
        let english = fields[1].trim().to_string();
        if hindi.is_empty() || english.is_empty() {
            rejects.push(Reject {
                line,
                reason: "empty side".to_string(),
            });
            continue;
        }
        items.push(ParallelPair {
            hindi_sentence: hindi,
            english_sentence: english,
        });
    }
    Ok(LoadOutcome { items, rejects })
}

/// Per-side counts; `.0` is Hindi, `.1` is English.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusStats {
    pub tokens_per_side: (usize, usize),
    pub types_per_side: (usize, usize),
    pub total_characters: (usize, usize),
    pub total_sentences: usize,
    /// Sentences with word count <= 10, split per side.
    pub short_sentences: (usize, usize),
    /// Sentences with word count > 10, split per side.
    pub long_sentences: (usize, usize),
}

pub fn corpus_stats(pairs: &[ParallelPair]) -> CorpusStats {
    let mut stats = CorpusStats::default();
    let mut hindi_types = BTreeSet::new();
    let mut english_types = BTreeSet::new();
    for pair in pairs {
        stats.total_sentences += 1;
        let hindi_tokens = tokenize(&pair.hindi_sentence);
        let english_tokens = tokenize(&pair.english_sentence);
        stats.tokens_per_side.0 += hindi_tokens.len();
        stats.tokens_per_side.1 += english_tokens.len();
        stats.total_characters.0 += pair.hindi_sentence.chars().count();
        stats.total_characters.1 += pair.english_sentence.chars().count();
        let hindi_words = hindi_tokens.iter().filter(|t| t.is_word()).count();
        let english_words = english_tokens.iter().filter(|t| t.is_word()).count();
        if hindi_words <= 10 {
            stats.short_sentences.0 += 1;
        } else {
            stats.long_sentences.0 += 1;
        }
        if english_words <= 10 {
            stats.short_sentences.1 += 1;
        } else {
            stats.long_sentences.1 += 1;
        }
        for t in hindi_tokens {
            hindi_types.insert(t.surface);
        }
        for t in english_tokens {
            english_types.insert(t.surface);
        }
    }
    stats.types_per_side = (hindi_types.len(), english_types.len());
    stats
}

pub fn dictionary_to_tsv(entries: &[DictionaryEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&format!(
            "{}\t{}\t{}\n",
            e.hindi_lemma,
            e.english_lemma,
            e.tag.as_str()
        ));
    }
    out
}

pub fn examples_to_tsv(entries: &[ExampleEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&format!(
            "{}\t{}\t{}\n",
            e.hindi_tokens.join(" "),
            e.english_text,
            e.category.as_str()
        ));
    }
    out
}

pub fn parallel_to_tsv(pairs: &[ParallelPair]) -> String {
    let mut out = String::new();
    for p in pairs {
        out.push_str(&format!("{}\t{}\n", p.hindi_sentence, p.english_sentence));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(contents: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(contents.as_bytes()).unwrap();
        file
    }

    #[test]
    fn dictionary_basic_entry() {
        let file = write_temp("विकास\tdevelopment\tNOUN\n");
        let outcome = load_dictionary(file.path()).unwrap();
        assert_eq!(outcome.items.len(), 1);
        assert_eq!(outcome.items[0].hindi_lemma, "विकास");
        assert_eq!(outcome.items[0].english_lemma, "development");
        assert_eq!(outcome.items[0].tag, Tag::Noun);
        assert!(outcome.rejects.is_empty());
    }

    #[test]
    fn dictionary_empty_file() {
        let file = write_temp("");
        let outcome = load_dictionary(file.path()).unwrap();
        assert!(outcome.items.is_empty());
        assert!(outcome.rejects.is_empty());
    }

    #[test]
    fn dictionary_two_field_line_rejected_rest_loaded() {
        let file = write_temp("विकास\tdevelopment\tNOUN\nसेब\tapple\nदेश\tcountry\tNOUN\n");
        let outcome = load_dictionary(file.path()).unwrap();
        assert_eq!(outcome.items.len(), 2);
        assert_eq!(outcome.rejects.len(), 1);
        assert_eq!(outcome.rejects[0].line, 2);
    }

    #[test]
    fn dictionary_unknown_tag_rejected() {
        let file = write_temp("सेब\tapple\tFRUIT\n");
        let outcome = load_dictionary(file.path()).unwrap();
        assert!(outcome.items.is_empty());
        assert_eq!(outcome.rejects.len(), 1);
    }

    #[test]
    fn dictionary_duplicate_triples_deduplicated() {
        let file = write_temp("सेब\tapple\tNOUN\nसेब\tapple\tNOUN\n");
        let outcome = load_dictionary(file.path()).unwrap();
        assert_eq!(outcome.items.len(), 1);
        assert!(outcome.rejects.is_empty());
    }

    #[test]
    fn examples_idiom_token_count() {
        let file = write_temp("मुँह की बात छीनी\tsaid what one was about to say\tidiom\n");
        let outcome = load_examples(file.path()).unwrap();
        assert_eq!(outcome.items[0].hindi_tokens.len(), 4);
    }

    #[test]
    fn examples_duplicate_keeps_first() {
        let file = write_temp("नौ दो ग्यारह\tfirst\tidiom\nनौ दो ग्यारह\tsecond\tidiom\n");
        let outcome = load_examples(file.path()).unwrap();
        assert_eq!(outcome.items.len(), 1);
        assert_eq!(outcome.items[0].english_text, "first");
    }

    #[test]
    fn examples_nine_token_full_sentence() {
        let file = write_temp(
            "ऑटोरिक्शा दिल्ली में यातायात का एक प्रभावी माध्यम है\tautoriksha is an effective medium for journey in delhi\tfull_sentence\n",
        );
        let outcome = load_examples(file.path()).unwrap();
        assert_eq!(outcome.items[0].hindi_tokens.len(), 9);
    }

    #[test]
    fn parallel_two_lines_in_order() {
        let file = write_temp("एक\tone\nदो\ttwo\n");
        let outcome = load_parallel(file.path()).unwrap();
        assert_eq!(outcome.items.len(), 2);
        assert_eq!(outcome.items[0].english_sentence, "one");
        assert_eq!(outcome.items[1].english_sentence, "two");
    }

    #[test]
    fn parallel_extra_tabs_rejected() {
        let file = write_temp("एक\tone\ttwo\tthree\n");
        let outcome = load_parallel(file.path()).unwrap();
        assert!(outcome.items.is_empty());
        assert_eq!(outcome.rejects.len(), 1);
    }

    #[test]
    fn loaded_plus_rejected_equals_nonblank_lines() {
        let file = write_temp("एक\tone\nbad line\n\nदो\ttwo\nx\ty\tz\n");
        let outcome = load_parallel(file.path()).unwrap();
        assert_eq!(outcome.items.len() + outcome.rejects.len(), 4);
    }

    #[test]
    fn rejects_report_written_beside_input() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("parallel.tsv");
        fs::write(&input, "एक\tone\nbad\n").unwrap();
        let outcome = load_parallel(&input).unwrap();
        let report = outcome.write_rejects(&input).unwrap();
        assert_eq!(report, dir.path().join("parallel.tsv.rejects"));
        let body = fs::read_to_string(report).unwrap();
        assert!(body.starts_with("2\t"));
    }

    #[test]
    fn stats_empty() {
        assert_eq!(corpus_stats(&[]), CorpusStats::default());
    }

    #[test]
    fn stats_single_pair_hand_counted() {
        let pairs = vec![ParallelPair {
            hindi_sentence: "भारत मेरा देश है".to_string(),
            english_sentence: "India is my country".to_string(),
        }];
        let stats = corpus_stats(&pairs);
        assert_eq!(stats.tokens_per_side, (4, 4));
        assert_eq!(stats.total_sentences, 1);
        assert_eq!(stats.short_sentences, (1, 1));
        assert_eq!(stats.long_sentences, (0, 0));
    }

    #[test]
    fn stats_permutation_invariant() {
        let a = ParallelPair {
            hindi_sentence: "एक दो".to_string(),
            english_sentence: "one two".to_string(),
        };
        let b = ParallelPair {
            hindi_sentence: "दो तीन".to_string(),
            english_sentence: "two three".to_string(),
        };
        assert_eq!(
            corpus_stats(&[a.clone(), b.clone()]),
            corpus_stats(&[b, a])
        );
    }

    #[test]
    fn dictionary_round_trip() {
        let file = write_temp("विकास\tdevelopment\tNOUN\nसेब\tapple\tNOUN\n");
        let outcome = load_dictionary(file.path()).unwrap();
        let reserialized = write_temp(&dictionary_to_tsv(&outcome.items));
        let reloaded = load_dictionary(reserialized.path()).unwrap();
        assert_eq!(outcome.items, reloaded.items);
    }

    #[test]
    fn examples_round_trip() {
        let file = write_temp("मुँह की बात छीनी\tsaid what one was about to say\tidiom\n");
        let outcome = load_examples(file.path()).unwrap();
        let reserialized = write_temp(&examples_to_tsv(&outcome.items));
        let reloaded = load_examples(reserialized.path()).unwrap();
        assert_eq!(outcome.items, reloaded.items);
    }

    #[test]
    fn missing_file_is_fatal() {
        assert!(load_dictionary(Path::new("/nonexistent/dict.tsv")).is_err());
    }
}
