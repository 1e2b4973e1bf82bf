//! End-to-end orchestration: build a model bundle from data files, load it,
//! and translate sentences through segment → tag → disambiguate → rearrange.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{
    self, corpus_stats, load_dictionary, load_examples, load_parallel, nfc, CorpusStats,
    LoadOutcome,
};
use crate::error::{Error, Result};
use crate::eval::{evaluate_corpus, EvalInput, EvalReport};
use crate::grammar::{rearrange, select_rule, RuleSet};
use crate::lex::{self, train_lex, TranslationTable};
use crate::lexicon::{
    tag_sentence, FunctionWordTable, Lexicon, ProperNounRules, TaggedUnit, UnitKind,
};
use crate::lm::{train_lm, NGramModel};
use crate::morph::{detect_tense, IrregularVerbs};
use crate::segment::{segment, tokenize, ExampleIndex};
use crate::smt::disambiguate;
use crate::translit::TransliterationTable;

pub const SCHEMA_VERSION: u32 = 1;

/// Input file locations and training knobs.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub dictionary: PathBuf,
    pub examples: PathBuf,
    pub parallel: PathBuf,
    pub translit: PathBuf,
    pub function_words: PathBuf,
    pub grammar_rules: PathBuf,
    pub irregular_verbs: PathBuf,
    pub proper_noun_rules: PathBuf,
    pub lm_order: usize,
    pub lm_k: f64,
    pub em_iters: usize,
}

impl PipelineConfig {
    /// Standard file names under one data directory.
    pub fn from_data_dir(dir: &Path) -> Self {
        PipelineConfig {
            dictionary: dir.join("dictionary.tsv"),
            examples: dir.join("examples.tsv"),
            parallel: dir.join("parallel.tsv"),
            translit: dir.join("translit.tsv"),
            function_words: dir.join("function_words.tsv"),
            grammar_rules: dir.join("grammar_rules.tsv"),
            irregular_verbs: dir.join("irregular_verbs.tsv"),
            proper_noun_rules: dir.join("proper_noun_rules.txt"),
            lm_order: 2,
            lm_k: 1.0,
            em_iters: 5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for path in [
            &self.dictionary,
            &self.examples,
            &self.parallel,
            &self.translit,
            &self.function_words,
            &self.grammar_rules,
            &self.irregular_verbs,
            &self.proper_noun_rules,
        ] {
            if !path.exists() {
                return Err(Error::Load {
                    path: path.clone(),
                    source: std::io::Error::new(std::io::ErrorKind::NotFound, "file not found"),
                });
            }
        }
        if self.lm_order == 0 || self.lm_k <= 0.0 || self.em_iters == 0 {
            return Err(Error::Format {
                what: "config".to_string(),
                line: 0,
                reason: "lm_order, lm_k and em_iters must be positive".to_string(),
            });
        }
        Ok(())
    }
}

/// Everything translate needs, immutable after load.
pub struct Bundle {
    pub lexicon: Lexicon,
    pub examples: ExampleIndex,
    pub function_words: FunctionWordTable,
    pub pn_rules: ProperNounRules,
    pub translit: TransliterationTable,
    pub rules: RuleSet,
    pub irregulars: IrregularVerbs,
    pub lm: NGramModel,
    pub lex: TranslationTable,
}

#[derive(Debug, Clone, Serialize)]
pub struct BuildReport {
    pub schema_version: u32,
    pub dictionary_entries: usize,
    pub example_entries: usize,
    pub parallel_pairs: usize,
    pub rejected_lines: usize,
    pub lm_order: usize,
    pub lm_k: f64,
    pub em_iters: usize,
}

fn copy_into(src: &Path, dir: &Path) -> Result<()> {
    let name = src.file_name().unwrap_or_default();
    let text = fs::read_to_string(src).map_err(|source| Error::Load {
        path: src.to_path_buf(),
        source,
    })?;
    let dst = dir.join(name);
    fs::write(&dst, text).map_err(|source| Error::Write { path: dst, source })
}

fn write_text(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads all sources, trains the language model (English side) and the
/// lexical translation table, and persists the bundle. Reject reports are
/// written beside each input file. Byte-identical inputs produce
/// byte-identical bundle files.
pub fn build(config: &PipelineConfig, bundle_dir: &Path) -> Result<(Bundle, BuildReport)> {
    config.validate()?;
    let dictionary = load_dictionary(&config.dictionary)?;
    dictionary.write_rejects(&config.dictionary)?;
    let examples = load_examples(&config.examples)?;
    examples.write_rejects(&config.examples)?;
    let parallel = load_parallel(&config.parallel)?;
    parallel.write_rejects(&config.parallel)?;

    let english_sentences: Vec<Vec<String>> = parallel
        .items
        .iter()
        .map(|p| lex::word_tokens(&p.english_sentence, true))
        .collect();
    let lm = train_lm(&english_sentences, config.lm_order, config.lm_k);
    let lex_table = train_lex(&parallel.items, config.em_iters);

    fs::create_dir_all(bundle_dir).map_err(|source| Error::Write {
        path: bundle_dir.to_path_buf(),
        source,
    })?;
    write_text(
        &bundle_dir.join("dictionary.tsv"),
        &corpus::dictionary_to_tsv(&dictionary.items),
    )?;
    write_text(
        &bundle_dir.join("examples.tsv"),
        &corpus::examples_to_tsv(&examples.items),
    )?;
    write_text(&bundle_dir.join("lm.counts"), &lm.to_text())?;
    write_text(&bundle_dir.join("lex.probs"), &lex_table.to_text())?;
    for src in [
        &config.translit,
        &config.function_words,
        &config.grammar_rules,
        &config.irregular_verbs,
        &config.proper_noun_rules,
    ] {
        copy_into(src, bundle_dir)?;
    }

    let report = BuildReport {
        schema_version: SCHEMA_VERSION,
        dictionary_entries: dictionary.items.len(),
        example_entries: examples.items.len(),
        parallel_pairs: parallel.items.len(),
        rejected_lines: dictionary.rejects.len() + examples.rejects.len() + parallel.rejects.len(),
        lm_order: config.lm_order,
        lm_k: config.lm_k,
        em_iters: config.em_iters,
    };
    let manifest = serde_json::to_string_pretty(&report).expect("report serializes");
    write_text(&bundle_dir.join("manifest.json"), &manifest)?;

    let bundle = Bundle {
        lexicon: Lexicon::from_entries(&dictionary.items),
        examples: ExampleIndex::build(&examples.items),
        function_words: FunctionWordTable::load(&config.function_words)?,
        pn_rules: ProperNounRules::load(&config.proper_noun_rules)?,
        translit: TransliterationTable::load(&config.translit)?,
        rules: RuleSet::load(&config.grammar_rules)?,
        irregulars: IrregularVerbs::load(&config.irregular_verbs)?,
        lm,
        lex: lex_table,
    };
    Ok((bundle, report))
}

/// Reloads a persisted bundle directory.
pub fn load_bundle(bundle_dir: &Path) -> Result<Bundle> {
    let dictionary = load_dictionary(&bundle_dir.join("dictionary.tsv"))?;
    let examples = load_examples(&bundle_dir.join("examples.tsv"))?;
    Ok(Bundle {
        lexicon: Lexicon::from_entries(&dictionary.items),
        examples: ExampleIndex::build(&examples.items),
        function_words: FunctionWordTable::load(&bundle_dir.join("function_words.tsv"))?,
        pn_rules: ProperNounRules::load(&bundle_dir.join("proper_noun_rules.txt"))?,
        translit: TransliterationTable::load(&bundle_dir.join("translit.tsv"))?,
        rules: RuleSet::load(&bundle_dir.join("grammar_rules.tsv"))?,
        irregulars: IrregularVerbs::load(&bundle_dir.join("irregular_verbs.tsv"))?,
        lm: NGramModel::load(&bundle_dir.join("lm.counts"))?,
        lex: TranslationTable::load(&bundle_dir.join("lex.probs"))?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceStage {
    pub stage: String,
    pub items: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TranslationResult {
    pub schema_version: u32,
    pub source: String,
    pub output: String,
    pub trace: Vec<TraceStage>,
    pub warnings: Vec<String>,
}

fn describe_unit(unit: &TaggedUnit) -> String {
    match unit.kind {
        UnitKind::Marker => format!("{} [marker]", unit.surface()),
        UnitKind::Punctuation => unit.surface(),
        UnitKind::Phrase => format!(
            "{} -> \"{}\"",
            unit.surface(),
            unit.chosen_candidate().map(|c| c.english.as_str()).unwrap_or("")
        ),
        UnitKind::Content => {
            let senses: Vec<String> = unit
                .candidates
                .iter()
                .map(|c| {
                    format!(
                        "{}/{}",
                        c.english,
                        c.tag.map(|t| t.as_str()).unwrap_or("-")
                    )
                })
                .collect();
            format!("{} -> {}", unit.surface(), senses.join(" | "))
        }
    }
}

/// Translates one sentence. Never aborts on content; problems surface as
/// warnings on the result.
pub fn translate(bundle: &Bundle, sentence: &str, trace: bool) -> TranslationResult {
    let source = sentence.to_string();
    let normalized = nfc(sentence);
    let tokens = tokenize(&normalized);
    let mut result = TranslationResult {
        schema_version: SCHEMA_VERSION,
        source,
        output: String::new(),
        trace: Vec::new(),
        warnings: Vec::new(),
    };
    if tokens.is_empty() {
        return result;
    }

    let segments = segment(&tokens, &bundle.examples);
    if trace {
        result.trace.push(TraceStage {
            stage: "Segmentation".to_string(),
            items: segments.iter().map(|s| s.surface()).collect(),
        });
    }

    let mut warnings = Vec::new();
    let mut units = tag_sentence(
        &segments,
        &bundle.lexicon,
        &bundle.function_words,
        &bundle.pn_rules,
        &bundle.translit,
        &mut warnings,
    );
    if trace {
        result.trace.push(TraceStage {
            stage: "Translation+Tagging".to_string(),
            items: units.iter().map(describe_unit).collect(),
        });
    }

    // Left-to-right disambiguation against the already-chosen translations.
    let mut context: Vec<String> = Vec::new();
    let mut choices = Vec::new();
    for unit in units.iter_mut() {
        if unit.kind == UnitKind::Content && unit.chosen.is_none() && unit.candidates.len() > 1 {
            let chosen = disambiguate(
                &unit.surface(),
                &unit.candidates,
                &context,
                &bundle.lm,
                &bundle.lex,
            );
            unit.chosen = Some(chosen);
            choices.push(format!(
                "{} -> {}",
                unit.surface(),
                unit.candidates[chosen].english
            ));
        }
        if let Some(candidate) = unit.chosen_candidate() {
            context.extend(
                candidate
                    .english
                    .split_whitespace()
                    .map(|t| t.to_lowercase()),
            );
        }
    }
    if trace {
        result.trace.push(TraceStage {
            stage: "Disambiguation".to_string(),
            items: choices,
        });
    }

    let info = detect_tense(&units);
    match select_rule(&units, &bundle.rules) {
        Some(rule) => {
            let rendered = rearrange(&units, rule, &info, &bundle.irregulars);
            result.output = rendered.text;
            if trace {
                result.trace.push(TraceStage {
                    stage: "Rearrangement".to_string(),
                    items: rendered
                        .trace
                        .into_iter()
                        .map(|(k, v)| format!("{k}: {v}"))
                        .collect(),
                });
            }
        }
        None => {
            warnings.push("no grammar rule matched; emitting unordered senses".to_string());
            let words: Vec<String> = units
                .iter()
                .filter_map(|u| u.chosen_candidate())
                .map(|c| c.english.clone())
                .collect();
            result.output = words.join(" ");
            if trace {
                result.trace.push(TraceStage {
                    stage: "Rearrangement".to_string(),
                    items: vec![format!("rule: none"), format!("rearranged: {}", result.output)],
                });
            }
        }
    }
    result.warnings = warnings;
    result
}

/// Translates many lines concurrently; output order matches input order.
pub fn translate_lines(bundle: &Bundle, lines: &[String], trace: bool) -> Vec<TranslationResult> {
    lines
        .par_iter()
        .map(|line| translate(bundle, line, trace))
        .collect()
}

#[derive(Debug, Clone)]
pub struct TestCase {
    pub hindi: String,
    pub reference: String,
    pub category: String,
}

pub const CATEGORIES: [&str; 4] = ["complex", "simple", "idiom", "ambiguous"];

/// Loads `hindi<TAB>english_reference<TAB>category` lines.
pub fn load_testset(path: &Path) -> Result<LoadOutcome<TestCase>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Load {
        path: path.to_path_buf(),
        source,
    })?;
    let mut items = Vec::new();
    let mut rejects = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            rejects.push(corpus::Reject {
                line: i + 1,
                reason: format!("expected 3 fields, got {}", fields.len()),
            });
            continue;
        }
        let category = fields[2].trim().to_string();
        if !CATEGORIES.contains(&category.as_str()) {
            rejects.push(corpus::Reject {
                line: i + 1,
                reason: format!("unknown category: {category}"),
            });
            continue;
        }
        items.push(TestCase {
            hindi: nfc(fields[0].trim()),
            reference: fields[1].trim().to_string(),
            category,
        });
    }
    Ok(LoadOutcome { items, rejects })
}

/// Translates each test case and scores it.
pub fn evaluate(bundle: &Bundle, cases: &[TestCase]) -> EvalReport {
    let inputs: Vec<EvalInput> = cases
        .par_iter()
        .map(|case| EvalInput {
            source: case.hindi.clone(),
            reference: case.reference.clone(),
            hypothesis: translate(bundle, &case.hindi, false).output,
            category: case.category.clone(),
        })
        .collect();
    evaluate_corpus(&inputs)
}

/// Corpus statistics for the bundled parallel data.
pub fn parallel_stats(path: &Path) -> Result<CorpusStats> {
    let outcome = load_parallel(path)?;
    Ok(corpus_stats(&outcome.items))
}
