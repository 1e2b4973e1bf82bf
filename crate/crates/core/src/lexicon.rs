//! Dictionary lookup, feature detection, proper-noun rules, and tagging.
//!
//! Word segments become tagged units carrying English candidates from the
//! bilingual dictionary. Function words (ने, है, रहा, क्या, ...) turn into
//! marker units whose feature flags drive tense detection and rule selection.
//! Out-of-vocabulary words and rule-identified proper nouns fall back to
//! transliteration with the NAME tag.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::corpus::DictionaryEntry;
use crate::error::{Error, Result};
use crate::segment::{Segment, SegmentKind, TokenKind};
use crate::translit::{transliterate, TransliterationTable};

/// The seven tags used in translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Tag {
    Pron,
    Animt,
    Verb,
    Adj,
    Adv,
    Noun,
    Name,
}

impl Tag {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "PRON" => Some(Tag::Pron),
            "ANIMT" => Some(Tag::Animt),
            "VERB" => Some(Tag::Verb),
            "ADJ" => Some(Tag::Adj),
            "ADV" => Some(Tag::Adv),
            "NOUN" => Some(Tag::Noun),
            "NAME" => Some(Tag::Name),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Tag::Pron => "PRON",
            Tag::Animt => "ANIMT",
            Tag::Verb => "VERB",
            Tag::Adj => "ADJ",
            Tag::Adv => "ADV",
            Tag::Noun => "NOUN",
            Tag::Name => "NAME",
        }
    }
}

/// Morphosyntactic flags collected during the feature pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    ErgativeMarked,
    PluralMarked,
    QuestionParticleInitial,
    QuestionParticleMedial,
    AuxPresent,
    AuxPast,
    AuxContinuous,
    FirstPerson,
    SecondPerson,
    ThirdPerson,
    Perfective,
}

/// Flags a function word can carry in `function_words.tsv`. Marker flags turn
/// the word into a non-content marker unit; feature flags only annotate it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionFlag {
    Ergative,
    AuxPresent,
    AuxPast,
    AuxContinuous,
    Question,
    Conjunction,
    FirstPerson,
    SecondPerson,
    Plural,
    Perfective,
}

impl FunctionFlag {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ergative" => Some(FunctionFlag::Ergative),
            "aux_present" => Some(FunctionFlag::AuxPresent),
            "aux_past" => Some(FunctionFlag::AuxPast),
            "aux_continuous" => Some(FunctionFlag::AuxContinuous),
            "question" => Some(FunctionFlag::Question),
            "conjunction" => Some(FunctionFlag::Conjunction),
            "first_person" => Some(FunctionFlag::FirstPerson),
            "second_person" => Some(FunctionFlag::SecondPerson),
            "plural" => Some(FunctionFlag::Plural),
            "perfective" => Some(FunctionFlag::Perfective),
            _ => None,
        }
    }

    /// Marker flags strip the word of content candidates.
    pub fn is_marker(&self) -> bool {
        matches!(
            self,
            FunctionFlag::Ergative
                | FunctionFlag::AuxPresent
                | FunctionFlag::AuxPast
                | FunctionFlag::AuxContinuous
                | FunctionFlag::Question
                | FunctionFlag::Conjunction
        )
    }

    fn as_feature(&self) -> Option<Feature> {
        match self {
            FunctionFlag::Ergative => None,
            FunctionFlag::AuxPresent => Some(Feature::AuxPresent),
            FunctionFlag::AuxPast => Some(Feature::AuxPast),
            FunctionFlag::AuxContinuous => Some(Feature::AuxContinuous),
            FunctionFlag::Question => None, // position decides initial/medial
            FunctionFlag::Conjunction => None,
            FunctionFlag::FirstPerson => Some(Feature::FirstPerson),
            FunctionFlag::SecondPerson => Some(Feature::SecondPerson),
            FunctionFlag::Plural => Some(Feature::PluralMarked),
            FunctionFlag::Perfective => Some(Feature::Perfective),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct FunctionWordTable {
    flags: BTreeMap<String, Vec<FunctionFlag>>,
}

impl FunctionWordTable {
    /// Loads `surface<TAB>flag` lines; a surface may repeat to carry
    /// several flags.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Load {
            path: path.to_path_buf(),
            source,
        })?;
        let mut table = FunctionWordTable::default();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 2 {
                return Err(Error::Format {
                    what: "function words".to_string(),
                    line: i + 1,
                    reason: format!("expected 2 fields, got {}", fields.len()),
                });
            }
            let flag = FunctionFlag::parse(fields[1].trim()).ok_or_else(|| Error::Format {
                what: "function words".to_string(),
                line: i + 1,
                reason: format!("unknown flag: {}", fields[1].trim()),
            })?;
            table
                .flags
                .entry(crate::corpus::nfc(fields[0].trim()))
                .or_default()
                .push(flag);
        }
        Ok(table)
    }

    pub fn flags(&self, surface: &str) -> &[FunctionFlag] {
        self.flags.get(surface).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_marker(&self, surface: &str) -> bool {
        self.flags(surface).iter().any(FunctionFlag::is_marker)
    }
}

/// Proper-noun rule toggles; one rule id per line enables that rule.
#[derive(Debug, Clone, Default)]
pub struct ProperNounRules {
    enabled: BTreeSet<String>,
}

impl ProperNounRules {
    pub fn all() -> Self {
        ProperNounRules {
            enabled: ["R1", "R2", "R3"].iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Load {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(ProperNounRules {
            enabled: text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from)
                .collect(),
        })
    }

    pub fn is_enabled(&self, id: &str) -> bool {
        self.enabled.contains(id)
    }
}

/// Bilingual dictionary indexed by Hindi surface, senses in file order.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    senses: BTreeMap<String, Vec<(String, Tag)>>,
}

impl Lexicon {
    pub fn from_entries(entries: &[DictionaryEntry]) -> Self {
        let mut lexicon = Lexicon::default();
        for entry in entries {
            lexicon
                .senses
                .entry(entry.hindi_lemma.clone())
                .or_default()
                .push((entry.english_lemma.clone(), entry.tag));
        }
        lexicon
    }

    /// All dictionary senses in file order; empty if out-of-vocabulary.
    pub fn lookup(&self, word: &str) -> &[(String, Tag)] {
        self.senses.get(word).map(Vec::as_slice).unwrap_or(&[])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub english: String,
    /// None for opaque example-match blocks.
    pub tag: Option<Tag>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitKind {
    Content,
    Marker,
    Phrase,
    Punctuation,
}

#[derive(Debug, Clone, Serialize)]
pub struct TaggedUnit {
    pub source: Segment,
    pub kind: UnitKind,
    pub candidates: Vec<Candidate>,
    pub chosen: Option<usize>,
    pub features: BTreeSet<Feature>,
}

impl TaggedUnit {
    pub fn surface(&self) -> String {
        self.source.surface()
    }

    pub fn has(&self, feature: Feature) -> bool {
        self.features.contains(&feature)
    }

    pub fn effective_tag(&self) -> Option<Tag> {
        let idx = self.chosen.unwrap_or(0);
        self.candidates.get(idx).and_then(|c| c.tag)
    }

    pub fn chosen_candidate(&self) -> Option<&Candidate> {
        self.candidates.get(self.chosen.unwrap_or(0))
    }

    fn set_name(&mut self, latin: String) {
        self.candidates = vec![Candidate {
            english: latin,
            tag: Some(Tag::Name),
        }];
        self.chosen = Some(0);
    }
}

fn transliterate_or_placeholder(
    word: &str,
    table: &TransliterationTable,
    warnings: &mut Vec<String>,
) -> String {
    match transliterate(word, table) {
        Ok(latin) => latin,
        Err(err) => {
            warnings.push(format!("transliteration of '{}' failed: {}", word, err));
            word.chars()
                .map(|c| format!("<U+{:04X}>", c as u32))
                .collect()
        }
    }
}

/// Proper-noun identification. A fired rule replaces the unit's candidates
/// with its transliteration tagged NAME.
///
/// R1: out-of-vocabulary word with no function-word role.
/// R2: agent before ने whose surface recurs elsewhere in a non-agent slot;
///     the agent becomes NAME, the other occurrence keeps its sense.
/// R3: words between a first-person pronoun and हूँ that are all
///     out-of-vocabulary or nominal become a NAME sequence.
pub fn identify_proper_nouns(
    units: &mut [TaggedUnit],
    rules: &ProperNounRules,
    table: &TransliterationTable,
    warnings: &mut Vec<String>,
) {
    for id in ["R1", "R2", "R3"] {
        if rules.is_enabled(id) {
            apply_proper_noun_rule(units, id, table, warnings);
        }
    }
}

pub(crate) fn apply_proper_noun_rule(
    units: &mut [TaggedUnit],
    rule: &str,
    table: &TransliterationTable,
    warnings: &mut Vec<String>,
) {
    if rule == "R2" {
        let agents: Vec<usize> = units
            .iter()
            .enumerate()
            .filter(|(_, u)| u.kind == UnitKind::Content && u.has(Feature::ErgativeMarked))
            .map(|(i, _)| i)
            .collect();
        for i in agents {
            let surface = units[i].surface();
            let recurs = units
                .iter()
                .enumerate()
                .any(|(j, u)| j != i && u.kind == UnitKind::Content && u.surface() == surface);
            if recurs {
                let latin = transliterate_or_placeholder(&surface, table, warnings);
                units[i].set_name(latin);
            }
        }
    }

    if rule == "R3" {
        let first_person_pron = units.iter().position(|u| {
            u.kind == UnitKind::Content
                && u.has(Feature::FirstPerson)
                && u.effective_tag() == Some(Tag::Pron)
        });
        let hoon = units
            .iter()
            .position(|u| u.kind == UnitKind::Marker && u.surface() == "हूँ");
        if let (Some(start), Some(end)) = (first_person_pron, hoon) {
            if start + 1 < end {
                let between: Vec<usize> = (start + 1..end)
                    .filter(|&i| units[i].kind == UnitKind::Content)
                    .collect();
                let all_nominal_or_oov = !between.is_empty()
                    && between.iter().all(|&i| {
                        units[i].candidates.is_empty()
                            || matches!(
                                units[i].effective_tag(),
                                Some(Tag::Noun) | Some(Tag::Name) | Some(Tag::Animt)
                            )
                    });
                if all_nominal_or_oov {
                    for i in between {
                        let surface = units[i].surface();
                        let latin = transliterate_or_placeholder(&surface, table, warnings);
                        units[i].set_name(latin);
                    }
                }
            }
        }
    }

    // R1 doubles as the totality fallback: every content unit ends up with
    // at least one candidate.
    if rule == "R1" {
        for unit in units.iter_mut() {
            if unit.kind == UnitKind::Content && unit.candidates.is_empty() {
                let surface = unit.surface();
                let latin = transliterate_or_placeholder(&surface, table, warnings);
                unit.set_name(latin);
            }
        }
    }
}

/// Turns segments into tagged units: dictionary lookup, function-word
/// markers, feature pass, proper-noun rules.
pub fn tag_sentence(
    segments: &[Segment],
    lexicon: &Lexicon,
    function_words: &FunctionWordTable,
    pn_rules: &ProperNounRules,
    table: &TransliterationTable,
    warnings: &mut Vec<String>,
) -> Vec<TaggedUnit> {
    let mut units: Vec<TaggedUnit> = segments
        .iter()
        .map(|seg| match seg.kind {
            SegmentKind::ExampleMatch => TaggedUnit {
                source: seg.clone(),
                kind: UnitKind::Phrase,
                candidates: vec![Candidate {
                    english: seg.translation.clone().unwrap_or_default(),
                    tag: None,
                }],
                chosen: Some(0),
                features: BTreeSet::new(),
            },
            SegmentKind::Word => {
                let token = &seg.tokens[0];
                if token.kind == TokenKind::Punctuation {
                    return TaggedUnit {
                        source: seg.clone(),
                        kind: UnitKind::Punctuation,
                        candidates: Vec::new(),
                        chosen: None,
                        features: BTreeSet::new(),
                    };
                }
                let flags = function_words.flags(&token.surface);
                let features: BTreeSet<Feature> =
                    flags.iter().filter_map(FunctionFlag::as_feature).collect();
                if flags.iter().any(FunctionFlag::is_marker) {
                    TaggedUnit {
                        source: seg.clone(),
                        kind: UnitKind::Marker,
                        candidates: Vec::new(),
                        chosen: None,
                        features,
                    }
                } else {
                    let candidates: Vec<Candidate> = lexicon
                        .lookup(&token.surface)
                        .iter()
                        .map(|(english, tag)| Candidate {
                            english: english.clone(),
                            tag: Some(*tag),
                        })
                        .collect();
                    TaggedUnit {
                        source: seg.clone(),
                        kind: UnitKind::Content,
                        candidates,
                        chosen: None,
                        features,
                    }
                }
            }
        })
        .collect();

    feature_pass(&mut units, function_words);
    identify_proper_nouns(&mut units, pn_rules, table, warnings);

    for unit in units.iter_mut() {
        if unit.kind == UnitKind::Content && unit.chosen.is_none() && unit.candidates.len() == 1 {
            unit.chosen = Some(0);
        }
    }
    units
}

/// Positional features: question-particle position and ergative agents.
fn feature_pass(units: &mut [TaggedUnit], function_words: &FunctionWordTable) {
    let word_indices: Vec<usize> = units
        .iter()
        .enumerate()
        .filter(|(_, u)| u.kind != UnitKind::Punctuation)
        .map(|(i, _)| i)
        .collect();

    for (pos, &i) in word_indices.iter().enumerate() {
        let surface = units[i].surface();
        let is_question = function_words
            .flags(&surface)
            .contains(&FunctionFlag::Question);
        if is_question {
            let feature = if pos == 0 {
                Feature::QuestionParticleInitial
            } else {
                Feature::QuestionParticleMedial
            };
            units[i].features.insert(feature);
        }
        if units[i].kind == UnitKind::Marker
            && function_words
                .flags(&surface)
                .contains(&FunctionFlag::Ergative)
            && pos > 0
        {
            let agent = word_indices[pos - 1];
            if units[agent].kind == UnitKind::Content {
                units[agent].features.insert(Feature::ErgativeMarked);
            }
        }
    }
}
