//! Grammar rules and rearrangement: tag-pattern matching, SOV-to-SVO slot
//! templates, linking-verb insertion, capitalization and final assembly.
//!
//! Rules live in an ordered external file, first match wins. Pattern syntax
//! (whitespace-separated, anchored over the sentence's content units):
//!
//! ```text
//! NOUN PRON VERB ...  one unit with that tag
//! NAME+ag             tag plus required ergative-agent marking
//! PHRASE              one example-match block
//! *                   any single content unit
//! ..                  zero or more units (at most one per pattern)
//! ..!VERB             like .. but no unit may be a verb
//! @aux                guard: sentence carries an auxiliary flag
//! ```
//!
//! Templates reference unit matchers as $1, $2, ... (guards are not
//! numbered) plus the literals LINK (linking verb) and QAUX (fronted
//! auxiliary); any other token is emitted verbatim.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lexicon::{Feature, Tag, TaggedUnit, UnitKind};
use crate::morph::{inflect_verb, linking_verb, IrregularVerbs, TenseInfo};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SentenceForm {
    Declarative,
    YesNoQuestion,
    WhQuestion,
}

impl SentenceForm {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "declarative" => Some(SentenceForm::Declarative),
            "yes_no_question" => Some(SentenceForm::YesNoQuestion),
            "wh_question" => Some(SentenceForm::WhQuestion),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum UnitMatcher {
    Any,
    Phrase,
    Tagged { tag: Tag, require_agent: bool },
}

#[derive(Debug, Clone, PartialEq)]
enum PatternElem {
    AuxGuard,
    Unit(UnitMatcher),
    Rest { forbid_verb: bool },
}

#[derive(Debug, Clone, PartialEq)]
enum TemplateSlot {
    Ref(usize),
    Link,
    QAux,
    Literal(String),
}

#[derive(Debug, Clone)]
pub struct GrammarRule {
    pub id: String,
    pub form: SentenceForm,
    pattern: Vec<PatternElem>,
    template: Vec<TemplateSlot>,
}

fn parse_pattern(text: &str, line: usize) -> Result<Vec<PatternElem>> {
    let mut elems = Vec::new();
    let mut rest_seen = false;
    for part in text.split_whitespace() {
        let elem = match part {
            "@aux" => PatternElem::AuxGuard,
            "*" => PatternElem::Unit(UnitMatcher::Any),
            "PHRASE" => PatternElem::Unit(UnitMatcher::Phrase),
            ".." => PatternElem::Rest { forbid_verb: false },
            "..!VERB" => PatternElem::Rest { forbid_verb: true },
            other => {
                let (tag_text, require_agent) = match other.strip_suffix("+ag") {
                    Some(stripped) => (stripped, true),
                    None => (other, false),
                };
                let tag = Tag::parse(tag_text).ok_or_else(|| Error::Format {
                    what: "grammar rules".to_string(),
                    line,
                    reason: format!("unknown pattern element: {other}"),
                })?;
                PatternElem::Unit(UnitMatcher::Tagged { tag, require_agent })
            }
        };
        if matches!(elem, PatternElem::Rest { .. }) {
            if rest_seen {
                return Err(Error::Format {
                    what: "grammar rules".to_string(),
                    line,
                    reason: "at most one .. per pattern".to_string(),
                });
            }
            rest_seen = true;
        }
        elems.push(elem);
    }
    Ok(elems)
}

fn parse_template(text: &str, line: usize, slot_count: usize) -> Result<Vec<TemplateSlot>> {
    let mut slots = Vec::new();
    let mut referenced = vec![false; slot_count];
    for part in text.split_whitespace() {
        let slot = if let Some(n) = part.strip_prefix('$') {
            let idx: usize = n.parse().map_err(|_| Error::Format {
                what: "grammar rules".to_string(),
                line,
                reason: format!("bad slot reference: {part}"),
            })?;
            if idx == 0 || idx > slot_count {
                return Err(Error::Format {
                    what: "grammar rules".to_string(),
                    line,
                    reason: format!("slot {part} out of range (pattern has {slot_count})"),
                });
            }
            if referenced[idx - 1] {
                return Err(Error::Format {
                    what: "grammar rules".to_string(),
                    line,
                    reason: format!("slot {part} referenced twice"),
                });
            }
            referenced[idx - 1] = true;
            TemplateSlot::Ref(idx - 1)
        } else if part == "LINK" {
            TemplateSlot::Link
        } else if part == "QAUX" {
            TemplateSlot::QAux
        } else {
            TemplateSlot::Literal(part.to_string())
        };
        slots.push(slot);
    }
    if let Some(missing) = referenced.iter().position(|r| !r) {
        return Err(Error::Format {
            what: "grammar rules".to_string(),
            line,
            reason: format!("slot ${} never referenced by template", missing + 1),
        });
    }
    Ok(slots)
}

#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    rules: Vec<GrammarRule>,
}

impl RuleSet {
    /// Loads `id<TAB>pattern<TAB>template<TAB>sentence_form` lines in order.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Load {
            path: path.to_path_buf(),
            source,
        })?;
        let mut rules = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(Error::Format {
                    what: "grammar rules".to_string(),
                    line: i + 1,
                    reason: format!("expected 4 fields, got {}", fields.len()),
                });
            }
            let pattern = parse_pattern(fields[1], i + 1)?;
            let slot_count = pattern
                .iter()
                .filter(|e| !matches!(e, PatternElem::AuxGuard))
                .count();
            let template = parse_template(fields[2], i + 1, slot_count)?;
            let form = SentenceForm::parse(fields[3].trim()).ok_or_else(|| Error::Format {
                what: "grammar rules".to_string(),
                line: i + 1,
                reason: format!("unknown sentence form: {}", fields[3].trim()),
            })?;
            rules.push(GrammarRule {
                id: fields[0].trim().to_string(),
                form,
                pattern,
                template,
            });
        }
        Ok(RuleSet { rules })
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

/// Indices of content and phrase units, in order.
fn content_indices(units: &[TaggedUnit]) -> Vec<usize> {
    units
        .iter()
        .enumerate()
        .filter(|(_, u)| matches!(u.kind, UnitKind::Content | UnitKind::Phrase))
        .map(|(i, _)| i)
        .collect()
}

fn sentence_form_of(units: &[TaggedUnit]) -> SentenceForm {
    if units.iter().any(|u| u.has(Feature::QuestionParticleInitial)) {
        SentenceForm::YesNoQuestion
    } else if units.iter().any(|u| u.has(Feature::QuestionParticleMedial)) {
        SentenceForm::WhQuestion
    } else {
        SentenceForm::Declarative
    }
}

fn matches_unit(matcher: &UnitMatcher, unit: &TaggedUnit) -> bool {
    match matcher {
        UnitMatcher::Any => true,
        UnitMatcher::Phrase => unit.kind == UnitKind::Phrase,
        UnitMatcher::Tagged { tag, require_agent } => {
            unit.kind == UnitKind::Content
                && unit.effective_tag() == Some(*tag)
                && (!require_agent || unit.has(Feature::ErgativeMarked))
        }
    }
}

/// Binding of unit-consuming matchers to spans of content-unit indices.
type Binding = Vec<Vec<usize>>;

fn match_pattern(rule: &GrammarRule, units: &[TaggedUnit]) -> Option<Binding> {
    if rule
        .pattern
        .iter()
        .any(|e| matches!(e, PatternElem::AuxGuard))
    {
        let has_aux = units
            .iter()
            .any(|u| u.has(Feature::AuxPresent) || u.has(Feature::AuxPast));
        if !has_aux {
            return None;
        }
    }
    let content = content_indices(units);
    let matchers: Vec<&PatternElem> = rule
        .pattern
        .iter()
        .filter(|e| !matches!(e, PatternElem::AuxGuard))
        .collect();
    let rest_pos = matchers
        .iter()
        .position(|e| matches!(e, PatternElem::Rest { .. }));

    let (prefix, rest, suffix): (&[&PatternElem], Option<&PatternElem>, &[&PatternElem]) =
        match rest_pos {
            Some(p) => (&matchers[..p], Some(matchers[p]), &matchers[p + 1..]),
            None => (&matchers[..], None, &[][..]),
        };

    let fixed = prefix.len() + suffix.len();
    if rest.is_none() && content.len() != fixed {
        return None;
    }
    if content.len() < fixed {
        return None;
    }

    let mut binding: Binding = Vec::with_capacity(matchers.len());
    for (i, elem) in prefix.iter().enumerate() {
        let PatternElem::Unit(matcher) = elem else {
            unreachable!()
        };
        if !matches_unit(matcher, &units[content[i]]) {
            return None;
        }
        binding.push(vec![content[i]]);
    }
    if let Some(PatternElem::Rest { forbid_verb }) = rest {
        let middle = &content[prefix.len()..content.len() - suffix.len()];
        if *forbid_verb
            && middle
                .iter()
                .any(|&i| units[i].effective_tag() == Some(Tag::Verb))
        {
            return None;
        }
        binding.push(middle.to_vec());
    }
    for (offset, elem) in suffix.iter().enumerate() {
        let PatternElem::Unit(matcher) = elem else {
            unreachable!()
        };
        let idx = content[content.len() - suffix.len() + offset];
        if !matches_unit(matcher, &units[idx]) {
            return None;
        }
        binding.push(vec![idx]);
    }
    Some(binding)
}

/// First rule (file order) of the sentence's form whose pattern matches.
/// Question-particle flags force the question forms.
pub fn select_rule<'a>(units: &[TaggedUnit], rules: &'a RuleSet) -> Option<&'a GrammarRule> {
    let form = sentence_form_of(units);
    rules
        .rules
        .iter()
        .filter(|r| r.form == form)
        .find(|r| match_pattern(r, units).is_some())
}

#[derive(Debug, Clone, Serialize)]
pub struct RenderedSentence {
    pub text: String,
    pub trace: Vec<(String, String)>,
}

fn capitalize_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().collect::<String>() + chars.as_str(),
        None => String::new(),
    }
}

fn render_unit(
    unit: &TaggedUnit,
    info: &TenseInfo,
    irregulars: &IrregularVerbs,
    need_aux_before_verb: &mut bool,
    words: &mut Vec<String>,
) {
    let Some(candidate) = unit.chosen_candidate() else {
        return;
    };
    match candidate.tag {
        Some(Tag::Verb) => {
            if *need_aux_before_verb {
                words.push(linking_verb(info).to_string());
                *need_aux_before_verb = false;
            }
            words.push(inflect_verb(&candidate.english, info, irregulars));
        }
        Some(Tag::Name) => words.push(capitalize_first(&candidate.english)),
        _ => {
            let text = if candidate.english == "i" {
                "I".to_string()
            } else {
                candidate.english.clone()
            };
            words.push(text);
        }
    }
}

/// Fills the rule's template: reorders units, drops markers, inserts the
/// linking verb or fronted auxiliary, inflects verbs, capitalizes, and
/// appends terminal punctuation per sentence form.
pub fn rearrange(
    units: &[TaggedUnit],
    rule: &GrammarRule,
    info: &TenseInfo,
    irregulars: &IrregularVerbs,
) -> RenderedSentence {
    let binding = match_pattern(rule, units).expect("rule was selected for these units");
    let template_has_aux = rule
        .template
        .iter()
        .any(|s| matches!(s, TemplateSlot::Link | TemplateSlot::QAux));
    // Declarative continuous clauses need their auxiliary in front of the
    // main verb even when the template does not spell it out.
    let mut need_aux_before_verb = info.tense.is_continuous() && !template_has_aux;

    let mut words: Vec<String> = Vec::new();
    for slot in &rule.template {
        match slot {
            TemplateSlot::Ref(i) => {
                for &unit_idx in &binding[*i] {
                    render_unit(
                        &units[unit_idx],
                        info,
                        irregulars,
                        &mut need_aux_before_verb,
                        &mut words,
                    );
                }
            }
            TemplateSlot::Link | TemplateSlot::QAux => {
                words.push(linking_verb(info).to_string());
            }
            TemplateSlot::Literal(text) => words.push(text.clone()),
        }
    }

    let terminal = match rule.form {
        SentenceForm::Declarative => '.',
        SentenceForm::YesNoQuestion | SentenceForm::WhQuestion => '?',
    };
    let mut text = capitalize_first(words.join(" ").trim());
    if !text.is_empty() {
        text.push(terminal);
    }
    let trace = vec![
        ("rule".to_string(), rule.id.clone()),
        ("tense".to_string(), format!("{:?}", info)),
        ("rearranged".to_string(), text.clone()),
    ];
    RenderedSentence { text, trace }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::Candidate;
    use crate::segment::{Segment, SegmentKind, Token};
    use std::collections::BTreeSet;

    fn rules_from(text: &str) -> RuleSet {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rules.tsv");
        fs::write(&path, text).unwrap();
        RuleSet::load(&path).unwrap()
    }

    fn unit(surface: &str, english: &str, tag: Tag, features: &[Feature]) -> TaggedUnit {
        TaggedUnit {
            source: Segment {
                kind: SegmentKind::Word,
                tokens: vec![Token::word(surface)],
                translation: None,
                category: None,
            },
            kind: UnitKind::Content,
            candidates: vec![Candidate {
                english: english.to_string(),
                tag: Some(tag),
            }],
            chosen: Some(0),
            features: features.iter().copied().collect::<BTreeSet<_>>(),
        }
    }

    fn marker(surface: &str, features: &[Feature]) -> TaggedUnit {
        TaggedUnit {
            source: Segment {
                kind: SegmentKind::Word,
                tokens: vec![Token::word(surface)],
                translation: None,
                category: None,
            },
            kind: UnitKind::Marker,
            candidates: Vec::new(),
            chosen: None,
            features: features.iter().copied().collect::<BTreeSet<_>>(),
        }
    }

    const FIXTURE_RULES: &str = "\
wh_question\t..\twhat QAUX $1\twh_question
yes_no_question\t..\tQAUX $1\tyes_no_question
ergative_agent_first\tNAME+ag .. VERB\t$1 $3 $2\tdeclarative
ergative_agent_last\t.. NAME+ag VERB\t$2 $3 $1\tdeclarative
copular\t@aux * ..!VERB\t$1 LINK $2\tdeclarative
svo\t* .. VERB\t$1 $3 $2\tdeclarative
passthrough\t..\t$1\tdeclarative
";

    fn fixture_info(tense: crate::morph::Tense) -> TenseInfo {
        TenseInfo {
            tense,
            person: crate::morph::Person::Third,
            number: crate::morph::Number::Singular,
        }
    }

    fn irregulars() -> IrregularVerbs {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("irr.tsv");
        fs::write(&path, "do\tdid\tdone\ngo\twent\tgone\n").unwrap();
        IrregularVerbs::load(&path).unwrap()
    }

    #[test]
    fn rule_file_parses() {
        let rules = rules_from(FIXTURE_RULES);
        assert_eq!(rules.len(), 7);
    }

    #[test]
    fn duplicate_slot_reference_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rules.tsv");
        fs::write(&path, "bad\t* VERB\t$1 $2 $1\tdeclarative\n").unwrap();
        assert!(RuleSet::load(&path).is_err());
    }

    #[test]
    fn unreferenced_slot_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rules.tsv");
        fs::write(&path, "bad\t* VERB\t$1\tdeclarative\n").unwrap();
        assert!(RuleSet::load(&path).is_err());
    }

    #[test]
    fn question_flags_force_question_rules() {
        let rules = rules_from(FIXTURE_RULES);
        let yes_no = vec![
            marker("क्या", &[Feature::QuestionParticleInitial]),
            unit("आप", "you", Tag::Pron, &[Feature::SecondPerson]),
            unit("लिख", "write", Tag::Verb, &[]),
            marker("रहे", &[Feature::AuxContinuous]),
            marker("हैं", &[Feature::AuxPresent]),
        ];
        assert_eq!(select_rule(&yes_no, &rules).unwrap().id, "yes_no_question");
        let wh = vec![
            unit("आप", "you", Tag::Pron, &[Feature::SecondPerson]),
            marker("क्या", &[Feature::QuestionParticleMedial]),
            unit("लिख", "write", Tag::Verb, &[]),
        ];
        assert_eq!(select_rule(&wh, &rules).unwrap().id, "wh_question");
    }

    #[test]
    fn catch_all_matches_anything() {
        let rules = rules_from(FIXTURE_RULES);
        let units = vec![unit("ओमकार", "omkar", Tag::Name, &[])];
        assert!(select_rule(&units, &rules).is_some());
    }

    #[test]
    fn ergative_reorder_agent_first() {
        let rules = rules_from(FIXTURE_RULES);
        let units = vec![
            unit("विकास", "vikas", Tag::Name, &[Feature::ErgativeMarked]),
            marker("ने", &[]),
            unit("विकास", "development", Tag::Noun, &[Feature::Perfective]),
            unit("किया", "do", Tag::Verb, &[Feature::Perfective]),
        ];
        let rule = select_rule(&units, &rules).unwrap();
        assert_eq!(rule.id, "ergative_agent_first");
        let rendered = rearrange(
            &units,
            rule,
            &fixture_info(crate::morph::Tense::SimplePast),
            &irregulars(),
        );
        assert_eq!(rendered.text, "Vikas did development.");
    }

    #[test]
    fn copular_inserts_linking_verb() {
        let rules = rules_from(FIXTURE_RULES);
        let units = vec![
            unit("भारत", "india", Tag::Noun, &[]),
            unit("मेरा", "my", Tag::Pron, &[]),
            unit("देश", "country", Tag::Noun, &[]),
            marker("है", &[Feature::AuxPresent]),
        ];
        let rule = select_rule(&units, &rules).unwrap();
        assert_eq!(rule.id, "copular");
        let rendered = rearrange(
            &units,
            rule,
            &fixture_info(crate::morph::Tense::SimplePresent),
            &irregulars(),
        );
        assert_eq!(rendered.text, "India is my country.");
    }

    #[test]
    fn phrase_block_passes_through_atomically() {
        let rules = rules_from(FIXTURE_RULES);
        let phrase = TaggedUnit {
            source: Segment {
                kind: SegmentKind::ExampleMatch,
                tokens: vec![
                    Token::word("मुँह"),
                    Token::word("की"),
                    Token::word("बात"),
                    Token::word("छीनी"),
                ],
                translation: Some("said what one was about to say".to_string()),
                category: None,
            },
            kind: UnitKind::Phrase,
            candidates: vec![Candidate {
                english: "said what one was about to say".to_string(),
                tag: None,
            }],
            chosen: Some(0),
            features: BTreeSet::new(),
        };
        let units = vec![
            unit("ओमकार", "omkar", Tag::Name, &[Feature::ErgativeMarked]),
            marker("ने", &[]),
            phrase,
        ];
        let rule = select_rule(&units, &rules).unwrap();
        let rendered = rearrange(
            &units,
            rule,
            &fixture_info(crate::morph::Tense::SimplePresent),
            &irregulars(),
        );
        assert_eq!(rendered.text, "Omkar said what one was about to say.");
    }

    #[test]
    fn every_content_candidate_rendered_exactly_once() {
        let rules = rules_from(FIXTURE_RULES);
        let units = vec![
            unit("विकास", "vikas", Tag::Name, &[Feature::ErgativeMarked]),
            marker("ने", &[]),
            unit("विकास", "development", Tag::Noun, &[]),
            unit("किया", "do", Tag::Verb, &[Feature::Perfective]),
        ];
        let rule = select_rule(&units, &rules).unwrap();
        let rendered = rearrange(
            &units,
            rule,
            &fixture_info(crate::morph::Tense::SimplePast),
            &irregulars(),
        );
        let lowered = rendered.text.to_lowercase();
        for expected in ["vikas", "did", "development"] {
            assert_eq!(lowered.matches(expected).count(), 1, "{expected}");
        }
    }
}
