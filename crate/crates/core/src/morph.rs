//! Tense detection and English surface morphology.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lexicon::{Feature, TaggedUnit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tense {
    SimplePresent,
    PresentContinuous,
    SimplePast,
    PastContinuous,
}

impl Tense {
    pub fn is_continuous(&self) -> bool {
        matches!(self, Tense::PresentContinuous | Tense::PastContinuous)
    }

    pub fn is_past(&self) -> bool {
        matches!(self, Tense::SimplePast | Tense::PastContinuous)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Person {
    First,
    Second,
    Third,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Number {
    Singular,
    Plural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TenseInfo {
    pub tense: Tense,
    pub person: Person,
    pub number: Number,
}

/// Tense from auxiliary flags, person/number from pronoun and plural
/// marking. Defaults: simple present, third singular.
pub fn detect_tense(units: &[TaggedUnit]) -> TenseInfo {
    let has = |f: Feature| units.iter().any(|u| u.has(f));
    let tense = match (
        has(Feature::AuxPresent),
        has(Feature::AuxPast),
        has(Feature::AuxContinuous),
    ) {
        (true, _, true) => Tense::PresentContinuous,
        (true, _, false) => Tense::SimplePresent,
        (false, true, true) => Tense::PastContinuous,
        (false, true, false) => Tense::SimplePast,
        (false, false, _) => {
            if has(Feature::Perfective) {
                Tense::SimplePast
            } else {
                Tense::SimplePresent
            }
        }
    };
    let person = if has(Feature::FirstPerson) {
        Person::First
    } else if has(Feature::SecondPerson) {
        Person::Second
    } else {
        Person::Third
    };
    let number = if has(Feature::PluralMarked) {
        Number::Plural
    } else {
        Number::Singular
    };
    TenseInfo {
        tense,
        person,
        number,
    }
}

/// am/is/are/was/were by tense, person and number.
pub fn linking_verb(info: &TenseInfo) -> &'static str {
    let plural_or_second = info.number == Number::Plural || info.person == Person::Second;
    if info.tense.is_past() {
        if plural_or_second {
            "were"
        } else {
            "was"
        }
    } else if plural_or_second {
        "are"
    } else if info.person == Person::First {
        "am"
    } else {
        "is"
    }
}

#[derive(Debug, Clone, Default)]
pub struct IrregularVerbs {
    forms: BTreeMap<String, (String, String)>,
}

impl IrregularVerbs {
    /// Loads `lemma<TAB>past<TAB>past_participle` lines.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Load {
            path: path.to_path_buf(),
            source,
        })?;
        let mut forms = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::Format {
                    what: "irregular verbs".to_string(),
                    line: i + 1,
                    reason: format!("expected 3 fields, got {}", fields.len()),
                });
            }
            forms.insert(
                fields[0].trim().to_lowercase(),
                (
                    fields[1].trim().to_lowercase(),
                    fields[2].trim().to_lowercase(),
                ),
            );
        }
        Ok(IrregularVerbs { forms })
    }

    pub fn past(&self, lemma: &str) -> Option<&str> {
        self.forms.get(lemma).map(|(past, _)| past.as_str())
    }
}

/// Lemmas whose final consonant doubles before -ing/-ed.
const DOUBLING: [&str; 12] = [
    "run", "sit", "get", "stop", "put", "cut", "hit", "swim", "begin", "plan", "shop", "drop",
];

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn ing_form(lemma: &str) -> String {
    if DOUBLING.contains(&lemma) {
        let last = lemma.chars().last().unwrap();
        return format!("{lemma}{last}ing");
    }
    if let Some(stem) = lemma.strip_suffix("ie") {
        return format!("{stem}ying");
    }
    if lemma.ends_with('e') && !lemma.ends_with("ee") {
        return format!("{}ing", &lemma[..lemma.len() - 1]);
    }
    format!("{lemma}ing")
}

fn ed_form(lemma: &str) -> String {
    if DOUBLING.contains(&lemma) {
        let last = lemma.chars().last().unwrap();
        return format!("{lemma}{last}ed");
    }
    if lemma.ends_with('e') {
        return format!("{lemma}d");
    }
    if lemma.len() >= 2 && lemma.ends_with('y') {
        let before = lemma.chars().rev().nth(1).unwrap();
        if !is_vowel(before) {
            return format!("{}ied", &lemma[..lemma.len() - 1]);
        }
    }
    format!("{lemma}ed")
}

fn s_form(lemma: &str) -> String {
    if lemma.ends_with('s')
        || lemma.ends_with('x')
        || lemma.ends_with('z')
        || lemma.ends_with('o')
        || lemma.ends_with("ch")
        || lemma.ends_with("sh")
    {
        return format!("{lemma}es");
    }
    if lemma.len() >= 2 && lemma.ends_with('y') {
        let before = lemma.chars().rev().nth(1).unwrap();
        if !is_vowel(before) {
            return format!("{}ies", &lemma[..lemma.len() - 1]);
        }
    }
    format!("{lemma}s")
}

/// Inflects a base-form verb for the detected tense.
pub fn inflect_verb(lemma: &str, info: &TenseInfo, irregular: &IrregularVerbs) -> String {
    match info.tense {
        Tense::PresentContinuous | Tense::PastContinuous => ing_form(lemma),
        Tense::SimplePast => irregular
            .past(lemma)
            .map(String::from)
            .unwrap_or_else(|| ed_form(lemma)),
        Tense::SimplePresent => {
            if info.person == Person::Third && info.number == Number::Singular {
                s_form(lemma)
            } else {
                lemma.to_string()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn irregulars() -> IrregularVerbs {
        let mut forms = BTreeMap::new();
        for (lemma, past, pp) in [
            ("be", "was", "been"),
            ("do", "did", "done"),
            ("go", "went", "gone"),
            ("get", "got", "got"),
            ("say", "said", "said"),
            ("write", "wrote", "written"),
        ] {
            forms.insert(lemma.to_string(), (past.to_string(), pp.to_string()));
        }
        IrregularVerbs { forms }
    }

    fn info(tense: Tense, person: Person, number: Number) -> TenseInfo {
        TenseInfo {
            tense,
            person,
            number,
        }
    }

    #[test]
    fn writing_drops_final_e() {
        assert_eq!(
            inflect_verb(
                "write",
                &info(Tense::PresentContinuous, Person::Second, Number::Plural),
                &irregulars()
            ),
            "writing"
        );
    }

    #[test]
    fn did_via_irregular_table() {
        assert_eq!(
            inflect_verb(
                "do",
                &info(Tense::SimplePast, Person::Third, Number::Singular),
                &irregulars()
            ),
            "did"
        );
    }

    #[test]
    fn walks_regular_third_singular() {
        assert_eq!(
            inflect_verb(
                "walk",
                &info(Tense::SimplePresent, Person::Third, Number::Singular),
                &irregulars()
            ),
            "walks"
        );
    }

    #[test]
    fn assorted_inflections() {
        let past = info(Tense::SimplePast, Person::Third, Number::Singular);
        let present3 = info(Tense::SimplePresent, Person::Third, Number::Singular);
        let cont = info(Tense::PresentContinuous, Person::Third, Number::Singular);
        let irr = irregulars();
        assert_eq!(inflect_verb("try", &past, &irr), "tried");
        assert_eq!(inflect_verb("play", &past, &irr), "played");
        assert_eq!(inflect_verb("stop", &past, &irr), "stopped");
        assert_eq!(inflect_verb("go", &present3, &irr), "goes");
        assert_eq!(inflect_verb("try", &present3, &irr), "tries");
        assert_eq!(inflect_verb("watch", &present3, &irr), "watches");
        assert_eq!(inflect_verb("run", &cont, &irr), "running");
        assert_eq!(inflect_verb("die", &cont, &irr), "dying");
        assert_eq!(inflect_verb("see", &cont, &irr), "seeing");
    }

    #[test]
    fn no_double_suffixes_on_fixture_verbs() {
        let irr = irregulars();
        let verbs = ["write", "do", "go", "say", "get", "play", "walk", "tire"];
        for lemma in verbs {
            for tense in [
                Tense::SimplePresent,
                Tense::PresentContinuous,
                Tense::SimplePast,
                Tense::PastContinuous,
            ] {
                let form = inflect_verb(
                    lemma,
                    &info(tense, Person::Third, Number::Singular),
                    &irr,
                );
                assert!(!form.contains("eing"), "{form}");
                assert!(!form.ends_with("eed") || lemma.ends_with("eed"), "{form}");
                assert!(!form.contains("doed") && !form.contains("goed"), "{form}");
            }
        }
    }

    #[test]
    fn linking_verb_total_over_grid() {
        let mut seen = std::collections::BTreeSet::new();
        for tense in [
            Tense::SimplePresent,
            Tense::PresentContinuous,
            Tense::SimplePast,
            Tense::PastContinuous,
        ] {
            for person in [Person::First, Person::Second, Person::Third] {
                for number in [Number::Singular, Number::Plural] {
                    let form = linking_verb(&info(tense, person, number));
                    assert!(["am", "is", "are", "was", "were"].contains(&form));
                    seen.insert(form);
                }
            }
        }
        assert_eq!(seen.len(), 5);
    }

    #[test]
    fn linking_verb_fixture_cells() {
        assert_eq!(
            linking_verb(&info(Tense::SimplePresent, Person::First, Number::Singular)),
            "am"
        );
        assert_eq!(
            linking_verb(&info(Tense::SimplePresent, Person::Third, Number::Singular)),
            "is"
        );
        assert_eq!(
            linking_verb(&info(
                Tense::PresentContinuous,
                Person::Second,
                Number::Plural
            )),
            "are"
        );
        assert_eq!(
            linking_verb(&info(Tense::SimplePast, Person::Third, Number::Singular)),
            "was"
        );
        assert_eq!(
            linking_verb(&info(Tense::PastContinuous, Person::Third, Number::Plural)),
            "were"
        );
    }
}
