//! Devanagari-to-Latin transliteration with inherent-schwa handling.
//!
//! Consonants carry an inherent "a" unless they take a dependent vowel sign,
//! a virama, or sit word-finally. A medial schwa is additionally deleted when
//! the preceding unit ends in a vowel and the following consonant carries an
//! explicit vowel sign (ओमकार -> omkar, भारत -> bharat).

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

const VIRAMA: char = '\u{094D}';

#[derive(Debug, Clone, Default)]
pub struct TransliterationTable {
    map: HashMap<char, String>,
}

fn is_consonant(ch: char) -> bool {
    matches!(ch, '\u{0915}'..='\u{0939}' | '\u{0958}'..='\u{095F}')
}

fn is_independent_vowel(ch: char) -> bool {
    matches!(ch, '\u{0904}'..='\u{0914}')
}

fn is_matra(ch: char) -> bool {
    matches!(ch, '\u{093E}'..='\u{094C}' | '\u{0962}' | '\u{0963}')
}

fn is_sign(ch: char) -> bool {
    matches!(ch, '\u{0901}' | '\u{0902}' | '\u{0903}')
}

impl TransliterationTable {
    /// Loads `devanagari_char<TAB>latin` lines.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Load {
            path: path.to_path_buf(),
            source,
        })?;
        let mut map = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 2 {
                return Err(Error::Format {
                    what: "transliteration table".to_string(),
                    line: i + 1,
                    reason: format!("expected 2 fields, got {}", fields.len()),
                });
            }
            let mut chars = fields[0].trim().chars();
            let ch = chars.next().ok_or_else(|| Error::Format {
                what: "transliteration table".to_string(),
                line: i + 1,
                reason: "empty devanagari field".to_string(),
            })?;
            if chars.next().is_some() {
                return Err(Error::Format {
                    what: "transliteration table".to_string(),
                    line: i + 1,
                    reason: "devanagari field must be a single codepoint".to_string(),
                });
            }
            map.insert(ch, fields[1].trim().to_lowercase());
        }
        Ok(TransliterationTable { map })
    }

    pub fn from_pairs(pairs: &[(char, &str)]) -> Self {
        TransliterationTable {
            map: pairs
                .iter()
                .map(|(c, l)| (*c, l.to_lowercase()))
                .collect(),
        }
    }

    fn latin(&self, ch: char) -> Result<&str> {
        self.map
            .get(&ch)
            .map(|s| s.as_str())
            .ok_or(Error::UncoveredCodepoint {
                ch,
                codepoint: ch as u32,
            })
    }
}

#[derive(Debug)]
enum Unit {
    Vowel(String),
    Consonant {
        latin: String,
        matra: Option<String>,
        halant: bool,
        trailing: String,
    },
}

fn parse_units(word: &str, table: &TransliterationTable) -> Result<Vec<Unit>> {
    let mut units: Vec<Unit> = Vec::new();
    for ch in word.chars() {
        if is_consonant(ch) {
            units.push(Unit::Consonant {
                latin: table.latin(ch)?.to_string(),
                matra: None,
                halant: false,
                trailing: String::new(),
            });
        } else if is_independent_vowel(ch) {
            units.push(Unit::Vowel(table.latin(ch)?.to_string()));
        } else if is_matra(ch) {
            let latin = table.latin(ch)?.to_string();
            match units.last_mut() {
                Some(Unit::Consonant { matra, .. }) => *matra = Some(latin),
                _ => units.push(Unit::Vowel(latin)),
            }
        } else if ch == '\u{093C}' {
            // nukta: NFC decomposes क़..य़ to base consonant + nukta; the
            // table maps the base consonant, so the nukta itself is silent
            continue;
        } else if ch == VIRAMA {
            if let Some(Unit::Consonant { halant, .. }) = units.last_mut() {
                *halant = true;
            }
        } else if is_sign(ch) {
            let latin = table.latin(ch)?.to_string();
            match units.last_mut() {
                Some(Unit::Consonant { trailing, .. }) => trailing.push_str(&latin),
                Some(Unit::Vowel(v)) => v.push_str(&latin),
                None => units.push(Unit::Vowel(latin)),
            }
        } else {
            return Err(Error::UncoveredCodepoint {
                ch,
                codepoint: ch as u32,
            });
        }
    }
    Ok(units)
}

fn ends_in_vowel(unit: &Unit, keeps_schwa: bool) -> bool {
    match unit {
        Unit::Vowel(_) => true,
        Unit::Consonant { matra, halant, .. } => matra.is_some() || (!halant && keeps_schwa),
    }
}

/// Transliterates one Devanagari word to lowercase Latin.
pub fn transliterate(word: &str, table: &TransliterationTable) -> Result<String> {
    let units = parse_units(word, table)?;
    let last_consonantish = units
        .iter()
        .rposition(|u| matches!(u, Unit::Consonant { .. }));
    let mut out = String::new();
    let mut prev_kept_schwa = false;
    for (i, unit) in units.iter().enumerate() {
        match unit {
            Unit::Vowel(v) => {
                out.push_str(v);
                prev_kept_schwa = false;
            }
            Unit::Consonant {
                latin,
                matra,
                halant,
                trailing,
            } => {
                out.push_str(latin);
                if let Some(m) = matra {
                    out.push_str(m);
                    prev_kept_schwa = false;
                } else if *halant || Some(i) == last_consonantish {
                    // conjunct or word-final: schwa deleted
                    prev_kept_schwa = false;
                } else {
                    let prev_vocalic = i > 0 && ends_in_vowel(&units[i - 1], prev_kept_schwa);
                    let next_has_matra = matches!(
                        units.get(i + 1),
                        Some(Unit::Consonant { matra: Some(_), .. })
                    );
                    if prev_vocalic && next_has_matra {
                        prev_kept_schwa = false;
                    } else {
                        out.push('a');
                        prev_kept_schwa = true;
                    }
                }
                out.push_str(trailing);
            }
        }
    }
    Ok(out)
}
