//! Word error rate scoring and per-category evaluation reports.

use std::collections::BTreeMap;

use serde::Serialize;

/// Edit operation counts from the cheapest alignment of hypothesis to
/// reference. Ties during backtrace prefer substitution, then deletion,
/// then insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct EditStats {
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
    pub reference_len: usize,
}

impl EditStats {
    pub fn total_edits(&self) -> usize {
        self.substitutions + self.deletions + self.insertions
    }

    pub fn wer(&self) -> f64 {
        if self.reference_len == 0 {
            if self.total_edits() == 0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.total_edits() as f64 / self.reference_len as f64
        }
    }
}

/// Case-folds and strips a single terminal `.`, `!`, or `?` before
/// splitting on whitespace.
pub fn normalize(text: &str) -> Vec<String> {
    let trimmed = text.trim();
    let trimmed = trimmed
        .strip_suffix(['.', '!', '?'])
        .unwrap_or(trimmed)
        .trim_end();
    trimmed
        .split_whitespace()
        .map(|w| w.to_lowercase())
        .collect()
}

/// Levenshtein alignment over word sequences.
pub fn edit_stats(reference: &[String], hypothesis: &[String]) -> EditStats {
    let r = reference.len();
    let h = hypothesis.len();
    let mut dist = vec![vec![0usize; h + 1]; r + 1];
    for (i, row) in dist.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in dist[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=r {
        for j in 1..=h {
            let sub_cost = usize::from(reference[i - 1] != hypothesis[j - 1]);
            dist[i][j] = (dist[i - 1][j - 1] + sub_cost)
                .min(dist[i - 1][j] + 1)
                .min(dist[i][j - 1] + 1);
        }
    }

    let mut stats = EditStats {
        reference_len: r,
        ..EditStats::default()
    };
    let (mut i, mut j) = (r, h);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 && dist[i][j] == dist[i - 1][j - 1] && reference[i - 1] == hypothesis[j - 1]
        {
            i -= 1;
            j -= 1;
        } else if i > 0 && j > 0 && dist[i][j] == dist[i - 1][j - 1] + 1 {
            stats.substitutions += 1;
            i -= 1;
            j -= 1;
        } else if i > 0 && dist[i][j] == dist[i - 1][j] + 1 {
            stats.deletions += 1;
            i -= 1;
        } else {
            stats.insertions += 1;
            j -= 1;
        }
    }
    stats
}

pub fn wer(reference: &str, hypothesis: &str) -> f64 {
    edit_stats(&normalize(reference), &normalize(hypothesis)).wer()
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalRecord {
    pub source: String,
    pub reference: String,
    pub hypothesis: String,
    pub category: String,
    pub edits: EditStats,
    pub wer: f64,
    /// 1 - WER, unclamped; may go negative when the hypothesis is much
    /// longer than the reference.
    pub sentence_accuracy: f64,
    pub valid: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CategorySummary {
    pub category: String,
    pub sentences: usize,
    /// Mean of per-sentence accuracies clamped at zero, as a percentage.
    pub accuracy_pct: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub records: Vec<EvalRecord>,
    pub categories: Vec<CategorySummary>,
    pub overall_accuracy_pct: f64,
}

pub struct EvalInput {
    pub source: String,
    pub reference: String,
    pub hypothesis: String,
    pub category: String,
}

pub fn evaluate_corpus(inputs: &[EvalInput]) -> EvalReport {
    let mut records = Vec::with_capacity(inputs.len());
    for input in inputs {
        let reference = normalize(&input.reference);
        let hypothesis = normalize(&input.hypothesis);
        let edits = edit_stats(&reference, &hypothesis);
        let wer = edits.wer();
        let valid = wer.is_finite();
        records.push(EvalRecord {
            source: input.source.clone(),
            reference: input.reference.clone(),
            hypothesis: input.hypothesis.clone(),
            category: input.category.clone(),
            edits,
            wer,
            sentence_accuracy: 1.0 - wer,
            valid,
        });
    }

    let mut by_category: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut all = Vec::new();
    for record in &records {
        if !record.valid {
            continue;
        }
        let clamped = record.sentence_accuracy.max(0.0);
        by_category
            .entry(record.category.clone())
            .or_default()
            .push(clamped);
        all.push(clamped);
    }
    let mean_pct = |xs: &[f64]| {
        if xs.is_empty() {
            0.0
        } else {
            100.0 * xs.iter().sum::<f64>() / xs.len() as f64
        }
    };
    let categories = by_category
        .iter()
        .map(|(category, accs)| CategorySummary {
            category: category.clone(),
            sentences: accs.len(),
            accuracy_pct: mean_pct(accs),
        })
        .collect();
    EvalReport {
        records,
        categories,
        overall_accuracy_pct: mean_pct(&all),
    }
}

impl EvalReport {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{:<12} {:>9} {:>12}\n", "category", "sentences", "accuracy"));
        for cat in &self.categories {
            out.push_str(&format!(
                "{:<12} {:>9} {:>11.2}%\n",
                cat.category, cat.sentences, cat.accuracy_pct
            ));
        }
        out.push_str(&format!(
            "{:<12} {:>9} {:>11.2}%\n",
            "overall",
            self.records.iter().filter(|r| r.valid).count(),
            self.overall_accuracy_pct
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    /// Exponential-time reference implementation of edit distance.
    fn brute_distance(reference: &[String], hypothesis: &[String]) -> usize {
        match (reference.split_first(), hypothesis.split_first()) {
            (None, None) => 0,
            (None, Some(_)) => hypothesis.len(),
            (Some(_), None) => reference.len(),
            (Some((r, r_rest)), Some((h, h_rest))) => {
                let sub = brute_distance(r_rest, h_rest) + usize::from(r != h);
                let del = brute_distance(r_rest, hypothesis) + 1;
                let ins = brute_distance(reference, h_rest) + 1;
                sub.min(del).min(ins)
            }
        }
    }

    #[test]
    fn exact_match_is_zero() {
        assert_eq!(wer("India is my country.", "india is my country"), 0.0);
    }

    #[test]
    fn single_substitution() {
        let stats = edit_stats(&words("i am omkar"), &words("i am ajay"));
        assert_eq!(stats.substitutions, 1);
        assert_eq!(stats.deletions, 0);
        assert_eq!(stats.insertions, 0);
        assert!((stats.wer() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn deletion_and_insertion() {
        let stats = edit_stats(&words("he is a good boy"), &words("he is good boy"));
        assert_eq!(stats.total_edits(), 1);
        assert_eq!(stats.deletions, 1);
        let stats = edit_stats(&words("he is good"), &words("he is very good"));
        assert_eq!(stats.insertions, 1);
    }

    #[test]
    fn empty_reference_nonempty_hypothesis_is_invalid() {
        let stats = edit_stats(&[], &words("something"));
        assert!(stats.wer().is_infinite());
        let report = evaluate_corpus(&[EvalInput {
            source: "x".into(),
            reference: "".into(),
            hypothesis: "something".into(),
            category: "simple".into(),
        }]);
        assert!(!report.records[0].valid);
        assert!(report.categories.is_empty());
    }

    #[test]
    fn normalization_strips_one_terminal_mark_and_case() {
        assert_eq!(normalize("Are you writing?"), words("are you writing"));
        assert_eq!(normalize("Stop!!"), vec!["stop!".to_string()]);
    }

    #[test]
    fn accuracy_clamped_per_category_but_not_per_record() {
        let report = evaluate_corpus(&[EvalInput {
            source: "x".into(),
            reference: "a".into(),
            hypothesis: "b c d".into(),
            category: "complex".into(),
        }]);
        assert!(report.records[0].sentence_accuracy < 0.0);
        assert_eq!(report.categories[0].accuracy_pct, 0.0);
    }

    #[test]
    fn category_means_match_hand_computation() {
        let report = evaluate_corpus(&[
            EvalInput {
                source: "a".into(),
                reference: "one two three four".into(),
                hypothesis: "one two three four".into(),
                category: "simple".into(),
            },
            EvalInput {
                source: "b".into(),
                reference: "one two three four".into(),
                hypothesis: "one two three five".into(),
                category: "simple".into(),
            },
        ]);
        let simple = &report.categories[0];
        assert_eq!(simple.sentences, 2);
        assert!((simple.accuracy_pct - 87.5).abs() < 1e-9);
        assert!((report.overall_accuracy_pct - 87.5).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            r in proptest::collection::vec("[ab]{1,2}", 0..6),
            h in proptest::collection::vec("[ab]{1,2}", 0..6),
        ) {
            let stats = edit_stats(&r, &h);
            prop_assert_eq!(stats.total_edits(), brute_distance(&r, &h));
        }

        #[test]
        fn distance_symmetry(
            r in proptest::collection::vec("[abc]", 0..6),
            h in proptest::collection::vec("[abc]", 0..6),
        ) {
            prop_assert_eq!(
                edit_stats(&r, &h).total_edits(),
                edit_stats(&h, &r).total_edits()
            );
        }

        #[test]
        fn identical_sequences_cost_nothing(
            r in proptest::collection::vec("[abc]{1,3}", 0..8),
        ) {
            prop_assert_eq!(edit_stats(&r, &r).total_edits(), 0);
        }
    }
}
