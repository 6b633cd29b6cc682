//! Ordered boundary-aware string rewriting.
//!
//! A ruleset is a plain list of `lhs -> rhs` replacements applied strictly in
//! list order: each rule rewrites every occurrence (left to right,
//! non-overlapping) throughout the whole text before the next rule runs.
//! Ordering is what makes the scheme work: "ce -> se" must beat "c -> k",
//! and "ch -> v" must run after "v -> b", so rule files are never reordered.
//!
//! "_" in a rule denotes exactly one space. Normalization guarantees the text
//! starts and ends with a space, so "_" also matches at the text edges.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::corpus::{DiacriticMode, NormalizedText};
use crate::error::{Error, Result};

const REFERENCE_RULES: &str = include_str!("../rules/reference.rules");
const REFERENCE_DIACRITIC_RULES: &str = include_str!("../rules/reference_diacritic.rules");

/// One rewrite. `lhs`/`rhs` are stored in file notation, with "_" for the
/// boundary; `rhs` may be empty (deletion).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub lhs: String,
    pub rhs: String,
    /// Position in the rule list, 1-based like the rule-file line ordering.
    pub index: usize,
}

impl RewriteRule {
    /// Match pattern with "_" expanded to a literal space.
    pub fn pattern(&self) -> String {
        self.lhs.replace('_', " ")
    }

    /// Replacement with "_" expanded to a literal space.
    pub fn replacement(&self) -> String {
        self.rhs.replace('_', " ")
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

/// An ordered list of rewrite rules plus the normalization mode it expects.
#[derive(Debug, Clone)]
pub struct RuleSet {
    name: String,
    rules: Vec<RewriteRule>,
    mode: DiacriticMode,
}

impl RuleSet {
    /// The reference Spanish phonemization shipped with the crate.
    pub fn reference() -> RuleSet {
        parse_rule_file(REFERENCE_RULES)
            .expect("embedded reference rules parse")
            .with_name("reference")
    }

    /// The diacritic-aware variant; runs on í-preserving text.
    pub fn reference_diacritic() -> RuleSet {
        parse_rule_file(REFERENCE_DIACRITIC_RULES)
            .expect("embedded diacritic rules parse")
            .with_name("reference-diacritic")
            .with_mode(DiacriticMode::PreserveIAcute)
    }

    pub fn builtin(name: &str) -> Option<RuleSet> {
        match name {
            "reference" => Some(RuleSet::reference()),
            "reference-diacritic" | "reference_diacritic" => Some(RuleSet::reference_diacritic()),
            _ => None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> RuleSet {
        self.name = name.into();
        self
    }

    pub fn with_mode(mut self, mode: DiacriticMode) -> RuleSet {
        self.mode = mode;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn mode(&self) -> DiacriticMode {
        self.mode
    }

    /// Symbols a transduction over normalized input may legitimately emit:
    /// the base alphabet for the mode plus everything the rules write.
    fn expected_symbols(&self) -> BTreeSet<char> {
        let mut set: BTreeSet<char> = ('a'..='z').collect();
        set.insert('ñ');
        set.insert('ü');
        set.insert(' ');
        if self.mode == DiacriticMode::PreserveIAcute {
            set.insert('í');
        }
        for rule in &self.rules {
            set.extend(rule.replacement().chars());
        }
        set
    }
}

/// Parses rule-file text: one `lhs -> rhs` per line, `_` for the boundary,
/// empty rhs for deletion, `#` comments and blank lines skipped.
pub fn parse_rule_file(src: &str) -> Result<RuleSet> {
    let mut rules = Vec::new();
    for (lineno, raw) in src.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let (lhs, rhs) = line.split_once("->").ok_or_else(|| Error::RuleParse {
            line: lineno + 1,
            message: format!("expected 'lhs -> rhs', got '{}'", line.trim()),
        })?;
        let lhs = lhs.trim();
        let rhs = rhs.trim();
        if lhs.is_empty() {
            return Err(Error::RuleParse {
                line: lineno + 1,
                message: "empty left-hand side".into(),
            });
        }
        rules.push(RewriteRule {
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            index: rules.len() + 1,
        });
    }
    Ok(RuleSet {
        name: "custom".into(),
        rules,
        mode: DiacriticMode::StripAll,
    })
}

/// Working text after transduction. Symbols are single characters except for
/// bracketed compounds (`[ie]`) introduced by the diphthong hypotheses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhonemeString {
    text: String,
    mode: DiacriticMode,
    unknown: Vec<char>,
}

impl PhonemeString {
    pub fn from_raw(text: impl Into<String>, mode: DiacriticMode) -> PhonemeString {
        PhonemeString {
            text: text.into(),
            mode,
            unknown: Vec::new(),
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn mode(&self) -> DiacriticMode {
        self.mode
    }

    /// Input symbols the ruleset did not account for; they passed through
    /// untouched and should be surfaced as warnings.
    pub fn unknown_symbols(&self) -> &[char] {
        &self.unknown
    }

    /// Replaces the text, keeping mode and warnings. For hypothesis passes.
    pub(crate) fn with_text(&self, text: String) -> PhonemeString {
        PhonemeString {
            text,
            mode: self.mode,
            unknown: self.unknown.clone(),
        }
    }
}

/// Runs the ruleset over normalized text, rule by rule in authored order.
///
/// Fails if the text was normalized under a different diacritic mode than the
/// ruleset expects.
pub fn apply_rules(text: &NormalizedText, rules: &RuleSet) -> Result<PhonemeString> {
    if text.mode() != rules.mode() {
        return Err(Error::ModeMismatch(format!(
            "text normalized as {} but ruleset '{}' expects {}",
            text.mode().as_str(),
            rules.name,
            rules.mode().as_str()
        )));
    }
    let mut working = text.text().to_string();
    for rule in &rules.rules {
        working = working.replace(&rule.pattern(), &rule.replacement());
    }
    let expected = rules.expected_symbols();
    let unknown: Vec<char> = working
        .chars()
        .filter(|c| !expected.contains(c))
        .collect::<BTreeSet<char>>()
        .into_iter()
        .collect();
    Ok(PhonemeString {
        text: working,
        mode: text.mode(),
        unknown,
    })
}

/// Splits working text into countable symbols: one char each, except that
/// `[..]` groups count as a single compound symbol. Spaces are skipped.
pub fn symbols(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        match c {
            ' ' => {}
            '[' => {
                let mut compound = String::new();
                for inner in chars.by_ref() {
                    if inner == ']' {
                        break;
                    }
                    compound.push(inner);
                }
                out.push(compound);
            }
            _ => out.push(c.to_string()),
        }
    }
    out
}

/// Counts every non-space symbol. Errors if nothing is countable.
pub fn count_symbols(p: &PhonemeString) -> Result<BTreeMap<String, u64>> {
    let mut counts = BTreeMap::new();
    for sym in symbols(p.text()) {
        *counts.entry(sym).or_insert(0u64) += 1;
    }
    if counts.is_empty() {
        return Err(Error::EmptyCorpus("no symbols to count".into()));
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{normalize, CorpusDocument};

    fn transduce(raw: &str) -> String {
        let doc = CorpusDocument::new("t", raw);
        let text = normalize(&doc, DiacriticMode::StripAll).unwrap();
        apply_rules(&text, &RuleSet::reference())
            .unwrap()
            .text()
            .to_string()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(transduce("queso"), " keso ");
        assert_eq!(transduce("chico"), " viko ");
        assert_eq!(transduce("vaca"), " baka ");
        assert_eq!(transduce("el rio honra"), " el qio onqa ");
    }

    #[test]
    fn h_is_deleted_not_replaced_by_space() {
        assert_eq!(transduce("ahora"), " aora ");
        assert_eq!(transduce("hola"), " ola ");
    }

    #[test]
    fn boundary_rules_match_text_edges() {
        // "_r" at the very start relies on the frame space from normalization
        assert_eq!(transduce("rosa roja"), " qosa qoxa ");
    }

    #[test]
    fn silent_u_and_diaeresis() {
        assert_eq!(transduce("guerra"), " geqa ");
        assert_eq!(transduce("pingüino"), " pinguino ");
    }

    #[test]
    fn diacritic_ruleset_keeps_i_acute() {
        let doc = CorpusDocument::new("t", "vacío energía guía");
        let text = normalize(&doc, DiacriticMode::PreserveIAcute).unwrap();
        let out = apply_rules(&text, &RuleSet::reference_diacritic()).unwrap();
        assert_eq!(out.text(), " basío enerxía gía ");
    }

    #[test]
    fn mode_mismatch_is_rejected() {
        let doc = CorpusDocument::new("t", "río");
        let text = normalize(&doc, DiacriticMode::PreserveIAcute).unwrap();
        assert!(matches!(
            apply_rules(&text, &RuleSet::reference()),
            Err(Error::ModeMismatch(_))
        ));
    }

    #[test]
    fn parse_basic_rules() {
        let rs = parse_rule_file("qu -> k\nh -> \n_r -> _q\n# comment\n\n").unwrap();
        assert_eq!(rs.rules().len(), 3);
        assert_eq!(rs.rules()[0].lhs, "qu");
        assert_eq!(rs.rules()[0].rhs, "k");
        assert_eq!(rs.rules()[1].rhs, "");
        assert_eq!(rs.rules()[2].pattern(), " r");
        assert_eq!(rs.rules()[2].index, 3);
    }

    #[test]
    fn parse_rejects_empty_lhs_with_line_number() {
        let err = parse_rule_file("qu -> k\n-> x\n").unwrap_err();
        match err {
            Error::RuleParse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_missing_arrow() {
        let err = parse_rule_file("qu k\n").unwrap_err();
        assert!(matches!(err, Error::RuleParse { line: 1, .. }));
    }

    #[test]
    fn reference_rulesets_have_expected_shape() {
        assert_eq!(RuleSet::reference().rules().len(), 24);
        assert_eq!(RuleSet::reference_diacritic().rules().len(), 27);
        assert_eq!(
            RuleSet::reference_diacritic().mode(),
            DiacriticMode::PreserveIAcute
        );
        assert!(RuleSet::builtin("reference").is_some());
        assert!(RuleSet::builtin("nope").is_none());
    }

    #[test]
    fn unknown_symbols_pass_through_with_warning() {
        let text = NormalizedText::from_raw(" ab9c ", DiacriticMode::StripAll);
        let out = apply_rules(&text, &RuleSet::reference()).unwrap();
        assert_eq!(out.text(), " ab9k ");
        assert_eq!(out.unknown_symbols(), &['9']);
    }

    #[test]
    fn count_symbols_examples() {
        let p = PhonemeString::from_raw(" keso ", DiacriticMode::StripAll);
        let counts = count_symbols(&p).unwrap();
        let expect: BTreeMap<String, u64> = [("k", 1), ("e", 1), ("s", 1), ("o", 1)]
            .into_iter()
            .map(|(s, c)| (s.to_string(), c))
            .collect();
        assert_eq!(counts, expect);

        let p = PhonemeString::from_raw(" aa a ", DiacriticMode::StripAll);
        assert_eq!(count_symbols(&p).unwrap()["a"], 3);

        let empty = PhonemeString::from_raw("   ", DiacriticMode::StripAll);
        assert!(matches!(count_symbols(&empty), Err(Error::EmptyCorpus(_))));
    }

    #[test]
    fn compound_symbols_count_as_one() {
        let p = PhonemeString::from_raw(" t[ie]ne ", DiacriticMode::StripAll);
        let counts = count_symbols(&p).unwrap();
        assert_eq!(counts["ie"], 1);
        assert_eq!(counts["t"], 1);
        assert_eq!(counts["n"], 1);
        assert_eq!(counts["e"], 1);
        assert_eq!(counts.len(), 4);
    }

    #[test]
    fn word_final_y_rules() {
        assert_eq!(transduce("voy"), " boi ");
        // the comma/period variants only fire on hand-made working text
        let raw = NormalizedText::from_raw(" hoy, ley. ", DiacriticMode::StripAll);
        let out = apply_rules(&raw, &RuleSet::reference()).unwrap();
        assert_eq!(out.text(), " oi, lei. ");
    }
}
