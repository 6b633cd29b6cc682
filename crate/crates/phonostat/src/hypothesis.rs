//! Phoneme-inventory hypotheses: reshape a transduced text (or its counts)
//! before measuring its rank-frequency distribution.
//!
//! The split passes judge adjacency on their own input string, never on
//! partially rewritten text, so chained vowel runs resolve deterministically.

use std::collections::BTreeMap;
use std::fmt;

use crate::corpus::DiacriticMode;
use crate::error::{Error, Result};
use crate::transducer::PhonemeString;

/// A named inventory hypothesis. Merge carries its symbol group; every other
/// kind is parameter-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Hypothesis {
    /// Reference transduction counted as-is.
    Identity,
    /// Normalized letters counted directly, bypassing the transducer.
    RawLetters,
    /// /w/ split from /u/.
    WSplit,
    /// /w/ and /j/ both split out.
    WjSplit,
    /// /w/ and /j/ split with í-aware hiatus protection.
    WjSplitDiacritic,
    /// Every adjacent vowel pair fused into a compound symbol.
    DiphthongsAll,
    /// Only vowel pairs containing i or u fused.
    DiphthongsIu,
    /// Artificial merge of ≥2 symbols at the counts level.
    Merge(Vec<String>),
}

impl Hypothesis {
    /// Parses a parameter-free hypothesis name. "merge" is rejected here
    /// because it needs a symbol group; use [`Hypothesis::merge`].
    pub fn from_name(name: &str) -> Result<Hypothesis> {
        match name {
            "identity" => Ok(Hypothesis::Identity),
            "raw-letters" => Ok(Hypothesis::RawLetters),
            "w-split" => Ok(Hypothesis::WSplit),
            "wj-split" => Ok(Hypothesis::WjSplit),
            "wj-split-diacritic" => Ok(Hypothesis::WjSplitDiacritic),
            "diphthongs-all" => Ok(Hypothesis::DiphthongsAll),
            "diphthongs-iu" => Ok(Hypothesis::DiphthongsIu),
            "merge" => Err(Error::InvalidParameter(
                "hypothesis 'merge' requires a group of at least 2 symbols".into(),
            )),
            other => Err(Error::InvalidParameter(format!(
                "unknown hypothesis '{other}'"
            ))),
        }
    }

    /// Builds a merge hypothesis, validating the group.
    pub fn merge<I, S>(group: I) -> Result<Hypothesis>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let group: Vec<String> = group.into_iter().map(Into::into).collect();
        validate_merge_group(&group)?;
        Ok(Hypothesis::Merge(group))
    }

    pub fn name(&self) -> String {
        match self {
            Hypothesis::Identity => "identity".into(),
            Hypothesis::RawLetters => "raw-letters".into(),
            Hypothesis::WSplit => "w-split".into(),
            Hypothesis::WjSplit => "wj-split".into(),
            Hypothesis::WjSplitDiacritic => "wj-split-diacritic".into(),
            Hypothesis::DiphthongsAll => "diphthongs-all".into(),
            Hypothesis::DiphthongsIu => "diphthongs-iu".into(),
            Hypothesis::Merge(group) => format!("merge({})", group.join("+")),
        }
    }

    /// The conventional figure label used in comparison tables.
    pub fn figure_label(&self) -> &'static str {
        match self {
            Hypothesis::Identity => "Fig. 1",
            Hypothesis::RawLetters => "Fig. 2",
            Hypothesis::WSplit => "Fig. 3",
            Hypothesis::WjSplit => "Fig. 4",
            Hypothesis::WjSplitDiacritic => "Fig. 5",
            Hypothesis::DiphthongsAll => "Fig. 6",
            Hypothesis::DiphthongsIu => "Fig. 7",
            Hypothesis::Merge(_) => "benchmark",
        }
    }

    /// The normalization mode the hypothesis's pipeline runs under.
    pub fn required_mode(&self) -> DiacriticMode {
        match self {
            Hypothesis::WjSplitDiacritic => DiacriticMode::PreserveIAcute,
            _ => DiacriticMode::StripAll,
        }
    }

    /// raw-letters counts normalized letters directly.
    pub fn bypasses_transducer(&self) -> bool {
        matches!(self, Hypothesis::RawLetters)
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn validate_merge_group(group: &[String]) -> Result<()> {
    if group.len() < 2 {
        return Err(Error::InvalidParameter(
            "merge group needs at least 2 symbols".into(),
        ));
    }
    if group.iter().any(|s| s.is_empty()) {
        return Err(Error::InvalidParameter(
            "merge group contains an empty symbol".into(),
        ));
    }
    for (i, sym) in group.iter().enumerate() {
        if group[..i].contains(sym) {
            return Err(Error::InvalidParameter(format!(
                "merge group repeats symbol '{sym}'"
            )));
        }
    }
    Ok(())
}

const W_CONTEXT: [char; 4] = ['a', 'e', 'i', 'o'];
const J_CONTEXT: [char; 5] = ['a', 'e', 'o', 'u', 'w'];

fn split_pass(text: &str, target: char, replacement: char, context: &[char]) -> String {
    let chars: Vec<char> = text.chars().collect();
    chars
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if c != target {
                return c;
            }
            let before = i.checked_sub(1).map(|p| chars[p]);
            let after = chars.get(i + 1).copied();
            let adjacent = |n: Option<char>| n.is_some_and(|ch| context.contains(&ch));
            if adjacent(before) || adjacent(after) {
                replacement
            } else {
                c
            }
        })
        .collect()
}

/// Replaces every "u" next to {a,e,i,o} (either side) with "w". Neighbors are
/// read from the input string, so "auua" becomes "awwa" in one pass.
pub fn split_w(p: &PhonemeString) -> PhonemeString {
    p.with_text(split_pass(p.text(), 'u', 'w', &W_CONTEXT))
}

/// Replaces every "i" next to {a,e,o,u,w} (either side) with "j". With
/// `diacritic_aware`, "í" marks hiatus: it is never turned into "j" and is
/// lowered to plain "i" once the pass is done.
pub fn split_j(p: &PhonemeString, diacritic_aware: bool) -> Result<PhonemeString> {
    if diacritic_aware && p.mode() != DiacriticMode::PreserveIAcute {
        return Err(Error::ModeMismatch(
            "diacritic-aware j-split needs text normalized as preserve-i-acute".into(),
        ));
    }
    let mut out = split_pass(p.text(), 'i', 'j', &J_CONTEXT);
    if diacritic_aware {
        out = out.replace('í', "i");
    }
    Ok(p.with_text(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiphthongScope {
    All,
    IuOnly,
}

impl DiphthongScope {
    fn admits(self, a: char, b: char) -> bool {
        match self {
            DiphthongScope::All => true,
            DiphthongScope::IuOnly => a == 'i' || a == 'u' || b == 'i' || b == 'u',
        }
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

/// Fuses adjacent vowel pairs into bracketed compound symbols, scanning left
/// to right with greedy non-overlapping pairing: in "aei", "ae" fuses and "i"
/// stays single. A pair outside the scope leaves its first vowel single and
/// the scan moves on by one, so "eai" under iu-only becomes "e[ai]".
pub fn group_diphthongs(p: &PhonemeString, scope: DiphthongScope) -> PhonemeString {
    let chars: Vec<char> = p.text().chars().collect();
    let mut out = String::with_capacity(p.text().len());
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if let Some(&next) = chars.get(i + 1) {
            if is_vowel(c) && is_vowel(next) && scope.admits(c, next) {
                out.push('[');
                out.push(c);
                out.push(next);
                out.push(']');
                i += 2;
                continue;
            }
        }
        out.push(c);
        i += 1;
    }
    p.with_text(out)
}

/// Sums the counts of the group's members under one "+"-joined label, leaving
/// everything else untouched. Members missing from the map contribute zero;
/// the total count is preserved exactly.
pub fn merge_symbols(
    counts: &BTreeMap<String, u64>,
    group: &[String],
) -> Result<BTreeMap<String, u64>> {
    validate_merge_group(group)?;
    let mut merged = counts.clone();
    let sum: u64 = group.iter().filter_map(|sym| merged.remove(sym)).sum();
    if sum > 0 {
        *merged.entry(group.join("+")).or_insert(0) += sum;
    }
    Ok(merged)
}
