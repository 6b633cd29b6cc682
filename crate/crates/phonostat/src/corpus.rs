//! Corpus loading, normalization, and aggregation.
//!
//! Raw documents are folded into a uniform working alphabet before
//! transduction: lower case, accents stripped (configurably keeping "í"),
//! every non-alphabetic character collapsed into a single space. The output
//! always starts and ends with a space so that word boundaries look the same
//! everywhere, including at the edges of the text.

use std::fs;
use std::path::{Path, PathBuf};

use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// How acute accents on "i" are treated during normalization.
///
/// "ñ" and "ü" survive in both modes: "ñ" is a phoneme of its own and "ü"
/// must reach the transducer intact so that "güe"/"güi" escape the silent-u
/// rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum DiacriticMode {
    /// All accents removed; output alphabet is a-z, ñ, ü, space.
    StripAll,
    /// "í" is kept distinct so downstream passes can tell hiatus from glide.
    PreserveIAcute,
}

impl DiacriticMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiacriticMode::StripAll => "strip-all-diacritics",
            DiacriticMode::PreserveIAcute => "preserve-i-acute",
        }
    }
}

/// A labeled piece of raw text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusDocument {
    id: String,
    raw_text: String,
    char_count: usize,
}

impl CorpusDocument {
    /// Builds a document and counts the alphabetic symbols that survive
    /// normalization (spaces excluded). Empty documents are representable;
    /// they only fail later, at `normalize`.
    pub fn new(id: impl Into<String>, raw_text: impl Into<String>) -> Self {
        let raw_text = raw_text.into();
        let normalized = normalize_str(&raw_text, DiacriticMode::StripAll);
        let char_count = normalized.chars().filter(|c| *c != ' ').count();
        CorpusDocument {
            id: id.into(),
            raw_text,
            char_count,
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let raw = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(CorpusDocument::new(path.display().to_string(), raw))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn raw_text(&self) -> &str {
        &self.raw_text
    }

    /// Alphabetic characters after normalization, spaces excluded.
    pub fn char_count(&self) -> usize {
        self.char_count
    }
}

/// Text over the uniform working alphabet, with the mode it was produced in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedText {
    text: String,
    mode: DiacriticMode,
}

impl NormalizedText {
    /// Wraps already-normalized text without checking it. Intended for tests
    /// and for callers that assemble working strings by hand.
    pub fn from_raw(text: impl Into<String>, mode: DiacriticMode) -> Self {
        NormalizedText {
            text: text.into(),
            mode,
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn mode(&self) -> DiacriticMode {
        self.mode
    }
}

/// Lower-cases, strips accents per `mode`, folds every non-alphabetic
/// character into a space, and frames the text with single spaces.
///
/// Rejects input that normalizes to nothing.
pub fn normalize(doc: &CorpusDocument, mode: DiacriticMode) -> Result<NormalizedText> {
    let text = normalize_str(&doc.raw_text, mode);
    if text.chars().all(|c| c == ' ') {
        return Err(Error::EmptyCorpus(format!(
            "document '{}' contains no alphabetic characters",
            doc.id
        )));
    }
    Ok(NormalizedText { text, mode })
}

enum Fold {
    Keep(char),
    Boundary,
    Drop,
}

fn normalize_str(raw: &str, mode: DiacriticMode) -> String {
    // Compose first so "i" + combining acute matches the precomposed "í".
    let composed: String = raw.nfc().collect();

    let mut out = String::with_capacity(composed.len() + 2);
    out.push(' ');
    for c in composed.chars() {
        for lc in c.to_lowercase() {
            match classify(lc, mode) {
                Fold::Keep(ch) => out.push(ch),
                Fold::Boundary => {
                    if !out.ends_with(' ') {
                        out.push(' ');
                    }
                }
                Fold::Drop => {}
            }
        }
    }
    if !out.ends_with(' ') {
        out.push(' ');
    }
    out
}

fn classify(lc: char, mode: DiacriticMode) -> Fold {
    match lc {
        'a'..='z' | 'ñ' | 'ü' => Fold::Keep(lc),
        'í' if mode == DiacriticMode::PreserveIAcute => Fold::Keep('í'),
        'á' => Fold::Keep('a'),
        'é' => Fold::Keep('e'),
        'í' => Fold::Keep('i'),
        'ó' => Fold::Keep('o'),
        'ú' => Fold::Keep('u'),
        // stray combining marks (no precomposed form) vanish without
        // splitting the word
        '\u{0300}'..='\u{036f}' => Fold::Drop,
        _ => strip_foreign(lc),
    }
}

/// Letters outside the Spanish alphabet keep their base letter when it is
/// a-z after decomposition (à→a, ç→c, ö→o); anything else becomes a boundary.
fn strip_foreign(c: char) -> Fold {
    if !c.is_alphabetic() {
        return Fold::Boundary;
    }
    match c.nfd().next().filter(|base| base.is_ascii_lowercase()) {
        Some(base) => Fold::Keep(base),
        None => Fold::Boundary,
    }
}

/// Concatenates documents with a single space between them. The combined id
/// lists the constituent ids; symbol counts downstream equal the per-document
/// sums because the junction is a plain word boundary.
pub fn aggregate(docs: &[CorpusDocument]) -> Result<CorpusDocument> {
    if docs.is_empty() {
        return Err(Error::EmptyCorpus("no documents to aggregate".into()));
    }
    if docs.len() == 1 {
        return Ok(docs[0].clone());
    }
    for (i, d) in docs.iter().enumerate() {
        if docs[..i].iter().any(|p| p.id == d.id) {
            return Err(Error::InvalidParameter(format!(
                "duplicate document id '{}' in aggregate",
                d.id
            )));
        }
    }
    let id = docs
        .iter()
        .map(|d| d.id.as_str())
        .collect::<Vec<_>>()
        .join("+");
    let text = docs
        .iter()
        .map(|d| d.raw_text.as_str())
        .collect::<Vec<_>>()
        .join(" ");
    Ok(CorpusDocument::new(id, text))
}

/// Reads a corpus manifest: one path per line, `#` comments and blank lines
/// skipped. Relative paths are resolved against the manifest's directory.
pub fn load_manifest(path: &Path) -> Result<Vec<CorpusDocument>> {
    let src = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut docs = Vec::new();
    for line in src.lines() {
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let entry = PathBuf::from(line);
        let resolved = if entry.is_absolute() {
            entry
        } else {
            base.join(entry)
        };
        docs.push(CorpusDocument::from_file(&resolved)?);
    }
    if docs.is_empty() {
        return Err(Error::EmptyCorpus(format!(
            "manifest '{}' lists no documents",
            path.display()
        )));
    }
    Ok(docs)
}
