//! Specification preprocessing: tokenization, part-of-speech tagging and
//! lemmatization, plus extraction of the UML-elements set used for path
//! ranking.
//!
//! The tagger/lemmatizer is a bundled lexicon-plus-rules engine behind the
//! [`Tagger`] trait, so a statistical implementation can be swapped in
//! without touching the rest of the pipeline. Unknown words default to
//! NOUN, which favors recall of domain terms like "CustomerCard".

mod lexicon;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NlpError {
    #[error("specification text is empty")]
    EmptyInput,
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid specification record on line {line}: {source}")]
    Schema {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

/// Part-of-speech classes that matter for element extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PosTag {
    Noun,
    Adj,
    Verb,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    /// Lowercase base form.
    pub lemma: String,
    pub pos: PosTag,
}

/// Set E: lemmatized nouns and adjectives extracted from a specification.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UmlElementSet {
    pub elements: BTreeSet<String>,
}

impl UmlElementSet {
    pub fn from_terms<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        UmlElementSet {
            elements: terms
                .into_iter()
                .map(Into::into)
                .filter(|t| !t.is_empty())
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }
}

/// Replaceable tagging/lemmatization engine.
pub trait Tagger: Send + Sync {
    fn tag(&self, word: &str) -> PosTag;
    fn lemmatize(&self, word: &str, pos: PosTag) -> String;
}

/// The bundled deterministic tagger: closed-class and adjective/verb
/// lexicons plus conservative suffix rules.
#[derive(Debug, Default, Clone, Copy)]
pub struct RuleTagger;

impl RuleTagger {
    fn verb_base(word: &str) -> bool {
        lexicon::VERBS.contains(&word)
    }

    fn inflected_verb(word: &str) -> bool {
        for suffix in ["ing", "ed", "es", "s"] {
            if let Some(stem) = word.strip_suffix(suffix) {
                if Self::verb_base(stem) {
                    return true;
                }
                // doubled final consonant: stopping -> stop
                if stem.len() >= 3 {
                    let bytes = stem.as_bytes();
                    if bytes[stem.len() - 1] == bytes[stem.len() - 2]
                        && Self::verb_base(&stem[..stem.len() - 1])
                    {
                        return true;
                    }
                }
                // dropped final e: generating -> generate
                let restored = format!("{stem}e");
                if Self::verb_base(&restored) {
                    return true;
                }
            }
        }
        false
    }
}

impl Tagger for RuleTagger {
    fn tag(&self, word: &str) -> PosTag {
        let w = word.to_lowercase();
        if w.chars().all(|c| c.is_ascii_digit()) {
            return PosTag::Other;
        }
        if lexicon::CLOSED_CLASS.contains(&w.as_str()) {
            return PosTag::Other;
        }
        if lexicon::ADJECTIVES.contains(&w.as_str()) {
            return PosTag::Adj;
        }
        if Self::verb_base(&w) || Self::inflected_verb(&w) {
            return PosTag::Verb;
        }
        for suffix in ["ous", "ful", "less", "able", "ible", "ive"] {
            if w.len() > suffix.len() + 2 && w.ends_with(suffix) {
                return PosTag::Adj;
            }
        }
        if w.len() > 4 && w.ends_with("ing") && !lexicon::ING_NOUNS.contains(&w.as_str()) {
            return PosTag::Verb;
        }
        if w.len() > 4
            && w.ends_with("ed")
            && lexicon::IRREGULAR_LEMMAS
                .iter()
                .all(|(form, lemma)| !(*form == w && *lemma == w))
        {
            return PosTag::Verb;
        }
        PosTag::Noun
    }

    fn lemmatize(&self, word: &str, pos: PosTag) -> String {
        let w = word.to_lowercase();
        if let Some((_, lemma)) = lexicon::IRREGULAR_LEMMAS.iter().find(|(form, _)| *form == w) {
            return (*lemma).to_string();
        }
        match pos {
            PosTag::Noun | PosTag::Other => noun_lemma(&w),
            PosTag::Verb => verb_lemma(&w),
            PosTag::Adj => w,
        }
    }
}

fn noun_lemma(w: &str) -> String {
    if w.len() > 4 && w.ends_with("sses") {
        return w[..w.len() - 2].to_string();
    }
    for suffix in ["xes", "ches", "shes", "zes"] {
        if w.len() > suffix.len() + 1 && w.ends_with(suffix) {
            return w[..w.len() - 2].to_string();
        }
    }
    if w.len() > 4 && w.ends_with("ies") {
        return format!("{}y", &w[..w.len() - 3]);
    }
    if w.len() > 4 && w.ends_with("oes") {
        return w[..w.len() - 2].to_string();
    }
    if w.len() > 3
        && w.ends_with('s')
        && !w.ends_with("ss")
        && !w.ends_with("us")
        && !w.ends_with("is")
    {
        return w[..w.len() - 1].to_string();
    }
    w.to_string()
}

fn verb_lemma(w: &str) -> String {
    if RuleTagger::verb_base(w) {
        return w.to_string();
    }
    if w.len() > 5 && w.ends_with("ies") {
        return format!("{}y", &w[..w.len() - 3]);
    }
    if w.len() > 5 && w.ends_with("ing") {
        return undouble(&w[..w.len() - 3]);
    }
    if w.len() > 4 && w.ends_with("ied") {
        return format!("{}y", &w[..w.len() - 3]);
    }
    if w.len() > 4 && w.ends_with("ed") {
        return undouble(&w[..w.len() - 2]);
    }
    noun_lemma(w)
}

/// Collapse a doubled final consonant left by -ed/-ing stripping. Final
/// 'l' and 's' are kept ("called", "missed" stay "call"/"miss").
fn undouble(stem: &str) -> String {
    let bytes = stem.as_bytes();
    if stem.len() >= 3 {
        let last = bytes[stem.len() - 1];
        if last == bytes[stem.len() - 2] && matches!(last, b'b' | b'd' | b'g' | b'm' | b'n' | b'p' | b'r' | b't') {
            return stem[..stem.len() - 1].to_string();
        }
    }
    stem.to_string()
}

/// Split on whitespace and punctuation: tokens are maximal runs of
/// alphanumeric characters. Punctuation itself is discarded.
fn split_words(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_string)
        .collect()
}

/// Tokenize, tag and lemmatize a specification with the bundled tagger.
pub fn preprocess(spec_text: &str) -> Result<Vec<Token>, NlpError> {
    preprocess_with(spec_text, &RuleTagger)
}

/// Tokenize, tag and lemmatize with an explicit tagger implementation.
pub fn preprocess_with(spec_text: &str, tagger: &dyn Tagger) -> Result<Vec<Token>, NlpError> {
    if spec_text.trim().is_empty() {
        return Err(NlpError::EmptyInput);
    }
    Ok(split_words(spec_text)
        .into_iter()
        .map(|surface| {
            let pos = tagger.tag(&surface);
            let lemma = tagger.lemmatize(&surface, pos);
            Token { surface, lemma, pos }
        })
        .collect())
}

/// Set of lemmas of all NOUN and ADJ tokens, lowercased and deduplicated.
pub fn extract_uml_elements(tokens: &[Token]) -> UmlElementSet {
    UmlElementSet {
        elements: tokens
            .iter()
            .filter(|t| matches!(t.pos, PosTag::Noun | PosTag::Adj))
            .map(|t| t.lemma.clone())
            .filter(|l| !l.is_empty())
            .collect(),
    }
}

/// Normalize a single model identifier (class/attribute/operation/role
/// name) the same way specification nouns are normalized: lowercase plus
/// noun lemmatization, so "flights" matches the class name "Flight".
pub fn normalize_term(term: &str) -> String {
    let w = term.to_lowercase();
    if let Some((_, lemma)) = lexicon::IRREGULAR_LEMMAS.iter().find(|(form, _)| *form == w) {
        return (*lemma).to_string();
    }
    noun_lemma(&w)
}

/// One record of the JSON-lines specification input file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecInput {
    pub id: String,
    pub text: String,
    #[serde(default)]
    pub context_hint: Option<String>,
}

/// Load a JSON-lines specification file (blank lines ignored).
pub fn load_specs(path: impl AsRef<Path>) -> Result<Vec<SpecInput>, NlpError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| NlpError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut specs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: SpecInput =
            serde_json::from_str(line).map_err(|source| NlpError::Schema { line: i + 1, source })?;
        specs.push(record);
    }
    Ok(specs)
}
