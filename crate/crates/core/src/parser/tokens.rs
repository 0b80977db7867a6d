//! Tokenizer and the unknown-word pass that runs before parsing.

use std::fmt;
use std::sync::OnceLock;

use log::debug;
use regex::Regex;

use crate::error::{Error, Result};
use crate::lexicon::{coordination_hint, Inflection, LexEntry, Lexicon, Pos};
use crate::ontology::{ConceptId, Ontology, TOP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    /// Surface text; merged multiword and name tokens keep their spaces.
    pub text: String,
    /// Position in the token sequence.
    pub index: usize,
    pub entries: Vec<LexEntry>,
    pub capitalized: bool,
    /// A capitalized or quoted name spanning one or more words.
    pub name: bool,
    pub quoted: bool,
}

impl Token {
    pub fn lower(&self) -> String {
        self.text.to_lowercase()
    }

    pub fn is(&self, word: &str) -> bool {
        self.text.eq_ignore_ascii_case(word)
    }

    pub fn is_any(&self, words: &[&str]) -> bool {
        words.iter().any(|w| self.is(w))
    }

    pub fn is_punct(&self) -> bool {
        self.text.chars().all(|c| c.is_ascii_punctuation())
    }

    pub fn has_pos(&self, pos: Pos) -> bool {
        self.entries.iter().any(|e| e.pos == pos)
    }

    pub fn entry(&self, pos: Pos) -> Option<&LexEntry> {
        self.entries.iter().find(|e| e.pos == pos)
    }

    pub fn lemma(&self, pos: Pos) -> Option<&str> {
        self.entry(pos).map(|e| e.lemma.as_str())
    }

    pub fn is_known(&self) -> bool {
        !self.entries.is_empty() || self.is_punct()
    }

    pub fn verb_entry(&self) -> Option<&LexEntry> {
        self.entry(Pos::Verb)
    }

    pub fn is_verb_form(&self, infl: &[Inflection]) -> bool {
        self.entries
            .iter()
            .any(|e| e.pos == Pos::Verb && infl.contains(&e.inflection))
    }

    /// First noun sense, if any.
    pub fn noun_sense(&self) -> Option<&ConceptId> {
        self.entries
            .iter()
            .filter(|e| e.pos == Pos::Noun)
            .find_map(|e| e.sense())
    }

    pub fn sense(&self) -> Option<&ConceptId> {
        self.entries.iter().find_map(|e| e.sense())
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

fn word_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r#"[A-Za-z][A-Za-z'\-]*|\d+(?:\.\d+)?|[,;:"()]"#).unwrap())
}

fn number_entry(text: &str) -> LexEntry {
    LexEntry {
        word: text.to_string(),
        pos: Pos::Number,
        lemma: text.to_string(),
        senses: Vec::new(),
        frames: Vec::new(),
        inflection: Inflection::Base,
        provisional: false,
    }
}

fn make(text: &str, lex: &Lexicon) -> Token {
    let entries = if text.chars().all(|c| c.is_ascii_digit() || c == '.') {
        vec![number_entry(text)]
    } else {
        lex.lookup(text)
    };
    Token {
        text: text.to_string(),
        index: 0,
        entries,
        capitalized: text.chars().next().is_some_and(char::is_uppercase),
        name: false,
        quoted: false,
    }
}

/// Split a sentence into tokens, merging multiword lexicon entries, quoted
/// spans and runs of capitalized words.
pub fn tokenize(sentence: &str, lex: &Lexicon) -> Vec<Token> {
    let words: Vec<&str> = word_re().find_iter(sentence).map(|m| m.as_str()).collect();
    let mut out: Vec<Token> = Vec::new();
    let mut i = 0;
    while i < words.len() {
        if words[i] == "\"" {
            if let Some(len) = words[i + 1..].iter().position(|w| *w == "\"") {
                let text = words[i + 1..i + 1 + len].join(" ");
                let mut t = make(&text, lex);
                t.entries.retain(|e| e.pos == Pos::Noun);
                t.name = true;
                t.quoted = true;
                out.push(t);
                i += len + 2;
                continue;
            }
            i += 1;
            continue;
        }
        let max = lex.max_words().min(words.len() - i);
        let mut merged = false;
        for n in (2..=max).rev() {
            let span = &words[i..i + n];
            if span
                .iter()
                .any(|w| w.len() == 1 && w.chars().all(|c| c.is_ascii_punctuation()))
            {
                continue;
            }
            let text = span.join(" ");
            if lex.is_known(&text) {
                out.push(make(&text, lex));
                i += n;
                merged = true;
                break;
            }
        }
        if merged {
            continue;
        }
        // Capitalized runs: "Louisiana Water Thrush". A sentence-initial
        // capital only counts when the word is unknown.
        let starts = |k: usize| {
            let w = words[k];
            w.chars().next().is_some_and(char::is_uppercase) && (k > 0 || !lex.is_known(w))
        };
        if starts(i) {
            let mut j = i + 1;
            while j < words.len() && words[j].chars().next().is_some_and(char::is_uppercase) {
                j += 1;
            }
            if j - i >= 2 {
                let mut t = make(&words[i..j].join(" "), lex);
                t.entries.clear();
                t.name = true;
                // Keep the last word's readings to find the name's genus.
                let last = make(words[j - 1], lex);
                t.entries = last
                    .entries
                    .into_iter()
                    .filter(|e| e.pos == Pos::Noun)
                    .collect();
                out.push(t);
                i = j;
                continue;
            }
        }
        out.push(make(words[i], lex));
        i += 1;
    }
    for (k, t) in out.iter_mut().enumerate() {
        t.index = k;
    }
    out
}

fn is_separator(t: &Token) -> bool {
    t.is(",") || t.is("and") || t.is("or")
}

/// Known siblings of the token at `i` inside a comma/and coordination.
fn coordination_siblings(tokens: &[Token], i: usize) -> Vec<ConceptId> {
    let item_ok = |t: &Token| !t.has_pos(Pos::Verb) || t.has_pos(Pos::Noun) || t.entries.is_empty();
    let mut sibs = Vec::new();
    let mut in_list = false;
    // Walk left across "X ," and "X and" pairs.
    let mut k = i;
    while k >= 2 && is_separator(&tokens[k - 1]) {
        let t = &tokens[k - 2];
        if !item_ok(t) || t.has_pos(Pos::Determiner) || t.has_pos(Pos::Preposition) {
            break;
        }
        in_list = true;
        if let Some(s) = t.noun_sense() {
            sibs.push(s.clone());
        }
        k -= 2;
        // Oxford comma: "A, B, and C".
        if k >= 1 && tokens[k - 1].is(",") && k >= 2 && is_separator(&tokens[k - 2]) {
            continue;
        }
    }
    let mut k = i + 1;
    while k + 1 < tokens.len() && is_separator(&tokens[k]) {
        let mut n = k + 1;
        if tokens[n].is("and") || tokens[n].is("or") {
            n += 1;
        }
        let Some(t) = tokens.get(n) else { break };
        if !item_ok(t) || t.has_pos(Pos::Determiner) || t.has_pos(Pos::Preposition) {
            break;
        }
        in_list = true;
        if let Some(s) = t.noun_sense() {
            sibs.push(s.clone());
        }
        k = n + 1;
    }
    if in_list {
        sibs
    } else {
        Vec::new()
    }
}

/// Apply the unknown-word policy, registering provisional nouns. Fails on
/// a lowercase unknown word outside a coordination.
pub fn resolve_unknown_words(
    tokens: &mut [Token],
    lex: &mut Lexicon,
    ontology: &mut Ontology,
    topic_class: &str,
) -> Result<()> {
    for i in 0..tokens.len() {
        if tokens[i].name {
            if tokens[i].entries.is_empty() {
                let genus = if ontology.contains(topic_class) {
                    topic_class
                } else {
                    TOP
                };
                let mut e = number_entry(&tokens[i].lower());
                e.pos = Pos::Noun;
                e.senses = vec![genus.to_string()];
                e.frames = vec!["name".into()];
                tokens[i].entries = vec![e];
            } else {
                for e in &mut tokens[i].entries {
                    e.frames.push("name".into());
                }
            }
            continue;
        }
        if tokens[i].is_known() {
            continue;
        }
        let sibs = coordination_siblings(tokens, i);
        let hint = if !sibs.is_empty() {
            coordination_hint(&sibs, ontology)
        } else if tokens[i].capitalized {
            if ontology.contains(topic_class) {
                topic_class.to_string()
            } else {
                TOP.to_string()
            }
        } else {
            return Err(Error::NoParse(format!("unknown word `{}`", tokens[i].text)));
        };
        debug!("unknown word {} placed under {hint}", tokens[i].text);
        let text = tokens[i].text.clone();
        let mut entry = lex.add_provisional_noun(&text, &hint, ontology)?;
        entry.word = text.to_lowercase();
        tokens[i].entries = vec![entry];
    }
    Ok(())
}
