//! Word lookup: parts of speech, lemmas, noun senses and verb frames.
//!
//! Lexicon file, one entry per line:
//!
//! ```text
//! word<TAB>pos<TAB>lemma<TAB>senses=a,b;frames=transitive,particle:out
//! ```
//!
//! Multiword entries ("ground squirrel") are allowed; inflection of the last
//! word is handled by the same suffix rules as single words.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ontology::{ConceptId, ConceptSpec, Ontology, Origin, TOP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
    Preposition,
    Determiner,
    Conjunction,
    Pronoun,
    Number,
}

impl Pos {
    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adjective => "adj",
            Pos::Adverb => "adv",
            Pos::Preposition => "prep",
            Pos::Determiner => "det",
            Pos::Conjunction => "conj",
            Pos::Pronoun => "pron",
            Pos::Number => "num",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "noun" => Pos::Noun,
            "verb" => Pos::Verb,
            "adj" | "adjective" => Pos::Adjective,
            "adv" | "adverb" => Pos::Adverb,
            "prep" | "preposition" => Pos::Preposition,
            "det" | "determiner" => Pos::Determiner,
            "conj" | "conjunction" => Pos::Conjunction,
            "pron" | "pronoun" => Pos::Pronoun,
            "num" | "number" => Pos::Number,
            _ => return Err(format!("unknown part of speech `{s}`")),
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Inflection {
    #[default]
    Base,
    Plural,
    ThirdSingular,
    Past,
    Participle,
    Gerund,
}

impl Inflection {
    fn as_str(self) -> &'static str {
        match self {
            Inflection::Base => "base",
            Inflection::Plural => "plural",
            Inflection::ThirdSingular => "3sg",
            Inflection::Past => "past",
            Inflection::Participle => "participle",
            Inflection::Gerund => "gerund",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "base" => Inflection::Base,
            "plural" => Inflection::Plural,
            "3sg" => Inflection::ThirdSingular,
            "past" => Inflection::Past,
            "participle" => Inflection::Participle,
            "gerund" => Inflection::Gerund,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexEntry {
    pub word: String,
    pub pos: Pos,
    pub lemma: String,
    pub senses: Vec<ConceptId>,
    pub frames: Vec<String>,
    pub inflection: Inflection,
    pub provisional: bool,
}

impl LexEntry {
    pub fn has_frame(&self, frame: &str) -> bool {
        self.frames.iter().any(|f| f == frame)
    }

    /// Values of `key:value` frames, e.g. the particles of a phrasal verb.
    pub fn frame_values<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> {
        self.frames
            .iter()
            .filter_map(move |f| f.strip_prefix(key)?.strip_prefix(':'))
    }

    pub fn sense(&self) -> Option<&ConceptId> {
        self.senses.first()
    }
}

/// Irregular inflections: (form, lemma, inflection). Regular forms come from
/// suffix stripping.
const IRREGULAR: &[(&str, &str, Inflection)] = &[
    ("is", "be", Inflection::ThirdSingular),
    ("are", "be", Inflection::Base),
    ("was", "be", Inflection::Past),
    ("were", "be", Inflection::Past),
    ("been", "be", Inflection::Participle),
    ("being", "be", Inflection::Gerund),
    ("has", "have", Inflection::ThirdSingular),
    ("had", "have", Inflection::Past),
    ("does", "do", Inflection::ThirdSingular),
    ("did", "do", Inflection::Past),
    ("done", "do", Inflection::Participle),
    ("ate", "eat", Inflection::Past),
    ("eaten", "eat", Inflection::Participle),
    ("fed", "feed", Inflection::Past),
    ("took", "take", Inflection::Past),
    ("taken", "take", Inflection::Participle),
    ("known", "know", Inflection::Participle),
    ("knew", "know", Inflection::Past),
    ("caught", "catch", Inflection::Past),
    ("dug", "dig", Inflection::Past),
    ("drank", "drink", Inflection::Past),
    ("drunk", "drink", Inflection::Participle),
    ("swam", "swim", Inflection::Past),
    ("froze", "freeze", Inflection::Past),
    ("frozen", "freeze", Inflection::Participle),
    ("mice", "mouse", Inflection::Plural),
    ("leaves", "leaf", Inflection::Plural),
    ("people", "person", Inflection::Plural),
    ("geese", "goose", Inflection::Plural),
    ("teeth", "tooth", Inflection::Plural),
    ("feet", "foot", Inflection::Plural),
    ("wolves", "wolf", Inflection::Plural),
    ("children", "child", Inflection::Plural),
];

/// Candidate (lemma, inflection) analyses of a regular form.
fn strip_suffixes(w: &str) -> Vec<(String, Inflection)> {
    let mut out = Vec::new();
    let mut push = |lemma: String, infl: Inflection| {
        if !lemma.is_empty() && !out.contains(&(lemma.clone(), infl)) {
            out.push((lemma, infl));
        }
    };
    if let Some(stem) = w.strip_suffix("ies") {
        push(format!("{stem}y"), Inflection::Plural);
        push(format!("{stem}y"), Inflection::ThirdSingular);
    }
    if let Some(stem) = w.strip_suffix("es") {
        push(stem.to_string(), Inflection::Plural);
        push(stem.to_string(), Inflection::ThirdSingular);
    }
    if let Some(stem) = w.strip_suffix('s') {
        if !stem.ends_with('s') {
            push(stem.to_string(), Inflection::Plural);
            push(stem.to_string(), Inflection::ThirdSingular);
        }
    }
    for (suffix, infls) in [
        ("ied", &[Inflection::Past, Inflection::Participle][..]),
        ("ed", &[Inflection::Past, Inflection::Participle][..]),
        ("ing", &[Inflection::Gerund][..]),
    ] {
        let Some(stem) = w.strip_suffix(suffix) else {
            continue;
        };
        for &infl in infls {
            if suffix == "ied" {
                push(format!("{stem}y"), infl);
                continue;
            }
            push(stem.to_string(), infl);
            push(format!("{stem}e"), infl);
            let b = stem.as_bytes();
            if b.len() >= 2 && b[b.len() - 1] == b[b.len() - 2] {
                push(stem[..stem.len() - 1].to_string(), infl);
            }
        }
    }
    out
}

fn pos_takes(pos: Pos, infl: Inflection) -> bool {
    match infl {
        Inflection::Base => true,
        Inflection::Plural => pos == Pos::Noun,
        _ => pos == Pos::Verb,
    }
}

/// Naive singular used for words nobody taught us.
pub fn naive_singular(word: &str) -> String {
    let w = word.to_lowercase();
    if let Some(stem) = w.strip_suffix("ies") {
        return format!("{stem}y");
    }
    match w.strip_suffix('s') {
        Some(stem) if !stem.ends_with('s') && !stem.is_empty() => stem.to_string(),
        _ => w,
    }
}

#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    entries: BTreeMap<String, Vec<LexEntry>>,
    max_words: usize,
}

impl Lexicon {
    pub fn new() -> Self {
        Lexicon {
            entries: BTreeMap::new(),
            max_words: 1,
        }
    }

    pub fn insert(&mut self, entry: LexEntry) {
        self.max_words = self.max_words.max(entry.word.split(' ').count());
        let slot = self.entries.entry(entry.word.clone()).or_default();
        if !slot.contains(&entry) {
            slot.push(entry);
        }
    }

    /// Longest multiword entry, in words.
    pub fn max_words(&self) -> usize {
        self.max_words
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexEntry> {
        self.entries.values().flatten()
    }

    /// All analyses of a surface word, lemmatized. Pure.
    pub fn lookup(&self, word: &str) -> Vec<LexEntry> {
        let w = word.trim().to_lowercase();
        if w.is_empty() {
            return Vec::new();
        }
        let mut out: Vec<LexEntry> = Vec::new();
        let mut add = |e: &LexEntry, infl: Inflection| {
            let mut e = e.clone();
            e.word = w.clone();
            if infl != Inflection::Base {
                e.inflection = infl;
            }
            if !out.contains(&e) {
                out.push(e);
            }
        };
        if let Some(es) = self.entries.get(&w) {
            for e in es {
                add(e, Inflection::Base);
            }
        }
        for (form, lemma, infl) in IRREGULAR {
            if *form == w {
                for e in self.entries.get(*lemma).into_iter().flatten() {
                    if pos_takes(e.pos, *infl) {
                        add(e, *infl);
                    }
                }
            }
        }
        for (lemma, infl) in strip_suffixes(&w) {
            for e in self.entries.get(&lemma).into_iter().flatten() {
                if e.inflection == Inflection::Base && pos_takes(e.pos, infl) {
                    add(e, infl);
                }
            }
        }
        out
    }

    pub fn is_known(&self, word: &str) -> bool {
        !self.lookup(word).is_empty()
    }

    /// Register an unknown noun under `parent_hint`. The only lexicon
    /// mutation made while reading.
    pub fn add_provisional_noun(
        &mut self,
        word: &str,
        parent_hint: &str,
        ontology: &mut Ontology,
    ) -> Result<LexEntry> {
        if self.is_known(word) {
            return Err(Error::KnownWord(word.to_string()));
        }
        ontology.concept(parent_hint)?;
        let lemma = naive_singular(word);
        let concept = match ontology.get(&lemma) {
            Some(c) => c.id.clone(),
            None => {
                let mut spec = ConceptSpec::primitive(lemma.clone(), &[parent_hint]);
                spec.origin = Origin::Provisional;
                ontology.add_concept(spec)?
            }
        };
        let entry = LexEntry {
            word: lemma.clone(),
            pos: Pos::Noun,
            lemma,
            senses: vec![concept],
            frames: Vec::new(),
            inflection: Inflection::Base,
            provisional: true,
        };
        self.insert(entry.clone());
        Ok(entry)
    }

    pub fn from_text(file: &str, text: &str, ontology: &Ontology) -> Result<Lexicon> {
        let mut lex = Lexicon::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.trim_end();
            if content.trim().is_empty() || content.trim_start().starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = content.split('\t').collect();
            if cols.len() < 3 {
                return Err(Error::format(
                    file,
                    line,
                    "expected word<TAB>pos<TAB>lemma[<TAB>attrs]",
                ));
            }
            let pos: Pos = cols[1]
                .parse()
                .map_err(|e: String| Error::format(file, line, e))?;
            let mut entry = LexEntry {
                word: cols[0].trim().to_lowercase(),
                pos,
                lemma: cols[2].trim().to_lowercase(),
                senses: Vec::new(),
                frames: Vec::new(),
                inflection: Inflection::Base,
                provisional: false,
            };
            if let Some(attrs) = cols.get(3) {
                for attr in attrs.split(';').filter(|a| !a.trim().is_empty()) {
                    let (k, v) = attr.split_once('=').ok_or_else(|| {
                        Error::format(file, line, format!("bad attribute `{attr}`"))
                    })?;
                    let vals = v
                        .split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty());
                    match k.trim() {
                        "senses" => entry.senses = vals.collect(),
                        "frames" => entry.frames = vals.collect(),
                        "infl" => {
                            entry.inflection = Inflection::parse(v.trim()).ok_or_else(|| {
                                Error::format(file, line, format!("bad inflection `{v}`"))
                            })?
                        }
                        "provisional" => entry.provisional = v.trim() == "true",
                        other => {
                            return Err(Error::format(
                                file,
                                line,
                                format!("unknown attribute `{other}`"),
                            ))
                        }
                    }
                }
            }
            for s in &entry.senses {
                if !ontology.contains(s) {
                    return Err(Error::format(
                        file,
                        line,
                        format!("sense `{s}` is not in the ontology"),
                    ));
                }
            }
            lex.insert(entry);
        }
        Ok(lex)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in self.entries() {
            let mut attrs = Vec::new();
            if !e.senses.is_empty() {
                attrs.push(format!("senses={}", e.senses.join(",")));
            }
            if !e.frames.is_empty() {
                attrs.push(format!("frames={}", e.frames.join(",")));
            }
            if e.inflection != Inflection::Base {
                attrs.push(format!("infl={}", e.inflection.as_str()));
            }
            if e.provisional {
                attrs.push("provisional=true".into());
            }
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                e.word,
                e.pos,
                e.lemma,
                attrs.join(";")
            ));
        }
        out
    }

    /// Concept a noun word refers to, falling back to a concept with the
    /// same (singularized) name.
    pub fn noun_sense(&self, word: &str, ontology: &Ontology) -> Option<ConceptId> {
        self.lookup(word)
            .iter()
            .filter(|e| e.pos == Pos::Noun)
            .find_map(|e| e.sense().cloned())
            .or_else(|| {
                let w = word.to_lowercase().replace(' ', "-");
                let sing = naive_singular(&w);
                ontology
                    .get(&w)
                    .or_else(|| ontology.get(&sing))
                    .map(|c| c.id.clone())
            })
    }
}

/// Parent for an unknown noun met in a coordination: the most specific
/// common superclass of its siblings' parents.
pub fn coordination_hint(siblings: &[ConceptId], ontology: &Ontology) -> ConceptId {
    let parents: Vec<ConceptId> = siblings
        .iter()
        .filter_map(|s| ontology.get(s))
        .map(|c| {
            let ps: Vec<ConceptId> = c.parents.iter().cloned().collect();
            ontology
                .common_superclasses(&ps)
                .into_iter()
                .next()
                .unwrap_or_else(|| TOP.to_string())
        })
        .collect();
    if parents.is_empty() {
        return TOP.to_string();
    }
    ontology
        .common_superclasses(&parents)
        .into_iter()
        .next()
        .unwrap_or_else(|| TOP.to_string())
}
