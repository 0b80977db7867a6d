//! Article loading, topic skimming and the subclass pre-scan.
//!
//! Topic file lines:
//!
//! ```text
//! keyword <lemma>
//! pattern <regex over the space-separated lemma stream>
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use regex::Regex;

use crate::error::{Error, Result};
use crate::lexicon::{Inflection, LexEntry, Lexicon, Pos};
use crate::noun_group::slug;
use crate::ontology::{ConceptId, ConceptSpec, Ontology, Origin};
use crate::parser::{tokenize, Token};

const ABBREVIATIONS: &[&str] = &[
    "dr", "mr", "mrs", "ms", "st", "mt", "prof", "jr", "sr", "vs", "etc", "e.g", "i.e", "approx",
    "ca", "fig", "no",
];

/// Split text into sentences. Blank lines end a paragraph and always end
/// a sentence.
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for para in text.split("\n\n") {
        let para = para.split_whitespace().collect::<Vec<_>>().join(" ");
        let mut cur = String::new();
        let words: Vec<&str> = para.split(' ').filter(|w| !w.is_empty()).collect();
        for (i, w) in words.iter().enumerate() {
            if !cur.is_empty() {
                cur.push(' ');
            }
            cur.push_str(w);
            let trimmed = w.trim_end_matches(['"', '\'', ')']);
            let Some(last) = trimmed.chars().last() else {
                continue;
            };
            if !matches!(last, '.' | '?' | '!') {
                continue;
            }
            if last == '.' {
                let stem = trimmed.trim_end_matches('.').to_lowercase();
                let initial = stem.len() == 1 && stem.chars().all(|c| c.is_alphabetic());
                if ABBREVIATIONS.contains(&stem.as_str()) || initial {
                    continue;
                }
                // A lowercase continuation means the period was not final.
                if words
                    .get(i + 1)
                    .and_then(|n| n.chars().next())
                    .is_some_and(char::is_lowercase)
                {
                    continue;
                }
            }
            out.push(std::mem::take(&mut cur));
        }
        if !cur.trim().is_empty() {
            out.push(cur);
        }
    }
    out
}

/// Read an article and split it into sentences.
pub fn load_article(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(split_sentences(&text))
}

/// Keywords and lemma-stream patterns selecting sentences for one topic.
#[derive(Clone, Debug)]
pub struct Topic {
    pub name: String,
    pub keywords: BTreeSet<String>,
    pub patterns: Vec<Regex>,
}

impl Topic {
    pub fn from_text(name: &str, file: &str, text: &str) -> Result<Topic> {
        let mut topic = Topic {
            name: name.to_string(),
            keywords: BTreeSet::new(),
            patterns: Vec::new(),
        };
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (kind, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match kind {
                "keyword" if !rest.is_empty() => {
                    topic.keywords.insert(rest.to_lowercase());
                }
                "pattern" => {
                    let re = Regex::new(rest)
                        .map_err(|e| Error::format(file, n + 1, format!("bad pattern: {e}")))?;
                    topic.patterns.push(re);
                }
                _ => {
                    return Err(Error::format(
                        file,
                        n + 1,
                        format!("unrecognized line `{line}`"),
                    ))
                }
            }
        }
        Ok(topic)
    }
}

fn token_lemmas(t: &Token) -> Vec<String> {
    let mut out: Vec<String> = t.entries.iter().map(|e| e.lemma.to_lowercase()).collect();
    if out.is_empty() {
        out.push(t.lower());
    }
    out.dedup();
    out
}

/// The sentence as a space-separated stream of lemmas (first reading of
/// each token, verbs preferred).
pub fn lemma_stream(sentence: &str, lexicon: &Lexicon) -> String {
    tokenize(sentence, lexicon)
        .iter()
        .filter(|t| !t.is_punct())
        .map(|t| {
            t.lemma(Pos::Verb)
                .or_else(|| t.entries.first().map(|e| e.lemma.as_str()))
                .map(str::to_lowercase)
                .unwrap_or_else(|| t.lower())
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Whether a sentence mentions the topic.
pub fn is_relevant(sentence: &str, topic: &Topic, lexicon: &Lexicon) -> bool {
    let toks = tokenize(sentence, lexicon);
    if toks
        .iter()
        .any(|t| token_lemmas(t).iter().any(|l| topic.keywords.contains(l)))
    {
        return true;
    }
    let stream = lemma_stream(sentence, lexicon);
    topic.patterns.iter().any(|p| p.is_match(&stream))
}

/// Keep the sentences matching the topic, in order.
pub fn select<'s>(sentences: &'s [String], topic: &Topic, lexicon: &Lexicon) -> Vec<&'s String> {
    sentences
        .iter()
        .filter(|s| is_relevant(s, topic, lexicon))
        .collect()
}

/// Subclass names found by the pre-scan: surface name to concept.
pub type Aliases = BTreeMap<String, ConceptId>;

fn denotes(t: &Token, target: &str, ontology: &Ontology) -> bool {
    t.noun_sense()
        .is_some_and(|s| ontology.is_subclass(s, target))
}

fn register(
    name: &str,
    concept: &str,
    parent: &str,
    ontology: &mut Ontology,
    lexicon: &mut Lexicon,
    aliases: &mut Aliases,
) -> Result<()> {
    if !ontology.contains(concept) {
        let mut spec = ConceptSpec::primitive(concept, &[parent]);
        spec.origin = Origin::Provisional;
        ontology.add_concept(spec)?;
    } else if !ontology.is_subclass(concept, parent) {
        return Ok(());
    }
    let listed = lexicon
        .lookup(name)
        .iter()
        .any(|e| e.pos == Pos::Noun && e.senses.iter().any(|s| s == concept));
    if !listed {
        lexicon.insert(LexEntry {
            word: name.to_string(),
            pos: Pos::Noun,
            lemma: name.to_string(),
            senses: vec![concept.to_string()],
            frames: Vec::new(),
            inflection: Inflection::Base,
            provisional: false,
        });
    }
    aliases.insert(name.to_string(), concept.to_string());
    Ok(())
}

fn is_open_modifier(t: &Token) -> bool {
    if t.is_punct() || t.name {
        return false;
    }
    t.entries.is_empty() || t.is_verb_form(&[Inflection::Past, Inflection::Participle])
}

/// Whether the article uses `word` (or its plural) as a noun on its own,
/// not followed by a noun of the target class.
fn used_alone(
    word: &str,
    sentences: &[String],
    lexicon: &Lexicon,
    target: &str,
    ontology: &Ontology,
) -> bool {
    let plural = format!("{word}s");
    sentences.iter().any(|s| {
        let toks = tokenize(s, lexicon);
        toks.iter().enumerate().any(|(i, t)| {
            (t.is(word) || t.is(&plural))
                && !toks
                    .get(i + 1)
                    .is_some_and(|n| denotes(n, target, ontology))
        })
    })
}

/// Scan every sentence for NPs naming subclasses of `target` ("Mako
/// sharks", "crowned eagle", "The mako is a shark") and register them in
/// the ontology and lexicon. A modifier that is not a known word also
/// becomes an alias on its own, so "Makos" later reads as the subclass.
pub fn prescan_subclasses(
    sentences: &[String],
    target: &str,
    ontology: &mut Ontology,
    lexicon: &mut Lexicon,
) -> Result<Aliases> {
    let mut aliases = Aliases::new();
    if !ontology.contains(target) {
        return Ok(aliases);
    }
    for s in sentences {
        let toks = tokenize(s, lexicon);
        for i in 1..toks.len() {
            let head = &toks[i];
            if !denotes(head, target, ontology) {
                continue;
            }
            let parent = head
                .noun_sense()
                .cloned()
                .unwrap_or_else(|| target.to_string());
            let m = &toks[i - 1];
            if is_open_modifier(m) {
                let modifier = m.lower();
                let head_word = head.lemma(Pos::Noun).unwrap_or(&head.text).to_lowercase();
                let bare_ok = m.entries.is_empty()
                    && used_alone(&modifier, sentences, lexicon, target, ontology);
                let concept = if bare_ok {
                    slug(&modifier)
                } else {
                    slug(&format!("{modifier} {head_word}"))
                };
                register(
                    &format!("{modifier} {head_word}"),
                    &concept,
                    &parent,
                    ontology,
                    lexicon,
                    &mut aliases,
                )?;
                if bare_ok {
                    register(
                        &modifier,
                        &concept,
                        &parent,
                        ontology,
                        lexicon,
                        &mut aliases,
                    )?;
                }
            }
            // "The mako is a shark."
            if i >= 3
                && toks[i - 1].is_any(&["a", "an"])
                && toks[i - 2].is_any(&["is", "are"])
                && toks[i - 3].entries.iter().all(|e| e.pos == Pos::Noun)
                && !toks[i - 3].is_punct()
            {
                let subj = &toks[i - 3];
                let word = subj.lower();
                if subj.entries.is_empty() {
                    register(
                        &word,
                        &slug(&word),
                        &parent,
                        ontology,
                        lexicon,
                        &mut aliases,
                    )?;
                }
            }
        }
    }
    Ok(aliases)
}
