//! Reading: pre-scan, skim, parse, interpret, form, integrate, infer.
//!
//! Each sentence works on a copy of LTM and the lexicon that is committed
//! only when the sentence went through completely, so a failure halfway
//! leaves no partial concepts behind.

use std::fmt;
use std::path::Path;
use std::time::{Duration, Instant};

use log::{debug, info};

use crate::error::{Error, Result};
use crate::formation::form;
use crate::inference::apply_addition_rules;
use crate::integration::{integrate, IntegrationReport};
use crate::interpreter::{InterpretedSentence, Interpreter};
use crate::knowledge::Knowledge;
use crate::lexicon::naive_singular;
use crate::parser::{parse_sentence, resolve_unknown_words, tokenize, ParseStructure};
use crate::skimmer::{is_relevant, prescan_subclasses, split_sentences, Aliases};

/// Class given to unknown capitalized words when the article names none.
pub const DEFAULT_CLASS: &str = "animal";

#[derive(Debug)]
pub enum Outcome {
    NotSelected,
    ParseFailed(Error),
    InterpretFailed(ParseStructure, Error),
    Integrated {
        report: IntegrationReport,
        astructs: Vec<String>,
        derived: Vec<String>,
    },
}

impl Outcome {
    pub fn is_integrated(&self) -> bool {
        matches!(self, Outcome::Integrated { .. })
    }
}

#[derive(Debug)]
pub struct SentenceReport {
    pub sentence: String,
    pub outcome: Outcome,
    pub elapsed: Duration,
}

/// Per-article counts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ArticleStats {
    pub article: String,
    pub sentences: usize,
    pub selected: usize,
    pub parsed: usize,
    pub interpreted: usize,
    pub integrated: usize,
    /// Derived a-structures.
    pub inferred: usize,
    pub aliases: usize,
    pub elapsed: Duration,
}

fn pct(n: usize, d: usize) -> String {
    if d == 0 {
        "-".into()
    } else {
        format!("{:.0}%", 100.0 * n as f64 / d as f64)
    }
}

impl ArticleStats {
    pub fn header() -> &'static str {
        "article\tsentences\tselected\tparsed\tinterpreted\tintegrated\tinferred\tms/sentence"
    }

    pub fn absorb(&mut self, o: &ArticleStats) {
        self.sentences += o.sentences;
        self.selected += o.selected;
        self.parsed += o.parsed;
        self.interpreted += o.interpreted;
        self.integrated += o.integrated;
        self.inferred += o.inferred;
        self.aliases += o.aliases;
        self.elapsed += o.elapsed;
    }

    /// Mean time per selected sentence.
    pub fn per_sentence(&self) -> Duration {
        if self.selected == 0 {
            Duration::ZERO
        } else {
            self.elapsed / self.selected as u32
        }
    }
}

impl fmt::Display for ArticleStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{} {}\t{} {}\t{}\t{}\t{:.1}",
            self.article,
            self.sentences,
            self.selected,
            self.parsed,
            pct(self.parsed, self.selected),
            self.interpreted,
            pct(self.interpreted, self.parsed),
            self.integrated,
            self.inferred,
            self.per_sentence().as_secs_f64() * 1000.0
        )
    }
}

/// Everything about one article run.
#[derive(Debug, Default)]
pub struct ArticleReport {
    pub stats: ArticleStats,
    pub aliases: Aliases,
    pub sentences: Vec<SentenceReport>,
}

/// Article target class from a file name: "eagles.txt" reads about eagle.
pub fn target_class(path: &Path, kb: &Knowledge) -> String {
    let stem = path
        .file_stem()
        .unwrap_or_default()
        .to_string_lossy()
        .to_lowercase();
    if let Some(c) = kb.lexicon.noun_sense(&stem, &kb.ontology) {
        return c;
    }
    let single = naive_singular(&stem);
    if kb.ontology.contains(&single) {
        single
    } else {
        DEFAULT_CLASS.to_string()
    }
}

/// Drop `#` comment lines from article text.
pub fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|l| {
            if l.trim_start().starts_with('#') {
                ""
            } else {
                l
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

impl Knowledge {
    /// Parse a sentence, registering unknown words.
    pub fn parse(&mut self, sentence: &str, class: &str) -> Result<ParseStructure> {
        let mut toks = tokenize(sentence, &self.lexicon);
        resolve_unknown_words(&mut toks, &mut self.lexicon, &mut self.ontology, class)?;
        parse_sentence(&toks, sentence)
    }

    /// Parse and interpret without forming anything.
    pub fn interpret(&mut self, sentence: &str, class: &str) -> Result<InterpretedSentence> {
        let p = self.parse(sentence, class)?;
        let interp = Interpreter::new(&self.verbal, &self.vm_rules, &self.schema);
        Ok(interp.interpret(&p, &mut self.ontology))
    }

    /// Read one sentence into LTM. LTM is untouched unless every clause
    /// was interpreted.
    pub fn read_sentence(&mut self, sentence: &str, class: &str) -> Result<Outcome> {
        let mut work = self.clone();
        let parse = match work.parse(sentence, class) {
            Ok(p) => p,
            Err(e @ (Error::NoParse(_) | Error::KnownWord(_))) => {
                return Ok(Outcome::ParseFailed(e))
            }
            Err(e) => return Err(e),
        };
        let interp = Interpreter::new(&work.verbal, &work.vm_rules, &work.schema);
        let interpreted = interp.interpret(&parse, &mut work.ontology);
        if let Some(e) = interpreted.clauses.iter().find_map(|c| c.as_ref().err()) {
            let e = Error::InterpretFail(e.to_string());
            return Ok(Outcome::InterpretFailed(parse, e));
        }
        let formed = match form(&interpreted, &mut work.ontology) {
            Ok(f) => f,
            Err(e @ Error::InterpretFail(_)) => return Ok(Outcome::InterpretFailed(parse, e)),
            Err(e) => return Err(e),
        };
        let (report, astructs) = integrate(&mut work.ontology, formed.batch)?;
        let mut derived = Vec::new();
        for (id, vc) in astructs.iter().zip(&formed.verbal_concepts) {
            derived.extend(apply_addition_rules(
                &mut work.ontology,
                &work.verbal,
                vc,
                id,
            )?);
        }
        debug!(
            "{sentence}: {} a-structures, {} derived",
            astructs.len(),
            derived.len()
        );
        *self = work;
        Ok(Outcome::Integrated {
            report,
            astructs,
            derived,
        })
    }

    /// Read an article's text about `class` for `topic`.
    pub fn read_article(
        &mut self,
        name: &str,
        text: &str,
        topic: &str,
        class: &str,
    ) -> Result<ArticleReport> {
        let topic = self
            .topic(topic)
            .cloned()
            .ok_or_else(|| Error::Unparsed(format!("unknown topic `{topic}`")))?;
        let sentences = split_sentences(&strip_comments(text));
        let mut report = ArticleReport {
            aliases: prescan_subclasses(&sentences, class, &mut self.ontology, &mut self.lexicon)?,
            ..Default::default()
        };
        let stats = &mut report.stats;
        stats.article = name.to_string();
        stats.sentences = sentences.len();
        stats.aliases = report.aliases.len();
        for s in &sentences {
            let start = Instant::now();
            let outcome = if is_relevant(s, &topic, &self.lexicon) {
                stats.selected += 1;
                self.read_sentence(s, class)?
            } else {
                Outcome::NotSelected
            };
            match &outcome {
                Outcome::NotSelected | Outcome::ParseFailed(_) => {}
                Outcome::InterpretFailed(..) => stats.parsed += 1,
                Outcome::Integrated { derived, .. } => {
                    stats.parsed += 1;
                    stats.interpreted += 1;
                    stats.integrated += 1;
                    stats.inferred += derived.len();
                }
            }
            let elapsed = start.elapsed();
            if !matches!(outcome, Outcome::NotSelected) {
                stats.elapsed += elapsed;
            }
            report.sentences.push(SentenceReport {
                sentence: s.clone(),
                outcome,
                elapsed,
            });
        }
        info!("{}", report.stats);
        Ok(report)
    }

    /// Read an article file; the target class comes from its name.
    pub fn read_article_file(&mut self, path: &Path, topic: &str) -> Result<ArticleReport> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let class = target_class(path, self);
        let name = path
            .file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .to_string();
        self.read_article(&name, &text, topic, &class)
    }
}
