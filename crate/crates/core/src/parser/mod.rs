//! Deterministic top-down parser into syntactic cases.
//!
//! A sentence becomes a flat list of clauses. Embedded clauses (relative,
//! purpose, manner, subordinate, conjoined) point at their host clause by
//! index. Prepositional phrases are collected in surface order and left
//! unattached for the interpreter.

pub mod tokens;

use std::fmt;

use log::warn;

use crate::error::{Error, Result};
use crate::lexicon::{Inflection, Pos};
pub use tokens::{resolve_unknown_words, tokenize, Token};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    Subj,
    Obj,
    Io,
    Pred,
}

impl Case {
    pub fn as_str(self) -> &'static str {
        match self {
            Case::Subj => "subj",
            Case::Obj => "obj",
            Case::Io => "io",
            Case::Pred => "pred",
        }
    }

    pub fn parse(s: &str) -> Option<Case> {
        Some(match s {
            "subj" => Case::Subj,
            "obj" => Case::Obj,
            "io" => Case::Io,
            "pred" => Case::Pred,
            _ => return None,
        })
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where an NP sits inside its clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NpSlot {
    Case(Case),
    Pp(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quantity {
    pub amount: String,
    pub unit: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NpGroup {
    /// Determiners, quantity words and numbers.
    pub det: Vec<Token>,
    /// Pre-head modifiers, left to right.
    pub mods: Vec<Token>,
    pub head: Token,
    /// Conjuncts when the group is an and/or coordination.
    pub coordination: Vec<NpGroup>,
    pub quantity: Option<Quantity>,
    /// Tokens that carry no meaning of their own ("kinds of", separators).
    pub discarded: Vec<Token>,
}

impl NpGroup {
    pub fn is_coordination(&self) -> bool {
        !self.coordination.is_empty()
    }

    /// Simple groups: itself; coordinations: the conjuncts.
    pub fn conjuncts(&self) -> Vec<&NpGroup> {
        if self.is_coordination() {
            self.coordination
                .iter()
                .flat_map(|c| c.conjuncts())
                .collect()
        } else {
            vec![self]
        }
    }

    pub fn is_pronoun(&self) -> bool {
        !self.is_coordination() && self.head.has_pos(Pos::Pronoun)
    }

    pub fn has_det(&self, words: &[&str]) -> bool {
        self.det.iter().any(|d| d.is_any(words))
    }

    /// Every token of the group, each once.
    pub fn tokens(&self) -> Vec<&Token> {
        let mut out: Vec<&Token> = Vec::new();
        if self.is_coordination() {
            for c in &self.coordination {
                out.extend(c.tokens());
            }
        } else {
            out.extend(&self.det);
            out.extend(&self.mods);
            out.push(&self.head);
        }
        out.extend(&self.discarded);
        out.sort_by_key(|t| t.index);
        out
    }

    pub fn text(&self) -> String {
        self.tokens()
            .iter()
            .map(|t| t.text.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrepPhrase {
    pub prep: Token,
    pub np: NpGroup,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerbGroup {
    pub lemma: String,
    pub particle: Option<String>,
    pub inflection: Inflection,
    pub passive: bool,
    pub copula: bool,
    /// Auxiliaries, the verb itself and its particle.
    pub tokens: Vec<Token>,
}

impl VerbGroup {
    /// Lemma plus particle, e.g. `dig+out`.
    pub fn key(&self) -> String {
        match &self.particle {
            Some(p) => format!("{}+{p}", self.lemma),
            None => self.lemma.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Attach {
    Main,
    /// VP coordination sharing the host's subject.
    Conjoined {
        host: usize,
    },
    /// Restrictive relative clause on an NP of the host; `gap` is the case
    /// the host NP fills inside this clause.
    Relative {
        host: usize,
        slot: NpSlot,
        gap: Case,
    },
    /// "to"-infinitive sharing the host's subject.
    Purpose {
        host: usize,
    },
    /// "by" + gerund sharing the host's subject.
    Manner {
        host: usize,
    },
    /// "when", "because", ... with its own subject.
    Subordinate {
        host: usize,
        conj: String,
    },
}

impl Attach {
    pub fn host(&self) -> Option<usize> {
        match self {
            Attach::Main => None,
            Attach::Conjoined { host }
            | Attach::Relative { host, .. }
            | Attach::Purpose { host }
            | Attach::Manner { host }
            | Attach::Subordinate { host, .. } => Some(*host),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseParse {
    pub verb: VerbGroup,
    pub subj: Option<NpGroup>,
    pub obj: Option<NpGroup>,
    pub io: Option<NpGroup>,
    pub pred: Option<NpGroup>,
    pub pps: Vec<PrepPhrase>,
    pub adverbs: Vec<Token>,
    /// "each day", "every year".
    pub frequency: Option<NpGroup>,
    pub shared_subject: bool,
    pub attach: Attach,
    pub discarded: Vec<Token>,
}

impl ClauseParse {
    pub fn case(&self, case: Case) -> Option<&NpGroup> {
        match case {
            Case::Subj => self.subj.as_ref(),
            Case::Obj => self.obj.as_ref(),
            Case::Io => self.io.as_ref(),
            Case::Pred => self.pred.as_ref(),
        }
    }

    pub fn np(&self, slot: NpSlot) -> Option<&NpGroup> {
        match slot {
            NpSlot::Case(c) => self.case(c),
            NpSlot::Pp(i) => self.pps.get(i).map(|p| &p.np),
        }
    }

    fn tokens(&self) -> Vec<&Token> {
        let mut out: Vec<&Token> = Vec::new();
        out.extend(&self.verb.tokens);
        for np in [&self.subj, &self.obj, &self.io, &self.pred, &self.frequency]
            .into_iter()
            .flatten()
        {
            out.extend(np.tokens());
        }
        for pp in &self.pps {
            out.push(&pp.prep);
            out.extend(pp.np.tokens());
        }
        out.extend(&self.adverbs);
        out.extend(&self.discarded);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseStructure {
    pub clauses: Vec<ClauseParse>,
    pub source: String,
}

impl ParseStructure {
    /// Token positions covered by the structure, sorted.
    pub fn token_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .clauses
            .iter()
            .flat_map(|c| c.tokens())
            .map(|t| t.index)
            .collect();
        v.sort_unstable();
        v
    }
}

const RELATIVES: &[&str] = &["that", "which", "who"];
const SUBORDINATORS: &[&str] = &["when", "because", "while", "after", "before", "if"];
const TRANSPARENT: &[&str] = &["kinds", "kind", "types", "type", "species", "sorts", "sort"];

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    clauses: Vec<ClauseParse>,
}

fn fail<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::NoParse(msg.into()))
}

/// Parse one sentence. Tokens must come from [`tokenize`] with unknown
/// words already resolved.
pub fn parse_sentence(tokens: &[Token], source: &str) -> Result<ParseStructure> {
    if tokens.is_empty() {
        return fail("empty");
    }
    if let Some(t) = tokens.iter().find(|t| !t.is_known()) {
        return fail(format!("unknown word `{}`", t.text));
    }
    let mut p = Parser {
        toks: tokens,
        pos: 0,
        clauses: Vec::new(),
    };
    p.clause(Attach::Main, false)?;
    if let Some(t) = p.peek() {
        return fail(format!("unexpected `{}` at {}", t.text, t.index));
    }
    Ok(ParseStructure {
        clauses: p.clauses,
        source: source.to_string(),
    })
}

/// Parse tokens that form exactly one noun phrase.
pub fn parse_noun_phrase(tokens: &[Token]) -> Result<NpGroup> {
    if let Some(t) = tokens.iter().find(|t| !t.is_known()) {
        return fail(format!("unknown word `{}`", t.text));
    }
    let mut p = Parser {
        toks: tokens,
        pos: 0,
        clauses: Vec::new(),
    };
    let np = p.np(true)?;
    if let Some(t) = p.peek() {
        return fail(format!("unexpected `{}` at {}", t.text, t.index));
    }
    Ok(np)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, k: usize) -> Option<&'a Token> {
        self.toks.get(self.pos + k)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn at(&self, word: &str) -> bool {
        self.peek().is_some_and(|t| t.is(word))
    }

    fn at_any(&self, words: &[&str]) -> bool {
        self.peek().is_some_and(|t| t.is_any(words))
    }

    /// A token that can only be read as the start of a verb group here.
    fn verbish(t: &Token) -> bool {
        t.has_pos(Pos::Verb)
            && !t.has_pos(Pos::Determiner)
            && !t.has_pos(Pos::Preposition)
            && t.is_verb_form(&[
                Inflection::Base,
                Inflection::ThirdSingular,
                Inflection::Past,
            ])
    }

    fn finite_verb_ahead(&self) -> bool {
        let mut k = 0;
        while self
            .peek_at(k)
            .is_some_and(|t| t.has_pos(Pos::Adverb) && !t.has_pos(Pos::Verb))
        {
            k += 1;
        }
        self.peek_at(k).is_some_and(Self::verbish)
    }

    fn clause(&mut self, attach: Attach, subject_given: bool) -> Result<usize> {
        let idx = self.clauses.len();
        let gap = match &attach {
            Attach::Relative { gap, .. } => Some(*gap),
            _ => None,
        };
        let shared = matches!(
            attach,
            Attach::Conjoined { .. } | Attach::Purpose { .. } | Attach::Manner { .. }
        );
        self.clauses.push(ClauseParse {
            verb: VerbGroup {
                lemma: String::new(),
                particle: None,
                inflection: Inflection::Base,
                passive: false,
                copula: false,
                tokens: Vec::new(),
            },
            subj: None,
            obj: None,
            io: None,
            pred: None,
            pps: Vec::new(),
            adverbs: Vec::new(),
            frequency: None,
            shared_subject: shared,
            attach,
            discarded: Vec::new(),
        });

        if !subject_given {
            let subj = self.np(false)?;
            self.clauses[idx].subj = Some(subj);
            self.maybe_relative(idx, NpSlot::Case(Case::Subj))?;
            // "The crowned eagle of Africa lives ..."
            while self.peek().is_some_and(|t| t.has_pos(Pos::Preposition)) && !self.at("to") {
                let prep = self.next().unwrap();
                let np = self.np(false)?;
                self.clauses[idx].pps.push(PrepPhrase { prep, np });
                let k = self.clauses[idx].pps.len() - 1;
                self.maybe_relative(idx, NpSlot::Pp(k))?;
            }
        }
        while self
            .peek()
            .is_some_and(|t| t.has_pos(Pos::Adverb) && !Self::verbish(t))
        {
            let t = self.next().unwrap();
            self.clauses[idx].adverbs.push(t);
        }
        let verb = self.verb_group()?;
        let copula = verb.copula;
        self.clauses[idx].verb = verb;

        if copula {
            let pred = self.np(true)?;
            self.clauses[idx].pred = Some(pred);
            self.maybe_relative(idx, NpSlot::Case(Case::Pred))?;
        } else if gap != Some(Case::Obj) && !self.at_frequency() {
            if let Some(obj) = self.try_np() {
                self.clauses[idx].obj = Some(obj);
                self.maybe_relative(idx, NpSlot::Case(Case::Obj))?;
                if !self.at_frequency() {
                    if let Some(second) = self.try_np() {
                        let first = self.clauses[idx].obj.replace(second);
                        self.clauses[idx].io = first;
                        self.maybe_relative(idx, NpSlot::Case(Case::Obj))?;
                    }
                }
            }
        }
        self.tail(idx)?;

        let c = &mut self.clauses[idx];
        if c.verb.passive {
            let agent = c.pps.iter().position(|pp| pp.prep.is("by"));
            let surface = c.subj.take();
            c.obj = surface;
            if let Some(k) = agent {
                let pp = c.pps.remove(k);
                c.discarded.push(pp.prep);
                c.subj = Some(pp.np);
            }
            // Relative clauses hosted here follow their NPs.
            for r in &mut self.clauses[idx + 1..] {
                if let Attach::Relative { host, slot, .. } = &mut r.attach {
                    if *host != idx {
                        continue;
                    }
                    *slot = match (*slot, agent) {
                        (NpSlot::Case(Case::Subj), _) => NpSlot::Case(Case::Obj),
                        (NpSlot::Pp(j), Some(k)) if j == k => NpSlot::Case(Case::Subj),
                        (NpSlot::Pp(j), Some(k)) if j > k => NpSlot::Pp(j - 1),
                        (s, _) => s,
                    };
                }
            }
        }
        Ok(idx)
    }

    fn tail(&mut self, idx: usize) -> Result<()> {
        let nested = self.clauses[idx].attach != Attach::Main;
        while let Some(t) = self.peek() {
            if t.is(",") {
                let after = self.peek_at(1);
                if after.is_some_and(|a| {
                    a.is_any(&["and", "or"]) || SUBORDINATORS.iter().any(|w| a.is(w))
                }) {
                    let comma = self.next().unwrap();
                    self.clauses[idx].discarded.push(comma);
                    continue;
                }
                if nested {
                    return Ok(());
                }
                return fail(format!("unexpected `,` at {}", t.index));
            }
            if t.is_any(&["and", "or"]) {
                if self.peek_at(1).is_some_and(Self::verbish) {
                    let conj = self.next().unwrap();
                    let k = self.clause(Attach::Conjoined { host: idx }, true)?;
                    self.clauses[k].discarded.push(conj);
                    continue;
                }
                if nested {
                    return Ok(());
                }
                return fail(format!("dangling `{}` at {}", t.text, t.index));
            }
            if t.is("by")
                && self
                    .peek_at(1)
                    .is_some_and(|n| n.is_verb_form(&[Inflection::Gerund]))
            {
                let by = self.next().unwrap();
                let k = self.clause(Attach::Manner { host: idx }, true)?;
                self.clauses[k].discarded.push(by);
                continue;
            }
            if t.is("to")
                && self
                    .peek_at(1)
                    .is_some_and(|n| n.is_verb_form(&[Inflection::Base]) && !n.has_pos(Pos::Noun))
            {
                let to = self.next().unwrap();
                let k = self.clause(Attach::Purpose { host: idx }, true)?;
                self.clauses[k].discarded.push(to);
                continue;
            }
            if t.has_pos(Pos::Preposition) && !SUBORDINATORS.iter().any(|w| t.is(w)) {
                let prep = self.next().unwrap();
                let np = self.np(false)?;
                self.clauses[idx].pps.push(PrepPhrase { prep, np });
                let k = self.clauses[idx].pps.len() - 1;
                self.maybe_relative(idx, NpSlot::Pp(k))?;
                continue;
            }
            if t.is_any(SUBORDINATORS) {
                let conj = self.next().unwrap();
                let k = self.clause(
                    Attach::Subordinate {
                        host: idx,
                        conj: conj.lower(),
                    },
                    false,
                )?;
                self.clauses[k].discarded.push(conj);
                continue;
            }
            if self.at_frequency() {
                let np = self.np(false)?;
                if self.clauses[idx].frequency.is_some() {
                    return fail("two frequency phrases");
                }
                self.clauses[idx].frequency = Some(np);
                continue;
            }
            if t.has_pos(Pos::Adverb) && !Self::verbish(t) {
                let t = self.next().unwrap();
                self.clauses[idx].adverbs.push(t);
                continue;
            }
            if nested {
                return Ok(());
            }
            return fail(format!("unexpected `{}` at {}", t.text, t.index));
        }
        Ok(())
    }

    fn maybe_relative(&mut self, host: usize, slot: NpSlot) -> Result<()> {
        if !self.at_any(RELATIVES) {
            return Ok(());
        }
        let rel = self.next().unwrap();
        let k = if self.finite_verb_ahead() {
            self.clause(
                Attach::Relative {
                    host,
                    slot,
                    gap: Case::Subj,
                },
                true,
            )?
        } else {
            self.clause(
                Attach::Relative {
                    host,
                    slot,
                    gap: Case::Obj,
                },
                false,
            )?
        };
        self.clauses[k].discarded.push(rel);
        Ok(())
    }

    fn at_frequency(&self) -> bool {
        let Some(t) = self.peek() else { return false };
        if !t.is_any(&["each", "every", "per", "a", "an"]) {
            return false;
        }
        self.peek_at(1).is_some_and(|n| {
            n.entries
                .iter()
                .any(|e| e.pos == Pos::Noun && e.has_frame("time"))
                && !self.peek_at(2).is_some_and(|x| x.has_pos(Pos::Noun))
        })
    }

    fn verb_group(&mut self) -> Result<VerbGroup> {
        let mut aux: Vec<Token> = Vec::new();
        let mut passive = false;
        loop {
            let Some(t) = self.peek() else {
                return fail("missing verb");
            };
            let lemma = t.lemma(Pos::Verb).unwrap_or("");
            // "have been known to V"
            if lemma == "have"
                && self.peek_at(1).is_some_and(|n| n.is("been"))
                && self
                    .peek_at(2)
                    .is_some_and(|n| n.lemma(Pos::Verb) == Some("know"))
                && self.peek_at(3).is_some_and(|n| n.is("to"))
            {
                for _ in 0..4 {
                    aux.push(self.next().unwrap());
                }
                continue;
            }
            let next_participle = |k: usize| {
                self.peek_at(k).is_some_and(|n| {
                    n.is_verb_form(&[Inflection::Participle, Inflection::Past])
                        && !n.has_pos(Pos::Adjective)
                })
            };
            if lemma == "be" {
                let mut k = 1;
                while self
                    .peek_at(k)
                    .is_some_and(|n| n.has_pos(Pos::Adverb) && !n.has_pos(Pos::Verb))
                {
                    k += 1;
                }
                if next_participle(k) {
                    aux.push(self.next().unwrap());
                    passive = true;
                    continue;
                }
                let t = self.next().unwrap();
                let inflection = t.verb_entry().map(|e| e.inflection).unwrap_or_default();
                aux.push(t);
                return Ok(VerbGroup {
                    lemma: "be".into(),
                    particle: None,
                    inflection,
                    passive: false,
                    copula: true,
                    tokens: aux,
                });
            }
            let perfect = lemma == "have" && next_participle(1);
            let do_support = lemma == "do"
                && self
                    .peek_at(1)
                    .is_some_and(|n| n.is_verb_form(&[Inflection::Base]));
            let modal = t.verb_entry().is_some_and(|e| e.has_frame("aux"))
                && self.peek_at(1).is_some_and(|n| n.has_pos(Pos::Verb));
            if perfect || do_support || modal {
                aux.push(self.next().unwrap());
                continue;
            }
            break;
        }
        let t = self
            .peek()
            .ok_or_else(|| Error::NoParse("missing verb".into()))?;
        let Some(entry) = t.verb_entry().cloned() else {
            return fail(format!("expected a verb at `{}`", t.text));
        };
        let t = self.next().unwrap();
        aux.push(t);
        let mut particle = None;
        for p in entry.frame_values("particle") {
            if self.at(p) {
                particle = Some(p.to_string());
                aux.push(self.next().unwrap());
                break;
            }
        }
        Ok(VerbGroup {
            lemma: entry.lemma.clone(),
            particle,
            inflection: entry.inflection,
            passive,
            copula: false,
            tokens: aux,
        })
    }

    fn can_start_np(t: &Token) -> bool {
        if t.is_punct() || t.has_pos(Pos::Preposition) && !t.has_pos(Pos::Noun) {
            return false;
        }
        t.has_pos(Pos::Determiner)
            || t.has_pos(Pos::Number)
            || t.has_pos(Pos::Adjective)
            || t.has_pos(Pos::Noun)
            || t.has_pos(Pos::Pronoun)
            || t.entries
                .iter()
                .any(|e| e.pos == Pos::Adverb && e.has_frame("quant"))
    }

    fn try_np(&mut self) -> Option<NpGroup> {
        if !self.peek().is_some_and(Self::can_start_np) {
            return None;
        }
        let save = self.pos;
        match self.np(false) {
            Ok(np) => Some(np),
            Err(_) => {
                self.pos = save;
                None
            }
        }
    }

    /// NP with coordination and ", including ..." lists.
    fn np(&mut self, allow_adj_head: bool) -> Result<NpGroup> {
        let first = self.simple_np(allow_adj_head)?;
        let mut np = self.coordinate(first)?;
        if self.at(",")
            && self
                .peek_at(1)
                .is_some_and(|t| t.is_any(&["including", "like"]))
            || self.at_any(&["including"])
        {
            let save = self.pos;
            let mut dropped: Vec<Token> = np.tokens().into_iter().cloned().collect();
            if self.at(",") {
                dropped.push(self.next().unwrap());
            }
            dropped.push(self.next().unwrap());
            match self.simple_np(false).and_then(|f| self.coordinate(f)) {
                Ok(mut list) => {
                    list.discarded.extend(dropped);
                    list.discarded.sort_by_key(|t| t.index);
                    np = list;
                }
                Err(_) => self.pos = save,
            }
        }
        Ok(np)
    }

    fn coordinate(&mut self, first: NpGroup) -> Result<NpGroup> {
        let mut items = vec![first];
        let mut seps: Vec<Token> = Vec::new();
        let save = self.pos;
        let mut closed = false;
        loop {
            let mut local: Vec<Token> = Vec::new();
            let here = self.pos;
            if self.at(",") {
                local.push(self.next().unwrap());
            }
            let mut conj = false;
            if self.at_any(&["and", "or"]) {
                local.push(self.next().unwrap());
                conj = true;
            }
            if local.is_empty() {
                break;
            }
            match self.simple_np(false) {
                Ok(np) => {
                    items.push(np);
                    seps.extend(local);
                    if conj {
                        closed = true;
                        break;
                    }
                }
                Err(_) => {
                    self.pos = here;
                    break;
                }
            }
        }
        if items.len() == 1 {
            self.pos = save;
            return Ok(items.pop().unwrap());
        }
        if !closed {
            self.pos = save;
            return Ok(items.swap_remove(0));
        }
        let head = items.last().unwrap().head.clone();
        Ok(NpGroup {
            det: Vec::new(),
            mods: Vec::new(),
            head,
            coordination: items,
            quantity: None,
            discarded: seps,
        })
    }

    fn simple_np(&mut self, allow_adj_head: bool) -> Result<NpGroup> {
        let start = self.pos;
        let Some(t) = self.peek() else {
            return fail("expected a noun phrase at end of sentence");
        };
        if t.has_pos(Pos::Pronoun) {
            let head = self.next().unwrap();
            return Ok(NpGroup {
                det: Vec::new(),
                mods: Vec::new(),
                head,
                coordination: Vec::new(),
                quantity: None,
                discarded: Vec::new(),
            });
        }
        let mut det: Vec<Token> = Vec::new();
        let mut discarded: Vec<Token> = Vec::new();
        let mut quantity = None;
        while let Some(t) = self.peek() {
            let quant_adv = t
                .entries
                .iter()
                .any(|e| e.pos == Pos::Adverb && e.has_frame("quant"));
            if t.has_pos(Pos::Determiner) || quant_adv {
                det.push(self.next().unwrap());
            } else if t.has_pos(Pos::Number) {
                let num = self.next().unwrap();
                // "20 to 60 square miles": ranges are dropped.
                if self.at("to") && self.peek_at(1).is_some_and(|n| n.has_pos(Pos::Number)) {
                    warn!("dropping range starting at {}", num.text);
                    discarded.push(num);
                    discarded.push(self.next().unwrap());
                    discarded.push(self.next().unwrap());
                    continue;
                }
                let unit = self
                    .peek()
                    .filter(|u| {
                        u.entries
                            .iter()
                            .any(|e| e.pos == Pos::Noun && e.has_frame("unit"))
                    })
                    .cloned();
                let of_follows = self.peek_at(1).is_some_and(|o| o.is("of"));
                if let (Some(unit_tok), true) = (unit, of_follows) {
                    self.next();
                    let of = self.next().unwrap();
                    quantity = Some(Quantity {
                        amount: num.text.clone(),
                        unit: unit_tok.lemma(Pos::Noun).map(str::to_string),
                    });
                    det.push(num);
                    discarded.push(unit_tok);
                    discarded.push(of);
                } else {
                    quantity = Some(Quantity {
                        amount: num.text.clone(),
                        unit: None,
                    });
                    det.push(num);
                }
            } else if t.is_any(TRANSPARENT) && self.peek_at(1).is_some_and(|o| o.is("of")) {
                discarded.push(self.next().unwrap());
                discarded.push(self.next().unwrap());
            } else {
                break;
            }
        }
        let mut items: Vec<Token> = Vec::new();
        while let Some(t) = self.peek() {
            let nominal = t.has_pos(Pos::Noun) || t.name;
            let adjective = t.has_pos(Pos::Adjective);
            if t.is(",") {
                // "long, curved claws"
                let only_adjs =
                    !items.is_empty() && items.iter().all(|i| i.has_pos(Pos::Adjective));
                if only_adjs && self.peek_at(1).is_some_and(|n| n.has_pos(Pos::Adjective)) {
                    discarded.push(self.next().unwrap());
                    continue;
                }
                break;
            }
            if !(nominal || adjective) || t.has_pos(Pos::Determiner) || t.has_pos(Pos::Pronoun) {
                break;
            }
            if t.has_pos(Pos::Preposition) && !nominal {
                break;
            }
            // A verb reading right after a noun ends the group.
            if t.has_pos(Pos::Verb)
                && items.last().is_some_and(|p| p.has_pos(Pos::Noun) || p.name)
                && !t.name
            {
                break;
            }
            items.push(self.next().unwrap());
        }
        let Some(last) = items.last() else {
            self.pos = start;
            return fail(format!(
                "expected a noun phrase at `{}`",
                self.peek().map(|t| t.text.as_str()).unwrap_or("end")
            ));
        };
        if !(last.has_pos(Pos::Noun) || last.name)
            && !(allow_adj_head && last.has_pos(Pos::Adjective))
        {
            self.pos = start;
            return fail(format!("noun phrase without a head at `{}`", last.text));
        }
        let head = items.pop().unwrap();
        Ok(NpGroup {
            det,
            mods: items,
            head,
            coordination: Vec::new(),
            quantity,
            discarded,
        })
    }
}

impl fmt::Display for NpGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_coordination() {
            let parts: Vec<String> = self.coordination.iter().map(|c| c.to_string()).collect();
            return write!(f, "(and {})", parts.join(" "));
        }
        let mut words: Vec<String> = self.mods.iter().map(|t| t.lower()).collect();
        words.push(self.head.lower());
        write!(f, "({}", words.join(" "))?;
        if !self.det.is_empty() {
            let d: Vec<String> = self.det.iter().map(|t| t.lower()).collect();
            write!(f, " :det {}", d.join(" "))?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for ParseStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(PARSE \"{}\"", self.source)?;
        for (i, c) in self.clauses.iter().enumerate() {
            write!(f, "  (CLAUSE {i} {:?} (VERB {}", c.attach, c.verb.key())?;
            if c.verb.passive {
                f.write_str(" :passive")?;
            }
            f.write_str(")")?;
            if c.shared_subject {
                f.write_str(" :shared-subject")?;
            }
            for case in [Case::Subj, Case::Obj, Case::Io, Case::Pred] {
                if let Some(np) = c.case(case) {
                    write!(f, " ({} {np})", case.as_str().to_uppercase())?;
                }
            }
            for pp in &c.pps {
                write!(f, " (PREP {} {})", pp.prep.lower(), pp.np)?;
            }
            if let Some(fr) = &c.frequency {
                write!(f, " (FREQ {fr})")?;
            }
            for a in &c.adverbs {
                write!(f, " (ADV {})", a.lower())?;
            }
            writeln!(f, ")")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests;
