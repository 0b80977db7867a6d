//! Question answering over LTM by classification and slot lookup.
//!
//! Questions are matched against a fixed set of templates. Noun phrases in
//! a question go through the noun-group interpreter, so "insect eaters"
//! becomes a defined concept that is classified before answering.
//!
//! Every "yes" carries a chain of [`Step`]s that [`verify`] can replay
//! against LTM.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::knowledge::Knowledge;
use crate::lexicon::Pos;
use crate::noun_group::interpret_noun_group;
use crate::ontology::{
    inverse_relation, is_astruct_id, AStructure, ConceptId, Ontology, Origin, SlotEntry, TOP,
};
use crate::parser::{parse_noun_phrase, tokenize, Token};
use crate::verbal_concepts::Trigger;

/// Template words the lexicon need not know.
const QUESTION_WORDS: &[&str] = &[
    "what", "which", "who", "when", "how", "much", "many", "there",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    /// What do X r?
    WhatRel { x: ConceptId, relation: String },
    /// Which X r Y?
    Which {
        x: ConceptId,
        relation: String,
        y: ConceptId,
    },
    /// Do [most] X r Y? With no Y: does X r anything?
    YesNo {
        x: ConceptId,
        relation: String,
        y: Option<ConceptId>,
        most: bool,
    },
    /// What kinds of X are there?
    KindsOf { x: ConceptId },
    /// What is X?
    WhatIs { x: String },
    /// What r X?
    WhoRel { relation: String, x: ConceptId },
    /// When do [most] X r Y?
    When {
        x: ConceptId,
        relation: String,
        y: ConceptId,
        most: bool,
    },
    /// How do X r Y?
    How {
        x: ConceptId,
        relation: String,
        y: ConceptId,
    },
    /// How much Y do X r?
    HowMuch {
        x: ConceptId,
        relation: String,
        y: ConceptId,
    },
}

/// One checkable step of an explanation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Step {
    IsA(ConceptId, ConceptId),
    Slot(ConceptId, String, ConceptId),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::IsA(a, b) => write!(f, "{a} is-a {b}"),
            Step::Slot(h, r, x) => write!(f, "{h} {r} {x}"),
        }
    }
}

/// A fact an answer rests on. Defined concepts appear rendered (see
/// [`render`]), so facts compare independently of machine ids.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fact {
    pub subject: String,
    pub relation: String,
    pub object: String,
}

impl Fact {
    pub fn new(subject: &str, relation: &str, object: &str) -> Fact {
        Fact {
            subject: subject.to_string(),
            relation: relation.to_string(),
            object: object.to_string(),
        }
    }

    fn of(o: &Ontology, subject: &str, relation: &str, object: &str) -> Fact {
        Fact::new(&render(o, subject), relation, &render(o, object))
    }
}

/// Subject-object pairs of an a-structure as facts.
fn astruct_facts(o: &Ontology, a: &AStructure) -> Vec<Fact> {
    let fwd = a.forward_indices();
    let mut out = Vec::new();
    for &i in &fwd {
        for (j, b) in a.bindings.iter().enumerate() {
            if !fwd.contains(&j) {
                out.push(Fact::of(o, &a.bindings[i].concept, &a.relation, &b.concept));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    DontKnow,
    /// A list of facts rather than a truth value.
    Facts,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer {
    pub verdict: Verdict,
    pub lines: Vec<String>,
    pub facts: BTreeSet<Fact>,
    pub because: Vec<Step>,
}

impl Answer {
    fn dont_know() -> Answer {
        Answer {
            verdict: Verdict::DontKnow,
            lines: vec!["I don't know".into()],
            facts: BTreeSet::new(),
            because: Vec::new(),
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lines.join("\n"))
    }
}

/// Replay an explanation against LTM.
pub fn verify(onto: &Ontology, steps: &[Step]) -> bool {
    steps.iter().all(|s| match s {
        Step::IsA(a, b) => onto.is_subclass(a, b),
        Step::Slot(h, r, x) => onto
            .get(h)
            .is_some_and(|c| c.slot(r).iter().any(|e| &e.filler == x)),
    })
}

/// `<genus which rel filler and ...>` for defined concepts, else the id.
pub fn render(onto: &Ontology, c: &str) -> String {
    match onto.get(c).and_then(|x| x.cf.as_ref()) {
        Some(cf) if !cf.restrictions.is_empty() => {
            let rs: Vec<String> = cf
                .restrictions
                .iter()
                .map(|r| format!("{} {}", r.relation, render(onto, &r.filler)))
                .collect();
            format!("<{} which {}>", render(onto, &cf.genus), rs.join(" and "))
        }
        Some(cf) => render(onto, &cf.genus),
        None => c.to_string(),
    }
}

fn render_modifier(onto: &Ontology, key: &str, value: &str, depth: usize) -> String {
    if is_astruct_id(value) {
        let inner = onto
            .astruct(value)
            .map(|a| render_astruct_with(onto, a, true, depth + 1))
            .unwrap_or_else(|| value.to_string());
        return format!("<{key}> {inner}");
    }
    match key {
        "quantity" => format!("quantity {}", value.replace(':', " ")),
        "frequency" => format!("*frequency* {value}"),
        _ => format!("{key} {}", render(onto, value)),
    }
}

fn render_astruct_with(onto: &Ontology, a: &AStructure, star: bool, depth: usize) -> String {
    let mut parts: Vec<String> = Vec::new();
    let fwd = a.forward_indices();
    let subj: Vec<String> = fwd
        .iter()
        .map(|&i| render(onto, &a.bindings[i].concept))
        .collect();
    parts.push(subj.join(" and "));
    parts.push(if star {
        format!("*{}*", a.relation)
    } else {
        a.relation.clone()
    });
    for (i, b) in a.bindings.iter().enumerate() {
        if !fwd.contains(&i) {
            parts.push(render(onto, &b.concept));
        }
    }
    if depth < 3 {
        for (k, vs) in &a.modifiers {
            for v in vs {
                parts.push(render_modifier(onto, k, v, depth));
            }
        }
    }
    parts.retain(|p| !p.is_empty());
    parts.join(" ")
}

/// One-line rendering of an a-structure with its modifiers.
pub fn render_astruct(onto: &Ontology, a: &AStructure) -> String {
    render_astruct_with(onto, a, false, 0)
}

/// Plain modifiers (not linked a-structures) on the facts behind `e`.
fn modifiers_of(onto: &Ontology, e: &SlotEntry) -> Vec<String> {
    let mut out = Vec::new();
    for id in &e.more {
        if let Some(a) = onto.astruct(id) {
            for (k, vs) in &a.modifiers {
                for v in vs.iter().filter(|v| !is_astruct_id(v)) {
                    let m = render_modifier(onto, k, v, 0);
                    if !out.contains(&m) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// Strength of the holder side of a slot entry: the quantifier the
/// filler's inverse slot records for the holder.
fn holder_strength(onto: &Ontology, holder: &str, relation: &str, e: &SlotEntry) -> u8 {
    onto.get(&e.filler)
        .map(|f| {
            f.slot(&inverse_relation(relation))
                .iter()
                .filter(|x| x.filler == holder)
                .map(|x| x.quantifier.strength())
                .max()
                .unwrap_or(0)
        })
        .unwrap_or(0)
}

fn sorted(onto: &Ontology, ids: impl IntoIterator<Item = ConceptId>) -> Vec<ConceptId> {
    let mut v: Vec<ConceptId> = ids.into_iter().filter(|c| onto.contains(c)).collect();
    v.sort();
    v.dedup();
    v
}

/// `x` and everything below it.
fn with_descendants(onto: &Ontology, x: &str) -> Vec<ConceptId> {
    let mut v = vec![x.to_string()];
    v.extend(sorted(onto, onto.descendants(x)));
    v
}

fn matching<'o>(
    onto: &'o Ontology,
    holder: &str,
    relation: &str,
    y: Option<&str>,
) -> Vec<&'o SlotEntry> {
    onto.get(holder)
        .map(|c| {
            c.slot(relation)
                .iter()
                .filter(|e| y.is_none_or(|y| onto.is_subclass(&e.filler, y)))
                .collect()
        })
        .unwrap_or_default()
}

fn isa_step(sub: &str, sup: &str) -> Option<Step> {
    (sub != sup).then(|| Step::IsA(sub.to_string(), sup.to_string()))
}

impl Knowledge {
    fn relation_for_verb(&self, key: &str) -> Option<String> {
        let mut rels: Vec<String> = self
            .vm_rules
            .iter()
            .filter(|r| r.verbs.contains(key))
            .map(|r| self.verbal.relation(&r.consequent))
            .collect();
        rels.sort();
        rels.dedup();
        if rels.len() == 1 {
            return rels.pop();
        }
        // Several readings: prefer the one a plain verb trigger picks.
        self.vm_rules
            .iter()
            .find(|r| r.verbs.contains(key) && r.trigger == Trigger::Verb && r.tests.is_empty())
            .map(|r| self.verbal.relation(&r.consequent))
    }

    /// Find the verb of a question: its token position, width (1, or 2
    /// with a particle) and relation.
    fn question_verb(&self, toks: &[Token], from: usize) -> Option<(usize, usize, String)> {
        for i in from..toks.len() {
            let Some(lemma) = toks[i].lemma(Pos::Verb) else {
                continue;
            };
            if let Some(next) = toks.get(i + 1) {
                let key = format!("{lemma}+{}", next.lower());
                if let Some(r) = self.relation_for_verb(&key) {
                    return Some((i, 2, r));
                }
            }
            if let Some(r) = self.relation_for_verb(lemma) {
                return Some((i, 1, r));
            }
        }
        None
    }

    /// Interpret question words as one concept, classifying it if new.
    fn question_np(&mut self, toks: &[Token]) -> Result<ConceptId> {
        let bad = || {
            Error::Unparsed(
                toks.iter()
                    .map(|t| t.text.as_str())
                    .collect::<Vec<_>>()
                    .join(" "),
            )
        };
        if toks.is_empty() {
            return Err(bad());
        }
        let mut toks = toks.to_vec();
        for (i, t) in toks.iter_mut().enumerate() {
            t.index = i;
        }
        let np = parse_noun_phrase(&toks).map_err(|_| bad())?;
        if np.is_coordination() {
            return Err(bad());
        }
        let readings =
            interpret_noun_group(&np, &self.schema, &self.ontology).map_err(|_| bad())?;
        let reading = readings.first().ok_or_else(bad)?;
        let (id, _) = reading.realize(&mut self.ontology)?;
        Ok(id)
    }

    /// Match a question against the templates.
    pub fn parse_question(&mut self, text: &str) -> Result<Query> {
        let unparsed = || Error::Unparsed(text.trim().to_string());
        let toks: Vec<Token> = tokenize(text.trim().trim_end_matches('?'), &self.lexicon);
        let words: Vec<String> = toks.iter().map(Token::lower).collect();
        let w = |i: usize| words.get(i).map(String::as_str).unwrap_or("");
        if toks
            .iter()
            .any(|t| !t.is_known() && !QUESTION_WORDS.contains(&t.lower().as_str()))
        {
            return Err(unparsed());
        }
        let lead = match (w(0), w(1)) {
            ("do" | "does", _) => 1,
            ("when", "do" | "does") => 2,
            _ => 0,
        };
        let (start, most) = if w(lead) == "most" {
            (lead + 1, true)
        } else {
            (lead, false)
        };
        let q = match (w(0), w(1)) {
            ("what", "kinds" | "kind") if w(2) == "of" => {
                let n = words.len();
                if n < 6 || w(n - 2) != "are" || w(n - 1) != "there" {
                    return Err(unparsed());
                }
                Query::KindsOf {
                    x: self.question_np(&toks[3..n - 2])?,
                }
            }
            ("what", "is" | "are") => {
                let rest = &toks[2..];
                let x = match self.question_np(rest) {
                    Ok(x) => x,
                    Err(_) => rest.iter().map(Token::lower).collect::<Vec<_>>().join("-"),
                };
                Query::WhatIs { x }
            }
            ("what", "do" | "does") => {
                let (v, width, relation) = self.question_verb(&toks, 3).ok_or_else(unparsed)?;
                if v + width != toks.len() {
                    return Err(unparsed());
                }
                Query::WhatRel {
                    x: self.question_np(&toks[2..v])?,
                    relation,
                }
            }
            ("what" | "who", _) => {
                let (v, width, relation) = self.question_verb(&toks, 1).ok_or_else(unparsed)?;
                if v != 1 {
                    return Err(unparsed());
                }
                Query::WhoRel {
                    relation,
                    x: self.question_np(&toks[v + width..])?,
                }
            }
            ("which", _) => {
                let (v, width, relation) = self.question_verb(&toks, 2).ok_or_else(unparsed)?;
                Query::Which {
                    x: self.question_np(&toks[1..v])?,
                    relation,
                    y: self.question_np(&toks[v + width..])?,
                }
            }
            ("how", "much" | "many") => {
                let d = words
                    .iter()
                    .position(|x| x == "do" || x == "does")
                    .ok_or_else(unparsed)?;
                let (v, width, relation) = self.question_verb(&toks, d + 2).ok_or_else(unparsed)?;
                if v + width != toks.len() {
                    return Err(unparsed());
                }
                Query::HowMuch {
                    y: self.question_np(&toks[2..d])?,
                    x: self.question_np(&toks[d + 1..v])?,
                    relation,
                }
            }
            ("how", "do" | "does") => {
                let (v, width, relation) = self.question_verb(&toks, 3).ok_or_else(unparsed)?;
                Query::How {
                    x: self.question_np(&toks[2..v])?,
                    relation,
                    y: self.question_np(&toks[v + width..])?,
                }
            }
            ("when", "do" | "does") => {
                let (v, width, relation) =
                    self.question_verb(&toks, start + 1).ok_or_else(unparsed)?;
                Query::When {
                    x: self.question_np(&toks[start..v])?,
                    relation,
                    y: self.question_np(&toks[v + width..])?,
                    most,
                }
            }
            ("do" | "does", _) => {
                let n = words.len();
                if n >= start + 3 && w(n - 2) == "have" && matches!(w(n - 1), "enemies" | "enemy") {
                    Query::YesNo {
                        x: self.question_np(&toks[start..n - 2])?,
                        relation: "has-enemy".into(),
                        y: None,
                        most,
                    }
                } else {
                    let (v, width, relation) =
                        self.question_verb(&toks, start + 1).ok_or_else(unparsed)?;
                    Query::YesNo {
                        x: self.question_np(&toks[start..v])?,
                        relation,
                        y: Some(self.question_np(&toks[v + width..])?),
                        most,
                    }
                }
            }
            _ => return Err(unparsed()),
        };
        Ok(q)
    }

    /// Parse and answer; unparsable questions give the fixed reply.
    pub fn ask(&mut self, text: &str) -> Answer {
        match self.parse_question(text) {
            Ok(q) => self.answer(&q),
            Err(e) => Answer {
                verdict: Verdict::DontKnow,
                lines: vec![match e {
                    Error::Unparsed(_) => "I can't parse that question.".to_string(),
                    other => other.to_string(),
                }],
                facts: BTreeSet::new(),
                because: Vec::new(),
            },
        }
    }

    pub fn answer(&self, q: &Query) -> Answer {
        let o = &self.ontology;
        match q {
            Query::WhatRel { x, relation } => {
                list_facts(o, &with_descendants(o, x), relation, None)
            }
            Query::Which { x, relation, y } => {
                list_facts(o, &with_descendants(o, x), relation, Some(y))
            }
            Query::KindsOf { x } => kinds_of(o, x),
            Query::WhatIs { x } => what_is(o, x),
            Query::WhoRel { relation, x } => who_rel(o, relation, x),
            Query::YesNo {
                x,
                relation,
                y,
                most,
            } => yes_no(o, x, relation, y.as_deref(), *most),
            Query::When {
                x,
                relation,
                y,
                most,
            } => modifiers_answer(o, x, relation, y, *most, &["at-time", "time"]),
            Query::How { x, relation, y } => {
                modifiers_answer(o, x, relation, y, false, &["manner"])
            }
            Query::HowMuch { x, relation, y } => how_much(o, x, relation, y),
        }
    }
}

fn list_facts(o: &Ontology, holders: &[ConceptId], relation: &str, y: Option<&str>) -> Answer {
    let mut a = Answer {
        verdict: Verdict::Facts,
        lines: Vec::new(),
        facts: BTreeSet::new(),
        because: Vec::new(),
    };
    for h in holders {
        let entries = matching(o, h, relation, y);
        if entries.is_empty() {
            continue;
        }
        let fillers: Vec<String> = entries.iter().map(|e| render(o, &e.filler)).collect();
        a.lines.push(format!(
            "{} {relation} {}",
            render(o, h),
            fillers.join(", ")
        ));
        for e in entries {
            a.facts.insert(Fact::of(o, h, relation, &e.filler));
        }
    }
    if a.lines.is_empty() {
        return Answer::dont_know();
    }
    a
}

fn satisfies(o: &Ontology, c: &str, x: &str) -> bool {
    o.restrictions(x).iter().all(|r| {
        matching(o, c, &r.relation, Some(&r.filler))
            .iter()
            .any(|_| true)
    })
}

fn kinds_of(o: &Ontology, x: &str) -> Answer {
    let genus = o
        .atoms(x)
        .into_iter()
        .next()
        .unwrap_or_else(|| x.to_string());
    let lexical = |c: &str| {
        o.get(c).is_some_and(|k| {
            k.cf.is_none() && matches!(k.origin, Origin::Lexical | Origin::Provisional)
        })
    };
    let defined = o.get(x).is_some_and(|k| k.cf.is_some());
    let mut found: Vec<ConceptId> = sorted(o, o.descendants(&genus))
        .into_iter()
        .filter(|c| c != &genus && lexical(c))
        .filter(|c| {
            if defined {
                satisfies(o, c, x) || o.is_subclass(c, x)
            } else {
                true
            }
        })
        .collect();
    // Keep the most specific kinds only.
    let all = found.clone();
    found.retain(|c| !all.iter().any(|d| d != c && o.is_subclass(d, c)));
    if found.is_empty() {
        return Answer::dont_know();
    }
    Answer {
        verdict: Verdict::Facts,
        lines: vec![found.join(", ")],
        facts: found.iter().map(|c| Fact::of(o, c, "is-a", x)).collect(),
        because: Vec::new(),
    }
}

fn astructs_mentioning<'o>(o: &'o Ontology, x: &str) -> Vec<&'o AStructure> {
    let mut v: Vec<&AStructure> = o
        .astructs()
        .filter(|a| a.bindings.iter().any(|b| b.concept == x))
        .collect();
    v.sort_by_key(|a| (a.id.len(), a.id.clone()));
    v
}

fn what_is(o: &Ontology, x: &str) -> Answer {
    let Some(c) = o.get(x) else {
        return Answer::dont_know();
    };
    let informative: Vec<&ConceptId> = c.parents.iter().filter(|p| p.as_str() != TOP).collect();
    let mut a = Answer {
        verdict: Verdict::Facts,
        lines: Vec::new(),
        facts: BTreeSet::new(),
        because: Vec::new(),
    };
    let mentions = astructs_mentioning(o, x);
    if informative.is_empty() || c.origin == Origin::Provisional {
        if mentions.is_empty() {
            return Answer::dont_know();
        }
        a.verdict = Verdict::DontKnow;
        a.lines.push("I don't know, but I know that:".into());
    } else {
        let ps: Vec<String> = informative.iter().map(|p| render(o, p)).collect();
        a.lines
            .push(format!("{} is-a {}", render(o, x), ps.join(", ")));
        for p in informative {
            a.facts.insert(Fact::of(o, x, "is-a", p));
        }
    }
    for m in mentions {
        a.lines.push(format!("  {}", render_astruct(o, m)));
        a.facts.extend(astruct_facts(o, m));
    }
    a
}

fn who_rel(o: &Ontology, relation: &str, x: &str) -> Answer {
    let inv = inverse_relation(relation);
    let mut a = Answer {
        verdict: Verdict::Facts,
        lines: Vec::new(),
        facts: BTreeSet::new(),
        because: Vec::new(),
    };
    for c in with_descendants(o, x) {
        let agents: Vec<&SlotEntry> = o
            .get(&c)
            .map(|k| k.slot(&inv).iter().collect())
            .unwrap_or_default();
        if agents.is_empty() {
            continue;
        }
        let names: Vec<String> = agents.iter().map(|e| render(o, &e.filler)).collect();
        let line = if c == x {
            format!("{} {relation} {}", names.join(" and "), render(o, &c))
        } else {
            format!(
                "{} is-a {x}, and {} {relation} {}",
                render(o, &c),
                names.join(" and "),
                render(o, &c)
            )
        };
        a.lines.push(line);
        for e in agents {
            a.facts.insert(Fact::of(o, &e.filler, relation, &c));
        }
    }
    if a.lines.is_empty() {
        return Answer::dont_know();
    }
    a
}

fn yes_no(o: &Ontology, x: &str, relation: &str, y: Option<&str>, most: bool) -> Answer {
    let strong = |h: &str, e: &SlotEntry| !most || holder_strength(o, h, relation, e) >= 3;
    let tail = |e: &SlotEntry| y.and_then(|y| isa_step(&e.filler, y));
    let mods = |e: &SlotEntry| {
        let m = modifiers_of(o, e);
        if m.is_empty() {
            String::new()
        } else {
            format!(" {}", m.join(" "))
        }
    };
    let mut weak_only = false;
    // X itself, then what it inherits from.
    let mut up = vec![x.to_string()];
    up.extend(sorted(o, o.ancestors(x)));
    for h in &up {
        let entries = matching(o, h, relation, y);
        let good: Vec<&SlotEntry> = entries.iter().copied().filter(|e| strong(h, e)).collect();
        weak_only |= good.is_empty() && !entries.is_empty();
        let Some(first) = good.first() else { continue };
        let mut because: Vec<Step> = isa_step(x, h).into_iter().collect();
        because.push(Step::Slot(
            h.clone(),
            relation.to_string(),
            first.filler.clone(),
        ));
        because.extend(tail(first));
        let fillers: Vec<String> = good.iter().map(|e| render(o, &e.filler)).collect();
        let mut lines = vec![format!(
            "yes, {} {relation} {}{}",
            render(o, x),
            fillers.join(" "),
            mods(first)
        )];
        if h != x {
            lines.push("because".into());
            lines.push(format!("  {} is-a {} and", render(o, x), render(o, h)));
            lines.push(format!(
                "  {} {relation} {}",
                render(o, h),
                fillers.join(" ")
            ));
        }
        return Answer {
            verdict: Verdict::Yes,
            lines,
            facts: good
                .iter()
                .map(|e| Fact::of(o, h, relation, &e.filler))
                .collect(),
            because,
        };
    }
    // Some subconcept.
    for c in sorted(o, o.descendants(x)) {
        let entries = matching(o, &c, relation, y);
        let good: Vec<&SlotEntry> = entries.iter().copied().filter(|e| strong(&c, e)).collect();
        weak_only |= good.is_empty() && !entries.is_empty();
        let Some(first) = good.first() else { continue };
        let mut because = vec![Step::IsA(c.clone(), x.to_string())];
        because.push(Step::Slot(
            c.clone(),
            relation.to_string(),
            first.filler.clone(),
        ));
        because.extend(tail(first));
        let fillers: Vec<String> = good.iter().map(|e| render(o, &e.filler)).collect();
        let object = match y {
            Some(y) => render(o, y),
            None => fillers.join(" "),
        };
        return Answer {
            verdict: Verdict::Yes,
            lines: vec![
                format!("yes, some {} {relation} {object} because", render(o, x)),
                format!("  {} is-a {} and", render(o, &c), render(o, x)),
                format!("  {} {relation} {}", render(o, &c), fillers.join(" ")),
            ],
            facts: good
                .iter()
                .map(|e| Fact::of(o, &c, relation, &e.filler))
                .collect(),
            because,
        };
    }
    if most && weak_only {
        return Answer {
            verdict: Verdict::No,
            lines: vec!["no".into()],
            facts: BTreeSet::new(),
            because: Vec::new(),
        };
    }
    Answer::dont_know()
}

/// Slot entries of X (and what X inherits or specializes) matching `r Y`.
fn related_entries<'o>(
    o: &'o Ontology,
    x: &str,
    relation: &str,
    y: &str,
    most: bool,
) -> Vec<(ConceptId, &'o SlotEntry)> {
    let mut holders = vec![x.to_string()];
    holders.extend(sorted(o, o.ancestors(x)));
    holders.extend(sorted(o, o.descendants(x)));
    let mut out = Vec::new();
    for h in holders {
        for e in matching(o, &h, relation, Some(y)) {
            if !most || holder_strength(o, &h, relation, e) >= 3 {
                out.push((h.clone(), e));
            }
        }
    }
    out
}

fn modifiers_answer(
    o: &Ontology,
    x: &str,
    relation: &str,
    y: &str,
    most: bool,
    keys: &[&str],
) -> Answer {
    let mut a = Answer {
        verdict: Verdict::Facts,
        lines: Vec::new(),
        facts: BTreeSet::new(),
        because: Vec::new(),
    };
    for (h, e) in related_entries(o, x, relation, y, most) {
        for id in &e.more {
            let Some(s) = o.astruct(id) else { continue };
            for k in keys {
                for v in s.modifier(k) {
                    let line = match o.astruct(v) {
                        Some(inner) => {
                            a.facts.extend(astruct_facts(o, inner));
                            render_astruct(o, inner)
                        }
                        None => {
                            a.facts.insert(Fact::of(o, &h, k, v));
                            format!("{k} {}", render(o, v))
                        }
                    };
                    if !a.lines.contains(&line) {
                        a.lines.push(line);
                    }
                }
            }
        }
    }
    if a.lines.is_empty() {
        return Answer::dont_know();
    }
    a
}

fn how_much(o: &Ontology, x: &str, relation: &str, y: &str) -> Answer {
    let mut a = Answer {
        verdict: Verdict::Facts,
        lines: Vec::new(),
        facts: BTreeSet::new(),
        because: Vec::new(),
    };
    for (h, e) in related_entries(o, x, relation, y, false) {
        for id in &e.more {
            let Some(s) = o.astruct(id) else { continue };
            if s.modifier("quantity").next().is_none() {
                continue;
            }
            let line = render_astruct(o, s);
            if !a.lines.contains(&line) {
                a.lines.push(line);
            }
            a.facts.insert(Fact::of(o, &h, relation, &e.filler));
        }
    }
    if a.lines.is_empty() {
        return Answer::dont_know();
    }
    a
}
