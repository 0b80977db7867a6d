//! Semantic interpretation of parsed clauses.
//!
//! VM rules pick the verbal concept while the clause is walked: the verb
//! first, then its constituents in surface order, then the end of the
//! clause. Rules only see constituents already walked past. Once a verbal
//! concept is known, cases are mapped to thematic roles and PPs are
//! attached.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use log::debug;

use crate::error::{Error, Result};
use crate::lexicon::Pos;
use crate::noun_group::{genitive, interpret_noun_group, restriction_relation, PairSchema};
use crate::ontology::{ConceptId, Ontology, Proportion, Quantifier};
use crate::parser::{Attach, Case, ClauseParse, NpGroup, NpSlot, ParseStructure};
use crate::verbal_concepts::{
    Constituent, Strength, Trigger, VerbalHierarchy, VmRule, VmTest, NO_ROLE,
};

/// Prep meanings that become a-structure modifiers rather than roles.
pub const MODIFIER_MEANINGS: &[&str] = &[
    "at-loc",
    "at-time",
    "purpose",
    "manner",
    "frequency",
    "quantity",
    "causality",
    "source",
    "accompany",
];

pub fn is_modifier_meaning(meaning: &str) -> bool {
    MODIFIER_MEANINGS.contains(&meaning)
}

/// One concept filling a constituent (several for coordinations).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filler {
    pub concept: ConceptId,
    pub quantifier: Quantifier,
    /// The chosen noun-group reading, for display.
    pub reading: String,
}

/// Where a constituent's fillers come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    /// The clause's own words.
    Own,
    /// The subject of another clause (shared subjects and pronouns).
    Shared { host: usize },
    /// The host NP of a relative clause.
    Gap { host: usize, slot: NpSlot },
    /// Filled in by the verbal concept.
    Implicit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpConstituent {
    pub parse: NpSlot,
    pub text: String,
    pub fillers: Vec<Filler>,
    pub role: String,
    pub source: Source,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttachTo {
    Verb,
    Np(NpSlot),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpPp {
    /// Index into the clause's PP list.
    pub index: usize,
    pub prep: String,
    pub text: String,
    pub fillers: Vec<Filler>,
    pub attach_to: AttachTo,
    /// Role, modifier key, or (for NP attachment) the slot put on the NP.
    pub meaning: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpretedClause {
    /// Index of the clause in the parse structure.
    pub clause: usize,
    pub attach: Attach,
    pub verbal_concept: String,
    pub relation: String,
    pub constituents: Vec<InterpConstituent>,
    pub pps: Vec<InterpPp>,
    /// Modifier key to values: concept ids, adverbs, `amount:unit`.
    pub modifiers: BTreeMap<String, BTreeSet<String>>,
}

impl InterpretedClause {
    pub fn constituent(&self, slot: NpSlot) -> Option<&InterpConstituent> {
        self.constituents.iter().find(|c| c.parse == slot)
    }

    pub fn pp(&self, index: usize) -> Option<&InterpPp> {
        self.pps.iter().find(|p| p.index == index)
    }

    /// Fillers of a case or PP, as interpreted.
    pub fn fillers(&self, slot: NpSlot) -> Option<&[Filler]> {
        match slot {
            NpSlot::Case(_) => self.constituent(slot).map(|c| c.fillers.as_slice()),
            NpSlot::Pp(i) => self.pp(i).map(|p| p.fillers.as_slice()),
        }
    }
}

#[derive(Debug)]
pub struct InterpretedSentence {
    pub source: String,
    pub parse: ParseStructure,
    /// Index-aligned with `parse.clauses`.
    pub clauses: Vec<std::result::Result<InterpretedClause, Error>>,
}

impl InterpretedSentence {
    pub fn ok_clauses(&self) -> impl Iterator<Item = &InterpretedClause> {
        self.clauses.iter().filter_map(|c| c.as_ref().ok())
    }

    pub fn clause(&self, i: usize) -> Option<&InterpretedClause> {
        self.clauses.get(i).and_then(|c| c.as_ref().ok())
    }

    /// At least one clause went through.
    pub fn is_interpreted(&self) -> bool {
        self.ok_clauses().next().is_some()
    }
}

/// Read-only knowledge the interpreter consults.
pub struct Interpreter<'a> {
    pub verbal: &'a VerbalHierarchy,
    pub rules: &'a [VmRule],
    pub schema: &'a PairSchema,
}

fn quantifier_words(np: &NpGroup) -> Option<Quantifier> {
    np.det
        .iter()
        .find_map(|d| Proportion::from_word(&d.lower()))
        .map(Quantifier::Proportion)
}

fn slot_text(slot: NpSlot, clause: &ClauseParse) -> String {
    clause.np(slot).map(|n| n.text()).unwrap_or_default()
}

fn first_index(np: &NpGroup) -> usize {
    np.tokens().first().map(|t| t.index).unwrap_or(0)
}

fn last_index(np: &NpGroup) -> usize {
    np.tokens().last().map(|t| t.index).unwrap_or(0)
}

/// Walk position of a constituent for VM rule triggers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Event {
    Case(Case),
    Pp(usize),
}

impl<'a> Interpreter<'a> {
    pub fn new(verbal: &'a VerbalHierarchy, rules: &'a [VmRule], schema: &'a PairSchema) -> Self {
        Interpreter {
            verbal,
            rules,
            schema,
        }
    }

    /// Interpret every clause of a parse. Clauses fail independently.
    pub fn interpret(
        &self,
        parse: &ParseStructure,
        ontology: &mut Ontology,
    ) -> InterpretedSentence {
        let clauses = (0..parse.clauses.len())
            .map(|i| {
                let r = self.interpret_clause(parse, i, ontology);
                if let Err(e) = &r {
                    debug!("clause {i} of \"{}\": {e}", parse.source);
                }
                r
            })
            .collect();
        InterpretedSentence {
            source: parse.source.clone(),
            parse: parse.clone(),
            clauses,
        }
    }

    /// Fillers of a noun group as written, with the quantifier its
    /// determiners and position give it.
    pub fn np_fillers(
        &self,
        np: &NpGroup,
        subject: bool,
        ontology: &mut Ontology,
    ) -> Result<Vec<Filler>> {
        let mut out = Vec::new();
        let outer_q = quantifier_words(np);
        for conj in np.conjuncts() {
            let readings = interpret_noun_group(conj, self.schema, ontology)?;
            let reading = readings
                .first()
                .ok_or_else(|| Error::InterpretFail(format!("no reading for `{}`", conj.text())))?;
            let (concept, _) = reading.realize(ontology)?;
            let quantifier = if let Some(q) = quantifier_words(conj).or_else(|| outer_q.clone()) {
                q
            } else if let Some(q) = conj.quantity.as_ref().filter(|q| q.unit.is_none()) {
                Quantifier::Count {
                    amount: q.amount.clone(),
                    unit: None,
                }
            } else if subject {
                Quantifier::Universal
            } else {
                Quantifier::Unknown
            };
            out.push(Filler {
                concept,
                quantifier,
                reading: reading.to_string(),
            });
        }
        Ok(out)
    }

    /// Subject fillers of a clause, following shared subjects and pronouns.
    fn subject_fillers(
        &self,
        parse: &ParseStructure,
        ci: usize,
        ontology: &mut Ontology,
    ) -> Result<(Vec<Filler>, Source)> {
        let clause = &parse.clauses[ci];
        if let Attach::Relative {
            host,
            slot,
            gap: Case::Subj,
        } = clause.attach
        {
            return Ok((
                self.host_fillers(parse, host, slot, ontology)?,
                Source::Gap { host, slot },
            ));
        }
        if clause.shared_subject {
            let host = clause.attach.host().expect("shared subjects have hosts");
            let (f, _) = self.subject_fillers(parse, host, ontology)?;
            return Ok((f, Source::Shared { host }));
        }
        let np = clause
            .subj
            .as_ref()
            .ok_or_else(|| Error::InterpretFail("missing subject".into()))?;
        if np.is_pronoun() {
            if ci == 0 {
                return Err(Error::InterpretFail(format!(
                    "unresolved pronoun `{}`",
                    np.head.text
                )));
            }
            let (f, _) = self.subject_fillers(parse, 0, ontology)?;
            return Ok((f, Source::Shared { host: 0 }));
        }
        Ok((
            self.np_fillers(np, !clause.verb.passive, ontology)?,
            Source::Own,
        ))
    }

    fn host_fillers(
        &self,
        parse: &ParseStructure,
        host: usize,
        slot: NpSlot,
        ontology: &mut Ontology,
    ) -> Result<Vec<Filler>> {
        if slot == NpSlot::Case(Case::Subj) {
            return Ok(self.subject_fillers(parse, host, ontology)?.0);
        }
        let np = parse.clauses[host]
            .np(slot)
            .ok_or_else(|| Error::InterpretFail("relative clause without host".into()))?;
        self.np_fillers(np, false, ontology)
    }

    pub fn interpret_clause(
        &self,
        parse: &ParseStructure,
        ci: usize,
        ontology: &mut Ontology,
    ) -> Result<InterpretedClause> {
        let clause = &parse.clauses[ci];
        let verb_tok = clause
            .verb
            .tokens
            .iter()
            .rev()
            .find(|t| t.lemma(Pos::Verb) == Some(clause.verb.lemma.as_str()));
        let impersonal = verb_tok
            .and_then(|t| t.verb_entry())
            .is_some_and(|e| e.has_frame("impersonal"));
        let verb_index = verb_tok.map(|t| t.index).unwrap_or(0);

        // Constituents with their fillers, in walk order.
        let mut cons: Vec<InterpConstituent> = Vec::new();
        let mut order: Vec<(usize, Event)> = Vec::new();
        let expletive = impersonal
            && clause
                .subj
                .as_ref()
                .is_some_and(|s| s.is_pronoun() && s.head.is("it"));
        let has_subject = clause.subj.is_some()
            || clause.shared_subject
            || matches!(
                clause.attach,
                Attach::Relative {
                    gap: Case::Subj,
                    ..
                }
            );
        if has_subject && !expletive {
            let (fillers, source) = self.subject_fillers(parse, ci, ontology)?;
            let pos = clause
                .subj
                .as_ref()
                .filter(|_| source == Source::Own)
                .map(first_index)
                .unwrap_or(0);
            order.push((pos, Event::Case(Case::Subj)));
            cons.push(InterpConstituent {
                parse: NpSlot::Case(Case::Subj),
                text: clause.subj.as_ref().map(|s| s.text()).unwrap_or_default(),
                fillers,
                role: String::new(),
                source,
            });
        }
        for case in [Case::Obj, Case::Io, Case::Pred] {
            if let Attach::Relative { host, slot, gap } = clause.attach {
                if gap == case {
                    let fillers = self.host_fillers(parse, host, slot, ontology)?;
                    order.push((verb_index, Event::Case(case)));
                    cons.push(InterpConstituent {
                        parse: NpSlot::Case(case),
                        text: slot_text(slot, &parse.clauses[host]),
                        fillers,
                        role: String::new(),
                        source: Source::Gap { host, slot },
                    });
                    continue;
                }
            }
            let Some(np) = clause.case(case) else {
                continue;
            };
            let fillers = if np.is_pronoun() {
                self.subject_fillers(parse, 0, ontology)?.0
            } else {
                // A passive's surface subject keeps its subject quantifier.
                self.np_fillers(np, case == Case::Obj && clause.verb.passive, ontology)?
            };
            order.push((first_index(np), Event::Case(case)));
            cons.push(InterpConstituent {
                parse: NpSlot::Case(case),
                text: np.text(),
                fillers,
                role: String::new(),
                source: Source::Own,
            });
        }
        let mut pp_fillers: Vec<Vec<Filler>> = Vec::new();
        for (k, pp) in clause.pps.iter().enumerate() {
            pp_fillers.push(self.np_fillers(&pp.np, false, ontology)?);
            order.push((pp.prep.index, Event::Pp(k)));
        }
        order.sort_by_key(|(pos, _)| *pos);

        let vc = self.fire_vm_rules(clause, &cons, &pp_fillers, &order, ontology)?;
        debug!("clause {ci}: {} -> {vc}", clause.verb.key());

        // Roles.
        for c in &mut cons {
            let NpSlot::Case(case) = c.parse else {
                continue;
            };
            let mut role: Option<String> = None;
            for f in &c.fillers {
                let r = self
                    .verbal
                    .match_case(&vc, case, &f.concept, ontology)
                    .ok_or_else(|| {
                        Error::InterpretFail(format!("role: {case} `{}` of {vc}", f.concept))
                    })?;
                match &role {
                    Some(prev) if *prev != r => {
                        return Err(Error::InterpretFail(format!(
                            "role: conjuncts of {case} disagree"
                        )))
                    }
                    _ => role = Some(r),
                }
            }
            c.role = role.unwrap_or_else(|| NO_ROLE.to_string());
        }

        // PP attachment: strong claim, NP pairing, weak claim.
        let mut pps = Vec::new();
        for (k, pp) in clause.pps.iter().enumerate() {
            let prep = pp.prep.lower();
            let fillers = pp_fillers[k].clone();
            let filler = &fillers[0].concept;
            let claim = self.verbal.match_prep(&vc, &prep, filler, ontology);
            let all_match = |meaning: &str| {
                fillers.iter().all(|f| {
                    self.verbal
                        .match_prep(&vc, &prep, &f.concept, ontology)
                        .is_some_and(|(m, _)| m == meaning)
                })
            };
            let (attach_to, meaning) = match claim {
                Some((m, Strength::Strong)) if all_match(&m) => (AttachTo::Verb, m),
                _ => match self.pair_with_preceding_np(
                    clause,
                    &cons,
                    &pp_fillers,
                    pp.prep.index,
                    &prep,
                    filler,
                    ontology,
                ) {
                    Some((slot, rel)) => (AttachTo::Np(slot), rel),
                    None => match claim {
                        Some((m, _)) if all_match(&m) => (AttachTo::Verb, m),
                        _ => {
                            return Err(Error::InterpretFail(format!(
                                "unattached-pp: `{prep} {}` in {vc}",
                                pp.np.text()
                            )))
                        }
                    },
                },
            };
            pps.push(InterpPp {
                index: k,
                prep,
                text: pp.np.text(),
                fillers,
                attach_to,
                meaning,
            });
        }

        // Implicit roles the clause left open.
        for (role, concept) in self.verbal.implicit_roles(&vc) {
            let taken = cons.iter().any(|c| c.role == *role)
                || pps
                    .iter()
                    .any(|p| p.attach_to == AttachTo::Verb && p.meaning == *role);
            if !taken {
                cons.push(InterpConstituent {
                    parse: NpSlot::Case(Case::Obj),
                    text: String::new(),
                    fillers: vec![Filler {
                        concept: concept.clone(),
                        quantifier: Quantifier::Unknown,
                        reading: concept.clone(),
                    }],
                    role: role.clone(),
                    source: Source::Implicit,
                });
            }
        }

        // Modifiers.
        let mut modifiers: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for p in &pps {
            if p.attach_to == AttachTo::Verb && is_modifier_meaning(&p.meaning) {
                modifiers
                    .entry(p.meaning.clone())
                    .or_default()
                    .extend(p.fillers.iter().map(|f| f.concept.clone()));
            }
        }
        if let Some(freq) = &clause.frequency {
            let f = self.np_fillers(freq, false, ontology)?;
            modifiers
                .entry("frequency".into())
                .or_default()
                .extend(f.into_iter().map(|f| f.concept));
        }
        for np in [&clause.obj, &clause.io].into_iter().flatten() {
            for conj in np.conjuncts() {
                if let Some(q) = &conj.quantity {
                    if let Some(unit) = &q.unit {
                        modifiers
                            .entry("quantity".into())
                            .or_default()
                            .insert(format!("{}:{unit}", q.amount));
                    }
                }
            }
        }
        // "rarely", "sometimes": frequency of the relation, and the
        // proportion of the object side taking part.
        for adv in &clause.adverbs {
            let word = adv.lower();
            if let Some(p) = Proportion::from_word(&word) {
                modifiers
                    .entry("frequency".into())
                    .or_default()
                    .insert(word);
                for c in cons
                    .iter_mut()
                    .filter(|c| c.parse == NpSlot::Case(Case::Obj))
                {
                    for f in &mut c.fillers {
                        if f.quantifier == Quantifier::Unknown {
                            f.quantifier = Quantifier::Proportion(p);
                        }
                    }
                }
            }
        }

        Ok(InterpretedClause {
            clause: ci,
            attach: clause.attach.clone(),
            relation: self.verbal.relation(&vc),
            verbal_concept: vc,
            constituents: cons,
            pps,
            modifiers,
        })
    }

    /// NP whose last token sits right before the preposition, if the PP
    /// object pairs with it.
    #[allow(clippy::too_many_arguments)]
    fn pair_with_preceding_np(
        &self,
        clause: &ClauseParse,
        cons: &[InterpConstituent],
        pp_fillers: &[Vec<Filler>],
        prep_index: usize,
        prep: &str,
        object: &str,
        ontology: &Ontology,
    ) -> Option<(NpSlot, String)> {
        let prev = prep_index.checked_sub(1)?;
        let mut slots: Vec<NpSlot> = [Case::Subj, Case::Obj, Case::Io, Case::Pred]
            .into_iter()
            .map(NpSlot::Case)
            .collect();
        slots.extend((0..clause.pps.len()).map(NpSlot::Pp));
        let slot = slots
            .into_iter()
            .find(|s| clause.np(*s).is_some_and(|np| last_index(np) == prev))?;
        let head = match slot {
            NpSlot::Case(_) => cons
                .iter()
                .find(|c| c.parse == slot && c.source == Source::Own)?
                .fillers
                .first()?,
            NpSlot::Pp(i) => pp_fillers.get(i)?.first()?,
        };
        let rel = if prep == "of" {
            genitive(&head.concept, object, self.schema, ontology)?
        } else {
            let (rel, dir) = self.schema.pair_meaning(object, &head.concept, ontology)?;
            restriction_relation(&rel, dir)
        };
        Some((slot, rel))
    }

    fn fire_vm_rules(
        &self,
        clause: &ClauseParse,
        cons: &[InterpConstituent],
        pp_fillers: &[Vec<Filler>],
        order: &[(usize, Event)],
        ontology: &Ontology,
    ) -> Result<String> {
        let key = clause.verb.key();
        let applicable: Vec<&VmRule> = self
            .rules
            .iter()
            .filter(|r| r.verbs.contains(&key) || r.verbs.contains(&clause.verb.lemma))
            .collect();
        let mut seen: Vec<Event> = Vec::new();
        let passes = |r: &VmRule, seen: &[Event]| {
            r.tests.iter().all(|t| match t {
                VmTest::Isa(c, concept) => {
                    let fillers = self.seen_fillers(c, seen, clause, cons, pp_fillers);
                    !fillers.is_empty()
                        && fillers
                            .iter()
                            .all(|f| ontology.is_subclass(&f.concept, concept))
                }
                VmTest::Absent(c) => self
                    .seen_fillers(c, seen, clause, cons, pp_fillers)
                    .is_empty(),
            })
        };
        let try_class = |trigger: Trigger, seen: &[Event]| {
            applicable
                .iter()
                .filter(|r| r.trigger == trigger)
                .find(|r| passes(r, seen))
                .map(|r| r.consequent.clone())
        };
        if let Some(vc) = try_class(Trigger::Verb, &seen) {
            return Ok(vc);
        }
        for (_, ev) in order {
            seen.push(*ev);
            let trigger = match ev {
                Event::Case(Case::Subj) => Trigger::Subj,
                Event::Case(Case::Obj) => Trigger::Obj,
                Event::Case(Case::Io) => Trigger::Io,
                Event::Case(Case::Pred) => Trigger::Pred,
                Event::Pp(_) => Trigger::Prep,
            };
            if let Some(vc) = try_class(trigger, &seen) {
                return Ok(vc);
            }
        }
        try_class(Trigger::EndOfClause, &seen)
            .ok_or_else(|| Error::InterpretFail(format!("no-vm-rule for `{key}`")))
    }

    fn seen_fillers<'b>(
        &self,
        c: &Constituent,
        seen: &[Event],
        clause: &ClauseParse,
        cons: &'b [InterpConstituent],
        pp_fillers: &'b [Vec<Filler>],
    ) -> Vec<&'b Filler> {
        match c {
            Constituent::Case(case) => {
                if !seen.contains(&Event::Case(*case)) {
                    return Vec::new();
                }
                cons.iter()
                    .filter(|k| k.parse == NpSlot::Case(*case) && k.source != Source::Implicit)
                    .flat_map(|k| k.fillers.iter())
                    .collect()
            }
            Constituent::Pp(prep) => clause
                .pps
                .iter()
                .enumerate()
                .filter(|(k, pp)| pp.prep.is(prep) && seen.contains(&Event::Pp(*k)))
                .flat_map(|(k, _)| pp_fillers[k].iter())
                .collect(),
        }
    }
}

impl fmt::Display for InterpretedClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "(CLAUSE {} (VERBAL-CONCEPT {})",
            self.clause, self.verbal_concept
        )?;
        for c in &self.constituents {
            let slot = match c.parse {
                NpSlot::Case(case) => case.as_str().to_uppercase(),
                NpSlot::Pp(i) => format!("PP{i}"),
            };
            write!(f, "  ({slot} (PARSE \"{}\") (INTERP", c.text)?;
            for x in &c.fillers {
                write!(f, " ({} (Q {}))", x.reading, x.quantifier)?;
            }
            writeln!(f, ") (SEMANTIC-ROLE {}))", c.role)?;
        }
        for p in &self.pps {
            let to = match p.attach_to {
                AttachTo::Verb => "VERB".to_string(),
                AttachTo::Np(slot) => self
                    .fillers(slot)
                    .and_then(|x| x.first())
                    .map(|x| x.concept.clone())
                    .unwrap_or_else(|| format!("{slot:?}")),
            };
            write!(f, "  (PREP {} (PARSE \"{}\") (INTERP", p.prep, p.text)?;
            for x in &p.fillers {
                write!(f, " ({} (Q {}))", x.reading, x.quantifier)?;
            }
            writeln!(f, ") (ATTACH-TO {to}) ({}))", p.meaning.to_uppercase())?;
        }
        for (k, vs) in &self.modifiers {
            let vs: Vec<&str> = vs.iter().map(String::as_str).collect();
            writeln!(f, "  (MODIFIER {k} {})", vs.join(" "))?;
        }
        f.write_str(")")
    }
}
