//! Building objects and a-structures from interpreted clauses.
//!
//! PPs attached to an NP and restrictive relative clauses turn the NP into
//! a defined concept. Every other clause becomes an a-structure; purpose,
//! manner and subordinate clauses are linked to their host's a-structure
//! through a modifier.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::integration::{ensure_defined, Batch};
use crate::interpreter::{
    is_modifier_meaning, AttachTo, Filler, InterpretedClause, InterpretedSentence, Source,
};
use crate::ontology::{
    inverse_relation, AStructure, Binding, CfDefinition, ConceptId, Ontology, Quantifier,
    RelationRestriction,
};
use crate::parser::{Attach, Case, NpSlot};
use crate::verbal_concepts::NO_ROLE;

/// Formation output: the batch for integration plus, for every
/// a-structure in it, the verbal concept it came from.
#[derive(Clone, Debug, Default)]
pub struct Formed {
    pub batch: Batch,
    pub verbal_concepts: Vec<String>,
    /// Parse clause index of each a-structure.
    pub clauses: Vec<usize>,
}

/// Modifier key linking a dependent clause to its host.
pub fn link_key(attach: &Attach) -> Option<&'static str> {
    match attach {
        Attach::Purpose { .. } => Some("related-to"),
        Attach::Manner { .. } => Some("manner"),
        Attach::Subordinate { conj, .. } => Some(match conj.as_str() {
            "because" => "causality",
            "if" => "condition",
            _ => "time",
        }),
        Attach::Main | Attach::Conjoined { .. } | Attach::Relative { .. } => None,
    }
}

fn slot_key(slot: NpSlot) -> (u8, usize) {
    match slot {
        NpSlot::Case(c) => (0, c as usize),
        NpSlot::Pp(i) => (1, i),
    }
}

struct Former<'a> {
    s: &'a InterpretedSentence,
    memo: HashMap<(usize, (u8, usize)), Vec<Filler>>,
    fresh: BTreeSet<ConceptId>,
    objects: BTreeSet<ConceptId>,
}

impl Former<'_> {
    fn clause(&self, ci: usize) -> Result<&InterpretedClause> {
        self.s
            .clause(ci)
            .ok_or_else(|| Error::InterpretFail(format!("clause {ci} was not interpreted")))
    }

    /// Fillers of a constituent after PP and relative-clause restriction.
    fn final_fillers(
        &mut self,
        ci: usize,
        slot: NpSlot,
        onto: &mut Ontology,
    ) -> Result<Vec<Filler>> {
        if let Some(f) = self.memo.get(&(ci, slot_key(slot))) {
            return Ok(f.clone());
        }
        let ic = self.clause(ci)?.clone();
        let out = match slot {
            NpSlot::Case(_) => {
                let c = ic
                    .constituent(slot)
                    .ok_or_else(|| Error::InterpretFail(format!("clause {ci} has no {slot:?}")))?
                    .clone();
                match c.source {
                    Source::Shared { host } => {
                        match self.final_fillers(host, NpSlot::Case(Case::Subj), onto) {
                            Ok(f) => f,
                            Err(_) => c.fillers.clone(),
                        }
                    }
                    Source::Gap { .. } => c.fillers.clone(),
                    Source::Own | Source::Implicit => {
                        let base = c.fillers.clone();
                        self.restrict(ci, slot, base, onto)?
                    }
                }
            }
            NpSlot::Pp(k) => {
                let base = ic
                    .pp(k)
                    .ok_or_else(|| Error::InterpretFail(format!("clause {ci} has no PP {k}")))?
                    .fillers
                    .clone();
                self.restrict(ci, slot, base, onto)?
            }
        };
        self.memo.insert((ci, slot_key(slot)), out.clone());
        Ok(out)
    }

    fn restrict(
        &mut self,
        ci: usize,
        slot: NpSlot,
        base: Vec<Filler>,
        onto: &mut Ontology,
    ) -> Result<Vec<Filler>> {
        let ic = self.clause(ci)?.clone();
        let mut restrictions: Vec<(String, ConceptId)> = Vec::new();
        for p in &ic.pps {
            if p.attach_to == AttachTo::Np(slot) {
                for f in self.final_fillers(ci, NpSlot::Pp(p.index), onto)? {
                    restrictions.push((p.meaning.clone(), f.concept));
                }
            }
        }
        for (r, pc) in self.s.parse.clauses.iter().enumerate() {
            if pc.attach.host() != Some(ci)
                || !matches!(pc.attach, Attach::Relative { slot: s, .. } if s == slot)
            {
                continue;
            }
            let Some(rc) = self.s.clause(r).cloned() else {
                continue;
            };
            let bindings = self.bindings(r, onto)?;
            let gap = rc
                .constituents
                .iter()
                .find(|c| matches!(c.source, Source::Gap { .. }));
            let Some(gap) = gap else { continue };
            let gap_forward = gap.role == "actor"
                || (!bindings.iter().any(|(_, b)| b.role == "actor")
                    && bindings.first().is_some_and(|(s, _)| *s == gap.parse));
            for (s, b) in &bindings {
                if *s == gap.parse {
                    continue;
                }
                let rel = if gap_forward {
                    rc.relation.clone()
                } else {
                    inverse_relation(&rc.relation)
                };
                restrictions.push((rel, b.concept.clone()));
            }
        }
        if restrictions.is_empty() {
            return Ok(base);
        }
        let mut out = Vec::new();
        for f in base {
            self.objects.insert(f.concept.clone());
            for (_, r) in &restrictions {
                self.objects.insert(r.clone());
            }
            let cf = CfDefinition {
                genus: f.concept.clone(),
                restrictions: restrictions
                    .iter()
                    .map(|(rel, filler)| {
                        RelationRestriction::new(
                            rel.clone(),
                            filler.clone(),
                            Quantifier::Existential,
                        )
                    })
                    .collect(),
            };
            let (id, created) = ensure_defined(onto, cf)?;
            if created {
                self.fresh.insert(id.clone());
            }
            out.push(Filler {
                reading: id.clone(),
                concept: id,
                quantifier: f.quantifier,
            });
        }
        Ok(out)
    }

    /// Bindings of a clause in scope order: subject, io, object, pred,
    /// then PPs bound as roles, then implicit roles.
    fn bindings(&mut self, ci: usize, onto: &mut Ontology) -> Result<Vec<(NpSlot, Binding)>> {
        let ic = self.clause(ci)?.clone();
        let rank = |c: &crate::interpreter::InterpConstituent| match (&c.source, c.parse) {
            (Source::Implicit, _) => 9,
            (_, NpSlot::Case(Case::Subj)) => 0,
            (_, NpSlot::Case(Case::Io)) => 1,
            (_, NpSlot::Case(Case::Obj)) => 2,
            (_, NpSlot::Case(Case::Pred)) => 3,
            (_, NpSlot::Pp(_)) => 4,
        };
        let mut cons: Vec<_> = ic
            .constituents
            .iter()
            .filter(|c| c.role != NO_ROLE)
            .collect();
        cons.sort_by_key(|c| rank(c));
        let mut out = Vec::new();
        let mut implicit = Vec::new();
        for c in cons {
            let fillers = if c.source == Source::Implicit {
                c.fillers.clone()
            } else {
                self.final_fillers(ci, c.parse, onto)?
            };
            let target = if c.source == Source::Implicit {
                &mut implicit
            } else {
                &mut out
            };
            for f in fillers {
                target.push((
                    c.parse,
                    Binding {
                        role: c.role.clone(),
                        concept: f.concept,
                        quantifier: f.quantifier,
                    },
                ));
            }
        }
        for p in &ic.pps {
            if p.attach_to != AttachTo::Verb || is_modifier_meaning(&p.meaning) {
                continue;
            }
            for f in self.final_fillers(ci, NpSlot::Pp(p.index), onto)? {
                out.push((
                    NpSlot::Pp(p.index),
                    Binding {
                        role: p.meaning.clone(),
                        concept: f.concept,
                        quantifier: f.quantifier,
                    },
                ));
            }
        }
        out.extend(implicit);
        Ok(out)
    }
}

/// Build the objects and a-structures of a sentence. Clauses that failed
/// interpretation are skipped; so are clauses depending on them.
pub fn form(sentence: &InterpretedSentence, ontology: &mut Ontology) -> Result<Formed> {
    let mut f = Former {
        s: sentence,
        memo: HashMap::new(),
        fresh: BTreeSet::new(),
        objects: BTreeSet::new(),
    };
    let mut batch_index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut formed = Formed::default();
    for ci in emit_order(sentence) {
        let Some(ic) = sentence.clause(ci) else {
            continue;
        };
        if matches!(ic.attach, Attach::Relative { .. }) {
            continue;
        }
        let bindings = match f.bindings(ci, ontology) {
            Ok(b) => b,
            Err(e) => {
                log::debug!("clause {ci} not formed: {e}");
                continue;
            }
        };
        let mut modifiers = ic.modifiers.clone();
        for (child, pc) in sentence.parse.clauses.iter().enumerate() {
            if pc.attach.host() != Some(ci) {
                continue;
            }
            if let (Some(key), Some(k)) = (link_key(&pc.attach), batch_index.get(&child)) {
                modifiers
                    .entry(key.to_string())
                    .or_default()
                    .insert(format!("#{k}"));
            }
        }
        for (_, b) in &bindings {
            f.objects.insert(b.concept.clone());
        }
        batch_index.insert(ci, formed.batch.astructs.len());
        formed.batch.astructs.push(AStructure {
            id: String::new(),
            relation: ic.relation.clone(),
            bindings: bindings.into_iter().map(|(_, b)| b).collect(),
            modifiers,
            derived: None,
        });
        formed.verbal_concepts.push(ic.verbal_concept.clone());
        formed.clauses.push(ci);
    }
    f.objects.extend(f.fresh.iter().cloned());
    formed.batch.objects = f.objects;
    formed.batch.fresh = f.fresh;
    Ok(formed)
}

/// Clauses in text order, except that a linked dependent comes right
/// before the clause pointing at it.
fn emit_order(sentence: &InterpretedSentence) -> Vec<usize> {
    fn visit(ci: usize, s: &InterpretedSentence, seen: &mut Vec<bool>, out: &mut Vec<usize>) {
        if seen[ci] {
            return;
        }
        seen[ci] = true;
        for (child, pc) in s.parse.clauses.iter().enumerate() {
            if pc.attach.host() == Some(ci) && link_key(&pc.attach).is_some() {
                visit(child, s, seen, out);
            }
        }
        out.push(ci);
    }
    let n = sentence.parse.clauses.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for ci in 0..n {
        visit(ci, sentence, &mut seen, &mut out);
    }
    out
}

fn var(i: usize) -> char {
    ['x', 'y', 'z', 'w', 'v', 'u']
        .get(i)
        .copied()
        .unwrap_or('t')
}

/// First-order reading of an a-structure. Quantifier scope runs left to
/// right; an unknown quantifier reads as existential.
pub fn semantics(a: &AStructure) -> String {
    let n = a.bindings.len();
    let args: Vec<String> = a
        .bindings
        .iter()
        .enumerate()
        .map(|(i, b)| {
            if n > 2 {
                format!("{}:{}", b.role, var(i))
            } else {
                var(i).to_string()
            }
        })
        .collect();
    let mut body = format!("{}({})", a.relation.to_uppercase(), args.join(","));
    for (i, b) in a.bindings.iter().enumerate().rev() {
        let v = var(i);
        let c = b.concept.to_uppercase();
        body = match &b.quantifier {
            Quantifier::Universal => format!("∀{v}({c}({v}) ⟹ {body})"),
            Quantifier::Proportion(p) => {
                format!("{} {v}({c}({v}) ⟹ {body})", p.as_str().to_uppercase())
            }
            Quantifier::Existential | Quantifier::Unknown | Quantifier::Count { .. } => {
                format!("∃{v}({c}({v}) ∧ {body})")
            }
        };
    }
    body
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::Proportion;

    fn b(role: &str, c: &str, q: Quantifier) -> Binding {
        Binding {
            role: role.into(),
            concept: c.into(),
            quantifier: q,
        }
    }

    fn astruct(bindings: Vec<Binding>) -> AStructure {
        AStructure {
            id: "@A1".into(),
            relation: "ingest".into(),
            bindings,
            modifiers: BTreeMap::new(),
            derived: None,
        }
    }

    #[test]
    fn semantics_scopes_left_to_right() {
        let a = astruct(vec![
            b("actor", "@X235", Quantifier::Universal),
            b("theme", "monkey", Quantifier::Unknown),
        ]);
        assert_eq!(semantics(&a), "∀x(@X235(x) ⟹ ∃y(MONKEY(y) ∧ INGEST(x,y)))");
        let a = astruct(vec![
            b("actor", "bird", Quantifier::Universal),
            b("theme", "seed", Quantifier::Universal),
        ]);
        assert_eq!(semantics(&a), "∀x(BIRD(x) ⟹ ∀y(SEED(y) ⟹ INGEST(x,y)))");
        let a = astruct(vec![
            b("actor", "bird", Quantifier::Proportion(Proportion::Most)),
            b("theme", "insect", Quantifier::Existential),
        ]);
        assert_eq!(
            semantics(&a),
            "MOST x(BIRD(x) ⟹ ∃y(INSECT(y) ∧ INGEST(x,y)))"
        );
    }

    #[test]
    fn ternary_reading_indexes_roles() {
        let mut a = astruct(vec![
            b("actor", "peter", Quantifier::Universal),
            b("theme", "aspirin", Quantifier::Unknown),
            b("recipient", "mary", Quantifier::Universal),
        ]);
        a.relation = "transfer".into();
        assert_eq!(
            semantics(&a),
            "∀x(PETER(x) ⟹ ∃y(ASPIRIN(y) ∧ ∀z(MARY(z) ⟹ TRANSFER(actor:x,theme:y,recipient:z))))"
        );
    }

    #[test]
    fn link_keys() {
        assert_eq!(link_key(&Attach::Purpose { host: 0 }), Some("related-to"));
        assert_eq!(
            link_key(&Attach::Subordinate {
                host: 0,
                conj: "when".into()
            }),
            Some("time")
        );
        assert_eq!(link_key(&Attach::Conjoined { host: 0 }), None);
    }
}
