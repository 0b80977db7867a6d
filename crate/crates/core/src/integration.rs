//! Recognizer and integrator.
//!
//! Defined concepts are matched against LTM by their cf content, never by
//! name. A-structures are matched by relation, bindings, modifiers and
//! provenance, so feeding the same facts twice changes nothing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use log::debug;

use crate::error::Result;
use crate::ontology::{
    inverse_relation, AStructure, CfDefinition, ConceptId, ConceptSpec, Ontology, SlotEntry,
};

const PROBE: &str = "@probe";

/// An existing concept with the same meaning as `c`, if any.
pub fn recognize(ontology: &Ontology, c: &str) -> Option<ConceptId> {
    ontology
        .placement(c)
        .equivalents
        .into_iter()
        .find(|e| e != PROBE)
}

/// Like [`recognize`] for a definition that is not in LTM yet.
pub fn recognize_definition(
    ontology: &mut Ontology,
    cf: &CfDefinition,
) -> Result<Option<ConceptId>> {
    if cf.restrictions.is_empty() {
        return Ok(Some(cf.genus.clone()));
    }
    ontology.add_concept(ConceptSpec {
        id: Some(PROBE.into()),
        ..ConceptSpec::defined(cf.clone())
    })?;
    let found = recognize(ontology, PROBE);
    ontology.remove_leaf(PROBE);
    Ok(found)
}

/// Recognize a definition or insert and classify it. The flag tells
/// whether a concept was created.
pub fn ensure_defined(ontology: &mut Ontology, cf: CfDefinition) -> Result<(ConceptId, bool)> {
    if let Some(id) = recognize_definition(ontology, &cf)? {
        return Ok((id, false));
    }
    let id = ontology.add_concept(ConceptSpec::defined(cf))?;
    ontology.classify(&id)?;
    debug!("created defined concept {id}");
    Ok((id, true))
}

/// What one batch did to LTM.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntegrationReport {
    /// Objects that LTM held no knowledge about before the batch.
    pub created: BTreeSet<ConceptId>,
    /// Objects that were already known; their slots were merged.
    pub merged: BTreeSet<ConceptId>,
    pub astructs_created: Vec<String>,
    pub astructs_merged: Vec<String>,
    /// Defined concepts whose insertion moved existing is-a links.
    pub rewired: BTreeSet<ConceptId>,
}

impl IntegrationReport {
    pub fn absorb(&mut self, other: IntegrationReport) {
        self.created.extend(other.created);
        self.merged.extend(other.merged);
        self.astructs_created.extend(other.astructs_created);
        self.astructs_merged.extend(other.astructs_merged);
        self.rewired.extend(other.rewired);
        self.merged.retain(|c| !self.created.contains(c));
    }
}

impl fmt::Display for IntegrationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &mut dyn Iterator<Item = &String>| s.cloned().collect::<Vec<_>>().join(" ");
        writeln!(f, "created: {}", join(&mut self.created.iter()))?;
        writeln!(f, "merged: {}", join(&mut self.merged.iter()))?;
        writeln!(
            f,
            "a-structures created: {}",
            join(&mut self.astructs_created.iter())
        )?;
        writeln!(
            f,
            "a-structures merged: {}",
            join(&mut self.astructs_merged.iter())
        )?;
        write!(f, "rewired: {}", join(&mut self.rewired.iter()))
    }
}

/// Concepts LTM already says something about: slot holders, a-structure
/// members and parts of definitions other than `fresh` ones.
fn referenced(ontology: &Ontology, fresh: &BTreeSet<ConceptId>) -> BTreeSet<ConceptId> {
    let mut out = BTreeSet::new();
    for c in ontology.concepts() {
        if c.has_facts() {
            out.insert(c.id.clone());
        }
        if fresh.contains(&c.id) {
            continue;
        }
        if let Some(cf) = &c.cf {
            out.insert(cf.genus.clone());
            out.extend(cf.restrictions.iter().map(|r| r.filler.clone()));
        }
    }
    for a in ontology.astructs() {
        out.extend(a.bindings.iter().map(|b| b.concept.clone()));
    }
    out
}

fn same_fact(a: &AStructure, b: &AStructure) -> bool {
    a.relation == b.relation
        && a.bindings == b.bindings
        && a.modifiers == b.modifiers
        && a.derived == b.derived
}

/// Find an identical a-structure already in LTM.
pub fn find_astruct(ontology: &Ontology, a: &AStructure) -> Option<String> {
    ontology
        .astructs()
        .find(|b| same_fact(a, b))
        .map(|b| b.id.clone())
}

/// Insert an a-structure (or reuse an identical one) and install the slot
/// links between its forward and other bindings. Returns the id and
/// whether it was new.
pub fn integrate_astruct(ontology: &mut Ontology, mut a: AStructure) -> Result<(String, bool)> {
    if let Some(id) = find_astruct(ontology, &a) {
        return Ok((id, false));
    }
    a.id = ontology.fresh_astruct_id();
    let fwd = a.forward_indices();
    for &i in &fwd {
        for (j, b) in a.bindings.iter().enumerate() {
            if fwd.contains(&j) {
                continue;
            }
            let f = &a.bindings[i];
            let more = BTreeSet::from([a.id.clone()]);
            ontology.add_slot(
                &f.concept,
                &a.relation,
                SlotEntry {
                    filler: b.concept.clone(),
                    quantifier: b.quantifier.clone(),
                    more: more.clone(),
                },
            )?;
            ontology.add_slot(
                &b.concept,
                &inverse_relation(&a.relation),
                SlotEntry {
                    filler: f.concept.clone(),
                    quantifier: f.quantifier.clone(),
                    more,
                },
            )?;
        }
    }
    let id = a.id.clone();
    ontology.insert_astruct(a);
    Ok((id, true))
}

/// Output of formation waiting to go into LTM.
#[derive(Clone, Debug, Default)]
pub struct Batch {
    /// Every concept the clauses talk about.
    pub objects: BTreeSet<ConceptId>,
    /// Defined concepts created while forming this batch.
    pub fresh: BTreeSet<ConceptId>,
    /// A-structures in dependency order; modifier values `#<k>` point at
    /// the k-th entry of this list.
    pub astructs: Vec<AStructure>,
}

/// Integrate a formation batch. Returns the report and the LTM ids of the
/// batch's a-structures, index-aligned with `batch.astructs`.
pub fn integrate(
    ontology: &mut Ontology,
    batch: Batch,
) -> Result<(IntegrationReport, Vec<String>)> {
    let known = referenced(ontology, &batch.fresh);
    let mut report = IntegrationReport::default();
    for c in &batch.objects {
        if known.contains(c) {
            report.merged.insert(c.clone());
        } else {
            report.created.insert(c.clone());
        }
    }
    for c in &batch.fresh {
        if ontology.get(c).is_some_and(|x| !x.children.is_empty()) {
            report.rewired.insert(c.clone());
        }
    }
    let mut ids: Vec<String> = Vec::new();
    for mut a in batch.astructs {
        let mut mods: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (k, vs) in a.modifiers {
            let vs = vs
                .into_iter()
                .map(
                    |v| match v.strip_prefix('#').and_then(|n| n.parse::<usize>().ok()) {
                        Some(n) if n < ids.len() => ids[n].clone(),
                        _ => v,
                    },
                )
                .collect();
            mods.insert(k, vs);
        }
        a.modifiers = mods;
        let (id, new) = integrate_astruct(ontology, a)?;
        if new {
            report.astructs_created.push(id.clone());
        } else {
            report.astructs_merged.push(id.clone());
        }
        ids.push(id);
    }
    Ok((report, ids))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{Binding, Quantifier, RelationRestriction};

    fn zoo() -> Ontology {
        Ontology::from_text(
            "o",
            "concept animal isa entity\nconcept mammal isa animal\nconcept lion isa mammal\n\
             concept habitat isa entity\nconcept sea isa habitat\nconcept eagle isa animal\n\
             concept forest isa habitat\nconcept rain-forest isa forest\nconcept monkey isa mammal\n",
        )
        .unwrap()
    }

    fn cf(genus: &str, rs: &[(&str, &str)]) -> CfDefinition {
        CfDefinition {
            genus: genus.into(),
            restrictions: rs
                .iter()
                .map(|(r, f)| RelationRestriction::new(*r, *f, Quantifier::Existential))
                .collect(),
        }
    }

    #[test]
    fn recognizer_matches_by_content() {
        let mut o = zoo();
        let (a, new) = ensure_defined(&mut o, cf("mammal", &[("live-in", "sea")])).unwrap();
        assert!(new);
        let (b, new) = ensure_defined(&mut o, cf("mammal", &[("live-in", "sea")])).unwrap();
        assert!(!new);
        assert_eq!(a, b);
        assert_eq!(
            recognize_definition(&mut o, &cf("lion", &[("live-in", "sea")])).unwrap(),
            None
        );
        assert!(!o.contains(PROBE));
        assert_eq!(
            ensure_defined(&mut o, cf("lion", &[])).unwrap(),
            ("lion".to_string(), false)
        );
    }

    #[test]
    fn restriction_order_does_not_matter() {
        let mut o = zoo();
        let (a, _) = ensure_defined(
            &mut o,
            cf("eagle", &[("live-in", "forest"), ("ingest", "monkey")]),
        )
        .unwrap();
        let (b, new) = ensure_defined(
            &mut o,
            cf("eagle", &[("ingest", "monkey"), ("live-in", "forest")]),
        )
        .unwrap();
        assert_eq!(a, b);
        assert!(!new);
    }

    #[test]
    fn insertion_rewires_links() {
        let mut o = zoo();
        let (low, _) = ensure_defined(&mut o, cf("eagle", &[("live-in", "rain-forest")])).unwrap();
        let (mid, _) = ensure_defined(&mut o, cf("eagle", &[("live-in", "forest")])).unwrap();
        assert!(o.get(&low).unwrap().parents.contains(&mid));
        assert!(!o.get(&low).unwrap().parents.contains("eagle"));
    }

    fn fact(actor: &str, theme: &str) -> AStructure {
        AStructure {
            id: String::new(),
            relation: "ingest".into(),
            bindings: vec![
                Binding {
                    role: "actor".into(),
                    concept: actor.into(),
                    quantifier: Quantifier::Universal,
                },
                Binding {
                    role: "theme".into(),
                    concept: theme.into(),
                    quantifier: Quantifier::Unknown,
                },
            ],
            modifiers: BTreeMap::new(),
            derived: None,
        }
    }

    #[test]
    fn integration_is_idempotent() {
        let mut o = zoo();
        let batch = Batch {
            objects: ["eagle".to_string(), "monkey".to_string()].into(),
            fresh: BTreeSet::new(),
            astructs: vec![fact("eagle", "monkey")],
        };
        let (r1, ids1) = integrate(&mut o, batch.clone()).unwrap();
        assert_eq!(r1.created.len(), 2);
        let dump = o.dump();
        let (r2, ids2) = integrate(&mut o, batch).unwrap();
        assert!(r2.created.is_empty());
        assert_eq!(r2.merged.len(), 2);
        assert_eq!(ids1, ids2);
        assert_eq!(dump, o.dump());
        assert!(o.check().is_ok());
        let slot = o.get("monkey").unwrap().slot("ingest%by");
        assert_eq!(slot[0].filler, "eagle");
        assert!(slot[0].more.contains(&ids1[0]));
    }
}
