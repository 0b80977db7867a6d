//! Addition rules: one-step derivations from freshly formed a-structures.
//!
//! A rule fires once per combination of bindings meeting its antecedent
//! (coordinated objects give one derivation each). Derived a-structures
//! carry the rule id and source a-structure, and never trigger rules
//! themselves.

use std::collections::BTreeMap;

use log::debug;

use crate::error::Result;
use crate::integration::integrate_astruct;
use crate::ontology::{
    is_astruct_id, AStructure, Binding, ConceptId, Ontology, Provenance, Quantifier,
};
use crate::verbal_concepts::{AdditionRule, RoleRef, VerbalHierarchy};

/// Role names given to the arguments of a derived relation, by position.
const DERIVED_ROLES: &[&str] = &["actor", "theme"];

fn role_matches(a: &AStructure, role: &str, concept: &str, onto: &Ontology) -> bool {
    a.fillers(role)
        .any(|b| onto.is_subclass(&b.concept, concept))
        || a.modifier(role)
            .any(|v| !v.starts_with('#') && !is_astruct_id(v) && onto.is_subclass(v, concept))
}

/// The most specific fillers of `relation` restrictions on `concept`.
fn path_fillers(onto: &Ontology, concept: &str, relation: &str) -> Vec<ConceptId> {
    let all: Vec<ConceptId> = onto
        .restrictions(concept)
        .into_iter()
        .filter(|r| r.relation == relation)
        .map(|r| r.filler)
        .collect();
    let mut out: Vec<ConceptId> = Vec::new();
    for f in &all {
        let more_specific = all
            .iter()
            .any(|g| g != f && onto.is_subclass(g, f) && !onto.is_subclass(f, g));
        if !more_specific && !out.contains(f) {
            out.push(f.clone());
        }
    }
    out
}

fn resolve_arg(
    arg: &RoleRef,
    chosen: &BTreeMap<String, Binding>,
    onto: &Ontology,
) -> Vec<(ConceptId, Quantifier)> {
    let Some(b) = chosen.get(&arg.role) else {
        return Vec::new();
    };
    match &arg.path {
        None => vec![(b.concept.clone(), b.quantifier.clone())],
        Some(rel) => path_fillers(onto, &b.concept, rel)
            .into_iter()
            .map(|c| (c, b.quantifier.clone()))
            .collect(),
    }
}

fn product<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for l in lists {
        out = out
            .iter()
            .flat_map(|prefix| {
                l.iter().map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// What one rule derives from `a`, without touching LTM.
pub fn apply_rule(rule: &AdditionRule, a: &AStructure, onto: &Ontology) -> Vec<AStructure> {
    if let Some((role, concept)) = &rule.guard {
        if a.fillers(role)
            .any(|b| onto.is_subclass(&b.concept, concept))
        {
            let overridden = rule
                .override_if
                .as_ref()
                .is_some_and(|(r, c)| role_matches(a, r, c, onto));
            if !overridden {
                debug!("{} blocked on {} by {role}:{concept}", rule.id, a.id);
                return Vec::new();
            }
        }
    }
    let mut per_role: Vec<Vec<Binding>> = Vec::new();
    for (role, concept) in &rule.antecedent {
        let ok: Vec<Binding> = a
            .fillers(role)
            .filter(|b| onto.is_subclass(&b.concept, concept))
            .cloned()
            .collect();
        if ok.is_empty() {
            debug!(
                "{} rejected on {}: no {role} under {concept}",
                rule.id, a.id
            );
            return Vec::new();
        }
        per_role.push(ok);
    }
    let mut out = Vec::new();
    for combo in product(&per_role) {
        let chosen: BTreeMap<String, Binding> = rule
            .antecedent
            .iter()
            .map(|(r, _)| r.clone())
            .zip(combo)
            .collect();
        let args: Vec<Vec<(ConceptId, Quantifier)>> = rule
            .args
            .iter()
            .map(|arg| resolve_arg(arg, &chosen, onto))
            .collect();
        for picked in product(&args) {
            let d = AStructure {
                id: String::new(),
                relation: rule.relation.clone(),
                bindings: picked
                    .into_iter()
                    .enumerate()
                    .map(|(i, (concept, quantifier))| Binding {
                        role: DERIVED_ROLES
                            .get(i)
                            .map_or_else(|| format!("arg{i}"), |r| r.to_string()),
                        concept,
                        quantifier,
                    })
                    .collect(),
                modifiers: BTreeMap::new(),
                derived: Some(Provenance {
                    rule: rule.id.clone(),
                    source: a.id.clone(),
                }),
            };
            if !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out
}

/// Everything the inherited rules of `vc` derive from `a`.
pub fn derive(
    verbal: &VerbalHierarchy,
    vc: &str,
    a: &AStructure,
    onto: &Ontology,
) -> Vec<AStructure> {
    if a.derived.is_some() {
        return Vec::new();
    }
    let mut out: Vec<AStructure> = Vec::new();
    for rule in verbal.inherited_addition_rules(vc) {
        for d in apply_rule(rule, a, onto) {
            if !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out
}

/// Derive from an integrated a-structure and integrate the results.
/// Returns the ids of the derived a-structures.
pub fn apply_addition_rules(
    onto: &mut Ontology,
    verbal: &VerbalHierarchy,
    vc: &str,
    astruct_id: &str,
) -> Result<Vec<String>> {
    let Some(a) = onto.astruct(astruct_id).cloned() else {
        return Ok(Vec::new());
    };
    let mut ids = Vec::new();
    for d in derive(verbal, vc, &a, onto) {
        let (id, _) = integrate_astruct(onto, d)?;
        ids.push(id);
    }
    Ok(ids)
}
