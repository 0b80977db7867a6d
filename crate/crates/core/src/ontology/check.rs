//! Structural invariants over the whole store.

use std::collections::{BTreeMap, BTreeSet};

use super::{inverse_relation, Ontology, INVERSE_SUFFIX, TOP};

#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub acyclic: Vec<String>,
    pub link_symmetry: Vec<String>,
    pub references: Vec<String>,
    pub astruct_links: Vec<String>,
    pub duplicate_definitions: Vec<String>,
}

impl CheckReport {
    pub fn is_ok(&self) -> bool {
        self.violations().next().is_none()
    }

    pub fn violations(&self) -> impl Iterator<Item = &String> {
        self.acyclic
            .iter()
            .chain(&self.link_symmetry)
            .chain(&self.references)
            .chain(&self.astruct_links)
            .chain(&self.duplicate_definitions)
    }
}

impl Ontology {
    pub fn check(&self) -> CheckReport {
        let mut r = CheckReport::default();
        self.check_acyclic(&mut r);
        self.check_links(&mut r);
        self.check_astructs(&mut r);
        self.check_duplicates(&mut r);
        r
    }

    fn check_acyclic(&self, r: &mut CheckReport) {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state: BTreeMap<&str, u8> = BTreeMap::new();
        for start in self.ids() {
            if state.get(start.as_str()).copied().unwrap_or(0) != 0 {
                continue;
            }
            let mut stack: Vec<(&str, Vec<&str>)> = vec![(start, self.parents_of(start))];
            state.insert(start, 1);
            while let Some((node, pending)) = stack.last_mut() {
                match pending.pop() {
                    Some(p) => match state.get(p).copied().unwrap_or(0) {
                        0 => {
                            state.insert(p, 1);
                            let ps = self.parents_of(p);
                            stack.push((p, ps));
                        }
                        1 => r.acyclic.push(format!("cycle through {node} -> {p}")),
                        _ => {}
                    },
                    None => {
                        state.insert(node, 2);
                        stack.pop();
                    }
                }
            }
        }
        for c in self.concepts() {
            if c.id != TOP && c.parents.is_empty() {
                r.acyclic.push(format!("{} has no parent", c.id));
            }
        }
    }

    fn parents_of(&self, id: &str) -> Vec<&str> {
        self.get(id)
            .map(|c| c.parents.iter().map(String::as_str).collect())
            .unwrap_or_default()
    }

    fn check_links(&self, r: &mut CheckReport) {
        for c in self.concepts() {
            for p in &c.parents {
                match self.get(p) {
                    None => r
                        .references
                        .push(format!("{} has unknown parent {p}", c.id)),
                    Some(pc) if !pc.children.contains(&c.id) => r
                        .link_symmetry
                        .push(format!("{p} does not list child {}", c.id)),
                    _ => {}
                }
            }
            for ch in &c.children {
                match self.get(ch) {
                    None => r
                        .references
                        .push(format!("{} has unknown child {ch}", c.id)),
                    Some(cc) if !cc.parents.contains(&c.id) => r
                        .link_symmetry
                        .push(format!("{ch} does not list parent {}", c.id)),
                    _ => {}
                }
            }
            if let Some(cf) = &c.cf {
                for f in std::iter::once(&cf.genus).chain(cf.restrictions.iter().map(|x| &x.filler))
                {
                    if !self.contains(f) {
                        r.references
                            .push(format!("{} cf refers to unknown {f}", c.id));
                    }
                }
            }
            for (rel, entries) in c.slots.iter().chain(&c.inverse_slots) {
                for e in entries {
                    if !self.contains(&e.filler) {
                        r.references
                            .push(format!("{}.{rel} refers to unknown {}", c.id, e.filler));
                    }
                    for m in &e.more {
                        if self.astruct(m).is_none() {
                            r.references
                                .push(format!("{}.{rel} refers to unknown a-structure {m}", c.id));
                        }
                    }
                    // Every forward entry has a mirrored inverse entry.
                    let mirror = inverse_relation(rel);
                    let back = self
                        .get(&e.filler)
                        .map(|f| f.slot(&mirror).iter().any(|x| x.filler == c.id))
                        .unwrap_or(false);
                    if !back {
                        r.link_symmetry.push(format!(
                            "{}.{rel} -> {} has no {mirror} entry back",
                            c.id, e.filler
                        ));
                    }
                }
            }
        }
    }

    fn check_astructs(&self, r: &mut CheckReport) {
        let mut listed: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for c in self.concepts() {
            for entries in c.slots.values().chain(c.inverse_slots.values()) {
                for e in entries {
                    for m in &e.more {
                        listed.entry(m.as_str()).or_default().insert(c.id.as_str());
                    }
                }
            }
        }
        for a in self.astructs() {
            for b in &a.bindings {
                if !self.contains(&b.concept) {
                    r.references
                        .push(format!("{} binds unknown concept {}", a.id, b.concept));
                }
            }
            for v in a.modifiers.values().flatten() {
                if super::is_astruct_id(v) && self.astruct(v).is_none() {
                    r.references
                        .push(format!("{} links unknown a-structure {v}", a.id));
                }
            }
            if a.bindings.len() < 2 {
                continue;
            }
            let fwd = a.forward_indices();
            for (i, b) in a.bindings.iter().enumerate() {
                let rel = if fwd.contains(&i) {
                    a.relation.clone()
                } else {
                    format!("{}{INVERSE_SUFFIX}", a.relation)
                };
                let points_back = self
                    .get(&b.concept)
                    .map(|c| c.slot(&rel).iter().any(|e| e.more.contains(&a.id)))
                    .unwrap_or(false);
                if !points_back {
                    r.astruct_links
                        .push(format!("{} is not linked from {}.{rel}", a.id, b.concept));
                }
            }
            for holder in listed.get(a.id.as_str()).into_iter().flatten() {
                if !a.bindings.iter().any(|b| b.concept == *holder) {
                    r.astruct_links
                        .push(format!("{holder} links {} but is not bound in it", a.id));
                }
            }
        }
        for id in listed.keys() {
            if self.astruct(id).is_none() {
                r.astruct_links.push(format!("dangling $more link {id}"));
            }
        }
    }

    fn check_duplicates(&self, r: &mut CheckReport) {
        let defined: Vec<&str> = self
            .concepts()
            .filter(|c| c.is_defined())
            .map(|c| c.id.as_str())
            .collect();
        for (i, a) in defined.iter().enumerate() {
            for b in &defined[i + 1..] {
                if self.equivalent(a, b) {
                    r.duplicate_definitions
                        .push(format!("{a} and {b} are equivalent"));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{ConceptSpec, SlotEntry};
    use super::*;

    #[test]
    fn fresh_store_passes() {
        let mut o = Ontology::new();
        o.add_concept(ConceptSpec::primitive("a", &[TOP])).unwrap();
        assert!(o.check().is_ok());
    }

    #[test]
    fn one_sided_slot_is_reported() {
        let mut o = Ontology::new();
        o.add_concept(ConceptSpec::primitive("a", &[TOP])).unwrap();
        o.add_concept(ConceptSpec::primitive("b", &[TOP])).unwrap();
        o.add_slot(
            "a",
            "ingest",
            SlotEntry {
                filler: "b".into(),
                quantifier: crate::ontology::Quantifier::Unknown,
                more: Default::default(),
            },
        )
        .unwrap();
        let report = o.check();
        assert!(!report.link_symmetry.is_empty());
    }

    #[test]
    fn broken_child_link_is_reported() {
        let mut o = Ontology::new();
        o.add_concept(ConceptSpec::primitive("a", &[TOP])).unwrap();
        o.concepts.get_mut(TOP).unwrap().children.remove("a");
        assert!(!o.check().link_symmetry.is_empty());
    }
}
