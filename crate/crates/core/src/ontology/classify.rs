//! Structural subsumption and the classifier.
//!
//! A concept is normalized into its primitive atoms and the restrictions it
//! collects along its genus chain. `a` subsumes `b` when every atom of `a`
//! is reached by some atom of `b`, and every restriction of `a` is matched
//! by a restriction of `b` on the same relation with a more specific filler
//! and an at-least-as-strong quantifier. `$more` links never take part.

use std::collections::BTreeSet;

use log::warn;

use super::{ConceptId, Ontology, RelationRestriction, TOP};
use crate::error::{Error, Result};

/// Where the classifier put (or would put) a concept.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Placement {
    /// Most specific strict subsumers.
    pub subsumers: BTreeSet<ConceptId>,
    /// Most general strict subsumees.
    pub subsumees: BTreeSet<ConceptId>,
    /// Concepts with the same meaning.
    pub equivalents: BTreeSet<ConceptId>,
}

impl Ontology {
    /// Primitive atoms of a concept: itself if primitive, else its genus atoms.
    pub fn atoms(&self, id: &str) -> BTreeSet<ConceptId> {
        let mut cur = id;
        let mut guard = 0;
        while let Some(cf) = self.get(cur).and_then(|c| c.cf.as_ref()) {
            cur = &cf.genus;
            guard += 1;
            if guard > self.len() {
                break;
            }
        }
        BTreeSet::from([cur.to_string()])
    }

    /// All restrictions along the genus chain.
    pub fn restrictions(&self, id: &str) -> Vec<RelationRestriction> {
        let mut out = Vec::new();
        let mut cur = id;
        let mut guard = 0;
        while let Some(cf) = self.get(cur).and_then(|c| c.cf.as_ref()) {
            out.extend(cf.restrictions.iter().cloned());
            cur = &cf.genus;
            guard += 1;
            if guard > self.len() {
                break;
            }
        }
        out
    }

    pub fn subsumes(&self, a: &str, b: &str) -> bool {
        if a == b {
            return self.contains(a);
        }
        if !self.contains(a) || !self.contains(b) {
            return false;
        }
        let atoms_b = self.atoms(b);
        let atoms_ok = self
            .atoms(a)
            .iter()
            .all(|p| atoms_b.iter().any(|q| self.is_subclass(q, p)));
        if !atoms_ok {
            return false;
        }
        let restr_b = self.restrictions(b);
        self.restrictions(a).iter().all(|ra| {
            restr_b.iter().any(|rb| {
                rb.relation == ra.relation
                    && self.is_subclass(&rb.filler, &ra.filler)
                    && rb.quantifier.at_least_as_strong_as(&ra.quantifier)
            })
        })
    }

    pub fn equivalent(&self, a: &str, b: &str) -> bool {
        self.subsumes(a, b) && self.subsumes(b, a)
    }

    /// Compute where `c` belongs without touching the graph.
    pub fn placement(&self, c: &str) -> Placement {
        let mut above = BTreeSet::new();
        let mut below = BTreeSet::new();
        let mut equivalents = BTreeSet::new();
        for d in self.ids() {
            if d == c {
                continue;
            }
            let up = self.subsumes(d, c);
            let down = self.subsumes(c, d);
            match (up, down) {
                (true, true) => {
                    equivalents.insert(d.clone());
                }
                (true, false) => {
                    above.insert(d.clone());
                }
                (false, true) => {
                    below.insert(d.clone());
                }
                _ => {}
            }
        }
        let strictly = |x: &str, y: &str| self.subsumes(x, y) && !self.subsumes(y, x);
        let subsumers = above
            .iter()
            .filter(|d| !above.iter().any(|e| e != *d && strictly(d, e)))
            .cloned()
            .collect();
        let subsumees = below
            .iter()
            .filter(|d| !below.iter().any(|e| e != *d && strictly(e, d)))
            .cloned()
            .collect();
        Placement {
            subsumers,
            subsumees,
            equivalents,
        }
    }

    /// Place a defined concept at its proper position and reorganize the
    /// links around it. Direct links from a new parent to a new child are
    /// removed since the path now runs through `c`.
    pub fn classify(&mut self, c: &str) -> Result<Placement> {
        let concept = self.concept(c)?;
        if concept.cf.is_none() {
            return Err(Error::BadDefinition(
                c.to_string(),
                "not a defined concept".into(),
            ));
        }
        self.detach(c);
        let placement = self.placement(c);
        let parents: Vec<ConceptId> = if placement.subsumers.is_empty() {
            vec![TOP.to_string()]
        } else {
            placement.subsumers.iter().cloned().collect()
        };
        for p in &parents {
            self.add_parent(c, p)?;
        }
        for t in &placement.subsumees {
            for s in &parents {
                self.remove_parent(t, s);
            }
            if let Err(e) = self.add_parent(t, c) {
                warn!("classifier skipped link {t} -> {c}: {e}");
            }
        }
        Ok(placement)
    }

    /// Remove `c` from the graph, bridging its children to its parents so
    /// reachability among the remaining concepts is unchanged.
    fn detach(&mut self, c: &str) {
        let Some(concept) = self.get(c) else { return };
        let parents: Vec<_> = concept.parents.iter().cloned().collect();
        let children: Vec<_> = concept.children.iter().cloned().collect();
        for p in &parents {
            self.remove_parent(c, p);
        }
        for ch in &children {
            self.remove_parent(ch, c);
            for p in &parents {
                if !self.is_subclass(ch, p) {
                    let _ = self.add_parent(ch, p);
                }
            }
        }
    }
}
