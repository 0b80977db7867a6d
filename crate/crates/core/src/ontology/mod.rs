//! Long-term memory (LTM).
//!
//! The store holds every concept the reader knows about, the is-a graph
//! between them, relation slots pointing at fillers, and the a-structures
//! (reified relation instances) those slots refer to through `$more`.
//! Mutations happen on a single writer; read-only queries borrow `&self`.

pub mod check;
pub mod classify;
pub mod text;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use log::warn;

use crate::error::{Error, Result};

pub type ConceptId = String;

/// Root of the is-a graph.
pub const TOP: &str = "entity";

/// Relations every store knows about. Vocabulary can be extended at load time.
pub const BASE_RELATIONS: &[&str] = &[
    "ingest",
    "live-in",
    "inhabit",
    "has-enemy",
    "harm",
    "kill",
    "assist",
    "help",
    "related-to",
    "at-loc",
    "at-time",
];

/// Suffix naming the inverse direction of a relation slot.
pub const INVERSE_SUFFIX: &str = "%by";

pub fn inverse_relation(relation: &str) -> String {
    match relation.strip_suffix(INVERSE_SUFFIX) {
        Some(base) => base.to_string(),
        None => format!("{relation}{INVERSE_SUFFIX}"),
    }
}

pub fn base_relation(relation: &str) -> &str {
    relation.strip_suffix(INVERSE_SUFFIX).unwrap_or(relation)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Proportion {
    Most,
    Mostly,
    Chiefly,
    Some,
    Sometimes,
    Rarely,
}

impl Proportion {
    pub fn as_str(self) -> &'static str {
        match self {
            Proportion::Most => "most",
            Proportion::Mostly => "mostly",
            Proportion::Chiefly => "chiefly",
            Proportion::Some => "some",
            Proportion::Sometimes => "sometimes",
            Proportion::Rarely => "rarely",
        }
    }

    pub fn from_word(word: &str) -> Option<Self> {
        Some(match word {
            "most" | "many" => Proportion::Most,
            "mostly" | "usually" | "often" => Proportion::Mostly,
            "chiefly" | "mainly" => Proportion::Chiefly,
            "some" | "several" => Proportion::Some,
            "sometimes" | "occasionally" => Proportion::Sometimes,
            "rarely" | "seldom" => Proportion::Rarely,
            _ => return None,
        })
    }
}

/// How many members of a class take part in a fact.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Universal,
    Existential,
    /// Not stated in the text; read as existential by question answering.
    Unknown,
    Proportion(Proportion),
    Count {
        amount: String,
        unit: Option<String>,
    },
}

impl Quantifier {
    /// Rank used when one quantifier has to be at least as strong as another.
    ///
    /// universal > most/mostly/chiefly > existential (and some, sometimes,
    /// rarely, counts) > unknown.
    pub fn strength(&self) -> u8 {
        match self {
            Quantifier::Universal => 4,
            Quantifier::Proportion(Proportion::Most | Proportion::Mostly | Proportion::Chiefly) => {
                3
            }
            Quantifier::Existential | Quantifier::Proportion(_) | Quantifier::Count { .. } => 2,
            Quantifier::Unknown => 1,
        }
    }

    pub fn at_least_as_strong_as(&self, other: &Quantifier) -> bool {
        self.strength() >= other.strength()
    }

    /// The stronger of two quantifiers; ties keep `self`.
    pub fn stronger<'a>(&'a self, other: &'a Quantifier) -> &'a Quantifier {
        if other.strength() > self.strength() {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantifier::Universal => f.write_str("all"),
            Quantifier::Existential => f.write_str("exists"),
            Quantifier::Unknown => f.write_str("?"),
            Quantifier::Proportion(p) => f.write_str(p.as_str()),
            Quantifier::Count { amount, unit: None } => f.write_str(amount),
            Quantifier::Count {
                amount,
                unit: Some(u),
            } => write!(f, "{amount}:{u}"),
        }
    }
}

impl FromStr for Quantifier {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "all" => return Ok(Quantifier::Universal),
            "exists" => return Ok(Quantifier::Existential),
            "?" => return Ok(Quantifier::Unknown),
            _ => {}
        }
        if let Some(p) = Proportion::from_word(s).filter(|p| p.as_str() == s) {
            return Ok(Quantifier::Proportion(p));
        }
        let (amount, unit) = match s.split_once(':') {
            Some((a, u)) => (a, Some(u.to_string())),
            None => (s, None),
        };
        if !amount.is_empty() && amount.chars().all(|c| c.is_ascii_digit() || c == '.') {
            return Ok(Quantifier::Count {
                amount: amount.to_string(),
                unit,
            });
        }
        Err(format!("bad quantifier `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationRestriction {
    pub relation: String,
    pub filler: ConceptId,
    pub quantifier: Quantifier,
}

impl RelationRestriction {
    pub fn new(
        relation: impl Into<String>,
        filler: impl Into<String>,
        quantifier: Quantifier,
    ) -> Self {
        RelationRestriction {
            relation: relation.into(),
            filler: filler.into(),
            quantifier,
        }
    }
}

/// Necessary-and-sufficient membership conditions of a defined concept:
/// `C(x) <=> Genus(x) and R1(x) and ... and Rn(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CfDefinition {
    pub genus: ConceptId,
    pub restrictions: Vec<RelationRestriction>,
}

/// One entry of a relation slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotEntry {
    pub filler: ConceptId,
    pub quantifier: Quantifier,
    /// A-structures that carry further detail about this entry.
    pub more: BTreeSet<String>,
}

/// How a primitive concept came to exist.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    /// Seeded or taught through the lexicon.
    #[default]
    Lexical,
    /// Made up for an unknown word met while reading.
    Provisional,
    /// Two noun-group items glued together because no relation paired them.
    Hyphenated,
    /// A capitalized or quoted name.
    Named,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Origin::Lexical => "lexical",
            Origin::Provisional => "provisional",
            Origin::Hyphenated => "hyphenated",
            Origin::Named => "named",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "lexical" => Origin::Lexical,
            "provisional" => Origin::Provisional,
            "hyphenated" => Origin::Hyphenated,
            "named" => Origin::Named,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Concept {
    pub id: ConceptId,
    pub names: BTreeSet<String>,
    pub origin: Origin,
    pub parents: BTreeSet<ConceptId>,
    pub children: BTreeSet<ConceptId>,
    pub cf: Option<CfDefinition>,
    pub slots: BTreeMap<String, Vec<SlotEntry>>,
    pub inverse_slots: BTreeMap<String, Vec<SlotEntry>>,
}

impl Concept {
    pub fn is_defined(&self) -> bool {
        self.cf.is_some()
    }

    /// Forward or inverse slot by name (`ingest` or `ingest%by`).
    pub fn slot(&self, relation: &str) -> &[SlotEntry] {
        let map = if relation.ends_with(INVERSE_SUFFIX) {
            &self.inverse_slots
        } else {
            &self.slots
        };
        map.get(relation).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn has_facts(&self) -> bool {
        !self.slots.is_empty() || !self.inverse_slots.is_empty()
    }
}

/// Input to [`Ontology::add_concept`].
#[derive(Clone, Debug, Default)]
pub struct ConceptSpec {
    /// `None` asks for a machine id `@X<n>`.
    pub id: Option<ConceptId>,
    pub names: Vec<String>,
    pub parents: Vec<ConceptId>,
    pub cf: Option<CfDefinition>,
    pub origin: Origin,
}

impl ConceptSpec {
    pub fn primitive(id: impl Into<String>, parents: &[&str]) -> Self {
        ConceptSpec {
            id: Some(id.into()),
            parents: parents.iter().map(|p| p.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn defined(cf: CfDefinition) -> Self {
        ConceptSpec {
            cf: Some(cf),
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binding {
    pub role: String,
    pub concept: ConceptId,
    pub quantifier: Quantifier,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub rule: String,
    pub source: String,
}

/// A reified n-ary relation instance.
///
/// Binding order is quantifier scope order (left to right). Modifier values
/// that start with `@A` are links to other a-structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AStructure {
    pub id: String,
    pub relation: String,
    pub bindings: Vec<Binding>,
    pub modifiers: BTreeMap<String, BTreeSet<String>>,
    pub derived: Option<Provenance>,
}

impl AStructure {
    /// Bindings that hold the forward slot: actors, or the first binding
    /// when nothing is bound as actor.
    pub fn forward_indices(&self) -> Vec<usize> {
        let actors: Vec<usize> = self
            .bindings
            .iter()
            .enumerate()
            .filter(|(_, b)| b.role == "actor")
            .map(|(i, _)| i)
            .collect();
        if actors.is_empty() && !self.bindings.is_empty() {
            vec![0]
        } else {
            actors
        }
    }

    pub fn modifier(&self, key: &str) -> impl Iterator<Item = &String> {
        self.modifiers.get(key).into_iter().flatten()
    }

    pub fn fillers(&self, role: &str) -> impl Iterator<Item = &Binding> {
        let role = role.to_string();
        self.bindings.iter().filter(move |b| b.role == role)
    }
}

pub fn is_astruct_id(s: &str) -> bool {
    s.starts_with("@A")
}

#[derive(Clone, Debug)]
pub struct Ontology {
    concepts: BTreeMap<ConceptId, Concept>,
    astructs: BTreeMap<String, AStructure>,
    relations: BTreeSet<String>,
    next_concept: u64,
    next_astruct: u64,
}

impl Default for Ontology {
    fn default() -> Self {
        Self::new()
    }
}

impl Ontology {
    pub fn new() -> Self {
        let mut concepts = BTreeMap::new();
        concepts.insert(
            TOP.to_string(),
            Concept {
                id: TOP.to_string(),
                names: [TOP.to_string()].into(),
                ..Default::default()
            },
        );
        Ontology {
            concepts,
            astructs: BTreeMap::new(),
            relations: BASE_RELATIONS.iter().map(|r| r.to_string()).collect(),
            next_concept: 1,
            next_astruct: 1,
        }
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.len() <= 1
    }

    pub fn contains(&self, id: &str) -> bool {
        self.concepts.contains_key(id)
    }

    pub fn get(&self, id: &str) -> Option<&Concept> {
        self.concepts.get(id)
    }

    pub fn concept(&self, id: &str) -> Result<&Concept> {
        self.concepts
            .get(id)
            .ok_or_else(|| Error::UnknownConcept(id.to_string()))
    }

    pub(crate) fn concept_mut(&mut self, id: &str) -> Result<&mut Concept> {
        self.concepts
            .get_mut(id)
            .ok_or_else(|| Error::UnknownConcept(id.to_string()))
    }

    pub fn concepts(&self) -> impl Iterator<Item = &Concept> {
        self.concepts.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = &ConceptId> {
        self.concepts.keys()
    }

    pub fn astruct(&self, id: &str) -> Option<&AStructure> {
        self.astructs.get(id)
    }

    pub fn astructs(&self) -> impl Iterator<Item = &AStructure> {
        self.astructs.values()
    }

    pub fn relations(&self) -> impl Iterator<Item = &String> {
        self.relations.iter()
    }

    pub fn declare_relation(&mut self, relation: &str) {
        self.relations.insert(base_relation(relation).to_string());
    }

    pub fn knows_relation(&self, relation: &str) -> bool {
        self.relations.contains(base_relation(relation))
    }

    /// Look a concept up by id or by one of its surface names.
    pub fn find(&self, name: &str) -> Option<&ConceptId> {
        if let Some((id, _)) = self.concepts.get_key_value(name) {
            return Some(id);
        }
        self.concepts
            .values()
            .find(|c| c.names.contains(name))
            .map(|c| &c.id)
    }

    fn fresh_concept_id(&mut self) -> ConceptId {
        loop {
            let id = format!("@X{}", self.next_concept);
            self.next_concept += 1;
            if !self.concepts.contains_key(&id) {
                return id;
            }
        }
    }

    pub(crate) fn fresh_astruct_id(&mut self) -> String {
        loop {
            let id = format!("@A{}", self.next_astruct);
            self.next_astruct += 1;
            if !self.astructs.contains_key(&id) {
                return id;
            }
        }
    }

    fn validate_cf(&self, owner: &str, cf: &CfDefinition) -> Result<()> {
        if !self.contains(&cf.genus) {
            return Err(Error::UnknownConcept(cf.genus.clone()));
        }
        if cf.restrictions.is_empty() && cf.genus == TOP {
            return Err(Error::BadDefinition(
                owner.to_string(),
                "no restrictions and genus is the root".into(),
            ));
        }
        for r in &cf.restrictions {
            if !self.knows_relation(&r.relation) {
                return Err(Error::UnknownRelation(r.relation.clone()));
            }
            if !self.contains(&r.filler) {
                return Err(Error::UnknownConcept(r.filler.clone()));
            }
        }
        Ok(())
    }

    /// Add a concept. Defined concepts without explicit parents start under
    /// their genus; call [`Ontology::classify`] to place them properly.
    pub fn add_concept(&mut self, spec: ConceptSpec) -> Result<ConceptId> {
        if let Some(id) = &spec.id {
            if self.contains(id) {
                return Err(Error::DuplicateConcept(id.clone()));
            }
            if spec.parents.iter().any(|p| p == id) {
                return Err(Error::Cycle(vec![id.clone(), id.clone()]));
            }
        }
        for p in &spec.parents {
            if !self.contains(p) {
                return Err(Error::UnknownConcept(p.clone()));
            }
        }
        let owner = spec.id.clone().unwrap_or_else(|| "@X?".into());
        if let Some(cf) = &spec.cf {
            if cf.genus == owner {
                return Err(Error::Cycle(vec![owner.clone(), owner]));
            }
            self.validate_cf(&owner, cf)?;
        }
        let id = match spec.id {
            Some(id) => id,
            None => self.fresh_concept_id(),
        };
        let mut parents: BTreeSet<ConceptId> = spec.parents.into_iter().collect();
        if parents.is_empty() {
            match &spec.cf {
                Some(cf) => {
                    parents.insert(cf.genus.clone());
                }
                None => {
                    parents.insert(TOP.to_string());
                }
            }
        }
        let mut names: BTreeSet<String> = spec.names.into_iter().collect();
        if !id.starts_with('@') {
            names.insert(id.clone());
        }
        for p in &parents {
            self.concepts
                .get_mut(p)
                .expect("checked above")
                .children
                .insert(id.clone());
        }
        self.concepts.insert(
            id.clone(),
            Concept {
                id: id.clone(),
                names,
                origin: spec.origin,
                parents,
                cf: spec.cf,
                ..Default::default()
            },
        );
        Ok(id)
    }

    /// Add an is-a link, refusing links that would close a cycle.
    pub fn add_parent(&mut self, child: &str, parent: &str) -> Result<()> {
        self.concept(child)?;
        self.concept(parent)?;
        if let Some(mut path) = self.path(parent, child) {
            path.push(parent.to_string());
            return Err(Error::Cycle(path));
        }
        self.concept_mut(child)?.parents.insert(parent.to_string());
        self.concept_mut(parent)?.children.insert(child.to_string());
        Ok(())
    }

    pub fn remove_parent(&mut self, child: &str, parent: &str) {
        if let Some(c) = self.concepts.get_mut(child) {
            c.parents.remove(parent);
        }
        if let Some(p) = self.concepts.get_mut(parent) {
            p.children.remove(child);
        }
    }

    /// An is-a path from `from` up to `to`, if one exists.
    pub fn path(&self, from: &str, to: &str) -> Option<Vec<ConceptId>> {
        if !self.contains(from) {
            return None;
        }
        let mut prev: BTreeMap<&str, &str> = BTreeMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        while let Some(cur) = queue.pop_front() {
            if cur == to {
                let mut path = vec![cur.to_string()];
                let mut at = cur;
                while let Some(p) = prev.get(at) {
                    path.push(p.to_string());
                    at = p;
                }
                path.reverse();
                return Some(path);
            }
            for p in &self.concepts[cur].parents {
                if seen.insert(p.as_str()) {
                    prev.insert(p.as_str(), cur);
                    queue.push_back(p.as_str());
                }
            }
        }
        None
    }

    /// True iff `b` is reachable from `a` through parent links (reflexive).
    pub fn is_subclass(&self, a: &str, b: &str) -> bool {
        if a == b {
            return self.contains(a);
        }
        let Some(start) = self.concepts.get(a) else {
            return false;
        };
        let mut stack: Vec<&str> = start.parents.iter().map(String::as_str).collect();
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        while let Some(cur) = stack.pop() {
            if cur == b {
                return true;
            }
            if seen.insert(cur) {
                if let Some(c) = self.concepts.get(cur) {
                    stack.extend(c.parents.iter().map(String::as_str));
                }
            }
        }
        false
    }

    pub fn ancestors(&self, id: &str) -> BTreeSet<ConceptId> {
        let mut out = BTreeSet::new();
        let mut stack = vec![id.to_string()];
        while let Some(cur) = stack.pop() {
            if let Some(c) = self.concepts.get(&cur) {
                for p in &c.parents {
                    if out.insert(p.clone()) {
                        stack.push(p.clone());
                    }
                }
            }
        }
        out
    }

    pub fn descendants(&self, id: &str) -> BTreeSet<ConceptId> {
        let mut out = BTreeSet::new();
        let mut stack = vec![id.to_string()];
        while let Some(cur) = stack.pop() {
            if let Some(c) = self.concepts.get(&cur) {
                for ch in &c.children {
                    if out.insert(ch.clone()) {
                        stack.push(ch.clone());
                    }
                }
            }
        }
        out
    }

    /// Most specific common ancestors (reflexive) of a non-empty set.
    pub fn common_superclasses(&self, ids: &[ConceptId]) -> Vec<ConceptId> {
        let mut common: Option<BTreeSet<ConceptId>> = None;
        for id in ids {
            let mut up = self.ancestors(id);
            up.insert(id.clone());
            common = Some(match common {
                None => up,
                Some(c) => c.intersection(&up).cloned().collect(),
            });
        }
        let common = common.unwrap_or_default();
        common
            .iter()
            .filter(|c| !common.iter().any(|d| d != *c && self.is_subclass(d, c)))
            .cloned()
            .collect()
    }

    /// Insert or merge a slot entry. Same filler twice keeps the stronger
    /// quantifier and unions `$more`.
    pub fn add_slot(&mut self, holder: &str, relation: &str, entry: SlotEntry) -> Result<()> {
        if !self.contains(&entry.filler) {
            return Err(Error::UnknownConcept(entry.filler.clone()));
        }
        let concept = self.concept_mut(holder)?;
        let map = if relation.ends_with(INVERSE_SUFFIX) {
            &mut concept.inverse_slots
        } else {
            &mut concept.slots
        };
        let slot = map.entry(relation.to_string()).or_default();
        match slot.iter_mut().find(|e| e.filler == entry.filler) {
            Some(existing) => {
                if existing.quantifier != entry.quantifier {
                    let keep = existing.quantifier.stronger(&entry.quantifier).clone();
                    warn!(
                        "slot conflict on {holder}.{relation} {}: {} vs {}, keeping {keep}",
                        entry.filler, existing.quantifier, entry.quantifier
                    );
                    existing.quantifier = keep;
                }
                existing.more.extend(entry.more);
            }
            None => slot.push(entry),
        }
        Ok(())
    }

    /// Drop a concept that nothing points at yet (a probe used by the
    /// recognizer).
    pub(crate) fn remove_leaf(&mut self, id: &str) {
        let Some(c) = self.concepts.remove(id) else {
            return;
        };
        for p in &c.parents {
            if let Some(pc) = self.concepts.get_mut(p) {
                pc.children.remove(id);
            }
        }
        for ch in &c.children {
            if let Some(cc) = self.concepts.get_mut(ch) {
                cc.parents.remove(id);
            }
        }
    }

    pub(crate) fn insert_astruct(&mut self, a: AStructure) {
        self.declare_relation(&a.relation);
        self.astructs.insert(a.id.clone(), a);
    }

    pub(crate) fn set_counters(&mut self) {
        let max_num = |prefix: &str, ids: &mut dyn Iterator<Item = &String>| {
            ids.filter_map(|id| id.strip_prefix(prefix)?.parse::<u64>().ok())
                .max()
                .unwrap_or(0)
        };
        self.next_concept = max_num("@X", &mut self.concepts.keys()) + 1;
        self.next_astruct = max_num("@A", &mut self.astructs.keys()) + 1;
    }
}
