//! Complex noun groups and restrictive modifiers.
//!
//! Items of a noun group are paired left to right through a schema table
//! over ontology categories. Paired items become relation restrictions of a
//! defined concept; items that pair with nothing are glued to the head
//! into a new primitive child of the head.

use std::fmt;

use log::debug;

use crate::error::{Error, Result};
use crate::integration::ensure_defined;
use crate::lexicon::Pos;
use crate::ontology::{
    inverse_relation, CfDefinition, ConceptId, ConceptSpec, Ontology, Origin, Quantifier,
    RelationRestriction,
};
use crate::parser::NpGroup;

/// Upper bound on candidate readings of one noun group.
const MAX_CANDIDATES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// relation(item1, item2)
    Fwd,
    /// relation(item2, item1)
    Rev,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaEntry {
    pub cat1: ConceptId,
    pub cat2: ConceptId,
    pub relation: String,
    pub direction: Direction,
}

#[derive(Clone, Debug, Default)]
pub struct PairSchema {
    entries: Vec<SchemaEntry>,
}

impl PairSchema {
    pub fn new(entries: Vec<SchemaEntry>) -> Self {
        PairSchema { entries }
    }

    pub fn entries(&self) -> &[SchemaEntry] {
        &self.entries
    }

    pub fn from_text(file: &str, text: &str, ontology: &Ontology) -> Result<PairSchema> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let toks: Vec<&str> = content.split_whitespace().collect();
            let [kw, cat1, cat2, relation, dir] = toks[..] else {
                return Err(Error::format(
                    file,
                    line,
                    "expected `pairschema <cat1> <cat2> <relation> <fwd|rev>`",
                ));
            };
            if kw != "pairschema" {
                return Err(Error::format(
                    file,
                    line,
                    format!("unknown directive `{kw}`"),
                ));
            }
            for c in [cat1, cat2] {
                if !ontology.contains(c) {
                    return Err(Error::format(file, line, format!("unknown concept `{c}`")));
                }
            }
            if !ontology.knows_relation(relation) {
                return Err(Error::format(
                    file,
                    line,
                    format!("unknown relation `{relation}`"),
                ));
            }
            let direction = match dir {
                "fwd" => Direction::Fwd,
                "rev" => Direction::Rev,
                _ => return Err(Error::format(file, line, format!("bad direction `{dir}`"))),
            };
            entries.push(SchemaEntry {
                cat1: cat1.into(),
                cat2: cat2.into(),
                relation: relation.into(),
                direction,
            });
        }
        Ok(PairSchema { entries })
    }

    /// Relation connecting `item1` (left) and `item2` (right), if the table
    /// has one for their categories.
    pub fn pair_meaning(
        &self,
        item1: &str,
        item2: &str,
        ontology: &Ontology,
    ) -> Option<(String, Direction)> {
        self.entries
            .iter()
            .find(|e| ontology.is_subclass(item1, &e.cat1) && ontology.is_subclass(item2, &e.cat2))
            .map(|e| (e.relation.clone(), e.direction))
    }
}

/// Slot name, seen from item2, for a pairing.
pub fn restriction_relation(relation: &str, direction: Direction) -> String {
    match direction {
        Direction::Rev => relation.to_string(),
        Direction::Fwd => inverse_relation(relation),
    }
}

/// A reading of a noun group, not yet in LTM.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NounConcept {
    Known(ConceptId),
    /// New primitive child of `parent`.
    Hyphenated {
        id: ConceptId,
        parent: ConceptId,
    },
    Named {
        id: ConceptId,
        parent: ConceptId,
    },
    Defined {
        genus: Box<NounConcept>,
        restrictions: Vec<(String, NounConcept)>,
    },
}

impl NounConcept {
    /// Concept whose is-a position stands for this reading before it is
    /// realized.
    pub fn anchor(&self) -> &str {
        match self {
            NounConcept::Known(id) => id,
            NounConcept::Hyphenated { parent, .. } | NounConcept::Named { parent, .. } => parent,
            NounConcept::Defined { genus, .. } => genus.anchor(),
        }
    }

    /// Put the reading into LTM. Returns its id and the defined concepts
    /// created on the way.
    pub fn realize(&self, ontology: &mut Ontology) -> Result<(ConceptId, Vec<ConceptId>)> {
        let mut fresh = Vec::new();
        let id = self.realize_into(ontology, &mut fresh)?;
        Ok((id, fresh))
    }

    fn realize_into(
        &self,
        ontology: &mut Ontology,
        fresh: &mut Vec<ConceptId>,
    ) -> Result<ConceptId> {
        match self {
            NounConcept::Known(id) => Ok(id.clone()),
            NounConcept::Hyphenated { id, parent } | NounConcept::Named { id, parent } => {
                if !ontology.contains(id) {
                    let origin = if matches!(self, NounConcept::Named { .. }) {
                        Origin::Named
                    } else {
                        Origin::Hyphenated
                    };
                    ontology.add_concept(ConceptSpec {
                        origin,
                        ..ConceptSpec::primitive(id.clone(), &[parent.as_str()])
                    })?;
                    debug!("created {} concept {id} under {parent}", origin.as_str());
                }
                Ok(id.clone())
            }
            NounConcept::Defined {
                genus,
                restrictions,
            } => {
                let genus = genus.realize_into(ontology, fresh)?;
                let mut rs = Vec::new();
                for (rel, filler) in restrictions {
                    let f = filler.realize_into(ontology, fresh)?;
                    rs.push(RelationRestriction::new(
                        rel.clone(),
                        f,
                        Quantifier::Existential,
                    ));
                }
                let (id, created) = ensure_defined(
                    ontology,
                    CfDefinition {
                        genus,
                        restrictions: rs,
                    },
                )?;
                if created {
                    fresh.push(id.clone());
                }
                Ok(id)
            }
        }
    }
}

impl fmt::Display for NounConcept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NounConcept::Known(id)
            | NounConcept::Hyphenated { id, .. }
            | NounConcept::Named { id, .. } => f.write_str(id),
            NounConcept::Defined {
                genus,
                restrictions,
            } => {
                write!(f, "cf(is-a {genus}")?;
                for (r, filler) in restrictions {
                    write!(f, ", {r} {filler}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// One word (or merged multiword) of a noun group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Item {
    pub word: String,
    pub concept: Option<ConceptId>,
    pub frames: Vec<String>,
}

impl Item {
    pub fn new(word: &str, concept: Option<&str>) -> Item {
        Item {
            word: word.to_string(),
            concept: concept.map(str::to_string),
            frames: Vec::new(),
        }
    }
}

pub fn slug(text: &str) -> String {
    text.to_lowercase()
        .split(|c: char| c.is_whitespace() || c == '-')
        .filter(|w| !w.is_empty())
        .collect::<Vec<_>>()
        .join("-")
}

/// Readings of a sequence of items whose last item is the head, best
/// first. Candidates with more adjacent pairings come first; ties keep
/// generation order.
pub fn interpret_items(
    items: &[Item],
    schema: &PairSchema,
    ontology: &Ontology,
) -> Result<Vec<NounConcept>> {
    let Some(head) = items.last() else {
        return Err(Error::InterpretFail("empty noun group".into()));
    };
    let Some(head_concept) = head.concept.clone() else {
        return Err(Error::InterpretFail(format!(
            "no concept for `{}`",
            head.word
        )));
    };
    let n = items.len();
    if n == 1 {
        return Ok(vec![NounConcept::Known(head_concept)]);
    }
    // "insect eaters", "cactus dwellers"
    let agent_rel = head.frames.iter().find_map(|f| f.strip_prefix("agent-of:"));
    if let Some(rel) = agent_rel {
        let inner = interpret_items(&items[..n - 1], schema, ontology)?;
        return Ok(inner
            .into_iter()
            .map(|c| NounConcept::Defined {
                genus: Box::new(NounConcept::Known(head_concept.clone())),
                restrictions: vec![(rel.to_string(), c)],
            })
            .collect());
    }

    // Pairings of each modifier with items to its right.
    let mut targets: Vec<Vec<(usize, String)>> = vec![Vec::new(); n - 1];
    for i in 0..n - 1 {
        let Some(ci) = &items[i].concept else {
            continue;
        };
        for (j, item) in items.iter().enumerate().skip(i + 1) {
            let Some(cj) = &item.concept else {
                continue;
            };
            if let Some((rel, dir)) = schema.pair_meaning(ci, cj, ontology) {
                targets[i].push((j, restriction_relation(&rel, dir)));
            }
        }
    }
    let unpaired: Vec<usize> = (0..n - 1).filter(|&i| targets[i].is_empty()).collect();
    let head_base = if unpaired.is_empty() {
        NounConcept::Known(head_concept.clone())
    } else {
        let mut words: Vec<&str> = unpaired.iter().map(|&i| items[i].word.as_str()).collect();
        words.push(&head.word);
        NounConcept::Hyphenated {
            id: slug(&words.join(" ")),
            parent: head_concept.clone(),
        }
    };

    // Every combination of one target per paired modifier.
    let paired: Vec<usize> = (0..n - 1).filter(|&i| !targets[i].is_empty()).collect();
    let mut choices: Vec<Vec<usize>> = vec![Vec::new()];
    for &i in &paired {
        let mut next = Vec::new();
        for c in &choices {
            for k in 0..targets[i].len() {
                let mut c = c.clone();
                c.push(k);
                next.push(c);
            }
        }
        next.truncate(MAX_CANDIDATES);
        choices = next;
    }
    if choices.len() > 1 {
        debug!("noun group has {} readings", choices.len());
    }

    let mut out: Vec<(usize, NounConcept)> = Vec::new();
    for choice in choices {
        // incoming[j]: restrictions hung on item j.
        let mut incoming: Vec<Vec<(String, usize)>> = vec![Vec::new(); n];
        let mut adjacent = 0;
        for (&i, &k) in paired.iter().zip(&choice) {
            let (j, rel) = &targets[i][k];
            incoming[*j].push((rel.clone(), i));
            if *j == i + 1 {
                adjacent += 1;
            }
        }
        fn build(
            j: usize,
            items: &[Item],
            incoming: &[Vec<(String, usize)>],
            head_base: &NounConcept,
        ) -> NounConcept {
            let base = if j == items.len() - 1 {
                head_base.clone()
            } else {
                NounConcept::Known(items[j].concept.clone().unwrap_or_default())
            };
            if incoming[j].is_empty() {
                return base;
            }
            NounConcept::Defined {
                genus: Box::new(base),
                restrictions: incoming[j]
                    .iter()
                    .map(|(rel, i)| (rel.clone(), build(*i, items, incoming, head_base)))
                    .collect(),
            }
        }
        out.push((adjacent, build(n - 1, items, &incoming, &head_base)));
    }
    out.sort_by_key(|o| std::cmp::Reverse(o.0));
    Ok(out.into_iter().map(|(_, c)| c).collect())
}

/// Items of a simple (non-coordinated) noun group.
pub fn items_of(np: &NpGroup) -> Vec<Item> {
    let mut items: Vec<Item> = np
        .mods
        .iter()
        .map(|t| {
            let word = t
                .lemma(Pos::Noun)
                .map(str::to_string)
                .unwrap_or_else(|| t.lower());
            Item {
                word,
                concept: t.noun_sense().or_else(|| t.sense()).cloned(),
                frames: Vec::new(),
            }
        })
        .collect();
    let head = &np.head;
    items.push(Item {
        word: head
            .lemma(Pos::Noun)
            .map(str::to_string)
            .unwrap_or_else(|| head.lower()),
        concept: head.noun_sense().or_else(|| head.sense()).cloned(),
        frames: head
            .entries
            .iter()
            .filter(|e| e.pos == Pos::Noun)
            .flat_map(|e| e.frames.iter().cloned())
            .collect(),
    });
    items
}

/// Readings of a simple noun group. Names skip pairing.
pub fn interpret_noun_group(
    np: &NpGroup,
    schema: &PairSchema,
    ontology: &Ontology,
) -> Result<Vec<NounConcept>> {
    if np.head.name {
        let parent =
            np.head.noun_sense().cloned().ok_or_else(|| {
                Error::InterpretFail(format!("no genus for name `{}`", np.head.text))
            })?;
        let id = slug(&np.head.text);
        if id == parent {
            return Ok(vec![NounConcept::Known(id)]);
        }
        return Ok(vec![NounConcept::Named { id, parent }]);
    }
    interpret_items(&items_of(np), schema, ontology)
}

/// `cf(is-a concept, relation filler)` for each modifier, recognized or
/// classified into LTM.
pub fn interpret_restrictive(
    ontology: &mut Ontology,
    concept: &str,
    modifiers: &[(String, ConceptId)],
) -> Result<(ConceptId, bool)> {
    ensure_defined(
        ontology,
        CfDefinition {
            genus: concept.to_string(),
            restrictions: modifiers
                .iter()
                .map(|(r, f)| {
                    RelationRestriction::new(r.clone(), f.clone(), Quantifier::Existential)
                })
                .collect(),
        },
    )
}

/// Slot relation an "of"-phrase puts on `head`: a restriction of a defined
/// head that can take the object ("the diet of bears"), else the schema.
pub fn genitive(
    head: &str,
    object: &str,
    schema: &PairSchema,
    ontology: &Ontology,
) -> Option<String> {
    if let Some(r) = ontology
        .restrictions(head)
        .into_iter()
        .find(|r| ontology.is_subclass(object, &r.filler))
    {
        return Some(r.relation);
    }
    schema
        .pair_meaning(object, head, ontology)
        .map(|(rel, dir)| restriction_relation(&rel, dir))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Ontology, PairSchema) {
        let o = Ontology::from_text("ontology.txt", include_str!("../data/ontology.txt")).unwrap();
        let s = PairSchema::from_text("pairschema.txt", include_str!("../data/pairschema.txt"), &o)
            .unwrap();
        (o, s)
    }

    #[test]
    fn pair_meanings() {
        let (o, s) = setup();
        assert_eq!(
            s.pair_meaning("sea", "mammal", &o),
            Some(("live-in".into(), Direction::Rev))
        );
        assert_eq!(s.pair_meaning("rain", "forest", &o), None);
        assert_eq!(
            s.pair_meaning("wine", "bottle", &o),
            Some(("contains".into(), Direction::Rev))
        );
    }

    #[test]
    fn big_red_wine_bottle_has_two_readings() {
        let (o, s) = setup();
        let items = [
            Item::new("big", Some("big")),
            Item::new("red", Some("red")),
            Item::new("wine", Some("wine")),
            Item::new("bottle", Some("bottle")),
        ];
        let c = interpret_items(&items, &s, &o).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(
            c[0].to_string(),
            "cf(is-a bottle, size big, contains cf(is-a wine, color red))"
        );
        assert_eq!(
            c[1].to_string(),
            "cf(is-a bottle, size big, color red, contains wine)"
        );
    }

    #[test]
    fn single_item_is_itself() {
        let (o, s) = setup();
        let c = interpret_items(&[Item::new("bottle", Some("bottle"))], &s, &o).unwrap();
        assert_eq!(c, vec![NounConcept::Known("bottle".into())]);
    }

    #[test]
    fn unpaired_items_hyphenate() {
        let (mut o, s) = setup();
        let c = interpret_items(
            &[
                Item::new("rain", Some("rain")),
                Item::new("forest", Some("forest")),
            ],
            &s,
            &o,
        )
        .unwrap();
        let (id, fresh) = c[0].realize(&mut o).unwrap();
        assert_eq!(id, "rain-forest");
        assert!(fresh.is_empty());
        let rf = o.get("rain-forest").unwrap();
        assert_eq!(rf.origin, Origin::Hyphenated);
        assert!(rf.cf.is_none());
        assert!(rf.parents.contains("forest"));
    }

    #[test]
    fn sea_lion_and_sea_mammal() {
        let (mut o, s) = setup();
        let c = interpret_items(
            &[
                Item::new("sea", Some("sea")),
                Item::new("lion", Some("lion")),
            ],
            &s,
            &o,
        )
        .unwrap();
        assert_eq!(c[0].to_string(), "cf(is-a lion, live-in sea)");
        let sea_mammal = interpret_items(
            &[
                Item::new("sea", Some("sea")),
                Item::new("mammal", Some("mammal")),
            ],
            &s,
            &o,
        )
        .unwrap()[0]
            .realize(&mut o)
            .unwrap()
            .0;
        let (relative, created) =
            interpret_restrictive(&mut o, "mammal", &[("live-in".into(), "sea".into())]).unwrap();
        assert!(!created);
        assert_eq!(relative, sea_mammal);
        assert!(o.subsumes("mammal", &relative));
    }

    #[test]
    fn agent_nouns() {
        let (o, s) = setup();
        let mut eater = Item::new("eater", Some("animate"));
        eater.frames.push("agent-of:ingest".into());
        let c = interpret_items(&[Item::new("insect", Some("insect")), eater], &s, &o).unwrap();
        assert_eq!(c[0].to_string(), "cf(is-a animate, ingest insect)");
    }

    #[test]
    fn genitive_uses_defined_head() {
        let (o, s) = setup();
        assert_eq!(
            genitive("diet", "bear", &s, &o).as_deref(),
            Some("ingest%by")
        );
        assert_eq!(
            genitive("eagle", "africa", &s, &o).as_deref(),
            Some("inhabit")
        );
        assert_eq!(genitive("eagle", "honey", &s, &o), None);
    }
}
