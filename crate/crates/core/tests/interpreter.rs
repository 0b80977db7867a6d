//! Interpretation of the reference sentences: verbal concepts, roles,
//! PP attachment and quantifiers.

use readkb::interpreter::{AttachTo, InterpretedClause, Source};
use readkb::ontology::Quantifier;
use readkb::parser::{Case, NpSlot};
use readkb::skimmer::prescan_subclasses;
use readkb::Knowledge;

fn role_of(c: &InterpretedClause, case: Case) -> (&str, Vec<(String, Quantifier)>) {
    let k = c.constituent(NpSlot::Case(case)).expect("constituent");
    (
        k.role.as_str(),
        k.fillers
            .iter()
            .map(|f| (f.concept.clone(), f.quantifier.clone()))
            .collect(),
    )
}

#[test]
fn crowned_eagle_sentence() {
    let mut k = Knowledge::builtin().unwrap();
    let text = "The crowned eagle of Africa lives in the rain forests and eats monkeys.";
    prescan_subclasses(
        &[text.to_string()],
        "eagle",
        &mut k.ontology,
        &mut k.lexicon,
    )
    .unwrap();
    let s = k.interpret(text, "eagle").unwrap();
    assert_eq!(s.clauses.len(), 2);
    let live = s.clause(0).unwrap();
    let eat = s.clause(1).unwrap();
    assert_eq!(live.relation, "live-in");
    assert_eq!(eat.verbal_concept, "ingest");

    let (role, fillers) = role_of(live, Case::Subj);
    assert_eq!(role, "actor");
    assert_eq!(fillers.len(), 1);
    assert_eq!(fillers[0].1, Quantifier::Universal);
    let eagle = &fillers[0].0;
    assert!(k.ontology.is_subclass(eagle, "eagle"));

    let of = live.pps.iter().find(|p| p.prep == "of").unwrap();
    assert_eq!(of.attach_to, AttachTo::Np(NpSlot::Case(Case::Subj)));
    assert_eq!(of.meaning, "inhabit");
    assert_eq!(of.fillers[0].concept, "africa");
    let inp = live.pps.iter().find(|p| p.prep == "in").unwrap();
    assert_eq!(inp.attach_to, AttachTo::Verb);
    assert_eq!(inp.meaning, "location-r");
    assert_eq!(inp.fillers[0].concept, "rain-forest");

    let (role, fillers) = role_of(eat, Case::Subj);
    assert_eq!(role, "actor");
    assert_eq!(&fillers[0].0, eagle);
    assert!(matches!(
        eat.constituent(NpSlot::Case(Case::Subj)).unwrap().source,
        Source::Shared { host: 0 }
    ));
    let (role, fillers) = role_of(eat, Case::Obj);
    assert_eq!(role, "theme");
    assert_eq!(fillers, vec![("monkey".to_string(), Quantifier::Unknown)]);
}

#[test]
fn object_decides_the_meaning_of_take() {
    let mut k = Knowledge::builtin().unwrap();
    let s = k.interpret("Peter took an aspirin.", "person").unwrap();
    assert_eq!(s.clause(0).unwrap().relation, "ingest");
    let s = k
        .interpret("Peter took an aspirin to Mary.", "person")
        .unwrap();
    let c = s.clause(0).unwrap();
    assert_eq!(c.relation, "transfer");
    let to = c.pps.iter().find(|p| p.prep == "to").unwrap();
    assert_eq!(to.attach_to, AttachTo::Verb);
    assert_eq!(to.meaning, "recipient");
}

#[test]
fn inherited_verbal_concepts_and_modifiers() {
    let mut k = Knowledge::builtin().unwrap();
    let s = k
        .interpret("Owls have been known to fish in shallow creeks.", "owl")
        .unwrap();
    let c = s.ok_clauses().last().unwrap();
    assert_eq!(c.verbal_concept, "animal-fish");
    assert!(c.modifiers["at-loc"].contains("shallow-creek"));

    let s = k
        .interpret("Vampire bats drink 1 tablespoon of blood each day.", "bat")
        .unwrap();
    let c = s.clause(0).unwrap();
    assert!(c.modifiers["quantity"].contains("1:tablespoon"));
    assert!(c.modifiers["frequency"].contains("day"));
    assert_eq!(role_of(c, Case::Obj).1[0].0, "blood");
}

#[test]
fn adverbs_are_interpreted() {
    let mut k = Knowledge::builtin().unwrap();
    let s = k
        .interpret("These owls rarely eat rodents.", "owl")
        .unwrap();
    let c = s.clause(0).unwrap();
    assert!(c.modifiers["frequency"].contains("rarely"));
    let s = k
        .interpret("These owls eat mostly rodents.", "owl")
        .unwrap();
    let (_, fillers) = role_of(s.clause(0).unwrap(), Case::Obj);
    assert_eq!(fillers[0].1.to_string(), "mostly");
}

#[test]
fn clause_without_verb_meaning_fails_alone() {
    let mut k = Knowledge::builtin().unwrap();
    let s = k
        .interpret("Owls are birds that hunt at night.", "owl")
        .unwrap();
    assert!(s.clauses[0].is_err());
    assert!(!s.clauses.iter().all(|c| c.is_ok()));
}

#[test]
fn interpretation_is_deterministic() {
    let text = "A grizzly has long, curved claws that it uses chiefly to dig out ground squirrels and mice.";
    let render = || {
        let mut k = Knowledge::builtin().unwrap();
        let s = k.interpret(text, "bear").unwrap();
        s.ok_clauses()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("\n")
    };
    let first = render();
    assert!(first.contains("dig-r"), "{first}");
    assert_eq!(first, render());
}
