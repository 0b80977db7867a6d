use super::*;
use crate::lexicon::Lexicon;
use crate::ontology::Ontology;

fn setup() -> (Ontology, Lexicon) {
    let mut onto =
        Ontology::from_text("ontology.txt", include_str!("../../data/ontology.txt")).unwrap();
    // Prescan would normally add this one.
    onto.add_concept(crate::ontology::ConceptSpec::primitive(
        "crowned-eagle",
        &["eagle"],
    ))
    .unwrap();
    let mut lex =
        Lexicon::from_text("lexicon.tsv", include_str!("../../data/lexicon.tsv"), &onto).unwrap();
    lex.insert(crate::lexicon::LexEntry {
        word: "crowned eagle".into(),
        pos: Pos::Noun,
        lemma: "crowned eagle".into(),
        senses: vec!["crowned-eagle".into()],
        frames: Vec::new(),
        inflection: Inflection::Base,
        provisional: false,
    });
    (onto, lex)
}

fn parse(s: &str) -> Result<ParseStructure> {
    let (mut onto, mut lex) = setup();
    let mut toks = tokenize(s, &lex);
    resolve_unknown_words(&mut toks, &mut lex, &mut onto, "animal")?;
    parse_sentence(&toks, s)
}

fn heads(np: &NpGroup) -> Vec<String> {
    np.conjuncts().iter().map(|c| c.head.lower()).collect()
}

fn all_tokens_used(s: &str) {
    let (mut onto, mut lex) = setup();
    let mut toks = tokenize(s, &lex);
    resolve_unknown_words(&mut toks, &mut lex, &mut onto, "animal").unwrap();
    let p = parse_sentence(&toks, s).unwrap();
    let want: Vec<usize> = (0..toks.len()).collect();
    assert_eq!(p.token_indices(), want, "{p}");
}

#[test]
fn empty_sentence_fails() {
    assert!(matches!(parse(""), Err(Error::NoParse(_))));
}

#[test]
fn crowned_eagle_shares_subject() {
    let s = "The crowned eagle of Africa lives in the rain forests and eats monkeys.";
    let p = parse(s).unwrap();
    assert_eq!(p.clauses.len(), 2, "{p}");
    let main = &p.clauses[0];
    assert_eq!(main.verb.lemma, "live");
    assert_eq!(main.subj.as_ref().unwrap().head.lower(), "crowned eagle");
    assert_eq!(main.pps[0].prep.lower(), "of");
    assert_eq!(main.pps[0].np.head.lower(), "africa");
    assert_eq!(main.pps[1].prep.lower(), "in");
    let np = &main.pps[1].np;
    assert_eq!(np.head.lower(), "forests");
    assert_eq!(np.mods[0].lower(), "rain");
    let second = &p.clauses[1];
    assert_eq!(second.attach, Attach::Conjoined { host: 0 });
    assert!(second.shared_subject);
    assert_eq!(second.verb.lemma, "eat");
    assert_eq!(second.obj.as_ref().unwrap().head.lower(), "monkeys");
    all_tokens_used(s);
}

#[test]
fn grizzly_relative_and_purpose() {
    let s = "A grizzly has long, curved claws that it uses chiefly to dig out ground squirrels and mice.";
    let p = parse(s).unwrap();
    assert_eq!(p.clauses.len(), 3, "{p}");
    assert_eq!(p.clauses[0].verb.lemma, "have");
    let claws = p.clauses[0].obj.as_ref().unwrap();
    assert_eq!(claws.head.lower(), "claws");
    assert_eq!(claws.mods.len(), 2);
    assert_eq!(
        p.clauses[1].attach,
        Attach::Relative {
            host: 0,
            slot: NpSlot::Case(Case::Obj),
            gap: Case::Obj
        }
    );
    assert!(p.clauses[1].subj.as_ref().unwrap().is_pronoun());
    assert_eq!(p.clauses[2].attach, Attach::Purpose { host: 1 });
    assert_eq!(p.clauses[2].verb.key(), "dig+out");
    assert_eq!(
        heads(p.clauses[2].obj.as_ref().unwrap()),
        vec!["ground squirrels", "mice"]
    );
    all_tokens_used(s);
}

#[test]
fn coordination_with_oxford_comma() {
    let p = parse("The diet of bears consists of nuts, berries and small rodents.").unwrap();
    let c = &p.clauses[0];
    assert_eq!(c.verb.key(), "consist+of");
    assert_eq!(
        heads(c.obj.as_ref().unwrap()),
        vec!["nuts", "berries", "rodents"]
    );
    assert_eq!(c.pps[0].np.head.lower(), "bears");
}

#[test]
fn including_list_replaces_object() {
    let s = "Makos feed on other fish, including herring, mackerel, and swordfish.";
    let (mut onto, mut lex) = setup();
    let mut toks = tokenize(s, &lex);
    resolve_unknown_words(&mut toks, &mut lex, &mut onto, "fish").unwrap();
    let p = parse_sentence(&toks, s).unwrap();
    let obj = p.clauses[0].obj.as_ref().unwrap();
    assert_eq!(heads(obj), vec!["herring", "mackerel", "swordfish"]);
    assert_eq!(p.token_indices(), (0..toks.len()).collect::<Vec<_>>());
}

#[test]
fn passive_swaps_agent() {
    let p = parse("Monkeys that live on the ground are hunted by lions.").unwrap();
    let main = &p.clauses[0];
    assert!(main.verb.passive);
    assert_eq!(main.subj.as_ref().unwrap().head.lower(), "lions");
    assert_eq!(main.obj.as_ref().unwrap().head.lower(), "monkeys");
    assert_eq!(
        p.clauses[1].attach,
        Attach::Relative {
            host: 0,
            slot: NpSlot::Case(Case::Obj),
            gap: Case::Subj
        }
    );
}

#[test]
fn raising_verb_group() {
    let p = parse("Owls have been known to fish in shallow creeks.").unwrap();
    assert_eq!(p.clauses.len(), 1, "{p}");
    assert_eq!(p.clauses[0].verb.lemma, "fish");
    assert_eq!(p.clauses[0].obj, None);
    assert_eq!(p.clauses[0].pps[0].np.mods[0].lower(), "shallow");
}

#[test]
fn quantity_and_frequency() {
    let p = parse("Vampire bats drink 1 tablespoon of blood each day.").unwrap();
    let c = &p.clauses[0];
    let obj = c.obj.as_ref().unwrap();
    assert_eq!(obj.head.lower(), "blood");
    assert_eq!(
        obj.quantity,
        Some(Quantity {
            amount: "1".into(),
            unit: Some("tablespoon".into())
        })
    );
    assert_eq!(c.frequency.as_ref().unwrap().head.lower(), "day");
}

#[test]
fn kinds_of_is_transparent() {
    let p = parse("People hunt some kinds of seals for their soft fur.").unwrap();
    let c = &p.clauses[0];
    assert_eq!(c.obj.as_ref().unwrap().head.lower(), "seals");
    assert!(c.obj.as_ref().unwrap().has_det(&["some"]));
    assert_eq!(c.pps[0].prep.lower(), "for");
}

#[test]
fn copula_with_adjective_predicate() {
    let p = parse("Bears are fond of honey.").unwrap();
    let c = &p.clauses[0];
    assert!(c.verb.copula);
    assert_eq!(c.pred.as_ref().unwrap().head.lower(), "fond");
    assert_eq!(c.pps[0].np.head.lower(), "honey");
}

#[test]
fn subordinate_clause() {
    let p = parse("Birds migrate south when it freezes.").unwrap();
    assert_eq!(p.clauses.len(), 2);
    assert_eq!(p.clauses[0].obj.as_ref().unwrap().head.lower(), "south");
    assert_eq!(
        p.clauses[1].attach,
        Attach::Subordinate {
            host: 0,
            conj: "when".into()
        }
    );
}

#[test]
fn ditransitive_and_to_phrase() {
    let p = parse("Peter took Mary an aspirin.").unwrap();
    let c = &p.clauses[0];
    assert_eq!(c.io.as_ref().unwrap().head.lower(), "mary");
    assert_eq!(c.obj.as_ref().unwrap().head.lower(), "aspirin");
    let p = parse("Peter took an aspirin to Mary.").unwrap();
    assert_eq!(p.clauses[0].pps[0].prep.lower(), "to");
}

#[test]
fn adverbs_and_quantifier_words() {
    let p = parse("These owls rarely eat rodents.").unwrap();
    assert_eq!(p.clauses[0].adverbs[0].lower(), "rarely");
    let p = parse("These owls eat mostly rodents.").unwrap();
    assert!(p.clauses[0].obj.as_ref().unwrap().has_det(&["mostly"]));
}

#[test]
fn trailing_garbage_fails() {
    assert!(parse("Owls eat rodents the").is_err());
}
