//! Verbal-concept hierarchy and verb-meaning (VM) rules.
//!
//! Case and preposition entries are searched bottom-up from a node toward
//! `action`. The first node that holds entries for the case (or
//! preposition) decides; its entries are tried in file order, and nodes
//! further up are never consulted.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ontology::{ConceptId, Ontology};
use crate::parser::Case;

pub const ROOT: &str = "action";
/// Role that drops a constituent from the relation.
pub const NO_ROLE: &str = "none";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strength {
    Strong,
    Weak,
}

impl FromStr for Strength {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "strong" => Ok(Strength::Strong),
            "weak" => Ok(Strength::Weak),
            _ => Err(format!("expected strong or weak, got `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseEntry {
    pub restriction: ConceptId,
    pub role: String,
    /// False entries end the search with failure.
    pub ltm_claim: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrepEntry {
    pub strength: Strength,
    pub restriction: ConceptId,
    pub meaning: String,
    pub ltm_claim: bool,
}

/// A rule argument: a role, optionally followed through a restriction of
/// the role filler's definition (`whole.ingest%by`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoleRef {
    pub role: String,
    pub path: Option<String>,
}

impl fmt::Display for RoleRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.path {
            Some(p) => write!(f, "{}.{p}", self.role),
            None => f.write_str(&self.role),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditionRule {
    /// `<verbal concept>#<n>`, stable across runs.
    pub id: String,
    pub antecedent: Vec<(String, ConceptId)>,
    pub relation: String,
    pub args: Vec<RoleRef>,
    /// Blocks the rule when the role filler is-a the concept...
    pub guard: Option<(String, ConceptId)>,
    /// ...unless this role (often a purpose modifier) is-a this concept.
    pub override_if: Option<(String, ConceptId)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerbalConcept {
    pub name: String,
    pub parent: Option<String>,
    pub relation: Option<String>,
    pub triggers: BTreeSet<String>,
    pub case_entries: BTreeMap<Case, Vec<CaseEntry>>,
    pub prep_entries: BTreeMap<String, Vec<PrepEntry>>,
    /// Roles filled by default when the clause leaves them empty.
    pub implicit: Vec<(String, ConceptId)>,
    pub addition_rules: Vec<AdditionRule>,
    /// Some own rule derives an ingest relation.
    pub ingest_marked: bool,
}

#[derive(Clone, Debug, Default)]
pub struct VerbalHierarchy {
    nodes: BTreeMap<String, VerbalConcept>,
}

fn parse_pair(file: &str, line: usize, s: &str) -> Result<(String, String)> {
    s.split_once(':')
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .ok_or_else(|| Error::format(file, line, format!("expected <role>:<concept>, got `{s}`")))
}

fn parse_rule(file: &str, line: usize, id: String, toks: &[&str]) -> Result<AdditionRule> {
    let bad = |m: String| Error::format(file, line, m);
    let arrow = toks
        .iter()
        .position(|t| *t == "=>")
        .ok_or_else(|| bad("addrule needs `=>`".into()))?;
    let antecedent = toks[..arrow]
        .iter()
        .map(|t| parse_pair(file, line, t))
        .collect::<Result<Vec<_>>>()?;
    let cons = toks
        .get(arrow + 1)
        .ok_or_else(|| bad("addrule needs a consequent".into()))?;
    let (relation, rest) = cons
        .split_once('(')
        .ok_or_else(|| bad(format!("bad consequent `{cons}`")))?;
    let inner = rest
        .strip_suffix(')')
        .ok_or_else(|| bad(format!("bad consequent `{cons}`")))?;
    let args = inner
        .split(',')
        .map(|a| match a.split_once('.') {
            Some((r, p)) => RoleRef {
                role: r.to_string(),
                path: Some(p.to_string()),
            },
            None => RoleRef {
                role: a.to_string(),
                path: None,
            },
        })
        .collect::<Vec<_>>();
    let mut rule = AdditionRule {
        id,
        antecedent,
        relation: relation.to_string(),
        args,
        guard: None,
        override_if: None,
    };
    let mut k = arrow + 2;
    while k < toks.len() {
        let val = toks
            .get(k + 1)
            .ok_or_else(|| bad(format!("`{}` needs a value", toks[k])))?;
        match toks[k] {
            "unless" => rule.guard = Some(parse_pair(file, line, val)?),
            "override" => rule.override_if = Some(parse_pair(file, line, val)?),
            other => return Err(bad(format!("unexpected `{other}`"))),
        }
        k += 2;
    }
    for a in &rule.args {
        if !rule.antecedent.iter().any(|(r, _)| *r == a.role) {
            return Err(bad(format!(
                "consequent role `{}` is not in the antecedent",
                a.role
            )));
        }
    }
    Ok(rule)
}

impl VerbalHierarchy {
    pub fn from_text(file: &str, text: &str, ontology: &Ontology) -> Result<VerbalHierarchy> {
        let mut nodes: BTreeMap<String, VerbalConcept> = BTreeMap::new();
        let mut lines_of: BTreeMap<String, usize> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let toks: Vec<&str> = content.split_whitespace().collect();
            let bad = |m: String| Error::format(file, line, m);
            let check = |c: &str| -> Result<ConceptId> {
                if ontology.contains(c) {
                    Ok(c.to_string())
                } else {
                    Err(bad(format!("unknown concept `{c}`")))
                }
            };
            if toks[0] == "vconcept" {
                let name = toks
                    .get(1)
                    .ok_or_else(|| bad("vconcept needs a name".into()))?;
                let parent = match (toks.get(2), toks.get(3)) {
                    (Some(&"parent"), Some(p)) => Some(p.to_string()),
                    (None, _) => None,
                    _ => return Err(bad("expected `vconcept <name> parent <p>`".into())),
                };
                if nodes.contains_key(*name) {
                    return Err(bad(format!("verbal concept `{name}` defined twice")));
                }
                nodes.insert(
                    name.to_string(),
                    VerbalConcept {
                        name: name.to_string(),
                        parent,
                        ..Default::default()
                    },
                );
                lines_of.insert(name.to_string(), line);
                current = Some(name.to_string());
                continue;
            }
            let Some(name) = current.clone() else {
                return Err(bad("entry outside a vconcept block".into()));
            };
            let node = nodes.get_mut(&name).unwrap();
            match toks[0] {
                "relation" => {
                    node.relation = Some(
                        toks.get(1)
                            .ok_or_else(|| bad("relation needs a name".into()))?
                            .to_string(),
                    )
                }
                "trigger" => {
                    node.triggers.insert(
                        toks.get(1)
                            .ok_or_else(|| bad("trigger needs a verb".into()))?
                            .to_string(),
                    );
                }
                "case" => {
                    if toks.len() < 4 {
                        return Err(bad(
                            "expected `case <case> <restriction> <role> [deny]`".into()
                        ));
                    }
                    let case = Case::parse(toks[1])
                        .ok_or_else(|| bad(format!("unknown case `{}`", toks[1])))?;
                    let entry = CaseEntry {
                        restriction: check(toks[2])?,
                        role: toks[3].to_string(),
                        ltm_claim: toks.get(4) != Some(&"deny"),
                    };
                    let list = node.case_entries.entry(case).or_default();
                    if list.contains(&entry) {
                        return Err(bad("duplicate case entry".into()));
                    }
                    list.push(entry);
                }
                "prep" => {
                    if toks.len() < 5 {
                        return Err(bad(
                            "expected `prep <prep> <strength> <restriction> <meaning>`".into(),
                        ));
                    }
                    let entry = PrepEntry {
                        strength: toks[2].parse().map_err(bad)?,
                        restriction: check(toks[3])?,
                        meaning: toks[4].to_string(),
                        ltm_claim: toks.get(5) != Some(&"deny"),
                    };
                    let list = node.prep_entries.entry(toks[1].to_string()).or_default();
                    if list.contains(&entry) {
                        return Err(bad("duplicate prep entry".into()));
                    }
                    list.push(entry);
                }
                "implicit" => {
                    if toks.len() != 3 {
                        return Err(bad("expected `implicit <role> <concept>`".into()));
                    }
                    node.implicit.push((toks[1].to_string(), check(toks[2])?));
                }
                "addrule" => {
                    let id = format!("{name}#{}", node.addition_rules.len() + 1);
                    let rule = parse_rule(file, line, id, &toks[1..])?;
                    for (_, c) in rule
                        .antecedent
                        .iter()
                        .chain(&rule.guard)
                        .chain(&rule.override_if)
                    {
                        check(c)?;
                    }
                    if !ontology.knows_relation(&rule.relation) {
                        return Err(bad(format!("unknown relation `{}`", rule.relation)));
                    }
                    node.ingest_marked |= rule.relation == "ingest";
                    node.addition_rules.push(rule);
                }
                other => return Err(bad(format!("unknown directive `{other}`"))),
            }
        }
        let h = VerbalHierarchy { nodes };
        for (name, node) in &h.nodes {
            let line = lines_of[name];
            if name == ROOT {
                if node.parent.is_some() {
                    return Err(Error::format(file, line, "the root cannot have a parent"));
                }
                continue;
            }
            let mut seen = BTreeSet::new();
            let mut cur = name.as_str();
            loop {
                if !seen.insert(cur.to_string()) {
                    return Err(Error::format(
                        file,
                        line,
                        format!("parent cycle through `{cur}`"),
                    ));
                }
                let n = h
                    .nodes
                    .get(cur)
                    .ok_or_else(|| Error::format(file, line, format!("unknown parent `{cur}`")))?;
                match &n.parent {
                    Some(p) => cur = p,
                    None if cur == ROOT => break,
                    None => {
                        return Err(Error::format(
                            file,
                            line,
                            format!("`{cur}` does not reach `{ROOT}`"),
                        ))
                    }
                }
            }
        }
        Ok(h)
    }

    pub fn get(&self, name: &str) -> Option<&VerbalConcept> {
        self.nodes.get(name)
    }

    pub fn node(&self, name: &str) -> Result<&VerbalConcept> {
        self.get(name)
            .ok_or_else(|| Error::UnknownVerbalConcept(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.nodes.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.nodes.keys()
    }

    /// The node and its ancestors, bottom-up.
    pub fn chain(&self, name: &str) -> Vec<&VerbalConcept> {
        let mut out = Vec::new();
        let mut cur = self.get(name);
        while let Some(n) = cur {
            out.push(n);
            cur = n.parent.as_deref().and_then(|p| self.get(p));
        }
        out
    }

    pub fn is_under(&self, name: &str, ancestor: &str) -> bool {
        self.chain(name).iter().any(|n| n.name == ancestor)
    }

    /// Relation a clause with this verbal concept builds.
    pub fn relation(&self, name: &str) -> String {
        self.get(name)
            .and_then(|n| n.relation.clone())
            .unwrap_or_else(|| name.to_string())
    }

    /// Verbal concept for a relation name, if one produces it.
    pub fn for_relation(&self, relation: &str) -> Option<&VerbalConcept> {
        self.nodes
            .values()
            .find(|n| n.name == relation && n.relation.is_none())
            .or_else(|| {
                self.nodes
                    .values()
                    .find(|n| n.relation.as_deref() == Some(relation))
            })
    }

    pub fn match_case(
        &self,
        vc: &str,
        case: Case,
        filler: &str,
        ontology: &Ontology,
    ) -> Option<String> {
        let node = self
            .chain(vc)
            .into_iter()
            .find(|n| n.case_entries.contains_key(&case))?;
        let entry = node.case_entries[&case]
            .iter()
            .find(|e| ontology.is_subclass(filler, &e.restriction))?;
        entry.ltm_claim.then(|| entry.role.clone())
    }

    pub fn match_prep(
        &self,
        vc: &str,
        prep: &str,
        filler: &str,
        ontology: &Ontology,
    ) -> Option<(String, Strength)> {
        let node = self
            .chain(vc)
            .into_iter()
            .find(|n| n.prep_entries.contains_key(prep))?;
        let entry = node.prep_entries[prep]
            .iter()
            .find(|e| ontology.is_subclass(filler, &e.restriction))?;
        entry
            .ltm_claim
            .then(|| (entry.meaning.clone(), entry.strength))
    }

    /// Own rules first, then the ancestors'.
    pub fn inherited_addition_rules(&self, vc: &str) -> Vec<&AdditionRule> {
        self.chain(vc)
            .into_iter()
            .flat_map(|n| n.addition_rules.iter())
            .collect()
    }

    pub fn implicit_roles(&self, vc: &str) -> Vec<&(String, ConceptId)> {
        let mut seen = BTreeSet::new();
        self.chain(vc)
            .into_iter()
            .flat_map(|n| n.implicit.iter())
            .filter(|(r, _)| seen.insert(r.clone()))
            .collect()
    }

    pub fn is_ingest_marked(&self, vc: &str) -> bool {
        self.chain(vc).iter().any(|n| n.ingest_marked)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Trigger {
    Subj,
    Verb,
    Obj,
    Io,
    Pred,
    Prep,
    EndOfClause,
}

impl FromStr for Trigger {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "subj" => Trigger::Subj,
            "verb" => Trigger::Verb,
            "obj" => Trigger::Obj,
            "io" => Trigger::Io,
            "pred" => Trigger::Pred,
            "prep" => Trigger::Prep,
            "end-of-clause" => Trigger::EndOfClause,
            _ => return Err(format!("unknown trigger `{s}`")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constituent {
    Case(Case),
    Pp(String),
}

impl FromStr for Constituent {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if let Some(p) = s.strip_prefix("pp:") {
            return Ok(Constituent::Pp(p.to_string()));
        }
        Case::parse(s)
            .map(Constituent::Case)
            .ok_or_else(|| format!("unknown constituent `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VmTest {
    Isa(Constituent, ConceptId),
    Absent(Constituent),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VmRule {
    /// 1-based position in the rules file.
    pub id: usize,
    pub trigger: Trigger,
    pub verbs: BTreeSet<String>,
    pub tests: Vec<VmTest>,
    pub consequent: String,
}

pub fn load_vm_rules(
    file: &str,
    text: &str,
    ontology: &Ontology,
    hierarchy: &VerbalHierarchy,
) -> Result<Vec<VmRule>> {
    let mut rules = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let bad = |m: String| Error::format(file, line, m);
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks[0] != "vmrule" || toks.len() < 5 {
            return Err(bad(
                "expected `vmrule <trigger> verb=<lemmas> ... then <vc>`".into(),
            ));
        }
        let trigger: Trigger = toks[1].parse().map_err(bad)?;
        let verbs = toks[2]
            .strip_prefix("verb=")
            .ok_or_else(|| bad("expected verb=<lemma,...>".into()))?
            .split(',')
            .map(str::to_string)
            .collect();
        let then = toks
            .iter()
            .position(|t| *t == "then")
            .ok_or_else(|| bad("missing `then`".into()))?;
        let consequent = toks
            .get(then + 1)
            .ok_or_else(|| bad("missing verbal concept after `then`".into()))?
            .to_string();
        if !hierarchy.contains(&consequent) {
            return Err(bad(format!("unknown verbal concept `{consequent}`")));
        }
        let mut tests = Vec::new();
        if then > 3 {
            if toks[3] != "if" {
                return Err(bad(format!("unexpected `{}`", toks[3])));
            }
            let body = &toks[4..then];
            for part in body.split(|t| *t == "and") {
                match part {
                    ["no", c] => tests.push(VmTest::Absent(c.parse().map_err(bad)?)),
                    [c, "isa", concept] => {
                        if !ontology.contains(concept) {
                            return Err(bad(format!("unknown concept `{concept}`")));
                        }
                        tests.push(VmTest::Isa(c.parse().map_err(bad)?, concept.to_string()))
                    }
                    _ => return Err(bad(format!("bad test `{}`", part.join(" ")))),
                }
            }
        }
        rules.push(VmRule {
            id: line,
            trigger,
            verbs,
            tests,
            consequent,
        });
    }
    Ok(rules)
}
