//! Line-oriented ontology files and the canonical KB dump.
//!
//! ```text
//! concept <name> isa <parent>[,<parent>...] [origin <kind>]
//! defined <name> genus <g> [rel <relation> <filler> <quant>]... [isa <p>,...]
//! relation <name>
//! slot <concept> <relation> <filler> <quant> [astruct <id>...]
//! astruct <id> <relation> <role>=<concept>:<quant>... [mod <key>=<value>]... [derived-by <rule> from <id>]
//! ```
//!
//! Lines are loaded in two passes, so forward references are fine.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{
    AStructure, Binding, CfDefinition, ConceptSpec, Ontology, Origin, Provenance, Quantifier,
    RelationRestriction, SlotEntry, BASE_RELATIONS, TOP,
};
use crate::error::{Error, Result};

struct Defined {
    line: usize,
    name: String,
    genus: String,
    restrictions: Vec<(String, String, String)>,
    parents: Vec<String>,
}

struct Slot {
    line: usize,
    holder: String,
    relation: String,
    filler: String,
    quant: String,
    more: Vec<String>,
}

/// Sort key putting `@X9` before `@X10`.
fn natural(id: &str) -> (String, usize, String) {
    let digits = id.trim_end_matches(|c: char| c.is_ascii_digit());
    let n = id[digits.len()..].parse().unwrap_or(0);
    (digits.to_string(), n, id.to_string())
}

fn quant(file: &str, line: usize, s: &str) -> Result<Quantifier> {
    s.parse().map_err(|e: String| Error::format(file, line, e))
}

/// Drop a `#` comment. Only a `#` opening a word starts one, since rule
/// ids such as `dig-r#1` contain the character.
fn strip_comment(raw: &str) -> &str {
    let mut prev = ' ';
    for (i, ch) in raw.char_indices() {
        if ch == '#' && prev.is_whitespace() {
            return raw[..i].trim();
        }
        prev = ch;
    }
    raw.trim()
}

impl Ontology {
    /// Load an ontology file or a KB dump into a fresh store.
    pub fn from_text(file: &str, text: &str) -> Result<Ontology> {
        let mut o = Ontology::new();
        o.load_text(file, text)?;
        Ok(o)
    }

    /// Merge the contents of an ontology file into this store.
    pub fn load_text(&mut self, file: &str, text: &str) -> Result<()> {
        let mut primitives: Vec<(usize, String, Vec<String>, Origin)> = Vec::new();
        let mut defined: Vec<Defined> = Vec::new();
        let mut slots: Vec<Slot> = Vec::new();
        let mut astructs: Vec<(usize, AStructure)> = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = strip_comment(raw);
            if content.is_empty() {
                continue;
            }
            let toks: Vec<&str> = content.split_whitespace().collect();
            let bad = |msg: &str| Error::format(file, line, msg);
            match toks[0] {
                "relation" => {
                    let name = toks.get(1).ok_or_else(|| bad("relation needs a name"))?;
                    self.declare_relation(name);
                }
                "concept" => {
                    let name = toks.get(1).ok_or_else(|| bad("concept needs a name"))?;
                    let parents = match (toks.get(2), toks.get(3)) {
                        (Some(&"isa"), Some(ps)) => ps.split(',').map(str::to_string).collect(),
                        (None, None) if *name == TOP => Vec::new(),
                        _ => return Err(bad("expected `concept <name> isa <parent>[,...]`")),
                    };
                    let origin = match (toks.get(4), toks.get(5)) {
                        (None, _) => Origin::Lexical,
                        (Some(&"origin"), Some(o)) => {
                            Origin::parse(o).ok_or_else(|| bad(&format!("unknown origin `{o}`")))?
                        }
                        _ => return Err(bad("expected `origin <kind>` after the parents")),
                    };
                    primitives.push((line, name.to_string(), parents, origin));
                }
                "defined" => {
                    if toks.len() < 4 || toks[2] != "genus" {
                        return Err(bad("expected `defined <name> genus <g> ...`"));
                    }
                    let mut d = Defined {
                        line,
                        name: toks[1].to_string(),
                        genus: toks[3].to_string(),
                        restrictions: Vec::new(),
                        parents: Vec::new(),
                    };
                    let mut k = 4;
                    while k < toks.len() {
                        match toks[k] {
                            "rel" if k + 3 < toks.len() => {
                                d.restrictions.push((
                                    toks[k + 1].to_string(),
                                    toks[k + 2].to_string(),
                                    toks[k + 3].to_string(),
                                ));
                                k += 4;
                            }
                            "isa" if k + 1 < toks.len() => {
                                d.parents = toks[k + 1].split(',').map(str::to_string).collect();
                                k += 2;
                            }
                            other => return Err(bad(&format!("unexpected `{other}`"))),
                        }
                    }
                    defined.push(d);
                }
                "slot" => {
                    if toks.len() < 5 {
                        return Err(bad("expected `slot <concept> <relation> <filler> <quant>`"));
                    }
                    let more = match toks.get(5) {
                        Some(&"astruct") => toks[6..].iter().map(|s| s.to_string()).collect(),
                        Some(other) => return Err(bad(&format!("unexpected `{other}`"))),
                        None => Vec::new(),
                    };
                    slots.push(Slot {
                        line,
                        holder: toks[1].to_string(),
                        relation: toks[2].to_string(),
                        filler: toks[3].to_string(),
                        quant: toks[4].to_string(),
                        more,
                    });
                }
                "astruct" => {
                    if toks.len() < 3 {
                        return Err(bad("expected `astruct <id> <relation> ...`"));
                    }
                    let mut a = AStructure {
                        id: toks[1].to_string(),
                        relation: toks[2].to_string(),
                        bindings: Vec::new(),
                        modifiers: BTreeMap::new(),
                        derived: None,
                    };
                    let mut k = 3;
                    while k < toks.len() {
                        match toks[k] {
                            "mod" if k + 1 < toks.len() => {
                                let (key, value) = toks[k + 1]
                                    .split_once('=')
                                    .ok_or_else(|| bad("expected mod <key>=<value>"))?;
                                a.modifiers
                                    .entry(key.to_string())
                                    .or_default()
                                    .insert(value.to_string());
                                k += 2;
                            }
                            "derived-by" if k + 3 < toks.len() && toks[k + 2] == "from" => {
                                a.derived = Some(Provenance {
                                    rule: toks[k + 1].to_string(),
                                    source: toks[k + 3].to_string(),
                                });
                                k += 4;
                            }
                            b => {
                                let (role, rest) = b
                                    .split_once('=')
                                    .ok_or_else(|| bad(&format!("bad binding `{b}`")))?;
                                let (concept, q) = rest
                                    .split_once(':')
                                    .ok_or_else(|| bad(&format!("bad binding `{b}`")))?;
                                a.bindings.push(Binding {
                                    role: role.to_string(),
                                    concept: concept.to_string(),
                                    quantifier: quant(file, line, q)?,
                                });
                                k += 1;
                            }
                        }
                    }
                    astructs.push((line, a));
                }
                other => return Err(bad(&format!("unknown directive `{other}`"))),
            }
        }

        let at = |line: usize, e: Error| match e {
            Error::Format { .. } => e,
            other => Error::format(file, line, other.to_string()),
        };

        // Pass 2: create every concept first, then wire parents.
        for (line, name, _, origin) in &primitives {
            if name != TOP {
                let mut spec = ConceptSpec::primitive(name.clone(), &[TOP]);
                spec.origin = *origin;
                self.add_concept(spec).map_err(|e| at(*line, e))?;
            }
        }
        for d in &defined {
            self.add_concept(ConceptSpec::primitive(d.name.clone(), &[TOP]))
                .map_err(|e| at(d.line, e))?;
        }
        for (line, name, parents, _) in &primitives {
            self.relink(name, parents).map_err(|e| at(*line, e))?;
        }
        let mut to_classify = Vec::new();
        for d in &defined {
            let mut restrictions = Vec::new();
            for (r, f, q) in &d.restrictions {
                restrictions.push(RelationRestriction::new(
                    r.clone(),
                    f.clone(),
                    quant(file, d.line, q)?,
                ));
            }
            let cf = CfDefinition {
                genus: d.genus.clone(),
                restrictions,
            };
            self.validate_cf(&d.name, &cf).map_err(|e| at(d.line, e))?;
            self.concept_mut(&d.name)?.cf = Some(cf);
            if d.parents.is_empty() {
                to_classify.push(d.name.clone());
            } else {
                self.relink(&d.name, &d.parents)
                    .map_err(|e| at(d.line, e))?;
            }
        }
        for name in to_classify {
            self.classify(&name)?;
        }
        for (line, a) in astructs {
            for b in &a.bindings {
                if !self.contains(&b.concept) {
                    return Err(Error::format(
                        file,
                        line,
                        format!("unknown concept `{}`", b.concept),
                    ));
                }
            }
            self.declare_relation(&a.relation);
            self.insert_astruct(a);
        }
        for s in slots {
            for m in &s.more {
                if self.astruct(m).is_none() {
                    return Err(Error::format(
                        file,
                        s.line,
                        format!("unknown a-structure `{m}`"),
                    ));
                }
            }
            if !self.knows_relation(&s.relation) {
                return Err(Error::format(
                    file,
                    s.line,
                    format!("unknown relation `{}`", s.relation),
                ));
            }
            let entry = SlotEntry {
                filler: s.filler.clone(),
                quantifier: quant(file, s.line, &s.quant)?,
                more: s.more.into_iter().collect(),
            };
            self.add_slot(&s.holder, &s.relation, entry)
                .map_err(|e| at(s.line, e))?;
        }
        self.set_counters();
        Ok(())
    }

    /// Replace the parent set of a freshly loaded concept.
    fn relink(&mut self, name: &str, parents: &[String]) -> Result<()> {
        for p in parents {
            self.concept(p)?;
        }
        let old: Vec<_> = self.concept(name)?.parents.iter().cloned().collect();
        for p in old {
            self.remove_parent(name, &p);
        }
        for p in parents {
            self.add_parent(name, p)?;
        }
        Ok(())
    }

    /// Canonical dump: concepts sorted by id, slots by relation then filler,
    /// a-structures by id. Byte-stable for identical stores.
    pub fn dump(&self) -> String {
        let mut concepts: Vec<_> = self.concepts().collect();
        concepts.sort_by_key(|c| natural(&c.id));
        let mut astructs: Vec<_> = self.astructs().collect();
        astructs.sort_by_key(|a| natural(&a.id));
        let mut out = String::from("# knowledge base dump\n");
        let base: BTreeSet<&str> = BASE_RELATIONS.iter().copied().collect();
        for r in self.relations() {
            if !base.contains(r.as_str()) {
                let _ = writeln!(out, "relation {r}");
            }
        }
        for c in &concepts {
            if c.id == TOP {
                continue;
            }
            let parents = c.parents.iter().cloned().collect::<Vec<_>>().join(",");
            match &c.cf {
                None => {
                    let _ = write!(out, "concept {} isa {parents}", c.id);
                    if c.origin != Origin::Lexical {
                        let _ = write!(out, " origin {}", c.origin.as_str());
                    }
                    out.push('\n');
                }
                Some(cf) => {
                    let _ = write!(out, "defined {} genus {}", c.id, cf.genus);
                    for r in &cf.restrictions {
                        let _ = write!(out, " rel {} {} {}", r.relation, r.filler, r.quantifier);
                    }
                    let _ = writeln!(out, " isa {parents}");
                }
            }
        }
        for c in &concepts {
            for (rel, entries) in c.slots.iter().chain(c.inverse_slots.iter()) {
                let mut entries: Vec<&SlotEntry> = entries.iter().collect();
                entries.sort_by(|a, b| a.filler.cmp(&b.filler));
                for e in entries {
                    let _ = write!(out, "slot {} {} {} {}", c.id, rel, e.filler, e.quantifier);
                    if !e.more.is_empty() {
                        out.push_str(" astruct");
                        for m in &e.more {
                            let _ = write!(out, " {m}");
                        }
                    }
                    out.push('\n');
                }
            }
        }
        for a in &astructs {
            let _ = write!(out, "astruct {} {}", a.id, a.relation);
            for b in &a.bindings {
                let _ = write!(out, " {}={}:{}", b.role, b.concept, b.quantifier);
            }
            for (k, vs) in &a.modifiers {
                for v in vs {
                    let _ = write!(out, " mod {k}={v}");
                }
            }
            if let Some(p) = &a.derived {
                let _ = write!(out, " derived-by {} from {}", p.rule, p.source);
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# tiny
concept animal isa entity
concept bird isa animal
concept eagle isa bird
concept habitat isa entity
concept forest isa habitat
defined forest-eagle genus eagle rel live-in forest exists
";

    #[test]
    fn loads_and_classifies_defined_concepts() {
        let o = Ontology::from_text("t", SAMPLE).unwrap();
        assert!(o.is_subclass("forest-eagle", "bird"));
        assert!(o.get("forest-eagle").unwrap().is_defined());
    }

    #[test]
    fn dump_load_dump_is_identical() {
        let o = Ontology::from_text("t", SAMPLE).unwrap();
        let d1 = o.dump();
        let d2 = Ontology::from_text("dump", &d1).unwrap().dump();
        assert_eq!(d1, d2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = Ontology::from_text("bad.txt", "concept a isa entity\nconcept b isa nowhere\n")
            .unwrap_err();
        assert!(err.to_string().starts_with("bad.txt:2:"), "{err}");
        let err = Ontology::from_text("bad.txt", "frobnicate\n").unwrap_err();
        assert!(err.to_string().contains("unknown directive"));
    }

    #[test]
    fn cyclic_file_is_rejected() {
        let err = Ontology::from_text("c", "concept a isa b\nconcept b isa a\n").unwrap_err();
        assert!(err.to_string().contains("cycle"), "{err}");
    }
}
