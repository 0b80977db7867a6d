//! Everything the reader consults: LTM, lexicon, verbal concepts, VM
//! rules, the pair schema and topic files.
//!
//! Built-in copies of the data files are compiled in. A configuration
//! directory (see [`CONFIG_ENV`]) may replace any of them; files it lacks
//! fall back to the built-in ones.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::lexicon::{Inflection, LexEntry, Lexicon, Pos};
use crate::noun_group::PairSchema;
use crate::ontology::{Ontology, Origin};
use crate::skimmer::Topic;
use crate::verbal_concepts::{load_vm_rules, VerbalHierarchy, VmRule};

/// Environment variable naming the configuration directory.
pub const CONFIG_ENV: &str = "READKB_CONFIG";

pub const ONTOLOGY_FILE: &str = "ontology.txt";
pub const LEXICON_FILE: &str = "lexicon.tsv";
pub const VCONCEPTS_FILE: &str = "vconcepts.txt";
pub const VMRULES_FILE: &str = "vmrules.txt";
pub const SCHEMA_FILE: &str = "pairschema.txt";

const BUILTIN: &[(&str, &str)] = &[
    (ONTOLOGY_FILE, include_str!("../data/ontology.txt")),
    (LEXICON_FILE, include_str!("../data/lexicon.tsv")),
    (VCONCEPTS_FILE, include_str!("../data/vconcepts.txt")),
    (VMRULES_FILE, include_str!("../data/vmrules.txt")),
    (SCHEMA_FILE, include_str!("../data/pairschema.txt")),
];

const BUILTIN_TOPICS: &[(&str, &str)] = &[("diet", include_str!("../data/topics/diet.txt"))];

#[derive(Clone, Debug)]
pub struct Knowledge {
    pub ontology: Ontology,
    pub lexicon: Lexicon,
    pub verbal: VerbalHierarchy,
    pub vm_rules: Vec<VmRule>,
    pub schema: PairSchema,
    pub topics: BTreeMap<String, Topic>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn builtin(name: &str) -> &'static str {
    BUILTIN
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .unwrap_or("")
}

impl Knowledge {
    /// Assemble from file contents; `source` maps a file name to its text.
    fn assemble(
        source: impl Fn(&str) -> Result<String>,
        topics: BTreeMap<String, Topic>,
    ) -> Result<Knowledge> {
        let ontology = Ontology::from_text(ONTOLOGY_FILE, &source(ONTOLOGY_FILE)?)?;
        let lexicon = Lexicon::from_text(LEXICON_FILE, &source(LEXICON_FILE)?, &ontology)?;
        let verbal =
            VerbalHierarchy::from_text(VCONCEPTS_FILE, &source(VCONCEPTS_FILE)?, &ontology)?;
        let vm_rules = load_vm_rules(VMRULES_FILE, &source(VMRULES_FILE)?, &ontology, &verbal)?;
        let schema = PairSchema::from_text(SCHEMA_FILE, &source(SCHEMA_FILE)?, &ontology)?;
        Ok(Knowledge {
            ontology,
            lexicon,
            verbal,
            vm_rules,
            schema,
            topics,
        })
    }

    fn builtin_topics() -> Result<BTreeMap<String, Topic>> {
        BUILTIN_TOPICS
            .iter()
            .map(|(name, text)| {
                Ok((
                    name.to_string(),
                    Topic::from_text(name, &format!("topics/{name}.txt"), text)?,
                ))
            })
            .collect()
    }

    /// The compiled-in configuration.
    pub fn builtin() -> Result<Knowledge> {
        Self::assemble(
            |name| Ok(builtin(name).to_string()),
            Self::builtin_topics()?,
        )
    }

    /// Configuration from a directory, falling back file by file.
    pub fn from_dir(dir: &Path) -> Result<Knowledge> {
        if !dir.is_dir() {
            return Err(Error::Io {
                path: dir.to_path_buf(),
                source: std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory"),
            });
        }
        let mut topics = Self::builtin_topics()?;
        let tdir = dir.join("topics");
        if tdir.is_dir() {
            let mut paths: Vec<PathBuf> = std::fs::read_dir(&tdir)
                .map_err(|source| Error::Io {
                    path: tdir.clone(),
                    source,
                })?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "txt"))
                .collect();
            paths.sort();
            for p in paths {
                let name = p
                    .file_stem()
                    .unwrap_or_default()
                    .to_string_lossy()
                    .to_string();
                let topic = Topic::from_text(&name, &p.display().to_string(), &read(&p)?)?;
                topics.insert(name, topic);
            }
        }
        Self::assemble(
            |name| {
                let p = dir.join(name);
                if p.is_file() {
                    read(&p)
                } else {
                    Ok(builtin(name).to_string())
                }
            },
            topics,
        )
    }

    /// The directory named by [`CONFIG_ENV`] if set, else the built-in data.
    pub fn load() -> Result<Knowledge> {
        match std::env::var_os(CONFIG_ENV) {
            Some(dir) if !dir.is_empty() => Self::from_dir(Path::new(&dir)),
            _ => Self::builtin(),
        }
    }

    pub fn topic(&self, name: &str) -> Option<&Topic> {
        self.topics.get(name)
    }

    /// Replace LTM with a dumped knowledge base. Nouns learned while
    /// reading are restored to the lexicon from their concept ids.
    pub fn load_kb(&mut self, path: &Path) -> Result<()> {
        let text = read(path)?;
        self.ontology = Ontology::from_text(&path.display().to_string(), &text)?;
        let learned: Vec<String> = self
            .ontology
            .concepts()
            .filter(|c| c.cf.is_none() && c.origin != Origin::Lexical)
            .map(|c| c.id.clone())
            .collect();
        for id in learned {
            let word = id.replace('-', " ");
            if self
                .lexicon
                .lookup(&word)
                .iter()
                .any(|e| e.pos == Pos::Noun)
            {
                continue;
            }
            self.lexicon.insert(LexEntry {
                word: word.clone(),
                pos: Pos::Noun,
                lemma: word,
                senses: vec![id],
                frames: Vec::new(),
                inflection: Inflection::Base,
                provisional: true,
            });
        }
        Ok(())
    }

    /// Write the canonical dump of LTM.
    pub fn save_kb(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.ontology.dump()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}
