use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown concept `{0}`")]
    UnknownConcept(String),
    #[error("concept `{0}` already exists")]
    DuplicateConcept(String),
    #[error("is-a cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("malformed cf definition for `{0}`: {1}")]
    BadDefinition(String, String),
    #[error("unknown verbal concept `{0}`")]
    UnknownVerbalConcept(String),
    #[error("word `{0}` is already in the lexicon")]
    KnownWord(String),
    #[error("no parse: {0}")]
    NoParse(String),
    #[error("interpretation failed: {0}")]
    InterpretFail(String),
    #[error("I can't parse that question.")]
    Unparsed(String),
    #[error("{file}:{line}: {msg}")]
    Format {
        file: String,
        line: usize,
        msg: String,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn format(file: &str, line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            file: file.to_string(),
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
