//! Knowledge acquisition from encyclopedic text.

pub mod error;
pub mod formation;
pub mod inference;
pub mod integration;
pub mod interpreter;
pub mod knowledge;
pub mod lexicon;
pub mod noun_group;
pub mod ontology;
pub mod parser;
pub mod pipeline;
pub mod qa;
pub mod skimmer;
pub mod verbal_concepts;

pub use error::{Error, Result};
pub use knowledge::Knowledge;
