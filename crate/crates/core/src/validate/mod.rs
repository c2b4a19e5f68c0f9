//! Executable checkers for the structural invariants the reduction relies
//! on: wild frontiers, state atoms and their precedence order, associated
//! configurations and consistency, bow ties, and the configuration sets
//! read off bow-tie paths.

mod bowtie;
mod frontier;
mod script;
mod states;

pub use bowtie::{
    check_bowtie, embeds_into_encoding, extract_configs, read_component_paths, semterms,
    BowtieCheck, PathDecoding,
};
pub use frontier::{check_wild_frontier, FrontierCheck, FrontierWitness};
pub use script::{frontier_step, initial_witness};
pub use states::{check_consistency, conf_of, precedes, state_atoms, ConsistencyCheck};

use thiserror::Error;

use crate::engine::EngineError;
use crate::matching::MatchError;
use crate::model::Atom;
use crate::tmred::TmError;

#[derive(Debug, Error)]
pub enum ValidateError {
    #[error("{0} is not a state atom")]
    NotStateAtom(Atom),
    #[error("{0} does not occur in the derivation result")]
    NotInDerivation(Atom),
    #[error("{0} has no recorded provenance")]
    MissingProvenance(Atom),
    #[error("{0} was not produced by a head-move rule")]
    NotTransitionAtom(Atom),
    #[error("no parent state atom in the support of the step producing {0}")]
    NoParent(Atom),
    #[error("component of {0} is not a bow tie: {1}")]
    NotABowtie(Atom, String),
    #[error("bad wild-frontier witness: {0}")]
    BadWitness(String),
    #[error(transparent)]
    Tm(#[from] TmError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Match(#[from] MatchError),
}
