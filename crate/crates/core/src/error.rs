use thiserror::Error;

use crate::fincat::{MorId, ObjId};

/// Every failure the toolkit can report.
///
/// Axiom and law violations are *not* errors: they are collected in reports.
/// The variants here signal that an operation could not run at all.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("morphisms {g} and {f} are not composable")]
    NotComposable { g: MorId, f: MorId },
    #[error("composition table has no entry for ({g}, {f})")]
    MissingEntry { g: MorId, f: MorId },
    #[error("no terminal object")]
    NoTerminal,
    #[error("no pullback of {f} and {g}")]
    NoPullback { f: MorId, g: MorId },
    #[error("missing pullback: {0}")]
    MissingPullback(String),
    #[error("resource cap of {cap} exceeded while {context}")]
    ResourceCap { cap: usize, context: String },
    #[error("no path object for the fibration {0}")]
    MissingSlicePathObject(MorId),
    #[error("no filler for lifting square: {0}")]
    NoFiller(String),
    #[error("homotopy is not a congruence: {0}")]
    CongruenceFailure(String),
    #[error("functor is not homotopical: {0}")]
    NotHomotopical(String),
    #[error("naturality failure: {0}")]
    NaturalityFailure(String),
    #[error("not an isofibration: {0}")]
    NotIsofibration(String),
    #[error("{0} is not a weak equivalence")]
    NotWeakEquivalence(MorId),
    #[error("no Pi-type available: {0}")]
    MissingPiType(String),
    #[error("no fibration Pf with (Pf)r = rf for {0}")]
    NoSuitablePf(MorId),
    #[error("unknown object {0}")]
    UnknownObject(ObjId),
    #[error("unknown morphism {0}")]
    UnknownMorphism(MorId),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn cap(cap: usize, context: impl Into<String>) -> Self {
        Error::ResourceCap { cap, context: context.into() }
    }

    pub fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
