//! Finite path categories, executed.
//!
//! The crate represents small path categories concretely (as composition
//! tables or as the computed groupoid model), enriches their hom-sets with
//! groupoid structure, and decides whether candidate function spaces and
//! dependent products have the expected universal properties up to homotopy.

pub mod appendixpb;
pub mod cli;
pub mod enrichment;
pub mod error;
pub mod fincat;
pub mod funcspaces;
pub mod gpdcheck;
pub mod groupoid;
pub mod models;
pub mod pathstruct;
pub mod report;

pub use error::{Error, Result};
pub use fincat::{Category, MorId, ObjId, PullbackData};
