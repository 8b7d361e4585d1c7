//! Built-in models: the computed groupoid model (and finite sets inside it)
//! and table-backed models loaded from JSON documents.

mod gpd;
pub mod pi;
mod table;

pub use gpd::{builtin_seed, GpdModel};
pub use table::{load_model, save_model, to_document, ModelDocument, PathObjectEntry, TableModel};
