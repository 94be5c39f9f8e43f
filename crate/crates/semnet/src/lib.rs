//! An embeddable engine for RDF-style triple data and three views over it:
//! logic (RDFS, an OWL subset, non-axiomatic truth-valued inference),
//! multi-relational network analysis (geodesics, spectral rankings, path
//! algebra), and grammar-constrained walkers.
//!
//! The [`store`] module holds the core data model. The reasoning engines
//! ([`rdfs`], [`owl`], [`nal`]) materialize entailments over a store. The
//! analysis side ([`netkit`], [`algebra`], [`walker`]) extracts graphs and
//! tensors from the same store and runs metrics, matrix expressions, and
//! walker simulations over them.
//!
//! With the default `parallel` feature, the per-source loops in [`netkit`]
//! and walker execution in [`walker`] run on rayon; disabling the feature
//! selects sequential fallbacks with identical results.

pub mod algebra;
pub mod nal;
pub mod netkit;
pub mod ntriples;
pub mod owl;
pub mod rdfs;
pub mod store;
pub mod term;
pub mod vocab;
pub mod walker;

pub use store::TripleStore;
pub use term::{PatternSlot, Term, Triple, TriplePattern};
