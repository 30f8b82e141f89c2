//! Formal concept analysis core: contexts, concept lattices, minimal
//! generators, the Conceptual Relevance index and the stability baseline.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, timing and
//! the command line live in the `fcarel` crate.

#![no_std]

extern crate alloc;

pub mod bitset;
pub mod context;
pub mod error;
pub mod eval;
pub mod generators;
pub mod lattice;
pub mod relevance;

pub use bitset::{AttrSet, BitSet, ObjSet};
pub use context::FormalContext;
pub use error::{Error, Result};
pub use generators::{brute_force_mingen, face_family, is_generator, minimal_generators, FaceFamily, MinGenSet};
pub use lattice::{brute_force_concepts, ConceptLattice, CoverStrategy, FormalConcept, LatticeOptions};
pub use relevance::{
    conceptual_relevance, score_concept, stability_bruteforce, stability_lattice, Activation, RelevanceScore,
    StabilityMethod, StabilityScore,
};
