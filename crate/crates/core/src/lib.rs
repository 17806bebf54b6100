//! Finite lattices and ortholattices: strong extensions and their
//! projections, gluing along a common sublattice, the orthocomplement
//! construction `ortho(L1, L0)`, and polynomial interpolation with
//! shortest-term witnesses.

pub mod bits;
pub mod completion;
pub mod construct;
pub mod dot;
pub mod gen;
pub mod interp;
pub mod io;
pub mod lattice;
pub mod morphism;
pub mod ortho;
pub mod par;
pub mod terms;
pub mod zoo;

pub use completion::{dm_completion, Completion};
pub use construct::{ConstructError, ConstructionResult, ElementOrigin, DEFAULT_SIZE_CAP};
pub use lattice::{validate_lattice, validate_lattice_with, ElementId, FiniteLattice, LatticeError, Poset};
pub use morphism::{Embedding, MorphismError, ProjectionTable, Relation};
pub use ortho::{check_de_morgan, validate_ortho, OrthoError, Ortholattice, Structure};
pub use par::Strategy;
pub use terms::{eval, nnf, parse, Term};
