//! Combinatorial specifications of permutation classes.
//!
//! Given a finite basis `B` and the (finite) set of simple permutations of
//! `Av(B)`, this crate builds an equation system over restrictions of the
//! substitution closure, turns it into an unambiguous specification, and
//! derives exact counts and uniform random samplers from it.
//!
//! The pipeline, module by module:
//!
//! * [`perm`], [`decomp`], [`embedding`], [`oracle`]: permutation values,
//!   substitution decomposition, embeddings and brute-force enumeration.
//! * [`simples`]: the simple permutations of the class.
//! * [`ir`]: restrictions, terms, equations and systems.
//! * [`builder`]: the possibly ambiguous system for `Av(B)`.
//! * [`disambiguate`]: rewriting it with disjoint unions only.
//! * [`engine`]: generating-function equations and exact counting.
//! * [`sampler`]: uniform random generation.
//! * [`format`]: the text format of systems.
//! * [`verify`]: oracle checks shared by the tests and the `check` command.

pub mod builder;
pub mod decomp;
pub mod disambiguate;
pub mod embedding;
pub mod engine;
pub mod error;
pub mod format;
pub mod ir;
pub mod oracle;
pub mod perm;
pub mod sampler;
pub mod simples;
pub mod verify;

pub use decomp::{decompose, DecompTree, Root};
pub use embedding::{embeddings, Embedding};
pub use error::{Error, Result};
pub use ir::{Closure, Equation, Flavor, Mode, Restriction, RestrictionTerm, System};
pub use perm::{GenArg, Interval, Perm};
