//! Finite set-theoretic solutions of the Yang-Baxter equation, their
//! reflections, and the structures around them: shelves and racks, derived
//! solutions, solution combinators, and skew braces with their reflection
//! census.
//!
//! Everything lives on the carrier `{0..n-1}` and is table-backed. The
//! central objects:
//!
//! * [`map::FiniteMap`] — a total function on the carrier; reflections,
//!   component maps and group elements are all this type.
//! * [`solution::Solution`] — the pair of tables `λ_x(y)`, `ρ_b(a)` with the
//!   braid axioms enforced at construction.
//! * [`shelf::Shelf`] — a self-distributive operation; racks and quandles.
//! * [`reflect`] — the reflection checker, classifier and enumerators.
//! * [`construct`] — matched products, strong semilattices, twisted unions,
//!   rack deformations and the named solution families.
//! * [`brace`] — skew braces, a small-order enumerator, file ingestion, and
//!   the reflection census behind the report tables.
//!
//! All values are immutable after construction; operations are pure, and the
//! heavier enumerations parallelize internally with rayon.

pub mod brace;
pub mod construct;
pub mod error;
pub mod families;
pub mod groups;
pub mod map;
pub mod permgroup;
pub mod reflect;
pub mod report;
pub mod shelf;
pub mod solution;

pub use error::{Error, Result};
pub use map::{FiniteMap, PairMap};
pub use reflect::{ReflectionCounts, ReflectionFlags, ReflectionRecord, ReflectionSet};
pub use shelf::{Shelf, Side};
pub use solution::{Solution, SolutionFlags};
