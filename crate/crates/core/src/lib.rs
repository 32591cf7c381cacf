//! Finite categories, strict monoidal closed bases, enriched categories and
//! (enriched) factorization systems.

pub mod corpus;
pub mod document;
pub mod enriched;
pub mod factor;
pub mod fincat;
pub mod laws;
pub mod monoidal;
pub mod ortho;
pub mod report;
pub mod verdict;

pub use enriched::{EnrichedCategory, VFlags};
pub use fincat::{Cone, Diagram, FinCategory, MorId, ObjId, RawCategory, Square};
pub use monoidal::MonoidalClosed;
pub use ortho::{Mode, MorphismClass};
pub use verdict::{Evidence, Reason, Verdict};
