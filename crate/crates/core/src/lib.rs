//! Nonmonotonic inference from conditional belief bases and conditional
//! syntax splittings.
//!
//! Worlds over a signature of `n` atoms are the integers `0..2^n`; atom `i`
//! holds in world `w` iff bit `i` of `w` is set.

pub mod conditionals;
pub mod crep;
pub mod fixtures;
pub mod kb;
pub mod logic;
pub mod operators;
pub mod postulates;
pub mod ranking;
pub mod splitting;

pub use conditionals::{BeliefBase, Conditional, LabelSet, TolerancePartition};
pub use kb::KnowledgeBase;
pub use logic::{models, AtomSet, Formula, Signature, WorldSet};
pub use operators::{InferenceOperator, Operator, Relation};
pub use ranking::{Rank, RankingFunction};
pub use splitting::{enumerate_splittings, Splitting};
