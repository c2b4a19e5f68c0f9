//! Bounded exhaustive exploration of restricted-chase derivations, the
//! breadth-first universal-termination semi-decider, and database
//! internalization.

mod decide;
mod explore;
mod internalize;

pub use decide::{decide_bf, DecideOptions, Verdict};
pub use explore::{explore, DepthStats, DerivationTree, TreeNode, TreeNodeKind};
pub use internalize::{internalize, primed_predicate, InternalizeError, INIT_RULE_ID};
