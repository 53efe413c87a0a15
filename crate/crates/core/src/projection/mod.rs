//! Endpoint projection from choreographies to networks.

mod amend;
mod epp;
mod merge;
mod prune;

pub use amend::{amend, needed_selections};
pub use epp::{epp, project_behaviour, ProjectabilityError, UnmergeablePoint};
pub use merge::{merge, MergeConflict};
pub use prune::{behaviour_prunes_to, prunes_to};
