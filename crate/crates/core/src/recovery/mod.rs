//! Successor recovery from `f_A`, embedding counts, and the semi-isomorphic
//! embeddings used by the tree construction.

mod embed;
mod semi;
mod successor;

use thiserror::Error;

pub use embed::{count_embeddings, count_embeddings_capped, unique_segments, SegmentSequence};
pub use semi::{
    find_semi_embedding, find_semi_embedding_unnormalized, semi_bound, verify_semi_embedding, MarkedBlock,
    SemiEmbedding, SemiProblem, SemiViolation,
};
pub use successor::{recover_successor, recover_successor_traced, reduce_f_to_succ, RecoveryEvent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RecoveryError {
    #[error("budget exhausted")]
    Exhausted,
}
