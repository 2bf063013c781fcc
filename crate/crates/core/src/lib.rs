//! Executable constructions around block functions on computable copies of
//! `(ω, <)`: a toy machine model, block recovery, copy builders, successor
//! recovery and priority constructions.

pub mod blocks;
pub mod catalog;
pub mod ce;
pub mod cli;
pub mod copies;
pub mod gen;
pub mod injury;
pub mod log;
pub mod machine;
pub mod notation;
pub mod recovery;
pub mod structure;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/programs.md")]
    mod programs {}
    #[doc = include_str!("../../../book/src/blocks.md")]
    mod blocks {}
    #[doc = include_str!("../../../book/src/copies.md")]
    mod copies {}
    #[doc = include_str!("../../../book/src/recovery.md")]
    mod recovery {}
    #[doc = include_str!("../../../book/src/injury.md")]
    mod injury {}
    #[doc = include_str!("../../../book/src/notation.md")]
    mod notation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
