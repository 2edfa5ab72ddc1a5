//! Cayley configuration spaces of planar linkages with one degree of freedom.
//!
//! [`graph`] builds construction plans, [`realize`] places vertices, [`space`] computes
//! the interval sets (ELR and QIM), [`motion`] finds paths between realizations and
//! [`vector`] builds complete Cayley vectors. The guide in `book/` walks through them.

pub mod conic;
pub mod error;
pub mod geom;
pub mod graph;
pub mod interval;
pub mod motion;
pub mod realize;
pub mod space;
pub mod vector;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/linkages.md")]
    mod linkages {}
    #[doc = include_str!("../../../book/src/realizations.md")]
    mod realizations {}
    #[doc = include_str!("../../../book/src/spaces.md")]
    mod spaces {}
    #[doc = include_str!("../../../book/src/motion.md")]
    mod motion {}
    #[doc = include_str!("../../../book/src/cayley-vectors.md")]
    mod cayley_vectors {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
