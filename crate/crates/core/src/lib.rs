//! Hereditarily finite set theory on well-founded extensional digraphs.
//!
//! A finite digraph whose edge relation is well-founded and extensional and
//! which has a vertex (a node below which everything lies) codes a
//! hereditarily finite set through the Mostowski collapse. This crate provides
//! the digraph algebra, the collapse and its inverse, a first-order `∈`-language
//! with Tarski truth over finite transitive sets, the definability operator and
//! the finite constructible levels, and ordinal arithmetic in Cantor normal
//! form.

pub mod coding;
pub mod construct;
pub mod digraph;
pub mod formula;
pub mod hfset;
pub mod ordinal;
pub mod truth;

use thiserror::Error;

/// Any error raised by the crate, with a stable machine-readable code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Digraph(#[from] digraph::DigraphError),
    #[error(transparent)]
    HfSet(#[from] hfset::HfError),
    #[error(transparent)]
    Formula(#[from] formula::FormulaError),
    #[error(transparent)]
    Truth(#[from] truth::TruthError),
    #[error(transparent)]
    Construct(#[from] construct::ConstructError),
    #[error(transparent)]
    Ordinal(#[from] ordinal::OrdinalError),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Digraph(e) => e.code(),
            Error::HfSet(e) => e.code(),
            Error::Formula(e) => e.code(),
            Error::Truth(e) => e.code(),
            Error::Construct(e) => e.code(),
            Error::Ordinal(e) => e.code(),
        }
    }
}
