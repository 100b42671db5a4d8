//! Cells, cellular terms, the stretching/shrinking rewrites and the
//! cellularization procedure.
//!
//! A closed term `\y1..yn. u` is cellular when every subterm of `u` headed by
//! one of the `yi` only has free variables among `y1..yn`.

mod cell;
mod cellularize;
mod predicates;
mod rewrite;

use thiserror::Error;

use crate::kernel::KernelError;

pub use cell::{factor_cell, minimal_shell, shallow_cell, Cell, Located, MultiContext};
pub use cellularize::{cellularize, cellularize_semi};
pub use predicates::{is_cellular, is_hereditary_cellular, is_semi_cellular};
pub use rewrite::{shrink, shrink_sites, stretch, ShrinkSite};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CellError {
    #[error(transparent)]
    Kernel(KernelError),
    #[error("term is not closed")]
    NotClosed,
    #[error("term is not semi-cellular")]
    NotSemiCellular,
    #[error("head is not one of the outer binders")]
    HeadNotOuter,
    #[error("not a cell: {0}")]
    NotACell(String),
    #[error("the two occurrences are not the same cell")]
    CellMismatch,
    #[error("hole {k} out of range (cell has {count} holes)")]
    HoleOutOfRange { k: usize, count: usize },
    #[error("inner occurrence is not inside the chosen hole of the outer cell")]
    NotNested,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = CellError> = std::result::Result<T, E>;
