//! Exterior algebra `Λ(V*)` over a real frame, extended by anticommuting
//! auxiliary parameters (`ϑ_j`, `da`, `dā`), with the Clifford action,
//! supertraces and the rescalings used by the local index computation.

mod clifford;
mod multivector;
mod rescale;
mod space;
mod spinor;

use core::fmt;

pub use clifford::CliffordElement;
pub use multivector::{Monomial, Multivector};
pub use rescale::{getzler_rescale, psi_t, psi_t_sqrt};
pub use spinor::SpinorRep;
pub use space::{Generator, GeneratorSpace};

#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraError {
    /// Operands live in different generator spaces.
    SpaceMismatch,
    /// Frame index outside `0..n_frame`.
    FrameIndex { index: usize, n_frame: usize },
    /// Generator not present in the space (e.g. `da` without `has_da_dabar`).
    MissingGenerator(Generator),
    /// The frame must have even real dimension `2n`.
    OddFrame(usize),
    /// More generators than a 64-bit monomial key can hold.
    TooManyGenerators(usize),
    /// Rescaling parameter must be strictly positive.
    NonPositiveParameter,
    /// Operation requires an element without auxiliary parameters.
    AuxiliaryNotAllowed,
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::SpaceMismatch => write!(f, "operands belong to different generator spaces"),
            AlgebraError::FrameIndex { index, n_frame } => {
                write!(f, "frame index {index} out of range (frame has {n_frame} covectors)")
            }
            AlgebraError::MissingGenerator(g) => write!(f, "generator {g:?} not in this space"),
            AlgebraError::OddFrame(n) => write!(f, "frame dimension {n} is odd"),
            AlgebraError::TooManyGenerators(n) => write!(f, "{n} generators exceed the 64-bit key"),
            AlgebraError::NonPositiveParameter => write!(f, "rescaling parameter must be positive"),
            AlgebraError::AuxiliaryNotAllowed => write!(f, "element carries auxiliary parameters"),
        }
    }
}

impl core::error::Error for AlgebraError {}
