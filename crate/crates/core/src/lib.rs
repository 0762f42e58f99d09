//! Surfaces with boundary as ribbon graphs, finite covers by permutation
//! monodromy, and an exact combinatorial self-intersection engine for free
//! homotopy classes of closed curves.
//!
//! The crate certifies, for each admissible cover invariant, that a chosen
//! non-simple closed curve on the base lifts to a simple closed curve in an
//! explicitly constructed cover. Certificates embed the full monodromy data
//! so they can be re-verified without the constructors.

pub mod constructors;
pub mod covers;
pub mod curves;
pub mod fatgraph;
pub mod harness;
pub mod oracle;
pub mod selfint;
pub mod words;

pub use covers::{CoverComplex, CoverInfo, CoverRep, LiftedPath, Perm};
pub use fatgraph::{DirEdge, End, FatGraph, HalfEdge, SurfaceInvariants, SurfaceSpec};
pub use harness::{Certificate, GridBounds, MinDegResult, Report};
pub use selfint::ClosedPath;
pub use words::{CyclicWord, Letter};
