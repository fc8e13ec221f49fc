//! Transversals, near-transversals, quasi-transversals and k-plexes in Latin
//! squares, the Latin square graph and its 3-domination structure, and
//! validated constructions for cyclic and q-step type squares.

pub mod cells;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod exec;
pub mod latin;
pub mod lsgraph;
pub mod plexes;

pub use cells::{Cell, CellBits, CellSet, PlexKind};
pub use error::{Error, Result};
pub use exec::Exec;
pub use latin::{Generator, Isotopy, LatinRectangle, LatinSquare, OrthogonalArray3, StepTypeSpec};
