//! (c, r)-tree Parks puzzles: model and file formats, certificate checking,
//! an exact solver, a reduction from 3-SAT, configuration counting and the
//! integer sequences that go with it.

pub mod census;
pub mod certificate;
pub mod enumerate;
pub mod geom;
pub mod puzzle;
pub mod reduce;
pub mod sequences;
pub mod solver;
pub mod verify;

pub use certificate::{Certificate, CertificateError};
pub use geom::{kings_adjacent, valid_sizes, BoardDims, Cell, Quota};
pub use puzzle::{Puzzle, PuzzleError};
pub use verify::{verify, Verdict, Violation, ViolationKind};
