//! Reidemeister torsion of knot exteriors with SU(2) coefficients and its
//! behaviour under Conway mutation.

pub mod alexander;
pub mod chainlib;
pub mod fgroup;
pub mod mutlab;
pub mod repspace;
pub mod su2;
pub mod torsionform;
pub mod twisted;
