//! Sums of squares of Hörmander vector fields: exact bracket and index
//! computations, a finite-difference Dirichlet operator on masked boxes, a
//! deterministic sparse eigensolver and checks of eigenvalue asymptotics
//! against the lowest part of the computed spectrum.

pub mod assemble;
pub mod bundled;
pub mod eigen;
pub mod fields;
pub mod geometry;
pub mod pipeline;
pub mod spectral;
