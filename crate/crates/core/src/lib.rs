//! Landau-Zener ladder dynamics mapped to a discrete-time quantum walk on the
//! half line `n >= 0` with a reflecting boundary at the ground state.
//!
//! Three independent routes compute the same amplitudes:
//!
//! * [`walk`] iterates the local recursion directly,
//! * [`pathsum`] enumerates lattice paths and multiplies transfer matrices,
//! * [`genfun`] expands closed-form generating functions as truncated series.
//!
//! [`edge`] extracts the boundary-localized Floquet mode from the pole of the
//! generating functions, together with its thresholds and observables.

pub mod coin;
pub mod edge;
mod error;
pub mod fit;
pub mod genfun;
pub mod pathsum;
pub mod series;
pub mod walk;

pub use coin::{make_boundary_coin, make_bulk_coin, Coin, ComplexAmp, Mat2, ModelParams, Pqrs};
pub use edge::{EdgeReport, EdgeStatus, FloquetMode, Observables};
pub use error::{Error, Result};
pub use genfun::BoundedWalkSeries;
pub use pathsum::{Boundary, Move, PathWord, TransitionAmplitude};
pub use series::Series;
pub use walk::WalkState;
