//! Spectral laboratory for the Majda-Biello system posed on the right half line,
//!
//! ```text
//! u_t + u_xxx + v v_x = 0
//! v_t + alpha v_xxx + (u v)_x = 0        x, t > 0,  0 < alpha < 1
//! (u, v)|_{t=0} = (u0, v0),   (u, v)|_{x=0} = (f, g)
//! ```
//!
//! The solver is built from the explicit integral formulation of the problem:
//! Airy propagator groups acting in Fourier space, a Duhamel integral for the
//! nonlinear forcing, and a Laplace-transform boundary operator that solves the
//! linear half-line problem with prescribed trace. A Picard iteration contracts
//! this map to the fixed point. Alongside the solver, [`analysis`] carries the
//! resonance algebra of the coupled dispersion relations, conserved-quantity
//! monitors, and randomized probes of the linear and bilinear space-time
//! estimates that underpin the contraction argument.
//!
//! Modules:
//! - [`grid`], [`field`], [`norms`]: grids, Fourier conventions, discrete
//!   Sobolev / Bourgain / mixed-Lebesgue norm functionals.
//! - [`propagators`]: exact Airy groups, the Duhamel integral, smooth time cutoffs.
//! - [`extension`]: half-line data, whole-line extensions, half-line Sobolev norms.
//! - [`boundary`]: the oscillatory-integral boundary operator and traces.
//! - [`solver`]: the fixed-point map and the Picard solve loop.
//! - [`analysis`]: resonance roots/identities, conservation drift, estimate probes,
//!   and the difference-energy (Gronwall) monitor.
//!
//! All kernels are value-semantic and re-entrant. With the `parallel` feature
//! (default) the data-parallel inner loops run on rayon; without it the same
//! code compiles to sequential iterators.

pub mod analysis;
pub mod boundary;
pub mod cutoff;
pub mod error;
pub mod extension;
pub mod field;
pub mod grid;
pub mod norms;
pub mod par;
pub mod propagators;
pub mod solver;

pub use error::CoreError;
pub use field::{Complex64, SpaceTimeField, SpectralField};
pub use grid::{Grid1D, SpaceTimeGrid};
pub use norms::{NormKind, NormSpec};
