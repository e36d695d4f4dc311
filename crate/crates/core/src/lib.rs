//! Position-dependent-mass oscillators, nonstandard Lagrangians and their
//! classical and quantum analysis.

pub mod dynamics;
pub mod error;
pub mod integrate;
pub mod invariants;
pub mod isochrony;
pub mod model;
pub mod quadrature;
pub mod quantum;
pub mod separability;
pub mod tridiag;

pub use error::{Error, Result};
pub use integrate::{integrate_adaptive, IntegratorConfig};
pub use model::{
    DeformParams, NonstdParams, PhaseState2D, RationalFrequencies, State1D, State2D, SystemTag,
    TerminationReason, Trajectory, TrajectoryMeta,
};
pub use dynamics::SystemRhs;
