//! Free-energy landscapes, superradiant phase transitions and finite-size
//! exact checks for the Dicke model with nearest-neighbour Y-Y spin coupling.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod landscape;
pub mod model;
pub mod oracle;
pub mod phase;
pub mod quadrature;

pub use error::{Error, Result};
pub use landscape::{find_local_maxima, global_maximizer, LandscapePoint, MaximaReport, ScanSettings};
pub use model::{effective_field_g, landscape_i, omega, quasiparticle_energy, ModelParams, Parameter};
pub use phase::{
    classify_transition, hysteresis_branches, order_parameter, phase_map, sweep, Axis, PhaseMap, PhaseSettings,
    SweepResult, SweepSpec, TransitionOrder, TransitionRecord,
};
pub use quadrature::Quadrature;
