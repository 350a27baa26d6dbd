//! Charge-number electrometry with optomechanically induced transparency.
//!
//! A charged mechanical resonator forms the movable mirror of a driven
//! optical cavity. A nearby charged body shifts the resonator's static
//! position, which in turn shifts the cavity detuning, the intracavity
//! photon number and the width of the transparency window seen by a weak
//! probe. This crate computes that chain and inverts it:
//!
//! * [`params`] turns experimental inputs into coupling constants,
//! * [`steady_state`] solves the self-consistent cubic for the static point,
//! * [`response`] evaluates probe spectra and the window's tuning points,
//! * [`oracle`] integrates the mean-value equations in time as a cross-check,
//! * [`inversion`] maps a measured window width back to a charge number,
//! * [`config`], [`table`] and [`commands`] back the `omit` command line tool.

// `!(x > 0.0)` style checks are kept on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod constants;
pub mod error;
pub mod inversion;
pub mod oracle;
pub mod params;
pub mod response;
pub mod steady_state;
pub mod table;

pub use constants::PhysicalConstants;
pub use error::{ErrorKind, OmitError, Result};
pub use params::{derive, validate, DerivedParams, DetuningPolicy, SystemParams, ValidationReport};
pub use steady_state::{solve_steady_state, SteadyState};
