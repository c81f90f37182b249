//! Poncelet billiard dynamics.
//!
//! The crate covers the billiard twist map attached to a pair of nested
//! circles, rotation numbers of circle-homeomorphism lifts, the search for
//! `n`-Poncelet pairs and the continued-fraction machinery behind the
//! second-order growth estimate for monotone twist families.
//!
//! Everything here is a pure function of its inputs and runs without `std`;
//! only `alloc` is required. File formats and the command-line front end live
//! in the companion `poncelet-cli` crate.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod confrac;
pub mod error;
pub mod family;
pub mod geometry;
pub mod pairs;
mod quadrature;
pub mod rotation;
pub mod scan;
pub mod twist;

pub use error::{Error, Result};
pub use family::{member, ArnoldFamily, CircleFamily, FnFamily, PonceletFamily, Reversed, RigidFamily};
pub use geometry::{AngleState, InvariantCircle, LiftPoint, PonceletConfig, TorusPoint};
pub use rotation::{rotation_number, CircleLift, RationalLock, RotationEstimate, RotationOptions};
pub use confrac::{ContinuedFractionExpansion, Convergent, Rational, FIBONACCI_RECIPROCAL_SUM};
pub use pairs::{count_poncelet_pairs, CountOptions, PairCount, PonceletPair};
pub use scan::{solve_rotation, staircase, Staircase};
pub use twist::{second_order_estimate, SecondOrderReport, SecondOrderStatus, TwistMargin};
