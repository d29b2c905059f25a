//! Physically reversible projective readout of a spin-s system through a
//! spin-j probe.
//!
//! The probe is prepared in the rotated reference state
//! e^{-i phi J_z} e^{-i theta J_y} |j j>, coupled to the system through an
//! Ising interaction e^{-2 i g J_z S_z}, and read out along the x axis.
//! Conditioned on the probe outcome m, the system is multiplied by the
//! diagonal back-action operator
//!
//! ```text
//! T_m = sum_sigma a_{m sigma} |sigma><sigma| ,
//!
//! a_{m sigma} = 2^{-j} sqrt(C(2j, j+m))
//!               z_+^{j-m} z_-^{j+m} ,
//! z_+- = e^{-i beta/2} cos(theta/2) +- e^{+i beta/2} sin(theta/2) ,
//! beta = 2 g sigma + phi .
//! ```
//!
//! Every a_{m sigma} keeps a nonzero magnitude away from degenerate
//! parameter choices, so each outcome admits a second measurement, with
//! theta and phi replaced by pi - theta and pi - phi, whose outcome
//! m' = -m restores the pre-measurement state exactly. The crate covers
//! the first measurement ([`measure`]), the reversing stage and its
//! success statistics ([`reverse`]), information-disturbance bookkeeping
//! for hypothesis discrimination ([`bayes`]), probes with fluctuating
//! magnitude ([`fluct`]), post-selected state engineering ([`prep`]), and
//! a brute-force tensor-product simulation ([`oracle`]) kept independent
//! of the closed forms for cross-checking.

pub mod bayes;
mod error;
pub mod fluct;
pub mod halfint;
pub mod measure;
mod numeric;
pub mod oracle;
pub mod prep;
pub mod reverse;
pub mod state;
pub mod wigner;

pub use error::{Error, Result};
pub use halfint::HalfInt;
pub use measure::{measure, MeasurementParams, OutcomeTable};
pub use reverse::{joint_measure, reversing_params, JointTable};
pub use state::SpinState;
