//! Three independent routes to the Ablowitz-Segur tau function of
//! Painleve II, cross-validated against each other and against direct
//! ODE integration:
//!
//! - `fredholm`: Fredholm determinant of the Airy kernel on [s, oo)
//!   (Nystrom discretization);
//! - `widom`: operator determinant built from Cauchy-type kernels with
//!   phases e^{+-nu} on a pair of shifted vertical contours;
//! - `minor`: Maya-diagram minor expansion with symbolically exact
//!   coefficients over the differential algebra generated by the
//!   contour seed functions.
//!
//! `pii_ode` integrates Painleve II directly from Airy asymptotics and
//! supplies the u^2 = -(log tau)'' consistency oracle; `selftest` wires
//! all the cross checks into one acceptance suite.

pub mod airy;
pub mod calibrate;
pub mod coeffs;
pub mod config;
pub mod dd;
pub mod error;
pub mod fredholm;
pub mod linalg;
pub mod maya;
pub mod minor;
pub mod phase;
pub mod pii_ode;
pub mod quad;
pub mod ratpoly;
pub mod seeds;
pub mod selftest;
pub mod symfn;
pub mod widom;

pub use airy::{airy_ai, AiryValue};
pub use error::{Error, Result};
pub use fredholm::{airy_kernel, tau_airy, AiryFredholmConfig, Method, TauResult};
pub use minor::{tau_minor, tau_truncated_det, MinorConfig};
pub use pii_ode::{solve_pii, ODESolution};
pub use widom::{tau_widom, WidomConfig};
