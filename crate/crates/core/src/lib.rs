//! Numerical verification laboratory for convexity-type functional
//! inequalities on the positive half-line, on sequence spaces, and on
//! matrix spaces.
//!
//! The crate is organised around four pillars:
//!
//! * [`functions`] — a catalog of scalar test functions carrying declared
//!   shape flags (monotonicity, convexity, higher-order convexity), a
//!   divided-difference engine, a grid auditor that *certifies* those flags
//!   numerically, and Bernstein approximants.
//! * [`majorization`] — comparisons of decreasing rearrangements
//!   (Hardy–Littlewood–Pólya, weak, truncated) together with the induced
//!   convex-sum inequalities and small-case brute-force oracles.
//! * [`spaces`] — finite-dimensional `l^p` and Schatten-p spaces, their
//!   norms, and classical geometric constants (von Neumann–Jordan and
//!   friends).
//! * [`inequalities`] / [`search`] / [`suite`] — margin-style checkers for
//!   two dozen classical inequalities, randomized falsification and
//!   refinement drivers, and a deterministic batch runner.
//!
//! Every checker reports a signed margin (`big side - small side`) plus an
//! explicit tolerance, and distinguishes "holds", "fails", and
//! "inconclusive because a hypothesis failed its audit".

pub mod error;
pub mod functions;
pub mod inequalities;
pub mod majorization;
pub mod report;
pub mod rng;
pub mod search;
pub mod spaces;
pub mod suite;

pub use error::{Error, Result};
