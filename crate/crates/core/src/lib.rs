//! MMSE equalization for offset-QAM signaling over multipath channels.
//!
//! Three equalizer families act on the sampled matched-filter output of an
//! OQAM/OQPSK link: the classical linear equalizer (LE), the widely linear
//! equalizer (WLE), and a real-only equalizer (ROE) that works on the
//! informative real components only. The crate provides:
//!
//! * block (known-CSI) equalizers plus the diagonal-transform algebra that
//!   makes ROE and WLE output-equivalent,
//! * closed-form average-MMSE evaluation and the LE-vs-ROE gap term,
//! * NLMS adaptive variants with an instrumented real-multiplication
//!   counter,
//! * a seed-deterministic simulation chain (frames, multipath, matched
//!   filter) and Monte Carlo helpers that parallelize with rayon when the
//!   `parallel` feature (default) is enabled.

pub mod equalizers;
pub mod error;
pub mod linalg;
pub mod mmse;
pub mod nlms;
pub mod runner;
pub mod signal;
pub mod tol;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
