//! Simulation of a linear-optics quantum error-correction experiment.
//!
//! A polarization qubit is encoded into a two-photon logical qubit by a
//! polarizing beam splitter with coincidence post-selection. One photon then
//! suffers a Z-measurement, and a Pockels cell fired by the measurement
//! outcome restores the qubit on the other photon. The crate computes the
//! resulting analyzer curves exactly, samples Poisson counts from them and
//! extracts visibilities and fidelities, including the loss of interference
//! when the two photons are temporally distinguishable.
//!
//! Modules, bottom up:
//! - [`state`]: one- and two-photon states over (path, polarization, time) modes.
//! - [`elements`]: wave plates, beam splitters, the Pockels cell, delays and wiring.
//! - [`detection`]: Z-measurement, post-selection, feed-forward and analyzer curves.
//! - [`experiment`]: the full pipeline, fitting, sampling and the HOM scan.
//! - [`cli`]: manifest-driven front end used by the `loqc-qec` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod cli;
pub mod detection;
pub mod elements;
pub mod error;
pub mod experiment;
pub mod state;

pub use error::{Error, Result};
