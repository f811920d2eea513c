//! Vibrational overlap factors of displaced harmonic oscillators, computed
//! three ways and stress-tested two ways.
//!
//! The overlap f_{m,n'}(b) = |<m|n'>|^2 between an oscillator eigenstate and
//! a displaced eigenstate is obtained from
//!
//! * closed forms — polynomial-times-Gaussian expressions for levels up to 3
//!   ([`analytic::fcf_closed_form`]) and an associated-Laguerre evaluation
//!   valid at any level pair ([`analytic::fcf_oracle`]);
//! * direct truncation — squared entries of the translation operator
//!   exp(-i p b) exponentiated in a finite number basis
//!   ([`translation::truncated_fcf`]);
//! * emulated ensemble readouts — a diagonal-tomography chain (dephase,
//!   linear detection, least-squares recovery; [`tomography`]) and an
//!   ancilla-interferometry chain (controlled unitaries read out through an
//!   ancilla coherence; [`moussa`]).
//!
//! Two studies quantify where the emulations stand: [`noise`] injects
//! uniform perturbations into each readout's pre-solve intensities and
//! tracks the spread of the recovered overlaps, and basis-size sweeps against
//! the closed forms expose truncation error. Estimates collect into
//! [`table::FcfTable`] rows that serialize to CSV.

pub mod analytic;
pub mod error;
pub mod linalg;
pub mod moussa;
pub mod noise;
pub mod operator;
pub mod register;
pub mod table;
pub mod tolerances;
pub mod tomography;
pub mod translation;

pub use error::{Error, Result};
