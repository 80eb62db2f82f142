//! Bond percolation: Newman-Ziff simulation and the path message-passing
//! fixed point.

pub mod curves;
pub mod message_passing;
pub mod newman_ziff;

pub use curves::{
    binomial_weights, empirical_threshold, percolation_curves, EmpiricalThreshold, MicrocanonicalSums, PercolationCurve,
};
pub use message_passing::{message_passing_s1, message_passing_theta, MessageState};
pub use newman_ziff::{newman_ziff_run, newman_ziff_run_with, RunProfile};
