//! Simulation primitives for molecular machine learning.
//!
//! * [`ann`]: layered feed-forward networks and phantom-node insertion.
//! * [`grai`]: gene regulatory networks, sub-network extraction and structure mining.
//! * [`popann`]: bacterial populations as network nodes, trained through their sizes.
//! * [`calcium`]: calcium-signaling perceptrons and a two-bit analog-to-digital converter.

pub mod ann;
pub mod calcium;
pub mod config;
pub mod fixtures;
pub mod grai;
pub mod popann;
