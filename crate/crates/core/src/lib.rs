//! Design and analysis of random constant-weight codes.
//!
//! A constant-weight code uses `N` binary units of which exactly `a` are
//! active in every codeword. This crate answers two questions:
//!
//! * which `(N, a)` pair is cheapest under a monotone cost `C(a, N)` while
//!   still providing `|W|` distinct codewords ([`designer`]), optionally
//!   requiring error-free transmission over an asymmetric bit-flip channel;
//! * how accurate the asymptotic error analysis behind that design is, by
//!   checking it against exact big-integer combinatorics ([`exact_comb`]),
//!   Stirling/Laplace approximations ([`asymptotics`]), error exponents
//!   ([`exponents`]) and Monte Carlo decoding runs ([`simulator`]).
//!
//! All logarithms are natural logarithms.

pub mod asymptotics;
pub mod cli;
pub mod designer;
pub mod error;
pub mod exact_comb;
pub mod exponents;
mod optimize;
pub mod simulator;

pub use designer::{Cost, CostModel, DesignMode, DesignSolution, LinearCost};
pub use error::{Error, Result};
pub use exact_comb::{CodeParams, OverlapSpectrum, WordBudget};
pub use exponents::{ChannelModel, ExponentReport};
pub use simulator::{Codebook, Codeword, SimulationReport};
