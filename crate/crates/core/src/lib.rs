//! Construction A lattice design toolkit.
//!
//! Builds modulo-2 lattices `C + 2Z^n` from binary linear codes, computes their
//! truncated theta series exactly, estimates word error rate with the truncated
//! union bound and picks the component code that needs the least VNR for a target
//! error rate. The [`osd`] and [`sim`] modules provide an ordered-statistics decoder
//! and a seeded Monte Carlo evaluator to check designs against simulation.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod binmat;
pub mod bound;
pub mod code;
pub mod error;
pub mod gf;
pub mod osd;
pub mod polar;
pub mod registry;
pub mod sim;
pub mod theta;

pub use binmat::{BitMatrix, BitVector};
pub use bound::{DesignOutcome, Rule, VnrDb};
pub use code::{BinaryCode, CodeParams, Family};
pub use error::{Error, Result};
pub use osd::{OsdConfig, OsdDecoder, SoftWord};
pub use polar::{Objective, PolarSpec};
pub use registry::{Registry, RegistryEntry};
pub use sim::{SimConfig, WerEstimate};
pub use theta::TruncatedTheta;
