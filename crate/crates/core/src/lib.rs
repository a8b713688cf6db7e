//! Discrete-time quantum walks in the polarization ⊗ orbital angular
//! momentum space of a single light beam.
//!
//! The walker is the OAM value `m` of a photon and the coin is its circular
//! polarization. One step is a quarter-wave plate (the coin toss), a q-plate
//! (the polarization-controlled shift `m → m ± 1`) and an optional half-wave
//! plate.
//!
//! ```
//! use oamwalk::{run_walk, CoinState, WalkConfig};
//!
//! let dist = run_walk(&WalkConfig::standard(4, CoinState::balanced())).unwrap();
//! assert!((dist.get(4) - dist.get(-4)).abs() < 1e-12);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod coin;
pub mod error;
pub mod io;
pub mod modes;
pub mod state;
pub mod step;
pub mod two_photon;
pub mod walk;

pub use num_complex::Complex64 as C64;

pub use analysis::{similarity, Bound, CountTable, ViolationReport};
pub use coin::{waveplate_op, CoinOperator, CoinState, Polarization, Waveplate};
pub use error::{Error, Result};
pub use state::{OamWindow, WalkState};
pub use step::{compose_step, evolve, qplate_op, Element, QPlate, StepOperator};
pub use two_photon::{JointDistribution, Label, Model, OutputBasis, SingleParticleUnitary, Stage};
pub use walk::{run_walk, OamDistribution, WalkConfig, WalkOptions};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/coin.md")]
    mod coin {}
    #[doc = include_str!("../../../book/src/steps.md")]
    mod steps {}
    #[doc = include_str!("../../../book/src/single-photon.md")]
    mod single_photon {}
    #[doc = include_str!("../../../book/src/two-photon.md")]
    mod two_photon {}
    #[doc = include_str!("../../../book/src/radial-modes.md")]
    mod radial_modes {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
