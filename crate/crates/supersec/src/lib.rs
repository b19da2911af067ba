//! Secure modulation over a two-layer superposed 4-QAM constellation.
//!
//! An information-bearing outer 4-QAM layer rides on a uniformly random
//! inner 4-QAM layer; a power-allocation coefficient `a ∈ (0, 0.5)` splits
//! unit transmit power between them. Starving the outer layer pins an
//! eavesdropper on a noisy channel near chance-level symbol error (0.75 for
//! four symbols) while a legitimate receiver on a cleaner channel still
//! decodes, and the split is chosen analytically against an explicit
//! eavesdropper-error floor.
//!
//! The crate provides:
//!
//! - [`constellation`]: labels, the unit-power alphabet, superposition,
//!   inner-layer recovery, and hard detection;
//! - [`sep`]: closed-form symbol-correctness/error probabilities for the
//!   outer layer, per-region breakdowns included;
//! - [`pac`]: the power-allocation solver (`min SEP_leg` subject to
//!   `SEP_eve >= b`) plus curve/table helpers;
//! - [`capacity`]: wiretap-capacity and equivalent-SNR gap analysis;
//! - [`channel`]: seeded complex-AWGN channels;
//! - [`montecarlo`]: seeded simulation harness that cross-validates every
//!   closed form, and the discrete plug-in mutual-information metric;
//! - [`pipeline`]: end-to-end raw-payload transmission with link metrics;
//! - [`cli`]: the `supersec` command-line front end.
//!
//! All randomness is counter-addressed: any value ever drawn is a pure
//! function of a seed and an index, so parallel and serial runs of the same
//! configuration are bit-identical.

pub mod capacity;
pub mod channel;
pub mod cli;
pub mod constellation;
pub mod error;
pub mod montecarlo;
pub mod pac;
pub mod pipeline;
pub mod rng;
pub mod sep;

pub use constellation::{Bits2, ComplexSample, PacCoefficient, SymbolFrame};
pub use error::{Error, Result};
pub use sep::{NoiseStd, SnrDb};
