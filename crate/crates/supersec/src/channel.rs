//! Seeded complex-AWGN channel realizations for the two receivers.

use crate::constellation::{ComplexSample, SymbolFrame};
use crate::rng::IndexedStream;
use crate::sep::NoiseStd;
use serde::Serialize;

/// Receiver tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Receiver {
    Bob,
    Eve,
}

/// One receiver's channel: per-axis noise level plus the seed that makes its
/// noise reproducible.
#[derive(Clone, Copy, Debug)]
pub struct ChannelSpec {
    pub sigma: NoiseStd,
    pub seed: u64,
    pub label: Receiver,
}

impl ChannelSpec {
    /// Noise for symbol `index` — independent Gaussians on the two axes, a
    /// pure function of `(seed, index)`. Processing disjoint index ranges in
    /// any order or in parallel reproduces the serial output bit for bit.
    #[inline]
    pub fn noise(&self, index: u64) -> ComplexSample {
        let (g_re, g_im) = IndexedStream::at(self.seed, index).next_gaussian_pair();
        let s = self.sigma.value();
        ComplexSample::new(s * g_re, s * g_im)
    }
}

/// Add per-axis Gaussian noise of deviation `spec.sigma` to every symbol.
pub fn transmit(frame: &SymbolFrame, spec: &ChannelSpec) -> SymbolFrame {
    SymbolFrame::from_symbols(
        frame
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let n = spec.noise(i as u64);
                ComplexSample::new(p.re + n.re, p.im + n.im)
            })
            .collect(),
    )
}
