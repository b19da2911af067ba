//! End-to-end payload transmission: raw bytes onto the outer layer, both
//! receivers through their channels, and a metrics report.
//!
//! The payload codec is a plain 2-bits-per-symbol mapper (each byte becomes
//! four outer symbols, most significant pair first), so distortion figures
//! are raw-mapping numbers and reports label them as such. Both receivers
//! run the identical recovery and detection chain; the eavesdropper is
//! assumed to know the power-allocation coefficient.

use crate::channel::{self, ChannelSpec, Receiver};
use crate::constellation::{
    detect_outer, modulate_outer, random_inner, recover_outer, superpose, Bits2, PacCoefficient,
    SymbolFrame,
};
use crate::error::{Error, Result};
use crate::montecarlo::plugin_mi;
use crate::pac::{self, PacQuery, SolveStatus};
use crate::rng::{derive_seed, IndexedStream};
use crate::sep::{qam4_sep, sep, sigma_from_snr, SnrDb};
use serde::{Deserialize, Serialize};

/// Sub-seed stream ids for the independent randomness consumers.
const STREAM_PAYLOAD: u64 = 1;
const STREAM_INNER: u64 = 2;
const STREAM_BOB: u64 = 3;
const STREAM_EVE: u64 = 4;

/// What the transmitted bytes are.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PayloadKind {
    /// Seed-generated random payload of (at least) this many symbols,
    /// rounded up to whole bytes (4 symbols per byte).
    RandomBits { symbols: u64 },
    /// Caller-supplied opaque bytes.
    RawBytes,
    /// Caller-supplied raw 24-bit RGB image, row-major, 3·width·height bytes;
    /// enables the PSNR metric.
    RawImage { width: u32, height: u32 },
}

/// Transmission knobs. Exactly one of `msep_b` / `pac_a` must drive the power
/// allocation while superposition is enabled; with superposition bypassed the
/// outer layer is sent alone at full power and neither is used.
#[derive(Clone, Debug)]
pub struct TransmitConfig {
    pub snr_leg: SnrDb,
    pub snr_eve: SnrDb,
    pub msep_b: Option<f64>,
    pub pac_a: Option<PacCoefficient>,
    pub seed: u64,
    pub payload_kind: PayloadKind,
    pub superposition_enabled: bool,
    /// What-if: the eavesdropper's true SNR when it differs from the design
    /// value (`snr_eve` still drives the allocation).
    pub snr_eve_actual: Option<SnrDb>,
}

/// Per-receiver link metrics.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ReceiverMetrics {
    pub ser: f64,
    pub ber: f64,
    pub symbol_errors: u64,
    pub bit_errors: u64,
    /// Mean squared error over payload bytes.
    pub mse: f64,
    /// Peak SNR in dB (MAX = 255); image payloads only, absent when the
    /// byte stream decoded error-free.
    pub psnr_db: Option<f64>,
    /// Plug-in mutual information between sent and decoded outer labels.
    pub mi_bits: f64,
}

/// Everything measured for one transmission.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransmissionReport {
    /// Distortion figures are raw-mapping numbers (no learned codec).
    pub codec: String,
    pub superposition_enabled: bool,
    pub snr_leg_db: f64,
    pub snr_eve_db: f64,
    pub snr_eve_actual_db: Option<f64>,
    pub seed: u64,
    pub msep_b: Option<f64>,
    /// Power-allocation coefficient in effect; absent with superposition off.
    pub pac_used: Option<f64>,
    pub sep_analytic_leg: f64,
    pub sep_analytic_eve: f64,
    /// Analytic eavesdropper SEP at the actual (what-if) SNR, when set.
    pub sep_analytic_eve_actual: Option<f64>,
    pub symbols: u64,
    pub source_bytes: u64,
    /// Zero-bit padding appended to fill the last symbol; always 0 for whole-
    /// byte payloads, kept for schema stability.
    pub padded_bits: u32,
    /// Raw-mapper metadata (4 symbols per source byte).
    pub symbols_per_source_byte: f64,
    pub bob: ReceiverMetrics,
    pub eve: ReceiverMetrics,
}

fn random_payload_bytes(seed: u64, count: u64) -> Vec<u8> {
    (0..count)
        .map(|i| (IndexedStream::at(seed, i).next_u64() & 0xff) as u8)
        .collect()
}

fn bytes_to_labels(bytes: &[u8]) -> Vec<Bits2> {
    bytes
        .iter()
        .flat_map(|&b| {
            [
                Bits2::from_low_bits(b >> 6),
                Bits2::from_low_bits(b >> 4),
                Bits2::from_low_bits(b >> 2),
                Bits2::from_low_bits(b),
            ]
        })
        .collect()
}

fn labels_to_bytes(labels: &[Bits2]) -> Vec<u8> {
    labels
        .chunks(4)
        .map(|c| {
            c.iter()
                .fold(0u8, |acc, l| (acc << 2) | l.value())
        })
        .collect()
}

fn score_receiver(
    transmitted: &SymbolFrame,
    spec: &ChannelSpec,
    pac: Option<PacCoefficient>,
    sent_labels: &[Bits2],
    sent_bytes: &[u8],
    is_image: bool,
) -> Result<ReceiverMetrics> {
    let received = channel::transmit(transmitted, spec);
    let decoded: Vec<Bits2> = received
        .iter()
        .map(|&p| {
            let point = match pac {
                Some(a) => recover_outer(p, a),
                None => p,
            };
            detect_outer(point)
        })
        .collect();

    let mut joint = [[0u64; 4]; 4];
    let mut bit_errors = 0u64;
    for (s, d) in sent_labels.iter().zip(decoded.iter()) {
        joint[s.value() as usize][d.value() as usize] += 1;
        bit_errors += (s.value() ^ d.value()).count_ones() as u64;
    }
    let n = sent_labels.len() as u64;
    let correct: u64 = (0..4).map(|k| joint[k][k]).sum();
    let symbol_errors = n - correct;

    let decoded_bytes = labels_to_bytes(&decoded);
    let sq_err: u64 = sent_bytes
        .iter()
        .zip(decoded_bytes.iter())
        .map(|(&x, &y)| {
            let d = x as i64 - y as i64;
            (d * d) as u64
        })
        .sum();
    let mse = sq_err as f64 / sent_bytes.len() as f64;
    let psnr_db = if is_image && mse > 0.0 {
        Some(10.0 * (255.0f64 * 255.0 / mse).log10())
    } else {
        None
    };

    Ok(ReceiverMetrics {
        ser: symbol_errors as f64 / n as f64,
        ber: bit_errors as f64 / (2 * n) as f64,
        symbol_errors,
        bit_errors,
        mse,
        psnr_db,
        mi_bits: plugin_mi(&joint)?.value_bits,
    })
}

/// Transmit a payload to both receivers and measure the outcome.
///
/// For `RandomBits` the `payload` argument is ignored and the bytes are
/// generated from the seed; the other kinds require a nonempty `payload`.
pub fn transmit_payload(payload: &[u8], config: &TransmitConfig) -> Result<TransmissionReport> {
    let generated;
    let bytes: &[u8] = match config.payload_kind {
        PayloadKind::RandomBits { symbols } => {
            if symbols == 0 {
                return Err(Error::InvalidParameter("random payload needs symbols >= 1".into()));
            }
            generated = random_payload_bytes(derive_seed(config.seed, STREAM_PAYLOAD), symbols.div_ceil(4));
            &generated
        }
        PayloadKind::RawBytes => payload,
        PayloadKind::RawImage { width, height } => {
            let expected = 3 * width as usize * height as usize;
            if payload.len() != expected {
                return Err(Error::InvalidParameter(format!(
                    "raw image payload must be 3*{width}*{height} = {expected} bytes, got {}",
                    payload.len()
                )));
            }
            payload
        }
    };
    if bytes.is_empty() {
        return Err(Error::InvalidParameter("empty payload".into()));
    }

    let (pac, msep_b) = if config.superposition_enabled {
        match (config.pac_a, config.msep_b) {
            (Some(a), None) => (Some(a), None),
            (None, Some(b)) => {
                let query = PacQuery::new(config.snr_leg, config.snr_eve, b)?;
                let solution = pac::solve(&query)?;
                match (solution.status, solution.a) {
                    (SolveStatus::ConstraintActive, Some(a)) => (Some(a), Some(b)),
                    _ => return Err(Error::PacNotActive(solution.status)),
                }
            }
            _ => {
                return Err(Error::InvalidParameter(
                    "exactly one of msep_b / pac_a must be set when superposition is enabled"
                        .into(),
                ))
            }
        }
    } else {
        (None, None)
    };

    let labels = bytes_to_labels(bytes);
    let outer = modulate_outer(&labels);
    let transmitted = match pac {
        Some(a) => {
            let inner = random_inner(labels.len(), derive_seed(config.seed, STREAM_INNER));
            superpose(&outer, &inner, a)?
        }
        // Bypass: the outer frame goes out alone at full unit power.
        None => outer,
    };

    let sigma_leg = sigma_from_snr(config.snr_leg);
    let sigma_eve_design = sigma_from_snr(config.snr_eve);
    let snr_eve_actual = config.snr_eve_actual.unwrap_or(config.snr_eve);
    let sigma_eve_actual = sigma_from_snr(snr_eve_actual);

    let bob = score_receiver(
        &transmitted,
        &ChannelSpec { sigma: sigma_leg, seed: derive_seed(config.seed, STREAM_BOB), label: Receiver::Bob },
        pac,
        &labels,
        bytes,
        matches!(config.payload_kind, PayloadKind::RawImage { .. }),
    )?;
    let eve = score_receiver(
        &transmitted,
        &ChannelSpec { sigma: sigma_eve_actual, seed: derive_seed(config.seed, STREAM_EVE), label: Receiver::Eve },
        pac,
        &labels,
        bytes,
        matches!(config.payload_kind, PayloadKind::RawImage { .. }),
    )?;

    let (sep_leg, sep_eve, sep_eve_actual) = match pac {
        Some(a) => (
            sep(a, sigma_leg),
            sep(a, sigma_eve_design),
            config.snr_eve_actual.map(|_| sep(a, sigma_eve_actual)),
        ),
        None => (
            qam4_sep(sigma_leg),
            qam4_sep(sigma_eve_design),
            config.snr_eve_actual.map(|_| qam4_sep(sigma_eve_actual)),
        ),
    };

    Ok(TransmissionReport {
        codec: "raw-mapping".into(),
        superposition_enabled: config.superposition_enabled,
        snr_leg_db: config.snr_leg.db(),
        snr_eve_db: config.snr_eve.db(),
        snr_eve_actual_db: config.snr_eve_actual.map(|s| s.db()),
        seed: config.seed,
        msep_b,
        pac_used: pac.map(|a| a.value()),
        sep_analytic_leg: sep_leg,
        sep_analytic_eve: sep_eve,
        sep_analytic_eve_actual: sep_eve_actual,
        symbols: labels.len() as u64,
        source_bytes: bytes.len() as u64,
        padded_bits: 0,
        symbols_per_source_byte: 4.0,
        bob,
        eve,
    })
}
