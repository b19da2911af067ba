//! Wiretap-capacity and equivalent-SNR gap analysis.
//!
//! The wiretap capacity of the legitimate/eavesdropper channel pair maps to
//! an equivalent single-channel SNR; the secured scheme itself runs the
//! outer layer at power `a·P`, i.e. at an actual equivalent SNR of
//! `10·log10(a·P/σ_leg²)`. The dB gap between the two quantifies the
//! error-free rate given up for the security floor.

use crate::constellation::PacCoefficient;
use crate::error::{Error, Result};
use crate::pac::{self, PacQuery, SolveStatus};
use crate::sep::SnrDb;
use serde::Serialize;

/// Capacity-side view of one operating point.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CapacityReport {
    /// Wiretap capacity in bits/s at the requested bandwidth.
    pub wiretap_capacity_bps: f64,
    /// SNR (dB) of a single channel with that same capacity.
    pub snr_equ_wiretap_db: f64,
    /// Actual equivalent SNR (dB) of the outer layer under the solved
    /// power allocation.
    pub snr_equ_actual_db: f64,
    /// `snr_equ_wiretap_db - snr_equ_actual_db`.
    pub gap_db: f64,
}

/// One cell of the gap curve; `report` is absent when the power-allocation
/// constraint is not active (or the pair has no secrecy margin).
#[derive(Clone, Copy, Debug)]
pub struct CapacityGapCell {
    pub snr_leg: SnrDb,
    pub snr_eve: SnrDb,
    pub msep_b: f64,
    pub pac: Option<PacCoefficient>,
    pub report: Option<CapacityReport>,
}

/// `max{B·log2(1+snr_leg) − B·log2(1+snr_eve), 0}` with linear SNRs.
pub fn wiretap_capacity(snr_leg: SnrDb, snr_eve: SnrDb, bandwidth_hz: f64) -> Result<f64> {
    if !(bandwidth_hz.is_finite() && bandwidth_hz > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bandwidth must be positive, got {bandwidth_hz}"
        )));
    }
    let c = bandwidth_hz * ((1.0 + snr_leg.linear()).log2() - (1.0 + snr_eve.linear()).log2());
    Ok(c.max(0.0))
}

/// SNR of the single channel whose capacity equals the wiretap capacity:
/// `10·log10((1+snr_leg)/(1+snr_eve) − 1)` with linear SNRs. Errors when the
/// ratio is at or below one (no secrecy margin).
pub fn equivalent_snr_wiretap(snr_leg: SnrDb, snr_eve: SnrDb) -> Result<SnrDb> {
    let ratio = (1.0 + snr_leg.linear()) / (1.0 + snr_eve.linear());
    if ratio <= 1.0 {
        return Err(Error::NoSecrecyMargin {
            snr_leg_db: snr_leg.db(),
            snr_eve_db: snr_eve.db(),
        });
    }
    Ok(SnrDb::new(10.0 * (ratio - 1.0).log10()))
}

/// Actual equivalent SNR of the outer layer once the allocation for floor
/// `msep_b` is solved: `10·log10(a·P/σ_leg²) = 10·log10(a) + snr_leg` under
/// the shared unit-power/σ convention. Propagates a non-active solver status
/// as an error.
pub fn equivalent_snr_actual(snr_leg: SnrDb, snr_eve: SnrDb, msep_b: f64) -> Result<SnrDb> {
    let solution = pac::solve(&PacQuery::new(snr_leg, snr_eve, msep_b)?)?;
    match (solution.status, solution.a) {
        (SolveStatus::ConstraintActive, Some(a)) => {
            Ok(SnrDb::new(10.0 * a.value().log10() + snr_leg.db()))
        }
        _ => Err(Error::PacNotActive(solution.status)),
    }
}

/// One report per (snr_leg, msep) pair at a fixed eavesdropper SNR, for CSV
/// or plot export. Cells without an active allocation (or without a secrecy
/// margin) carry no report.
pub fn capacity_gap_curve(
    snr_leg_list: &[SnrDb],
    snr_eve: SnrDb,
    b_list: &[f64],
    bandwidth_hz: f64,
) -> Result<Vec<CapacityGapCell>> {
    let mut cells = Vec::with_capacity(snr_leg_list.len() * b_list.len());
    for &snr_leg in snr_leg_list {
        for &b in b_list {
            let capacity = wiretap_capacity(snr_leg, snr_eve, bandwidth_hz)?;
            let solution = pac::solve(&PacQuery::new(snr_leg, snr_eve, b)?)?;
            let pac_a = match (solution.status, solution.a) {
                (SolveStatus::ConstraintActive, Some(a)) => Some(a),
                _ => None,
            };
            let report = match (pac_a, equivalent_snr_wiretap(snr_leg, snr_eve)) {
                (Some(a), Ok(equ_wiretap)) => {
                    let actual = 10.0 * a.value().log10() + snr_leg.db();
                    Some(CapacityReport {
                        wiretap_capacity_bps: capacity,
                        snr_equ_wiretap_db: equ_wiretap.db(),
                        snr_equ_actual_db: actual,
                        gap_db: equ_wiretap.db() - actual,
                    })
                }
                _ => None,
            };
            cells.push(CapacityGapCell { snr_leg, snr_eve, msep_b: b, pac: pac_a, report });
        }
    }
    Ok(cells)
}
