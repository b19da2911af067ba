//! Power-allocation solver: pick the largest coefficient that keeps the
//! eavesdropper's symbol error probability at or above a required floor,
//! plus curve and table helpers built on it.
//!
//! The eavesdropper's SEP falls as more power moves to the outer layer, so
//! the security constraint `SEP_eve(a) >= b` caps the usable allocation. A
//! solution with `ConstraintActive` status sits on that boundary: it is the
//! root of `SEP_eve(a) = b`, found by bisection after the monotonicity of
//! `SEP_eve` has been verified on a dense grid. When the floor holds across
//! the whole interval the constraint never binds and the unconstrained
//! legitimate-SEP minimizer is reported instead.

use crate::constellation::PacCoefficient;
use crate::error::{Error, Result};
use crate::sep::{sep, sigma_from_snr, NoiseStd, SnrDb};
use serde::Serialize;

/// Scan grid step in `a` for monotonicity checks and minimizer searches.
const A_GRID_STEP: f64 = 1e-4;
/// The working interval; (0, 0.5) is open at both ends.
const A_MIN: f64 = 1e-9;
const A_MAX: f64 = 0.5 - 1e-9;
/// Bisection stops once the eavesdropper SEP is this close to the floor.
const SEP_TOL: f64 = 1e-6;

/// One solver query: the two channel qualities and the eavesdropper SEP
/// floor (minimum SEP, the security knob).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PacQuery {
    snr_leg: SnrDb,
    snr_eve: SnrDb,
    msep_b: f64,
}

impl PacQuery {
    pub fn new(snr_leg: SnrDb, snr_eve: SnrDb, msep_b: f64) -> Result<Self> {
        if !(msep_b > 0.0 && msep_b < 0.75) {
            return Err(Error::InvalidParameter(format!(
                "msep threshold must lie in (0, 0.75), got {msep_b}"
            )));
        }
        Ok(Self { snr_leg, snr_eve, msep_b })
    }

    pub fn snr_leg(&self) -> SnrDb {
        self.snr_leg
    }

    pub fn snr_eve(&self) -> SnrDb {
        self.snr_eve
    }

    pub fn msep_b(&self) -> f64 {
        self.msep_b
    }
}

/// How the security constraint interacted with the solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    /// The floor binds; the returned coefficient sits on `SEP_eve(a) = b`.
    ConstraintActive,
    /// `SEP_eve(a) >= b` holds everywhere in (0, 0.5); the returned
    /// coefficient is the unconstrained legitimate-SEP minimizer, attached
    /// for information. Table output renders this case as '-'.
    ConstraintNonBinding,
    /// No coefficient satisfies the floor (only possible for b near 0.75).
    Infeasible,
}

/// Solver output: the chosen coefficient (absent when infeasible) and both
/// receivers' SEP at it.
#[derive(Clone, Copy, Debug)]
pub struct PacSolution {
    pub a: Option<PacCoefficient>,
    pub sep_leg: f64,
    pub sep_eve: f64,
    pub status: SolveStatus,
}

fn pac(a: f64) -> PacCoefficient {
    PacCoefficient::new(a).expect("search grid stays inside (0, 0.5)")
}

/// Verify that the eavesdropper SEP is nonincreasing in `a` on the scan grid.
/// The derivation offers no proof of this, so it is checked per query before
/// any bisection; a violation is a hard error.
fn check_eve_monotone(sigma_eve: NoiseStd, snr_eve: SnrDb) -> Result<()> {
    let mut prev = f64::INFINITY;
    let mut k = 1u32;
    loop {
        let a = k as f64 * A_GRID_STEP;
        if a >= 0.5 {
            return Ok(());
        }
        let v = sep(pac(a), sigma_eve);
        if v > prev + 1e-12 {
            return Err(Error::NonMonotoneEveSep { snr_eve_db: snr_eve.db() });
        }
        prev = v;
        k += 1;
    }
}

/// Unconstrained minimizer of `SEP(a, sigma)` over (0, a_hi]: dense grid scan
/// followed by a golden-section polish inside the bracketing cells.
fn argmin_sep(sigma: NoiseStd, a_hi: f64) -> PacCoefficient {
    let mut best_a = A_MIN;
    let mut best = sep(pac(A_MIN), sigma);
    let mut k = 1u32;
    loop {
        let a = k as f64 * A_GRID_STEP;
        if a > a_hi {
            break;
        }
        let v = sep(pac(a), sigma);
        if v < best {
            best = v;
            best_a = a;
        }
        k += 1;
    }
    // golden-section refinement around the best grid point
    let inv_phi = 0.618_033_988_749_894_9_f64;
    let mut lo = (best_a - A_GRID_STEP).max(A_MIN);
    let mut hi = (best_a + A_GRID_STEP).min(a_hi);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = sep(pac(x1), sigma);
    let mut f2 = sep(pac(x2), sigma);
    for _ in 0..80 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = sep(pac(x1), sigma);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = sep(pac(x2), sigma);
        }
    }
    let mid = 0.5 * (lo + hi);
    if sep(pac(mid), sigma) <= best {
        pac(mid)
    } else {
        pac(best_a)
    }
}

/// Solve `min SEP_leg(a)  s.t.  SEP_eve(a) >= b` over a in (0, 0.5).
///
/// The eavesdropper SEP is verified nonincreasing first. When the floor
/// crosses inside the interval, the feasible set is `(0, a_root]` with
/// `SEP_leg` decreasing toward the boundary for every operating point this
/// scheme targets, so the boundary root is returned (status
/// `ConstraintActive`, held to `SEP_TOL` from the feasible side: the returned
/// solution never violates the floor).
pub fn solve(query: &PacQuery) -> Result<PacSolution> {
    let sigma_leg = sigma_from_snr(query.snr_leg());
    let sigma_eve = sigma_from_snr(query.snr_eve());
    let b = query.msep_b();

    check_eve_monotone(sigma_eve, query.snr_eve())?;

    let eve = |a: f64| sep(pac(a), sigma_eve);

    if eve(A_MIN) < b {
        // Even a vanishing outer layer leaks too much: nothing satisfies b.
        return Ok(PacSolution {
            a: None,
            sep_leg: sep(pac(A_MIN), sigma_leg),
            sep_eve: eve(A_MIN),
            status: SolveStatus::Infeasible,
        });
    }
    if eve(A_MAX) >= b {
        let a = argmin_sep(sigma_leg, A_MAX);
        return Ok(PacSolution {
            a: Some(a),
            sep_leg: sep(a, sigma_leg),
            sep_eve: sep(a, sigma_eve),
            status: SolveStatus::ConstraintNonBinding,
        });
    }

    // Bisect with `lo` pinned to the feasible side.
    let (mut lo, mut hi) = (A_MIN, A_MAX);
    let mut sep_lo = eve(lo);
    let mut iterations = 0;
    while sep_lo - b > SEP_TOL && hi - lo > f64::EPSILON && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        let v = eve(mid);
        if v >= b {
            lo = mid;
            sep_lo = v;
        } else {
            hi = mid;
        }
        iterations += 1;
    }

    let a = pac(lo);
    Ok(PacSolution {
        a: Some(a),
        sep_leg: sep(a, sigma_leg),
        sep_eve: sep_lo,
        status: SolveStatus::ConstraintActive,
    })
}

/// Pointwise SEP evaluations over a coefficient grid, ready for CSV export.
pub fn sep_curve(snr: SnrDb, a_grid: &[PacCoefficient]) -> Vec<(f64, f64)> {
    let sigma = sigma_from_snr(snr);
    a_grid.iter().map(|&a| (a.value(), sep(a, sigma))).collect()
}

/// One table cell: the query coordinates and the solution.
#[derive(Clone, Copy, Debug)]
pub struct PacTableRow {
    pub snr_leg: SnrDb,
    pub snr_eve: SnrDb,
    pub msep_b: f64,
    pub solution: PacSolution,
}

/// Solve the full (snr_eve, msep) grid; rows keep the input ordering
/// (eavesdropper SNR outer, threshold inner) and per-cell statuses are
/// carried in the rows rather than failing the table.
pub fn pac_table(snr_leg: SnrDb, snr_eve_list: &[SnrDb], b_list: &[f64]) -> Result<Vec<PacTableRow>> {
    let mut rows = Vec::with_capacity(snr_eve_list.len() * b_list.len());
    for &snr_eve in snr_eve_list {
        for &b in b_list {
            let query = PacQuery::new(snr_leg, snr_eve, b)?;
            let solution = solve(&query)?;
            rows.push(PacTableRow { snr_leg, snr_eve, msep_b: b, solution });
        }
    }
    Ok(rows)
}
