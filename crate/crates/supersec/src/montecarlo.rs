//! Seeded Monte-Carlo estimates that cross-validate the closed-form
//! analytics, plus the discrete symbol-level mutual-information metric.
//!
//! Trial `i` of a run depends only on `(seed, i)`, so totals are identical
//! for any partitioning of the trial range across workers; all reductions
//! are integer counts.

use crate::constellation::{
    detect_outer, recover_outer, superpose_point, Bits2, ComplexSample, PacCoefficient,
};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, IndexedStream};
use crate::sep::{sep, sigma_from_snr, NoiseStd, SnrDb};
use rayon::prelude::*;
use serde::Serialize;

/// Simulated symbol-error-probability estimate with its 99.7% interval.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SepEstimate {
    pub trials: u64,
    pub errors: u64,
    pub point: f64,
    pub ci99_low: f64,
    pub ci99_high: f64,
}

/// Discrete plug-in mutual information between sent and decoded outer labels.
#[derive(Clone, Debug, Serialize)]
pub struct MiEstimate {
    pub value_bits: f64,
    pub joint_counts: [[u64; 4]; 4],
}

/// Joint (sent outer, decoded outer) counts from `trials` independent
/// transmissions: uniform outer and inner labels, superposition at `a`,
/// per-axis Gaussian noise `sigma`, inner-layer recovery, hard detection.
pub fn simulate_confusion(
    a: PacCoefficient,
    sigma: NoiseStd,
    trials: u64,
    seed: u64,
) -> Result<[[u64; 4]; 4]> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    // The sixteen possible transmit points, indexed by (outer, inner) label.
    let mut points = [[ComplexSample::default(); 4]; 4];
    for outer in Bits2::ALL {
        for inner in Bits2::ALL {
            points[outer.value() as usize][inner.value() as usize] =
                superpose_point(outer.point(), inner.point(), a);
        }
    }
    let s = sigma.value();

    let counts = (0..trials)
        .into_par_iter()
        .fold(
            || [[0u64; 4]; 4],
            |mut acc, trial| {
                let mut stream = IndexedStream::at(seed, trial);
                let labels = stream.next_u64();
                let outer = (labels & 0b11) as usize;
                let inner = ((labels >> 2) & 0b11) as usize;
                let (g_re, g_im) = stream.next_gaussian_pair();
                let sent = points[outer][inner];
                let received = ComplexSample::new(sent.re + s * g_re, sent.im + s * g_im);
                let decoded = detect_outer(recover_outer(received, a));
                acc[outer][decoded.value() as usize] += 1;
                acc
            },
        )
        .reduce(
            || [[0u64; 4]; 4],
            |mut lhs, rhs| {
                for (lr, rr) in lhs.iter_mut().zip(rhs.iter()) {
                    for (l, r) in lr.iter_mut().zip(rr.iter()) {
                        *l += r;
                    }
                }
                lhs
            },
        );
    Ok(counts)
}

const CI_ALPHA: f64 = 0.0027; // two-sided complement of the z = 3 level

/// `P(X <= k)` for `X ~ Binomial(n, p)`, valid for small `k` (direct sum of
/// k+1 terms in log space).
fn binomial_cdf_small_k(k: u64, n: u64, p: f64) -> f64 {
    if p <= 0.0 {
        return 1.0;
    }
    if p >= 1.0 {
        return 0.0;
    }
    let ln_p = p.ln();
    let ln_q = (-p).ln_1p();
    let mut ln_choose = 0.0; // ln C(n, j), built up incrementally
    let mut total = 0.0;
    for j in 0..=k {
        if j > 0 {
            ln_choose += ((n - j + 1) as f64).ln() - (j as f64).ln();
        }
        total += (ln_choose + j as f64 * ln_p + (n - j) as f64 * ln_q).exp();
    }
    total.min(1.0)
}

/// Exact Clopper-Pearson bound via bisection on the binomial tail; `tail`
/// maps a candidate p to the tail probability that must equal `target`, and
/// must be monotone decreasing in p.
fn bisect_tail(target: f64, tail: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// 99.7% two-sided binomial interval: z = 3 normal approximation, switching
/// to exact Clopper-Pearson bounds when either count is below 10 (coverage in
/// the near-zero and near-one regimes). The exact bounds only ever involve
/// binomial tails of fewer than ten terms.
fn binomial_ci997(successes: u64, trials: u64) -> (f64, f64) {
    const Z: f64 = 3.0;
    let n = trials as f64;
    let p = successes as f64 / n;
    if successes >= 10 && trials - successes >= 10 {
        let half = Z * (p * (1.0 - p) / n).sqrt();
        return ((p - half).max(0.0), (p + half).min(1.0));
    }
    if trials - successes < 10 && successes >= 10 {
        // mirror the near-one case onto the near-zero one
        let (lo, hi) = binomial_ci997(trials - successes, trials);
        return (1.0 - hi, 1.0 - lo);
    }
    // successes < 10: P(X >= e | p_lo) = a/2 and P(X <= e | p_hi) = a/2
    let e = successes;
    let low = if e == 0 {
        0.0
    } else {
        // tail P(X >= e; p) = 1 - P(X <= e-1; p), increasing in p
        bisect_tail(1.0 - CI_ALPHA / 2.0, move |p| binomial_cdf_small_k(e - 1, trials, p))
    };
    let high = if e == trials {
        1.0
    } else {
        bisect_tail(CI_ALPHA / 2.0, move |p| binomial_cdf_small_k(e, trials, p))
    };
    (low, high)
}

/// Simulated outer-layer SEP with a 99.7% confidence interval.
pub fn estimate_sep(
    a: PacCoefficient,
    sigma: NoiseStd,
    trials: u64,
    seed: u64,
) -> Result<SepEstimate> {
    let counts = simulate_confusion(a, sigma, trials, seed)?;
    let correct: u64 = (0..4).map(|k| counts[k][k]).sum();
    let errors = trials - correct;
    let (ci99_low, ci99_high) = binomial_ci997(errors, trials);
    Ok(SepEstimate {
        trials,
        errors,
        point: errors as f64 / trials as f64,
        ci99_low,
        ci99_high,
    })
}

/// Plug-in mutual information (bits) of the empirical joint distribution of
/// a 4x4 count matrix. All-zero counts are a domain error.
pub fn plugin_mi(joint_counts: &[[u64; 4]; 4]) -> Result<MiEstimate> {
    let total: u64 = joint_counts.iter().flatten().sum();
    if total == 0 {
        return Err(Error::InvalidParameter("all-zero joint counts".into()));
    }
    let mut row = [0u64; 4];
    let mut col = [0u64; 4];
    for (r, counts) in joint_counts.iter().enumerate() {
        for (c, &v) in counts.iter().enumerate() {
            row[r] += v;
            col[c] += v;
        }
    }
    let n = total as f64;
    let mut bits = 0.0;
    for (r, counts) in joint_counts.iter().enumerate() {
        for (c, &v) in counts.iter().enumerate() {
            if v > 0 {
                let joint = v as f64;
                bits += joint / n * ((joint * n) / (row[r] as f64 * col[c] as f64)).log2();
            }
        }
    }
    Ok(MiEstimate {
        value_bits: bits.max(0.0),
        joint_counts: *joint_counts,
    })
}

/// One validation cell: analytic SEP against the simulated interval.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ValidationCell {
    pub a: f64,
    pub snr_db: f64,
    pub sigma: f64,
    pub analytic_sep: f64,
    pub estimate: SepEstimate,
    pub pass: bool,
}

/// Closed-form vs Monte-Carlo validation over a grid.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub trials_per_cell: u64,
    pub cells: Vec<ValidationCell>,
    pub all_pass: bool,
}

/// Check that the closed-form SEP falls inside the simulated 99.7% interval
/// for every `(a, snr)` grid cell. Cell `k` uses the derived sub-seed
/// `derive_seed(seed, k)`.
pub fn validate_closed_form(
    grid: &[(PacCoefficient, SnrDb)],
    trials: u64,
    seed: u64,
) -> Result<ValidationReport> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty validation grid".into()));
    }
    let cells = grid
        .iter()
        .enumerate()
        .map(|(k, &(a, snr))| {
            let sigma = sigma_from_snr(snr);
            let estimate = estimate_sep(a, sigma, trials, derive_seed(seed, k as u64))?;
            let analytic_sep = sep(a, sigma);
            let pass = estimate.ci99_low <= analytic_sep && analytic_sep <= estimate.ci99_high;
            Ok(ValidationCell {
                a: a.value(),
                snr_db: snr.db(),
                sigma: sigma.value(),
                analytic_sep,
                estimate,
                pass,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_pass = cells.iter().all(|c| c.pass);
    Ok(ValidationReport { trials_per_cell: trials, cells, all_pass })
}
