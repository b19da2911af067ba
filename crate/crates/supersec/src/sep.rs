//! Closed-form symbol-correctness and symbol-error probabilities for decoding
//! the outer layer of the superposed constellation.
//!
//! With per-axis offsets `d_outer = √(a/2)` (outer point from its inner
//! centre) and `d_inner = √((1−a)/2)` (inner centre from the origin), every
//! region probability factors into a product of two per-axis Gaussian
//! integrals expressed through the Q-function. The sixteen region
//! probabilities are computed for the inner-'00' case; by the quarter-turn
//! symmetry of the constellation the resulting SEP equals the SEP averaged
//! over all four inner symbols, so no other inner case is evaluated.

use crate::constellation::{Bits2, PacCoefficient};
use crate::error::{Error, Result};
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

/// Per-axis noise standard deviation, dimensionless amplitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseStd(f64);

impl NoiseStd {
    pub fn new(sigma: f64) -> Result<Self> {
        if sigma.is_finite() && sigma > 0.0 {
            Ok(Self(sigma))
        } else {
            Err(Error::InvalidParameter(format!(
                "noise standard deviation must be positive and finite, got {sigma}"
            )))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Signal-to-noise ratio in dB.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct SnrDb(f64);

impl SnrDb {
    pub fn new(db: f64) -> Self {
        Self(db)
    }

    #[inline]
    pub fn db(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn linear(self) -> f64 {
        10f64.powf(self.0 / 10.0)
    }
}

/// Gaussian upper-tail probability `Q(x) = P(N(0,1) > x)`.
///
/// Evaluated through the complementary error function (correctly-rounded
/// libm port); absolute error is below 1e-15 over |x| <= 8 and the tails
/// underflow smoothly rather than clamping, which keeps SEP(a) strictly
/// monotone where the optimizer needs it.
#[inline]
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// Per-axis noise standard deviation of a channel at `snr` with unit transmit
/// power: `σ = 10^(−snr/20)`.
///
/// This is the calibration under which the closed forms, the channel
/// simulator, and the dB bookkeeping all agree; `sigma² = P / snr_linear`.
pub fn sigma_from_snr(snr: SnrDb) -> NoiseStd {
    NoiseStd(10f64.powf(-snr.db() / 20.0))
}

/// All sixteen region probabilities for the inner-'00' case, the four
/// per-outer-symbol correctness sums, and the final SEP.
#[derive(Clone, Debug, PartialEq)]
pub struct SepBreakdown {
    /// `cells[sent outer label][landed inner label]`: probability that a
    /// symbol sent as (inner '00', outer `sent`) lands in the region labelled
    /// (inner `landed`, outer `sent`).
    cells: [[f64; 4]; 4],
    outer: [f64; 4],
    sep: f64,
}

impl SepBreakdown {
    #[inline]
    pub fn cell(&self, sent_outer: Bits2, landed_inner: Bits2) -> f64 {
        self.cells[sent_outer.value() as usize][landed_inner.value() as usize]
    }

    /// Probability of correctly decoding outer symbol `sent_outer` (the sum
    /// of its four region cells).
    #[inline]
    pub fn outer(&self, sent_outer: Bits2) -> f64 {
        self.outer[sent_outer.value() as usize]
    }

    #[inline]
    pub fn sep(&self) -> f64 {
        self.sep
    }
}

/// Evaluate every correctness cell for the inner-'00' case and fold them into
/// per-outer-symbol sums and the final SEP (uniform priors over the four
/// outer symbols).
pub fn scp_breakdown(a: PacCoefficient, sigma: NoiseStd) -> SepBreakdown {
    let (d_outer, d_inner) = a.axis_offsets();
    let s = sigma.value();

    // Per-axis landing probabilities. A sent coordinate sits on the outer
    // side of its inner centre (axis bit 0, at d_inner + d_outer) or on the
    // inner side (axis bit 1, at d_inner - d_outer). Decoding the axis bit
    // succeeds either in the sent column ("keep") or across the origin in the
    // outermost column whose outer bit agrees ("cross"). Tiny negative values
    // from cancellation are clamped; each term is a probability.
    let clamp = |p: f64| p.clamp(0.0, 1.0);
    let keep_inner = clamp(q_function(-(d_inner - d_outer) / s) - q_function(d_outer / s));
    let keep_outer = clamp(q_function(-d_outer / s));
    let cross_inner = clamp(q_function((2.0 * d_inner - d_outer) / s));
    let cross_outer =
        clamp(q_function(-(2.0 * d_inner + d_outer) / s) - q_function(-(d_inner + d_outer) / s));

    let axis = |sent_inner_side: bool, landed_crossed: bool| -> f64 {
        match (sent_inner_side, landed_crossed) {
            (true, false) => keep_inner,
            (true, true) => cross_inner,
            (false, false) => keep_outer,
            (false, true) => cross_outer,
        }
    };

    let mut cells = [[0.0; 4]; 4];
    let mut outer = [0.0; 4];
    for sent in Bits2::ALL {
        for landed in Bits2::ALL {
            let re = axis(sent.value() & 0b10 != 0, landed.value() & 0b10 != 0);
            let im = axis(sent.value() & 0b01 != 0, landed.value() & 0b01 != 0);
            cells[sent.value() as usize][landed.value() as usize] = re * im;
        }
        outer[sent.value() as usize] = cells[sent.value() as usize].iter().sum();
    }
    let sep = 1.0 - outer.iter().sum::<f64>() / 4.0;
    SepBreakdown { cells, outer, sep }
}

/// Outer-layer symbol error probability at power allocation `a` and per-axis
/// noise level `sigma`.
pub fn sep(a: PacCoefficient, sigma: NoiseStd) -> f64 {
    scp_breakdown(a, sigma).sep()
}

/// SEP of plain single-layer 4-QAM at unit power: the reference path when
/// superposition is bypassed and the outer frame is sent as-is.
pub fn qam4_sep(sigma: NoiseStd) -> f64 {
    let per_axis_ok = 1.0 - q_function(FRAC_1_SQRT_2 / sigma.value());
    1.0 - per_axis_ok * per_axis_ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn a(v: f64) -> PacCoefficient {
        PacCoefficient::new(v).unwrap()
    }

    fn lbl(s: &str) -> Bits2 {
        Bits2::new(u8::from_str_radix(s, 2).unwrap()).unwrap()
    }

    /// Independent oracle for Q: composite Simpson integration of the
    /// defining Gaussian-tail integral, truncated where the integrand is
    /// below 1e-18.
    fn q_oracle(x: f64) -> f64 {
        let upper = x.abs().max(10.0) + 10.0;
        let n = 400_000;
        let h = (upper - x) / n as f64;
        let density = |u: f64| (-u * u / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut acc = density(x) + density(upper);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * density(x + k as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn q_function_matches_quadrature_oracle() {
        for &x in &[-8.0, -3.0, -1.0, -0.5, 0.1, 0.5, 1.0, 2.0, 3.5, 5.0, 8.0] {
            assert_abs_diff_eq!(q_function(x), q_oracle(x), epsilon = 1e-12);
        }
        // frozen quadrature value for the reference point
        assert_abs_diff_eq!(q_function(2.0), 0.022_750_131_948_179_21, epsilon = 1e-12);
    }

    #[test]
    fn q_function_halves_at_zero_and_complements() {
        assert_eq!(q_function(0.0), 0.5);
        for &x in &[0.3, 1.7, 4.2, 7.9] {
            assert_abs_diff_eq!(q_function(x) + q_function(-x), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn q_function_is_monotone_nonincreasing() {
        let mut prev = f64::INFINITY;
        let mut x = -8.0;
        while x <= 8.0 {
            let v = q_function(x);
            assert!(v <= prev);
            prev = v;
            x += 0.01;
        }
    }

    #[test]
    fn sigma_from_snr_reference_points() {
        assert_abs_diff_eq!(sigma_from_snr(SnrDb::new(20.0)).value(), 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(sigma_from_snr(SnrDb::new(0.0)).value(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            sigma_from_snr(SnrDb::new(-15.0)).value(),
            5.623_413_251_903_491,
            epsilon = 1e-12
        );
    }

    #[test]
    fn noise_std_rejects_nonpositive() {
        assert!(NoiseStd::new(0.0).is_err());
        assert!(NoiseStd::new(-1.0).is_err());
        assert!(NoiseStd::new(f64::INFINITY).is_err());
    }

    /// Printed reference breakdown at a = 0.040 for the noisier receiver
    /// (SNR −15 dB): sixteen cells, four outer sums, and the SEP, all to the
    /// reference 4-decimal precision.
    #[test]
    fn breakdown_matches_reference_table_low_snr() {
        let b = scp_breakdown(a(0.040), sigma_from_snr(SnrDb::new(-15.0)));
        let expect = [
            // (sent outer, landed inner, value)
            ("10", "00", 0.0250),
            ("00", "00", 0.2601),
            ("11", "00", 0.0024),
            ("01", "00", 0.0250),
            ("10", "10", 0.2104),
            ("00", "10", 0.0245),
            ("11", "10", 0.0202),
            ("01", "10", 0.0024),
            ("10", "11", 0.0198),
            ("00", "11", 0.0023),
            ("11", "11", 0.1701),
            ("01", "11", 0.0198),
            ("10", "01", 0.0024),
            ("00", "01", 0.0245),
            ("11", "01", 0.0202),
            ("01", "01", 0.2104),
        ];
        for (sent, landed, value) in expect {
            assert_abs_diff_eq!(b.cell(lbl(sent), lbl(landed)), value, epsilon = 1e-3);
        }
        assert_abs_diff_eq!(b.outer(lbl("10")), 0.2576, epsilon = 1e-3);
        assert_abs_diff_eq!(b.outer(lbl("00")), 0.3115, epsilon = 1e-3);
        assert_abs_diff_eq!(b.outer(lbl("11")), 0.2130, epsilon = 1e-3);
        assert_abs_diff_eq!(b.outer(lbl("01")), 0.2576, epsilon = 1e-3);
        assert_abs_diff_eq!(b.sep(), 0.7401, epsilon = 1e-3);
        // tighter regression pin against the high-precision evaluation
        assert_abs_diff_eq!(b.sep(), 0.74009607, epsilon = 1e-7);
    }

    /// Same coefficient on the clean channel (SNR 20 dB): diagonal cells at
    /// 0.8489, cross-quadrant cells at zero, SEP 0.1511.
    #[test]
    fn breakdown_matches_reference_table_high_snr() {
        let b = scp_breakdown(a(0.040), sigma_from_snr(SnrDb::new(20.0)));
        for sent in Bits2::ALL {
            assert_abs_diff_eq!(b.cell(sent, lbl("00")), 0.8489, epsilon = 1e-3);
            for landed in [lbl("10"), lbl("11"), lbl("01")] {
                assert_abs_diff_eq!(b.cell(sent, landed), 0.0, epsilon = 1e-3);
            }
            assert_abs_diff_eq!(b.outer(sent), 0.8489, epsilon = 1e-3);
        }
        assert_abs_diff_eq!(b.sep(), 0.1511, epsilon = 1e-3);
        assert_abs_diff_eq!(b.sep(), 0.15111346, epsilon = 1e-7);
    }

    #[test]
    fn breakdown_sums_are_consistent() {
        for &(av, snr) in &[(0.04, -15.0), (0.2, 0.0), (0.45, 20.0)] {
            let b = scp_breakdown(a(av), sigma_from_snr(SnrDb::new(snr)));
            let mut total = 0.0;
            for sent in Bits2::ALL {
                let sum: f64 = Bits2::ALL.iter().map(|&l| b.cell(sent, l)).sum();
                assert_abs_diff_eq!(b.outer(sent), sum, epsilon = 1e-15);
                total += b.outer(sent);
            }
            assert_abs_diff_eq!(b.sep(), 1.0 - total / 4.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn vanishing_allocation_degenerates_to_chance() {
        // With d_outer -> 0 the four outer points coincide; on a clean
        // channel every outer symbol is decoded at chance level.
        let b = scp_breakdown(a(1e-9), sigma_from_snr(SnrDb::new(20.0)));
        for sent in Bits2::ALL {
            assert_abs_diff_eq!(b.outer(sent), 0.25, epsilon = 1e-4);
        }
        assert_abs_diff_eq!(b.sep(), 0.75, epsilon = 1e-4);
    }

    #[test]
    fn sep_anchor_points() {
        let pac = a(0.055);
        assert_abs_diff_eq!(sep(pac, sigma_from_snr(SnrDb::new(-10.0))), 0.730, epsilon = 5e-3);
        assert_abs_diff_eq!(sep(pac, sigma_from_snr(SnrDb::new(20.0))), 0.094, epsilon = 2e-3);
        // regression pins
        assert_abs_diff_eq!(sep(pac, sigma_from_snr(SnrDb::new(-10.0))), 0.7301042, epsilon = 1e-6);
        assert_abs_diff_eq!(sep(pac, sigma_from_snr(SnrDb::new(20.0))), 0.09488991, epsilon = 1e-6);
    }

    #[test]
    fn sep_vanishes_without_noise() {
        assert_abs_diff_eq!(sep(a(0.25), NoiseStd::new(1e-6).unwrap()), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn sep_is_nondecreasing_in_noise() {
        for &av in &[0.014, 0.1, 0.3, 0.49] {
            let pac = a(av);
            let mut prev = -1.0;
            let mut log_sigma: f64 = -3.0;
            while log_sigma <= 3.0 {
                let v = sep(pac, NoiseStd::new(10f64.powf(log_sigma)).unwrap());
                assert!(v >= prev - 1e-12, "a={av} sigma=1e{log_sigma}");
                prev = v;
                log_sigma += 0.05;
            }
        }
    }

    #[test]
    fn legitimate_sep_dips_once_over_the_allocation_range() {
        // On the clean channel the SEP first falls then rises; the discrete
        // derivative on a 1e-3 grid changes sign exactly once.
        let sigma = sigma_from_snr(SnrDb::new(20.0));
        let values: Vec<f64> = (1..500).map(|k| sep(a(k as f64 * 1e-3), sigma)).collect();
        let mut changes = 0;
        let mut prev_rising: Option<bool> = None;
        for w in values.windows(2) {
            let rising = w[1] > w[0];
            if let Some(p) = prev_rising {
                if p != rising {
                    changes += 1;
                }
            }
            prev_rising = Some(rising);
        }
        assert_eq!(changes, 1);
        assert!(prev_rising.unwrap(), "curve should end rising");
    }

    #[test]
    fn qam4_sep_reference() {
        // plain 4-QAM at -10 dB; frozen from the per-axis formula
        assert_abs_diff_eq!(
            qam4_sep(sigma_from_snr(SnrDb::new(-10.0))),
            0.6537049856,
            epsilon = 1e-9
        );
        assert!(qam4_sep(sigma_from_snr(SnrDb::new(20.0))) < 1e-11);
    }

    proptest! {
        // Chance level for four symbols bounds the SEP over the whole domain.
        #[test]
        fn sep_is_bounded_by_chance(av in 1e-6..0.499999f64, log_sigma in -3.0..3.0f64) {
            let v = sep(a(av), NoiseStd::new(10f64.powf(log_sigma)).unwrap());
            prop_assert!(v >= 0.0);
            prop_assert!(v <= 0.75 + 1e-9, "sep {} at a={} sigma=1e{}", v, av, log_sigma);
        }

        #[test]
        fn all_cells_are_probabilities(av in 1e-6..0.499999f64, log_sigma in -3.0..3.0f64) {
            let b = scp_breakdown(a(av), NoiseStd::new(10f64.powf(log_sigma)).unwrap());
            for sent in Bits2::ALL {
                for landed in Bits2::ALL {
                    let c = b.cell(sent, landed);
                    prop_assert!((0.0..=1.0).contains(&c));
                }
                prop_assert!((0.0..=1.0).contains(&b.outer(sent)));
            }
        }
    }
}
