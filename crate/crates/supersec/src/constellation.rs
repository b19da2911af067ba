//! Two-layer 4-QAM constellation: symbol labels, the unit-power alphabet,
//! layer superposition, outer-layer recovery, and hard detection.
//!
//! The outer (information) layer and the inner (randomizing) layer both use
//! the same normalized 4-QAM alphabet `{(±1 ± j)/√2}`. A transmitted symbol
//! is `√a · outer + √(1−a) · inner`, so with unit-power layers the average
//! transmit power stays 1 for any power-allocation coefficient `a`.

use crate::error::{Error, Result};
use crate::rng::IndexedStream;
use std::f64::consts::FRAC_1_SQRT_2;

/// Two-bit symbol label `b1b0`. The first bit selects the real-axis sign and
/// the second the imaginary-axis sign (0 → +, 1 → −).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bits2(u8);

impl Bits2 {
    /// All four labels in numeric order `00, 01, 10, 11`.
    pub const ALL: [Bits2; 4] = [Bits2(0), Bits2(1), Bits2(2), Bits2(3)];

    pub fn new(value: u8) -> Result<Self> {
        if value < 4 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidParameter(format!(
                "two-bit label out of range: {value}"
            )))
        }
    }

    /// Build from the low two bits of `value` (higher bits ignored).
    #[inline]
    pub fn from_low_bits(value: u8) -> Self {
        Self(value & 0b11)
    }

    #[inline]
    pub fn from_bits(real_negative: bool, imag_negative: bool) -> Self {
        Self(((real_negative as u8) << 1) | imag_negative as u8)
    }

    #[inline]
    pub fn value(self) -> u8 {
        self.0
    }

    /// Alphabet point for this label on the unit-average-power 4-QAM grid.
    #[inline]
    pub fn point(self) -> ComplexSample {
        let re = if self.0 & 0b10 == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
        let im = if self.0 & 0b01 == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
        ComplexSample { re, im }
    }

    /// Label after rotating the constellation a quarter turn clockwise
    /// (`(x, y) → (y, −x)`).
    pub fn rotated_cw(self) -> Self {
        let real_negative = self.0 & 0b01 != 0; // new re sign = old im sign
        let imag_negative = self.0 & 0b10 == 0; // new im sign = -(old re sign)
        Self::from_bits(real_negative, imag_negative)
    }
}

/// One complex baseband symbol.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexSample {
    pub re: f64,
    pub im: f64,
}

impl ComplexSample {
    #[inline]
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    #[inline]
    pub fn power(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

/// Fraction of the unit transmit power carried by the outer layer.
///
/// The region geometry behind the closed-form error analysis assumes the
/// outer layer is the weaker one, so the open interval (0, 0.5) is enforced
/// strictly; out-of-range values are a domain error, not clamped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PacCoefficient(f64);

impl PacCoefficient {
    pub fn new(a: f64) -> Result<Self> {
        if a.is_finite() && a > 0.0 && a < 0.5 {
            Ok(Self(a))
        } else {
            Err(Error::InvalidPac(a))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Amplitude scale factors for the two layers: `(√a, √(1−a))`.
    #[inline]
    pub fn amplitudes(self) -> (f64, f64) {
        (self.0.sqrt(), (1.0 - self.0).sqrt())
    }

    /// Per-axis offsets: the outer point from its inner centre, `√(a/2)`, and
    /// the inner centre from the origin, `√((1−a)/2)`.
    #[inline]
    pub fn axis_offsets(self) -> (f64, f64) {
        ((self.0 / 2.0).sqrt(), ((1.0 - self.0) / 2.0).sqrt())
    }
}

/// Ordered sequence of complex symbols.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SymbolFrame {
    symbols: Vec<ComplexSample>,
}

impl SymbolFrame {
    pub fn from_symbols(symbols: Vec<ComplexSample>) -> Self {
        Self { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[ComplexSample] {
        &self.symbols
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ComplexSample> {
        self.symbols.iter()
    }

    /// Mean symbol power of the frame.
    pub fn average_power(&self) -> f64 {
        if self.symbols.is_empty() {
            return 0.0;
        }
        self.symbols.iter().map(|s| s.power()).sum::<f64>() / self.symbols.len() as f64
    }
}

/// Map each two-bit label to its unit-power alphabet point.
pub fn modulate_outer(bits: &[Bits2]) -> SymbolFrame {
    SymbolFrame::from_symbols(bits.iter().map(|b| b.point()).collect())
}

/// Inner-layer label for position `index`: i.i.d. uniform over the four
/// alphabet labels, a pure function of `(seed, index)`.
#[inline]
pub fn random_inner_label(seed: u64, index: u64) -> Bits2 {
    Bits2::from_low_bits((IndexedStream::at(seed, index).next_u64() & 0b11) as u8)
}

/// Frame of `count` uniformly random alphabet points, deterministic in
/// `seed`. A zero count yields an empty frame.
pub fn random_inner(count: usize, seed: u64) -> SymbolFrame {
    SymbolFrame::from_symbols(
        (0..count as u64)
            .map(|i| random_inner_label(seed, i).point())
            .collect(),
    )
}

/// Scale-and-sum of one outer and one inner point: `√a·outer + √(1−a)·inner`.
#[inline]
pub fn superpose_point(outer: ComplexSample, inner: ComplexSample, a: PacCoefficient) -> ComplexSample {
    let (outer_amp, inner_amp) = a.amplitudes();
    ComplexSample::new(
        outer_amp * outer.re + inner_amp * inner.re,
        outer_amp * outer.im + inner_amp * inner.im,
    )
}

/// Elementwise superposition of two equal-length frames.
pub fn superpose(outer: &SymbolFrame, inner: &SymbolFrame, a: PacCoefficient) -> Result<SymbolFrame> {
    if outer.len() != inner.len() {
        return Err(Error::FrameLengthMismatch {
            outer: outer.len(),
            inner: inner.len(),
        });
    }
    let (outer_amp, inner_amp) = a.amplitudes();
    Ok(SymbolFrame::from_symbols(
        outer
            .iter()
            .zip(inner.iter())
            .map(|(o, i)| {
                ComplexSample::new(
                    outer_amp * o.re + inner_amp * i.re,
                    outer_amp * o.im + inner_amp * i.im,
                )
            })
            .collect(),
    ))
}

/// Strip the inner layer from a received point: shift each axis toward the
/// origin by `√((1−a)/2)`, with the shift sign taken from the received
/// quadrant. Coordinates exactly on an axis take the `≥ 0` branch.
#[inline]
pub fn recover_outer(point: ComplexSample, a: PacCoefficient) -> ComplexSample {
    let (_, inner_offset) = a.axis_offsets();
    let re = if point.re >= 0.0 { point.re - inner_offset } else { point.re + inner_offset };
    let im = if point.im >= 0.0 { point.im - inner_offset } else { point.im + inner_offset };
    ComplexSample::new(re, im)
}

/// Hard decision to the nearest alphabet label; for the equispaced quadrant
/// alphabet this is a per-axis sign decision, with boundary ties resolved
/// toward the `≥ 0` branch.
#[inline]
pub fn detect_outer(point: ComplexSample) -> Bits2 {
    Bits2::from_bits(point.re < 0.0, point.im < 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn a(v: f64) -> PacCoefficient {
        PacCoefficient::new(v).unwrap()
    }

    #[test]
    fn label_to_point_follows_sign_convention() {
        let p = Bits2::new(0b00).unwrap().point();
        assert_eq!((p.re, p.im), (FRAC_1_SQRT_2, FRAC_1_SQRT_2));
        let p = Bits2::new(0b11).unwrap().point();
        assert_eq!((p.re, p.im), (-FRAC_1_SQRT_2, -FRAC_1_SQRT_2));
        let p = Bits2::new(0b10).unwrap().point();
        assert_eq!((p.re, p.im), (-FRAC_1_SQRT_2, FRAC_1_SQRT_2));
        assert!(Bits2::new(4).is_err());
    }

    #[test]
    fn alphabet_has_unit_average_power() {
        let mean: f64 = Bits2::ALL.iter().map(|b| b.point().power()).sum::<f64>() / 4.0;
        assert_abs_diff_eq!(mean, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn pac_bounds_are_strict() {
        assert!(PacCoefficient::new(0.0).is_err());
        assert!(PacCoefficient::new(0.5).is_err());
        assert!(PacCoefficient::new(-0.1).is_err());
        assert!(PacCoefficient::new(f64::NAN).is_err());
        assert!(PacCoefficient::new(0.25).is_ok());
        assert!(PacCoefficient::new(1e-9).is_ok());
    }

    #[test]
    fn superpose_matches_axis_offsets() {
        // Both layers at '00': expect (d_inner + d_outer) on each axis.
        let outer = modulate_outer(&[Bits2::new(0).unwrap()]);
        let inner = modulate_outer(&[Bits2::new(0).unwrap()]);
        let y = superpose(&outer, &inner, a(0.04)).unwrap();
        let expected = (0.02f64).sqrt() + (0.48f64).sqrt(); // 0.834241679...
        assert_abs_diff_eq!(y.symbols()[0].re, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(y.symbols()[0].im, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(expected, 0.834_241_679_264_860_4, epsilon = 1e-14);
    }

    #[test]
    fn superpose_rejects_length_mismatch() {
        let outer = modulate_outer(&[Bits2::new(0).unwrap(), Bits2::new(1).unwrap()]);
        let inner = modulate_outer(&[Bits2::new(0).unwrap()]);
        assert!(matches!(
            superpose(&outer, &inner, a(0.1)),
            Err(Error::FrameLengthMismatch { outer: 2, inner: 1 })
        ));
    }

    #[test]
    fn sixteen_label_pairs_give_sixteen_distinct_points() {
        let pac = a(0.014);
        let mut points = Vec::new();
        for o in Bits2::ALL {
            for i in Bits2::ALL {
                points.push(superpose_point(o.point(), i.point(), pac));
            }
        }
        for (k, p) in points.iter().enumerate() {
            for q in &points[k + 1..] {
                assert!((p.re - q.re).abs() > 1e-12 || (p.im - q.im).abs() > 1e-12);
            }
        }
    }

    #[test]
    fn recover_outer_shifts_toward_origin() {
        let pac = a(0.04);
        let (d_outer, d_inner) = pac.axis_offsets();
        let r = recover_outer(ComplexSample::new(d_inner + d_outer, d_inner + d_outer), pac);
        assert_abs_diff_eq!(r.re, d_outer, epsilon = 1e-12);
        assert_abs_diff_eq!(r.im, d_outer, epsilon = 1e-12);
        assert_abs_diff_eq!(d_outer, 0.141421, epsilon = 1e-6);

        let r = recover_outer(ComplexSample::new(-(d_inner + d_outer), d_inner + d_outer), pac);
        assert_abs_diff_eq!(r.re, -d_outer, epsilon = 1e-12);
        assert_abs_diff_eq!(r.im, d_outer, epsilon = 1e-12);
    }

    #[test]
    fn recover_outer_origin_takes_nonnegative_branch() {
        let pac = a(0.3);
        let (_, d_inner) = pac.axis_offsets();
        let r = recover_outer(ComplexSample::new(0.0, 0.0), pac);
        assert_eq!((r.re, r.im), (-d_inner, -d_inner));
    }

    #[test]
    fn detect_outer_examples() {
        assert_eq!(detect_outer(ComplexSample::new(0.3, 0.2)).value(), 0b00);
        assert_eq!(detect_outer(ComplexSample::new(-0.001, 5.0)).value(), 0b10);
        assert_eq!(detect_outer(ComplexSample::new(0.0, 0.0)).value(), 0b00);
    }

    #[test]
    fn random_inner_is_deterministic_and_handles_zero_count() {
        assert_eq!(random_inner(1, 99).symbols()[0], random_inner(1, 99).symbols()[0]);
        assert!(random_inner(0, 99).is_empty());
    }

    #[test]
    fn random_inner_labels_are_uniform() {
        let n = 4_000_000usize;
        let mut counts = [0u64; 4];
        for i in 0..n as u64 {
            counts[random_inner_label(5, i).value() as usize] += 1;
        }
        // binomial concentration: 3 * sqrt(0.25 * 0.75 / n)
        let tol = 3.0 * (0.25 * 0.75 / n as f64).sqrt();
        for c in counts {
            assert!((c as f64 / n as f64 - 0.25).abs() <= tol, "counts {counts:?}");
        }
    }

    #[test]
    fn noiseless_round_trip_is_exact() {
        for &av in &[0.01, 0.1, 0.25, 0.49] {
            let pac = a(av);
            for o in Bits2::ALL {
                for i in Bits2::ALL {
                    let y = superpose_point(o.point(), i.point(), pac);
                    let detected = detect_outer(recover_outer(y, pac));
                    assert_eq!(detected, o, "a={av} outer={o:?} inner={i:?}");
                }
            }
        }
    }

    #[test]
    fn superposed_frame_power_is_normalized() {
        let n = 100_000;
        let seed = 11;
        let outer_labels: Vec<Bits2> = (0..n as u64)
            .map(|i| random_inner_label(crate::rng::derive_seed(seed, 1), i))
            .collect();
        let outer = modulate_outer(&outer_labels);
        let inner = random_inner(n, crate::rng::derive_seed(seed, 2));
        for &av in &[0.014, 0.25, 0.49] {
            let y = superpose(&outer, &inner, a(av)).unwrap();
            let p = y.average_power();
            assert!((p - 1.0).abs() <= 0.02, "a={av} mean power {p}");
        }
    }

    fn rotate_cw(p: ComplexSample) -> ComplexSample {
        ComplexSample::new(p.im, -p.re)
    }

    proptest! {
        // Quarter-turn symmetry: rotating a superposed point equals
        // superposing the rotated labels, exactly in floating point.
        #[test]
        fn rotation_commutes_with_superposition(av in 1e-6..0.4999f64) {
            let pac = a(av);
            for o in Bits2::ALL {
                for i in Bits2::ALL {
                    let direct = superpose_point(o.rotated_cw().point(), i.rotated_cw().point(), pac);
                    let rotated = rotate_cw(superpose_point(o.point(), i.point(), pac));
                    prop_assert_eq!(direct, rotated);
                }
            }
        }

        // Reflection about either axis commutes with recovery away from the
        // decision boundary (the boundary itself is tie-broken one-sidedly).
        #[test]
        fn recovery_commutes_with_axis_reflection(
            av in 1e-6..0.4999f64,
            x in -2.0..2.0f64,
            y in -2.0..2.0f64,
        ) {
            prop_assume!(x.abs() > 1e-9 && y.abs() > 1e-9);
            let pac = a(av);
            let p = ComplexSample::new(x, y);
            let mirror_re = ComplexSample::new(-x, y);
            let r = recover_outer(p, pac);
            let rm = recover_outer(mirror_re, pac);
            prop_assert_eq!(rm, ComplexSample::new(-r.re, r.im));
            let mirror_im = ComplexSample::new(x, -y);
            let ri = recover_outer(mirror_im, pac);
            prop_assert_eq!(ri, ComplexSample::new(r.re, -r.im));
        }

        // Detection picks the true nearest alphabet point (brute-force oracle).
        #[test]
        fn detection_matches_nearest_point_oracle(x in -2.0..2.0f64, y in -2.0..2.0f64) {
            prop_assume!(x.abs() > 1e-12 && y.abs() > 1e-12);
            let p = ComplexSample::new(x, y);
            let nearest = Bits2::ALL
                .iter()
                .copied()
                .min_by(|l, r| {
                    let dl = (l.point().re - x).powi(2) + (l.point().im - y).powi(2);
                    let dr = (r.point().re - x).powi(2) + (r.point().im - y).powi(2);
                    dl.partial_cmp(&dr).unwrap()
                })
                .unwrap();
            prop_assert_eq!(detect_outer(p), nearest);
        }
    }
}
