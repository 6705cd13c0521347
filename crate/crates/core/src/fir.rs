//! Direct FIR form of the 9/7 analysis filter bank.
//!
//! Tap values are the ITU-T T.800 (JPEG 2000 Part 1) irreversible 9/7
//! analysis filters. The high-pass sign is flipped relative to T.800 so the
//! FIR bands match the lifting path's output convention (odd path scaled by
//! -k); with that sign the two paths agree band-for-band.

use crate::error::Result;
use crate::fixpoint::round_to_q8;
use crate::lifting::{check_even, extend_unchecked, BandPair};

/// 9-tap analysis low-pass, center first tap index -4.
pub const LOWPASS_TAPS: [f64; 9] = [
    0.026_748_757_410_810,
    -0.016_864_118_442_875,
    -0.078_223_266_528_988,
    0.266_864_118_442_872,
    0.602_949_018_236_358,
    0.266_864_118_442_872,
    -0.078_223_266_528_988,
    -0.016_864_118_442_875,
    0.026_748_757_410_810,
];

/// 7-tap analysis high-pass, center first tap index -3; sign matches the
/// lifting path's -k scaling.
pub const HIGHPASS_TAPS: [f64; 7] = [
    -0.091_271_763_114_249,
    0.057_543_526_228_499,
    0.591_271_763_114_247,
    -1.115_087_052_456_994,
    0.591_271_763_114_247,
    0.057_543_526_228_499,
    -0.091_271_763_114_249,
];

/// Which arithmetic the filter bank runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirMode {
    Float,
    /// Taps rounded to /256 integers; one floor shift per output sample.
    Q8Integer,
}

/// The 9/7 tap pair in one of the two arithmetic forms.
#[derive(Debug, Clone)]
pub struct FirCoeffs {
    pub lowpass: [f64; 9],
    pub highpass: [f64; 7],
    pub mode: FirMode,
}

impl FirCoeffs {
    pub fn float_9_7() -> Self {
        FirCoeffs {
            lowpass: LOWPASS_TAPS,
            highpass: HIGHPASS_TAPS,
            mode: FirMode::Float,
        }
    }

    pub fn q8_9_7() -> Self {
        FirCoeffs {
            lowpass: LOWPASS_TAPS,
            highpass: HIGHPASS_TAPS,
            mode: FirMode::Q8Integer,
        }
    }

    /// Low-pass taps rounded to /256 integers.
    pub fn lowpass_q8(&self) -> [i32; 9] {
        self.lowpass.map(|t| round_to_q8(t).expect("tap in Q2.8 range"))
    }

    /// High-pass taps rounded to /256 integers.
    pub fn highpass_q8(&self) -> [i32; 7] {
        self.highpass.map(|t| round_to_q8(t).expect("tap in Q2.8 range"))
    }
}

/// Convolve and downsample by two: even phase through the low-pass,
/// odd phase through the high-pass, over the symmetrically extended signal.
pub fn forward_float(s: &[f64], coeffs: &FirCoeffs) -> Result<BandPair<f64>> {
    check_even(s.len())?;
    let half = s.len() / 2;
    // Depth-4 extension covers the 9-tap support at both edges.
    let ext = extend_unchecked(s, 4, 4);
    let mut low = Vec::with_capacity(half);
    let mut high = Vec::with_capacity(half);
    for i in 0..half {
        let center = 2 * i + 4;
        let mut acc = 0.0;
        for (j, t) in coeffs.lowpass.iter().enumerate() {
            acc += t * ext[center - 4 + j];
        }
        low.push(acc);

        let center = 2 * i + 1 + 4;
        let mut acc = 0.0;
        for (j, t) in coeffs.highpass.iter().enumerate() {
            acc += t * ext[center - 3 + j];
        }
        high.push(acc);
    }
    Ok(BandPair { low, high })
}

/// Integer filter bank: /256-scaled taps accumulate exactly, one floor
/// shift per output sample.
pub fn forward_q8(s: &[i32], coeffs: &FirCoeffs) -> Result<BandPair<i32>> {
    check_even(s.len())?;
    let half = s.len() / 2;
    let lo_taps = coeffs.lowpass_q8();
    let hi_taps = coeffs.highpass_q8();
    let ext = extend_unchecked(s, 4, 4);
    let mut low = Vec::with_capacity(half);
    let mut high = Vec::with_capacity(half);
    for i in 0..half {
        let center = 2 * i + 4;
        let mut acc = 0i64;
        for (j, &t) in lo_taps.iter().enumerate() {
            acc += t as i64 * ext[center - 4 + j] as i64;
        }
        low.push((acc >> 8) as i32);

        let center = 2 * i + 1 + 4;
        let mut acc = 0i64;
        for (j, &t) in hi_taps.iter().enumerate() {
            acc += t as i64 * ext[center - 3 + j] as i64;
        }
        high.push((acc >> 8) as i32);
    }
    Ok(BandPair { low, high })
}
