// SPDX-License-Identifier: Apache-2.0

//! Word-level signal statistics and the dual-bit-type bit model.
//!
//! A two's complement word driven by a correlated Gaussian source splits into
//! three regions: random LSBs (activity 0.5), a linear transition region, and
//! sign-extension MSBs that toggle with the sign bit only. The region
//! boundaries `bp0`/`bp1` follow from `(sigma, rho)` alone.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stimgen::StimulusStream;

/// Largest supported word width. Products of two 32-bit operands still fit.
pub const MAX_BIT_WIDTH: u32 = 62;

/// Mean, standard deviation and lag-1 autocorrelation of an `N`-bit word.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WordStats {
    pub mean: f64,
    pub std_dev: f64,
    pub rho: f64,
    pub bit_width: u32,
}

impl WordStats {
    pub fn new(mean: f64, std_dev: f64, rho: f64, bit_width: u32) -> Result<Self> {
        let stats = WordStats {
            mean,
            std_dev,
            rho,
            bit_width,
        };
        stats.validate()?;
        Ok(stats)
    }

    /// Zero-mean statistics, the form the analytical model assumes.
    pub fn zero_mean(std_dev: f64, rho: f64, bit_width: u32) -> Result<Self> {
        Self::new(0.0, std_dev, rho, bit_width)
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_BIT_WIDTH).contains(&self.bit_width) {
            return Err(Error::InvalidStats(format!(
                "bit width {} outside [2, {MAX_BIT_WIDTH}]",
                self.bit_width
            )));
        }
        if !self.mean.is_finite() || !self.std_dev.is_finite() || self.std_dev < 0.0 {
            return Err(Error::InvalidStats(format!(
                "mean {} / std_dev {} must be finite with std_dev >= 0",
                self.mean, self.std_dev
            )));
        }
        if !(-1.0..=1.0).contains(&self.rho) {
            return Err(Error::CorrelationDomain(self.rho));
        }
        let (lo, hi) = word_range(self.bit_width);
        let (lo, hi) = (lo as f64, hi as f64);
        let spread = 3.0 * self.std_dev;
        if self.mean - spread < lo || self.mean + spread > hi {
            return Err(Error::InvalidStats(format!(
                "mean ± 3·std_dev = [{}, {}] exceeds the {}-bit range [{lo}, {hi}]",
                self.mean - spread,
                self.mean + spread,
                self.bit_width
            )));
        }
        Ok(())
    }

    /// The model has only been exercised for non-negative correlation.
    pub fn in_validated_regime(&self) -> bool {
        self.rho >= 0.0
    }
}

/// Inclusive two's complement range of an `N`-bit word.
pub fn word_range(bit_width: u32) -> (i64, i64) {
    let half = 1i64 << (bit_width - 1);
    (-half, half - 1)
}

/// Region boundaries of a word: LSB region `[0, bp0]`, MSB region `[bp1, N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Breakpoints {
    pub bp0: u32,
    pub bp1: u32,
    /// Set when the signal has no spread (`std_dev = 0`) or `rho = 1`, where
    /// the logarithms are undefined; both indices are then 0.
    pub degenerate: bool,
}

impl Breakpoints {
    pub fn new(bp0: u32, bp1: u32) -> Self {
        Breakpoints {
            bp0: bp0.min(bp1),
            bp1,
            degenerate: false,
        }
    }

    fn degenerate() -> Self {
        Breakpoints {
            bp0: 0,
            bp1: 0,
            degenerate: true,
        }
    }
}

/// Per-bit signal probability, transition activity and lag-1 correlation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BitProfile {
    pub probs: Vec<f64>,
    pub activities: Vec<f64>,
    pub correlations: Vec<f64>,
}

impl BitProfile {
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::CorrelationDomain(rho))
    }
}

/// Lag-1 correlation of the sign bit: `(2/π)·asin(rho)`.
pub fn rho_msb(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(2.0 / PI * rho.asin())
}

/// Transition activity of the sign bit: `(1/π)·acos(rho)`.
pub fn alpha_msb(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(rho.acos() / PI)
}

fn clamp_index(x: f64, bit_width: u32) -> u32 {
    // f64::round rounds half away from zero.
    x.round().clamp(0.0, f64::from(bit_width - 1)) as u32
}

/// Breakpoints of a single word:
/// `bp0 = nint(log2(2σ(1 - ρ_msb)))`, `bp1 = nint(log2(6σ·sqrt(1 - ρ_msb)))`,
/// clamped into `[0, N-1]` with `bp0 <= bp1`.
pub fn breakpoints(stats: &WordStats) -> Result<Breakpoints> {
    stats.validate()?;
    let rm = rho_msb(stats.rho)?;
    let lsb_arg = 2.0 * stats.std_dev * (1.0 - rm);
    let msb_arg = 6.0 * stats.std_dev * (1.0 - rm).sqrt();
    if stats.std_dev == 0.0 || lsb_arg <= 0.0 || msb_arg <= 0.0 {
        return Ok(Breakpoints::degenerate());
    }
    let bp0 = clamp_index(lsb_arg.log2(), stats.bit_width);
    let bp1 = clamp_index(msb_arg.log2(), stats.bit_width);
    Ok(Breakpoints::new(bp0, bp1))
}

/// Two-operand bounds: the smaller LSB boundary and the larger MSB boundary.
pub fn combined_breakpoints(a: &WordStats, b: &WordStats) -> Result<Breakpoints> {
    let ba = breakpoints(a)?;
    let bb = breakpoints(b)?;
    Ok(Breakpoints {
        bp0: ba.bp0.min(bb.bp0),
        bp1: ba.bp1.max(bb.bp1),
        degenerate: ba.degenerate || bb.degenerate,
    })
}

/// Piecewise-linear per-bit profile under the zero-mean Gaussian assumption.
///
/// Correlations ramp from 0 below `bp0` to `ρ_msb` at `bp1 - 1`; activities
/// hold 0.5 up to and including `bp0`, interpolate on the open interval
/// `(bp0, bp1)` and sit at `α_msb` from `bp1` on.
pub fn theoretical_bit_profile(stats: &WordStats) -> Result<BitProfile> {
    let bp = breakpoints(stats)?;
    if bp.degenerate {
        return Err(Error::InvalidStats(
            "breakpoints are undefined for a degenerate signal".into(),
        ));
    }
    let rm = rho_msb(stats.rho)?;
    let am = alpha_msb(stats.rho)?;
    let n = stats.bit_width as usize;
    let (bp0, bp1) = (bp.bp0 as usize, bp.bp1 as usize);
    let span = (bp1 - bp0) as f64;

    let p = 0.5;
    let mut correlations = Vec::with_capacity(n);
    let mut activities = Vec::with_capacity(n);
    for i in 0..n {
        let corr = if i < bp0 {
            0.0
        } else if bp1 > bp0 && i < bp1 {
            rm * (i - bp0 + 1) as f64 / span
        } else {
            rm
        };
        correlations.push(corr);

        let act = if i <= bp0 {
            2.0 * p * (1.0 - p)
        } else if i < bp1 {
            0.5 + (am - 0.5) * (i - bp0) as f64 / span
        } else {
            am
        };
        activities.push(act);
    }
    Ok(BitProfile {
        probs: vec![p; n],
        activities,
        correlations,
    })
}

/// Sample statistics of a stream, with a flag for constant streams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasuredStats {
    pub stats: WordStats,
    /// Constant stream: `std_dev` is 0 and `rho` is meaningless (reported as 0).
    pub degenerate: bool,
}

/// Sample mean, sample standard deviation and lag-1 autocorrelation
/// `cov(X[t-1], X[t]) / var(X)` of a stream.
pub fn empirical_word_stats(stream: &StimulusStream) -> Result<MeasuredStats> {
    measure_words(&stream.words, stream.bit_width)
}

pub(crate) fn measure_words(words: &[i64], bit_width: u32) -> Result<MeasuredStats> {
    if words.len() < 2 {
        return Err(Error::StreamTooShort(words.len()));
    }
    let n = words.len() as f64;
    let mean = words.iter().map(|&w| w as f64).sum::<f64>() / n;
    let centered: Vec<f64> = words.iter().map(|&w| w as f64 - mean).collect();
    let ss: f64 = centered.iter().map(|d| d * d).sum();
    let std_dev = (ss / (n - 1.0)).sqrt();
    if ss == 0.0 {
        return Ok(MeasuredStats {
            stats: WordStats {
                mean,
                std_dev: 0.0,
                rho: 0.0,
                bit_width,
            },
            degenerate: true,
        });
    }
    let lagged: f64 = centered.windows(2).map(|w| w[0] * w[1]).sum();
    let rho = (lagged / ss).clamp(-1.0, 1.0);
    Ok(MeasuredStats {
        stats: WordStats {
            mean,
            std_dev,
            rho,
            bit_width,
        },
        degenerate: false,
    })
}

/// Per-bit empirical probabilities, toggle rates and lag-1 bit correlations.
///
/// A bit that never changes value has no variance; its correlation is
/// reported as 1.
pub fn empirical_bit_profile(stream: &StimulusStream) -> Result<BitProfile> {
    let words = &stream.words;
    if words.len() < 2 {
        return Err(Error::StreamTooShort(words.len()));
    }
    let (lo, hi) = word_range(stream.bit_width);
    if let Some(&w) = words.iter().find(|&&w| w < lo || w > hi) {
        return Err(Error::WordOutOfRange {
            word: w,
            width: stream.bit_width,
        });
    }
    let n = stream.bit_width as usize;
    let len = words.len() as f64;
    let pairs = len - 1.0;
    let mut probs = Vec::with_capacity(n);
    let mut activities = Vec::with_capacity(n);
    let mut correlations = Vec::with_capacity(n);
    for i in 0..n {
        let bit = |w: i64| ((w as u64) >> i) & 1;
        let ones = words.iter().map(|&w| bit(w)).sum::<u64>() as f64;
        let toggles = words
            .windows(2)
            .filter(|w| bit(w[0]) != bit(w[1]))
            .count() as f64;
        let both = words
            .windows(2)
            .filter(|w| bit(w[0]) == 1 && bit(w[1]) == 1)
            .count() as f64;
        let p = ones / len;
        let var = p * (1.0 - p);
        let corr = if var == 0.0 {
            1.0
        } else {
            ((both / pairs - p * p) / var).clamp(-1.0, 1.0)
        };
        probs.push(p);
        activities.push(toggles / pairs);
        correlations.push(corr);
    }
    Ok(BitProfile {
        probs,
        activities,
        correlations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stream(words: Vec<i64>, bit_width: u32) -> StimulusStream {
        StimulusStream::from_words(words, bit_width).unwrap()
    }

    #[test]
    fn closed_forms_at_anchor_points() {
        assert_eq!(rho_msb(0.0).unwrap(), 0.0);
        assert!((rho_msb(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((alpha_msb(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(alpha_msb(1.0).unwrap(), 0.0);
        // high-precision reference
        assert!((rho_msb(0.99).unwrap() - 0.909_893_172_711_175_8).abs() < 1e-12);
        assert!((alpha_msb(0.99).unwrap() - 0.045_053_413_644_412_1).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_reject_out_of_domain() {
        assert!(matches!(rho_msb(1.0001), Err(Error::CorrelationDomain(_))));
        assert!(matches!(alpha_msb(-1.5), Err(Error::CorrelationDomain(_))));
        assert!(rho_msb(f64::NAN).is_err());
    }

    #[test]
    fn breakpoint_fixture() {
        let s = WordStats::zero_mean(1024.0, 0.99, 16).unwrap();
        let bp = breakpoints(&s).unwrap();
        assert_eq!((bp.bp0, bp.bp1, bp.degenerate), (8, 11, false));
    }

    #[test]
    fn uncorrelated_breakpoints_reduce_to_plain_logs() {
        for sigma in [3.0, 17.0, 100.0, 1000.0] {
            let bp = breakpoints(&WordStats::zero_mean(sigma, 0.0, 16).unwrap()).unwrap();
            assert_eq!(bp.bp0, (2.0 * sigma).log2().round() as u32);
            assert_eq!(bp.bp1, (6.0 * sigma).log2().round() as u32);
        }
    }

    #[test]
    fn breakpoints_are_clamped_and_ordered() {
        // 6σ·sqrt(1-0) = 6 * 5000 > 2^14 but the word is 16 bits: no clamp.
        // A tiny sigma drives bp0 negative before clamping.
        let bp = breakpoints(&WordStats::zero_mean(0.2, 0.0, 8).unwrap()).unwrap();
        assert_eq!(bp.bp0, 0);
        assert!(bp.bp0 <= bp.bp1);
        // A wide word with rho near 1 pushes bp0 below zero.
        let bp = breakpoints(&WordStats::zero_mean(2.0, 0.999_999, 16).unwrap()).unwrap();
        assert_eq!(bp.bp0, 0);
        assert!(bp.bp1 <= 15);
    }

    #[test]
    fn degenerate_signals_are_flagged() {
        let flat = WordStats::zero_mean(0.0, 0.5, 16).unwrap();
        assert!(breakpoints(&flat).unwrap().degenerate);
        let locked = WordStats::zero_mean(100.0, 1.0, 16).unwrap();
        let bp = breakpoints(&locked).unwrap();
        assert!(bp.degenerate);
        assert_eq!((bp.bp0, bp.bp1), (0, 0));
        assert!(theoretical_bit_profile(&locked).is_err());
    }

    #[test]
    fn combined_breakpoints_take_the_union() {
        let a = WordStats::zero_mean(1024.0, 0.99, 16).unwrap();
        let b = WordStats::zero_mean(128.0, 0.99, 16).unwrap();
        let bp = combined_breakpoints(&a, &b).unwrap();
        assert_eq!((bp.bp0, bp.bp1), (5, 11));
        assert_eq!(combined_breakpoints(&a, &a).unwrap(), breakpoints(&a).unwrap());
        let flat = WordStats::zero_mean(0.0, 0.5, 16).unwrap();
        assert!(combined_breakpoints(&a, &flat).unwrap().degenerate);
    }

    #[test]
    fn stats_validation() {
        assert!(WordStats::new(0.0, 1.0, 0.5, 1).is_err());
        assert!(WordStats::new(0.0, -1.0, 0.5, 16).is_err());
        assert!(matches!(
            WordStats::new(0.0, 1.0, 1.2, 16),
            Err(Error::CorrelationDomain(_))
        ));
        // 3σ beyond the 8-bit range
        assert!(WordStats::new(0.0, 50.0, 0.0, 8).is_err());
        assert!(WordStats::new(100.0, 10.0, 0.0, 8).is_err());
        assert!(WordStats::new(0.0, 40.0, 0.0, 8).is_ok());
        assert!(!WordStats::new(0.0, 1.0, -0.3, 8).unwrap().in_validated_regime());
    }

    #[test]
    fn uncorrelated_profile_is_flat() {
        let p = theoretical_bit_profile(&WordStats::zero_mean(500.0, 0.0, 16).unwrap()).unwrap();
        assert!(p.activities.iter().all(|&a| (a - 0.5).abs() < 1e-15));
        assert!(p.probs.iter().all(|&x| x == 0.5));
    }

    #[test]
    fn correlated_profile_plateaus() {
        let s = WordStats::zero_mean(1024.0, 0.99, 16).unwrap();
        let p = theoretical_bit_profile(&s).unwrap();
        let am = 0.045_053_413_644_412_1;
        for i in 0..=8 {
            assert_eq!(p.activities[i], 0.5);
        }
        for i in 11..16 {
            assert!((p.activities[i] - am).abs() < 1e-12);
        }
        // ramp strictly between the plateaus
        assert!(p.activities[9] < 0.5 && p.activities[9] > p.activities[10]);
        assert!(p.activities[10] > am);
        // correlations: zero below bp0, rho_msb from bp1 - 1
        assert!(p.correlations[..8].iter().all(|&c| c == 0.0));
        assert!((p.correlations[10] - rho_msb(0.99).unwrap()).abs() < 1e-12);
        assert!((p.correlations[15] - rho_msb(0.99).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn profile_without_linear_region() {
        // bp0 == bp1 once both clamp to the top bit
        let s = WordStats::zero_mean(40.0, -1.0, 8).unwrap();
        let bp = breakpoints(&s).unwrap();
        assert_eq!((bp.bp0, bp.bp1), (7, 7));
        let p = theoretical_bit_profile(&s).unwrap();
        assert_eq!(p.len(), 8);
        assert!(p.activities.iter().all(|&a| a == 0.5));
    }

    #[test]
    fn alternating_stream_is_anticorrelated() {
        let words: Vec<i64> = (0..100).map(|t| if t % 2 == 0 { 50 } else { -50 }).collect();
        let m = empirical_word_stats(&stream(words, 8)).unwrap();
        assert!(!m.degenerate);
        assert!(m.stats.mean.abs() < 1e-12);
        assert!((m.stats.rho + 1.0).abs() < 0.02);
    }

    #[test]
    fn constant_stream_is_degenerate() {
        let m = empirical_word_stats(&stream(vec![7; 20], 8)).unwrap();
        assert!(m.degenerate);
        assert_eq!(m.stats.std_dev, 0.0);
        let p = empirical_bit_profile(&stream(vec![7; 20], 8)).unwrap();
        assert!(p.activities.iter().all(|&a| a == 0.0));
    }

    #[test]
    fn bit_profile_counts_transitions() {
        // bit 0: 0,1,0,1 -> 3 toggles of 3; bit 1: 0,0,1,1 -> 1 toggle
        let p = empirical_bit_profile(&stream(vec![0, 1, 2, 3], 4)).unwrap();
        assert_eq!(p.activities[0], 1.0);
        assert!((p.activities[1] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(p.activities[2], 0.0);
        assert_eq!(p.probs[0], 0.5);
        // negative words set the upper bits
        let p = empirical_bit_profile(&stream(vec![-1, -1, 0, 0], 4)).unwrap();
        assert_eq!(p.probs, vec![0.5; 4]);
        assert!(p.activities.iter().all(|&a| (a - 1.0 / 3.0).abs() < 1e-15));
    }
}
