// SPDX-License-Identifier: Apache-2.0

//! Seeded correlated-Gaussian stimulus streams.
//!
//! Words come from a stationary AR(1) process
//! `y[t] = rho·y[t-1] + sqrt(1 - rho²)·w[t]`, scaled by `sigma`, shifted by
//! `mean`, rounded to the nearest integer and saturated to the word range.
//! The RNG is ChaCha8 seeded through `SeedableRng::seed_from_u64`.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::stats::{measure_words, word_range, WordStats};

/// Samples discarded before the first emitted word.
pub const WARM_UP: usize = 100;

/// A sequence of two's complement words plus the statistics it was drawn for.
#[derive(Debug, Clone, PartialEq)]
pub struct StimulusStream {
    pub words: Vec<i64>,
    pub bit_width: u32,
    pub seed: u64,
    pub target: WordStats,
}

impl StimulusStream {
    /// Wraps externally produced words. The target is set to the measured
    /// statistics of the words and the seed to 0.
    pub fn from_words(words: Vec<i64>, bit_width: u32) -> Result<Self> {
        if !(2..=crate::stats::MAX_BIT_WIDTH).contains(&bit_width) {
            return Err(Error::InvalidStats(format!("bit width {bit_width}")));
        }
        let (lo, hi) = word_range(bit_width);
        if let Some(&w) = words.iter().find(|&&w| w < lo || w > hi) {
            return Err(Error::WordOutOfRange {
                word: w,
                width: bit_width,
            });
        }
        let target = if words.len() < 2 {
            WordStats {
                mean: words.first().map_or(0.0, |&w| w as f64),
                std_dev: 0.0,
                rho: 0.0,
                bit_width,
            }
        } else {
            measure_words(&words, bit_width)?.stats
        };
        Ok(StimulusStream {
            words,
            bit_width,
            seed: 0,
            target,
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Bit `i` of word `t`, two's complement.
    #[inline]
    pub fn bit(&self, t: usize, i: u32) -> bool {
        (self.words[t] as u64 >> i) & 1 == 1
    }

    /// Serializes to the stimulus text format: a header line
    /// `width=<N> seed=<s> mu=<μ> sigma=<σ> rho=<ρ>` followed by one signed
    /// decimal word per line.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.words.len() * 7 + 64);
        let _ = writeln!(
            out,
            "width={} seed={} mu={} sigma={} rho={}",
            self.bit_width, self.seed, self.target.mean, self.target.std_dev, self.target.rho
        );
        for w in &self.words {
            let _ = writeln!(out, "{w}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Empty("stimulus file"))?;
        let mut width = None;
        let mut seed = None;
        let mut mu = None;
        let mut sigma = None;
        let mut rho = None;
        for field in header.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or_else(|| Error::Parse {
                line: 1,
                msg: format!("expected key=value, got `{field}`"),
            })?;
            let bad = |e: &dyn std::fmt::Display| Error::Parse {
                line: 1,
                msg: format!("{key}: {e}"),
            };
            match key {
                "width" => width = Some(value.parse::<u32>().map_err(|e| bad(&e))?),
                "seed" => seed = Some(value.parse::<u64>().map_err(|e| bad(&e))?),
                "mu" => mu = Some(value.parse::<f64>().map_err(|e| bad(&e))?),
                "sigma" => sigma = Some(value.parse::<f64>().map_err(|e| bad(&e))?),
                "rho" => rho = Some(value.parse::<f64>().map_err(|e| bad(&e))?),
                _ => {
                    return Err(Error::Parse {
                        line: 1,
                        msg: format!("unknown header key `{key}`"),
                    })
                }
            }
        }
        let missing = |k: &str| Error::Parse {
            line: 1,
            msg: format!("header is missing `{k}`"),
        };
        let bit_width = width.ok_or_else(|| missing("width"))?;
        if !(2..=crate::stats::MAX_BIT_WIDTH).contains(&bit_width) {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unsupported width {bit_width}"),
            });
        }
        let target = WordStats {
            mean: mu.ok_or_else(|| missing("mu"))?,
            std_dev: sigma.ok_or_else(|| missing("sigma"))?,
            rho: rho.ok_or_else(|| missing("rho"))?,
            bit_width,
        };
        let (lo, hi) = word_range(bit_width);
        let mut words = Vec::new();
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let w: i64 = line.parse().map_err(|e| Error::Parse {
                line: idx + 1,
                msg: format!("{e}"),
            })?;
            if w < lo || w > hi {
                return Err(Error::WordOutOfRange {
                    word: w,
                    width: bit_width,
                });
            }
            words.push(w);
        }
        Ok(StimulusStream {
            words,
            bit_width,
            seed: seed.ok_or_else(|| missing("seed"))?,
            target,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text)
    }
}

/// Draws `length` words realizing `target`.
pub fn generate(target: &WordStats, length: usize, seed: u64) -> Result<StimulusStream> {
    if length < 2 {
        return Err(Error::StreamTooShort(length));
    }
    target.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rho = target.rho;
    let innovation = (1.0 - rho * rho).max(0.0).sqrt();
    let (lo, hi) = word_range(target.bit_width);

    let mut y: f64 = rng.sample(StandardNormal);
    for _ in 0..WARM_UP {
        let w: f64 = rng.sample(StandardNormal);
        y = rho * y + innovation * w;
    }
    let mut words = Vec::with_capacity(length);
    for _ in 0..length {
        let w: f64 = rng.sample(StandardNormal);
        y = rho * y + innovation * w;
        let x = (target.mean + target.std_dev * y).round();
        words.push((x as i64).clamp(lo, hi));
    }
    Ok(StimulusStream {
        words,
        bit_width: target.bit_width,
        seed,
        target: *target,
    })
}

/// Fraction of words sitting on either end of the word range.
pub fn saturation_rate(stream: &StimulusStream) -> f64 {
    let (lo, hi) = word_range(stream.bit_width);
    let clipped = stream.words.iter().filter(|&&w| w == lo || w == hi).count();
    clipped as f64 / stream.words.len().max(1) as f64
}

/// Independent fair-coin bit sequence, used for side inputs such as an
/// adder's carry-in.
pub fn fair_bits(length: usize, seed: u64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..length).map(|_| rng.random::<bool>()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::empirical_word_stats;

    #[test]
    fn white_noise_has_no_correlation() {
        let s = generate(&WordStats::zero_mean(1.0, 0.0, 8).unwrap(), 10_000, 3).unwrap();
        let m = empirical_word_stats(&s).unwrap();
        assert!(m.stats.rho.abs() < 0.05, "rho = {}", m.stats.rho);
        assert!(s.words.iter().all(|w| w.abs() <= 6));
    }

    #[test]
    fn correlated_stream_recovers_rho() {
        let t = WordStats::zero_mean(1024.0, 0.99, 16).unwrap();
        let s = generate(&t, 10_000, 11).unwrap();
        let m = empirical_word_stats(&s).unwrap().stats;
        assert!((0.97..=0.995).contains(&m.rho), "rho = {}", m.rho);
    }

    #[test]
    fn same_seed_same_stream() {
        let t = WordStats::new(10.0, 300.0, 0.9, 12).unwrap();
        assert_eq!(generate(&t, 500, 42).unwrap(), generate(&t, 500, 42).unwrap());
        assert_ne!(
            generate(&t, 500, 42).unwrap().words,
            generate(&t, 500, 43).unwrap().words
        );
    }

    #[test]
    fn rejects_short_or_invalid_requests() {
        let t = WordStats::zero_mean(10.0, 0.5, 8).unwrap();
        assert!(matches!(generate(&t, 1, 0), Err(Error::StreamTooShort(1))));
        let bad = WordStats {
            rho: 2.0,
            ..t
        };
        assert!(generate(&bad, 100, 0).is_err());
    }

    #[test]
    fn saturation_is_rare_inside_three_sigma() {
        let t = WordStats::zero_mean(40.0, 0.5, 8).unwrap();
        let s = generate(&t, 10_000, 5).unwrap();
        assert!(saturation_rate(&s) < 0.005);
    }

    #[test]
    fn text_round_trip() {
        let t = WordStats::new(-3.25, 17.1, 0.123_456_789, 8).unwrap();
        let s = generate(&t, 50, u64::MAX).unwrap();
        let text = s.to_text();
        assert!(text.starts_with("width=8 seed=18446744073709551615 mu=-3.25 sigma=17.1 rho=0.123456789\n"));
        let back = StimulusStream::from_text(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn text_errors() {
        assert!(StimulusStream::from_text("").is_err());
        assert!(StimulusStream::from_text("width=8 seed=1 mu=0 sigma=1\n0\n").is_err());
        let err = StimulusStream::from_text("width=4 seed=1 mu=0 sigma=1 rho=0\n3\n9\n");
        assert!(matches!(err, Err(Error::WordOutOfRange { word: 9, .. })));
        let err = StimulusStream::from_text("width=4 seed=1 mu=0 sigma=1 rho=0\n3\nx\n");
        assert!(matches!(err, Err(Error::Parse { line: 3, .. })));
    }
}
