//! Rank-frequency distributions and the three scalar metrics: smoothness of
//! the successive differences, Shannon information, and redundancy. All
//! logarithms are base 2; redundancy is kept as a fraction and turned into a
//! percentage only when rendered.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One ranked symbol: its count and fractional frequency F(n).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub symbol: String,
    pub count: u64,
    pub fraction: f64,
}

/// Symbols ordered by descending count; ties broken by ascending symbol so
/// runs are bit-reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankDistribution {
    entries: Vec<RankEntry>,
    total_count: u64,
    n: usize,
}

impl RankDistribution {
    pub fn entries(&self) -> &[RankEntry] {
        &self.entries
    }

    pub fn total_count(&self) -> u64 {
        self.total_count
    }

    /// Number of distinct symbols N.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fractions(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.fraction)
    }

    /// Successive differences D(n) = F(n+1) − F(n), n = 1..N−1. All ≤ 0.
    pub fn diffs(&self) -> Vec<f64> {
        self.entries
            .windows(2)
            .map(|w| w[1].fraction - w[0].fraction)
            .collect()
    }
}

/// Sorts a count map into a rank-frequency distribution.
pub fn rank_distribution(counts: &BTreeMap<String, u64>) -> Result<RankDistribution> {
    if counts.is_empty() {
        return Err(Error::EmptyCorpus("no symbols to rank".into()));
    }
    if let Some((sym, _)) = counts.iter().find(|(_, &c)| c == 0) {
        return Err(Error::InvalidParameter(format!(
            "symbol '{sym}' has zero count"
        )));
    }
    let total: u64 = counts.values().sum();
    let mut entries: Vec<RankEntry> = counts
        .iter()
        .map(|(sym, &count)| RankEntry {
            symbol: sym.clone(),
            count,
            fraction: count as f64 / total as f64,
        })
        .collect();
    entries.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.symbol.cmp(&b.symbol)));
    Ok(RankDistribution {
        n: entries.len(),
        total_count: total,
        entries,
    })
}

/// Which divisor the standard deviation of D uses: N−2 (sample, over the N−1
/// diffs) or N−1 (population).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SdMode {
    #[default]
    Sample,
    Population,
}

impl SdMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SdMode::Sample => "sample",
            SdMode::Population => "population",
        }
    }
}

impl FromStr for SdMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<SdMode> {
        match s {
            "sample" => Ok(SdMode::Sample),
            "population" => Ok(SdMode::Population),
            other => Err(Error::InvalidParameter(format!(
                "sd mode must be 'sample' or 'population', got '{other}'"
            ))),
        }
    }
}

impl fmt::Display for SdMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// |mean(D)| / SD(D). A perfectly linear distribution has SD(D) = 0, which is
/// represented explicitly rather than as an IEEE infinity so the value stays
/// JSON-serializable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothness {
    Finite(f64),
    Infinite,
}

impl Smoothness {
    pub fn as_f64(self) -> f64 {
        match self {
            Smoothness::Finite(v) => v,
            Smoothness::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Smoothness::Finite(_))
    }
}

impl PartialOrd for Smoothness {
    fn partial_cmp(&self, other: &Smoothness) -> Option<std::cmp::Ordering> {
        self.as_f64().partial_cmp(&other.as_f64())
    }
}

impl fmt::Display for Smoothness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Smoothness::Finite(v) => write!(f, "{v}"),
            Smoothness::Infinite => f.write_str("inf"),
        }
    }
}

/// Smoothness of the rank-frequency plot. Needs N ≥ 3 so that SD is taken
/// over at least two differences.
pub fn smoothness(dist: &RankDistribution, mode: SdMode) -> Result<Smoothness> {
    if dist.n() < 3 {
        return Err(Error::UndefinedMetric(format!(
            "smoothness needs at least 3 symbols, got {}",
            dist.n()
        )));
    }
    let diffs = dist.diffs();
    let m = diffs.len() as f64;
    let mean = diffs.iter().sum::<f64>() / m;
    let divisor = match mode {
        SdMode::Sample => m - 1.0,
        SdMode::Population => m,
    };
    let variance = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / divisor;
    let sd = variance.sqrt();
    if sd == 0.0 {
        return Ok(Smoothness::Infinite);
    }
    Ok(Smoothness::Finite(mean.abs() / sd))
}

/// Shannon information H = −Σ F(n) log2 F(n), in bits per symbol.
pub fn shannon_information(dist: &RankDistribution) -> f64 {
    -dist.fractions().map(|f| f * f.log2()).sum::<f64>()
}

/// Redundancy R = 1 − H / log2 N, clamped into [0,1] against rounding noise.
pub fn redundancy(dist: &RankDistribution) -> Result<f64> {
    if dist.n() < 2 {
        return Err(Error::UndefinedMetric(
            "redundancy needs at least 2 symbols (log2 1 = 0)".into(),
        ));
    }
    let h = shannon_information(dist);
    let r = 1.0 - h / (dist.n() as f64).log2();
    Ok(r.clamp(0.0, 1.0))
}

/// All scalar metrics for a distribution; fails for N < 3 where smoothness is
/// undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub n: usize,
    pub diffs: Vec<f64>,
    pub smoothness: Smoothness,
    pub entropy_bits: f64,
    /// Fraction in [0,1]; multiply by 100 for the percentage form.
    pub redundancy: f64,
}

impl MetricsReport {
    pub fn compute(dist: &RankDistribution, sd_mode: SdMode) -> Result<MetricsReport> {
        Ok(MetricsReport {
            n: dist.n(),
            diffs: dist.diffs(),
            smoothness: smoothness(dist, sd_mode)?,
            entropy_bits: shannon_information(dist),
            redundancy: redundancy(dist)?,
        })
    }
}

/// A synthetic F(n) ∝ 1/n distribution over N symbols, normalized by the N-th
/// harmonic number. Counts are scaled to 1e15 so the count/total fractions
/// carry full double precision.
pub fn zipf_baseline(n: usize) -> Result<RankDistribution> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "zipf baseline needs N >= 2, got {n}"
        )));
    }
    const SCALE: f64 = 1e15;
    let counts: BTreeMap<String, u64> = (1..=n)
        .map(|rank| (format!("z{rank:06}"), (SCALE / rank as f64).round() as u64))
        .collect();
    rank_distribution(&counts)
}
