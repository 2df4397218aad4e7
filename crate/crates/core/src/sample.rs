//! Sufficient statistics of a species sample.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sparse frequency spectrum: `l -> m_l`, zeros never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencySpectrum(BTreeMap<u64, u64>);

impl FrequencySpectrum {
    /// Build from `(l, m_l)` pairs. Rejects duplicates and zero entries.
    pub fn from_pairs<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (l, m) in pairs {
            if l == 0 || m == 0 {
                return Err(Error::InvalidSpectrum(format!("entry l={l}, m_l={m}")));
            }
            if map.insert(l, m).is_some() {
                return Err(Error::DuplicateFrequency(l));
            }
        }
        Ok(Self(map))
    }

    /// Spectrum induced by a list of per-species counts.
    pub fn from_freqs(freqs: &[u64]) -> Self {
        let mut map = BTreeMap::new();
        for &f in freqs.iter().filter(|&&f| f > 0) {
            *map.entry(f).or_insert(0) += 1;
        }
        Self(map)
    }

    /// `m_l`, zero when absent.
    pub fn get(&self, l: u64) -> u64 {
        self.0.get(&l).copied().unwrap_or(0)
    }

    /// Populated entries in increasing `l`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.0.iter().map(|(&l, &m)| (l, m))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_frequency(&self) -> Option<u64> {
        self.0.keys().next_back().copied()
    }

    /// `Σ l·m_l`.
    pub fn total(&self) -> u64 {
        self.iter().map(|(l, m)| l * m).sum()
    }

    /// `Σ m_l`.
    pub fn species(&self) -> u64 {
        self.0.values().sum()
    }
}

/// A sample reduced to `n`, `k`, its spectrum and optionally the
/// per-species frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    n: u64,
    k: u64,
    spectrum: FrequencySpectrum,
    species_freqs: Option<Vec<u64>>,
}

impl SampleSummary {
    /// Count raw species labels.
    pub fn from_raw_tokens<T: AsRef<[u8]>, I: IntoIterator<Item = T>>(tokens: I) -> Result<Self> {
        Ok(LabeledSample::from_tokens(tokens)?.summary())
    }

    /// Build from `(l, m_l)` pairs; `with_freqs` materializes one count per
    /// species so that likelihood and simulation routines can run.
    pub fn from_spectrum<I: IntoIterator<Item = (u64, u64)>>(pairs: I, with_freqs: bool) -> Result<Self> {
        let spectrum = FrequencySpectrum::from_pairs(pairs)?;
        if spectrum.is_empty() {
            return Err(Error::EmptySample);
        }
        let freqs = with_freqs.then(|| {
            spectrum
                .iter()
                .flat_map(|(l, m)| std::iter::repeat_n(l, m as usize))
                .collect()
        });
        Ok(Self { n: spectrum.total(), k: spectrum.species(), spectrum, species_freqs: freqs })
    }

    /// Like [`from_spectrum`](Self::from_spectrum) but also checks the
    /// sample size against an externally reported `n`.
    pub fn from_spectrum_checked<I: IntoIterator<Item = (u64, u64)>>(
        pairs: I,
        with_freqs: bool,
        n: u64,
    ) -> Result<Self> {
        let s = Self::from_spectrum(pairs, with_freqs)?;
        if s.n != n {
            return Err(Error::InvalidSpectrum(format!("spectrum sums to n={}, expected {n}", s.n)));
        }
        Ok(s)
    }

    /// Build from per-species counts (zeros are dropped).
    pub fn from_species_freqs(freqs: Vec<u64>) -> Result<Self> {
        let freqs: Vec<u64> = freqs.into_iter().filter(|&f| f > 0).collect();
        if freqs.is_empty() {
            return Err(Error::EmptySample);
        }
        let spectrum = FrequencySpectrum::from_freqs(&freqs);
        Ok(Self { n: spectrum.total(), k: freqs.len() as u64, spectrum, species_freqs: Some(freqs) })
    }

    /// Read a `l,count` CSV file.
    pub fn read_spectrum_csv<P: AsRef<Path>>(path: P, with_freqs: bool) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::parse_spectrum_csv(file, with_freqs)
    }

    pub fn parse_spectrum_csv<R: Read>(reader: R, with_freqs: bool) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "l" || &headers[1] != "count" {
            return Err(Error::Parse(format!("expected header `l,count`, found `{}`", headers.iter().collect::<Vec<_>>().join(","))));
        }
        let mut pairs = Vec::new();
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let parse = |i: usize| {
                rec[i].parse::<i64>().map_err(|e| Error::Parse(format!("row {}: {e}", row + 2)))
            };
            let (l, m) = (parse(0)?, parse(1)?);
            if l <= 0 || m <= 0 {
                return Err(Error::InvalidSpectrum(format!("row {}: l={l}, count={m}", row + 2)));
            }
            pairs.push((l as u64, m as u64));
        }
        Self::from_spectrum(pairs, with_freqs)
    }

    /// Read a newline-delimited token file. Empty lines are skipped.
    pub fn read_tokens<P: AsRef<Path>>(path: P) -> Result<Self> {
        let bytes = std::fs::read(path)?;
        Self::from_raw_tokens(bytes.split(|&b| b == b'\n').map(strip_cr).filter(|t| !t.is_empty()))
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn spectrum(&self) -> &FrequencySpectrum {
        &self.spectrum
    }

    /// `m_l`, zero when absent.
    pub fn m(&self, l: u64) -> u64 {
        self.spectrum.get(l)
    }

    pub fn species_freqs(&self) -> Option<&[u64]> {
        self.species_freqs.as_deref()
    }

    /// Per-species counts, or [`Error::NeedsFrequencies`].
    pub fn require_freqs(&self) -> Result<&[u64]> {
        self.species_freqs().ok_or(Error::NeedsFrequencies)
    }

    /// Same summary with per-species counts materialized from the spectrum.
    pub fn with_freqs(&self) -> Self {
        if self.species_freqs.is_some() {
            return self.clone();
        }
        Self::from_spectrum(self.spectrum.iter(), true).expect("spectrum already validated")
    }
}

fn strip_cr(t: &[u8]) -> &[u8] {
    t.strip_suffix(b"\r").unwrap_or(t)
}

/// A sample that keeps its labels, needed to score estimates against a
/// known population.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample<L: Ord> {
    counts: BTreeMap<L, u64>,
    n: u64,
}

impl LabeledSample<Vec<u8>> {
    pub fn from_tokens<T: AsRef<[u8]>, I: IntoIterator<Item = T>>(tokens: I) -> Result<Self> {
        Self::from_labels(tokens.into_iter().map(|t| t.as_ref().to_vec()))
    }
}

impl<L: Ord> LabeledSample<L> {
    pub fn from_labels<I: IntoIterator<Item = L>>(labels: I) -> Result<Self> {
        let mut counts = BTreeMap::new();
        let mut n = 0;
        for l in labels {
            *counts.entry(l).or_insert(0) += 1;
            n += 1;
        }
        if n == 0 {
            return Err(Error::EmptySample);
        }
        Ok(Self { counts, n })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn counts(&self) -> &BTreeMap<L, u64> {
        &self.counts
    }

    pub fn summary(&self) -> SampleSummary {
        let freqs: Vec<u64> = self.counts.values().copied().collect();
        SampleSummary::from_species_freqs(freqs).expect("non-empty by construction")
    }
}
