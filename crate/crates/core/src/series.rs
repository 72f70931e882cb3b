//! Observable samples taken once per drive period.

use crate::model::ModelConfig;
use crate::semiclassical::SemiclassicalParams;

/// Where a series came from.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesSource {
    Quantum(ModelConfig),
    Semiclassical(SemiclassicalParams),
    /// Hand-built or reloaded from disk.
    External,
}

/// Samples of one observable at `t = nT`.
#[derive(Debug, Clone, PartialEq)]
pub struct StroboscopicSeries {
    pub observable_name: String,
    /// Drive period `T`; sample `n` sits at `t = n·T`.
    pub period: f64,
    period_index: Vec<u64>,
    values: Vec<f64>,
    pub source: SeriesSource,
}

impl StroboscopicSeries {
    pub fn new(observable_name: impl Into<String>, period: f64, source: SeriesSource) -> Self {
        Self { observable_name: observable_name.into(), period, period_index: vec![], values: vec![], source }
    }

    /// Series with samples at `n = 0, 1, 2, …`.
    pub fn from_values(observable_name: impl Into<String>, period: f64, values: Vec<f64>) -> Self {
        Self {
            observable_name: observable_name.into(),
            period,
            period_index: (0..values.len() as u64).collect(),
            values,
            source: SeriesSource::External,
        }
    }

    /// Fails if `index` does not exceed the last stored index.
    pub fn push(&mut self, index: u64, value: f64) -> Result<(), SeriesError> {
        if let Some(&last) = self.period_index.last() {
            if index <= last {
                return Err(SeriesError::NonIncreasingIndex { previous: last, index });
            }
        }
        self.period_index.push(index);
        self.values.push(value);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn period_indices(&self) -> &[u64] {
        &self.period_index
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.period_index.iter().map(move |&n| n as f64 * self.period)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.period_index.iter().copied().zip(self.values.iter().copied())
    }

    /// Value at period index `n`, if sampled.
    pub fn at(&self, n: u64) -> Option<f64> {
        self.period_index.binary_search(&n).ok().map(|k| self.values[k])
    }

    /// Samples with `from <= n < to`.
    pub fn window(&self, from: u64, to: u64) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.iter().filter(move |&(n, _)| n >= from && n < to)
    }

    pub fn last_index(&self) -> Option<u64> {
        self.period_index.last().copied()
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("period index {index} does not follow {previous}")]
    NonIncreasingIndex { previous: u64, index: u64 },
}
