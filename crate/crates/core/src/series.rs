//! Price, return and loss series plus the rolling-window calendar.
//!
//! Series carry an arbitrary ordered label type `D` (calendar dates in the CLI,
//! plain indices for simulated paths). All window arithmetic is done on index
//! positions in business time; labels are never interpreted.

use alloc::vec::Vec;

use crate::math::ln;
use crate::{Error, Result, MONTH_DAYS, YEAR_DAYS};

/// Sampling frequency of a price series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Frequency {
    #[default]
    Daily,
    Weekly,
}

impl Frequency {
    /// Observations per year in business time.
    pub fn per_year(self) -> usize {
        match self {
            Frequency::Daily => YEAR_DAYS,
            Frequency::Weekly => 52,
        }
    }
}

/// Closing prices with strictly increasing labels and strictly positive values.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries<D = usize> {
    labels: Vec<D>,
    closes: Vec<f64>,
    frequency: Frequency,
}

impl<D: Ord + Clone> PriceSeries<D> {
    /// Validates and builds a price series. Row indices in errors are 0-based
    /// positions in `observations`.
    pub fn new(observations: Vec<(D, f64)>, frequency: Frequency) -> Result<Self> {
        let mut labels = Vec::with_capacity(observations.len());
        let mut closes = Vec::with_capacity(observations.len());
        for (row, (label, close)) in observations.into_iter().enumerate() {
            if !(close > 0.0) || !close.is_finite() {
                return Err(Error::NonPositivePrice { row, value: close });
            }
            if let Some(prev) = labels.last() {
                if &label <= prev {
                    return Err(Error::NonMonotoneDates { row });
                }
            }
            labels.push(label);
            closes.push(close);
        }
        Ok(Self {
            labels,
            closes,
            frequency,
        })
    }

    /// Keeps every `stride`-th observation starting with the first, e.g.
    /// `stride = 5` turns a daily business-day series into a weekly one.
    pub fn resample_every(&self, stride: usize, frequency: Frequency) -> Self {
        let stride = stride.max(1);
        Self {
            labels: self.labels.iter().step_by(stride).cloned().collect(),
            closes: self.closes.iter().step_by(stride).copied().collect(),
            frequency,
        }
    }
}

impl<D> PriceSeries<D> {
    pub fn len(&self) -> usize {
        self.closes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closes.is_empty()
    }

    pub fn closes(&self) -> &[f64] {
        &self.closes
    }

    pub fn labels(&self) -> &[D] {
        &self.labels
    }

    pub fn frequency(&self) -> Frequency {
        self.frequency
    }
}

/// Log-returns `X_i = ln(S_i / S_{i-1})`, labelled with the later observation.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries<D = usize> {
    labels: Vec<D>,
    values: Vec<f64>,
    frequency: Frequency,
}

/// Losses `L_i = -X_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LossSeries<D = usize> {
    labels: Vec<D>,
    values: Vec<f64>,
}

impl<D> ReturnSeries<D> {
    pub fn from_parts(labels: Vec<D>, values: Vec<f64>, frequency: Frequency) -> Result<Self> {
        if labels.len() != values.len() {
            return Err(Error::LengthMismatch {
                left: labels.len(),
                right: values.len(),
            });
        }
        Ok(Self {
            labels,
            values,
            frequency,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> &[D] {
        &self.labels
    }

    pub fn frequency(&self) -> Frequency {
        self.frequency
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl ReturnSeries<usize> {
    /// Unlabelled daily returns (labels are the positions).
    pub fn from_values(values: Vec<f64>) -> Self {
        Self {
            labels: (0..values.len()).collect(),
            values,
            frequency: Frequency::Daily,
        }
    }
}

impl<D> LossSeries<D> {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> &[D] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl<D: Clone> LossSeries<D> {
    /// Reads the losses back as returns (negating again).
    pub fn to_returns(&self, frequency: Frequency) -> ReturnSeries<D> {
        ReturnSeries {
            labels: self.labels.clone(),
            values: self.values.iter().map(|l| -l).collect(),
            frequency,
        }
    }
}

impl LossSeries<usize> {
    pub fn from_values(values: Vec<f64>) -> Self {
        Self {
            labels: (0..values.len()).collect(),
            values,
        }
    }
}

pub fn log_returns<D: Clone>(prices: &PriceSeries<D>) -> Result<ReturnSeries<D>> {
    if prices.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: prices.len(),
        });
    }
    let values = prices
        .closes
        .windows(2)
        .map(|w| ln(w[1] / w[0]))
        .collect();
    Ok(ReturnSeries {
        labels: prices.labels[1..].to_vec(),
        values,
        frequency: prices.frequency,
    })
}

pub fn losses<D: Clone>(returns: &ReturnSeries<D>) -> LossSeries<D> {
    LossSeries {
        labels: returns.labels.clone(),
        values: returns.values.iter().map(|x| -x).collect(),
    }
}

/// Window length and roll step in observations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WindowSpec {
    length: usize,
    step: usize,
}

impl WindowSpec {
    pub fn new(length: usize, step: usize) -> Result<Self> {
        if length < 2 {
            return Err(Error::InvalidWindow("length must be at least 2"));
        }
        if step < 1 {
            return Err(Error::InvalidWindow("step must be at least 1"));
        }
        Ok(Self { length, step })
    }

    /// `years` of daily data rolled monthly.
    pub fn years(years: usize) -> Result<Self> {
        Self::new(YEAR_DAYS * years, MONTH_DAYS)
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn step(&self) -> usize {
        self.step
    }

    /// Number of windows over a series of `len` observations.
    pub fn count(&self, len: usize) -> usize {
        if len < self.length {
            0
        } else {
            1 + (len - self.length) / self.step
        }
    }
}

/// A window `[start, anchor)` of observations strictly preceding its anchor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Window {
    pub start: usize,
    pub anchor: usize,
}

impl Window {
    pub fn range(&self) -> core::ops::Range<usize> {
        self.start..self.anchor
    }

    pub fn len(&self) -> usize {
        self.anchor - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.anchor == self.start
    }
}

/// Rolling windows over a series of `len` observations. The first anchor sits
/// at index `spec.length()`; an anchor may equal `len` (the window then ends on
/// the last observation).
pub fn rolling_windows(len: usize, spec: WindowSpec) -> Result<RollingWindows> {
    if len < spec.length {
        return Err(Error::TooShort {
            needed: spec.length,
            got: len,
        });
    }
    Ok(RollingWindows {
        next_anchor: spec.length,
        len,
        spec,
    })
}

#[derive(Debug, Clone)]
pub struct RollingWindows {
    next_anchor: usize,
    len: usize,
    spec: WindowSpec,
}

impl Iterator for RollingWindows {
    type Item = Window;

    fn next(&mut self) -> Option<Window> {
        if self.next_anchor > self.len {
            return None;
        }
        let anchor = self.next_anchor;
        self.next_anchor += self.spec.step;
        Some(Window {
            start: anchor - self.spec.length,
            anchor,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = if self.next_anchor > self.len {
            0
        } else {
            1 + (self.len - self.next_anchor) / self.spec.step
        };
        (n, Some(n))
    }
}

impl ExactSizeIterator for RollingWindows {}
