use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Padding applied on both sides of a declared absence interval. Inserted
/// boundary samples sit at `a - pad` and `b + pad`.
pub fn absence_pad() -> Rational {
    Rational::new(1, 1000)
}

/// A piecewise-linear weight function sampled at strictly increasing
/// instants, optionally with closed intervals during which the edge does not
/// exist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSeries {
    samples: Vec<(Rational, Rational)>,
    absence: Vec<(Rational, Rational)>,
}

impl WeightSeries {
    pub fn new(samples: Vec<(Rational, Rational)>, absence: Vec<(Rational, Rational)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Series(format!("need at least 2 samples, got {}", samples.len())));
        }
        if samples.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Series("sample instants must be strictly increasing".into()));
        }
        let (first, last) = (&samples[0].0, &samples[samples.len() - 1].0);
        for (a, b) in &absence {
            if a > b {
                return Err(Error::Series(format!("absence interval [{a}, {b}] is reversed")));
            }
            if a < first || b > last {
                return Err(Error::Series(format!("absence interval [{a}, {b}] leaves [{first}, {last}]")));
            }
        }
        if absence.windows(2).any(|w| w[0].1 >= w[1].0) {
            return Err(Error::Series("absence intervals must be sorted and disjoint".into()));
        }
        Ok(WeightSeries { samples, absence })
    }

    /// Samples `values[k]` at instant `k + 1`.
    pub fn from_values(values: Vec<Rational>) -> Result<Self> {
        let samples = values.into_iter().enumerate().map(|(k, v)| (Rational::from_int(k as i64 + 1), v)).collect();
        WeightSeries::new(samples, Vec::new())
    }

    pub fn with_absence(mut self, absence: Vec<(Rational, Rational)>) -> Result<Self> {
        self.absence = absence;
        WeightSeries::new(self.samples, self.absence)
    }

    pub fn samples(&self) -> &[(Rational, Rational)] {
        &self.samples
    }

    pub fn absence(&self) -> &[(Rational, Rational)] {
        &self.absence
    }

    pub fn first_instant(&self) -> &Rational {
        &self.samples[0].0
    }

    pub fn last_instant(&self) -> &Rational {
        &self.samples[self.samples.len() - 1].0
    }

    /// Sample values, in instant order.
    pub fn values(&self) -> impl Iterator<Item = &Rational> {
        self.samples.iter().map(|(_, v)| v)
    }

    /// Open intervals `(a - pad, b + pad)` during which the edge is treated as
    /// missing. Overlapping or touching intervals are merged.
    pub fn gaps(&self) -> Vec<(Rational, Rational)> {
        let pad = absence_pad();
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(self.absence.len());
        for (a, b) in &self.absence {
            let (lo, hi) = (a - &pad, b + &pad);
            match out.last_mut() {
                Some(last) if last.1 >= lo => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => out.push((lo, hi)),
            }
        }
        out
    }

    pub fn is_present_at(&self, t: &Rational) -> bool {
        !self.gaps().iter().any(|(lo, hi)| lo < t && t < hi)
    }

    /// Linear interpolation between the bracketing samples, ignoring absence.
    pub fn interpolate(&self, t: &Rational) -> Result<Rational> {
        if t < self.first_instant() || t > self.last_instant() {
            return Err(Error::Domain {
                t: t.clone(),
                lo: self.first_instant().clone(),
                hi: self.last_instant().clone(),
            });
        }
        let idx = self.samples.partition_point(|(s, _)| s <= t);
        let (t0, w0) = &self.samples[idx - 1];
        if t0 == t || idx == self.samples.len() {
            return Ok(w0.clone());
        }
        let (t1, w1) = &self.samples[idx];
        Ok(w0 + (w1 - w0) * ((t - t0) / (t1 - t0)))
    }

    /// Insert boundary samples around every absence interval and drop the
    /// samples that fall inside the padded gap. Values on the remaining domain
    /// are unchanged.
    pub fn expand_absence(&self) -> Result<WeightSeries> {
        if self.absence.is_empty() {
            return Ok(self.clone());
        }
        let gaps = self.gaps();
        let inside = |t: &Rational| gaps.iter().any(|(lo, hi)| lo < t && t < hi);
        let mut samples: Vec<(Rational, Rational)> = self.samples.iter().filter(|(t, _)| !inside(t)).cloned().collect();
        for (lo, hi) in &gaps {
            for b in [lo, hi] {
                if b >= self.first_instant() && b <= self.last_instant() && !inside(b) {
                    samples.push((b.clone(), self.interpolate(b)?));
                }
            }
        }
        samples.sort_by(|a, b| a.0.cmp(&b.0));
        samples.dedup_by(|a, b| a.0 == b.0);
        if samples.len() < 2 {
            return Err(Error::Series("absence leaves the edge without a presence span".into()));
        }
        Ok(WeightSeries { samples, absence: self.absence.clone() })
    }
}
