//! Calendar periods, dated series, and the operations that assemble them:
//! quarterly averaging, splicing, alignment of (u, v) pairs, and window
//! summaries.
//!
//! Periods are `(year, sub-period)` pairs rather than timestamps. A series
//! never interpolates across a gap: missing periods simply stay missing.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frequency {
    Monthly,
    Quarterly,
}

impl Frequency {
    pub fn periods_per_year(self) -> u8 {
        match self {
            Frequency::Monthly => 12,
            Frequency::Quarterly => 4,
        }
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Frequency::Monthly => "monthly",
            Frequency::Quarterly => "quarterly",
        })
    }
}

impl FromStr for Frequency {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "monthly" | "m" => Ok(Frequency::Monthly),
            "quarterly" | "q" => Ok(Frequency::Quarterly),
            other => Err(format!("unknown frequency `{other}`")),
        }
    }
}

/// A month or a quarter of a given year.
///
/// Ordering is chronological within one frequency. Comparing periods of
/// different frequencies is well defined but meaningless.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Period {
    freq: Frequency,
    year: i32,
    sub: u8,
}

impl Period {
    pub fn new(freq: Frequency, year: i32, sub: u8) -> Result<Self> {
        if sub == 0 || sub > freq.periods_per_year() {
            return Err(Error::domain(format!(
                "sub-period {sub} out of range for {freq} data"
            )));
        }
        Ok(Period { freq, year, sub })
    }

    /// Month `month` (1-12) of `year`. Panics on an invalid month.
    pub fn month(year: i32, month: u8) -> Self {
        Self::new(Frequency::Monthly, year, month).expect("month must be in 1..=12")
    }

    /// Quarter `quarter` (1-4) of `year`. Panics on an invalid quarter.
    pub fn quarter(year: i32, quarter: u8) -> Self {
        Self::new(Frequency::Quarterly, year, quarter).expect("quarter must be in 1..=4")
    }

    pub fn frequency(self) -> Frequency {
        self.freq
    }

    pub fn year(self) -> i32 {
        self.year
    }

    /// Month (1-12) or quarter (1-4) within the year.
    pub fn sub(self) -> u8 {
        self.sub
    }

    /// Number of periods elapsed since year 0, sub-period 1.
    pub fn ordinal(self) -> i64 {
        i64::from(self.year) * i64::from(self.freq.periods_per_year()) + i64::from(self.sub) - 1
    }

    pub fn from_ordinal(freq: Frequency, ordinal: i64) -> Self {
        let per = i64::from(freq.periods_per_year());
        Period {
            freq,
            year: ordinal.div_euclid(per) as i32,
            sub: (ordinal.rem_euclid(per) + 1) as u8,
        }
    }

    pub fn offset(self, n: i64) -> Self {
        Self::from_ordinal(self.freq, self.ordinal() + n)
    }

    pub fn succ(self) -> Self {
        self.offset(1)
    }

    /// Signed number of periods from `self` to `other`.
    pub fn periods_until(self, other: Period) -> i64 {
        other.ordinal() - self.ordinal()
    }

    /// The quarter containing this period.
    pub fn to_quarter(self) -> Period {
        match self.freq {
            Frequency::Quarterly => self,
            Frequency::Monthly => Period {
                freq: Frequency::Quarterly,
                year: self.year,
                sub: (self.sub - 1) / 3 + 1,
            },
        }
    }

    /// Machine-readable form: `YYYY-MM` for months, `YYYYQn` for quarters.
    pub fn iso(self) -> String {
        match self.freq {
            Frequency::Monthly => format!("{:04}-{:02}", self.year, self.sub),
            Frequency::Quarterly => format!("{:04}Q{}", self.year, self.sub),
        }
    }

    /// Parses a date into a period of the requested frequency.
    ///
    /// Accepts `YYYY-MM-DD`, `YYYY-MM`, `YYYYQn` and `YYYYMn`. Month dates
    /// map onto their quarter when `freq` is quarterly; a quarter cannot be
    /// read as a month.
    pub fn parse_as(s: &str, freq: Frequency) -> Result<Period, String> {
        let p: Period = s.parse()?;
        match (p.freq, freq) {
            (a, b) if a == b => Ok(p),
            (Frequency::Monthly, Frequency::Quarterly) => Ok(p.to_quarter()),
            _ => Err(format!("`{s}` is a quarter, expected a month")),
        }
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.freq {
            Frequency::Monthly => write!(f, "{}M{}", self.year, self.sub),
            Frequency::Quarterly => write!(f, "{}Q{}", self.year, self.sub),
        }
    }
}

impl FromStr for Period {
    type Err = String;

    fn from_str(raw: &str) -> Result<Self, String> {
        let s = raw.trim();
        let bad = || format!("unrecognised date `{raw}`");
        let year_of = |y: &str| -> Result<i32, String> {
            if y.len() != 4 || !y.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            y.parse().map_err(|_| bad())
        };
        let sub_of = |x: &str| -> Result<u8, String> {
            if x.is_empty() || x.len() > 2 || !x.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            x.parse().map_err(|_| bad())
        };

        if s.len() > 5 && s.is_char_boundary(4) && s.is_char_boundary(5) {
            let (y, rest) = s.split_at(4);
            match &rest[..1] {
                "Q" | "q" => {
                    return Period::new(Frequency::Quarterly, year_of(y)?, sub_of(&rest[1..])?)
                        .map_err(|_| bad())
                }
                "M" | "m" => {
                    return Period::new(Frequency::Monthly, year_of(y)?, sub_of(&rest[1..])?)
                        .map_err(|_| bad())
                }
                _ => {}
            }
        }

        let parts: Vec<&str> = s.split('-').collect();
        match parts.as_slice() {
            [y, m] | [y, m, _] => {
                if let [_, _, d] = parts.as_slice() {
                    let day = sub_of(d)?;
                    if day == 0 || day > 31 {
                        return Err(bad());
                    }
                }
                Period::new(Frequency::Monthly, year_of(y)?, sub_of(m)?).map_err(|_| bad())
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for Period {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Period {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Inclusive range of periods of one frequency.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DateRange {
    pub start: Period,
    pub end: Period,
}

impl DateRange {
    pub fn new(start: Period, end: Period) -> Result<Self> {
        if start.frequency() != end.frequency() {
            return Err(Error::FrequencyMismatch {
                expected: start.frequency(),
                found: end.frequency(),
            });
        }
        if start > end {
            return Err(Error::InvalidRange(format!("{start} is after {end}")));
        }
        Ok(DateRange { start, end })
    }

    pub fn frequency(&self) -> Frequency {
        self.start.frequency()
    }

    pub fn contains(&self, p: Period) -> bool {
        p.frequency() == self.frequency() && self.start <= p && p <= self.end
    }

    /// Number of calendar periods in the range.
    pub fn len(&self) -> usize {
        (self.start.periods_until(self.end) + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn periods(&self) -> impl Iterator<Item = Period> + '_ {
        (0..self.len() as i64).map(move |k| self.start.offset(k))
    }

    pub fn overlaps(&self, other: &DateRange) -> bool {
        self.start <= other.end && other.start <= self.end
    }
}

impl fmt::Display for DateRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}–{}", self.start, self.end)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    /// Dimensionless fraction in `[0, 1]`.
    Rate,
    /// Non-negative level, e.g. thousands of persons.
    Count,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub period: Period,
    pub value: f64,
}

/// Which source covers which part of a spliced series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub range: DateRange,
    pub source: String,
}

/// A dated sequence of values at a single frequency.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimeSeries {
    label: String,
    frequency: Frequency,
    kind: ValueKind,
    observations: Vec<Observation>,
    partial: Vec<Period>,
    provenance: Vec<Provenance>,
}

impl TimeSeries {
    pub fn new(
        label: impl Into<String>,
        frequency: Frequency,
        kind: ValueKind,
        observations: Vec<Observation>,
    ) -> Result<Self> {
        let label = label.into();
        let invalid = |reason: String| Error::InvalidSeries { label: label.clone(), reason };

        for (i, obs) in observations.iter().enumerate() {
            if obs.period.frequency() != frequency {
                return Err(invalid(format!("{} is not {frequency}", obs.period)));
            }
            if i > 0 && observations[i - 1].period >= obs.period {
                return Err(invalid(format!(
                    "periods not strictly increasing at {}",
                    obs.period
                )));
            }
            if !obs.value.is_finite() {
                return Err(invalid(format!("non-finite value at {}", obs.period)));
            }
            let ok = match kind {
                ValueKind::Rate => (0.0..=1.0).contains(&obs.value),
                ValueKind::Count => obs.value >= 0.0,
            };
            if !ok {
                return Err(invalid(format!(
                    "value {} at {} outside the {kind:?} domain",
                    obs.value, obs.period
                )));
            }
        }

        let provenance = match (observations.first(), observations.last()) {
            (Some(a), Some(b)) => vec![Provenance {
                range: DateRange { start: a.period, end: b.period },
                source: label.clone(),
            }],
            _ => Vec::new(),
        };
        Ok(TimeSeries { label, frequency, kind, observations, partial: Vec::new(), provenance })
    }

    /// Convenience constructor from `(period, value)` pairs.
    pub fn from_pairs(
        label: impl Into<String>,
        frequency: Frequency,
        kind: ValueKind,
        pairs: impl IntoIterator<Item = (Period, f64)>,
    ) -> Result<Self> {
        let obs = pairs.into_iter().map(|(period, value)| Observation { period, value }).collect();
        Self::new(label, frequency, kind, obs)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn frequency(&self) -> Frequency {
        self.frequency
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// Quarters built from fewer than three months.
    pub fn partial_periods(&self) -> &[Period] {
        &self.partial
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn first_period(&self) -> Option<Period> {
        self.observations.first().map(|o| o.period)
    }

    pub fn last_period(&self) -> Option<Period> {
        self.observations.last().map(|o| o.period)
    }

    pub fn get(&self, period: Period) -> Option<f64> {
        self.observations
            .binary_search_by(|o| o.period.cmp(&period))
            .ok()
            .map(|i| self.observations[i].value)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Observations that fall inside `range`; metadata is clipped to match.
    pub fn restrict(&self, range: DateRange) -> TimeSeries {
        let observations: Vec<Observation> =
            self.observations.iter().copied().filter(|o| range.contains(o.period)).collect();
        let partial = self.partial.iter().copied().filter(|p| range.contains(*p)).collect();
        let provenance = self
            .provenance
            .iter()
            .filter(|p| p.range.frequency() == range.frequency() && p.range.overlaps(&range))
            .map(|p| Provenance {
                range: DateRange {
                    start: p.range.start.max(range.start),
                    end: p.range.end.min(range.end),
                },
                source: p.source.clone(),
            })
            .collect();
        TimeSeries {
            label: self.label.clone(),
            frequency: self.frequency,
            kind: self.kind,
            observations,
            partial,
            provenance,
        }
    }

    /// Averages a monthly series into quarters.
    ///
    /// Every quarter with at least one month present is emitted; quarters
    /// with fewer than three months are listed in [`partial_periods`].
    ///
    /// [`partial_periods`]: TimeSeries::partial_periods
    pub fn monthly_to_quarterly(&self) -> Result<TimeSeries> {
        if self.frequency != Frequency::Monthly {
            return Err(Error::FrequencyMismatch {
                expected: Frequency::Monthly,
                found: self.frequency,
            });
        }
        if self.observations.is_empty() {
            return Err(Error::EmptySeries);
        }

        let mut buckets: BTreeMap<Period, (f64, u32)> = BTreeMap::new();
        for obs in &self.observations {
            let slot = buckets.entry(obs.period.to_quarter()).or_insert((0.0, 0));
            slot.0 += obs.value;
            slot.1 += 1;
        }

        let mut observations = Vec::with_capacity(buckets.len());
        let mut partial = Vec::new();
        for (period, (sum, n)) in buckets {
            if n < 3 {
                partial.push(period);
            }
            observations.push(Observation { period, value: sum / f64::from(n) });
        }

        let provenance = self
            .provenance
            .iter()
            .map(|p| Provenance {
                range: DateRange { start: p.range.start.to_quarter(), end: p.range.end.to_quarter() },
                source: p.source.clone(),
            })
            .collect();

        Ok(TimeSeries {
            label: self.label.clone(),
            frequency: Frequency::Quarterly,
            kind: self.kind,
            observations,
            partial,
            provenance,
        })
    }

    /// Mean, minimum and maximum over the observations inside `range`.
    pub fn summary(&self, range: DateRange) -> Result<SummaryStats> {
        SummaryStats::over(self.observations.iter().map(|o| (o.period, o.value)), range)
    }
}

/// Concatenates segments of several series, each restricted to its range.
///
/// Ranges must share one frequency, be in chronological order and not
/// overlap. Gaps between ranges are kept as gaps.
pub fn splice(segments: &[(DateRange, &TimeSeries)]) -> Result<TimeSeries> {
    let Some((_, first)) = segments.first() else {
        return Err(Error::EmptySeries);
    };
    let frequency = first.frequency();
    let kind = first.kind();

    let mut observations = Vec::new();
    let mut partial = Vec::new();
    let mut provenance = Vec::new();
    let mut labels: Vec<&str> = Vec::new();
    let mut previous: Option<DateRange> = None;

    for (range, series) in segments {
        for found in [series.frequency(), range.frequency()] {
            if found != frequency {
                return Err(Error::FrequencyMismatch { expected: frequency, found });
            }
        }
        if series.kind() != kind {
            return Err(Error::InvalidSeries {
                label: series.label().to_owned(),
                reason: format!("cannot splice {:?} data onto {kind:?} data", series.kind()),
            });
        }
        if let Some(prev) = previous {
            if range.start <= prev.end {
                return Err(Error::SpliceOverlap(range.start));
            }
        }
        previous = Some(*range);

        let piece = series.restrict(*range);
        observations.extend_from_slice(piece.observations());
        partial.extend_from_slice(piece.partial_periods());
        provenance.push(Provenance { range: *range, source: series.label().to_owned() });
        if !labels.contains(&series.label()) {
            labels.push(series.label());
        }
    }

    Ok(TimeSeries {
        label: labels.join(" + "),
        frequency,
        kind,
        observations,
        partial,
        provenance,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairedObservation {
    pub period: Period,
    pub u: f64,
    pub v: f64,
}

/// Aligned unemployment and vacancy rates; both strictly positive.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairedSeries {
    frequency: Frequency,
    observations: Vec<PairedObservation>,
}

impl PairedSeries {
    pub fn new(frequency: Frequency, observations: Vec<PairedObservation>) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::EmptySeries);
        }
        let invalid = |reason: String| Error::InvalidSeries { label: "(u, v)".into(), reason };
        for (i, o) in observations.iter().enumerate() {
            if o.period.frequency() != frequency {
                return Err(invalid(format!("{} is not {frequency}", o.period)));
            }
            if i > 0 && observations[i - 1].period >= o.period {
                return Err(invalid(format!("periods not strictly increasing at {}", o.period)));
            }
            if !(o.u.is_finite() && o.v.is_finite() && o.u > 0.0 && o.v > 0.0) {
                return Err(invalid(format!(
                    "u and v must be positive and finite at {} (u = {}, v = {})",
                    o.period, o.u, o.v
                )));
            }
        }
        Ok(PairedSeries { frequency, observations })
    }

    pub fn from_triples(
        frequency: Frequency,
        triples: impl IntoIterator<Item = (Period, f64, f64)>,
    ) -> Result<Self> {
        let obs = triples.into_iter().map(|(period, u, v)| PairedObservation { period, u, v }).collect();
        Self::new(frequency, obs)
    }

    pub fn frequency(&self) -> Frequency {
        self.frequency
    }

    pub fn observations(&self) -> &[PairedObservation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn first_period(&self) -> Period {
        self.observations[0].period
    }

    pub fn last_period(&self) -> Period {
        self.observations[self.observations.len() - 1].period
    }

    pub fn span(&self) -> DateRange {
        DateRange { start: self.first_period(), end: self.last_period() }
    }

    pub fn get(&self, period: Period) -> Option<PairedObservation> {
        self.observations
            .binary_search_by(|o| o.period.cmp(&period))
            .ok()
            .map(|i| self.observations[i])
    }

    /// Observations inside `range`, in order.
    pub fn window(&self, range: DateRange) -> &[PairedObservation] {
        let lo = self.observations.partition_point(|o| o.period < range.start);
        let hi = self.observations.partition_point(|o| o.period <= range.end);
        if range.frequency() != self.frequency || lo >= hi {
            return &[];
        }
        &self.observations[lo..hi]
    }

    pub fn restrict(&self, range: DateRange) -> Result<PairedSeries> {
        let w = self.window(range);
        if w.is_empty() {
            return Err(Error::EmptyWindow { start: range.start, end: range.end });
        }
        Ok(PairedSeries { frequency: self.frequency, observations: w.to_vec() })
    }

    pub fn u_series(&self) -> TimeSeries {
        self.project("u", |o| o.u)
    }

    pub fn v_series(&self) -> TimeSeries {
        self.project("v", |o| o.v)
    }

    fn project(&self, label: &str, f: impl Fn(&PairedObservation) -> f64) -> TimeSeries {
        TimeSeries::from_pairs(
            label,
            self.frequency,
            ValueKind::Rate,
            self.observations.iter().map(|o| (o.period, f(o))),
        )
        .expect("validated pairs form a valid rate series")
    }
}

/// Result of [`align`]: the joined pairs and the periods dropped because a
/// rate was not strictly positive.
#[derive(Clone, Debug, PartialEq)]
pub struct Alignment {
    pub pairs: PairedSeries,
    pub dropped: Vec<Period>,
}

/// Inner-joins an unemployment and a vacancy series on period.
pub fn align(u: &TimeSeries, v: &TimeSeries) -> Result<Alignment> {
    if u.frequency() != v.frequency() {
        return Err(Error::FrequencyMismatch { expected: u.frequency(), found: v.frequency() });
    }
    let (a, b) = (u.observations(), v.observations());
    let (mut i, mut j) = (0, 0);
    let mut joined = Vec::new();
    let mut dropped = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].period.cmp(&b[j].period) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let (uu, vv) = (a[i].value, b[j].value);
                if uu > 0.0 && vv > 0.0 {
                    joined.push(PairedObservation { period: a[i].period, u: uu, v: vv });
                } else {
                    dropped.push(a[i].period);
                }
                i += 1;
                j += 1;
            }
        }
    }
    if joined.is_empty() {
        return Err(Error::NoOverlap);
    }
    Ok(Alignment { pairs: PairedSeries::new(u.frequency(), joined)?, dropped })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub value: f64,
    pub period: Period,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    pub min: Extremum,
    pub max: Extremum,
    pub count: usize,
}

impl SummaryStats {
    /// Summarises the points that fall inside `range`. Points must arrive in
    /// chronological order; ties go to the earliest period.
    pub fn over(points: impl IntoIterator<Item = (Period, f64)>, range: DateRange) -> Result<Self> {
        let mut acc: Option<SummaryStats> = None;
        let mut sum = 0.0;
        for (period, value) in points.into_iter().filter(|(p, _)| range.contains(*p)) {
            sum += value;
            match acc.as_mut() {
                None => {
                    let e = Extremum { value, period };
                    acc = Some(SummaryStats { mean: 0.0, min: e, max: e, count: 1 });
                }
                Some(s) => {
                    s.count += 1;
                    if value < s.min.value {
                        s.min = Extremum { value, period };
                    }
                    if value > s.max.value {
                        s.max = Extremum { value, period };
                    }
                }
            }
        }
        let mut s = acc.ok_or(Error::EmptyWindow { start: range.start, end: range.end })?;
        // Clamp guards the min <= mean <= max invariant against rounding on constant data.
        s.mean = (sum / s.count as f64).clamp(s.min.value, s.max.value);
        Ok(s)
    }
}
