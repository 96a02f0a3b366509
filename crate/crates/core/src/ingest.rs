//! Reading source CSV files and assembling the (u, v) datasets.
//!
//! A [`DatasetManifest`] names one CSV column per data role. [`build_dataset`]
//! parses the roles an era needs, derives the JOLTS vacancy rate (job
//! openings over the civilian labor force), averages monthly data into
//! quarters where the era is quarterly, and splices the sources at fixed
//! boundaries:
//!
//! | era        | frequency | span            | vacancy sources                                  |
//! |------------|-----------|-----------------|--------------------------------------------------|
//! | postwar    | quarterly | 1951Q1–2019Q4   | Barnichon to 2000Q4, JOLTS from 2001Q1            |
//! | pandemic   | monthly   | 2020M1–2022M3   | JOLTS                                             |
//! | historical | quarterly | 1930Q1–1950Q4   | Petrosky-Nadeau–Zhang                             |
//! | full       | quarterly | 1930Q1–2022Q1   | all three, spliced                                |

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{
    align, splice, DateRange, Frequency, Observation, PairedSeries, Period, Provenance, TimeSeries,
    ValueKind,
};

/// How percent-vs-fraction normalisation is decided for a rate column.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitHint {
    #[default]
    Auto,
    Percent,
    Fraction,
}

/// What was done to the raw numbers of one file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Rates given in percent, divided by 100.
    Percent,
    /// Rates already given as fractions.
    Fraction,
    /// Counts are never rescaled.
    None,
}

/// Where one series lives and how to read it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    pub path: PathBuf,
    pub series_id: String,
    pub frequency: Frequency,
    pub value_kind: ValueKind,
    pub date_column: String,
    pub value_column: String,
    #[serde(default)]
    pub unit: UnitHint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParsedSource {
    pub series: TimeSeries,
    /// Data rows read, including skipped ones.
    pub rows: usize,
    /// Rows whose value was blank or `.`.
    pub skipped: usize,
    pub normalization: Normalization,
}

fn cell_is_missing(cell: &str) -> bool {
    let c = cell.trim();
    c.is_empty() || c == "."
}

fn parse_number(cell: &str) -> Option<f64> {
    let cleaned: String = cell.trim().chars().filter(|c| *c != ',').collect();
    cleaned.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn open_csv(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
    Ok(csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(file))
}

fn column_index(headers: &csv::StringRecord, name: &str, path: &Path) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim_start_matches('\u{feff}').eq_ignore_ascii_case(name.trim()))
        .ok_or_else(|| Error::Schema { path: path.to_owned(), column: name.to_owned() })
}

/// Reads one dated column from a CSV file into a [`TimeSeries`].
///
/// Blank and `.` values are skipped and counted. Thousands separators are
/// stripped. For rates the unit is detected per file: all magnitudes above
/// one means percent, none above one means fraction, anything else is
/// [`Error::UnitAmbiguity`] unless the source pins its unit.
pub fn parse_csv(spec: &SourceSpec) -> Result<ParsedSource> {
    let path = spec.path.as_path();
    let mut reader = open_csv(path)?;
    let headers = reader.headers().map_err(|source| Error::Csv { path: path.to_owned(), source })?.clone();
    let date_idx = column_index(&headers, &spec.date_column, path)?;
    let value_idx = column_index(&headers, &spec.value_column, path)?;

    let mut raw: Vec<(Period, f64)> = Vec::new();
    let mut rows = 0;
    let mut skipped = 0;
    for (i, record) in reader.records().enumerate() {
        // header is row 1
        let row = i + 2;
        let record = record.map_err(|source| Error::Csv { path: path.to_owned(), source })?;
        rows += 1;
        let date_cell = record.get(date_idx).unwrap_or("");
        let value_cell = record.get(value_idx).unwrap_or("");
        if cell_is_missing(value_cell) {
            skipped += 1;
            continue;
        }
        let period = Period::parse_as(date_cell, spec.frequency).map_err(|message| Error::Parse {
            path: path.to_owned(),
            row,
            message,
        })?;
        let value = parse_number(value_cell).ok_or_else(|| Error::Parse {
            path: path.to_owned(),
            row,
            message: format!("cannot read `{value_cell}` as a number"),
        })?;
        raw.push((period, value));
    }

    let normalization = match spec.value_kind {
        ValueKind::Count => Normalization::None,
        ValueKind::Rate => match spec.unit {
            UnitHint::Percent => Normalization::Percent,
            UnitHint::Fraction => Normalization::Fraction,
            UnitHint::Auto => {
                let above = raw.iter().filter(|(_, x)| x.abs() > 1.0).count();
                let below = raw.iter().filter(|(_, x)| x.abs() < 1.0 && *x != 0.0).count();
                match (above, below) {
                    (0, _) => Normalization::Fraction,
                    (_, 0) => Normalization::Percent,
                    _ => return Err(Error::UnitAmbiguity { path: path.to_owned(), above, below }),
                }
            }
        },
    };
    let scale = if normalization == Normalization::Percent { 0.01 } else { 1.0 };
    let observations =
        raw.into_iter().map(|(period, value)| Observation { period, value: value * scale }).collect();
    let series = TimeSeries::new(spec.series_id.clone(), spec.frequency, spec.value_kind, observations)?;
    Ok(ParsedSource { series, rows, skipped, normalization })
}

/// Vacancy rate from job-openings and labor-force counts, as ratios on the
/// periods both series share.
#[derive(Clone, Debug, PartialEq)]
pub struct VacancyRate {
    pub series: TimeSeries,
    /// Periods whose ratio is at least one: no real labor market has as many
    /// openings as workers, so these almost certainly signal mismatched inputs.
    pub implausible: Vec<Period>,
}

pub fn vacancy_rate_from_openings(openings: &TimeSeries, labor_force: &TimeSeries) -> Result<VacancyRate> {
    if openings.frequency() != labor_force.frequency() {
        return Err(Error::FrequencyMismatch {
            expected: openings.frequency(),
            found: labor_force.frequency(),
        });
    }
    let mut obs = Vec::new();
    let mut implausible = Vec::new();
    for o in openings.observations() {
        let Some(lf) = labor_force.get(o.period) else { continue };
        if lf == 0.0 {
            return Err(Error::DivisionByZero(o.period));
        }
        let value = o.value / lf;
        if value >= 1.0 {
            implausible.push(o.period);
        }
        obs.push(Observation { period: o.period, value });
    }
    if obs.is_empty() {
        return Err(Error::NoOverlap);
    }
    let label = format!("{} / {}", openings.label(), labor_force.label());
    let series = TimeSeries::new(label, openings.frequency(), ValueKind::Rate, obs)?;
    Ok(VacancyRate { series, implausible })
}

/// Role a source plays in dataset construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    UnemploymentRate,
    JobOpenings,
    LaborForce,
    HistoricalU,
    HistoricalV,
    BarnichonV,
    Recessions,
}

impl Role {
    pub const ALL: [Role; 7] = [
        Role::UnemploymentRate,
        Role::JobOpenings,
        Role::LaborForce,
        Role::HistoricalU,
        Role::HistoricalV,
        Role::BarnichonV,
        Role::Recessions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Role::UnemploymentRate => "unemployment_rate",
            Role::JobOpenings => "job_openings",
            Role::LaborForce => "labor_force",
            Role::HistoricalU => "historical_u",
            Role::HistoricalV => "historical_v",
            Role::BarnichonV => "barnichon_v",
            Role::Recessions => "recessions",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Role::ALL.into_iter().find(|r| r.name() == s).ok_or_else(|| format!("unknown dataset role `{s}`"))
    }
}

/// Map from dataset role to source.
///
/// On disk this is a TOML file with one table per role. Relative paths are
/// resolved against the manifest's directory:
///
/// ```toml
/// [unemployment_rate]
/// path = "raw/UNRATE.csv"
/// series_id = "UNRATE"
/// frequency = "monthly"
/// value_kind = "rate"
/// date_column = "DATE"
/// value_column = "UNRATE"
/// ```
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DatasetManifest {
    sources: BTreeMap<Role, SourceSpec>,
}

impl DatasetManifest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, role: Role, spec: SourceSpec) -> Self {
        self.sources.insert(role, spec);
        self
    }

    pub fn get(&self, role: Role) -> Option<&SourceSpec> {
        self.sources.get(&role)
    }

    pub fn roles(&self) -> impl Iterator<Item = Role> + '_ {
        self.sources.keys().copied()
    }

    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self> {
        let raw: BTreeMap<String, SourceSpec> =
            toml::from_str(text).map_err(|e| Error::Manifest(e.to_string()))?;
        let mut sources = BTreeMap::new();
        for (key, mut spec) in raw {
            let role: Role = key.parse().map_err(Error::Manifest)?;
            if spec.date_column.trim().is_empty() || spec.value_column.trim().is_empty() {
                return Err(Error::Manifest(format!("{role}: column names must be nonempty")));
            }
            if spec.path.is_relative() {
                spec.path = base_dir.join(&spec.path);
            }
            sources.insert(role, spec);
        }
        Ok(DatasetManifest { sources })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
        Self::from_toml_str(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Fails with the first missing role among `roles`.
    pub fn require(&self, roles: &[Role]) -> Result<()> {
        match roles.iter().find(|r| !self.sources.contains_key(r)) {
            Some(r) => Err(Error::Manifest(format!("role `{r}` is required but not configured"))),
            None => Ok(()),
        }
    }
}

/// NBER peak-to-trough dates, carried through to reports as shading metadata.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RecessionCalendar {
    pub ranges: Vec<DateRange>,
}

impl RecessionCalendar {
    pub fn new(ranges: Vec<DateRange>) -> Result<Self> {
        for pair in ranges.windows(2) {
            if pair[1].start <= pair[0].end {
                return Err(Error::SpliceOverlap(pair[1].start));
            }
        }
        Ok(RecessionCalendar { ranges })
    }

    /// Reads peak and trough months from the source's date and value columns.
    pub fn from_source(spec: &SourceSpec) -> Result<Self> {
        let path = spec.path.as_path();
        let mut reader = open_csv(path)?;
        let headers = reader.headers().map_err(|source| Error::Csv { path: path.to_owned(), source })?.clone();
        let peak_idx = column_index(&headers, &spec.date_column, path)?;
        let trough_idx = column_index(&headers, &spec.value_column, path)?;
        let mut ranges = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let row = i + 2;
            let record = record.map_err(|source| Error::Csv { path: path.to_owned(), source })?;
            let parse = |idx: usize| {
                Period::parse_as(record.get(idx).unwrap_or(""), Frequency::Monthly)
                    .map_err(|message| Error::Parse { path: path.to_owned(), row, message })
            };
            let range = DateRange::new(parse(peak_idx)?, parse(trough_idx)?).map_err(|e| Error::Parse {
                path: path.to_owned(),
                row,
                message: e.to_string(),
            })?;
            ranges.push(range);
        }
        Self::new(ranges)
    }

    /// Whether the period (month, or any month of a quarter) is in a recession.
    pub fn contains(&self, p: Period) -> bool {
        let months: Vec<Period> = match p.frequency() {
            Frequency::Monthly => vec![p],
            Frequency::Quarterly => {
                (1..=3).map(|k| Period::month(p.year(), (p.sub() - 1) * 3 + k)).collect()
            }
        };
        self.ranges.iter().any(|r| months.iter().any(|m| r.contains(*m)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Era {
    Postwar,
    Pandemic,
    Historical,
    Full,
}

impl Era {
    pub const ALL: [Era; 4] = [Era::Postwar, Era::Pandemic, Era::Historical, Era::Full];

    pub fn name(self) -> &'static str {
        match self {
            Era::Postwar => "postwar",
            Era::Pandemic => "pandemic",
            Era::Historical => "historical",
            Era::Full => "full",
        }
    }

    pub fn frequency(self) -> Frequency {
        match self {
            Era::Pandemic => Frequency::Monthly,
            _ => Frequency::Quarterly,
        }
    }

    pub fn range(self) -> DateRange {
        let (start, end) = match self {
            Era::Postwar => (Period::quarter(1951, 1), Period::quarter(2019, 4)),
            Era::Pandemic => (Period::month(2020, 1), Period::month(2022, 3)),
            Era::Historical => (Period::quarter(1930, 1), Period::quarter(1950, 4)),
            Era::Full => (Period::quarter(1930, 1), Period::quarter(2022, 1)),
        };
        DateRange { start, end }
    }

    pub fn required_roles(self) -> &'static [Role] {
        match self {
            Era::Postwar => &[Role::UnemploymentRate, Role::BarnichonV, Role::JobOpenings, Role::LaborForce],
            Era::Pandemic => &[Role::UnemploymentRate, Role::JobOpenings, Role::LaborForce],
            Era::Historical => &[Role::HistoricalU, Role::HistoricalV],
            Era::Full => &[
                Role::UnemploymentRate,
                Role::BarnichonV,
                Role::JobOpenings,
                Role::LaborForce,
                Role::HistoricalU,
                Role::HistoricalV,
            ],
        }
    }
}

impl fmt::Display for Era {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Era {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Era::ALL
            .into_iter()
            .find(|e| e.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| format!("unknown era `{s}` (expected postwar, pandemic, historical or full)"))
    }
}

/// Last quarter of Barnichon vacancy data in the postwar and full builds.
pub const BARNICHON_END: (i32, u8) = (2000, 4);
/// First quarter of JOLTS-derived vacancy data.
pub const JOLTS_START: (i32, u8) = (2001, 1);
/// Last quarter of the historical (1930–1950) data.
pub const HISTORICAL_END: (i32, u8) = (1950, 4);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SourceReport {
    pub role: Role,
    pub series_id: String,
    pub path: PathBuf,
    pub rows: usize,
    pub skipped: usize,
    pub normalization: Normalization,
}

/// Everything a reader needs to audit how a dataset was assembled.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BuildReport {
    pub era: Era,
    pub frequency: Frequency,
    pub range: DateRange,
    pub observations: usize,
    pub sources: Vec<SourceReport>,
    pub u_provenance: Vec<Provenance>,
    pub v_provenance: Vec<Provenance>,
    pub partial_quarters: Vec<Period>,
    pub dropped_nonpositive: Vec<Period>,
    pub missing_periods: Vec<Period>,
    pub implausible_vacancy_rates: Vec<Period>,
    pub recessions: Vec<DateRange>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub era: Era,
    pub pairs: PairedSeries,
    pub report: BuildReport,
}

struct Loader<'a> {
    manifest: &'a DatasetManifest,
    cache: HashMap<Role, TimeSeries>,
    reports: Vec<SourceReport>,
    implausible: Vec<Period>,
}

impl<'a> Loader<'a> {
    fn new(manifest: &'a DatasetManifest) -> Self {
        Loader { manifest, cache: HashMap::new(), reports: Vec::new(), implausible: Vec::new() }
    }

    fn load(&mut self, role: Role) -> Result<TimeSeries> {
        if let Some(s) = self.cache.get(&role) {
            return Ok(s.clone());
        }
        let spec = self
            .manifest
            .get(role)
            .ok_or_else(|| Error::Manifest(format!("role `{role}` is required but not configured")))?;
        let parsed = parse_csv(spec)?;
        self.reports.push(SourceReport {
            role,
            series_id: spec.series_id.clone(),
            path: spec.path.clone(),
            rows: parsed.rows,
            skipped: parsed.skipped,
            normalization: parsed.normalization,
        });
        self.cache.insert(role, parsed.series.clone());
        Ok(parsed.series)
    }

    fn quarterly(&mut self, role: Role) -> Result<TimeSeries> {
        let s = self.load(role)?;
        match s.frequency() {
            Frequency::Monthly => s.monthly_to_quarterly(),
            Frequency::Quarterly => Ok(s),
        }
    }

    fn jolts_monthly(&mut self) -> Result<TimeSeries> {
        let openings = self.load(Role::JobOpenings)?;
        let labor_force = self.load(Role::LaborForce)?;
        let rate = vacancy_rate_from_openings(&openings, &labor_force)?;
        self.implausible.extend(rate.implausible);
        Ok(rate.series.with_label("JOLTS"))
    }
}

fn quarter(p: (i32, u8)) -> Period {
    Period::quarter(p.0, p.1)
}

fn range(start: Period, end: Period) -> DateRange {
    DateRange { start, end }
}

/// Assembles the (u, v) pairs for one era from the manifest's sources.
pub fn build_dataset(manifest: &DatasetManifest, era: Era) -> Result<Dataset> {
    manifest.require(era.required_roles())?;
    let mut loader = Loader::new(manifest);
    let span = era.range();

    let (u, v) = match era {
        Era::Pandemic => {
            let u = loader.load(Role::UnemploymentRate)?.restrict(span);
            let v = loader.jolts_monthly()?.restrict(span);
            (u, v)
        }
        Era::Historical => {
            let u = loader.quarterly(Role::HistoricalU)?.restrict(span);
            let v = loader.quarterly(Role::HistoricalV)?.restrict(span);
            (u, v)
        }
        Era::Postwar | Era::Full => {
            let unrate = loader.quarterly(Role::UnemploymentRate)?;
            let barnichon = loader.quarterly(Role::BarnichonV)?;
            let jolts = loader.jolts_monthly()?.monthly_to_quarterly()?;
            let modern_start = Period::quarter(1951, 1);
            let barnichon_part = range(modern_start, quarter(BARNICHON_END));
            let jolts_part = range(quarter(JOLTS_START), span.end);

            if era == Era::Postwar {
                let u = unrate.restrict(span);
                let v = splice(&[(barnichon_part, &barnichon), (jolts_part, &jolts)])?;
                (u, v)
            } else {
                let hist_u = loader.quarterly(Role::HistoricalU)?;
                let hist_v = loader.quarterly(Role::HistoricalV)?;
                let hist_part = range(span.start, quarter(HISTORICAL_END));
                let modern_part = range(modern_start, span.end);
                let u = splice(&[(hist_part, &hist_u), (modern_part, &unrate)])?;
                let v = splice(&[(hist_part, &hist_v), (barnichon_part, &barnichon), (jolts_part, &jolts)])?;
                (u, v)
            }
        }
    };

    let alignment = align(&u, &v)?;
    let pairs = alignment.pairs;

    let mut partial: Vec<Period> =
        u.partial_periods().iter().chain(v.partial_periods()).copied().filter(|p| pairs.get(*p).is_some()).collect();
    partial.sort();
    partial.dedup();

    let missing = span.periods().filter(|p| pairs.get(*p).is_none()).collect();

    let recessions = match manifest.get(Role::Recessions) {
        Some(spec) => RecessionCalendar::from_source(spec)?.ranges,
        None => Vec::new(),
    };

    let mut implausible = loader.implausible;
    implausible.retain(|p| {
        let p = if era.frequency() == Frequency::Quarterly { p.to_quarter() } else { *p };
        span.contains(p)
    });

    let report = BuildReport {
        era,
        frequency: era.frequency(),
        range: span,
        observations: pairs.len(),
        sources: loader.reports,
        u_provenance: u.provenance().to_vec(),
        v_provenance: v.provenance().to_vec(),
        partial_quarters: partial,
        dropped_nonpositive: alignment.dropped,
        missing_periods: missing,
        implausible_vacancy_rates: implausible,
        recessions,
    };
    Ok(Dataset { era, pairs, report })
}

/// Writes the canonical `period,u,v` table: fractions with six decimals,
/// months as `YYYY-MM`, quarters as `YYYYQn`.
pub fn write_canonical<W: Write>(pairs: &PairedSeries, mut out: W) -> std::io::Result<()> {
    writeln!(out, "period,u,v")?;
    for o in pairs.observations() {
        writeln!(out, "{},{:.6},{:.6}", o.period.iso(), o.u, o.v)?;
    }
    Ok(())
}

/// Detects the frequency of a CSV's date column from its first data row.
pub fn sniff_frequency(path: &Path, date_column: &str) -> Result<Frequency> {
    let mut reader = open_csv(path)?;
    let headers = reader.headers().map_err(|source| Error::Csv { path: path.to_owned(), source })?.clone();
    let idx = column_index(&headers, date_column, path)?;
    let first = reader
        .records()
        .next()
        .ok_or(Error::EmptySeries)?
        .map_err(|source| Error::Csv { path: path.to_owned(), source })?;
    let p: Period = first
        .get(idx)
        .unwrap_or("")
        .parse()
        .map_err(|message| Error::Parse { path: path.to_owned(), row: 2, message })?;
    Ok(p.frequency())
}

/// Reads a canonical `period,u,v` file back through [`parse_csv`].
pub fn read_canonical(path: &Path) -> Result<PairedSeries> {
    let frequency = sniff_frequency(path, "period")?;
    let column = |name: &str| SourceSpec {
        path: path.to_owned(),
        series_id: name.to_owned(),
        frequency,
        value_kind: ValueKind::Rate,
        date_column: "period".into(),
        value_column: name.to_owned(),
        unit: UnitHint::Fraction,
    };
    let u = parse_csv(&column("u"))?.series;
    let v = parse_csv(&column("v"))?.series;
    Ok(align(&u, &v)?.pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        fs::write(&p, body).unwrap();
        p
    }

    fn spec(path: PathBuf, kind: ValueKind, col: &str) -> SourceSpec {
        SourceSpec {
            path,
            series_id: col.into(),
            frequency: Frequency::Monthly,
            value_kind: kind,
            date_column: "date".into(),
            value_column: col.into(),
            unit: UnitHint::Auto,
        }
    }

    #[test]
    fn percent_rates_are_normalised() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "u.csv", "date,u\n2020-01-01,3.6\n2020-02-01,3.5\n");
        let parsed = parse_csv(&spec(p, ValueKind::Rate, "u")).unwrap();
        assert_eq!(parsed.normalization, Normalization::Percent);
        assert!((parsed.series.get(Period::month(2020, 1)).unwrap() - 0.036).abs() < 1e-15);
    }

    #[test]
    fn dot_rows_are_skipped_and_counted() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "u.csv", "date,u\n2020-01,3.6\n2020-02,.\n2020-03,\n2020-04,14.7\n");
        let parsed = parse_csv(&spec(p, ValueKind::Rate, "u")).unwrap();
        assert_eq!(parsed.skipped, 2);
        assert_eq!(parsed.rows, 4);
        assert_eq!(parsed.series.len(), 2);
    }

    #[test]
    fn thousands_separators_are_stripped() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "c.csv", "date,count\n2020-01,\"7,000\"\n");
        let parsed = parse_csv(&spec(p, ValueKind::Count, "count")).unwrap();
        assert_eq!(parsed.series.get(Period::month(2020, 1)), Some(7000.0));
        assert_eq!(parsed.normalization, Normalization::None);
    }

    #[test]
    fn missing_column_and_bad_cells_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "u.csv", "date,u\n2020-01,3.6\n2020-02,abc\n");
        let err = parse_csv(&spec(p.clone(), ValueKind::Rate, "x")).unwrap_err();
        assert!(matches!(err, Error::Schema { ref column, .. } if column == "x"));
        let err = parse_csv(&spec(p, ValueKind::Rate, "u")).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 3, .. }));

        let q = write(dir.path(), "d.csv", "date,u\nJan 2020,3.6\n");
        assert!(matches!(parse_csv(&spec(q, ValueKind::Rate, "u")), Err(Error::Parse { row: 2, .. })));
    }

    #[test]
    fn mixed_units_are_ambiguous_unless_pinned() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "v.csv", "date,v\n1932-01,0.6\n1944-01,4.1\n");
        assert!(matches!(
            parse_csv(&spec(p.clone(), ValueKind::Rate, "v")),
            Err(Error::UnitAmbiguity { above: 1, below: 1, .. })
        ));
        let mut pinned = spec(p, ValueKind::Rate, "v");
        pinned.unit = UnitHint::Percent;
        let parsed = parse_csv(&pinned).unwrap();
        assert!((parsed.series.get(Period::month(1932, 1)).unwrap() - 0.006).abs() < 1e-15);
    }

    fn counts(label: &str, pts: &[(Period, f64)]) -> TimeSeries {
        TimeSeries::from_pairs(label, Frequency::Monthly, ValueKind::Count, pts.iter().copied()).unwrap()
    }

    #[test]
    fn vacancy_rate_is_openings_over_labor_force() {
        let m = Period::month(2022, 3);
        let r = vacancy_rate_from_openings(&counts("o", &[(m, 11_000.0)]), &counts("lf", &[(m, 164_000.0)])).unwrap();
        assert!((r.series.get(m).unwrap() - 11_000.0 / 164_000.0).abs() < 1e-15);
        assert!((r.series.get(m).unwrap() - 0.0671).abs() < 5e-5);
        assert!(r.implausible.is_empty());
    }

    #[test]
    fn vacancy_rate_edge_cases() {
        let a = Period::month(2020, 1);
        let b = Period::month(2021, 1);
        let disjoint = vacancy_rate_from_openings(&counts("o", &[(a, 1.0)]), &counts("lf", &[(b, 2.0)]));
        assert!(matches!(disjoint, Err(Error::NoOverlap)));

        let zero = vacancy_rate_from_openings(&counts("o", &[(a, 1.0)]), &counts("lf", &[(a, 0.0)]));
        assert!(matches!(zero, Err(Error::DivisionByZero(p)) if p == a));

        let same = counts("x", &[(a, 5.0), (b, 7.0)]);
        let r = vacancy_rate_from_openings(&same, &same).unwrap();
        assert!(r.series.observations().iter().all(|o| o.value == 1.0));
        assert_eq!(r.implausible, vec![a, b]);
    }

    #[test]
    fn manifest_resolves_relative_paths_and_rejects_unknown_roles() {
        let text = r#"
            [unemployment_rate]
            path = "raw/UNRATE.csv"
            series_id = "UNRATE"
            frequency = "monthly"
            value_kind = "rate"
            date_column = "DATE"
            value_column = "UNRATE"
        "#;
        let m = DatasetManifest::from_toml_str(text, Path::new("/data")).unwrap();
        assert_eq!(m.get(Role::UnemploymentRate).unwrap().path, Path::new("/data/raw/UNRATE.csv"));
        assert!(m.require(&[Role::UnemploymentRate]).is_ok());
        assert!(m.require(Era::Pandemic.required_roles()).is_err());

        let bad = text.replace("[unemployment_rate]", "[unemployment]");
        assert!(matches!(DatasetManifest::from_toml_str(&bad, Path::new(".")), Err(Error::Manifest(_))));
    }

    #[test]
    fn era_spans() {
        assert_eq!(Era::Postwar.range().len(), 276);
        assert_eq!(Era::Pandemic.range().len(), 27);
        assert_eq!(Era::Historical.range().len(), 84);
        assert_eq!(Era::Full.range().len(), 369);
        assert_eq!("Full".parse::<Era>().unwrap(), Era::Full);
    }

    #[test]
    fn recession_calendar_flags_quarters() {
        let cal = RecessionCalendar::new(vec![DateRange::new(Period::month(2020, 2), Period::month(2020, 4)).unwrap()])
            .unwrap();
        assert!(cal.contains(Period::quarter(2020, 1)));
        assert!(cal.contains(Period::quarter(2020, 2)));
        assert!(!cal.contains(Period::quarter(2020, 3)));
        assert!(!cal.contains(Period::month(2020, 5)));
    }
}
