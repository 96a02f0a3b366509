//! Efficient unemployment, tightness, the unemployment gap, and the
//! slack/tight classification of a labor market.
//!
//! With a Beveridge curve `u·v = A`, the nonproductive use of labor `u + v`
//! is smallest where `u = v = √A`. Since `A = u·v` at every point of the
//! curve, the efficient unemployment rate can be read off any observed pair
//! as the geometric mean `u* = √(u·v)`. The market is tight when `v > u`
//! (tightness `θ = v/u > 1`), slack when `v < u`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{DateRange, PairedSeries, Period, SummaryStats};

fn check_positive(u: f64, v: f64) -> Result<()> {
    if u > 0.0 && v > 0.0 && u.is_finite() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("u and v must be positive and finite (u = {u}, v = {v})")))
    }
}

/// `√(u·v)`. The efficient vacancy rate has the same value.
pub fn efficient_rate(u: f64, v: f64) -> Result<f64> {
    check_positive(u, v)?;
    // product form keeps the result exactly symmetric in (u, v)
    Ok((u * v).sqrt())
}

/// `θ = v / u`.
pub fn tightness(u: f64, v: f64) -> Result<f64> {
    if !(u > 0.0 && u.is_finite()) || !(v >= 0.0 && v.is_finite()) {
        return Err(Error::domain(format!("tightness needs u > 0 and v >= 0 (u = {u}, v = {v})")));
    }
    Ok(v / u)
}

/// Unemployment gap `u − √(u·v)`, in rate units.
pub fn gap(u: f64, v: f64) -> Result<f64> {
    Ok(u - efficient_rate(u, v)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarketState {
    Slack,
    Tight,
    Efficient,
}

impl MarketState {
    pub fn as_str(self) -> &'static str {
        match self {
            MarketState::Slack => "slack",
            MarketState::Tight => "tight",
            MarketState::Efficient => "efficient",
        }
    }
}

impl std::fmt::Display for MarketState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Efficient if `|v − u| ≤ tol`, otherwise tight when `v > u` and slack when `v < u`.
pub fn classify(u: f64, v: f64, tol: f64) -> Result<MarketState> {
    check_positive(u, v)?;
    if !(tol >= 0.0) {
        return Err(Error::domain(format!("classification tolerance must be >= 0, got {tol}")));
    }
    Ok(if (v - u).abs() <= tol {
        MarketState::Efficient
    } else if v > u {
        MarketState::Tight
    } else {
        MarketState::Slack
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyPoint {
    pub period: Period,
    pub u: f64,
    pub v: f64,
    pub u_star: f64,
    pub theta: f64,
    pub gap: f64,
    pub state: MarketState,
}

impl EfficiencyPoint {
    pub fn new(period: Period, u: f64, v: f64, tol: f64) -> Result<Self> {
        let u_star = efficient_rate(u, v)?;
        Ok(EfficiencyPoint {
            period,
            u,
            v,
            u_star,
            theta: v / u,
            gap: u - u_star,
            state: classify(u, v, tol)?,
        })
    }
}

/// One [`EfficiencyPoint`] per observation, in order.
pub fn analyze(series: &PairedSeries, tol: f64) -> Result<Vec<EfficiencyPoint>> {
    series.observations().iter().map(|o| EfficiencyPoint::new(o.period, o.u, o.v, tol)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Episode {
    pub state: MarketState,
    pub range: DateRange,
    /// Tightest point of a tight episode, slackest point of a slack one.
    /// Efficient episodes report the point closest to θ = 1.
    pub extremum: (Period, f64),
}

impl Episode {
    pub fn len(&self) -> usize {
        self.range.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Maximal runs of identical state. Earliest point wins extremum ties.
///
/// Runs are formed over consecutive *observations*; a calendar gap in the
/// data does not split a run.
pub fn episodes(points: &[EfficiencyPoint]) -> Vec<Episode> {
    let better = |state: MarketState, cand: f64, best: f64| match state {
        MarketState::Tight => cand > best,
        MarketState::Slack => cand < best,
        MarketState::Efficient => (cand - 1.0).abs() < (best - 1.0).abs(),
    };
    let mut out: Vec<Episode> = Vec::new();
    for p in points {
        match out.last_mut() {
            Some(ep) if ep.state == p.state => {
                ep.range.end = p.period;
                if better(p.state, p.theta, ep.extremum.1) {
                    ep.extremum = (p.period, p.theta);
                }
            }
            _ => out.push(Episode {
                state: p.state,
                range: DateRange { start: p.period, end: p.period },
                extremum: (p.period, p.theta),
            }),
        }
    }
    out
}

/// Window summaries of `u*`, `θ` and the gap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EfficiencySummary {
    pub u: SummaryStats,
    pub v: SummaryStats,
    pub u_star: SummaryStats,
    pub theta: SummaryStats,
    pub gap: SummaryStats,
}

pub fn summarize(points: &[EfficiencyPoint], range: DateRange) -> Result<EfficiencySummary> {
    let stat = |f: fn(&EfficiencyPoint) -> f64| SummaryStats::over(points.iter().map(|p| (p.period, f(p))), range);
    Ok(EfficiencySummary {
        u: stat(|p| p.u)?,
        v: stat(|p| p.v)?,
        u_star: stat(|p| p.u_star)?,
        theta: stat(|p| p.theta)?,
        gap: stat(|p| p.gap)?,
    })
}
