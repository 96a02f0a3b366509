//! Efficient unemployment from vacancy and unemployment data.
//!
//! Given an unemployment rate `u` and a vacancy rate `v`, the efficient
//! unemployment rate is their geometric mean `u* = √(u·v)`. The crate builds
//! paired `(u, v)` series from raw CSV sources, computes `u*`, tightness and
//! the unemployment gap, estimates Beveridge-curve elasticities with
//! structural breaks, and carries the small structural models used to check
//! the formula (a general-elasticity efficient rate, flow dynamics, and a
//! gap-closing policy rule).
//!
//! ```
//! use ustar::efficiency::{efficient_rate, classify, MarketState};
//!
//! let u_star = efficient_rate(0.04, 0.01).unwrap();
//! assert!((u_star - 0.02).abs() < 1e-15);
//! assert_eq!(classify(0.04, 0.01, 0.0).unwrap(), MarketState::Slack);
//! ```

pub mod beveridge;
pub mod efficiency;
pub mod error;
pub mod ingest;
pub mod models;
pub mod series;

pub use error::{Error, Result};
pub use series::{DateRange, Frequency, PairedSeries, Period, TimeSeries};
