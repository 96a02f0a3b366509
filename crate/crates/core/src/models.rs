//! Structural side of the analysis: the sufficient-statistic efficient rate
//! with a general Beveridge elasticity, unemployment flow dynamics, the
//! Beveridge curve generated by a Cobb-Douglas matching function, and the
//! monetary-policy rule.

use serde::{Deserialize, Serialize};

use crate::efficiency::efficient_rate;
use crate::error::{Error, Result};
use crate::series::{PairedSeries, Period};

/// Parameters of the general efficient-unemployment formula.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ms16Params {
    /// Beveridge elasticity, positive magnitude.
    pub eps: f64,
    /// Social value of nonwork, in `[0, 1)`.
    pub zeta: f64,
    /// Recruiting cost, in workers per vacancy.
    pub kappa: f64,
}

impl Ms16Params {
    pub fn new(eps: f64, zeta: f64, kappa: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::domain(format!("eps must be positive, got {eps}")));
        }
        if !(0.0..1.0).contains(&zeta) {
            return Err(Error::domain(format!("zeta must lie in [0, 1), got {zeta}")));
        }
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::domain(format!("kappa must be positive, got {kappa}")));
        }
        Ok(Ms16Params { eps, zeta, kappa })
    }

    /// `(1, 0, 1)`: the parameters under which the formula is `√(u·v)`.
    pub fn square_root() -> Self {
        Ms16Params { eps: 1.0, zeta: 0.0, kappa: 1.0 }
    }
}

/// `u* = [κ·ε/(1−ζ) · v·u^ε]^{1/(1+ε)}`.
pub fn ms16_efficient_rate(u: f64, v: f64, p: &Ms16Params) -> Result<f64> {
    let p = Ms16Params::new(p.eps, p.zeta, p.kappa)?;
    if !(u > 0.0 && v > 0.0) {
        return Err(Error::domain(format!("u and v must be positive (u = {u}, v = {v})")));
    }
    if p == Ms16Params::square_root() {
        // exact reduction; the general path below differs from √(uv) by rounding
        return efficient_rate(u, v);
    }
    let log_base = (p.kappa * p.eps / (1.0 - p.zeta)).ln() + v.ln() + p.eps * u.ln();
    Ok((log_base / (1.0 + p.eps)).exp())
}

/// One row of the formula comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormulaComparison {
    pub period: Period,
    pub sqrt_uv: f64,
    pub ms16: f64,
    pub diff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSummary {
    pub rows: Vec<FormulaComparison>,
    pub mean_abs: f64,
    pub max_abs: f64,
}

/// Pointwise `ms16 − √(uv)` with mean and max absolute difference.
pub fn compare_formulas(pairs: &PairedSeries, p: &Ms16Params) -> Result<ComparisonSummary> {
    let rows = pairs
        .observations()
        .iter()
        .map(|o| {
            let sqrt_uv = efficient_rate(o.u, o.v)?;
            let ms16 = ms16_efficient_rate(o.u, o.v, p)?;
            Ok(FormulaComparison { period: o.period, sqrt_uv, ms16, diff: ms16 - sqrt_uv })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = rows.len() as f64;
    let mean_abs = rows.iter().map(|r| r.diff.abs()).sum::<f64>() / n;
    let max_abs = rows.iter().map(|r| r.diff.abs()).fold(0.0, f64::max);
    Ok(ComparisonSummary { rows, mean_abs: mean_abs.min(max_abs), max_abs })
}

/// Monthly worker flows.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowParams {
    /// Job-separation rate, per month.
    pub lambda: f64,
    /// Job-finding rate, per month.
    pub f: f64,
    /// Matching efficiency `ω` in `m = ω·√(u·v)`, per month.
    pub omega: f64,
}

impl FlowParams {
    pub fn new(lambda: f64, f: f64, omega: f64) -> Result<Self> {
        for (name, x) in [("lambda", lambda), ("f", f), ("omega", omega)] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {x}")));
            }
        }
        Ok(FlowParams { lambda, f, omega })
    }

    /// Flows without a matching function attached (`ω = 1`).
    pub fn flows(lambda: f64, f: f64) -> Result<Self> {
        Self::new(lambda, f, 1.0)
    }

    /// Speed at which unemployment converges to its steady state.
    pub fn decay_rate(&self) -> f64 {
        self.lambda + self.f
    }
}

/// `u^b = λ / (λ + f)`.
pub fn steady_state_u(fp: &FlowParams) -> f64 {
    fp.lambda / (fp.lambda + fp.f)
}

/// `ln 2 / (λ + f)`, in months.
pub fn half_life(fp: &FlowParams) -> f64 {
    std::f64::consts::LN_2 / fp.decay_rate()
}

/// Closed-form solution of `u̇ = λ(1−u) − f·u` started at `u0`.
pub fn unemployment_path(u0: f64, fp: &FlowParams, t: f64) -> Result<f64> {
    if !(u0 > 0.0 && u0 < 1.0) {
        return Err(Error::domain(format!("u0 must lie in (0, 1), got {u0}")));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("t must be a nonnegative time, got {t}")));
    }
    let ub = steady_state_u(fp);
    Ok(ub + (u0 - ub) * (-fp.decay_rate() * t).exp())
}

fn flow_rhs(fp: &FlowParams, u: f64) -> f64 {
    fp.lambda * (1.0 - u) - fp.f * u
}

/// Fixed-step classical Runge-Kutta integration of the flow equation.
///
/// The horizon is split into `⌈T/dt⌉` equal steps, so the effective step
/// never exceeds `dt`. Returns `(t, u)` including the starting point.
pub fn simulate_ode(u0: f64, fp: &FlowParams, dt: f64, horizon: f64) -> Result<Vec<(f64, f64)>> {
    if !(u0 > 0.0 && u0 < 1.0) {
        return Err(Error::domain(format!("u0 must lie in (0, 1), got {u0}")));
    }
    if !(dt > 0.0 && dt <= 0.25) {
        return Err(Error::domain(format!("dt must lie in (0, 0.25], got {dt}")));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::domain(format!("horizon must be positive, got {horizon}")));
    }
    let steps = (horizon / dt - 1e-9).ceil().max(1.0) as usize;
    let h = horizon / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    let mut u = u0;
    out.push((0.0, u));
    for s in 1..=steps {
        let k1 = flow_rhs(fp, u);
        let k2 = flow_rhs(fp, u + 0.5 * h * k1);
        let k3 = flow_rhs(fp, u + 0.5 * h * k2);
        let k4 = flow_rhs(fp, u + h * k3);
        u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        let t = s as f64 * h;
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Integration { t, u });
        }
        out.push((t, u));
    }
    Ok(out)
}

/// Steady-state `(u, v)` at tightness `θ` when job finding follows the
/// matching function: `f(θ) = ω·√θ`, `u = λ/(λ + f(θ))`, `v = θ·u`.
pub fn beveridge_from_matching(fp: &FlowParams, theta: f64) -> Result<(f64, f64)> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::domain(format!("theta must be positive, got {theta}")));
    }
    let f = job_finding_rate(fp, theta);
    let u = fp.lambda / (fp.lambda + f);
    Ok((u, theta * u))
}

/// `ω·√θ`.
pub fn job_finding_rate(fp: &FlowParams, theta: f64) -> f64 {
    fp.omega * theta.sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicyInput {
    /// Current nominal rate, fraction per year.
    pub i: f64,
    pub u: f64,
    pub u_star: f64,
    /// `du/di`: percentage points of unemployment per percentage point of interest.
    pub multiplier: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicyRecommendation {
    pub gap: f64,
    /// `i* − i`; positive means raise rates.
    pub delta_i: f64,
    /// `max(i + Δi, 0)`.
    pub target_i: f64,
    /// Whether the zero lower bound cut the target.
    pub zlb_binding: bool,
}

/// Rate change that closes an unemployment gap: `−gap / multiplier`.
pub fn rate_change_for_gap(gap: f64, multiplier: f64) -> Result<f64> {
    if !(multiplier > 0.0 && multiplier.is_finite()) {
        return Err(Error::domain(format!("monetary multiplier must be positive, got {multiplier}")));
    }
    Ok(-gap / multiplier)
}

pub fn policy_rate_change(p: &PolicyInput) -> Result<PolicyRecommendation> {
    if !(p.i >= 0.0) {
        return Err(Error::domain(format!("nominal rate must be nonnegative, got {}", p.i)));
    }
    let gap = p.u - p.u_star;
    let delta_i = rate_change_for_gap(gap, p.multiplier)?;
    let raw = p.i + delta_i;
    Ok(PolicyRecommendation { gap, delta_i, target_i: raw.max(0.0), zlb_binding: raw < 0.0 })
}
