//! One function per subcommand. Each returns the text printed on stdout.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde_json::{json, Value};
use ustar::beveridge::{fit_beveridge, min_segment_length, BeveridgeFit};
use ustar::efficiency::{analyze, classify, efficient_rate, episodes, summarize, tightness, EfficiencyPoint, Episode, MarketState};
use ustar::ingest::{build_dataset, read_canonical, write_canonical, DatasetManifest, Era};
use ustar::models::{compare_formulas, half_life, policy_rate_change, simulate_ode, steady_state_u, unemployment_path, FlowParams, PolicyInput};
use ustar::series::{PairedSeries, SummaryStats};

use crate::config::{Format, RunConfig};
use crate::output::{fixed, fmt_fixed, pct, pp, Sink, Table};
use crate::CliError;

fn dataset_name(era: Era) -> String {
    format!("dataset_{era}.csv")
}

fn text(s: impl Into<String>) -> Value {
    Value::String(s.into())
}

pub fn build(cfg: &RunConfig) -> Result<String, CliError> {
    let manifest = DatasetManifest::from_path(&cfg.manifest)?;
    let dataset = build_dataset(&manifest, cfg.era)?;
    let mut sink = Sink::new(&cfg.out, cfg.format)?;

    let mut csv = Vec::new();
    write_canonical(&dataset.pairs, &mut csv).map_err(CliError::output)?;
    let data_path = sink.write_bytes(&dataset_name(cfg.era), &csv)?;
    sink.write_json(&format!("build_report_{}.json", cfg.era), &dataset.report)?;
    sink.index(vec![(data_path, uv_figure(cfg.era), &["period", "u", "v"])])?;

    let r = &dataset.report;
    let mut out = String::new();
    writeln!(out, "built {} dataset: {} observations, {}", cfg.era, r.observations, r.range).unwrap();
    for s in &r.sources {
        writeln!(out, "  {:<18} {} rows, {} skipped, {:?}", s.role.name(), s.rows, s.skipped, s.normalization).unwrap();
    }
    for (what, list) in [
        ("missing periods", r.missing_periods.len()),
        ("partial quarters", r.partial_quarters.len()),
        ("dropped nonpositive", r.dropped_nonpositive.len()),
        ("implausible vacancy rates", r.implausible_vacancy_rates.len()),
    ] {
        if list > 0 {
            writeln!(out, "  warning: {list} {what} (see build report)").unwrap();
        }
    }
    for p in sink.written() {
        writeln!(out, "wrote {}", p.display()).unwrap();
    }
    Ok(out)
}

fn load_dataset(cfg: &RunConfig) -> Result<PairedSeries, CliError> {
    let path = cfg.out.join(dataset_name(cfg.era));
    if !path.is_file() {
        return Err(CliError::Data(format!(
            "no {} dataset at {}; run `ustar build --era {}` first",
            cfg.era,
            path.display(),
            cfg.era
        )));
    }
    Ok(read_canonical(&path)?)
}

fn uv_figure(era: Era) -> &'static str {
    match era {
        Era::Postwar => "unemployment and vacancy rates, 1951-2019 (regular and log scale)",
        Era::Pandemic => "unemployment and vacancy rates, 2020-2022; pandemic Beveridge curve",
        Era::Historical => "unemployment and vacancy rates, 1930-1950 (regular and log scale)",
        Era::Full => "unemployment and vacancy rates, 1930-2022",
    }
}

fn state_figure(era: Era) -> &'static str {
    match era {
        Era::Postwar => "labor-market state and efficient unemployment, 1951-2019",
        Era::Pandemic => "labor-market state and efficient unemployment, 2020-2022",
        Era::Historical => "labor-market state and efficient unemployment, 1930-1950",
        Era::Full => "state of the labor market, 1930-2022 (u and v, tightness, efficient rate)",
    }
}

pub fn analysis_table(points: &[EfficiencyPoint]) -> Table {
    let mut t = Table::new(vec!["period", "u", "v", "u_star", "theta", "gap", "state"]);
    for p in points {
        t.push(vec![
            text(p.period.iso()),
            fixed(p.u, 4),
            fixed(p.v, 4),
            fixed(p.u_star, 4),
            fixed(p.theta, 4),
            fixed(p.gap, 4),
            text(p.state.as_str()),
        ]);
    }
    t
}

pub fn episode_table(eps: &[Episode]) -> Table {
    let mut t = Table::new(vec!["state", "start", "end", "periods", "extremum_period", "extremum_theta"]);
    for e in eps {
        t.push(vec![
            text(e.state.as_str()),
            text(e.range.start.iso()),
            text(e.range.end.iso()),
            Value::from(e.len()),
            text(e.extremum.0.iso()),
            fixed(e.extremum.1, 4),
        ]);
    }
    t
}

fn stat_line(name: &str, s: &SummaryStats, f: fn(f64) -> String) -> String {
    format!(
        "{name:<10} mean {}  min {} ({})  max {} ({})\n",
        f(s.mean),
        f(s.min.value),
        s.min.period,
        f(s.max.value),
        s.max.period
    )
}

pub fn analyze_cmd(cfg: &RunConfig) -> Result<String, CliError> {
    let pairs = load_dataset(cfg)?;
    let points = analyze(&pairs, cfg.tol)?;
    let eps = episodes(&points);
    let summary = summarize(&points, pairs.span())?;

    let mut sink = Sink::new(&cfg.out, cfg.format)?;
    let table = sink.write_table(&format!("analysis_{}", cfg.era), &analysis_table(&points))?;
    let episodes_file = sink.write_table(&format!("episodes_{}", cfg.era), &episode_table(&eps))?;

    let ratio = |x: f64| fmt_fixed(x, 2);
    let mut s = String::new();
    writeln!(s, "era        {} {}, {} observations", cfg.era, pairs.span(), pairs.len()).unwrap();
    s += &stat_line("u", &summary.u, pct);
    s += &stat_line("v", &summary.v, pct);
    s += &stat_line("u*", &summary.u_star, pct);
    s += &stat_line("tightness", &summary.theta, ratio);
    s += &stat_line("gap", &summary.gap, pp);
    let count = |st: MarketState| eps.iter().filter(|e| e.state == st).count();
    writeln!(
        s,
        "episodes   {} tight, {} slack, {} efficient",
        count(MarketState::Tight),
        count(MarketState::Slack),
        count(MarketState::Efficient)
    )
    .unwrap();
    for e in eps.iter().filter(|e| e.state != MarketState::Slack) {
        writeln!(s, "  {:<9} {} (θ {} at {})", e.state.as_str(), e.range, ratio(e.extremum.1), e.extremum.0).unwrap();
    }
    let summary_file = sink.write_bytes(&format!("summary_{}.txt", cfg.era), s.as_bytes())?;
    if cfg.format == Format::Json {
        sink.write_json(&format!("summary_{}.json", cfg.era), &summary_json(&summary, &eps))?;
    }

    sink.index(vec![
        (table, state_figure(cfg.era), &["period", "u", "v", "u_star", "theta", "gap", "state"]),
        (episodes_file, "tight and slack episodes (shading)", &["state", "start", "end"]),
        (summary_file, "summary statistics quoted in the text", &[]),
    ])?;
    Ok(s)
}

fn summary_json(summary: &ustar::efficiency::EfficiencySummary, eps: &[Episode]) -> Value {
    let stat = |s: &SummaryStats| {
        json!({
            "mean": fixed(s.mean, 4),
            "min": { "value": fixed(s.min.value, 4), "period": s.min.period.iso() },
            "max": { "value": fixed(s.max.value, 4), "period": s.max.period.iso() },
            "count": s.count,
        })
    };
    json!({
        "u": stat(&summary.u),
        "v": stat(&summary.v),
        "u_star": stat(&summary.u_star),
        "theta": stat(&summary.theta),
        "gap": stat(&summary.gap),
        "episodes": episode_table(eps).to_json(),
    })
}

fn fit_json(fit: &BeveridgeFit) -> Value {
    json!({
        "num_breaks": fit.num_breaks,
        "break_dates": fit.break_dates.iter().map(|p| p.iso()).collect::<Vec<_>>(),
        "min_seg": fit.min_seg,
        "selection_score": fixed(fit.selection_score, 4),
        "bic_path": fit.bic_path.iter().map(|b| fixed(*b, 4)).collect::<Vec<_>>(),
        "ssr_path": fit.ssr_path.iter().map(|b| fixed(*b, 6)).collect::<Vec<_>>(),
        "segments": fit.segments.iter().map(|s| json!({
            "start": s.range.start.iso(),
            "end": s.range.end.iso(),
            "n": s.n,
            "elasticity": fixed(s.elasticity, 4),
            "intercept": fixed(s.intercept, 4),
            "ssr": fixed(s.ssr, 6),
        })).collect::<Vec<_>>(),
    })
}

pub fn breaks(cfg: &RunConfig) -> Result<String, CliError> {
    let pairs = load_dataset(cfg)?;
    let min_seg = min_segment_length(pairs.len(), cfg.min_seg_fraction);
    let fit = fit_beveridge(&pairs, cfg.max_breaks, min_seg)?;

    let mut sink = Sink::new(&cfg.out, cfg.format)?;
    let report = sink.write_json(&format!("breaks_{}.json", cfg.era), &fit_json(&fit))?;
    let mut index = vec![(report, "estimated Beveridge curve: breaks and per-segment elasticities", &[][..])];

    let mut s = String::new();
    writeln!(s, "{} breaks selected by BIC (min segment {} periods)", fit.num_breaks, fit.min_seg).unwrap();
    for (k, seg) in fit.segments.iter().enumerate() {
        let mut t = Table::new(vec!["period", "log_u", "log_v", "fitted_log_v"]);
        for o in pairs.window(seg.range) {
            t.push(vec![text(o.period.iso()), fixed(o.u.ln(), 6), fixed(o.v.ln(), 6), fixed(seg.predict_log_v(o.u.ln()), 6)]);
        }
        let path = sink.write_table(&format!("breaks_{}_segment{}", cfg.era, k + 1), &t)?;
        index.push((path, "estimated Beveridge curve: one panel per segment", &["log_u", "log_v", "fitted_log_v"][..]));
        writeln!(s, "  {}  elasticity {}  (n = {})", seg.range, fmt_fixed(seg.elasticity, 2), seg.n).unwrap();
    }
    sink.index(index)?;
    Ok(s)
}

pub fn compare(cfg: &RunConfig) -> Result<String, CliError> {
    let params = cfg.ms16()?;
    let pairs = load_dataset(cfg)?;
    let c = compare_formulas(&pairs, &params)?;

    let mut t = Table::new(vec!["period", "sqrt_uv", "ms16", "diff"]);
    for r in &c.rows {
        t.push(vec![text(r.period.iso()), fixed(r.sqrt_uv, 4), fixed(r.ms16, 4), fixed(r.diff, 4)]);
    }
    let mut sink = Sink::new(&cfg.out, cfg.format)?;
    let path = sink.write_table(&format!("compare_{}", cfg.era), &t)?;
    sink.write_json(
        &format!("compare_{}_summary.json", cfg.era),
        &json!({
            "eps": fixed(params.eps, 4),
            "zeta": fixed(params.zeta, 4),
            "kappa": fixed(params.kappa, 4),
            "mean_abs_diff": fixed(c.mean_abs, 6),
            "max_abs_diff": fixed(c.max_abs, 6),
        }),
    )?;
    sink.index(vec![(path, "square-root formula compared with the general efficient-rate formula", &["sqrt_uv", "ms16"])])?;
    Ok(format!(
        "general formula (eps {}, zeta {}, kappa {}) vs sqrt(uv): mean |diff| {}pp, max |diff| {}pp\n",
        params.eps,
        params.zeta,
        params.kappa,
        fmt_fixed(100.0 * c.mean_abs, 2),
        fmt_fixed(100.0 * c.max_abs, 2)
    ))
}

pub fn policy(cfg: &RunConfig, u: f64, v: f64, i: f64) -> Result<String, CliError> {
    let multiplier = cfg.multiplier()?;
    let u_star = efficient_rate(u, v)?;
    let theta = tightness(u, v)?;
    let state = classify(u, v, cfg.tol)?;
    let rec = policy_rate_change(&PolicyInput { i, u, u_star, multiplier })?;
    if cfg.format == Format::Json {
        let v = json!({
            "u": fixed(u, 4),
            "v": fixed(v, 4),
            "u_star": fixed(u_star, 4),
            "theta": fixed(theta, 4),
            "state": state.as_str(),
            "gap": fixed(rec.gap, 4),
            "delta_i": fixed(rec.delta_i, 4),
            "target_i": fixed(rec.target_i, 4),
            "zlb_binding": rec.zlb_binding,
        });
        return Ok(serde_json::to_string_pretty(&v).map_err(CliError::output)? + "\n");
    }
    let mut s = String::new();
    writeln!(s, "efficient rate   {}", pct(u_star)).unwrap();
    writeln!(s, "tightness        {} ({})", fmt_fixed(theta, 2), state).unwrap();
    writeln!(s, "unemployment gap {}", pp(rec.gap)).unwrap();
    writeln!(s, "rate change      {}", pp(rec.delta_i)).unwrap();
    writeln!(s, "target rate      {}", pct(rec.target_i)).unwrap();
    writeln!(s, "zero lower bound {}", if rec.zlb_binding { "binding" } else { "not binding" }).unwrap();
    Ok(s)
}

pub struct SimulateArgs {
    pub u0: f64,
    pub lambda: f64,
    pub f: f64,
    pub horizon: f64,
    pub dt: f64,
}

pub fn simulate(cfg: &RunConfig, a: &SimulateArgs) -> Result<String, CliError> {
    let fp = FlowParams::flows(a.lambda, a.f)?;
    let path = simulate_ode(a.u0, &fp, a.dt, a.horizon)?;
    let mut t = Table::new(vec!["t", "u_analytic", "u_numeric"]);
    let mut max_err: f64 = 0.0;
    for (time, u) in &path {
        let exact = unemployment_path(a.u0, &fp, *time)?;
        max_err = max_err.max((exact - u).abs());
        t.push(vec![fixed(*time, 6), fixed(exact, 10), fixed(*u, 10)]);
    }
    let mut sink = Sink::new(&cfg.out, cfg.format)?;
    let file: PathBuf = sink.write_table("simulate", &t)?;
    sink.index(vec![(file, "convergence of unemployment to its steady state", &["t", "u_analytic", "u_numeric"])])?;
    Ok(format!(
        "steady state {}, half-life {} months, max |RK4 - analytic| {}\n",
        pct(steady_state_u(&fp)),
        fmt_fixed(half_life(&fp), 2),
        fmt_fixed(max_err, 12)
    ))
}
