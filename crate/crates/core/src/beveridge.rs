//! Estimating the Beveridge curve.
//!
//! The curve is fitted in logs: `log v = a + b·log u`. The slope `b` is the
//! Beveridge elasticity; `b = −1` is an exact rectangular hyperbola
//! `u·v = A`. Slopes are reported *signed* (negative) everywhere in this
//! module. Formulas downstream, such as [`matching_elasticity`] or
//! [`crate::models::Ms16Params`], take the positive magnitude; use
//! [`Segment::magnitude`] to cross that boundary.
//!
//! Structural breaks are located by exact dynamic programming over a table
//! of per-window residual sums of squares, the least-squares partition used
//! by Bai and Perron. The number of breaks is chosen by BIC.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{DateRange, PairedObservation, PairedSeries, Period};

/// OLS of `y` on `x` with intercept.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub ssr: f64,
    pub n: usize,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 3 {
        return Err(Error::domain(format!("a log-log fit needs at least 3 observations, got {n}")));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::SingularFit);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok(LineFit { slope, intercept, ssr, n })
}

fn logs(obs: &[PairedObservation]) -> (Vec<f64>, Vec<f64>) {
    obs.iter().map(|o| (o.u.ln(), o.v.ln())).unzip()
}

/// One regime of the Beveridge curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub range: DateRange,
    /// Slope of `log v` on `log u`; negative for a downward-sloping curve.
    pub elasticity: f64,
    pub intercept: f64,
    pub ssr: f64,
    pub n: usize,
}

impl Segment {
    /// Positive elasticity magnitude `−elasticity`, the convention used by
    /// the structural formulas.
    pub fn magnitude(&self) -> f64 {
        -self.elasticity
    }

    /// Fitted `log v` at `log u`.
    pub fn predict_log_v(&self, log_u: f64) -> f64 {
        self.intercept + self.elasticity * log_u
    }
}

fn segment_of(obs: &[PairedObservation]) -> Result<Segment> {
    let (x, y) = logs(obs);
    let fit = fit_line(&x, &y)?;
    Ok(Segment {
        range: DateRange { start: obs[0].period, end: obs[obs.len() - 1].period },
        elasticity: fit.slope,
        intercept: fit.intercept,
        ssr: fit.ssr,
        n: fit.n,
    })
}

/// OLS of `log v` on `log u` over the observations inside `range`.
pub fn log_ols(pairs: &PairedSeries, range: DateRange) -> Result<Segment> {
    let w = pairs.window(range);
    if w.is_empty() {
        return Err(Error::EmptyWindow { start: range.start, end: range.end });
    }
    segment_of(w)
}

/// Residual sums of squares of the log-log regression on every window
/// `i..=j` of at least `min_seg` observations.
#[derive(Clone, Debug)]
pub struct SsrTable {
    n: usize,
    min_seg: usize,
    cells: Vec<f64>,
}

impl SsrTable {
    pub fn new(x: &[f64], y: &[f64], min_seg: usize) -> Self {
        let n = x.len();
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![f64::NAN; n];
                // Welford-style running moments keep long windows accurate.
                let (mut mx, mut my, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
                for j in i..n {
                    let k = (j - i + 1) as f64;
                    let dx = x[j] - mx;
                    let dy = y[j] - my;
                    mx += dx / k;
                    my += dy / k;
                    sxx += dx * (x[j] - mx);
                    syy += dy * (y[j] - my);
                    sxy += dx * (y[j] - my);
                    if j + 1 - i >= min_seg {
                        let ssr = if sxx > 0.0 { syy - sxy * sxy / sxx } else { syy };
                        row[j] = ssr.max(0.0);
                    }
                }
                row
            })
            .collect();
        SsrTable { n, min_seg, cells: rows.concat() }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn min_seg(&self) -> usize {
        self.min_seg
    }

    /// SSR of the window `i..=j`. Panics if the window is shorter than `min_seg`.
    pub fn ssr(&self, i: usize, j: usize) -> f64 {
        assert!(j >= i && j + 1 - i >= self.min_seg, "window {i}..={j} below the minimum length");
        self.cells[i * self.n + j]
    }
}

/// Optimal placement of a fixed number of breaks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    /// Index of the first observation of each new segment.
    pub breaks: Vec<usize>,
    pub ssr: f64,
}

/// Output of [`detect_breaks`]: the SSR-minimising partition for each
/// number of breaks `0..=max_breaks`.
#[derive(Clone, Debug)]
pub struct BreakSearch {
    pairs: PairedSeries,
    min_seg: usize,
    partitions: Vec<Partition>,
}

impl BreakSearch {
    pub fn pairs(&self) -> &PairedSeries {
        &self.pairs
    }

    pub fn min_seg(&self) -> usize {
        self.min_seg
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn max_breaks(&self) -> usize {
        self.partitions.len() - 1
    }

    pub fn partition(&self, k: usize) -> Option<&Partition> {
        self.partitions.get(k)
    }

    /// Break dates of the `k`-break partition, labelled by the first period
    /// of each new segment.
    pub fn break_dates(&self, k: usize) -> Option<Vec<Period>> {
        let obs = self.pairs.observations();
        self.partitions.get(k).map(|p| p.breaks.iter().map(|&b| obs[b].period).collect())
    }

    /// Per-segment fits for the `k`-break partition.
    pub fn segments(&self, k: usize) -> Result<Vec<Segment>> {
        let part = self
            .partitions
            .get(k)
            .ok_or_else(|| Error::domain(format!("no partition with {k} breaks")))?;
        let obs = self.pairs.observations();
        let mut bounds = vec![0];
        bounds.extend_from_slice(&part.breaks);
        bounds.push(obs.len());
        bounds.windows(2).map(|w| segment_of(&obs[w[0]..w[1]])).collect()
    }
}

/// Smallest segment length allowed for a trimming fraction of the sample.
pub fn min_segment_length(n: usize, fraction: f64) -> usize {
    ((fraction * n as f64).ceil() as usize).max(3)
}

/// Default trimming: 10% of the sample.
pub const DEFAULT_TRIM: f64 = 0.10;

/// For every `k` in `0..=max_breaks`, the globally SSR-minimising placement
/// of `k` breaks, each segment at least `min_seg` observations long.
pub fn detect_breaks(pairs: &PairedSeries, max_breaks: usize, min_seg: usize) -> Result<BreakSearch> {
    let n = pairs.len();
    if min_seg < 3 {
        return Err(Error::domain(format!("minimum segment length must be at least 3, got {min_seg}")));
    }
    let segments = max_breaks + 1;
    if n < segments * min_seg {
        return Err(Error::InfeasiblePartition { n, segments, min_seg });
    }
    let (x, y) = logs(pairs.observations());
    let table = SsrTable::new(&x, &y, min_seg);
    let partitions = optimal_partitions(&table, max_breaks);
    Ok(BreakSearch { pairs: pairs.clone(), min_seg, partitions })
}

/// Optimal-partition recursion: `best[m][j]` is the smallest total SSR of
/// splitting `0..=j` into `m + 1` segments.
pub fn optimal_partitions(table: &SsrTable, max_breaks: usize) -> Vec<Partition> {
    let n = table.len();
    let h = table.min_seg();
    let mut best = vec![vec![f64::INFINITY; n]; max_breaks + 1];
    let mut start = vec![vec![usize::MAX; n]; max_breaks + 1];

    for j in (h - 1)..n {
        best[0][j] = table.ssr(0, j);
        start[0][j] = 0;
    }
    for m in 1..=max_breaks {
        for j in ((m + 1) * h - 1)..n {
            let mut bv = f64::INFINITY;
            let mut bt = usize::MAX;
            // last segment t..=j; the first m segments need t >= m*h
            for t in (m * h)..=(j + 1 - h) {
                let cand = best[m - 1][t - 1] + table.ssr(t, j);
                if cand < bv {
                    bv = cand;
                    bt = t;
                }
            }
            best[m][j] = bv;
            start[m][j] = bt;
        }
    }

    (0..=max_breaks)
        .map(|k| {
            let mut breaks = Vec::with_capacity(k);
            let mut j = n - 1;
            for m in (1..=k).rev() {
                let t = start[m][j];
                breaks.push(t);
                j = t - 1;
            }
            breaks.reverse();
            Partition { breaks, ssr: best[k][n - 1] }
        })
        .collect()
}

/// Number of estimated parameters with `k` breaks: an intercept and a slope
/// per segment plus the break dates.
pub fn parameter_count(k: usize) -> usize {
    2 * (k + 1) + k
}

/// `n·ln(SSR/n) + p_k·ln n`.
///
/// SSR is floored at a tiny fraction of the total sum of squares so that
/// numerically exact fits compare as equal instead of racing toward `−∞`.
pub fn bic(n: usize, ssr: f64, k: usize, floor: f64) -> f64 {
    let nf = n as f64;
    nf * (ssr.max(floor) / nf).ln() + parameter_count(k) as f64 * nf.ln()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeveridgeFit {
    pub segments: Vec<Segment>,
    pub break_dates: Vec<Period>,
    pub num_breaks: usize,
    /// BIC of the selected partition.
    pub selection_score: f64,
    /// BIC for every candidate `k`, index = number of breaks.
    pub bic_path: Vec<f64>,
    pub ssr_path: Vec<f64>,
    pub min_seg: usize,
}

/// Picks the number of breaks with the lowest BIC (fewest breaks on ties).
pub fn select_num_breaks(search: &BreakSearch) -> Result<BeveridgeFit> {
    let obs = search.pairs().observations();
    let n = obs.len();
    let ys: Vec<f64> = obs.iter().map(|o| o.v.ln()).collect();
    let my = ys.iter().sum::<f64>() / n as f64;
    let tss: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let floor = (tss * 1e-14).max(f64::MIN_POSITIVE);

    let bic_path: Vec<f64> =
        search.partitions().iter().enumerate().map(|(k, p)| bic(n, p.ssr, k, floor)).collect();
    let mut chosen = 0;
    for (k, b) in bic_path.iter().enumerate() {
        if *b < bic_path[chosen] {
            chosen = k;
        }
    }
    Ok(BeveridgeFit {
        segments: search.segments(chosen)?,
        break_dates: search.break_dates(chosen).unwrap_or_default(),
        num_breaks: chosen,
        selection_score: bic_path[chosen],
        ssr_path: search.partitions().iter().map(|p| p.ssr).collect(),
        bic_path,
        min_seg: search.min_seg(),
    })
}

/// `detect_breaks` followed by `select_num_breaks`.
pub fn fit_beveridge(pairs: &PairedSeries, max_breaks: usize, min_seg: usize) -> Result<BeveridgeFit> {
    select_num_breaks(&detect_breaks(pairs, max_breaks, min_seg)?)
}

/// Location `A` of the hyperbola `u·v = A` over a window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolaConstant {
    /// Geometric mean of `u·v`.
    pub a: f64,
    /// Population standard deviation of `ln(u·v)`.
    pub dispersion: f64,
}

impl HyperbolaConstant {
    /// `√A`, the efficient rate implied by the fitted hyperbola.
    pub fn efficient_rate(&self) -> f64 {
        self.a.sqrt()
    }
}

pub fn hyperbola_constant(pairs: &PairedSeries, range: DateRange) -> Result<HyperbolaConstant> {
    let w = pairs.window(range);
    if w.is_empty() {
        return Err(Error::EmptyWindow { start: range.start, end: range.end });
    }
    let l: Vec<f64> = w.iter().map(|o| o.u.ln() + o.v.ln()).collect();
    let n = l.len() as f64;
    let mean = l.iter().sum::<f64>() / n;
    let var = l.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    Ok(HyperbolaConstant { a: mean.exp(), dispersion: var.sqrt() })
}

/// Matching elasticity implied by a Beveridge elasticity of magnitude `eps`
/// at unemployment rate `u`: `(ε − u/(1−u)) / (1 + ε)`.
pub fn matching_elasticity(eps: f64, u: f64) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("Beveridge elasticity magnitude must be positive, got {eps}")));
    }
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain(format!("unemployment rate must lie in (0, 1), got {u}")));
    }
    Ok((eps - u / (1.0 - u)) / (1.0 + eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Frequency;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn q0() -> Period {
        Period::quarter(1951, 1)
    }

    fn series(points: &[(f64, f64)]) -> PairedSeries {
        PairedSeries::from_triples(
            Frequency::Quarterly,
            points.iter().enumerate().map(|(i, (u, v))| (q0().offset(i as i64), *u, *v)),
        )
        .unwrap()
    }

    fn grid_u(n: usize) -> Vec<f64> {
        (0..n).map(|i| 0.03 + 0.07 * ((i * 7919) % n) as f64 / n as f64).collect()
    }

    #[test]
    fn exact_hyperbola_has_unit_elasticity() {
        let pts: Vec<_> = grid_u(20).into_iter().map(|u| (u, 0.0016 / u)).collect();
        let s = series(&pts);
        let seg = log_ols(&s, s.span()).unwrap();
        assert!((seg.elasticity + 1.0).abs() < 1e-12);
        assert!(seg.ssr < 1e-25);
        assert!((seg.magnitude() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn power_law_slope_is_recovered() {
        let pts: Vec<_> = grid_u(30).into_iter().map(|u| (u, 0.002 * u.powf(-0.85))).collect();
        let s = series(&pts);
        assert!((log_ols(&s, s.span()).unwrap().elasticity + 0.85).abs() < 1e-12);
    }

    #[test]
    fn degenerate_and_short_windows_fail() {
        let s = series(&[(0.05, 0.01), (0.05, 0.02), (0.05, 0.03)]);
        assert!(matches!(log_ols(&s, s.span()), Err(Error::SingularFit)));
        let t = series(&[(0.05, 0.01), (0.06, 0.02)]);
        assert!(matches!(log_ols(&t, t.span()), Err(Error::Domain(_))));
        let far = DateRange::new(Period::quarter(2000, 1), Period::quarter(2000, 4)).unwrap();
        assert!(matches!(log_ols(&s, far), Err(Error::EmptyWindow { .. })));
    }

    fn two_regimes(n: usize, at: usize, noise: f64, seed: u64) -> PairedSeries {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, noise.max(1e-300)).unwrap();
        let pts: Vec<_> = grid_u(n)
            .into_iter()
            .enumerate()
            .map(|(i, u)| {
                let e = if noise > 0.0 { normal.sample(&mut rng) } else { 0.0 };
                let v = if i < at { 0.0016 / u } else { 0.004 * u.powf(-0.5) };
                (u, v * f64::exp(e))
            })
            .collect();
        series(&pts)
    }

    #[test]
    fn noiseless_single_break_is_found_exactly() {
        let s = two_regimes(40, 20, 0.0, 1);
        let search = detect_breaks(&s, 2, 5).unwrap();
        let one = search.partition(1).unwrap();
        assert_eq!(one.breaks, vec![20]);
        assert!(one.ssr < 1e-20);
        let fit = select_num_breaks(&search).unwrap();
        assert_eq!(fit.num_breaks, 1);
        assert_eq!(fit.break_dates, vec![q0().offset(20)]);
        assert!((fit.segments[0].elasticity + 1.0).abs() < 1e-9);
        assert!((fit.segments[1].elasticity + 0.5).abs() < 1e-9);
    }

    #[test]
    fn zero_breaks_equals_full_sample_ols() {
        let s = two_regimes(50, 25, 0.05, 2);
        let search = detect_breaks(&s, 3, 5).unwrap();
        let whole = log_ols(&s, s.span()).unwrap();
        assert!((search.partition(0).unwrap().ssr - whole.ssr).abs() < 1e-12);
        assert_eq!(search.segments(0).unwrap()[0], whole);
    }

    #[test]
    fn infeasible_partitions_are_rejected() {
        let s = two_regimes(20, 10, 0.0, 3);
        assert!(matches!(detect_breaks(&s, 4, 5), Err(Error::InfeasiblePartition { n: 20, segments: 5, min_seg: 5 })));
        assert!(detect_breaks(&s, 3, 5).is_ok());
        assert!(matches!(detect_breaks(&s, 1, 2), Err(Error::Domain(_))));
    }

    /// Independent oracle: direct two-pass OLS on every admissible placement.
    fn brute_force(s: &PairedSeries, k: usize, h: usize) -> (Vec<usize>, f64) {
        let obs = s.observations();
        let n = obs.len();
        let seg_ssr = |a: usize, b: usize| segment_of(&obs[a..b]).unwrap().ssr;
        let mut best = (Vec::new(), f64::INFINITY);
        let mut stack = vec![(Vec::<usize>::new(), 0usize)];
        while let Some((breaks, last)) = stack.pop() {
            if breaks.len() == k {
                if n - last < h {
                    continue;
                }
                let mut b = vec![0];
                b.extend(&breaks);
                b.push(n);
                let total: f64 = b.windows(2).map(|w| seg_ssr(w[0], w[1])).sum();
                if total < best.1 - 1e-12 || (total <= best.1 + 1e-12 && breaks < best.0) {
                    best = (breaks, total);
                }
                continue;
            }
            for t in (last + h)..=n.saturating_sub(h) {
                let mut nb = breaks.clone();
                nb.push(t);
                stack.push((nb, t));
            }
        }
        best
    }

    #[test]
    fn dp_matches_exhaustive_search_with_two_planted_breaks() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let normal = Normal::new(0.0, 0.03).unwrap();
        let pts: Vec<_> = grid_u(60)
            .into_iter()
            .enumerate()
            .map(|(i, u)| {
                let v = match i {
                    0..=19 => 0.0016 / u,
                    20..=39 => 0.0030 * u.powf(-0.7),
                    _ => 0.0012 * u.powf(-1.1),
                };
                (u, v * f64::exp(normal.sample(&mut rng)))
            })
            .collect();
        let s = series(&pts);
        let search = detect_breaks(&s, 3, 6).unwrap();
        for k in 0..=3 {
            let (placement, ssr) = brute_force(&s, k, 6);
            let dp = search.partition(k).unwrap();
            assert_eq!(dp.breaks, placement, "k = {k}");
            assert!((dp.ssr - ssr).abs() < 1e-10 * ssr.max(1.0), "k = {k}");
        }
        assert_eq!(search.partition(2).unwrap().breaks, vec![20, 40]);
    }

    #[test]
    fn small_noise_hyperbola_selects_no_breaks() {
        let mut zero = 0;
        for rep in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + rep);
            let normal = Normal::new(0.0, 0.02).unwrap();
            let pts: Vec<_> = (0..80)
                .map(|_| {
                    let u: f64 = rng.random_range(0.03..0.10);
                    (u, 0.0016 / u * f64::exp(normal.sample(&mut rng)))
                })
                .collect();
            let fit = fit_beveridge(&series(&pts), 3, 8).unwrap();
            if fit.num_breaks == 0 {
                zero += 1;
            }
        }
        assert!(zero >= 95, "k = 0 chosen in {zero} of 100 replications");
    }

    #[test]
    fn bic_counts_parameters() {
        assert_eq!(parameter_count(0), 2);
        assert_eq!(parameter_count(5), 17);
        assert!(bic(100, 0.0, 1, 1e-12) < bic(100, 0.0, 2, 1e-12));
    }

    #[test]
    fn hyperbola_constant_examples() {
        let pts: Vec<_> = grid_u(12).into_iter().map(|u| (u, 0.0016 / u)).collect();
        let s = series(&pts);
        let h = hyperbola_constant(&s, s.span()).unwrap();
        assert!((h.a - 0.0016).abs() < 1e-15);
        assert!(h.dispersion < 1e-12);
        let one = series(&[(0.04, 0.04)]);
        assert!((hyperbola_constant(&one, one.span()).unwrap().a - 0.0016).abs() < 1e-16);
        assert!((hyperbola_constant(&one, one.span()).unwrap().efficient_rate() - 0.04).abs() < 1e-16);
    }

    #[test]
    fn matching_elasticity_examples() {
        // (1 - 0.05/0.95) / 2 = 0.47368...
        assert!((matching_elasticity(1.0, 0.05).unwrap() - 0.473_684_210_526_315_8).abs() < 1e-15);
        assert!((matching_elasticity(1.0, 1e-12).unwrap() - 0.5).abs() < 1e-11);
        assert!(matching_elasticity(1.0, 0.5).unwrap().abs() < 1e-16);
        assert!(matching_elasticity(1.0, 1.0).is_err());
        assert!(matching_elasticity(0.0, 0.05).is_err());
    }

    /// Whether some segment of the partition is long enough to take another break.
    fn splittable(breaks: &[usize], n: usize, min_seg: usize) -> bool {
        let mut bounds = vec![0];
        bounds.extend_from_slice(breaks);
        bounds.push(n);
        bounds.windows(2).any(|w| w[1] - w[0] >= 2 * min_seg)
    }

    #[test]
    fn trimming_can_make_an_extra_break_costly() {
        // two exact regimes of six points; three segments of four are forced
        // to straddle the regime change, so SSR rises from k = 1 to k = 2
        let pts: Vec<(f64, f64)> = (0..12)
            .map(|i| {
                let u = 0.03 + 0.005 * i as f64;
                let a = if i < 6 { 0.0016 } else { 0.0036 };
                (u, a / u)
            })
            .collect();
        let search = detect_breaks(&series(&pts), 2, 4).unwrap();
        assert!(search.partition(1).unwrap().ssr < 1e-12, "{}", search.partition(1).unwrap().ssr);
        assert_eq!(search.partition(1).unwrap().breaks, vec![6]);
        assert_eq!(search.partition(2).unwrap().breaks, vec![4, 8]);
        assert!(search.partition(2).unwrap().ssr > 1e-4);
        assert!(!splittable(&[6], 12, 4));
    }

    proptest! {
        #[test]
        fn ssr_path_is_non_increasing(seed in 0u64..500, n in 12usize..48, min_seg in 3usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<_> = (0..n).map(|_| (rng.random_range(0.02..0.12), rng.random_range(0.01..0.08))).collect();
            let max_breaks = (n / min_seg - 1).min(4);
            let search = detect_breaks(&series(&pts), max_breaks, min_seg).unwrap();
            for (k, w) in search.partitions().windows(2).enumerate() {
                if splittable(&w[0].breaks, n, min_seg) {
                    prop_assert!(w[1].ssr <= w[0].ssr + 1e-12, "k = {}", k);
                }
            }
            // guaranteed by pigeonhole once n ≥ (k+1)(2m−1)+1
            for k in 0..max_breaks {
                if n > (k + 1) * (2 * min_seg - 1) {
                    prop_assert!(search.partition(k + 1).unwrap().ssr <= search.partition(k).unwrap().ssr + 1e-12);
                }
            }
        }

        #[test]
        fn dp_equals_brute_force(seed in 0u64..200, n in 18usize..30) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<_> = (0..n).map(|_| (rng.random_range(0.02..0.12), rng.random_range(0.01..0.08))).collect();
            let s = series(&pts);
            let search = detect_breaks(&s, 2, 4).unwrap();
            for k in 0..=2 {
                let (_, ssr) = brute_force(&s, k, 4);
                prop_assert!((search.partition(k).unwrap().ssr - ssr).abs() < 1e-10);
            }
        }

        #[test]
        fn slope_ignores_rescaling(seed in 0u64..200, a in 0.1f64..10.0, b in 0.1f64..10.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<_> = (0..15).map(|_| (rng.random_range(0.02..0.09), rng.random_range(0.01..0.08))).collect();
            let scaled: Vec<_> = pts.iter().map(|(u, v)| (u * a / 10.0, v * b / 10.0)).collect();
            let s0 = series(&pts);
            let s1 = series(&scaled);
            let e0 = log_ols(&s0, s0.span()).unwrap().elasticity;
            let e1 = log_ols(&s1, s1.span()).unwrap().elasticity;
            prop_assert!((e0 - e1).abs() < 1e-9);
        }

        #[test]
        fn hyperbola_constant_symmetry_and_scaling(seed in 0u64..200, k in 0.2f64..2.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<_> = (0..10).map(|_| (rng.random_range(0.02..0.09), rng.random_range(0.01..0.08))).collect();
            let swapped: Vec<_> = pts.iter().map(|(u, v)| (*v, *u)).collect();
            let scaled: Vec<_> = pts.iter().map(|(u, v)| (u * k, v * k)).collect();
            let a = hyperbola_constant(&series(&pts), series(&pts).span()).unwrap().a;
            let b = hyperbola_constant(&series(&swapped), series(&swapped).span()).unwrap().a;
            let c = hyperbola_constant(&series(&scaled), series(&scaled).span()).unwrap().a;
            prop_assert!((a - b).abs() < 1e-14 * a);
            prop_assert!((c - k * k * a).abs() < 1e-12 * c);
        }

        #[test]
        fn matching_elasticity_bounds(eps in 0.2f64..3.0, u in 0.001f64..0.5) {
            prop_assume!(u / (1.0 - u) < eps);
            let eta = matching_elasticity(eps, u).unwrap();
            prop_assert!(eta > 0.0 && eta < eps / (1.0 + eps));
            let eta2 = matching_elasticity(eps, (u * 1.01).min(0.99)).unwrap();
            prop_assert!(eta2 < eta);
        }
    }
}
