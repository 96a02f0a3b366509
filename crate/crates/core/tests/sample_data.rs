//! Golden values on the bundled monthly JOLTS sample (2000-12 to 2012-02).
//!
//! Expected numbers were computed independently with numpy (and mpmath for
//! the general-formula comparison) from the same CSV.

use std::path::{Path, PathBuf};

use ustar::beveridge::{fit_beveridge, hyperbola_constant, log_ols, min_segment_length, DEFAULT_TRIM};
use ustar::efficiency::{analyze, episodes, summarize, MarketState};
use ustar::ingest::{parse_csv, read_canonical, write_canonical, Normalization, SourceSpec, UnitHint};
use ustar::models::{compare_formulas, Ms16Params};
use ustar::series::{align, Frequency, PairedSeries, Period, ValueKind};

fn sample_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/samples/jolts_beveridge_2000_2012.csv")
}

fn sample() -> PairedSeries {
    let column = |name: &str| SourceSpec {
        path: sample_path(),
        series_id: name.into(),
        frequency: Frequency::Monthly,
        value_kind: ValueKind::Rate,
        date_column: "date".into(),
        value_column: name.into(),
        unit: UnitHint::Auto,
    };
    let u = parse_csv(&column("urate")).unwrap();
    let v = parse_csv(&column("vrate")).unwrap();
    assert_eq!(u.normalization, Normalization::Percent);
    assert_eq!(v.normalization, Normalization::Percent);
    align(&u.series, &v.series).unwrap().pairs
}

fn m(y: i32, k: u8) -> Period {
    Period::month(y, k)
}

fn close(got: f64, want: f64, tol: f64) {
    assert!((got - want).abs() <= tol, "got {got}, want {want} ± {tol}");
}

#[test]
fn loads_all_months() {
    let s = sample();
    assert_eq!(s.len(), 135);
    assert_eq!(s.first_period(), m(2000, 12));
    assert_eq!(s.last_period(), m(2012, 2));
}

#[test]
fn efficiency_summary() {
    let s = sample();
    let points = analyze(&s, 0.0).unwrap();
    let sum = summarize(&points, s.span()).unwrap();

    close(sum.u_star.mean, 0.041_765_980_712_848_98, 1e-15);
    assert_eq!(sum.u_star.min.period, m(2006, 7));
    close(sum.u_star.min.value, 0.037_148_351_242_013_42, 1e-15);
    assert_eq!(sum.u_star.max.period, m(2010, 11));
    close(sum.u_star.max.value, 0.051_720_402_163_943_004, 1e-15);

    close(sum.theta.mean, 0.494_415_435_611_026_13, 1e-14);
    assert_eq!(sum.theta.min.period, m(2009, 10));
    close(sum.theta.min.value, 0.165_137_614_678_899_1, 1e-15);
    assert_eq!(sum.theta.max.period, m(2000, 12));
    close(sum.theta.max.value, 1.052_631_578_947_368_4, 1e-15);

    close(sum.gap.mean, 0.023_974_760_027_891_76, 1e-15);
    assert_eq!(sum.gap.min.period, m(2000, 12));
    close(sum.gap.min.value, -0.000_987_177_379_235_856_8, 1e-15);
    assert_eq!(sum.gap.max.period, m(2009, 10));
    close(sum.gap.max.value, 0.064_705_530_819_299_8, 1e-15);
}

#[test]
fn episodes_of_the_sample() {
    let s = sample();
    let eps = episodes(&analyze(&s, 0.0).unwrap());
    let got: Vec<(MarketState, Period, Period)> = eps.iter().map(|e| (e.state, e.range.start, e.range.end)).collect();
    assert_eq!(
        got,
        vec![
            (MarketState::Tight, m(2000, 12), m(2000, 12)),
            (MarketState::Efficient, m(2001, 1), m(2001, 1)),
            (MarketState::Slack, m(2001, 2), m(2012, 2)),
        ]
    );
    assert_eq!(eps[2].extremum.0, m(2009, 10));
}

#[test]
fn full_sample_log_regression() {
    let s = sample();
    let seg = log_ols(&s, s.span()).unwrap();
    close(seg.elasticity, -0.515_168_080_128_756_5, 1e-12);
    close(seg.intercept, -5.014_487_008_184_211, 1e-11);
    close(seg.ssr, 1.047_876_143_628_108_5, 1e-12);

    let h = hyperbola_constant(&s, s.span()).unwrap();
    close(h.a, 0.001_730_473_319_098_765_6, 1e-16);
    close(h.dispersion, 0.176_086_565_035_037_42, 1e-13);
}

#[test]
fn break_selection() {
    let s = sample();
    let min_seg = min_segment_length(s.len(), DEFAULT_TRIM);
    assert_eq!(min_seg, 14);
    let fit = fit_beveridge(&s, 5, min_seg).unwrap();

    // independent O(n²) table + recursion in numpy
    let ssr = [
        1.047_876_143_628_108,
        0.347_904_323_156_208_45,
        0.290_821_221_966_530_76,
        0.263_869_243_199_803_1,
        0.255_798_993_440_245_8,
        0.249_045_322_864_032_1,
    ];
    let bic = [
        -646.088_217_159_567_3,
        -780.222_470_210_171_2,
        -789.701_182_206_378_8,
        -788.114_787_101_131_8,
        -777.592_297_038_152_9,
        -766.488_675_094_540_4,
    ];
    for k in 0..=5 {
        close(fit.ssr_path[k], ssr[k], 1e-10);
        close(fit.bic_path[k], bic[k], 1e-8);
    }
    assert_eq!(fit.num_breaks, 2);
    assert_eq!(fit.break_dates, vec![m(2004, 7), m(2010, 1)]);
    let slopes: Vec<f64> = fit.segments.iter().map(|g| g.elasticity).collect();
    close(slopes[0], -0.914_263_227_172_615_1, 1e-10);
    close(slopes[1], -0.716_934_203_627_823_9, 1e-10);
    close(slopes[2], -1.204_214_318_353_140_2, 1e-10);
}

#[test]
fn general_formula_stays_close_to_square_root() {
    // mpmath, 30 digits: mean |Δ| = 0.0015733584776793, max |Δ| = 0.0024978047373556
    let s = sample();
    let c = compare_formulas(&s, &Ms16Params::new(0.9, 0.26, 0.92).unwrap()).unwrap();
    close(c.mean_abs, 0.001_573_358_477_679_33, 1e-13);
    close(c.max_abs, 0.002_497_804_737_355_557, 1e-13);

    let exact = compare_formulas(&s, &Ms16Params::square_root()).unwrap();
    assert!(exact.rows.iter().all(|r| r.diff == 0.0));
}

#[test]
fn canonical_round_trip() {
    let s = sample();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sample.csv");
    let mut buf = Vec::new();
    write_canonical(&s, &mut buf).unwrap();
    std::fs::write(&path, &buf).unwrap();
    let back = read_canonical(&path).unwrap();
    // one decimal in percent fits in six decimals of a fraction, up to the
    // rounding of the division by 100
    assert_eq!(back.len(), s.len());
    for (a, b) in back.observations().iter().zip(s.observations()) {
        assert_eq!(a.period, b.period);
        assert!((a.u - b.u).abs() < 1e-15 && (a.v - b.v).abs() < 1e-15, "{a:?} vs {b:?}");
    }
}
