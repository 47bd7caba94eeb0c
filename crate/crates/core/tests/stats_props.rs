use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sqp_core::quantile::weighted_quantile;
use sqp_core::stats::{
    acf, correlate_ratio_volatility, fisher_ci, lookforward_ratios, pearson, ratio_volatility_pairs,
    regress_logratio_on_volatility, spearman, AnalysisConfig,
};
use sqp_core::volatility::{annualize, sample_volatility, VolatilityKind};

fn normal_path(seed: u64, n: usize, scale: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect()
}

#[test]
fn affine_pairs_are_perfectly_anticorrelated() {
    let v: Vec<f64> = (0..40).map(|i| 0.1 + 0.01 * i as f64).collect();
    let logr: Vec<f64> = v.iter().map(|x| 3.0 - 5.0 * x).collect();
    assert!((pearson(&logr, &v).unwrap() + 1.0).abs() < 1e-12);
    let fit = regress_logratio_on_volatility(&v, &logr).unwrap();
    assert!((fit.slope + 5.0).abs() < 1e-10);
    assert!((fit.intercept - 3.0).abs() < 1e-10);
}

#[test]
fn regression_test_size_on_independent_noise() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let sims = 10_000;
    let mut rejections = 0;
    for _ in 0..sims {
        let x: Vec<f64> = (0..60).map(|_| rng.sample(StandardNormal)).collect();
        let y: Vec<f64> = (0..60).map(|_| rng.sample(StandardNormal)).collect();
        if regress_logratio_on_volatility(&x, &y).unwrap().p_value < 0.05 {
            rejections += 1;
        }
    }
    let rate = rejections as f64 / sims as f64;
    assert!((rate - 0.05).abs() < 0.01, "{rate}");
}

#[test]
fn ar1_autocorrelation() {
    let eps = normal_path(5, 10_001, 1.0);
    let mut x = vec![0.0; 10_000];
    for t in 1..10_000 {
        x[t] = 0.5 * x[t - 1] + eps[t];
    }
    let a = acf(&x, 5).unwrap();
    assert!((a.values[0] - 0.5).abs() < 0.05, "{}", a.values[0]);
    assert!((a.values[1] - 0.25).abs() < 0.05);
}

#[test]
fn iid_whiteness() {
    let x = normal_path(6, 5000, 1.0);
    let a = acf(&x, 100).unwrap();
    assert!(a.fraction_inside_band() >= 0.9);
    assert!((a.band - 1.96 / 5000f64.sqrt()).abs() < 1e-15);
}

#[test]
fn report_on_an_iid_path() {
    let losses = normal_path(7, 4000, 0.01);
    let cfg = AnalysisConfig::new(0.0, 0.95, 1, VolatilityKind::Mad).unwrap();
    let r = correlate_ratio_volatility(&losses, &cfg).unwrap();
    assert_eq!(r.pairs.len() + r.excluded, cfg.anchor_count(4000));
    assert!(r.pearson < 0.0);
    assert!(r.rmse >= 0.0);
    assert_eq!(r.bins.len(), 2);
    assert!(r.bins.iter().all(|b| b.total() == r.pairs.len()));
    assert!(r.regression.indicative);
}

#[test]
fn volatility_and_denominator_share_a_window() {
    let losses = normal_path(8, 3000, 0.02);
    for (p, t, kind) in [(0.0, 1, VolatilityKind::Mad), (1.0, 3, VolatilityKind::Std)] {
        let cfg = AnalysisConfig::new(p, 0.99, t, kind).unwrap();
        let (pairs, _) = ratio_volatility_pairs(&losses, &cfg).unwrap();
        let ratios = lookforward_ratios(&losses, &cfg).unwrap();
        for (pair, point) in pairs.iter().zip(ratios.usable()) {
            let w = &losses[pair.past_window(&cfg)];
            assert_eq!(w.len(), cfg.denominator_len);
            assert_eq!(pair.past_window(&cfg).end, pair.anchor);
            assert_eq!(point.denominator, weighted_quantile(w, 0.99, p).unwrap());
            let v = annualize(sample_volatility(w, kind).unwrap(), cfg.denominator_len).unwrap();
            assert_eq!(pair.volatility, v);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn correlation_bounds(
        x in prop::collection::vec(-1e3f64..1e3, 3..100),
        seed in any::<u64>(),
    ) {
        let y = normal_path(seed, x.len(), 1.0);
        if let Ok(r) = pearson(&x, &y) {
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&r));
        }
        if let Ok(r) = spearman(&x, &y) {
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&r));
        }
    }

    #[test]
    fn spearman_monotone_invariance(seed in any::<u64>(), n in 5usize..200) {
        let x = normal_path(seed, n, 1.0);
        let y = normal_path(seed ^ 0xABCD, n, 1.0);
        let base = spearman(&x, &y).unwrap();
        let ex: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        let y3: Vec<f64> = y.iter().map(|v| v * v * v).collect();
        prop_assert!((spearman(&ex, &y3).unwrap() - base).abs() < 1e-12);
    }

    #[test]
    fn fisher_interval_brackets(r in -0.99f64..0.99, n in 4.0f64..1e5, level in 0.5f64..0.999) {
        let (lo, hi) = fisher_ci(r, n, level).unwrap();
        prop_assert!(lo < r && r < hi);
        let (l0, h0) = fisher_ci(0.0, n, level).unwrap();
        prop_assert!((l0 + h0).abs() < 1e-15);
    }

    #[test]
    fn ratio_signs_and_scale_invariance(seed in any::<u64>(), c in 0.01f64..100.0) {
        let losses = normal_path(seed, 1200, 0.01);
        let cfg = AnalysisConfig::new(0.5, 0.95, 1, VolatilityKind::Mad).unwrap();
        let base = lookforward_ratios(&losses, &cfg).unwrap();
        for pt in &base.points {
            if let Some(l) = pt.log_ratio {
                prop_assert_eq!(pt.ratio > 1.0, l > 0.0);
                prop_assert_eq!(pt.underestimated() == Some(true), pt.ratio > 1.0);
                prop_assert_eq!(pt.underestimated() == Some(false), pt.ratio < 1.0);
            }
        }
        let scaled: Vec<f64> = losses.iter().map(|x| c * x).collect();
        let s = lookforward_ratios(&scaled, &cfg).unwrap();
        for (a, b) in base.points.iter().zip(&s.points) {
            prop_assert!((a.ratio - b.ratio).abs() <= 1e-12 * a.ratio.abs().max(1.0));
        }
        let (pa, _) = ratio_volatility_pairs(&losses, &cfg).unwrap();
        let (pb, _) = ratio_volatility_pairs(&scaled, &cfg).unwrap();
        let xa: Vec<f64> = pa.iter().map(|p| p.log_ratio).collect();
        let va: Vec<f64> = pa.iter().map(|p| p.volatility).collect();
        let xb: Vec<f64> = pb.iter().map(|p| p.log_ratio).collect();
        let vb: Vec<f64> = pb.iter().map(|p| p.volatility).collect();
        prop_assert!((pearson(&xa, &va).unwrap() - pearson(&xb, &vb).unwrap()).abs() < 1e-9);
    }
}
