use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sqp_core::quantile::{empirical_quantile, order_statistic_rank, weighted_quantile};

/// Smallest sample value whose cumulative normalized weight reaches alpha,
/// scanning candidate thresholds one by one.
fn brute_force_weighted(sample: &[f64], alpha: f64, p: f64) -> Option<f64> {
    let w = |x: f64| if p == 0.0 { 1.0 } else { x.abs().powf(p) };
    let total: f64 = sample.iter().map(|&x| w(x)).sum();
    if total <= 0.0 {
        return None;
    }
    let mut candidates = sample.to_vec();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    for c in &candidates {
        let mass: f64 = sample.iter().filter(|&&x| x <= *c).map(|&x| w(x)).sum();
        if mass / total >= alpha {
            return Some(*c);
        }
    }
    candidates.last().copied()
}

fn sort_and_index(sample: &[f64], alpha: f64) -> f64 {
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    let k = (1..=n).find(|&k| k as f64 / n as f64 >= alpha).unwrap();
    s[k - 1]
}

#[test]
fn weighted_quantile_matches_brute_force_on_ten_thousand_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_101);
    let mut mismatches = 0;
    for i in 0..10_000 {
        let n = rng.random_range(1..=12);
        // Small integer grid so ties are frequent.
        let sample: Vec<f64> = (0..n).map(|_| rng.random_range(-5..=10) as f64 * 0.5).collect();
        let alpha = rng.random_range(1..100) as f64 / 100.0;
        let p = [0.0, 0.5, 1.0, 2.0, 3.0][i % 5];
        let got = weighted_quantile(&sample, alpha, p).ok();
        if got != brute_force_weighted(&sample, alpha, p) {
            mismatches += 1;
        }
    }
    assert_eq!(mismatches, 0);
}

#[test]
fn empirical_quantile_matches_sort_and_index() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let n = rng.random_range(1..=300);
        let sample: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        let alpha = rng.random_range(1..1000) as f64 / 1000.0;
        assert_eq!(empirical_quantile(&sample, alpha).unwrap(), sort_and_index(&sample, alpha));
    }
}

#[test]
fn not_below_linear_interpolation() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let n = rng.random_range(2..=100);
        let mut s: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let alpha = rng.random_range(1..100) as f64 / 100.0;
        let q = empirical_quantile(&s, alpha).unwrap();
        s.sort_by(f64::total_cmp);
        // Hazen-free "type 4" interpolation: F(x_(k)) = k / n.
        let h = alpha * n as f64;
        let interp = if h <= 1.0 {
            s[0]
        } else {
            let k = h.floor() as usize;
            let frac = h - k as f64;
            if k >= n { s[n - 1] } else { s[k - 1] + frac * (s[k] - s[k - 1]) }
        };
        assert!(q >= interp - 1e-15);
    }
}

proptest! {
    #[test]
    fn value_is_a_sample_member(
        sample in prop::collection::vec(-1e3f64..1e3, 1..200),
        alpha in 0.001f64..0.999,
        p in 0.0f64..4.0,
    ) {
        if let Ok(q) = weighted_quantile(&sample, alpha, p) {
            prop_assert!(sample.contains(&q));
        }
    }

    #[test]
    fn monotone_in_alpha(
        sample in prop::collection::vec(-1.0f64..1.0, 1..200),
        a in 0.001f64..0.999,
        b in 0.001f64..0.999,
        p in 0.0f64..3.0,
    ) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if let (Ok(ql), Ok(qh)) = (weighted_quantile(&sample, lo, p), weighted_quantile(&sample, hi, p)) {
            prop_assert!(ql <= qh);
        }
    }

    #[test]
    fn empirical_translation_and_scale_equivariance(
        sample in prop::collection::vec(-1.0f64..1.0, 1..200),
        alpha in 0.001f64..0.999,
        shift in -10.0f64..10.0,
        scale in 0.01f64..100.0,
    ) {
        let q = empirical_quantile(&sample, alpha).unwrap();
        let shifted: Vec<f64> = sample.iter().map(|x| x + shift).collect();
        prop_assert_eq!(empirical_quantile(&shifted, alpha).unwrap(), q + shift);
        let scaled: Vec<f64> = sample.iter().map(|x| x * scale).collect();
        prop_assert_eq!(empirical_quantile(&scaled, alpha).unwrap(), q * scale);
    }

    #[test]
    fn weighted_scale_equivariance(
        sample in prop::collection::vec(0.001f64..1.0, 1..100),
        alpha in 0.01f64..0.99,
        p in 0.5f64..2.0,
    ) {
        // Scaling by a power of two is exact, so weights scale exactly too.
        let q = weighted_quantile(&sample, alpha, p).unwrap();
        let scaled: Vec<f64> = sample.iter().map(|x| x * 4.0).collect();
        prop_assert_eq!(weighted_quantile(&scaled, alpha, p).unwrap(), 4.0 * q);
    }

    #[test]
    fn p_zero_is_empirical(
        sample in prop::collection::vec(-1.0f64..1.0, 1..200),
        alpha in 0.001f64..0.999,
    ) {
        prop_assert_eq!(weighted_quantile(&sample, alpha, 0.0), empirical_quantile(&sample, alpha));
    }

    #[test]
    fn rank_is_minimal(n in 1usize..5000, alpha in 0.0001f64..0.9999) {
        let k = order_statistic_rank(n, alpha);
        prop_assert!(k as f64 / n as f64 >= alpha || k == n);
        prop_assert!(k == 1 || ((k - 1) as f64 / n as f64) < alpha);
    }
}
