use proptest::prelude::*;
use sqp_core::volatility::{sample_volatility, VolatilityKind};

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #[test]
    fn scale_and_translation(
        x in prop::collection::vec(-1.0f64..1.0, 2..300),
        c in 0.001f64..1000.0,
        shift in -5.0f64..5.0,
    ) {
        for kind in [VolatilityKind::Mad, VolatilityKind::Std] {
            let v = sample_volatility(&x, kind).unwrap();
            prop_assert!(v >= 0.0);
            let scaled: Vec<f64> = x.iter().map(|a| c * a).collect();
            prop_assert!(rel_close(sample_volatility(&scaled, kind).unwrap(), c * v));
            let neg: Vec<f64> = x.iter().map(|a| -a).collect();
            prop_assert!(rel_close(sample_volatility(&neg, kind).unwrap(), v));
            let moved: Vec<f64> = x.iter().map(|a| a + shift).collect();
            prop_assert!((sample_volatility(&moved, kind).unwrap() - v).abs() <= 1e-9);
        }
    }

    #[test]
    fn mad_below_std(x in prop::collection::vec(-1.0f64..1.0, 2..300)) {
        // Cauchy-Schwarz: the mean absolute deviation never exceeds the
        // root-mean-square deviation computed with the same normalization.
        let n = x.len() as f64;
        let mad = sample_volatility(&x, VolatilityKind::Mad).unwrap();
        let std = sample_volatility(&x, VolatilityKind::Std).unwrap();
        prop_assert!(mad <= std * (n / (n - 1.0)).sqrt() * (1.0 + 1e-12) + 1e-300);
    }
}
