use jcm_core::sampling::{arcsine_l1_distance, sample_skewness};
use jcm_core::{
    build_histogram, sample_series, BlochVector, ModelParams, SampleSeries, TruncationPolicy,
};
use proptest::prelude::*;

#[test]
fn arcsine_density_describes_the_limit_signal() {
    // y = -(1 - cos 2t) / 2 sampled densely, no series involved
    let values: Vec<f64> = (0..200_000)
        .map(|k| -0.5 * (1.0 - (2.0 * 0.0137 * k as f64).cos()))
        .collect();
    let s = SampleSeries {
        delta_t: 0.0137,
        beta: f64::INFINITY,
        values,
    };
    let h = build_histogram(&s, 0.005).unwrap();
    let d = arcsine_l1_distance(&h).unwrap();
    assert!(d < 0.05, "L1 distance {d}");
}

#[test]
fn low_temperature_samples_stay_in_unit_interval() {
    let p = ModelParams::resonant(10.0, TruncationPolicy::Fixed(1000)).unwrap();
    let s = sample_series(&p, &BlochVector::ZERO, 0.05, 10_000).unwrap();
    assert!(s.values.iter().all(|v| (-1.0..=0.0).contains(v)));
    let again = sample_series(&p, &BlochVector::ZERO, 0.05, 10_000).unwrap();
    assert_eq!(s, again);
    assert_eq!(
        build_histogram(&s, 0.005).unwrap(),
        build_histogram(&again, 0.005).unwrap()
    );
    assert!(sample_skewness(&s).unwrap().is_finite());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn histogram_conserves_counts(beta in 0.01..20.0f64, n in 1usize..3000, width in 1e-5..0.2f64) {
        let p = ModelParams::resonant(beta, TruncationPolicy::Fixed(200)).unwrap();
        let s = sample_series(&p, &BlochVector::ZERO, 0.05, n).unwrap();
        prop_assert!(s.values.iter().all(|v| (-1.0..=0.0).contains(v)));
        let h = build_histogram(&s, width).unwrap();
        prop_assert_eq!(h.total(), n as u64);
    }
}
