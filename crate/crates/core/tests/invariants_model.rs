//! Distributional and algebraic invariants of the detection model.

mod common;

use lrb_detect::{
    generate_sample, transmit, HypothesisPair, LrbScheduler, RandomScheduler, RngStream,
    SchedulerSpec,
};
use proptest::prelude::*;

fn pair_strategy() -> impl Strategy<Value = HypothesisPair> {
    (-3.0f64..2.0, 0.2f64..3.0, 0.2f64..2.5)
        .prop_map(|(t0, gap, sigma)| HypothesisPair::new(t0, t0 + gap, sigma * sigma).unwrap())
}

proptest! {
    #[test]
    fn likelihood_ratio_is_strictly_increasing(
        pair in pair_strategy(),
        y1 in -6.0f64..6.0,
        step in 1e-6f64..3.0,
    ) {
        let y2 = y1 + step;
        let g1 = pair.likelihood_ratio(y1).unwrap();
        let g2 = pair.likelihood_ratio(y2).unwrap();
        prop_assert!(g1 > 0.0);
        prop_assert!(g1 < g2, "g({y1})={g1} !< g({y2})={g2}");
    }

    #[test]
    fn symmetric_thresholds_equalize_censoring_probability(
        pair in pair_strategy(),
        t in 0.0f64..4.0,
    ) {
        let sched = SchedulerSpec::Lrb(LrbScheduler::from_half_width(t, &pair).unwrap());
        let c0 = sched.censoring_probability(pair.theta0(), &pair);
        let c1 = sched.censoring_probability(pair.theta1(), &pair);
        prop_assert!((c0 - c1).abs() <= 1e-12, "c0={c0} c1={c1}");
    }

    #[test]
    fn censoring_band_matches_likelihood_band(
        pair in pair_strategy(),
        alpha in 1.0f64..50.0,
        y in -8.0f64..8.0,
    ) {
        let sched = LrbScheduler::from_alpha(alpha, &pair).unwrap();
        let g = pair.likelihood_ratio(y).unwrap();
        let in_band = 1.0 / alpha < g && g < alpha;
        // immediately at the band edge the exponentials may round either way
        let margin = (g / alpha - 1.0).abs().min((g * alpha - 1.0).abs());
        if margin > 1e-9 {
            prop_assert_eq!(!sched.decide(y), in_band, "y={} g={} alpha={}", y, g, alpha);
        }
    }

    #[test]
    fn quantile_cdf_roundtrip_dense(p in 1e-6f64..=0.999999) {
        let x = lrb_detect::numerics::std_normal_quantile(p).unwrap();
        let back = lrb_detect::numerics::std_normal_cdf(x).unwrap();
        prop_assert!((back - p).abs() <= 1e-10, "p={p} back={back}");
    }
}

#[test]
fn lr_ordering_holds_on_ten_thousand_random_pairs() {
    let pair = HypothesisPair::new(-0.4, 1.3, 1.7).unwrap();
    let mut rng = RngStream::new(2024, 0);
    for _ in 0..10_000 {
        let u = -8.0 + 16.0 * rng.uniform();
        let v = -8.0 + 16.0 * rng.uniform();
        let (y1, y2) = if u < v { (u, v) } else { (v, u) };
        if y1 == y2 {
            continue;
        }
        let g1 = pair.likelihood_ratio(y1).unwrap();
        let g2 = pair.likelihood_ratio(y2).unwrap();
        assert!(g1 < g2, "g({y1})={g1} !< g({y2})={g2}");
    }
}

#[test]
fn empirical_transmit_frequency_matches_rate_lrb() {
    let pair = HypothesisPair::new(0.0, 1.0, 1.0).unwrap();
    let sched = SchedulerSpec::Lrb(LrbScheduler::new(-0.262, 1.262, &pair).unwrap());
    for (theta, stream) in [(pair.theta0(), 0), (pair.theta1(), 1)] {
        let rate = sched.transmission_rate(theta, &pair);
        let mut rng = RngStream::new(31, stream);
        let n = 1_000_000;
        let mut transmitted = 0u64;
        for _ in 0..n {
            let sample = generate_sample(&mut rng, theta, &pair);
            let obs = transmit(&sample, &sched, None, &mut rng);
            transmitted += u64::from(obs.gamma());
        }
        let freq = transmitted as f64 / n as f64;
        let se = (rate * (1.0 - rate) / n as f64).sqrt();
        assert!(
            (freq - rate).abs() <= 3.0 * se,
            "theta={theta}: freq={freq} rate={rate} se={se}"
        );
    }
}

#[test]
fn empirical_transmit_frequency_matches_rate_random() {
    let pair = HypothesisPair::new(0.0, 1.0, 1.0).unwrap();
    let sched = SchedulerSpec::Random(RandomScheduler::new(0.3).unwrap());
    let rate = sched.transmission_rate(0.0, &pair);
    assert_eq!(rate, 0.3);
    let mut rng = RngStream::new(32, 0);
    let n = 1_000_000;
    let mut transmitted = 0u64;
    for _ in 0..n {
        let sample = generate_sample(&mut rng, 0.0, &pair);
        let obs = transmit(&sample, &sched, None, &mut rng);
        transmitted += u64::from(obs.gamma());
    }
    let freq = transmitted as f64 / n as f64;
    let se = (rate * (1.0 - rate) / n as f64).sqrt();
    assert!((freq - rate).abs() <= 3.0 * se, "freq={freq}");
}

#[test]
fn truncated_pdf_integrates_to_the_transmission_rate() {
    let mut rng = RngStream::new(77, 0);
    for _ in 0..25 {
        let pair = common::random_pair(&mut rng);
        let sched = common::random_scheduler(&mut rng, &pair);
        let spec = SchedulerSpec::Lrb(sched);
        let f = |y: f64| sched.truncated_pdf(y, pair.theta0(), &pair);
        let sigma = pair.sigma();
        let lo = sched.lower().min(pair.theta0()) - 14.0 * sigma;
        let hi = sched.upper().max(pair.theta0()) + 14.0 * sigma;
        let mass = common::adaptive_simpson(&f, lo, sched.lower(), 1e-13)
            + common::adaptive_simpson(&f, sched.upper(), hi, 1e-13);
        let rate = spec.transmission_rate(pair.theta0(), &pair);
        assert!(
            (mass - rate).abs() < 1e-10,
            "mass={mass} rate={rate} a={} b={}",
            sched.lower(),
            sched.upper()
        );
    }
}
