use std::collections::HashMap;

use proptest::prelude::*;

use tma_core::geometry::ApproachLayout;
use tma_core::harness::seeds;
use tma_core::oracle::expected_stream_len;
use tma_core::traffic::{
    build_scenario, generate_stream, max_separation, sample_rates, separation_between, FleetCatalog, TrafficParams,
    WakeMatrix, WeightClass,
};

fn mean_len(lambda: f64, runs: usize, seed: u64) -> f64 {
    let mut rng = seeds::rng(seed);
    let total: usize = (0..runs).map(|_| generate_stream(lambda, 66.0, 3600.0, &mut rng).len()).sum();
    total as f64 / runs as f64
}

#[test]
fn counts_match_erlang_expectation() {
    for (i, lambda) in [1.0, 2.0, 10.0, 20.0, 30.0].into_iter().enumerate() {
        let mean = mean_len(lambda, 10_000, 40 + i as u64);
        let expected = expected_stream_len(lambda, 66.0, 3600.0);
        assert!((mean / expected - 1.0).abs() < 0.02, "lambda {lambda}: {mean} vs {expected}");
    }
}

#[test]
fn renewals_at_thirty_per_hour_match_rate_formula() {
    // arrivals after the anchor at zero form an ordinary renewal count
    let renewals = mean_len(30.0, 10_000, 7) - 1.0;
    let asymptotic = 3600.0 / (66.0 + 120.0);
    assert!((renewals / asymptotic - 1.0).abs() < 0.02, "{renewals} vs {asymptotic}");
}

#[test]
fn stop_rule_boundaries() {
    let mut rng = seeds::rng(1);
    assert_eq!(generate_stream(30.0, 66.0, 0.0, &mut rng), vec![0.0]);
    assert!(generate_stream(30.0, 66.0, -1.0, &mut rng).is_empty());
}

#[test]
fn rates_are_uniform() {
    let mut rng = seeds::rng(3);
    let draws = 100_000;
    let mut counts = [0usize; 30];
    for _ in 0..draws / 4 {
        for r in sample_rates(&mut rng, 1, 30, 4) {
            counts[(r - 1) as usize] += 1;
        }
    }
    let p = 1.0 / 30.0;
    let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
    let expected = draws as f64 * p;
    let mut chi2 = 0.0;
    for c in counts {
        assert!((c as f64 - expected).abs() < 4.0 * sigma, "{counts:?}");
        chi2 += (c as f64 - expected).powi(2) / expected;
    }
    // 29 degrees of freedom; the 0.999 quantile is about 58.3
    assert!(chi2 < 58.3, "chi2 {chi2}");
    assert!(sample_rates(&mut rng, 7, 7, 4).iter().all(|&r| r == 7));
}

#[test]
fn class_frequencies_within_three_sigma() {
    let catalog = FleetCatalog::standard();
    let mut rng = seeds::rng(5);
    let draws = 100_000;
    let mut classes: HashMap<WeightClass, usize> = HashMap::new();
    let mut types: HashMap<String, usize> = HashMap::new();
    for _ in 0..draws {
        let t = catalog.sample(&mut rng);
        *classes.entry(t.class).or_default() += 1;
        *types.entry(t.name.clone()).or_default() += 1;
    }
    for (c, p) in WeightClass::ALL.into_iter().zip([0.4, 0.4, 0.2]) {
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        let got = classes[&c] as f64;
        assert!((got - draws as f64 * p).abs() < 3.0 * sigma, "{c}: {got}");
    }
    let (a, b) = (types["A359"] as f64, types["B773"] as f64);
    let n = a + b;
    assert!((a - n / 2.0).abs() < 3.0 * (n * 0.25).sqrt());
}

#[test]
fn single_type_per_class_is_always_returned() {
    use tma_core::traffic::AircraftType;
    let catalog = FleetCatalog::new(
        vec![
            AircraftType::new("H1", WeightClass::Heavy, 80.0, 140.0),
            AircraftType::new("L1", WeightClass::Large, 60.0, 140.0),
            AircraftType::new("S1", WeightClass::Small, 70.0, 130.0),
        ],
        [0.4, 0.4, 0.2],
    );
    let mut rng = seeds::rng(9);
    for _ in 0..1000 {
        let t = catalog.sample(&mut rng);
        let expected = match t.class {
            WeightClass::Heavy => "H1",
            WeightClass::Large => "L1",
            WeightClass::Small => "S1",
        };
        assert_eq!(t.name, expected);
    }
}

#[test]
fn default_tables_verbatim() {
    let rows: Vec<(String, WeightClass, f64, f64)> = FleetCatalog::standard()
        .types()
        .iter()
        .map(|t| (t.name.clone(), t.class, t.t_rwy, t.v_ref))
        .collect();
    use WeightClass::*;
    assert_eq!(
        rows,
        vec![
            ("A359".into(), Heavy, 85.0, 140.0),
            ("B773".into(), Heavy, 85.0, 150.0),
            ("A321".into(), Large, 66.0, 140.0),
            ("B737".into(), Large, 62.0, 142.0),
            ("A221".into(), Small, 72.0, 130.0),
            ("B735".into(), Small, 72.0, 127.0),
        ]
    );
    let w = WakeMatrix::standard();
    let table = [[82.0, 118.0, 150.0], [60.0, 64.0, 94.0], [60.0, 64.0, 94.0]];
    for (i, l) in WeightClass::ALL.into_iter().enumerate() {
        for (j, t) in WeightClass::ALL.into_iter().enumerate() {
            assert_eq!(w.get(l, t), table[i][j]);
        }
    }
}

#[test]
fn separation_examples() {
    let c = FleetCatalog::standard();
    let w = WakeMatrix::standard();
    let t = |n: &str| c.get(n).unwrap();
    assert_eq!(separation_between(t("A359"), t("B735"), &w), 150.0);
    assert_eq!(separation_between(t("B737"), t("A359"), &w), 85.0);
    assert_eq!(separation_between(t("A221"), t("A321"), &w), 66.0);
    for a in c.types() {
        for b in c.types() {
            let s = separation_between(a, b, &w);
            assert!(s >= b.t_rwy && s <= max_separation(&c, &w));
            assert_eq!(s, separation_between(a, b, &w));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn same_stream_gaps_respect_buffer(seed in any::<u64>(), lambda_min in 1u32..30, t_sep in 0.0..120.0f64) {
        let layout = ApproachLayout::standard();
        let params = TrafficParams { lambda_min, lambda_max: 30, t_sep, t_max: 3600.0 };
        let s = build_scenario(&layout, &params, &FleetCatalog::standard(), &mut seeds::rng(seed));
        let mut last: HashMap<usize, (usize, f64)> = HashMap::new();
        for (k, a) in s.aircraft.iter().enumerate() {
            prop_assert_eq!(a.id, k + 1);
            prop_assert!(a.tau >= 0.0 && a.tau <= 3600.0);
            prop_assert_eq!(a.entry_point, layout.corners()[a.corner].fix);
            if let Some(&(idx, tau)) = last.get(&a.corner) {
                prop_assert_eq!(a.stream_index, idx + 1);
                prop_assert!(a.tau - tau >= t_sep);
            } else {
                prop_assert_eq!(a.stream_index, 0);
                prop_assert_eq!(a.tau, 0.0);
            }
            last.insert(a.corner, (a.stream_index, a.tau));
        }
        for pair in s.aircraft.windows(2) {
            let key = |a: &tma_core::traffic::Aircraft| (a.tau, a.corner, a.stream_index);
            prop_assert!(key(&pair[0]) < key(&pair[1]));
        }
    }
}
