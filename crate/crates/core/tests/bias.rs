use spacelife::bias_sim::{
    end_reference_slope, estimate_end_binned, estimate_launch_binned, generate_fleet, run_bias_experiment,
    FleetScenario,
};

fn uncensored(slope: f64, sigma: f64) -> FleetScenario {
    FleetScenario {
        true_slope_log2: slope,
        lifespan_noise_sigma_log2: sigma,
        last_launch_year: Some(2000),
        observation_year: 100_000,
        ..Default::default()
    }
}

#[test]
fn reports_are_reproducible() {
    let scenario = FleetScenario::default();
    let a = run_bias_experiment(&scenario, 12).unwrap();
    let b = run_bias_experiment(&scenario, 12).unwrap();
    assert_eq!(a, b);
    let seeds: Vec<u64> = a.seeds.iter().map(|s| s.seed).collect();
    assert_eq!(seeds, (0..12).map(|i| scenario.seed + i).collect::<Vec<_>>());
}

#[test]
fn seed_results_do_not_depend_on_batch() {
    let scenario = FleetScenario::default();
    let batch = run_bias_experiment(&scenario, 5).unwrap();
    let single = run_bias_experiment(
        &FleetScenario {
            seed: scenario.seed + 3,
            ..scenario
        },
        1,
    )
    .unwrap();
    assert_eq!(batch.seeds[3], single.seeds[0]);
}

#[test]
fn without_trend_or_censoring_both_estimators_agree() {
    let scenario = uncensored(0.0, 0.0);
    let fleet = generate_fleet(&scenario).unwrap();
    assert!(fleet.iter().all(|c| !c.is_operational(scenario.observation_year)));
    let launch = estimate_launch_binned(&fleet, scenario.observation_year).unwrap();
    let end = estimate_end_binned(&fleet, scenario.observation_year).unwrap();
    assert!(launch.slope_log2.abs() < 1e-9);
    assert!(end.slope_log2.abs() < 1e-9);
    assert!((launch.slope_log2 - end.slope_log2).abs() < 1e-9);
}

#[test]
fn without_censoring_launch_binning_is_unbiased() {
    let report = run_bias_experiment(&uncensored(0.1, 0.3), 40).unwrap();
    assert_eq!(report.failures, 0);
    let summary = &report.launch_summary;
    let median = summary.median.unwrap();
    assert!((median - 0.1).abs() <= summary.half_width_90().unwrap(), "{summary:?}");
    // roughly half the seeds fall on each side of the truth
    assert!(
        (8..=32).contains(&report.launch_below_true),
        "{}",
        report.launch_below_true
    );
}

#[test]
fn end_reference_matches_uncensored_simulation() {
    let scenario = uncensored(0.1, 0.3);
    let reference = end_reference_slope(&scenario).unwrap();
    let report = run_bias_experiment(&scenario, 40).unwrap();
    let median = report.end_summary.median.unwrap();
    assert!((median - reference).abs() <= report.end_summary.half_width_90().unwrap());
    // long-lived craft end later, so the end-time trend is flatter than the launch trend
    assert!(reference < 0.1);
}

#[test]
fn censoring_pulls_launch_binned_slope_down() {
    let report = run_bias_experiment(&FleetScenario::default(), 30).unwrap();
    assert_eq!(report.failures, 0);
    assert!(report.launch_below_true >= 28);
    assert!(report.final_decade_below_true >= 28);
    assert_eq!(report.end_median_near_reference(), Some(true));
}
