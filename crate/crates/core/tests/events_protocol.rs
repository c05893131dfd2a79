//! Statistical checks of the Monte Carlo event estimator against closed
//! forms: conditioning must not disturb far-away regions, failure-rate
//! estimates must match exact tails and stay under their analytic bounds,
//! and the deterministic inclusion must hold on every successful trial.

use smm_core::events::{
    mc_estimate, sample_f_conditioned, sample_stage_config, BoundKind, ChainParams, EventKind,
    EventSpec,
};
use smm_core::trial_rng;

const E_M2: f64 = 0.135_335_283_236_612_69; // exp(-2)
const B1_EXACT_TAIL: f64 = 0.063_797_196_736_561_88; // P(Poisson(8) > 12)
const C1_EXACT_TAIL: f64 = 0.022_315_477_981_965_922; // P(Poisson(16) > 24)
const B1_BOUND: f64 = 0.420_806_867_621_728_1; // exp(-3(ln 1.5 - 1/3) * 4)
const C1_BOUND: f64 = 0.177_078_419_837_610_6; // exp(-6(ln 1.5 - 1/3) * 4)
const D1_HINT: f64 = 0.764_664_716_763_387_3; // 1 - exp(-2) - 0.1

fn close(a: f64, b: f64) {
    assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{a} != {b}");
}

/// Conditioning on the crowding cap `F` only inspects the closed inner ball
/// (radius 4 at the first stage), so counts in a region disjoint from it
/// must keep their unconditioned Poisson law. Compares the total count of
/// the two-sided annulus (10, 20) between an unconditioned arm and an
/// `F`-conditioned arm; both totals are Poisson with mean 20 per trial.
#[test]
fn f_conditioning_leaves_distant_counts_untouched() {
    let params = ChainParams::new(1, 0).unwrap();
    let law = smm_core::events::default_event_law(&params).unwrap();
    let trials = 2_000u64;

    let mut plain_total = 0u64;
    let mut conditioned_total = 0u64;
    for trial in 0..trials {
        let mut rng = trial_rng(11, trial);
        let (config, center) = sample_stage_config(&params, &law, &mut rng).unwrap();
        let x = config.positions()[center];
        plain_total += config.count_in_annulus(x, 10.0, 20.0) as u64;

        let mut rng = trial_rng(13, trial);
        let (config, center) = sample_f_conditioned(&params, &law, &mut rng).unwrap();
        let x = config.positions()[center];
        conditioned_total += config.count_in_annulus(x, 10.0, 20.0) as u64;
    }

    // each arm is Poisson(20 * trials); their difference has variance equal
    // to the sum of the totals
    let mean = 20.0 * trials as f64;
    let diff = plain_total as f64 - conditioned_total as f64;
    let sigma = ((plain_total + conditioned_total) as f64).sqrt();
    assert!(
        diff.abs() <= 4.0 * sigma,
        "conditioned arm drifted: {plain_total} vs {conditioned_total}"
    );
    for total in [plain_total, conditioned_total] {
        assert!(
            (total as f64 - mean).abs() <= 4.0 * mean.sqrt(),
            "arm total {total} is far from the Poisson mean {mean}"
        );
    }
}

/// The first-stage crowding-failure estimates must sit within Monte Carlo
/// error of the exact Poisson tails and under their exponential-moment
/// bounds, and the reports must carry those bounds verbatim.
#[test]
fn b_and_c_failure_rates_match_exact_tails_and_respect_bounds() {
    let params = ChainParams::new(1, 0).unwrap();
    let trials = 20_000u64;

    let spec = EventSpec::with_default_law(EventKind::BFailure, &params).unwrap();
    let report = mc_estimate(&spec, &params, trials, 17).unwrap();
    assert_eq!(report.bound_kind, BoundKind::UpperBound);
    close(report.analytic, B1_BOUND);
    let se = (B1_EXACT_TAIL * (1.0 - B1_EXACT_TAIL) / trials as f64).sqrt();
    assert!(
        (report.estimate - B1_EXACT_TAIL).abs() <= 4.0 * se,
        "B-failure estimate {} is far from the exact tail {B1_EXACT_TAIL}",
        report.estimate
    );
    assert!(report.estimate <= report.analytic);

    let spec = EventSpec::with_default_law(EventKind::CFailure, &params).unwrap();
    let report = mc_estimate(&spec, &params, trials, 19).unwrap();
    assert_eq!(report.bound_kind, BoundKind::UpperBound);
    close(report.analytic, C1_BOUND);
    let se = (C1_EXACT_TAIL * (1.0 - C1_EXACT_TAIL) / trials as f64).sqrt();
    assert!(
        (report.estimate - C1_EXACT_TAIL).abs() <= 4.0 * se,
        "C-failure estimate {} is far from the exact tail {C1_EXACT_TAIL}",
        report.estimate
    );
    assert!(report.estimate <= report.analytic);
}

/// The hop-existence failure rate is an exact void probability; with the
/// odd parity variant the annulus widens from 4 to 4.1 on each side, so the
/// rate drops from exp(-2) to exp(-2.05). The report's analytic column must
/// track the shift and the estimate must follow it.
#[test]
fn shifted_parity_changes_the_a_failure_rate() {
    let trials = 20_000u64;

    let params = ChainParams::new(1, 0).unwrap();
    let spec = EventSpec::with_default_law(EventKind::AFailure, &params).unwrap();
    let report = mc_estimate(&spec, &params, trials, 23).unwrap();
    assert_eq!(report.bound_kind, BoundKind::Exact);
    close(report.analytic, E_M2);
    let se = (E_M2 * (1.0 - E_M2) / trials as f64).sqrt();
    assert!((report.estimate - E_M2).abs() <= 4.0 * se);

    let params = ChainParams::new(1, 1).unwrap();
    let shifted = (-2.05f64).exp();
    let spec = EventSpec::with_default_law(EventKind::AFailure, &params).unwrap();
    let report = mc_estimate(&spec, &params, trials, 29).unwrap();
    assert_eq!(report.bound_kind, BoundKind::Exact);
    close(report.analytic, shifted);
    let se = (shifted * (1.0 - shifted) / trials as f64).sqrt();
    assert!(
        (report.estimate - shifted).abs() <= 4.0 * se,
        "shifted A-failure estimate {} is far from {shifted}",
        report.estimate
    );
}

/// `P(D | F)` at the first stage: every successful trial re-verifies the
/// deterministic inclusion (next-stage `F` at the hop target plus strong
/// connection) inside the estimator, so a pass here is also a zero-violation
/// certificate over all successes. The estimate must clear the analytic
/// lower hint up to Monte Carlo error.
#[test]
fn d_given_f_clears_the_hint_and_verifies_the_inclusion() {
    let params = ChainParams::new(1, 0).unwrap();
    let trials = 2_000u64;
    let spec = EventSpec::with_default_law(EventKind::DGivenF, &params).unwrap();
    let report = mc_estimate(&spec, &params, trials, 31).unwrap();
    assert_eq!(report.bound_kind, BoundKind::LowerBound);
    close(report.analytic, D1_HINT);
    assert!(
        report.estimate >= D1_HINT - 3.0 * report.std_error,
        "D-given-F estimate {} fell below the hint {D1_HINT}",
        report.estimate
    );
    assert!(report.estimate <= 1.0);
    // the union bound over the three sub-events caps the failure rate
    assert!(report.estimate >= 1.0 - E_M2 - B1_EXACT_TAIL - C1_EXACT_TAIL - 4.0 * report.std_error);
}
