//! Randomized invariants of the carrier algebra, the reference formulas,
//! and the ensemble runners.

use std::f64::consts::PI;

use proptest::prelude::*;

use chronospin_core::harness::{run_singlet_ensemble, DelayPolicy, Quantity};
use chronospin_core::oracle::{qm_correlation, qm_singlet_joint};
use chronospin_core::singlet::{ensemble_outcome, projection_amplitudes, SingletPair};
use chronospin_core::spin::{rotate_to_axis, Axis, SpinCarrier, SpinZ};
use chronospin_core::stats::std_error;
use chronospin_core::timebase::{Delay, TimeStep};
use chronospin_core::OutcomeRule;

fn spin_label() -> impl Strategy<Value = SpinZ> {
    prop_oneof![Just(SpinZ::Down), Just(SpinZ::Up)]
}

fn angle() -> impl Strategy<Value = f64> {
    prop_oneof![4 => -10.0..10.0f64, 1 => Just(0.0), 1 => Just(PI)]
}

proptest! {
    #[test]
    fn grid_amplitudes_stay_normalized_exactly(start in spin_label(), n in 0u64..10_000) {
        let carrier = SpinCarrier::new(start, TimeStep(0));
        prop_assert_eq!(carrier.amplitudes_at(TimeStep(n)).unwrap().norm_sqr(), 1.0);
    }

    #[test]
    fn amplitudes_repeat_every_four_ticks_bit_for_bit(start in spin_label(), n in 0u64..100_000) {
        let carrier = SpinCarrier::new(start, TimeStep(0));
        let a = carrier.amplitudes_at(TimeStep(n)).unwrap();
        let b = carrier.amplitudes_at(TimeStep(n + 4)).unwrap();
        prop_assert_eq!(a.down.to_bits(), b.down.to_bits());
        prop_assert_eq!(a.up.to_bits(), b.up.to_bits());
        prop_assert_eq!(
            carrier.measure_z(TimeStep(n)).unwrap(),
            carrier.measure_z(TimeStep(n + 2)).unwrap()
        );
    }

    #[test]
    fn readout_squares_the_live_amplitude(start in spin_label(), n in 0u64..10_000) {
        // The deterministic readout is always the label whose amplitude is
        // at an antinode.
        let carrier = SpinCarrier::new(start, TimeStep(0));
        let a = carrier.amplitudes_at(TimeStep(n)).unwrap();
        let outcome = carrier.measure_z(TimeStep(n)).unwrap();
        let live = match outcome {
            SpinZ::Down => a.prob_down(),
            SpinZ::Up => a.prob_up(),
        };
        prop_assert_eq!(live, 1.0);
    }

    #[test]
    fn same_label_pair_coefficients_vanish_at_any_tick(
        start in spin_label(),
        reference in 0u64..1_000,
        elapsed in 0u64..10_000,
    ) {
        let pair = SingletPair::new(start, TimeStep(reference));
        let c = pair.coefficients_at(TimeStep(reference + elapsed)).unwrap();
        prop_assert_eq!(c.down_down, 0.0);
        prop_assert_eq!(c.up_up, 0.0);
        prop_assert_eq!(c.norm_sqr(), 1.0);
    }

    #[test]
    fn pair_coefficients_factor_on_and_off_the_grid(
        start in spin_label(),
        t in 0.0..400.0f64,
    ) {
        let pair = SingletPair::new(start, TimeStep(0));
        let (first, second) = pair.carriers();
        let c = pair.coefficients_after(t);
        let a = first.amplitudes_after(t);
        let b = second.amplitudes_after(t);
        prop_assert!((c.down_down - a.down * b.down).abs() < 1e-12);
        prop_assert!((c.down_up - a.down * b.up).abs() < 1e-12);
        prop_assert!((c.up_down - a.up * b.down).abs() < 1e-12);
        prop_assert!((c.up_up - a.up * b.up).abs() < 1e-12);
    }

    #[test]
    fn rotation_is_normalized_for_any_axis(state in spin_label(), phi in angle()) {
        let a = rotate_to_axis(state, Axis(phi));
        prop_assert!((a.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ensemble_weights_of_the_two_parities_partition_unity(
        partner in spin_label(),
        phi in angle(),
        even in 0u64..500,
    ) {
        let even_outcome = ensemble_outcome(partner, Delay(2 * even), Axis(phi));
        let odd_outcome = ensemble_outcome(partner, Delay(2 * even + 1), Axis(phi));
        prop_assert!((0.0..=1.0).contains(&even_outcome.weight));
        prop_assert!((0.0..=1.0).contains(&odd_outcome.weight));
        prop_assert!((even_outcome.weight + odd_outcome.weight - 1.0).abs() < 1e-15);
        prop_assert_eq!(even_outcome.outcome, odd_outcome.outcome.flipped());
    }

    #[test]
    fn projection_amplitudes_are_normalized(
        partner in spin_label(),
        phi in angle(),
        delay in 0u64..1_000,
    ) {
        let a = projection_amplitudes(partner, Delay(delay), Axis(phi));
        prop_assert!((a.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn joint_reference_is_a_swap_symmetric_distribution(phi in angle()) {
        let j = qm_singlet_joint(Axis(phi));
        for p in [j.down_down, j.down_up, j.up_down, j.up_up] {
            prop_assert!((0.0..=1.0).contains(&p));
        }
        prop_assert!((j.down_down + j.down_up + j.up_down + j.up_up - 1.0).abs() < 1e-15);
        prop_assert_eq!(j.down_up, j.up_down);
        prop_assert_eq!(j.down_down, j.up_up);
        prop_assert!((j.correlation() - qm_correlation(Axis(phi))).abs() < 1e-12);
    }

    #[test]
    fn reference_conditionals_are_distributions(phi in -9.9..9.9f64) {
        let j = qm_singlet_joint(Axis(phi));
        for first in [SpinZ::Down, SpinZ::Up] {
            let cond = j.second_given_first(first);
            prop_assert!((cond.down + cond.up - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn binomial_error_shrinks_with_more_trials(p in 0.01..0.99f64, n in 1u64..1_000_000) {
        prop_assert!(std_error(p, 4 * n) < std_error(p, n));
        prop_assert!((std_error(p, 4 * n) - std_error(p, n) / 2.0).abs() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn singlet_runs_are_pure_functions_of_seed_and_trials(
        seed in any::<u64>(),
        phi in angle(),
        rule in prop_oneof![Just(OutcomeRule::PaperEnsemble), Just(OutcomeRule::BornProjection)],
    ) {
        let run = || run_singlet_ensemble(
            Axis(phi),
            rule,
            DelayPolicy::UniformParity,
            1,
            seed,
            3_000,
        ).unwrap();
        prop_assert_eq!(run(), run());
    }

    #[test]
    fn singlet_runs_do_not_depend_on_the_worker_count(seed in any::<u64>()) {
        // Straddles a batch boundary so the reduction order actually varies.
        let run = || run_singlet_ensemble(
            Axis(1.0),
            OutcomeRule::PaperEnsemble,
            DelayPolicy::UniformParity,
            1,
            seed,
            chronospin_core::mc::TRIAL_BATCH + 513,
        ).unwrap();
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
        let many = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap().install(run);
        prop_assert_eq!(single, many);
    }

    #[test]
    fn ensemble_rule_tracks_the_half_angle_conditional_for_any_seed(
        seed in any::<u64>(),
        phi in 0.3..2.8f64,
    ) {
        // A six-sigma gate at 20k pairs: misses are astronomically rare
        // unless the rule is wrong.
        let report = run_singlet_ensemble(
            Axis(phi),
            OutcomeRule::PaperEnsemble,
            DelayPolicy::UniformParity,
            1,
            seed,
            20_000,
        ).unwrap();
        let row = report.row(Quantity::SecondGivenFirst {
            second: SpinZ::Up,
            first: SpinZ::Down,
        }).unwrap();
        prop_assert!(row.z.unwrap().abs() < 6.0, "z = {:?}", row.z);
    }
}
