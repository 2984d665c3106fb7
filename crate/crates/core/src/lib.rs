//! Discrete-tick oscillating spin-1/2 carriers, anti-correlated pairs, and
//! a seeded Monte Carlo harness that compares their measurement statistics
//! against closed-form quantum references.
//!
//! The model replaces superposed states with carriers that swap z
//! eigenstates every clock tick. Single readouts, paired readouts under two
//! competing second-measurement rules, angle sweeps, and CHSH runs are all
//! driven by the same reproducible trial machinery: every estimate is a
//! pure function of `(seed, trials)` regardless of thread count.
//!
//! Entry points: [`run_experiment`] for configured runs, or the individual
//! runners [`run_single_spin`], [`run_singlet_ensemble`] and [`run_chsh`].

pub mod error;
pub mod harness;
pub mod mc;
pub mod oracle;
pub mod singlet;
pub mod spin;
pub mod stats;
pub mod timebase;

pub use error::SimError;
pub use harness::{
    run_chsh, run_experiment, run_single_spin, run_singlet_ensemble, Comparison, ConfigError,
    DelayPolicy, ExperimentConfig, ExperimentKind, ExperimentReport, Quantity, SingleSpinReport,
    SingletReport, SweepReport, ANGLE_GRID, DEFAULT_TRIALS,
};
pub use harness::{ChshReport, ChshTerm};
pub use oracle::{
    qm_chsh, qm_correlation, qm_single_spin, qm_singlet_joint, ChshSettings, JointDistribution,
    SpinDistribution,
};
pub use singlet::{
    ensemble_outcome, projection_amplitudes, OutcomeRule, PairCell, PairCoefficients, SingletPair,
    WeightedOutcome,
};
pub use spin::{rotate_to_axis, Amplitudes, Axis, SpinCarrier, SpinZ};
pub use stats::Z_GATE;
pub use timebase::{Delay, Parity, TimeStep};
