//! Experiment configuration, seeded ensemble runners, and comparison
//! reports against the closed-form reference.
//!
//! Every runner is a pure function of its configuration: trial randomness
//! comes from per-trial ChaCha streams and sub-experiments (sweep legs,
//! CHSH terms) get seeds derived from the top-level seed, so reports are
//! reproducible bit for bit.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::error::SimError;
use crate::mc::{derive_seed, run_trials, Tally};
use crate::oracle::{qm_chsh, qm_correlation, qm_single_spin, qm_singlet_joint, ChshSettings};
use crate::singlet::{ensemble_outcome, projection_amplitudes, OutcomeRule, PairCell, SingletPair};
use crate::spin::{Axis, SpinZ};
use crate::stats::{self, correlation_std_error, is_flagged, z_ratio, z_score};
use crate::timebase::{Delay, TimeStep};

/// Trial count used when a configuration does not specify one.
pub const DEFAULT_TRIALS: u64 = 100_000;

/// Relative angles covered by the default sweep: nodes and extremes of the
/// half-angle law plus both points where it crosses 1/2.
pub const ANGLE_GRID: [f64; 7] = {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};
    [
        0.0,
        FRAC_PI_6,
        FRAC_PI_4,
        FRAC_PI_3,
        FRAC_PI_2,
        2.0 * FRAC_PI_3,
        PI,
    ]
};

/// Which experiment a configuration describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Repeated z readout of carriers from an unpolarized source.
    SingleSpin,
    /// Simultaneous z readout of both pair members.
    SingletZz,
    /// Pair runs across a list of relative analyzer angles.
    SingletAngleSweep,
    /// Four pair runs combined into the CHSH statistic.
    Chsh,
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExperimentKind::SingleSpin => write!(f, "single-spin"),
            ExperimentKind::SingletZz => write!(f, "singlet-zz"),
            ExperimentKind::SingletAngleSweep => write!(f, "singlet-angle-sweep"),
            ExperimentKind::Chsh => write!(f, "chsh"),
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "single-spin" => Ok(ExperimentKind::SingleSpin),
            "singlet-zz" => Ok(ExperimentKind::SingletZz),
            "singlet-angle-sweep" => Ok(ExperimentKind::SingletAngleSweep),
            "chsh" => Ok(ExperimentKind::Chsh),
            _ => Err(SimError::UnknownLabel {
                what: "experiment kind",
                got: s.to_string(),
            }),
        }
    }
}

/// How the interval between the two measurements of a pair is chosen.
///
/// Only the parity of the interval is observable, so the fixed policies use
/// the shortest delay of each parity and the uniform policy flips a fair
/// coin between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DelayPolicy {
    UniformParity,
    FixedEven,
    FixedOdd,
}

impl DelayPolicy {
    pub fn sample<R: Rng>(self, rng: &mut R) -> Delay {
        match self {
            DelayPolicy::UniformParity => Delay(if rng.random::<bool>() { 1 } else { 0 }),
            DelayPolicy::FixedEven => Delay(0),
            DelayPolicy::FixedOdd => Delay(1),
        }
    }
}

impl fmt::Display for DelayPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DelayPolicy::UniformParity => write!(f, "uniform-parity"),
            DelayPolicy::FixedEven => write!(f, "fixed-even"),
            DelayPolicy::FixedOdd => write!(f, "fixed-odd"),
        }
    }
}

impl FromStr for DelayPolicy {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform-parity" => Ok(DelayPolicy::UniformParity),
            "fixed-even" => Ok(DelayPolicy::FixedEven),
            "fixed-odd" => Ok(DelayPolicy::FixedOdd),
            _ => Err(SimError::UnknownLabel {
                what: "delay policy",
                got: s.to_string(),
            }),
        }
    }
}

/// A fully specified experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub trials: u64,
    pub seed: u64,
    /// Analyzer angles in radians. Sweep legs for the sweep kind (empty
    /// means [`ANGLE_GRID`]); the four CHSH settings a, a', b, b' for the
    /// CHSH kind (empty means the canonical settings).
    pub angles: Vec<f64>,
    pub rule: OutcomeRule,
    pub delay_policy: DelayPolicy,
    /// Which pair member is measured first, 1 or 2.
    pub first_particle: u8,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> ExperimentConfig {
        ExperimentConfig {
            kind,
            trials: DEFAULT_TRIALS,
            seed: 0,
            angles: Vec::new(),
            rule: OutcomeRule::PaperEnsemble,
            delay_policy: DelayPolicy::UniformParity,
            first_particle: 1,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return Err(ConfigError::ZeroTrials);
        }
        if self.first_particle != 1 && self.first_particle != 2 {
            return Err(ConfigError::FirstParticle(self.first_particle));
        }
        if let Some(&bad) = self.angles.iter().find(|a| !a.is_finite()) {
            return Err(ConfigError::NonFiniteAngle(bad));
        }
        match self.kind {
            ExperimentKind::Chsh if !self.angles.is_empty() && self.angles.len() != 4 => {
                Err(ConfigError::ChshAngles(self.angles.len()))
            }
            ExperimentKind::SingleSpin | ExperimentKind::SingletZz if !self.angles.is_empty() => {
                Err(ConfigError::UnexpectedAngles { kind: self.kind })
            }
            _ => Ok(()),
        }
    }

    /// The CHSH settings this configuration selects.
    pub fn chsh_settings(&self) -> ChshSettings {
        match self.angles.as_slice() {
            [a, a_prime, b, b_prime] => ChshSettings {
                a: Axis(*a),
                a_prime: Axis(*a_prime),
                b: Axis(*b),
                b_prime: Axis(*b_prime),
            },
            _ => ChshSettings::canonical(),
        }
    }

    /// The sweep angles this configuration selects.
    pub fn sweep_angles(&self) -> Vec<f64> {
        if self.angles.is_empty() {
            ANGLE_GRID.to_vec()
        } else {
            self.angles.clone()
        }
    }
}

/// A configuration that cannot be run.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("trials must be at least 1")]
    ZeroTrials,
    #[error("first_particle must be 1 or 2, got {0}")]
    FirstParticle(u8),
    #[error("angles must be finite, got {0}")]
    NonFiniteAngle(f64),
    #[error("chsh takes exactly four angles a, a', b, b', got {0}")]
    ChshAngles(usize),
    #[error("{kind} takes no angles")]
    UnexpectedAngles { kind: ExperimentKind },
}

/// What a single comparison row estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// Marginal readout frequency in the single-spin run.
    Outcome(SpinZ),
    /// Readout frequency conditioned on the carrier's start label.
    OutcomeGivenStart { outcome: SpinZ, start: SpinZ },
    /// Joint pair frequency, first particle listed first.
    Joint(PairCell),
    /// Second readout conditioned on the first, in measurement order.
    SecondGivenFirst { second: SpinZ, first: SpinZ },
    /// Expectation of the product of the two +/-1 readouts.
    Correlation,
    /// Fraction of attempted trials the rule kept.
    Acceptance,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Outcome(s) => write!(f, "{s}"),
            Quantity::OutcomeGivenStart { outcome, start } => {
                write!(f, "{outcome}|start={start}")
            }
            Quantity::Joint(cell) => write!(f, "{cell}"),
            Quantity::SecondGivenFirst { second, first } => {
                write!(f, "second={second}|first={first}")
            }
            Quantity::Correlation => write!(f, "correlation"),
            Quantity::Acceptance => write!(f, "acceptance"),
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// One estimated quantity next to its reference value.
///
/// `std_error` is the binomial error of the estimate itself; `z` measures
/// the deviation in units of the spread the reference predicts, so it is
/// +/-infinity when a sharp reference (0 or 1) is missed at all. Rows
/// without a reference carry no deviation and are never flagged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub quantity: Quantity,
    pub count: u64,
    pub trials: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub reference: Option<f64>,
    pub z: Option<f64>,
    pub flagged: bool,
}

fn proportion(quantity: Quantity, count: u64, trials: u64, reference: Option<f64>) -> Comparison {
    let estimate = count as f64 / trials as f64;
    let z = reference.map(|r| z_score(estimate, r, trials));
    Comparison {
        quantity,
        count,
        trials,
        estimate,
        std_error: stats::std_error(estimate, trials),
        reference,
        z,
        flagged: z.map(is_flagged).unwrap_or(false),
    }
}

/// Report of a single-spin run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingleSpinReport {
    pub delay_policy: DelayPolicy,
    pub seed: u64,
    pub trials: u64,
    pub rows: Vec<Comparison>,
}

/// Report of one pair ensemble at one relative angle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingletReport {
    /// Relative analyzer angle in radians.
    pub angle: f64,
    pub rule: OutcomeRule,
    pub delay_policy: DelayPolicy,
    pub first_particle: u8,
    pub seed: u64,
    /// Pairs attempted.
    pub trials: u64,
    pub accepted: u64,
    pub rejected: u64,
    pub rows: Vec<Comparison>,
}

impl SingletReport {
    pub fn row(&self, quantity: Quantity) -> Option<&Comparison> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }
}

impl SingleSpinReport {
    pub fn row(&self, quantity: Quantity) -> Option<&Comparison> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }
}

/// One CHSH pairing and the ensemble it was estimated from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChshTerm {
    pub first_angle: f64,
    pub second_angle: f64,
    pub sign: f64,
    pub report: SingletReport,
}

/// Report of a four-term CHSH run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChshReport {
    pub settings: ChshSettings,
    pub rule: OutcomeRule,
    pub delay_policy: DelayPolicy,
    pub seed: u64,
    pub trials_per_term: u64,
    pub terms: Vec<ChshTerm>,
    pub s_value: f64,
    pub s_std_error: f64,
    pub s_reference: f64,
    pub z: f64,
    pub flagged: bool,
}

/// Sweep legs in the order the angles were given.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub legs: Vec<SingletReport>,
}

/// The report produced by [`run_experiment`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum ExperimentReport {
    SingleSpin(SingleSpinReport),
    SingletZz(SingletReport),
    SingletAngleSweep(SweepReport),
    Chsh(ChshReport),
}

impl ExperimentReport {
    pub fn kind(&self) -> ExperimentKind {
        match self {
            ExperimentReport::SingleSpin(_) => ExperimentKind::SingleSpin,
            ExperimentReport::SingletZz(_) => ExperimentKind::SingletZz,
            ExperimentReport::SingletAngleSweep(_) => ExperimentKind::SingletAngleSweep,
            ExperimentReport::Chsh(_) => ExperimentKind::Chsh,
        }
    }
}

/// Run the experiment a configuration describes.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, ConfigError> {
    config.validate()?;
    Ok(match config.kind {
        ExperimentKind::SingleSpin => ExperimentReport::SingleSpin(run_single_spin(
            config.delay_policy,
            config.seed,
            config.trials,
        )?),
        // A zz run reads both members out in one step: relative angle zero
        // and no interval between the readouts. The outcome rule is honored
        // but cannot matter, which is the point of the experiment.
        ExperimentKind::SingletZz => ExperimentReport::SingletZz(run_singlet_ensemble(
            Axis(0.0),
            config.rule,
            DelayPolicy::FixedEven,
            config.first_particle,
            config.seed,
            config.trials,
        )?),
        ExperimentKind::SingletAngleSweep => {
            let mut legs = Vec::new();
            for (i, &angle) in config.sweep_angles().iter().enumerate() {
                legs.push(run_singlet_ensemble(
                    Axis(angle),
                    config.rule,
                    config.delay_policy,
                    config.first_particle,
                    derive_seed(config.seed, i as u64),
                    config.trials,
                )?);
            }
            ExperimentReport::SingletAngleSweep(SweepReport { legs })
        }
        ExperimentKind::Chsh => ExperimentReport::Chsh(run_chsh(
            config.chsh_settings(),
            config.rule,
            config.delay_policy,
            config.first_particle,
            config.seed,
            config.trials,
        )?),
    })
}

fn random_spin<R: Rng>(rng: &mut R) -> SpinZ {
    if rng.random::<bool>() {
        SpinZ::Up
    } else {
        SpinZ::Down
    }
}

#[derive(Debug)]
struct SpinTally {
    /// counts[start][outcome], indexed down = 0, up = 1.
    counts: [[u64; 2]; 2],
}

impl Tally for SpinTally {
    fn empty() -> Self {
        SpinTally {
            counts: [[0; 2]; 2],
        }
    }

    fn merged(mut self, other: Self) -> Self {
        for s in 0..2 {
            for o in 0..2 {
                self.counts[s][o] += other.counts[s][o];
            }
        }
        self
    }
}

fn single_spin_conditional_reference(policy: DelayPolicy, start: SpinZ, outcome: SpinZ) -> f64 {
    match policy {
        DelayPolicy::UniformParity => 0.5,
        DelayPolicy::FixedEven => {
            if outcome == start {
                1.0
            } else {
                0.0
            }
        }
        DelayPolicy::FixedOdd => {
            if outcome == start.flipped() {
                1.0
            } else {
                0.0
            }
        }
    }
}

/// z readout of carriers drawn evenly from both start labels, measured
/// after an interval chosen by the delay policy.
pub fn run_single_spin(
    policy: DelayPolicy,
    seed: u64,
    trials: u64,
) -> Result<SingleSpinReport, ConfigError> {
    if trials == 0 {
        return Err(ConfigError::ZeroTrials);
    }
    let tally: SpinTally = run_trials(seed, trials, |rng, acc: &mut SpinTally| {
        let start = random_spin(rng);
        let delay = policy.sample(rng);
        let carrier = crate::spin::SpinCarrier::new(start, TimeStep(0));
        let outcome = carrier
            .measure_z(TimeStep(delay.ticks()))
            .expect("readout tick is never before the reference");
        acc.counts[start.index()][outcome.index()] += 1;
    });

    let marginal = qm_single_spin();
    let mut rows = Vec::new();
    for outcome in [SpinZ::Down, SpinZ::Up] {
        let count = tally.counts[0][outcome.index()] + tally.counts[1][outcome.index()];
        rows.push(proportion(
            Quantity::Outcome(outcome),
            count,
            trials,
            Some(marginal.of(outcome)),
        ));
    }
    for start in [SpinZ::Down, SpinZ::Up] {
        let denom = tally.counts[start.index()][0] + tally.counts[start.index()][1];
        if denom == 0 {
            continue;
        }
        for outcome in [SpinZ::Down, SpinZ::Up] {
            rows.push(proportion(
                Quantity::OutcomeGivenStart { outcome, start },
                tally.counts[start.index()][outcome.index()],
                denom,
                Some(single_spin_conditional_reference(policy, start, outcome)),
            ));
        }
    }

    Ok(SingleSpinReport {
        delay_policy: policy,
        seed,
        trials,
        rows,
    })
}

#[derive(Debug)]
struct SingletTally {
    /// Accepted joint counts in measurement order, indexed by `PairCell`.
    cells: [u64; 4],
    rejected: u64,
}

impl Tally for SingletTally {
    fn empty() -> Self {
        SingletTally {
            cells: [0; 4],
            rejected: 0,
        }
    }

    fn merged(mut self, other: Self) -> Self {
        for i in 0..4 {
            self.cells[i] += other.cells[i];
        }
        self.rejected += other.rejected;
        self
    }
}

/// Expected fraction of kept trials, where the rule defines one.
fn acceptance_reference(rule: OutcomeRule, policy: DelayPolicy, angle: Axis) -> Option<f64> {
    match rule {
        OutcomeRule::BornProjection => None,
        OutcomeRule::PaperEnsemble => {
            let half = angle.radians() / 2.0;
            Some(match policy {
                DelayPolicy::UniformParity => 0.5,
                DelayPolicy::FixedEven => half.cos() * half.cos(),
                DelayPolicy::FixedOdd => half.sin() * half.sin(),
            })
        }
    }
}

/// One pair ensemble: first a z readout of the first-measured member at the
/// shared reference tick, then the partner after a policy-chosen interval
/// at the given relative angle, under the given outcome rule.
///
/// The readout tick's own parity only permutes which ensemble member
/// produced which label, so the even start mixture already covers it and
/// the first readout happens at the reference tick.
pub fn run_singlet_ensemble(
    angle: Axis,
    rule: OutcomeRule,
    policy: DelayPolicy,
    first_particle: u8,
    seed: u64,
    trials: u64,
) -> Result<SingletReport, ConfigError> {
    if trials == 0 {
        return Err(ConfigError::ZeroTrials);
    }
    if first_particle != 1 && first_particle != 2 {
        return Err(ConfigError::FirstParticle(first_particle));
    }

    let tally: SingletTally = run_trials(seed, trials, |rng, acc: &mut SingletTally| {
        let mut pair = SingletPair::new(random_spin(rng), TimeStep(0));
        if first_particle == 2 {
            pair = pair.relabeled();
        }
        let (first_carrier, partner_carrier) = pair.carriers();
        let first = first_carrier
            .measure_z(pair.reference)
            .expect("readout at the reference tick");
        let partner = partner_carrier
            .measure_z(pair.reference)
            .expect("readout at the reference tick");

        let delay = policy.sample(rng);
        let second = match rule {
            OutcomeRule::PaperEnsemble => {
                let weighted = ensemble_outcome(partner, delay, angle);
                if rng.random::<f64>() < weighted.weight {
                    weighted.outcome
                } else {
                    acc.rejected += 1;
                    return;
                }
            }
            OutcomeRule::BornProjection => {
                let amplitudes = projection_amplitudes(partner, delay, angle);
                if rng.random::<f64>() < amplitudes.prob_down() {
                    SpinZ::Down
                } else {
                    SpinZ::Up
                }
            }
        };
        acc.cells[PairCell::of(first, second).index()] += 1;
    });

    let accepted: u64 = tally.cells.iter().sum();
    let joint_ref = qm_singlet_joint(angle);
    let mut rows = Vec::new();
    rows.push(proportion(
        Quantity::Acceptance,
        accepted,
        trials,
        acceptance_reference(rule, policy, angle),
    ));

    if accepted > 0 {
        for cell in PairCell::ALL {
            // Joint rows are reported in particle order; the tally is in
            // measurement order, which differs only when the second member
            // goes first.
            let count = if first_particle == 2 {
                let (a, b) = match cell {
                    PairCell::DownDown => (SpinZ::Down, SpinZ::Down),
                    PairCell::DownUp => (SpinZ::Down, SpinZ::Up),
                    PairCell::UpDown => (SpinZ::Up, SpinZ::Down),
                    PairCell::UpUp => (SpinZ::Up, SpinZ::Up),
                };
                tally.cells[PairCell::of(b, a).index()]
            } else {
                tally.cells[cell.index()]
            };
            rows.push(proportion(
                Quantity::Joint(cell),
                count,
                accepted,
                Some(joint_ref.cell(cell)),
            ));
        }

        for first in [SpinZ::Down, SpinZ::Up] {
            let denom = tally.cells[PairCell::of(first, SpinZ::Down).index()]
                + tally.cells[PairCell::of(first, SpinZ::Up).index()];
            if denom == 0 {
                continue;
            }
            let cond_ref = joint_ref.second_given_first(first);
            for second in [SpinZ::Down, SpinZ::Up] {
                rows.push(proportion(
                    Quantity::SecondGivenFirst { second, first },
                    tally.cells[PairCell::of(first, second).index()],
                    denom,
                    Some(match second {
                        SpinZ::Down => cond_ref.down,
                        SpinZ::Up => cond_ref.up,
                    }),
                ));
            }
        }

        let same = tally.cells[PairCell::DownDown.index()] + tally.cells[PairCell::UpUp.index()];
        let p_same = same as f64 / accepted as f64;
        let estimate = 2.0 * p_same - 1.0;
        let reference = qm_correlation(angle);
        let ref_same = joint_ref.down_down + joint_ref.up_up;
        let z = z_ratio(
            estimate - reference,
            correlation_std_error(ref_same, accepted),
        );
        rows.push(Comparison {
            quantity: Quantity::Correlation,
            count: same,
            trials: accepted,
            estimate,
            std_error: correlation_std_error(p_same, accepted),
            reference: Some(reference),
            z: Some(z),
            flagged: is_flagged(z),
        });
    }

    Ok(SingletReport {
        angle: angle.radians(),
        rule,
        delay_policy: policy,
        first_particle,
        seed,
        trials,
        accepted,
        rejected: tally.rejected,
        rows,
    })
}

/// Four pair ensembles combined into the CHSH statistic
/// S = E(a,b) - E(a,b') + E(a',b) + E(a',b').
///
/// Each pairing runs at its relative angle with an independent derived
/// seed; the quoted error adds the four correlation errors in quadrature.
pub fn run_chsh(
    settings: ChshSettings,
    rule: OutcomeRule,
    policy: DelayPolicy,
    first_particle: u8,
    seed: u64,
    trials: u64,
) -> Result<ChshReport, ConfigError> {
    let mut terms = Vec::new();
    let mut s_value = 0.0;
    let mut variance = 0.0;
    for (i, (first, second, sign)) in settings.terms().into_iter().enumerate() {
        let report = run_singlet_ensemble(
            Axis(second.radians() - first.radians()),
            rule,
            policy,
            first_particle,
            derive_seed(seed, i as u64),
            trials,
        )?;
        let correlation = report.row(Quantity::Correlation);
        let estimate = correlation.map(|r| r.estimate).unwrap_or(f64::NAN);
        let std_error = correlation.map(|r| r.std_error).unwrap_or(f64::NAN);
        s_value += sign * estimate;
        variance += std_error * std_error;
        terms.push(ChshTerm {
            first_angle: first.radians(),
            second_angle: second.radians(),
            sign,
            report,
        });
    }

    let s_std_error = variance.sqrt();
    let s_reference = qm_chsh(settings);
    let z = z_ratio(s_value - s_reference, s_std_error);
    Ok(ChshReport {
        settings,
        rule,
        delay_policy: policy,
        seed,
        trials_per_term: trials,
        terms,
        s_value,
        s_std_error,
        s_reference,
        z,
        flagged: is_flagged(z),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, PI};

    #[test]
    fn single_spin_matches_the_unbiased_reference() {
        let report = run_single_spin(DelayPolicy::UniformParity, 11, 20_000).unwrap();
        assert_eq!(report.rows.len(), 6);
        for row in &report.rows {
            assert!(!row.flagged, "{} deviates: {:?}", row.quantity, row.z);
        }
        let down = report.row(Quantity::Outcome(SpinZ::Down)).unwrap();
        let up = report.row(Quantity::Outcome(SpinZ::Up)).unwrap();
        assert_eq!(down.count + up.count, 20_000);
    }

    #[test]
    fn fixed_parities_make_the_readout_deterministic() {
        let report = run_single_spin(DelayPolicy::FixedOdd, 3, 5_000).unwrap();
        let row = report
            .row(Quantity::OutcomeGivenStart {
                outcome: SpinZ::Up,
                start: SpinZ::Down,
            })
            .unwrap();
        assert_eq!(row.estimate, 1.0);
        assert_eq!(row.reference, Some(1.0));
        assert_eq!(row.z, Some(0.0));
    }

    #[test]
    fn zz_readout_never_produces_equal_labels() {
        for rule in [OutcomeRule::PaperEnsemble, OutcomeRule::BornProjection] {
            let mut config = ExperimentConfig::new(ExperimentKind::SingletZz);
            config.trials = 10_000;
            config.rule = rule;
            let report = match run_experiment(&config).unwrap() {
                ExperimentReport::SingletZz(r) => r,
                other => panic!("wrong report variant: {other:?}"),
            };
            assert_eq!(report.rejected, 0);
            assert_eq!(report.accepted, 10_000);
            for cell in [PairCell::DownDown, PairCell::UpUp] {
                assert_eq!(report.row(Quantity::Joint(cell)).unwrap().count, 0);
            }
            let cond = report
                .row(Quantity::SecondGivenFirst {
                    second: SpinZ::Up,
                    first: SpinZ::Down,
                })
                .unwrap();
            assert_eq!(cond.estimate, 1.0);
        }
    }

    #[test]
    fn ensemble_rule_recovers_the_half_angle_conditional() {
        let report = run_singlet_ensemble(
            Axis(FRAC_PI_3),
            OutcomeRule::PaperEnsemble,
            DelayPolicy::UniformParity,
            1,
            5,
            40_000,
        )
        .unwrap();
        for row in &report.rows {
            assert!(!row.flagged, "{} deviates: {:?}", row.quantity, row.z);
        }
        let acceptance = report.row(Quantity::Acceptance).unwrap();
        assert_eq!(acceptance.reference, Some(0.5));
        let correlation = report.row(Quantity::Correlation).unwrap();
        assert!((correlation.reference.unwrap() + 0.5).abs() < 1e-15);
        assert!((correlation.estimate + 0.5).abs() < 0.02);
    }

    #[test]
    fn projection_rule_washes_the_angle_dependence_out() {
        let report = run_singlet_ensemble(
            Axis(0.0),
            OutcomeRule::BornProjection,
            DelayPolicy::UniformParity,
            1,
            6,
            40_000,
        )
        .unwrap();
        assert_eq!(report.rejected, 0);
        let cond = report
            .row(Quantity::SecondGivenFirst {
                second: SpinZ::Up,
                first: SpinZ::Down,
            })
            .unwrap();
        // The sharp reference leaves no spread, so missing it at all is
        // infinitely significant.
        assert!((cond.estimate - 0.5).abs() < 0.02);
        assert_eq!(cond.reference, Some(1.0));
        assert_eq!(cond.z, Some(f64::NEG_INFINITY));
        assert!(cond.flagged);
    }

    #[test]
    fn measuring_the_second_member_first_swaps_nothing_observable() {
        let first = run_singlet_ensemble(
            Axis(FRAC_PI_3),
            OutcomeRule::PaperEnsemble,
            DelayPolicy::UniformParity,
            1,
            9,
            30_000,
        )
        .unwrap();
        let second = run_singlet_ensemble(
            Axis(FRAC_PI_3),
            OutcomeRule::PaperEnsemble,
            DelayPolicy::UniformParity,
            2,
            9,
            30_000,
        )
        .unwrap();
        for report in [&first, &second] {
            for row in &report.rows {
                assert!(!row.flagged, "{} deviates: {:?}", row.quantity, row.z);
            }
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let run = || {
            run_singlet_ensemble(
                Axis(1.1),
                OutcomeRule::PaperEnsemble,
                DelayPolicy::UniformParity,
                1,
                99,
                15_000,
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn equal_chsh_settings_pin_the_classical_corner_exactly() {
        let axis = Axis(0.9);
        let settings = ChshSettings {
            a: axis,
            a_prime: axis,
            b: axis,
            b_prime: axis,
        };
        let report = run_chsh(
            settings,
            OutcomeRule::PaperEnsemble,
            DelayPolicy::UniformParity,
            1,
            4,
            2_000,
        )
        .unwrap();
        assert_eq!(report.s_value, -2.0);
        assert_eq!(report.s_std_error, 0.0);
        assert_eq!(report.z, 0.0);
        assert!(!report.flagged);
    }

    #[test]
    fn canonical_chsh_tracks_the_reference_extreme() {
        let report = run_chsh(
            ChshSettings::canonical(),
            OutcomeRule::PaperEnsemble,
            DelayPolicy::UniformParity,
            1,
            12,
            20_000,
        )
        .unwrap();
        assert!((report.s_reference + 2.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(!report.flagged, "S = {} z = {}", report.s_value, report.z);
    }

    #[test]
    fn validation_rejects_malformed_configurations() {
        let mut config = ExperimentConfig::new(ExperimentKind::SingleSpin);
        config.trials = 0;
        assert_eq!(config.validate(), Err(ConfigError::ZeroTrials));

        let mut config = ExperimentConfig::new(ExperimentKind::SingleSpin);
        config.first_particle = 3;
        assert_eq!(config.validate(), Err(ConfigError::FirstParticle(3)));

        let mut config = ExperimentConfig::new(ExperimentKind::SingletAngleSweep);
        config.angles = vec![0.5, f64::NAN];
        assert!(matches!(
            config.validate(),
            Err(ConfigError::NonFiniteAngle(_))
        ));

        let mut config = ExperimentConfig::new(ExperimentKind::Chsh);
        config.angles = vec![0.0, 1.0];
        assert_eq!(config.validate(), Err(ConfigError::ChshAngles(2)));

        let mut config = ExperimentConfig::new(ExperimentKind::SingletZz);
        config.angles = vec![PI];
        assert!(matches!(
            config.validate(),
            Err(ConfigError::UnexpectedAngles { .. })
        ));
    }

    #[test]
    fn kind_and_policy_labels_round_trip() {
        for kind in [
            ExperimentKind::SingleSpin,
            ExperimentKind::SingletZz,
            ExperimentKind::SingletAngleSweep,
            ExperimentKind::Chsh,
        ] {
            assert_eq!(kind.to_string().parse::<ExperimentKind>().unwrap(), kind);
        }
        for policy in [
            DelayPolicy::UniformParity,
            DelayPolicy::FixedEven,
            DelayPolicy::FixedOdd,
        ] {
            assert_eq!(policy.to_string().parse::<DelayPolicy>().unwrap(), policy);
        }
        assert!("sometime".parse::<DelayPolicy>().is_err());
    }

    #[test]
    fn sweep_uses_the_default_grid_when_no_angles_are_given() {
        let mut config = ExperimentConfig::new(ExperimentKind::SingletAngleSweep);
        config.trials = 200;
        let report = match run_experiment(&config).unwrap() {
            ExperimentReport::SingletAngleSweep(r) => r,
            other => panic!("wrong report variant: {other:?}"),
        };
        assert_eq!(report.legs.len(), ANGLE_GRID.len());
        let seeds: std::collections::HashSet<u64> = report.legs.iter().map(|l| l.seed).collect();
        assert_eq!(seeds.len(), ANGLE_GRID.len());
    }
}
