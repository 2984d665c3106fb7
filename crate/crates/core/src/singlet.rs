//! Anti-correlated carrier pairs and the two second-measurement rules.
//!
//! A pair is two carriers sharing one reference tick with opposite start
//! labels. Writing the joint state over the four product labels, the
//! same-label coefficients carry a factor sin(phase)*cos(phase) that lands
//! on a node at every tick, so a simultaneous z readout of both carriers can
//! only ever produce opposite labels.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::spin::{rotate_to_axis, Amplitudes, Axis, SpinCarrier, SpinZ};
use crate::timebase::{phase_at_time, Delay, Parity, TimeStep};

/// Cosine of the doubled quarter-turn phase, indexed by elapsed ticks mod 4.
///
/// Doubling the phase keeps it on half-turn nodes, so the power-reduced
/// pair coefficients below are exact at every tick.
const COS_DOUBLE: [f64; 4] = [1.0, -1.0, 1.0, -1.0];

/// Joint outcome label for a pair readout, first particle listed first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairCell {
    DownDown,
    DownUp,
    UpDown,
    UpUp,
}

impl PairCell {
    pub const ALL: [PairCell; 4] = [
        PairCell::DownDown,
        PairCell::DownUp,
        PairCell::UpDown,
        PairCell::UpUp,
    ];

    pub fn of(first: SpinZ, second: SpinZ) -> PairCell {
        match (first, second) {
            (SpinZ::Down, SpinZ::Down) => PairCell::DownDown,
            (SpinZ::Down, SpinZ::Up) => PairCell::DownUp,
            (SpinZ::Up, SpinZ::Down) => PairCell::UpDown,
            (SpinZ::Up, SpinZ::Up) => PairCell::UpUp,
        }
    }

    pub fn index(self) -> usize {
        match self {
            PairCell::DownDown => 0,
            PairCell::DownUp => 1,
            PairCell::UpDown => 2,
            PairCell::UpUp => 3,
        }
    }

    /// True when both particles carry the same label.
    pub fn is_same_sign(self) -> bool {
        matches!(self, PairCell::DownDown | PairCell::UpUp)
    }
}

impl fmt::Display for PairCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairCell::DownDown => write!(f, "down-down"),
            PairCell::DownUp => write!(f, "down-up"),
            PairCell::UpDown => write!(f, "up-down"),
            PairCell::UpUp => write!(f, "up-up"),
        }
    }
}

/// Coefficients of the pair state on the four product labels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairCoefficients {
    pub down_down: f64,
    pub down_up: f64,
    pub up_down: f64,
    pub up_up: f64,
}

impl PairCoefficients {
    pub fn cell(self, cell: PairCell) -> f64 {
        match cell {
            PairCell::DownDown => self.down_down,
            PairCell::DownUp => self.down_up,
            PairCell::UpDown => self.up_down,
            PairCell::UpUp => self.up_up,
        }
    }

    /// Sum of squared coefficients; identically 1 because the coefficients
    /// are cos^2, sin^2 and two copies of sin*cos of one shared phase.
    pub fn norm_sqr(self) -> f64 {
        self.down_down * self.down_down
            + self.down_up * self.down_up
            + self.up_down * self.up_down
            + self.up_up * self.up_up
    }
}

/// Two carriers with opposite start labels sharing a reference tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingletPair {
    pub first_start: SpinZ,
    pub reference: TimeStep,
}

impl SingletPair {
    pub fn new(first_start: SpinZ, reference: TimeStep) -> SingletPair {
        SingletPair {
            first_start,
            reference,
        }
    }

    pub fn carriers(&self) -> (SpinCarrier, SpinCarrier) {
        (
            SpinCarrier::new(self.first_start, self.reference),
            SpinCarrier::new(self.first_start.flipped(), self.reference),
        )
    }

    /// The same pair with the particle numbering exchanged.
    ///
    /// Measuring particle 2 first is identical to measuring particle 1 first
    /// on the relabeled pair, so the harness only ever implements one order.
    pub fn relabeled(&self) -> SingletPair {
        SingletPair::new(self.first_start.flipped(), self.reference)
    }

    /// Product-label coefficients at an on-grid tick.
    ///
    /// Power-reduced form of the carrier product: the opposite-label weights
    /// are (1 +/- cos(2*phase))/2 and both same-label coefficients equal
    /// sin(2*phase)/2, which vanishes identically on the grid.
    pub fn coefficients_at(&self, tick: TimeStep) -> Result<PairCoefficients, SimError> {
        let (first, _) = self.carriers();
        let idx = (first.elapsed(tick)? % 4) as usize;
        Ok(self.coefficients_from_double(COS_DOUBLE[idx], 0.0))
    }

    /// Product-label coefficients a fractional number of ticks after the
    /// reference; used by traces and identity cross-checks.
    pub fn coefficients_after(&self, elapsed_ticks: f64) -> PairCoefficients {
        let doubled = 2.0 * phase_at_time(elapsed_ticks);
        self.coefficients_from_double(doubled.cos(), doubled.sin())
    }

    fn coefficients_from_double(&self, cos_double: f64, sin_double: f64) -> PairCoefficients {
        let start_label = 0.5 * (1.0 + cos_double);
        let swapped_label = 0.5 * (1.0 - cos_double);
        let cross = 0.5 * sin_double;
        match self.first_start {
            SpinZ::Down => PairCoefficients {
                down_up: start_label,
                up_down: swapped_label,
                down_down: cross,
                up_up: cross,
            },
            SpinZ::Up => PairCoefficients {
                up_down: start_label,
                down_up: swapped_label,
                down_down: cross,
                up_up: cross,
            },
        }
    }

    /// Deterministic simultaneous z readout of both carriers.
    pub fn measure_joint_z(&self, tick: TimeStep) -> Result<(SpinZ, SpinZ), SimError> {
        let (first, second) = self.carriers();
        Ok((first.measure_z(tick)?, second.measure_z(tick)?))
    }
}

/// How the second analyzer turns the partner it receives into an outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutcomeRule {
    /// Deterministic label from the delay parity; the ensemble weight is the
    /// overlap of that label's axis projector with the pre-delay state.
    PaperEnsemble,
    /// Deterministic evolution through the delay, then a Born split over the
    /// axis basis.
    BornProjection,
}

impl fmt::Display for OutcomeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutcomeRule::PaperEnsemble => write!(f, "paper-ensemble"),
            OutcomeRule::BornProjection => write!(f, "born-projection"),
        }
    }
}

impl FromStr for OutcomeRule {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper-ensemble" => Ok(OutcomeRule::PaperEnsemble),
            "born-projection" => Ok(OutcomeRule::BornProjection),
            _ => Err(SimError::UnknownLabel {
                what: "outcome rule",
                got: s.to_string(),
            }),
        }
    }
}

/// An axis-basis outcome label together with its ensemble weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedOutcome {
    pub outcome: SpinZ,
    pub weight: f64,
}

fn evolve_label(z: SpinZ, delay: Delay) -> SpinZ {
    match delay.parity() {
        Parity::Even => z,
        Parity::Odd => z.flipped(),
    }
}

/// Second measurement under [`OutcomeRule::PaperEnsemble`].
///
/// The outcome label is the z eigenstate the partner occupies after the
/// delay, read in the axis basis. Its weight is the squared overlap of that
/// axis label with the state the partner held when the pair was broken, so
/// an even delay weighs the outcome by cos^2(angle/2) and an odd delay by
/// sin^2(angle/2). Trials are kept with probability equal to the weight.
pub fn ensemble_outcome(partner_z: SpinZ, delay: Delay, axis: Axis) -> WeightedOutcome {
    let outcome = evolve_label(partner_z, delay);
    let weight = prob_of(rotate_to_axis(partner_z, axis), outcome);
    WeightedOutcome { outcome, weight }
}

/// Second measurement under [`OutcomeRule::BornProjection`].
///
/// The partner evolves deterministically through the delay and is then
/// projected onto the axis basis; the returned amplitudes give the Born
/// probabilities for the two outcome labels. Unlike [`ensemble_outcome`],
/// the overlap is taken with the post-delay state, so an odd delay flips
/// both the label and the weight together and the angle dependence cancels
/// once delays of both parities are mixed.
pub fn projection_amplitudes(partner_z: SpinZ, delay: Delay, axis: Axis) -> Amplitudes {
    rotate_to_axis(evolve_label(partner_z, delay), axis)
}

fn prob_of(amplitudes: Amplitudes, label: SpinZ) -> f64 {
    match label {
        SpinZ::Down => amplitudes.prob_down(),
        SpinZ::Up => amplitudes.prob_up(),
    }
}
