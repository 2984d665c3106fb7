//! A single spin-1/2 carrier oscillating on the tick grid.
//!
//! The carrier starts in a definite z eigenstate at its reference tick and
//! swaps eigenstates every tick. Between swaps the population oscillates
//! harmonically, so the z amplitudes after `n` ticks are (cos, sin) of the
//! quarter-turn phase for a down start and (sin, cos) for an up start.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::timebase::{phase_at_time, Parity, TimeStep};

/// Cosine of the quarter-turn phase, indexed by elapsed ticks mod 4.
///
/// At integer ticks the oscillation sits exactly on a node or antinode, so
/// the amplitudes are stored as exact constants rather than computed through
/// `f64::cos`, which would leave residues of order 1e-16 at the nodes.
const COS_QUARTER: [f64; 4] = [1.0, 0.0, -1.0, 0.0];
const SIN_QUARTER: [f64; 4] = [0.0, 1.0, 0.0, -1.0];

/// One of the two z eigenstates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpinZ {
    Down,
    Up,
}

impl SpinZ {
    pub fn flipped(self) -> SpinZ {
        match self {
            SpinZ::Down => SpinZ::Up,
            SpinZ::Up => SpinZ::Down,
        }
    }

    pub fn index(self) -> usize {
        match self {
            SpinZ::Down => 0,
            SpinZ::Up => 1,
        }
    }
}

impl fmt::Display for SpinZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpinZ::Down => write!(f, "down"),
            SpinZ::Up => write!(f, "up"),
        }
    }
}

impl FromStr for SpinZ {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "down" => Ok(SpinZ::Down),
            "up" => Ok(SpinZ::Up),
            _ => Err(SimError::UnknownLabel {
                what: "spin state",
                got: s.to_string(),
            }),
        }
    }
}

/// A measurement direction in the plane, as the angle from the z axis in
/// radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Axis(pub f64);

impl Axis {
    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Real amplitudes on the (down, up) labels of some basis.
///
/// The basis is the z basis when produced by [`SpinCarrier::amplitudes_at`]
/// and the rotated basis when produced by [`rotate_to_axis`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Amplitudes {
    pub down: f64,
    pub up: f64,
}

impl Amplitudes {
    pub fn prob_down(self) -> f64 {
        self.down * self.down
    }

    pub fn prob_up(self) -> f64 {
        self.up * self.up
    }

    pub fn norm_sqr(self) -> f64 {
        self.prob_down() + self.prob_up()
    }
}

/// A carrier created in `start` at tick `reference`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinCarrier {
    pub start: SpinZ,
    pub reference: TimeStep,
}

impl SpinCarrier {
    pub fn new(start: SpinZ, reference: TimeStep) -> SpinCarrier {
        SpinCarrier { start, reference }
    }

    /// Ticks elapsed since the reference, rejecting earlier ticks.
    pub fn elapsed(&self, tick: TimeStep) -> Result<u64, SimError> {
        tick.0
            .checked_sub(self.reference.0)
            .ok_or(SimError::TickBeforeReference {
                tick: tick.0,
                reference: self.reference.0,
            })
    }

    /// z-basis amplitudes at an on-grid tick, from the exact node tables.
    pub fn amplitudes_at(&self, tick: TimeStep) -> Result<Amplitudes, SimError> {
        let idx = (self.elapsed(tick)? % 4) as usize;
        Ok(self.amplitudes_from_trig(COS_QUARTER[idx], SIN_QUARTER[idx]))
    }

    /// z-basis amplitudes a fractional number of ticks after the reference.
    ///
    /// Agrees with [`amplitudes_at`](Self::amplitudes_at) at integer ticks up
    /// to `f64::cos` rounding; used only for traces and cross-checks.
    pub fn amplitudes_after(&self, elapsed_ticks: f64) -> Amplitudes {
        let phase = phase_at_time(elapsed_ticks);
        self.amplitudes_from_trig(phase.cos(), phase.sin())
    }

    fn amplitudes_from_trig(&self, cos: f64, sin: f64) -> Amplitudes {
        match self.start {
            SpinZ::Down => Amplitudes { down: cos, up: sin },
            SpinZ::Up => Amplitudes { down: sin, up: cos },
        }
    }

    /// Deterministic z measurement outcome at an on-grid tick.
    ///
    /// The carrier occupies its start eigenstate after an even number of
    /// ticks and the flipped one after an odd number; a z measurement simply
    /// reads that off.
    pub fn measure_z(&self, tick: TimeStep) -> Result<SpinZ, SimError> {
        Ok(match Parity::of_ticks(self.elapsed(tick)?) {
            Parity::Even => self.start,
            Parity::Odd => self.start.flipped(),
        })
    }
}

/// Amplitudes of a z eigenstate in the basis rotated to `axis`.
///
/// `prob_down` of the result is cos^2(angle/2) when the state is down and
/// sin^2(angle/2) when it is up, matching the overlap of spin-1/2 projectors
/// at a relative angle.
pub fn rotate_to_axis(state: SpinZ, axis: Axis) -> Amplitudes {
    let half = axis.0 / 2.0;
    match state {
        SpinZ::Down => Amplitudes {
            down: half.cos(),
            up: half.sin(),
        },
        SpinZ::Up => Amplitudes {
            down: half.sin(),
            up: half.cos(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn down_start_cycles_through_exact_nodes() {
        let c = SpinCarrier::new(SpinZ::Down, TimeStep(0));
        let expect = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for (n, (down, up)) in expect.iter().enumerate() {
            let a = c.amplitudes_at(TimeStep(n as u64)).unwrap();
            assert_eq!((a.down, a.up), (*down, *up));
        }
    }

    #[test]
    fn up_start_swaps_the_roles() {
        let c = SpinCarrier::new(SpinZ::Up, TimeStep(0));
        let a = c.amplitudes_at(TimeStep(0)).unwrap();
        assert_eq!((a.down, a.up), (0.0, 1.0));
        let a = c.amplitudes_at(TimeStep(1)).unwrap();
        assert_eq!((a.down, a.up), (1.0, 0.0));
    }

    #[test]
    fn grid_amplitudes_are_normalized_exactly() {
        let c = SpinCarrier::new(SpinZ::Down, TimeStep(2));
        for n in 2..1000u64 {
            assert_eq!(c.amplitudes_at(TimeStep(n)).unwrap().norm_sqr(), 1.0);
        }
    }

    #[test]
    fn measurement_reads_parity_of_elapsed_ticks() {
        let down = SpinCarrier::new(SpinZ::Down, TimeStep(0));
        let up = SpinCarrier::new(SpinZ::Up, TimeStep(0));
        assert_eq!(down.measure_z(TimeStep(0)).unwrap(), SpinZ::Down);
        assert_eq!(down.measure_z(TimeStep(1)).unwrap(), SpinZ::Up);
        assert_eq!(up.measure_z(TimeStep(2)).unwrap(), SpinZ::Up);
        assert_eq!(up.measure_z(TimeStep(3)).unwrap(), SpinZ::Down);
    }

    #[test]
    fn elapsed_is_relative_to_the_reference() {
        let c = SpinCarrier::new(SpinZ::Down, TimeStep(6));
        assert_eq!(c.measure_z(TimeStep(7)).unwrap(), SpinZ::Up);
        assert_eq!(
            c.measure_z(TimeStep(5)),
            Err(SimError::TickBeforeReference {
                tick: 5,
                reference: 6
            })
        );
    }

    #[test]
    fn continuous_amplitudes_agree_with_the_tables() {
        let c = SpinCarrier::new(SpinZ::Up, TimeStep(0));
        for n in 0..64u64 {
            let grid = c.amplitudes_at(TimeStep(n)).unwrap();
            let cont = c.amplitudes_after(n as f64);
            assert!((grid.down - cont.down).abs() < 1e-12);
            assert!((grid.up - cont.up).abs() < 1e-12);
        }
    }

    #[test]
    fn rotation_reproduces_half_angle_overlaps() {
        let a = rotate_to_axis(SpinZ::Down, Axis(0.0));
        assert_eq!((a.down, a.up), (1.0, 0.0));

        let a = rotate_to_axis(SpinZ::Down, Axis(PI / 3.0));
        assert!((a.prob_down() - 0.75).abs() < 1e-15);
        assert!((a.prob_up() - 0.25).abs() < 1e-15);

        let a = rotate_to_axis(SpinZ::Up, Axis(PI / 3.0));
        assert!((a.prob_down() - 0.25).abs() < 1e-15);
        assert!((a.prob_up() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn spin_labels_round_trip() {
        for s in [SpinZ::Down, SpinZ::Up] {
            assert_eq!(s.to_string().parse::<SpinZ>().unwrap(), s);
        }
        assert!("sideways".parse::<SpinZ>().is_err());
    }
}
