//! The discrete tick grid: tick indices, delays, phase, and parity.
//!
//! Every observable in this crate is driven by an integer tick count on a
//! uniform grid. The physical step size never enters any formula: phases
//! depend only on `n mod 4` and outcomes only on `n mod 2`, so no step
//! constant is stored anywhere.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::ops::Add;

use serde::Serialize;

/// Oscillation phase per quarter period, indexed by `n mod 4`.
///
/// Keeping the four values in a table makes the four-tick periodicity exact
/// in floating point: `phase(n + 4)` is bit-identical to `phase(n)`.
const QUARTER_PHASE: [f64; 4] = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2];

/// One point on the discrete tick grid.
///
/// `TimeStep(n)` corresponds to the continuous time `n` grid steps after the
/// origin; non-negativity is enforced by the unsigned representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct TimeStep(pub u64);

/// A non-negative tick interval between two measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Delay(pub u64);

/// Evenness or oddness of an elapsed tick count, the sole input to every
/// deterministic measurement rule in the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    Even,
    Odd,
}

impl TimeStep {
    /// Oscillation phase at this tick, reduced modulo one full turn.
    ///
    /// The phase advances by a quarter turn per tick, so the period is four
    /// ticks and the reduction happens on the integer index before any float
    /// arithmetic.
    pub fn phase(self) -> f64 {
        QUARTER_PHASE[(self.0 % 4) as usize]
    }

    /// Parity of this tick index.
    pub fn parity(self) -> Parity {
        Parity::of_ticks(self.0)
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl Delay {
    pub fn parity(self) -> Parity {
        Parity::of_ticks(self.0)
    }

    pub fn ticks(self) -> u64 {
        self.0
    }
}

impl Parity {
    pub fn of_ticks(n: u64) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl Add<Delay> for TimeStep {
    type Output = TimeStep;

    fn add(self, rhs: Delay) -> TimeStep {
        TimeStep(self.0 + rhs.0)
    }
}

impl fmt::Display for TimeStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

/// Phase at a continuous (possibly fractional) tick time.
///
/// Off-grid times never occur in the protocol; this exists for traces and
/// for cross-checking the on-grid tables against the underlying harmonic.
pub fn phase_at_time(ticks: f64) -> f64 {
    FRAC_PI_2 * ticks.rem_euclid(4.0)
}
