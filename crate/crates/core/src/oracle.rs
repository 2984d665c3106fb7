//! Closed-form reference statistics from standard quantum mechanics.
//!
//! Everything here is textbook algebra evaluated directly, with no tick
//! grid, no sampling, and no code shared with the simulation modules; the
//! harness compares Monte Carlo estimates against these values.

use serde::Serialize;

use crate::singlet::PairCell;
use crate::spin::{Axis, SpinZ};

/// Outcome probabilities for a single z measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinDistribution {
    pub down: f64,
    pub up: f64,
}

impl SpinDistribution {
    pub fn of(self, s: SpinZ) -> f64 {
        match s {
            SpinZ::Down => self.down,
            SpinZ::Up => self.up,
        }
    }
}

/// Joint outcome probabilities for a pair of analyzers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointDistribution {
    pub down_down: f64,
    pub down_up: f64,
    pub up_down: f64,
    pub up_up: f64,
}

impl JointDistribution {
    pub fn cell(self, cell: PairCell) -> f64 {
        match cell {
            PairCell::DownDown => self.down_down,
            PairCell::DownUp => self.down_up,
            PairCell::UpDown => self.up_down,
            PairCell::UpUp => self.up_up,
        }
    }

    pub fn marginal_first(self, first: SpinZ) -> f64 {
        match first {
            SpinZ::Down => self.down_down + self.down_up,
            SpinZ::Up => self.up_down + self.up_up,
        }
    }

    /// Conditional distribution of the second outcome given the first.
    pub fn second_given_first(self, first: SpinZ) -> SpinDistribution {
        let norm = self.marginal_first(first);
        match first {
            SpinZ::Down => SpinDistribution {
                down: self.down_down / norm,
                up: self.down_up / norm,
            },
            SpinZ::Up => SpinDistribution {
                down: self.up_down / norm,
                up: self.up_up / norm,
            },
        }
    }

    /// Expectation of the product of the two +/-1 outcomes, from the table.
    pub fn correlation(self) -> f64 {
        (self.down_down + self.up_up) - (self.down_up + self.up_down)
    }
}

/// The four analyzer settings entering the CHSH combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChshSettings {
    pub a: Axis,
    pub a_prime: Axis,
    pub b: Axis,
    pub b_prime: Axis,
}

impl ChshSettings {
    /// The canonical settings that maximize |S| for a singlet.
    pub fn canonical() -> ChshSettings {
        use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
        ChshSettings {
            a: Axis(0.0),
            a_prime: Axis(FRAC_PI_2),
            b: Axis(FRAC_PI_4),
            b_prime: Axis(3.0 * PI / 4.0),
        }
    }

    /// The four pairings with the sign each correlation contributes to S:
    /// S = E(a,b) - E(a,b') + E(a',b) + E(a',b').
    pub fn terms(self) -> [(Axis, Axis, f64); 4] {
        [
            (self.a, self.b, 1.0),
            (self.a, self.b_prime, -1.0),
            (self.a_prime, self.b, 1.0),
            (self.a_prime, self.b_prime, 1.0),
        ]
    }
}

/// z-measurement probabilities for a spin drawn from an unpolarized source.
pub fn qm_single_spin() -> SpinDistribution {
    SpinDistribution { down: 0.5, up: 0.5 }
}

/// Joint probabilities for singlet partners measured at a relative angle.
///
/// Opposite labels occur with probability cos^2(angle/2)/2 each and equal
/// labels with sin^2(angle/2)/2 each.
pub fn qm_singlet_joint(angle: Axis) -> JointDistribution {
    let half = angle.radians() / 2.0;
    let opposite = 0.5 * half.cos() * half.cos();
    let same = 0.5 * half.sin() * half.sin();
    JointDistribution {
        down_down: same,
        down_up: opposite,
        up_down: opposite,
        up_up: same,
    }
}

/// Singlet correlation at a relative angle, in closed form.
pub fn qm_correlation(angle: Axis) -> f64 {
    -angle.radians().cos()
}

/// CHSH combination for a singlet at the given settings.
///
/// Only relative angles enter, via [`qm_correlation`]. At the canonical
/// settings the value is -2*sqrt(2); the conventional quantum bound refers
/// to its magnitude.
pub fn qm_chsh(settings: ChshSettings) -> f64 {
    settings
        .terms()
        .iter()
        .map(|(first, second, sign)| sign * qm_correlation(Axis(second.0 - first.0)))
        .sum()
}
