//! Binomial error bars and deviation gates for Monte Carlo estimates.
//!
//! All estimates produced by the harness are proportions (or linear maps of
//! proportions, like the +/-1 product correlation), so their sampling error
//! is the binomial standard error throughout.

/// Deviations beyond this many null standard errors are flagged.
///
/// Four standard errors keeps the false-flag rate per comparison near 6e-5,
/// so a full report over the angle grid stays quiet unless the model and
/// the reference genuinely disagree.
pub const Z_GATE: f64 = 4.0;

/// Binomial standard error of a proportion `p` estimated from `trials`
/// samples. `trials` must be at least 1.
pub fn std_error(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Standard error of a +/-1 product correlation estimated from `trials`
/// pairs, where `p_same` is the probability of an equal-label pair.
///
/// The estimate is 2*p_same - 1, so its error is twice the proportion's.
pub fn correlation_std_error(p_same: f64, trials: u64) -> f64 {
    2.0 * std_error(p_same, trials)
}

/// A deviation in units of a given spread.
///
/// Zero spread means the reference is sharp: a zero deviation scores 0 and
/// any other deviation is infinitely significant, signed like the
/// deviation.
pub fn z_ratio(deviation: f64, sigma: f64) -> f64 {
    if sigma == 0.0 {
        if deviation == 0.0 {
            0.0
        } else {
            f64::INFINITY.copysign(deviation)
        }
    } else {
        deviation / sigma
    }
}

/// Deviation of an estimate from a reference proportion, in units of the
/// standard error the reference itself predicts for `trials` samples.
pub fn z_score(estimate: f64, reference: f64, trials: u64) -> f64 {
    z_ratio(estimate - reference, std_error(reference, trials))
}

/// Gate check used by every comparison report.
pub fn is_flagged(z: f64) -> bool {
    z.abs() > Z_GATE
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn std_error_shrinks_with_the_sample_root() {
        assert_eq!(std_error(0.5, 100), 0.05);
        assert_eq!(std_error(0.5, 10_000), 0.005);
        assert_eq!(std_error(0.0, 100), 0.0);
    }

    #[test]
    fn z_score_counts_standard_errors() {
        assert_eq!(z_score(0.5, 0.5, 1000), 0.0);
        assert!((z_score(0.51, 0.5, 10_000) - 2.0).abs() < 1e-12);
        assert!((z_score(0.49, 0.5, 10_000) + 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_references_admit_no_spread() {
        assert_eq!(z_score(0.0, 0.0, 500), 0.0);
        assert_eq!(z_score(1.0, 1.0, 500), 0.0);
        assert_eq!(z_score(0.002, 0.0, 500), f64::INFINITY);
        assert_eq!(z_score(0.998, 1.0, 500), f64::NEG_INFINITY);
    }

    #[test]
    fn gate_is_strict_at_four() {
        assert!(!is_flagged(4.0));
        assert!(!is_flagged(-4.0));
        assert!(is_flagged(4.0001));
        assert!(is_flagged(f64::NEG_INFINITY));
    }

    #[test]
    fn correlation_error_doubles_the_proportion_error() {
        assert_eq!(correlation_std_error(0.5, 10_000), 0.01);
    }
}
