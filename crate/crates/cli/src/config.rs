//! Flat key-value experiment files.
//!
//! One `key = value` pair per line; blank lines and `#` comments are
//! ignored. Keys: `kind` (required), `trials`, `seed`, `angles`
//! (comma-separated radians, or degrees with a `deg` suffix), `rule`,
//! `delay_policy`, `first_particle`. Unknown keys are errors so typos
//! cannot silently fall back to defaults.

use std::fmt::Write as _;

use chronospin_core::{ExperimentConfig, ExperimentKind};

/// A config file the parser cannot accept, pointing at the offending key.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: expected 'key = value', got '{text}'")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key '{key}' given more than once")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: invalid value '{value}' for '{key}': {reason}")]
    BadValue {
        line: usize,
        key: String,
        value: String,
        reason: String,
    },
    #[error("missing required key 'kind'")]
    MissingKind,
}

fn bad(line: usize, key: &str, value: &str, reason: impl ToString) -> ParseError {
    ParseError::BadValue {
        line,
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.to_string(),
    }
}

/// One angle: radians by default, degrees with a `deg` suffix.
pub fn angle_value(s: &str) -> Result<f64, String> {
    let trimmed = s.trim();
    let (number, degrees) = match trimmed.strip_suffix("deg") {
        Some(head) => (head.trim_end(), true),
        None => (trimmed, false),
    };
    let parsed: f64 = number
        .parse()
        .map_err(|e| format!("invalid angle '{trimmed}': {e}"))?;
    Ok(if degrees { parsed.to_radians() } else { parsed })
}

fn parse_angle(line: usize, value: &str) -> Result<f64, ParseError> {
    angle_value(value).map_err(|reason| bad(line, "angles", value.trim(), reason))
}

/// Parse a config file's text.
pub fn parse(text: &str) -> Result<ExperimentConfig, ParseError> {
    let mut kind = None;
    let mut config = ExperimentConfig::new(ExperimentKind::SingleSpin);
    let mut seen = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ParseError::Malformed {
                line,
                text: content.to_string(),
            })?;
        let key = key.trim();
        let value = value.trim();
        if seen.contains(&key.to_string()) {
            return Err(ParseError::DuplicateKey {
                line,
                key: key.to_string(),
            });
        }
        seen.push(key.to_string());

        match key {
            "kind" => kind = Some(value.parse().map_err(|e| bad(line, key, value, e))?),
            "trials" => {
                config.trials = value.parse().map_err(|e| bad(line, key, value, e))?;
            }
            "seed" => config.seed = value.parse().map_err(|e| bad(line, key, value, e))?,
            "angles" => {
                config.angles = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse_angle(line, s))
                    .collect::<Result<_, _>>()?;
            }
            "rule" => config.rule = value.parse().map_err(|e| bad(line, key, value, e))?,
            "delay_policy" => {
                config.delay_policy = value.parse().map_err(|e| bad(line, key, value, e))?;
            }
            "first_particle" => {
                config.first_particle = value.parse().map_err(|e| bad(line, key, value, e))?;
            }
            _ => {
                return Err(ParseError::UnknownKey {
                    line,
                    key: key.to_string(),
                })
            }
        }
    }

    config.kind = kind.ok_or(ParseError::MissingKind)?;
    Ok(config)
}

/// Canonical key-value text for a configuration.
///
/// Angles are printed with `{}` so every f64 round-trips exactly:
/// `parse(&emit(&c))` reproduces `c` field for field.
pub fn emit(config: &ExperimentConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kind = {}", config.kind);
    let _ = writeln!(out, "trials = {}", config.trials);
    let _ = writeln!(out, "seed = {}", config.seed);
    if !config.angles.is_empty() {
        let angles: Vec<String> = config.angles.iter().map(|a| format!("{a}")).collect();
        let _ = writeln!(out, "angles = {}", angles.join(", "));
    }
    let _ = writeln!(out, "rule = {}", config.rule);
    let _ = writeln!(out, "delay_policy = {}", config.delay_policy);
    let _ = writeln!(out, "first_particle = {}", config.first_particle);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use chronospin_core::{DelayPolicy, OutcomeRule, DEFAULT_TRIALS};
    use std::f64::consts::PI;

    #[test]
    fn minimal_file_gets_defaults() {
        let config = parse("kind = single-spin\n").unwrap();
        assert_eq!(config.kind, ExperimentKind::SingleSpin);
        assert_eq!(config.trials, DEFAULT_TRIALS);
        assert_eq!(config.seed, 0);
        assert_eq!(config.rule, OutcomeRule::PaperEnsemble);
        assert_eq!(config.delay_policy, DelayPolicy::UniformParity);
        assert_eq!(config.first_particle, 1);
        assert!(config.angles.is_empty());
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "\n# pair run\nkind = singlet-zz # simultaneous readout\n\ntrials = 500\n";
        let config = parse(text).unwrap();
        assert_eq!(config.kind, ExperimentKind::SingletZz);
        assert_eq!(config.trials, 500);
    }

    #[test]
    fn angles_accept_radians_and_degrees() {
        let config =
            parse("kind = singlet-angle-sweep\nangles = 0, 0.5, 90deg, 180 deg\n").unwrap();
        assert_eq!(config.angles.len(), 4);
        assert_eq!(config.angles[0], 0.0);
        assert_eq!(config.angles[1], 0.5);
        assert!((config.angles[2] - PI / 2.0).abs() < 1e-15);
        assert!((config.angles[3] - PI).abs() < 1e-15);
    }

    #[test]
    fn errors_name_the_offending_key() {
        let err = parse("kind = single-spin\ntrials = many\n").unwrap_err();
        assert!(err.to_string().contains("'trials'"), "{err}");

        let err = parse("kind = single-spin\nspeed = 3\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownKey {
                line: 2,
                key: "speed".into()
            }
        );

        let err = parse("trials = 10\n").unwrap_err();
        assert_eq!(err, ParseError::MissingKind);

        let err = parse("kind = single-spin\nkind = chsh\n").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateKey { line: 2, .. }));

        let err = parse("kind\n").unwrap_err();
        assert!(matches!(err, ParseError::Malformed { line: 1, .. }));

        let err = parse("kind = sideways\n").unwrap_err();
        assert!(err.to_string().contains("experiment kind"), "{err}");
    }

    #[test]
    fn emitted_text_round_trips_exactly() {
        let mut config = ExperimentConfig::new(ExperimentKind::Chsh);
        config.trials = 123_456;
        config.seed = 987;
        config.angles = vec![0.0, PI / 7.0, 1e-9, 2.0 * PI / 3.0];
        config.rule = OutcomeRule::BornProjection;
        config.delay_policy = DelayPolicy::FixedOdd;
        config.first_particle = 2;
        assert_eq!(parse(&emit(&config)).unwrap(), config);

        let plain = ExperimentConfig::new(ExperimentKind::SingleSpin);
        assert_eq!(parse(&emit(&plain)).unwrap(), plain);
    }
}
