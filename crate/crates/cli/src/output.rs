//! Report serialization: deterministic CSV, JSON, stdout tables, and the
//! run manifest.

use std::fmt::Write as _;

use chronospin_core::spin::SpinCarrier;
use chronospin_core::timebase::TimeStep;
use chronospin_core::{
    ChshReport, ExperimentKind, ExperimentReport, SingleSpinReport, SingletReport, SpinZ,
};
use serde::Serialize;

/// A float as exactly 12 significant digits.
///
/// Plain decimal notation while the exponent stays in a readable band,
/// scientific outside it. The output is a pure function of the bits, which
/// is what makes repeated CSV emissions byte-identical.
pub fn fmt_sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }

    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("LowerExp always emits an e");
    let exp: i32 = exp.parse().expect("LowerExp exponent is an integer");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();

    if (0..12).contains(&exp) {
        let split = (exp + 1) as usize;
        format!("{sign}{}.{}", &digits[..split], &digits[split..])
    } else if (-4..0).contains(&exp) {
        let zeros = "0".repeat((-exp - 1) as usize);
        format!("{sign}0.{zeros}{digits}")
    } else {
        format!("{sign}{mantissa}e{exp}")
    }
}

fn csv_cell_f64(x: Option<f64>) -> String {
    x.map(fmt_sig12).unwrap_or_default()
}

fn csv_row(
    out: &mut String,
    experiment: ExperimentKind,
    angle: Option<f64>,
    row: &chronospin_core::Comparison,
) {
    let _ = writeln!(
        out,
        "{experiment},{},{},{},{},{},{},{}",
        csv_cell_f64(angle),
        row.quantity,
        row.count,
        fmt_sig12(row.estimate),
        fmt_sig12(row.std_error),
        csv_cell_f64(row.reference),
        csv_cell_f64(row.z),
    );
}

fn csv_singlet_rows(out: &mut String, experiment: ExperimentKind, report: &SingletReport) {
    for row in &report.rows {
        csv_row(out, experiment, Some(report.angle), row);
    }
}

/// The full report as CSV with a fixed header and row order.
pub fn to_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("experiment,angle,cell,count,frequency,stderr,oracle,z_score\n");
    match report {
        ExperimentReport::SingleSpin(r) => {
            for row in &r.rows {
                csv_row(&mut out, ExperimentKind::SingleSpin, None, row);
            }
        }
        ExperimentReport::SingletZz(r) => {
            csv_singlet_rows(&mut out, ExperimentKind::SingletZz, r);
        }
        ExperimentReport::SingletAngleSweep(sweep) => {
            for leg in &sweep.legs {
                csv_singlet_rows(&mut out, ExperimentKind::SingletAngleSweep, leg);
            }
        }
        ExperimentReport::Chsh(r) => {
            // Summary line: the count column is empty because S is not a
            // tally of anything.
            let _ = writeln!(
                out,
                "{},,S,,{},{},{},{}",
                ExperimentKind::Chsh,
                fmt_sig12(r.s_value),
                fmt_sig12(r.s_std_error),
                fmt_sig12(r.s_reference),
                fmt_sig12(r.z),
            );
            for term in &r.terms {
                csv_singlet_rows(&mut out, ExperimentKind::Chsh, &term.report);
            }
        }
    }
    out
}

/// The full report as pretty-printed JSON.
pub fn to_json(report: &ExperimentReport) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("reports contain no map keys");
    text.push('\n');
    text
}

/// Sidecar metadata for a run directory.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub timestamp_unix: u64,
    pub config_echo: String,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("manifest is a plain struct");
        text.push('\n');
        text
    }
}

fn text_f64(x: Option<f64>) -> String {
    match x {
        Some(v) => fmt_sig12(v),
        None => "-".to_string(),
    }
}

fn text_rows(out: &mut String, rows: &[chronospin_core::Comparison]) {
    let _ = writeln!(
        out,
        "  {:<28} {:>10} {:>16} {:>14} {:>16} {:>10}",
        "quantity", "count", "estimate", "stderr", "reference", "z"
    );
    for row in rows {
        let _ = writeln!(
            out,
            "  {:<28} {:>10} {:>16} {:>14} {:>16} {:>10}{}",
            row.quantity.to_string(),
            row.count,
            fmt_sig12(row.estimate),
            format!("{:.2e}", row.std_error),
            text_f64(row.reference),
            row.z.map(|z| format!("{z:+.2}")).unwrap_or("-".into()),
            if row.flagged { "  FLAG" } else { "" },
        );
    }
}

fn text_singlet(out: &mut String, heading: &str, report: &SingletReport) {
    let _ = writeln!(
        out,
        "{heading}: angle={} rule={} delay={} first={} seed={}",
        fmt_sig12(report.angle),
        report.rule,
        report.delay_policy,
        report.first_particle,
        report.seed,
    );
    let _ = writeln!(
        out,
        "  accepted {}/{} trials (rejected {})",
        report.accepted, report.trials, report.rejected
    );
    text_rows(out, &report.rows);
}

fn text_single_spin(out: &mut String, report: &SingleSpinReport) {
    let _ = writeln!(
        out,
        "single-spin: trials={} delay={} seed={}",
        report.trials, report.delay_policy, report.seed
    );
    text_rows(out, &report.rows);
}

fn text_chsh(out: &mut String, report: &ChshReport) {
    let _ = writeln!(
        out,
        "chsh: rule={} delay={} trials-per-term={} seed={}",
        report.rule, report.delay_policy, report.trials_per_term, report.seed
    );
    for term in &report.terms {
        let sign = if term.sign >= 0.0 { '+' } else { '-' };
        text_singlet(
            out,
            &format!(
                "{sign}E(first={}, second={})",
                fmt_sig12(term.first_angle),
                fmt_sig12(term.second_angle)
            ),
            &term.report,
        );
    }
    let four_sigma = 4.0 * report.s_std_error;
    let _ = writeln!(
        out,
        "S = {} +/- {:.3e} (reference {}, z={:+.2}{})",
        fmt_sig12(report.s_value),
        report.s_std_error,
        fmt_sig12(report.s_reference),
        report.z,
        if report.flagged { ", FLAG" } else { "" },
    );
    let _ = writeln!(
        out,
        "exploratory 4-sigma interval: [{}, {}]",
        fmt_sig12(report.s_value - four_sigma),
        fmt_sig12(report.s_value + four_sigma),
    );
}

/// Human-readable summary of any report.
pub fn render_text(report: &ExperimentReport) -> String {
    let mut out = String::new();
    match report {
        ExperimentReport::SingleSpin(r) => text_single_spin(&mut out, r),
        ExperimentReport::SingletZz(r) => text_singlet(&mut out, "singlet-zz", r),
        ExperimentReport::SingletAngleSweep(sweep) => {
            for leg in &sweep.legs {
                text_singlet(&mut out, "singlet-angle-sweep", leg);
            }
        }
        ExperimentReport::Chsh(r) => text_chsh(&mut out, r),
    }
    out
}

/// Stdout table for a carrier trace: exact grid probabilities per tick.
pub fn trace_text(start: SpinZ, ticks: u64) -> String {
    let carrier = SpinCarrier::new(start, TimeStep(0));
    let mut out = format!("trace: start={start} ticks={ticks}\n");
    let _ = writeln!(out, "{:<6} {:<16} {:<16}", "tick", "P(down)", "P(up)");
    for n in 0..=ticks {
        let a = carrier
            .amplitudes_at(TimeStep(n))
            .expect("trace starts at the reference tick");
        let _ = writeln!(
            out,
            "{:<6} {:<16} {:<16}",
            n,
            fmt_sig12(a.prob_down()),
            fmt_sig12(a.prob_up())
        );
    }
    out
}
