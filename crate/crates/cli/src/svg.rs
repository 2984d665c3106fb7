//! Minimal hand-rolled SVG plots: no styling dependencies, fixed canvas,
//! deterministic output.

use std::fmt::Write as _;

use chronospin_core::spin::SpinCarrier;
use chronospin_core::timebase::TimeStep;
use chronospin_core::{qm_correlation, Axis, Quantity, SingletReport, SpinZ};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 56.0;
const RIGHT: f64 = 616.0;
const TOP: f64 = 28.0;
const BOTTOM: f64 = 360.0;

const BLUE: &str = "#4a7dbf";
const ORANGE: &str = "#d0822a";
const GREY: &str = "#cfcfcf";

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn sx(&self, x: f64) -> f64 {
        LEFT + (x - self.x_min) / (self.x_max - self.x_min) * (RIGHT - LEFT)
    }

    fn sy(&self, y: f64) -> f64 {
        BOTTOM - (y - self.y_min) / (self.y_max - self.y_min) * (BOTTOM - TOP)
    }
}

fn open_canvas(title: &str) -> String {
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    let _ = writeln!(
        out,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"16\" text-anchor=\"middle\">{title}</text>",
        (LEFT + RIGHT) / 2.0
    );
    out
}

fn grid_line(out: &mut String, x1: f64, y1: f64, x2: f64, y2: f64) {
    let _ = writeln!(
        out,
        "<line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" \
         stroke=\"{GREY}\" stroke-width=\"1\"/>"
    );
}

fn polyline(out: &mut String, points: &[(f64, f64)], color: &str, dashed: bool) {
    let coords: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{x:.1},{y:.1}"))
        .collect();
    let dash = if dashed {
        " stroke-dasharray=\"6 3\""
    } else {
        ""
    };
    let _ = writeln!(
        out,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash}/>",
        coords.join(" ")
    );
}

fn label(out: &mut String, x: f64, y: f64, anchor: &str, text: &str) {
    let _ = writeln!(
        out,
        "<text x=\"{x:.1}\" y=\"{y:.1}\" text-anchor=\"{anchor}\">{text}</text>"
    );
}

/// Occupation probabilities of one carrier against time: the continuous
/// oscillation as curves, the on-grid readout values as markers.
pub fn trace_svg(start: SpinZ, ticks: u64) -> String {
    let frame = Frame {
        x_min: 0.0,
        x_max: ticks.max(1) as f64,
        y_min: 0.0,
        y_max: 1.0,
    };
    let carrier = SpinCarrier::new(start, TimeStep(0));
    let mut out = open_canvas(&format!("carrier trace, start={start}"));

    for n in 0..=ticks {
        grid_line(
            &mut out,
            frame.sx(n as f64),
            TOP,
            frame.sx(n as f64),
            BOTTOM,
        );
        label(
            &mut out,
            frame.sx(n as f64),
            BOTTOM + 16.0,
            "middle",
            &n.to_string(),
        );
    }
    for k in 0..=4 {
        let y = k as f64 * 0.25;
        grid_line(&mut out, LEFT, frame.sy(y), RIGHT, frame.sy(y));
        label(
            &mut out,
            LEFT - 6.0,
            frame.sy(y) + 4.0,
            "end",
            &format!("{y:.2}"),
        );
    }

    let samples = (ticks.max(1) * 24) as usize;
    let mut down = Vec::with_capacity(samples + 1);
    let mut up = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        let t = frame.x_max * i as f64 / samples as f64;
        let a = carrier.amplitudes_after(t);
        down.push((frame.sx(t), frame.sy(a.prob_down())));
        up.push((frame.sx(t), frame.sy(a.prob_up())));
    }
    polyline(&mut out, &down, BLUE, false);
    polyline(&mut out, &up, ORANGE, true);

    for n in 0..=ticks {
        let a = carrier
            .amplitudes_at(TimeStep(n))
            .expect("trace starts at the reference tick");
        let _ = writeln!(
            out,
            "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3.5\" fill=\"{BLUE}\"/>",
            frame.sx(n as f64),
            frame.sy(a.prob_down())
        );
        let _ = writeln!(
            out,
            "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3.5\" fill=\"{ORANGE}\"/>",
            frame.sx(n as f64),
            frame.sy(a.prob_up())
        );
    }

    label(
        &mut out,
        (LEFT + RIGHT) / 2.0,
        HEIGHT - 6.0,
        "middle",
        "tick",
    );
    label(
        &mut out,
        LEFT,
        TOP - 8.0,
        "start",
        "P(down) solid, P(up) dashed",
    );
    out.push_str("</svg>\n");
    out
}

/// Estimated correlations per relative angle over the reference curve
/// -cos(angle), with one-standard-error bars.
pub fn correlation_svg(legs: &[SingletReport]) -> String {
    let angles: Vec<f64> = legs.iter().map(|l| l.angle).collect();
    let lo = angles.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = angles.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let pad = ((hi - lo) * 0.05).max(0.2);
    let frame = Frame {
        x_min: lo - pad,
        x_max: hi + pad,
        y_min: -1.1,
        y_max: 1.1,
    };
    let mut out = open_canvas("pair correlation against the reference -cos(angle)");

    for k in -2..=2 {
        let y = k as f64 * 0.5;
        grid_line(&mut out, LEFT, frame.sy(y), RIGHT, frame.sy(y));
        label(
            &mut out,
            LEFT - 6.0,
            frame.sy(y) + 4.0,
            "end",
            &format!("{y:.1}"),
        );
    }
    let quarter = std::f64::consts::FRAC_PI_4;
    let mut k = (frame.x_min / quarter).ceil() as i64;
    while (k as f64) * quarter <= frame.x_max {
        let x = k as f64 * quarter;
        grid_line(&mut out, frame.sx(x), TOP, frame.sx(x), BOTTOM);
        let name = match k {
            0 => "0".to_string(),
            1 => "pi/4".to_string(),
            2 => "pi/2".to_string(),
            4 => "pi".to_string(),
            _ => format!("{k}pi/4"),
        };
        label(&mut out, frame.sx(x), BOTTOM + 16.0, "middle", &name);
        k += 1;
    }

    let mut curve = Vec::with_capacity(257);
    for i in 0..=256 {
        let x = frame.x_min + (frame.x_max - frame.x_min) * i as f64 / 256.0;
        curve.push((frame.sx(x), frame.sy(qm_correlation(Axis(x)))));
    }
    polyline(&mut out, &curve, GREY, false);

    for leg in legs {
        let Some(row) = leg.row(Quantity::Correlation) else {
            continue;
        };
        let x = frame.sx(leg.angle);
        let _ = writeln!(
            out,
            "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" \
             stroke=\"{BLUE}\" stroke-width=\"1.5\"/>",
            frame.sy(row.estimate - row.std_error),
            frame.sy(row.estimate + row.std_error),
        );
        let _ = writeln!(
            out,
            "<circle cx=\"{x:.1}\" cy=\"{:.1}\" r=\"3.5\" fill=\"{BLUE}\"/>",
            frame.sy(row.estimate)
        );
    }

    label(
        &mut out,
        (LEFT + RIGHT) / 2.0,
        HEIGHT - 6.0,
        "middle",
        "relative angle (rad)",
    );
    label(
        &mut out,
        LEFT,
        TOP - 8.0,
        "start",
        "points: simulated E, bars: 1 sigma",
    );
    out.push_str("</svg>\n");
    out
}
