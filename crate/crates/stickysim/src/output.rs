//! Sampled-trajectory CSV and hand-emitted SVG plots.

use std::fmt::Write as _;
use std::io::Write;

use stickysim_core::engine::{EventLog, Trajectory};
use stickysim_core::Scalar;

use crate::error::{Error, Result};

/// Sample times `0, step, 2·step, …` up to the horizon, which is always
/// included. `step` is taken in the trajectory's own backend.
pub fn sample_times<S: Scalar>(horizon: &S, step: &S) -> Result<Vec<S>> {
    if !step.is_positive() {
        return Err(Error::Usage("sample step must be positive".into()));
    }
    let mut times = Vec::new();
    let mut k = 0i64;
    loop {
        let t = step.clone() * S::from_int(k);
        if t >= *horizon {
            break;
        }
        times.push(t);
        k += 1;
        if k > 1_000_000 {
            return Err(Error::Usage("sample step yields more than 10^6 rows".into()));
        }
    }
    times.push(horizon.clone());
    Ok(times)
}

/// Rows `t, index, x_1, …, x_n` in floating point, one row per particle and
/// sample time.
pub fn write_samples_csv<S: Scalar, W: Write>(traj: &Trajectory<S>, times: &[S], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string(), "index".to_string()];
    header.extend((1..=traj.dimension()).map(|d| format!("x_{d}")));
    w.write_record(&header)?;
    for t in times {
        for i in 0..traj.len() {
            let mut row = vec![t.to_f64().to_string(), i.to_string()];
            row.extend(traj.position(i, t).to_f64().iter().map(f64::to_string));
            w.write_record(&row)?;
        }
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn fit(points: impl Iterator<Item = (f64, f64)>) -> Frame {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let pad = |lo: f64, hi: f64| {
            let span = if hi > lo { hi - lo } else { 1.0 };
            (lo - 0.05 * span, hi + 0.05 * span)
        };
        Frame {
            x: pad(x0, x1),
            y: pad(y0, y1),
        }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let sx = (x - self.x.0) / (self.x.1 - self.x.0);
        let sy = (y - self.y.0) / (self.y.1 - self.y.0);
        (
            MARGIN + sx * (WIDTH - 2.0 * MARGIN),
            HEIGHT - MARGIN - sy * (HEIGHT - 2.0 * MARGIN),
        )
    }
}

/// Plot of the trajectory: paths in the `x_1`–`x_2` plane for `n ≥ 2`
/// (higher coordinates are dropped), `x_1` against `t` for `n = 1`.
/// Initial positions are hollow circles, merge points filled ones.
pub fn render_svg<S: Scalar>(traj: &Trajectory<S>, log: &EventLog<S>) -> String {
    let planar = traj.dimension() >= 2;
    let project = |t: &S, p: &[f64]| -> (f64, f64) {
        if planar {
            (p[0], p[1])
        } else {
            (t.to_f64(), p[0])
        }
    };
    let breakpoints = traj.breakpoints();
    let polylines: Vec<Vec<(f64, f64)>> = (0..traj.len())
        .map(|i| {
            breakpoints
                .iter()
                .map(|t| project(t, &traj.position(i, t).to_f64()))
                .collect()
        })
        .collect();
    let merges: Vec<(f64, f64)> = log
        .clusters()
        .map(|(t, c)| project(t, &traj.position(c.members[0], t).to_f64()))
        .collect();
    let frame = Frame::fit(polylines.iter().flatten().copied());

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (ax0, ay0) = (MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M {ax0} {MARGIN} L {ax0} {ay0} L {} {ay0}" fill="none" stroke="black" stroke-width="1"/>"#,
        WIDTH - MARGIN
    );
    let (xl, yl) = if planar { ("x_1", "x_2") } else { ("t", "x") };
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle">{xl}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 14 {})">{yl}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for (value, anchor, (x, y)) in [
        (frame.x.0, "start", (MARGIN, HEIGHT - MARGIN + 16.0)),
        (frame.x.1, "end", (WIDTH - MARGIN, HEIGHT - MARGIN + 16.0)),
        (frame.y.0, "end", (MARGIN - 4.0, HEIGHT - MARGIN)),
        (frame.y.1, "end", (MARGIN - 4.0, MARGIN + 10.0)),
    ] {
        let _ = writeln!(
            svg,
            r#"<text x="{x:.1}" y="{y:.1}" font-family="sans-serif" font-size="10" text-anchor="{anchor}">{value:.3}</text>"#
        );
    }
    for (i, line) in polylines.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = line
            .iter()
            .map(|&p| {
                let (x, y) = frame.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            pts.join(" ")
        );
        let (x, y) = frame.map(line[0]);
        let _ = writeln!(
            svg,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="white" stroke="{color}" stroke-width="1.5"/>"#
        );
    }
    for &p in &merges {
        let (x, y) = frame.map(p);
        let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="black"/>"#);
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use stickysim_core::constructions::example2_scenario;
    use stickysim_core::engine::evolve;
    use stickysim_core::Rational;

    #[test]
    fn samples_include_horizon() {
        let t = sample_times(&Rational::from_ratio(5, 2), &Rational::from_int(1)).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t[3], Rational::from_ratio(5, 2));
        assert!(sample_times(&1.0, &0.0).is_err());
    }

    #[test]
    fn csv_has_one_row_per_particle_and_time() {
        let sc = example2_scenario(2.0f64).unwrap();
        let (traj, _) = evolve(&sc).unwrap();
        let mut buf = Vec::new();
        write_samples_csv(&traj, &[0.0, 1.0, 2.0], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,index,x_1,x_2");
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[6], "2,1,1.5,1.5");
    }

    #[test]
    fn svg_marks_the_merge() {
        let sc = example2_scenario(2.0f64).unwrap();
        let (traj, log) = evolve(&sc).unwrap();
        let svg = render_svg(&traj, &log);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches(r#"fill="black""#).count(), 1);
    }
}
