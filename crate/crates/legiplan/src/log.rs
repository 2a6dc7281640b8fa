//! Trajectory log CSV: `t,x,y,heading,v,omega,clearance`.
//!
//! `t` is written with six decimals, every other value with nine significant
//! digits. Headings are radians; clearance is obstacle distance minus the
//! robot radius.

use legiplan_core::{clearance, rollout_with_headings, Control, ExecutedStep, Obstacle, Point2, RobotState, Trajectory};

pub const HEADER: [&str; 7] = ["t", "x", "y", "heading", "v", "omega", "clearance"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRow {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    pub v: f64,
    pub omega: f64,
    pub clearance: f64,
}

impl From<&ExecutedStep> for LogRow {
    fn from(s: &ExecutedStep) -> Self {
        LogRow {
            t: s.t,
            x: s.position.x,
            y: s.position.y,
            heading: s.heading,
            v: s.v,
            omega: s.omega,
            clearance: s.clearance,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LogError {
    #[error("trajectory log: {0}")]
    Csv(#[from] csv::Error),
    #[error("trajectory log: expected header {expected:?}, found {found:?}")]
    Header { expected: String, found: String },
    #[error("trajectory log row {row}: {message}")]
    Row { row: usize, message: String },
}

/// Rows for a planned horizon: the start state followed by one row per
/// control.
pub fn plan_rows(robot: &RobotState, controls: &[Control], dt: f64, obstacles: &[Obstacle]) -> Vec<LogRow> {
    let (pts, headings) = rollout_with_headings(robot, controls, dt);
    pts.iter()
        .zip(&headings)
        .enumerate()
        .map(|(i, (p, h))| {
            let c = if i == 0 {
                Control::new(robot.speed, 0.0)
            } else {
                controls[i - 1]
            };
            LogRow {
                t: i as f64 * dt,
                x: p.x,
                y: p.y,
                heading: *h,
                v: c.v,
                omega: c.omega,
                clearance: clearance(*p, obstacles) - robot.radius,
            }
        })
        .collect()
}

/// Formats with nine significant digits, trailing zeros trimmed.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn write_log(rows: &[LogRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).expect("in-memory write");
    for r in rows {
        w.write_record([
            format!("{:.6}", r.t),
            format_sig9(r.x),
            format_sig9(r.y),
            format_sig9(r.heading),
            format_sig9(r.v),
            format_sig9(r.omega),
            format_sig9(r.clearance),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn read_log(text: &str) -> Result<Vec<LogRow>, LogError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers()?.clone();
    if header.iter().ne(HEADER) {
        return Err(LogError::Header {
            expected: HEADER.join(","),
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let mut vals = [0.0; 7];
        for (k, v) in vals.iter_mut().enumerate() {
            let field = rec.get(k).ok_or_else(|| LogError::Row {
                row: i + 1,
                message: format!("missing column {}", HEADER[k]),
            })?;
            *v = field.trim().parse().map_err(|_| LogError::Row {
                row: i + 1,
                message: format!("column {} is not a number: {field:?}", HEADER[k]),
            })?;
        }
        let row = LogRow {
            t: vals[0],
            x: vals[1],
            y: vals[2],
            heading: vals[3],
            v: vals[4],
            omega: vals[5],
            clearance: vals[6],
        };
        if let Some(prev) = rows.last().map(|r: &LogRow| r.t) {
            if !(row.t > prev) {
                return Err(LogError::Row {
                    row: i + 1,
                    message: "t must be strictly increasing".into(),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(LogError::Row {
            row: 0,
            message: "log has no rows".into(),
        });
    }
    Ok(rows)
}

/// Rebuilds the logged positions as a trajectory. `dt` defaults to the spacing
/// of the first two rows; a single-row log yields `[q, q]`.
pub fn rows_to_trajectory(rows: &[LogRow], dt: Option<f64>) -> Result<Trajectory, LogError> {
    let mut pts: Vec<Point2> = rows.iter().map(|r| Point2::new(r.x, r.y)).collect();
    if pts.len() == 1 {
        pts.push(pts[0]);
    }
    let dt = dt.unwrap_or_else(|| if rows.len() > 1 { rows[1].t - rows[0].t } else { 1.0 });
    Trajectory::new(pts, dt).map_err(|e| LogError::Row {
        row: 0,
        message: e.message,
    })
}
