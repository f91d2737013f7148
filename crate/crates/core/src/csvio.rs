//! CSV emission and ingestion for sweep and simulation results.
//!
//! Numbers are written with 12 significant digits so output files are
//! schema-stable across runs and platforms.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::sweep::QBPoint;

/// Format with 12 significant digits, plain decimal where reasonable.
pub fn fmt_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..12).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // trim trailing zeros but keep at least one digit
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t.is_empty() || t == "-" {
            "0".into()
        } else {
            t.to_string()
        }
    } else {
        format!("{x:.11e}")
    }
}

fn parse_field(s: &str, line: usize) -> Result<f64> {
    match s {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        "nan" => Ok(f64::NAN),
        _ => s.parse().map_err(|_| Error::Parse {
            line,
            message: format!("expected a number, got '{s}'"),
        }),
    }
}

pub const QB_HEADER: &str = "tau,r_eff,theta,quality,burden,acc_rate,pareto";

pub fn write_qb_points<W: Write>(mut w: W, points: &[QBPoint]) -> Result<()> {
    writeln!(w, "{QB_HEADER}")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            fmt_sig12(p.tau),
            fmt_sig12(p.r_eff),
            fmt_sig12(p.theta),
            fmt_sig12(p.quality),
            fmt_sig12(p.burden),
            fmt_sig12(p.acc_rate),
            p.pareto
        )?;
    }
    Ok(())
}

pub fn read_qb_points<R: BufRead>(r: R) -> Result<Vec<QBPoint>> {
    let mut points = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if i == 0 || line == QB_HEADER {
            if line != QB_HEADER {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected header '{QB_HEADER}'"),
                });
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("expected 7 fields, got {}", fields.len()),
            });
        }
        points.push(QBPoint {
            tau: parse_field(fields[0], i + 1)?,
            r_eff: parse_field(fields[1], i + 1)?,
            theta: parse_field(fields[2], i + 1)?,
            quality: parse_field(fields[3], i + 1)?,
            burden: parse_field(fields[4], i + 1)?,
            acc_rate: parse_field(fields[5], i + 1)?,
            pareto: fields[6] == "true",
        });
    }
    Ok(points)
}
