//! Plot-data writers. Floats use `{:.16e}` (17 significant digits), which
//! round-trips every `f64`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::classifier::{ClassificationMap, Indicatrix, ParameterMap};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidParameter(format!("unknown format `{other}`"))),
        }
    }
}

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.16e}")
    }
}

/// `k,angle,det,label`, one row per cell, k-major.
pub fn map_csv(map: &ParameterMap) -> String {
    let mut out = String::from("k,angle,det,label\n");
    for c in &map.cells {
        let _ = writeln!(out, "{},{},{},{}", fmt_f64(c.k), fmt_f64(c.angle), fmt_f64(c.det), c.label);
    }
    out
}

/// `angle,k,width` for the bisected `det = 0` curve.
pub fn curve_csv(map: &ParameterMap) -> String {
    let mut out = String::from("angle,k,width\n");
    for p in &map.curve {
        let _ = writeln!(out, "{},{},{}", fmt_f64(p.angle), fmt_f64(p.k), fmt_f64(p.width));
    }
    out
}

/// `angle,sign,metric,q,det` per sample, then `#`-prefixed boundary lines
/// (`# boundary,kind,angle,lo,hi,width`), which gnuplot skips.
pub fn scan_csv(map: &ClassificationMap) -> String {
    let mut out = String::from("angle,sign,metric,q,det\n");
    for s in &map.samples {
        let sign = serde_json::to_value(s.label.sign).expect("enum serializes");
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(s.angle),
            sign.as_str().unwrap_or_default(),
            s.label.metric_state,
            fmt_f64(s.q),
            fmt_f64(s.det)
        );
    }
    for b in &map.boundaries {
        let kind = serde_json::to_value(b.kind).expect("enum serializes");
        let _ = writeln!(
            out,
            "# boundary,{},{},{},{},{}",
            kind.as_str().unwrap_or_default(),
            fmt_f64(b.angle),
            fmt_f64(b.lo),
            fmt_f64(b.hi),
            fmt_f64(b.width)
        );
    }
    let _ = writeln!(out, "# inventory {}", map.inventory);
    out
}

/// `x,y,angle,arc,convexity`; points outside every arc get an empty arc.
pub fn indicatrix_csv(ind: &Indicatrix) -> String {
    let mut out = String::from("x,y,angle,arc,convexity\n");
    for (i, p) in ind.points.iter().enumerate() {
        let arc = ind.arcs.iter().position(|a| a.start <= i && i <= a.end);
        let (a, c) = match arc {
            Some(j) => {
                let c = serde_json::to_value(ind.arcs[j].convexity).expect("enum serializes");
                (j.to_string(), c.as_str().unwrap_or_default().to_string())
            }
            None => (String::new(), String::new()),
        };
        let _ = writeln!(out, "{},{},{},{},{}", fmt_f64(p.p[0]), fmt_f64(p.p[1]), fmt_f64(p.angle), a, c);
    }
    if let Some(note) = &ind.note {
        let _ = writeln!(out, "# {note}");
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn emit_map(map: &ParameterMap, format: Format) -> Result<String> {
    if map.cells.is_empty() {
        return Err(Error::InvalidParameter("map is empty".into()));
    }
    match format {
        Format::Csv => Ok(map_csv(map)),
        Format::Json => to_json(map),
    }
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Family;
    use crate::classifier::parameter_map;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(f64::NAN), "nan");
    }

    #[test]
    fn map_csv_shape() {
        let m = parameter_map(Family::EuclidEuclid, (1.0, 50.0), (0.0, 3.0), (16, 20)).unwrap();
        let csv = emit_map(&m, Format::Csv).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "k,angle,det,label");
        assert_eq!(lines.len(), 1 + 16 * 20);
        assert!(lines[1].starts_with("1.0000000000000000e0,0.0000000000000000e0,"));
        assert!(matches!("json".parse::<Format>(), Ok(Format::Json)));
        assert!("xml".parse::<Format>().is_err());
    }
}
