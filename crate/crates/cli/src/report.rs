//! Count rows in table, CSV and JSON form.

use std::fmt::Write as _;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use tetra_census::{MeshCounts, MeshCounts2};

use crate::error::CliError;

pub const COUNT_COLUMNS: [&str; 14] = [
    "V", "E", "F", "T", "Vb", "Eb", "Fb", "chi", "chib", "ebar", "fbar", "tbar", "phibar",
    "thetabar",
];

/// One mesh's counts and averages. Triangle meshes leave the face columns
/// empty and put triangles under `T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountRow {
    #[serde(rename = "V")]
    pub v: i64,
    #[serde(rename = "E")]
    pub e: i64,
    #[serde(rename = "F")]
    pub f: Option<i64>,
    #[serde(rename = "T")]
    pub t: i64,
    #[serde(rename = "Vb")]
    pub vb: i64,
    #[serde(rename = "Eb")]
    pub eb: i64,
    #[serde(rename = "Fb")]
    pub fb: Option<i64>,
    pub chi: i64,
    pub chib: i64,
    pub ebar: Option<f64>,
    pub fbar: Option<f64>,
    pub tbar: Option<f64>,
    pub phibar: Option<f64>,
    pub thetabar: Option<f64>,
}

fn avg(num: i64, den: i64) -> Option<f64> {
    (den != 0).then(|| num as f64 / den as f64)
}

impl From<&MeshCounts> for CountRow {
    fn from(c: &MeshCounts) -> Self {
        CountRow {
            v: c.v,
            e: c.e,
            f: Some(c.f),
            t: c.t,
            vb: c.vb,
            eb: c.eb,
            fb: Some(c.fb),
            chi: c.chi(),
            chib: c.chi_b(),
            ebar: avg(2 * c.e, c.v),
            fbar: avg(3 * c.f, c.v),
            tbar: avg(4 * c.t, c.v),
            phibar: avg(3 * c.f, c.e),
            thetabar: avg(6 * c.t, c.e),
        }
    }
}

impl From<&MeshCounts2> for CountRow {
    fn from(c: &MeshCounts2) -> Self {
        CountRow {
            v: c.v,
            e: c.e,
            f: None,
            t: c.t,
            vb: c.vb,
            eb: c.eb,
            fb: None,
            chi: c.chi(),
            chib: c.chi_b(),
            ebar: avg(2 * c.e, c.v),
            fbar: None,
            tbar: avg(3 * c.t, c.v),
            phibar: None,
            thetabar: avg(3 * c.t, c.e),
        }
    }
}

/// Fixed-point decimal with `digits` significant digits.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64 + 1;
    let decimals = (digits as i64 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn opt_int(x: Option<i64>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

fn opt_avg(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| sig(v, 12))
}

impl CountRow {
    pub fn fields(&self) -> Vec<String> {
        vec![
            self.v.to_string(),
            self.e.to_string(),
            opt_int(self.f),
            self.t.to_string(),
            self.vb.to_string(),
            self.eb.to_string(),
            opt_int(self.fb),
            self.chi.to_string(),
            self.chib.to_string(),
            opt_avg(self.ebar),
            opt_avg(self.fbar),
            opt_avg(self.tbar),
            opt_avg(self.phibar),
            opt_avg(self.thetabar),
        ]
    }

    fn parse(fields: &[&str]) -> Result<Self, CliError> {
        let bad = |s: &str| CliError::Format(format!("invalid CSV field `{s}`"));
        let int = |s: &str| s.parse::<i64>().map_err(|_| bad(s));
        let opt_int = |s: &str| {
            if s.is_empty() {
                Ok(None)
            } else {
                int(s).map(Some)
            }
        };
        let opt_f = |s: &str| {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse::<f64>().map(Some).map_err(|_| bad(s))
            }
        };
        if fields.len() != COUNT_COLUMNS.len() {
            return Err(CliError::Format(format!(
                "expected {} CSV fields, found {}",
                COUNT_COLUMNS.len(),
                fields.len()
            )));
        }
        Ok(CountRow {
            v: int(fields[0])?,
            e: int(fields[1])?,
            f: opt_int(fields[2])?,
            t: int(fields[3])?,
            vb: int(fields[4])?,
            eb: int(fields[5])?,
            fb: opt_int(fields[6])?,
            chi: int(fields[7])?,
            chib: int(fields[8])?,
            ebar: opt_f(fields[9])?,
            fbar: opt_f(fields[10])?,
            tbar: opt_f(fields[11])?,
            phibar: opt_f(fields[12])?,
            thetabar: opt_f(fields[13])?,
        })
    }

    pub fn to_csv(&self) -> String {
        format!("{}\n{}\n", COUNT_COLUMNS.join(","), self.fields().join(","))
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for (k, v) in COUNT_COLUMNS.iter().zip(self.fields()) {
            if !v.is_empty() {
                let _ = writeln!(out, "{k:<9}{v}");
            }
        }
        out
    }
}

/// Parses the first block of a count CSV back into a row.
pub fn parse_count_csv(text: &str) -> Result<CountRow, CliError> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != COUNT_COLUMNS.join(",") {
        return Err(CliError::Format(format!(
            "unexpected CSV header `{header}`"
        )));
    }
    let row = lines
        .next()
        .ok_or_else(|| CliError::Format("CSV has no data row".into()))?;
    CountRow::parse(&row.split(',').collect::<Vec<_>>())
}

/// Refinement trajectory, one row per level.
pub fn series_csv(rows: &[CountRow]) -> String {
    let mut out = format!("level,{}\n", COUNT_COLUMNS.join(","));
    for (level, r) in rows.iter().enumerate() {
        let _ = writeln!(out, "{level},{}", r.fields().join(","));
    }
    out
}

pub fn parse_series_csv(text: &str) -> Result<Vec<CountRow>, CliError> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != format!("level,{}", COUNT_COLUMNS.join(",")) {
        return Err(CliError::Format(format!(
            "unexpected CSV header `{header}`"
        )));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.first().and_then(|l| l.parse::<usize>().ok()) != Some(i) {
                return Err(CliError::Format(format!("row {i} has the wrong level")));
            }
            CountRow::parse(&fields[1..])
        })
        .collect()
}

/// Exact rational as an integer, a terminating decimal, or `p/q`.
pub fn rational(x: Rational64) -> String {
    if x.is_integer() {
        return x.numer().to_string();
    }
    let mut d = *x.denom();
    let mut places = 0;
    while d % 2 == 0 || d % 5 == 0 {
        d /= if d % 2 == 0 { 2 } else { 5 };
        places += 1;
    }
    if d == 1 && places <= 6 {
        format!("{:.places$}", *x.numer() as f64 / *x.denom() as f64)
    } else {
        x.to_string()
    }
}

/// Accepts `14`, `28/3` or a terminating decimal such as `13.5`.
pub fn parse_rational(s: &str) -> Result<Rational64, CliError> {
    let bad = || CliError::Usage(format!("invalid rational `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(p, q));
    }
    let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let negative = whole.starts_with('-');
    let w: i64 = if whole.is_empty() || whole == "-" {
        0
    } else {
        whole.parse().map_err(|_| bad())?
    };
    let scale = 10i64.pow(frac.len() as u32);
    let f: i64 = if frac.is_empty() {
        0
    } else {
        frac.parse().map_err(|_| bad())?
    };
    let f = if negative { -f } else { f };
    Ok(Rational64::new(w * scale + f, scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(1115.0 * 2.0 / 216.0, 12), "10.3240740741");
        assert_eq!(sig(14.0, 12), "14.0000000000");
        assert_eq!(sig(0.5, 12), "0.500000000000");
        assert_eq!(sig(123456.0, 3), "123456");
    }

    #[test]
    fn csv_round_trip() {
        let c = MeshCounts::new(216, 1115, 1650, 750, 152, 450, 300);
        let row = CountRow::from(&c);
        let back = parse_count_csv(&row.to_csv()).unwrap();
        assert_eq!(
            (back.v, back.e, back.f, back.t),
            (216, 1115, Some(1650), 750)
        );
        assert!((back.ebar.unwrap() - 1115.0 / 108.0).abs() < 1e-10);
        assert_eq!(back.to_csv(), row.to_csv());
    }

    #[test]
    fn rationals() {
        assert_eq!(rational(Rational64::new(9, 2)), "4.5");
        assert_eq!(rational(Rational64::new(28, 3)), "28/3");
        assert_eq!(rational(Rational64::from_integer(-6)), "-6");
        assert_eq!(parse_rational("14").unwrap(), Rational64::from_integer(14));
        assert_eq!(parse_rational("13.25").unwrap(), Rational64::new(53, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), Rational64::new(-1, 2));
        assert_eq!(parse_rational("28/3").unwrap(), Rational64::new(28, 3));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
