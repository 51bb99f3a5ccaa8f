use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
    Csv,
    Bfile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    /// Exact coefficients as strings, index = power of x.
    Series { name: String, coeffs: Vec<String> },
    Table { columns: Vec<String>, rows: Vec<Vec<String>> },
    Checks { checks: Vec<Check> },
    Text { lines: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub payload: Payload,
    pub format: Format,
}

impl OutputRecord {
    pub fn new(command: &str, parameters: &[(&str, String)], payload: Payload, format: Format) -> Self {
        OutputRecord {
            command: command.to_string(),
            parameters: parameters.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            payload,
            format,
        }
    }

    pub fn failed(&self) -> bool {
        matches!(&self.payload, Payload::Checks { checks } if checks.iter().any(|c| !c.pass))
    }

    pub fn render(&self) -> Result<String, String> {
        match self.format {
            Format::Json => serde_json::to_string_pretty(self).map(|j| j + "\n").map_err(|e| e.to_string()),
            Format::Table => Ok(self.table()),
            Format::Csv => self.csv(),
            Format::Bfile => self.bfile(),
        }
    }

    fn header(&self) -> String {
        let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("# {} {}", self.command, params.join(" "))
    }

    fn columns_rows(&self) -> (Vec<String>, Vec<Vec<String>>) {
        match &self.payload {
            Payload::Series { coeffs, .. } => (
                vec!["n".into(), "a(n)".into()],
                coeffs.iter().enumerate().map(|(i, c)| vec![i.to_string(), c.clone()]).collect(),
            ),
            Payload::Table { columns, rows } => (columns.clone(), rows.clone()),
            Payload::Checks { checks } => (
                vec!["check".into(), "result".into(), "detail".into()],
                checks
                    .iter()
                    .map(|c| vec![c.name.clone(), if c.pass { "PASS" } else { "FAIL" }.into(), c.detail.clone()])
                    .collect(),
            ),
            Payload::Text { lines } => (vec!["line".into()], lines.iter().map(|l| vec![l.clone()]).collect()),
        }
    }

    fn table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.header()).ok();
        if let Payload::Series { name, coeffs } = &self.payload {
            writeln!(out, "{name}: {}", coeffs.join(", ")).ok();
            return out;
        }
        if let Payload::Text { lines } = &self.payload {
            for l in lines {
                writeln!(out, "{l}").ok();
            }
            return out;
        }
        let (cols, rows) = self.columns_rows();
        let mut width: Vec<usize> = cols.iter().map(String::len).collect();
        for r in &rows {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.len());
            }
        }
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&width)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        writeln!(out, "{}", line(&cols)).ok();
        for r in &rows {
            writeln!(out, "{}", line(r)).ok();
        }
        out
    }

    fn csv(&self) -> Result<String, String> {
        let (cols, rows) = self.columns_rows();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&cols).map_err(|e| e.to_string())?;
        for r in rows {
            w.write_record(&r).map_err(|e| e.to_string())?;
        }
        String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())
    }

    /// `n a(n)` pairs from the first nonzero coefficient on.
    fn bfile(&self) -> Result<String, String> {
        let pairs: Vec<(usize, String)> = match &self.payload {
            Payload::Series { coeffs, .. } => {
                let start = coeffs.iter().position(|c| c != "0").unwrap_or(coeffs.len());
                coeffs.iter().enumerate().skip(start).map(|(i, c)| (i, c.clone())).collect()
            }
            Payload::Table { columns, rows } if columns.len() >= 2 && columns[0] == "n" => rows
                .iter()
                .filter_map(|r| r[0].parse().ok().map(|n| (n, r[1].clone())))
                .collect(),
            _ => return Err(format!("{} output has no b-file form", self.command)),
        };
        let mut out = self.header();
        out.push('\n');
        for (n, a) in pairs {
            writeln!(out, "{n} {a}").ok();
        }
        Ok(out)
    }
}
